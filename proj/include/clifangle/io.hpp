#pragma once

// Input/output formats, the seeded pair generator, and the evaluation glue
// shared by the CLI subcommands.
//
// Pair file (UTF-8 JSON):
//   {"n": 4, "A": [[...n numbers], ...], "B": [[...], ...], "planted": [...]}
// "planted" is optional metadata written by the generator.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "clifangle/blade.hpp"
#include "clifangle/errors.hpp"
#include "clifangle/orientation.hpp"
#include "clifangle/principal_oracle.hpp"

namespace clifangle::io {

struct SubspacePairSpec {
  int n = 0;
  std::vector<RealVector> a_span;
  std::vector<RealVector> b_span;
  std::optional<std::vector<double>> planted;

  SpanningSet a() const { return {n, a_span}; }
  SpanningSet b() const { return {n, b_span}; }
  bool operator==(const SubspacePairSpec&) const = default;
};

// Throws Error(ParseError) on malformed input. Spans of different length are
// accepted here and rejected later as GradeMismatch.
SubspacePairSpec parse_pair(std::string_view text);
SubspacePairSpec load_pair(const std::filesystem::path& path);
std::string render_pair(const SubspacePairSpec& spec);

// Exit codes of the command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitToleranceBreach = 1,
  kExitInvalidInput = 2,
  kExitDegenerate = 3,
  kExitGradeMismatch = 4,
  kExitNumerical = 5,
};

int exit_code_for(ErrorKind kind);
nlohmann::json error_json(ErrorKind kind, std::string_view message,
                          std::optional<std::string> file = std::nullopt);

// ---- generator -----------------------------------------------------------

// Deterministic across platforms: uniform doubles come from the top 53 bits
// of mt19937_64 and normals from Box-Muller.
class PairRng {
 public:
  explicit PairRng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  double normal();
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct GeneratorOptions {
  int n = 4;
  int r = 2;
  int count = 1;
  std::uint64_t seed = 0;
  // Angles to plant. Shorter than r: the remaining principal angles are 0.
  std::optional<std::vector<double>> planted;
};

// Throws InvalidArgument for r > n, bad counts, angles outside [0, pi/2], or
// more nonzero planted angles than n - r fresh directions.
void validate(const GeneratorOptions& options);

// Random pair: Gaussian spanning vectors. Planted pair: an orthonormal frame
// for A; B rotates the k-th frame vector by theta_k towards a fresh
// orthogonal direction; both spans are then mixed by random invertible
// matrices.
SubspacePairSpec generate_pair(PairRng& rng, const GeneratorOptions& options);
std::vector<SubspacePairSpec> generate_pairs(const GeneratorOptions& options);

// ---- evaluation ----------------------------------------------------------

struct Timings {
  double clifford_seconds = 0.0;
  std::optional<double> oracle_seconds;
};

struct PairResult {
  AngleReport clifford;
  std::optional<oracle::PrincipalData> oracle;
  std::optional<double> agreement;  // max per-angle deviation, sorted lists
  Timings timings;
};

double max_angle_deviation(const AngleReport& report, const oracle::PrincipalData& data);

PairResult evaluate(const SubspacePairSpec& spec, bool with_oracle, const Tolerances& tol = {});

nlohmann::json multivector_json(const Multivector& m);
nlohmann::json report_json(const SubspacePairSpec& spec, const PairResult& result,
                           std::optional<std::string> source = std::nullopt);
std::string report_text(const SubspacePairSpec& spec, const PairResult& result);

// ---- subcommands ---------------------------------------------------------

enum class Format { json, text };

struct AngleCommand {
  std::string input;  // "-" reads standard input
  bool oracle = false;
  Format format = Format::json;
  std::optional<std::string> output;
  double tol_angle = Tolerances{}.angle;
};

struct GenerateCommand {
  GeneratorOptions options;
  // Directory for pair_NNNNN.json files; absent writes JSON lines to `out`.
  std::optional<std::string> output_dir;
};

struct CheckCommand {
  std::string directory;
  double tol = 1e-7;
  Format format = Format::text;
};

int run_angle(const AngleCommand& cmd, std::ostream& out, std::ostream& err);
int run_generate(const GenerateCommand& cmd, std::ostream& out, std::ostream& err);
int run_check(const CheckCommand& cmd, std::ostream& out, std::ostream& err);

// "0.5,1.0" or "pi/3,0" style lists; accepts plain numbers and "pi/k".
std::vector<double> parse_angle_list(std::string_view text);

}  // namespace clifangle::io
