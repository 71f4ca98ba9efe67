#include "clifangle/io.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

namespace clifangle::io {
namespace {

using json = nlohmann::json;

[[noreturn]] void parse_fail(const std::string& message) {
  throw Error(ErrorKind::ParseError, message);
}

std::vector<RealVector> parse_span(const json& doc, const char* key, int n) {
  if (!doc.contains(key)) parse_fail(std::string("missing key \"") + key + "\"");
  const json& span = doc.at(key);
  if (!span.is_array() || span.empty())
    parse_fail(std::string("\"") + key + "\" must be a nonempty array of vectors");
  if (span.size() > static_cast<std::size_t>(n))
    parse_fail(std::string("\"") + key + "\" has more vectors than n");
  std::vector<RealVector> out;
  for (const json& vec : span) {
    if (!vec.is_array() || vec.size() != static_cast<std::size_t>(n))
      parse_fail(std::string("every vector in \"") + key + "\" must have n entries");
    RealVector v;
    for (const json& x : vec) {
      if (!x.is_number()) parse_fail(std::string("non-numeric entry in \"") + key + "\"");
      v.push_back(x.get<double>());
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Spanned volume relative to largest^r; near zero for nearly dependent sets.
double conditioning(const std::vector<RealVector>& vectors) {
  try {
    const OrthogonalFactorization f = orthogonal_factorization(vectors, 1e-12);
    double largest = 0.0;
    for (const RealVector& v : vectors) {
      double sq = 0.0;
      for (double x : v) sq += x * x;
      largest = std::max(largest, std::sqrt(sq));
    }
    return f.magnitude / std::pow(largest, static_cast<double>(vectors.size()));
  } catch (const Error&) {
    return 0.0;
  }
}

std::vector<RealVector> gaussian_vectors(PairRng& rng, int count, int n) {
  std::vector<RealVector> out(count, RealVector(n));
  for (RealVector& v : out)
    for (double& x : v) x = rng.normal();
  return out;
}

// Random invertible recombination: out_j = sum_k mix[j][k] in_k.
std::vector<RealVector> recombine(PairRng& rng, const std::vector<RealVector>& in) {
  const int r = static_cast<int>(in.size());
  std::vector<RealVector> mix;
  do {
    mix = gaussian_vectors(rng, r, r);
  } while (conditioning(mix) < 1e-2);
  std::vector<RealVector> out(r, RealVector(in.front().size(), 0.0));
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < r; ++k)
      for (std::size_t i = 0; i < in[k].size(); ++i) out[j][i] += mix[j][k] * in[k][i];
  return out;
}

std::string format_number(double x, int precision = 10) {
  std::ostringstream os;
  os << std::setprecision(precision) << x;
  return os.str();
}

json angles_json(const std::vector<double>& angles) {
  json out = json::array();
  for (double a : angles) out.push_back(a);
  return out;
}

json degrees_json(const std::vector<double>& angles) {
  json out = json::array();
  for (double a : angles) out.push_back(a * 180.0 / std::numbers::pi);
  return out;
}

json vectors_json(const std::vector<RealVector>& vectors) {
  json out = json::array();
  for (const RealVector& v : vectors) out.push_back(v);
  return out;
}

void write_error(std::ostream& err, ErrorKind kind, std::string_view message,
                 std::optional<std::string> file = std::nullopt) {
  err << error_json(kind, message, std::move(file)).dump() << '\n';
}

std::string read_all(std::istream& in) {
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

// ---- parsing -------------------------------------------------------------

SubspacePairSpec parse_pair(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("pair document must be a JSON object");
  if (!doc.contains("n") || !doc.at("n").is_number_integer())
    parse_fail("\"n\" must be an integer");
  SubspacePairSpec spec;
  spec.n = doc.at("n").get<int>();
  if (spec.n < 1 || spec.n > kMaxDim) parse_fail("\"n\" must be in [1, 16]");
  spec.a_span = parse_span(doc, "A", spec.n);
  spec.b_span = parse_span(doc, "B", spec.n);
  if (doc.contains("planted")) {
    const json& planted = doc.at("planted");
    if (!planted.is_array()) parse_fail("\"planted\" must be an array of numbers");
    std::vector<double> angles;
    for (const json& x : planted) {
      if (!x.is_number()) parse_fail("\"planted\" must be an array of numbers");
      angles.push_back(x.get<double>());
    }
    spec.planted = std::move(angles);
  }
  return spec;
}

SubspacePairSpec load_pair(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open " + path.string());
  return parse_pair(read_all(in));
}

std::string render_pair(const SubspacePairSpec& spec) {
  json doc;
  doc["n"] = spec.n;
  doc["A"] = vectors_json(spec.a_span);
  doc["B"] = vectors_json(spec.b_span);
  if (spec.planted) doc["planted"] = *spec.planted;
  return doc.dump();
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
      return kExitInvalidInput;
    case ErrorKind::DegenerateSpan:
    case ErrorKind::RankDeficient:
    case ErrorKind::ZeroBlade:
      return kExitDegenerate;
    case ErrorKind::GradeMismatch:
      return kExitGradeMismatch;
    case ErrorKind::NumericalFailure:
    case ErrorKind::SplitFailure:
      return kExitNumerical;
  }
  return kExitInvalidInput;
}

json error_json(ErrorKind kind, std::string_view message, std::optional<std::string> file) {
  json body;
  body["kind"] = std::string(to_string(kind));
  body["message"] = std::string(message);
  body["exit_code"] = exit_code_for(kind);
  if (file) body["file"] = *file;
  return json{{"error", body}};
}

// ---- generator -----------------------------------------------------------

double PairRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double PairRng::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  double u1 = 0.0;
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double phase = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(phase);
  return radius * std::cos(phase);
}

void validate(const GeneratorOptions& options) {
  if (options.n < 1 || options.n > kMaxDim)
    throw Error(ErrorKind::InvalidArgument, "n must be in [1, 16]");
  if (options.r < 1 || options.r > options.n)
    throw Error(ErrorKind::InvalidArgument, "r must be in [1, n]");
  if (options.count < 1) throw Error(ErrorKind::InvalidArgument, "count must be positive");
  if (!options.planted) return;
  const auto& angles = *options.planted;
  if (angles.size() > static_cast<std::size_t>(options.r))
    throw Error(ErrorKind::InvalidArgument, "more planted angles than r");
  int rotated = 0;
  for (double theta : angles) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0 + 1e-15))
      throw Error(ErrorKind::InvalidArgument, "planted angles must lie in [0, pi/2]");
    if (theta > 0.0) ++rotated;
  }
  if (rotated > options.n - options.r)
    throw Error(ErrorKind::InvalidArgument,
                "planting " + std::to_string(rotated) + " nonzero angles needs n >= r + " +
                    std::to_string(rotated));
}

SubspacePairSpec generate_pair(PairRng& rng, const GeneratorOptions& options) {
  const int n = options.n;
  const int r = options.r;
  SubspacePairSpec spec;
  spec.n = n;

  if (!options.planted) {
    do {
      spec.a_span = gaussian_vectors(rng, r, n);
    } while (conditioning(spec.a_span) < 1e-3);
    do {
      spec.b_span = gaussian_vectors(rng, r, n);
    } while (conditioning(spec.b_span) < 1e-3);
    return spec;
  }

  std::vector<double> angles = *options.planted;
  angles.resize(r, 0.0);
  std::vector<RealVector> frame;
  for (;;) {
    try {
      frame = orthogonal_factorization(gaussian_vectors(rng, n, n), 1e-8).factors;
      break;
    } catch (const Error&) {
    }
  }
  std::vector<RealVector> a_basis(frame.begin(), frame.begin() + r);
  std::vector<RealVector> b_basis;
  int fresh = r;
  for (int k = 0; k < r; ++k) {
    const double theta = angles[k];
    if (theta == 0.0) {
      b_basis.push_back(a_basis[k]);
      continue;
    }
    RealVector b(n);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (int i = 0; i < n; ++i) b[i] = c * a_basis[k][i] + s * frame[fresh][i];
    ++fresh;
    b_basis.push_back(std::move(b));
  }
  spec.a_span = recombine(rng, a_basis);
  spec.b_span = recombine(rng, b_basis);
  spec.planted = *options.planted;
  return spec;
}

std::vector<SubspacePairSpec> generate_pairs(const GeneratorOptions& options) {
  validate(options);
  PairRng rng(options.seed);
  std::vector<SubspacePairSpec> out;
  out.reserve(options.count);
  for (int i = 0; i < options.count; ++i) out.push_back(generate_pair(rng, options));
  return out;
}

// ---- evaluation ----------------------------------------------------------

double max_angle_deviation(const AngleReport& report, const oracle::PrincipalData& data) {
  std::vector<double> lhs = report.principal_angles;
  std::vector<double> rhs = data.angles;
  if (lhs.size() != rhs.size())
    throw Error(ErrorKind::NumericalFailure, "angle lists differ in length");
  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  double worst = 0.0;
  for (std::size_t k = 0; k < lhs.size(); ++k) worst = std::max(worst, std::abs(lhs[k] - rhs[k]));
  return worst;
}

PairResult evaluate(const SubspacePairSpec& spec, bool with_oracle, const Tolerances& tol) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const Blade a = blade_from_spanning(spec.a());
  const Blade b = blade_from_spanning(spec.b());
  PairResult result{full_orientation(a, b, tol), std::nullopt, std::nullopt, {}};
  result.timings.clifford_seconds = std::chrono::duration<double>(clock::now() - start).count();
  if (with_oracle) {
    const auto oracle_start = clock::now();
    result.oracle = oracle::principal_angles(spec.a(), spec.b());
    result.timings.oracle_seconds =
        std::chrono::duration<double>(clock::now() - oracle_start).count();
    result.agreement = max_angle_deviation(result.clifford, *result.oracle);
  }
  return result;
}

json multivector_json(const Multivector& m) {
  json terms = json::array();
  const auto c = m.coeffs();
  for (int k = 0; k <= m.dim(); ++k)
    for (BasisBlade bits = 0; bits < c.size(); ++bits) {
      if (grade_of(bits) != k || c[bits] == 0.0) continue;
      json blade = json::array();
      for (int i = 0; i < m.dim(); ++i)
        if (bits & (BasisBlade{1} << i)) blade.push_back(i + 1);
      terms.push_back(json{{"blade", blade}, {"coeff", c[bits]}});
    }
  return terms;
}

json report_json(const SubspacePairSpec& spec, const PairResult& result,
                 std::optional<std::string> source) {
  const AngleReport& rep = result.clifford;
  json doc;
  json input{{"n", spec.n}, {"r", rep.r}};
  if (source) input["source"] = *source;
  if (spec.planted) input["planted"] = *spec.planted;
  doc["input"] = input;

  json planes = json::array();
  for (const auto& rp : rep.rotation_planes)
    planes.push_back(json{{"angle", rp.angle}, {"tangent", rp.tangent},
                          {"plane", multivector_json(rp.plane)}});
  json principal = json::array();
  for (const Multivector& p : rep.principal_planes) principal.push_back(multivector_json(p));

  const auto& res = rep.residuals;
  doc["clifford"] = json{
      {"cos_total", rep.cos_total},
      {"sin_product_abs", rep.sin_product_abs},
      {"s_intersection", rep.s_intersection},
      {"t_perpendicular", rep.t_perpendicular},
      {"principal_angles", angles_json(rep.principal_angles)},
      {"principal_angles_deg", degrees_json(rep.principal_angles)},
      {"rotation_planes", planes},
      {"principal_planes", principal},
      {"perpendicular_blade", multivector_json(rep.perpendicular_blade)},
      {"grade_counts", json{{"s", rep.grade_s}, {"t", rep.grade_t}}},
      {"grade_norms", rep.grade_norms},
      {"residuals",
       json{{"odd_grade_leakage", res.odd_grade_leakage},
            {"excess_grade_leakage", res.excess_grade_leakage},
            {"lowest_grade_blade", res.lowest_grade_blade},
            {"split", res.split},
            {"reconstruction", res.reconstruction},
            {"cos_consistency", res.cos_consistency},
            {"sin_consistency", res.sin_consistency},
            {"top_grade_sign", res.top_grade_sign},
            {"sin_formula_available", res.sin_formula_available}}},
  };
  if (result.oracle) {
    const auto& o = *result.oracle;
    doc["oracle"] = json{{"angles", angles_json(o.angles)},
                         {"angles_deg", degrees_json(o.angles)},
                         {"cosines", o.cosines},
                         {"a_vectors", vectors_json(o.a_vectors)},
                         {"b_vectors", vectors_json(o.b_vectors)}};
  }
  if (result.agreement) doc["agreement"] = json{{"max_angle_deviation", *result.agreement}};
  json timings{{"clifford_seconds", result.timings.clifford_seconds}};
  if (result.timings.oracle_seconds) timings["oracle_seconds"] = *result.timings.oracle_seconds;
  doc["timings"] = timings;
  return doc;
}

std::string report_text(const SubspacePairSpec& spec, const PairResult& result) {
  const AngleReport& rep = result.clifford;
  std::ostringstream os;
  os << "subspaces of dimension " << rep.r << " in R^" << spec.n << "\n";
  os << "cos(total angle)   " << format_number(rep.cos_total) << "\n";
  os << "|sin product|      " << format_number(rep.sin_product_abs) << "\n";
  os << "intersection s     " << rep.s_intersection << "\n";
  os << "perpendicular t    " << rep.t_perpendicular << "\n";
  os << "\n  k   angle [rad]        angle [deg]";
  if (result.oracle) os << "        oracle [rad]";
  os << "\n";
  std::vector<double> oracle_sorted;
  if (result.oracle) {
    oracle_sorted = result.oracle->angles;
    std::sort(oracle_sorted.begin(), oracle_sorted.end(), std::greater<>());
  }
  for (std::size_t k = 0; k < rep.principal_angles.size(); ++k) {
    const double theta = rep.principal_angles[k];
    os << std::setw(3) << (k + 1) << "   " << std::left << std::setw(18) << format_number(theta, 12)
       << " " << std::setw(18) << format_number(theta * 180.0 / std::numbers::pi, 12);
    if (result.oracle) os << " " << std::setw(18) << format_number(oracle_sorted[k], 12);
    os << std::right << "\n";
  }
  if (result.agreement) os << "\nmax deviation from oracle " << format_number(*result.agreement, 3) << "\n";
  os << "reconstruction residual   " << format_number(rep.residuals.reconstruction, 3) << "\n";
  return os.str();
}

// ---- subcommands ---------------------------------------------------------

int run_angle(const AngleCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    SubspacePairSpec spec;
    if (cmd.input == "-") {
      spec = parse_pair(read_all(std::cin));
    } else {
      spec = load_pair(cmd.input);
    }
    Tolerances tol;
    tol.angle = cmd.tol_angle;
    const PairResult result = evaluate(spec, cmd.oracle, tol);
    const std::string rendered = cmd.format == Format::json
                                     ? report_json(spec, result, cmd.input).dump(2) + "\n"
                                     : report_text(spec, result);
    if (cmd.output) {
      std::ofstream file(*cmd.output, std::ios::binary);
      if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write " + *cmd.output);
      file << rendered;
    } else {
      out << rendered;
    }
    return kExitOk;
  } catch (const Error& e) {
    write_error(err, e.kind(), e.what(), cmd.input);
    return exit_code_for(e.kind());
  }
}

int run_generate(const GenerateCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    const std::vector<SubspacePairSpec> pairs = generate_pairs(cmd.options);
    if (!cmd.output_dir) {
      for (const SubspacePairSpec& p : pairs) out << render_pair(p) << '\n';
      return kExitOk;
    }
    const std::filesystem::path dir(*cmd.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::InvalidArgument, "cannot create " + dir.string());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      std::ostringstream name;
      name << "pair_" << std::setw(5) << std::setfill('0') << i << ".json";
      std::ofstream file(dir / name.str(), std::ios::binary);
      if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write " + (dir / name.str()).string());
      file << render_pair(pairs[i]) << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    write_error(err, e.kind(), e.what());
    return kExitInvalidInput;
  }
}

int run_check(const CheckCommand& cmd, std::ostream& out, std::ostream& err) {
  const std::filesystem::path dir(cmd.directory);
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    write_error(err, ErrorKind::InvalidArgument, "not a directory: " + dir.string());
    return kExitInvalidInput;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    write_error(err, ErrorKind::InvalidArgument, "no inputs in " + dir.string());
    return kExitInvalidInput;
  }

  json rows = json::array();
  std::ostringstream table;
  double worst = 0.0;
  int first_error = kExitOk;
  int breaches = 0;
  for (const auto& path : files) {
    const std::string name = path.filename().string();
    try {
      const SubspacePairSpec spec = load_pair(path);
      const PairResult result = evaluate(spec, true);
      const double dev = *result.agreement;
      const bool ok = dev <= cmd.tol;
      if (!ok) ++breaches;
      worst = std::max(worst, dev);
      rows.push_back(json{{"file", name}, {"r", result.clifford.r}, {"max_deviation", dev},
                          {"status", ok ? "ok" : "breach"}});
      table << std::left << std::setw(24) << name << std::right << std::setw(4) << result.clifford.r
            << "  " << std::setw(12) << format_number(dev, 3) << "  " << (ok ? "ok" : "BREACH") << "\n";
    } catch (const Error& e) {
      if (first_error == kExitOk) first_error = exit_code_for(e.kind());
      write_error(err, e.kind(), e.what(), path.string());
      rows.push_back(json{{"file", name}, {"status", "error"}, {"error", std::string(to_string(e.kind()))}});
      table << std::left << std::setw(24) << name << std::right << "  ERROR " << to_string(e.kind())
            << ": " << e.what() << "\n";
    }
  }
  const int code = first_error != kExitOk ? first_error : (breaches > 0 ? kExitToleranceBreach : kExitOk);
  if (cmd.format == Format::json) {
    out << json{{"pairs", rows}, {"count", files.size()}, {"max_deviation", worst},
                {"tol", cmd.tol}, {"breaches", breaches}, {"exit_code", code}}
               .dump(2)
        << "\n";
  } else {
    out << "file                       r  max deviation\n" << table.str();
    out << "\n" << files.size() << " pairs, max deviation " << format_number(worst, 3) << ", tolerance "
        << format_number(cmd.tol, 3) << ", " << breaches << " breaches\n";
  }
  return code;
}

std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char ch) { return std::isspace(ch); }),
               item.end());
    if (item.empty()) throw Error(ErrorKind::InvalidArgument, "empty entry in angle list");
    double value = 0.0;
    try {
      const auto pi_at = item.find("pi");
      if (pi_at == std::string::npos) {
        std::size_t used = 0;
        value = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
      } else {
        // [k*]pi[/d]
        double factor = 1.0;
        if (pi_at > 0) {
          std::string lead = item.substr(0, pi_at);
          if (lead.back() != '*') throw std::invalid_argument(item);
          lead.pop_back();
          std::size_t used = 0;
          factor = std::stod(lead, &used);
          if (used != lead.size()) throw std::invalid_argument(item);
        }
        std::string tail = item.substr(pi_at + 2);
        double divisor = 1.0;
        if (!tail.empty()) {
          if (tail.front() != '/') throw std::invalid_argument(item);
          tail.erase(0, 1);
          std::size_t used = 0;
          divisor = std::stod(tail, &used);
          if (used != tail.size() || divisor == 0.0) throw std::invalid_argument(item);
        }
        value = factor * std::numbers::pi / divisor;
      }
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "cannot parse angle \"" + item + "\"");
    }
    out.push_back(value);
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty angle list");
  return out;
}

}  // namespace clifangle::io
