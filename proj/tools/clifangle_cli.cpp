// clifangle: principal angles between subspaces from the geometric product
// of their blades.
//
//   clifangle angle PAIR.json [--oracle] [--format json|text] [--tol X] [--out FILE]
//   clifangle generate --n N --r R [--count K] [--seed S] [--planted "pi/3,0"] [--out DIR]
//   clifangle check DIR [--tol 1e-7] [--format text|json]
//
// Exit codes: 0 ok, 1 tolerance breach (check), 2 invalid input or
// arguments, 3 degenerate span, 4 grade mismatch, 5 numerical failure.

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "clifangle/io.hpp"

namespace io = clifangle::io;

int main(int argc, char** argv) {
  CLI::App app{"Relative orientation of subspaces via Clifford algebra"};
  app.require_subcommand(1);

  const std::map<std::string, io::Format> formats{{"json", io::Format::json},
                                                  {"text", io::Format::text}};

  io::AngleCommand angle;
  auto* angle_cmd = app.add_subcommand("angle", "Principal angles of one subspace pair");
  angle_cmd->add_option("input", angle.input, "Pair file (JSON), or - for standard input")->required();
  angle_cmd->add_flag("--oracle", angle.oracle, "Also run the QR+SVD oracle and report agreement");
  angle_cmd->add_option("--format", angle.format, "Output format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  angle_cmd->add_option("--tol", angle.tol_angle, "Zero / right angle classification tolerance")
      ->check(CLI::PositiveNumber);
  std::string angle_out;
  angle_cmd->add_option("--out", angle_out, "Write the report to this file");

  io::GenerateCommand generate;
  std::string planted;
  std::string generate_out;
  auto* generate_cmd = app.add_subcommand("generate", "Seeded random or planted-angle pair files");
  generate_cmd->add_option("--n", generate.options.n, "Ambient dimension")->required();
  generate_cmd->add_option("--r", generate.options.r, "Subspace dimension")->required();
  generate_cmd->add_option("--count", generate.options.count, "Number of pairs");
  generate_cmd->add_option("--seed", generate.options.seed, "RNG seed");
  generate_cmd->add_option("--planted", planted, "Comma separated angles in radians, e.g. \"pi/3,0\"");
  generate_cmd->add_option("--out", generate_out, "Output directory (default: JSON lines on stdout)");

  io::CheckCommand check;
  auto* check_cmd = app.add_subcommand("check", "Compare Clifford and oracle angles over a directory");
  check_cmd->add_option("directory", check.directory, "Directory of pair files")->required();
  check_cmd->add_option("--tol", check.tol, "Maximum allowed per-angle deviation")
      ->check(CLI::NonNegativeNumber);
  check_cmd->add_option("--format", check.format, "Output format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << io::error_json(clifangle::ErrorKind::InvalidArgument, e.what()).dump() << '\n';
    return io::kExitInvalidInput;
  }

  if (*angle_cmd) {
    if (!angle_out.empty()) angle.output = angle_out;
    return io::run_angle(angle, std::cout, std::cerr);
  }
  if (*generate_cmd) {
    if (!generate_out.empty()) generate.output_dir = generate_out;
    if (!planted.empty()) {
      try {
        generate.options.planted = io::parse_angle_list(planted);
      } catch (const clifangle::Error& e) {
        std::cerr << io::error_json(e.kind(), e.what()).dump() << '\n';
        return io::kExitInvalidInput;
      }
    }
    return io::run_generate(generate, std::cout, std::cerr);
  }
  return io::run_check(check, std::cout, std::cerr);
}
