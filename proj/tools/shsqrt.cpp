#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shsqrt/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"square roots of skew-Hamiltonian matrices"};
  app.require_subcommand(1);

  shsqrt::RunConfig cfg;

  auto* gen = app.add_subcommand("generate", "emit a test matrix");
  gen->add_option("--example", cfg.example, "example id (1, 2, or 3)")
      ->required();
  gen->add_option("--size", cfg.size, "full order 2n (example 3 only)");
  gen->add_option("--seed", cfg.seed, "RNG seed (example 3 only)");
  gen->add_option("-o,--output", cfg.output_path, "output matrix file")
      ->required();

  auto* sq = app.add_subcommand("sqrt", "compute a square root");
  std::string alg = "skewham";
  sq->add_option("--alg", alg, "schur | skewham | ham")
      ->check(CLI::IsMember({"schur", "skewham", "ham"}));
  sq->add_option("-i,--input", cfg.input_path, "input matrix file")->required();
  sq->add_option("-o,--output", cfg.output_path, "output root file")->required();
  sq->add_option("--report", cfg.report_path, "write the JSON report here");

  auto* chk = app.add_subcommand("check", "verify ROOT^2 against a matrix");
  chk->add_option("-i,--input", cfg.input_path, "candidate root file")
      ->required();
  chk->add_option("--against", cfg.against_path, "target matrix file")
      ->required();
  chk->add_option("--tol", cfg.check_tol, "residual threshold");

  auto* bench = app.add_subcommand("bench", "flop/time comparison table");
  bench->add_option("--sizes", cfg.sizes, "full orders 2n to benchmark")
      ->required()
      ->delimiter(',');
  bench->add_option("--seed", cfg.seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(shsqrt::ExitCode::Config);
  }

  if (gen->parsed()) cfg.command = shsqrt::Command::Generate;
  if (sq->parsed()) {
    cfg.command = shsqrt::Command::Sqrt;
    cfg.algorithm = alg == "schur"    ? shsqrt::AlgChoice::Schur
                    : alg == "skewham" ? shsqrt::AlgChoice::SkewHam
                                       : shsqrt::AlgChoice::Ham;
  }
  if (chk->parsed()) cfg.command = shsqrt::Command::Check;
  if (bench->parsed()) cfg.command = shsqrt::Command::Bench;

  try {
    shsqrt::apply_env_tol(cfg);
    return shsqrt::run(cfg, std::cout);
  } catch (const shsqrt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(shsqrt::ExitCode::Internal);
  }
}
