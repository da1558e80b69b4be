#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "shsqrt/cli.hpp"

using namespace shsqrt;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  f << body;
}

// Report body with the wall-time field blanked, for determinism comparisons.
std::string stable_report(const std::string& body) {
  SquareRootReport r = parse_report(body);
  r.wall_time = 0.0;
  return render_report(r);
}

}  // namespace

TEST_CASE("matrix file round trip is exact") {
  const std::string path = temp_path("shsqrt_io_rt.mtx");
  const DenseMatrix id = DenseMatrix::identity(4);
  write_matrix(path, id);
  CHECK(max_abs_diff(read_matrix(path), id) == 0.0);

  DenseMatrix m(2, 3, {0.1, -2.5e-17, 3.0, 1.0 / 3.0, 7.25, -0.0});
  write_matrix(path, m, "fixture");
  const DenseMatrix back = read_matrix(path);
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  CHECK(max_abs_diff(back, m) == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("read_matrix error reporting") {
  const std::string path = temp_path("shsqrt_io_bad.mtx");

  write_text(path, "%%NotMatrixMarket nonsense\n2 2\n1\n2\n3\n4\n");
  try {
    read_matrix(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }

  write_text(path,
             "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n5\n");
  CHECK_THROWS_AS(read_matrix(path), ParseError);

  write_text(path, "%%MatrixMarket matrix array real general\n2 2\n1\nnope\n");
  CHECK_THROWS_AS(read_matrix(path), ParseError);

  std::remove(path.c_str());
  CHECK_THROWS_AS(read_matrix(temp_path("shsqrt_does_not_exist.mtx")),
                  FileError);
}

TEST_CASE("generate, sqrt, and check pipeline through the library front end") {
  const std::string wpath = temp_path("shsqrt_cli_w.mtx");
  const std::string rpath = temp_path("shsqrt_cli_root.mtx");

  RunConfig gen;
  gen.command = Command::Generate;
  gen.example = 1;
  gen.output_path = wpath;
  std::ostringstream out;
  CHECK(run(gen, out) == 0);

  RunConfig sq;
  sq.command = Command::Sqrt;
  sq.algorithm = AlgChoice::SkewHam;
  sq.input_path = wpath;
  sq.output_path = rpath;
  out.str("");
  CHECK(run(sq, out) == 0);
  const SquareRootReport rep = parse_report(out.str());
  CHECK(rep.relative_residual <= 1e-13);
  CHECK(rep.skew_hamiltonian_defect <= 1e-12);
  CHECK(rep.order == 10);

  RunConfig chk;
  chk.command = Command::Check;
  chk.input_path = rpath;
  chk.against_path = wpath;
  out.str("");
  CHECK(run(chk, out) == 0);
  CHECK(out.str().find("PASS") != std::string::npos);

  // Checking the root against the wrong matrix fails with exit 1.
  RunConfig bad = chk;
  bad.against_path = rpath;
  out.str("");
  CHECK(run(bad, out) == 1);
  CHECK(out.str().find("FAIL") != std::string::npos);

  std::remove(wpath.c_str());
  std::remove(rpath.c_str());
}

TEST_CASE("reports are deterministic for a fixed config, modulo wall time") {
  const std::string wpath = temp_path("shsqrt_cli_det_w.mtx");
  const std::string rpath = temp_path("shsqrt_cli_det_root.mtx");

  RunConfig gen;
  gen.command = Command::Generate;
  gen.example = 3;
  gen.size = 20;
  gen.seed = 14;  // admissible draw: all eigenvalues off the closed negative axis
  gen.output_path = wpath;
  std::ostringstream sink;
  run(gen, sink);

  RunConfig sq;
  sq.command = Command::Sqrt;
  sq.algorithm = AlgChoice::Ham;
  sq.input_path = wpath;
  sq.output_path = rpath;

  std::ostringstream first, second;
  run(sq, first);
  run(sq, second);
  CHECK(stable_report(first.str()) == stable_report(second.str()));

  std::remove(wpath.c_str());
  std::remove(rpath.c_str());
}

TEST_CASE("bench runs and reports the flop ratio") {
  RunConfig b;
  b.command = Command::Bench;
  b.sizes = {8};
  b.seed = 1;
  std::ostringstream out;
  CHECK(run(b, out) == 0);
  CHECK(out.str().find("ratio") != std::string::npos);

  b.sizes = {};
  CHECK_THROWS_AS(run(b, out), ConfigError);
  b.sizes = {7};
  CHECK_THROWS_AS(run(b, out), ConfigError);
}

TEST_CASE("error classes carry their documented exit codes") {
  CHECK(static_cast<int>(ConfigError("x").exit_code()) == 2);
  CHECK(static_cast<int>(ParseError("x").exit_code()) == 3);
  CHECK(static_cast<int>(StructureError("x").exit_code()) == 4);
  CHECK(static_cast<int>(NegativeRealEigenvalueError("x").exit_code()) == 5);
  CHECK(static_cast<int>(SingularMatrixError("x").exit_code()) == 6);
  CHECK(static_cast<int>(ConvergenceError("x").exit_code()) == 7);
  CHECK(static_cast<int>(FileError("x").exit_code()) == 8);
}

TEST_CASE("generate rejects invalid example and size settings") {
  RunConfig gen;
  gen.command = Command::Generate;
  gen.example = 9;
  gen.output_path = temp_path("shsqrt_cli_never.mtx");
  std::ostringstream out;
  CHECK_THROWS_AS(run(gen, out), ConfigError);

  gen.example = 3;
  gen.size = 7;  // odd order
  CHECK_THROWS_AS(run(gen, out), ConfigError);
}

TEST_CASE("SHSQRT_TOL environment override is validated") {
  RunConfig cfg;
  setenv("SHSQRT_TOL", "1e-9", 1);
  apply_env_tol(cfg);
  CHECK(cfg.tol == 1e-9);

  setenv("SHSQRT_TOL", "garbage", 1);
  CHECK_THROWS_AS(apply_env_tol(cfg), ConfigError);
  unsetenv("SHSQRT_TOL");
}

TEST_CASE("sqrt on a structurally invalid input raises StructureError") {
  const std::string path = temp_path("shsqrt_cli_j.mtx");
  write_matrix(path, symplectic_j(2), "J is Hamiltonian, not skew-Hamiltonian");
  RunConfig sq;
  sq.command = Command::Sqrt;
  sq.algorithm = AlgChoice::SkewHam;
  sq.input_path = path;
  sq.output_path = temp_path("shsqrt_cli_j_root.mtx");
  std::ostringstream out;
  CHECK_THROWS_AS(run(sq, out), StructureError);
  std::remove(path.c_str());
}
