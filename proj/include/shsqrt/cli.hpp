#pragma once

#include <chrono>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include "shsqrt/diagnostics.hpp"
#include "shsqrt/generate.hpp"
#include "shsqrt/io.hpp"
#include "shsqrt/sqrtm.hpp"
#include "shsqrt/structured.hpp"

namespace shsqrt {

enum class Command { Generate, Sqrt, Check, Bench };
enum class AlgChoice { Schur, SkewHam, Ham };

struct RunConfig {
  Command command = Command::Sqrt;
  AlgChoice algorithm = AlgChoice::SkewHam;
  std::string input_path;
  std::string output_path;
  std::string report_path;
  std::string against_path;
  int example = 0;
  std::size_t size = 50;           // full order 2n
  std::uint64_t seed = 1;
  std::vector<std::size_t> sizes;  // bench
  double tol = 1e-12;              // structure validation tolerance
  double check_tol = 1e-10;        // residual threshold for `check`
};

// SHSQRT_TOL overrides the structure-validation tolerance.
inline void apply_env_tol(RunConfig& cfg) {
  if (const char* s = std::getenv("SHSQRT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || !(v >= 0.0))
      throw ConfigError("SHSQRT_TOL: not a valid non-negative number");
    cfg.tol = v;
  }
}

inline int run_generate(const RunConfig& cfg, std::ostream& out) {
  SkewHamiltonianMatrix w;
  std::string tag;
  switch (cfg.example) {
    case 1:
      w = example1();
      tag = "generated: example 1";
      break;
    case 2:
      w = example2();
      tag = "generated: example 2";
      break;
    case 3:
      w = example3(cfg.size, cfg.seed);
      tag = "generated: example 3, size " + std::to_string(cfg.size) +
            ", seed " + std::to_string(cfg.seed);
      break;
    default:
      throw ConfigError("generate: --example must be 1, 2, or 3");
  }
  write_matrix(cfg.output_path, w.full(), tag);
  out << "wrote " << 2 * w.n << "x" << 2 * w.n << " matrix to "
      << cfg.output_path << "\n";
  return 0;
}

namespace detail {

struct SqrtOutcome {
  DenseMatrix root;
  SquareRootReport report;
};

inline SqrtOutcome compute_root(const DenseMatrix& w, AlgChoice alg,
                                double tol) {
  SqrtOutcome out;
  FlopCounter ctx;
  const auto t0 = std::chrono::steady_clock::now();
  if (alg == AlgChoice::Schur) {
    out.root = sqrtm_real(w, ctx);
    out.report.algorithm = Algorithm::RealSchur;
  } else {
    const SkewHamiltonianMatrix packed = pack(w, tol);
    StructuredRoot sr = (alg == AlgChoice::SkewHam)
                            ? sqrt_skew_hamiltonian(packed, ctx)
                            : sqrt_hamiltonian(packed, ctx);
    out.root = std::move(sr.root);
    out.report.algorithm = alg == AlgChoice::SkewHam
                               ? Algorithm::SkewHamiltonianSchur
                               : Algorithm::HamiltonianSchur;
  }
  const auto t1 = std::chrono::steady_clock::now();
  out.report.order = w.rows();
  out.report.relative_residual = relative_residual(out.root, w);
  out.report.alpha = alpha_stability(out.root, w);
  if (w.rows() % 2 == 0) {
    const auto [skew, ham] = structure_defects(out.root);
    out.report.skew_hamiltonian_defect = skew;
    out.report.hamiltonian_defect = ham;
  }
  out.report.flops = ctx;
  out.report.wall_time = std::chrono::duration<double>(t1 - t0).count();
  return out;
}

}  // namespace detail

inline int run_sqrt(const RunConfig& cfg, std::ostream& out) {
  const DenseMatrix w = read_matrix(cfg.input_path);
  if (w.rows() != w.cols())
    throw StructureError("sqrt: input matrix is not square");
  require_finite(w, "sqrt input");
  detail::SqrtOutcome res = detail::compute_root(w, cfg.algorithm, cfg.tol);
  write_matrix(cfg.output_path, res.root,
               std::string("square root via ") +
                   algorithm_name(res.report.algorithm));
  const std::string body = render_report(res.report);
  if (!cfg.report_path.empty()) {
    std::ofstream rf(cfg.report_path);
    if (!rf) throw FileError("cannot open " + cfg.report_path + " for writing");
    rf << body;
  }
  out << body;
  return 0;
}

inline int run_check(const RunConfig& cfg, std::ostream& out) {
  const DenseMatrix root = read_matrix(cfg.input_path);
  const DenseMatrix w = read_matrix(cfg.against_path);
  if (root.rows() != root.cols() || root.rows() != w.rows() ||
      w.rows() != w.cols())
    throw StructureError("check: matrices must be square and of equal order");
  const double res = relative_residual(root, w);
  const bool ok = res <= cfg.check_tol;
  out << "relative_residual " << res << " (tol " << cfg.check_tol << "): "
      << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

inline int run_bench(const RunConfig& cfg, std::ostream& out) {
  if (cfg.sizes.empty()) throw ConfigError("bench: empty size list");
  out << "size  flops_schur  flops_skewham  ratio   resid_schur  resid_skewham"
         "  t_schur  t_skewham\n";
  for (std::size_t sz : cfg.sizes) {
    if (sz < 2 || sz % 2 != 0)
      throw ConfigError("bench: sizes must be even and >= 2");
    // Random draws routinely have negative real eigenvalues, which no real
    // root that is a function of the matrix can handle; scan seeds upward
    // from the requested one until an admissible draw appears.
    detail::SqrtOutcome a;
    detail::SqrtOutcome b;
    bool found = false;
    for (std::uint64_t seed = cfg.seed; seed < cfg.seed + 100000; ++seed) {
      const SkewHamiltonianMatrix w = random_skew_hamiltonian(sz / 2, seed);
      const DenseMatrix full = w.full();
      try {
        b = detail::compute_root(full, AlgChoice::SkewHam, cfg.tol);
      } catch (const NegativeRealEigenvalueError&) {
        continue;
      } catch (const SingularMatrixError&) {
        continue;
      }
      a = detail::compute_root(full, AlgChoice::Schur, cfg.tol);
      found = true;
      break;
    }
    if (!found)
      throw ConvergenceError("bench: no admissible random draw found");
    const double ratio = static_cast<double>(b.report.flops.total()) /
                         static_cast<double>(a.report.flops.total());
    char line[256];
    std::snprintf(line, sizeof(line),
                  "%-5zu %-12llu %-14llu %-7.3f %-12.3e %-14.3e %-8.4f %-9.4f\n",
                  sz,
                  static_cast<unsigned long long>(a.report.flops.total()),
                  static_cast<unsigned long long>(b.report.flops.total()),
                  ratio, a.report.relative_residual,
                  b.report.relative_residual, a.report.wall_time,
                  b.report.wall_time);
    out << line;
  }
  return 0;
}

inline int run(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::Generate: return run_generate(cfg, out);
    case Command::Sqrt: return run_sqrt(cfg, out);
    case Command::Check: return run_check(cfg, out);
    case Command::Bench: return run_bench(cfg, out);
  }
  throw ConfigError("unknown command");
}

}  // namespace shsqrt
