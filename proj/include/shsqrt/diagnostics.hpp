#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "json.hpp"
#include "shsqrt/matrix.hpp"

namespace shsqrt {

enum class Algorithm { RealSchur, SkewHamiltonianSchur, HamiltonianSchur };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::RealSchur: return "RealSchur";
    case Algorithm::SkewHamiltonianSchur: return "SkewHamiltonianSchur";
    case Algorithm::HamiltonianSchur: return "HamiltonianSchur";
  }
  return "unknown";
}

inline Algorithm algorithm_from_name(const std::string& s) {
  if (s == "RealSchur") return Algorithm::RealSchur;
  if (s == "SkewHamiltonianSchur") return Algorithm::SkewHamiltonianSchur;
  if (s == "HamiltonianSchur") return Algorithm::HamiltonianSchur;
  throw ParseError("unknown algorithm name: " + s);
}

// ||Xhat^2 - W||_F / ||W||_F.
inline double relative_residual(const DenseMatrix& xhat, const DenseMatrix& w) {
  if (xhat.rows() != w.rows() || xhat.cols() != w.cols() ||
      xhat.rows() != xhat.cols())
    throw ShapeError("relative_residual: shape mismatch");
  const double wn = frobenius_norm(w);
  if (wn == 0.0) throw ShapeError("relative_residual: zero target norm");
  const DenseMatrix e = mat_mul(xhat, xhat) - w;
  return frobenius_norm(e) / wn;
}

// alpha(X) = ||Xhat||_F^2 / ||W||_F; the method is stable when this is modest.
inline double alpha_stability(const DenseMatrix& xhat, const DenseMatrix& w) {
  const double wn = frobenius_norm(w);
  if (wn == 0.0) throw ShapeError("alpha_stability: zero target norm");
  const double xn = frobenius_norm(xhat);
  return xn * xn / wn;
}

// skew defect ||MJ + (MJ)^T||_F and Hamiltonian defect ||MJ - (MJ)^T||_F,
// both over max(1, ||M||_F).
inline std::pair<double, double> structure_defects(const DenseMatrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0)
    throw ShapeError("structure_defects: even square order required");
  const std::size_t n = m.rows() / 2;
  const auto mj = [&](std::size_t i, std::size_t j) {
    return j < n ? -m(i, j + n) : m(i, j - n);
  };
  double skew2 = 0.0, ham2 = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t j = 0; j < 2 * n; ++j) {
      const double s = mj(i, j) + mj(j, i);
      const double h = mj(i, j) - mj(j, i);
      skew2 += s * s;
      ham2 += h * h;
    }
  const double denom = std::max(1.0, frobenius_norm(m));
  return {std::sqrt(skew2) / denom, std::sqrt(ham2) / denom};
}

struct SquareRootReport {
  Algorithm algorithm = Algorithm::RealSchur;
  std::size_t order = 0;
  double relative_residual = 0.0;
  double alpha = 0.0;
  double hamiltonian_defect = 0.0;
  double skew_hamiltonian_defect = 0.0;
  FlopCounter flops;
  double wall_time = 0.0;

  bool operator==(const SquareRootReport& o) const {
    return algorithm == o.algorithm && order == o.order &&
           relative_residual == o.relative_residual && alpha == o.alpha &&
           hamiltonian_defect == o.hamiltonian_defect &&
           skew_hamiltonian_defect == o.skew_hamiltonian_defect &&
           flops.adds == o.flops.adds && flops.muls == o.flops.muls &&
           flops.divs == o.flops.divs && flops.sqrts == o.flops.sqrts &&
           wall_time == o.wall_time;
  }
};

inline std::string render_report(const SquareRootReport& r) {
  nlohmann::ordered_json j;
  j["algorithm"] = algorithm_name(r.algorithm);
  j["order"] = r.order;
  j["relative_residual"] = r.relative_residual;
  j["alpha"] = r.alpha;
  j["hamiltonian_defect"] = r.hamiltonian_defect;
  j["skew_hamiltonian_defect"] = r.skew_hamiltonian_defect;
  j["flops"] = {{"adds", r.flops.adds},
                {"muls", r.flops.muls},
                {"divs", r.flops.divs},
                {"sqrts", r.flops.sqrts},
                {"total", r.flops.total()}};
  j["wall_time"] = r.wall_time;
  return j.dump(2) + "\n";
}

inline SquareRootReport parse_report(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("report parse: ") + e.what());
  }
  SquareRootReport r;
  try {
    r.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
    r.order = j.at("order").get<std::size_t>();
    r.relative_residual = j.at("relative_residual").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.hamiltonian_defect = j.at("hamiltonian_defect").get<double>();
    r.skew_hamiltonian_defect = j.at("skew_hamiltonian_defect").get<double>();
    r.flops.adds = j.at("flops").at("adds").get<std::uint64_t>();
    r.flops.muls = j.at("flops").at("muls").get<std::uint64_t>();
    r.flops.divs = j.at("flops").at("divs").get<std::uint64_t>();
    r.flops.sqrts = j.at("flops").at("sqrts").get<std::uint64_t>();
    r.wall_time = j.at("wall_time").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report fields: ") + e.what());
  }
  return r;
}

}  // namespace shsqrt
