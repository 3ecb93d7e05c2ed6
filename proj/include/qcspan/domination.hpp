#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qcspan/errors.hpp"
#include "qcspan/grid.hpp"

namespace qcspan {

namespace detail {

inline void require_dominatable(const GridFunction& A) {
  const ValidationReport rep = validate(A);
  if (!rep.is_grounded) fail(Errc::NotGrounded, "function is not grounded");
  if (!rep.is_two_increasing) fail(Errc::NotTwoIncreasing, "function is not 2-increasing");
  // grounded + 2-increasing: total mass sits at the top-right corner
  if (A.at(A.mesh().node_count_x() - 1, A.mesh().node_count_y() - 1) == 0)
    fail(Errc::ZeroFunction, "optimal domination of the zero function is undefined");
}

}  // namespace detail

struct AlphaDetail {
  Rational alpha;
  bool attained_on_column;  // false: attained on a horizontal strip
  std::size_t strip_index;
};

/// Optimal domination constant: the largest strip volume per strip width.
inline AlphaDetail alpha_mass_detail(const GridFunction& A) {
  detail::require_dominatable(A);
  const StripSums s = strip_sums(A);
  return AlphaDetail{s.max_ratio, s.max_on_column, s.max_index};
}

inline Rational alpha_mass(const GridFunction& A) { return alpha_mass_detail(A).alpha; }

/// The pointwise least copula dominating A's mass at the optimal constant.
inline GridFunction lower_bound_copula(const GridFunction& A) {
  detail::require_dominatable(A);
  const Rational alpha = strip_sums(A).max_ratio;
  const Mesh& m = A.mesh();
  const std::size_t nx = m.node_count_x(), ny = m.node_count_y();
  const Rational total = A.at(nx - 1, ny - 1);
  RationalMatrix vals(ny, nx);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      // grounded A: V_A([0,x]x[0,y]) = A(x,y)
      const Rational lower_left = A.at(i, j) / alpha;
      const Rational upper_right =
          total - A.at(i, ny - 1) - A.at(nx - 1, j) + A.at(i, j);
      const Rational second = m.xs()[i] + m.ys()[j] - 1 + upper_right / alpha;
      vals(j, i) = std::max(lower_left, second);
    }
  return GridFunction::from_values(m, std::move(vals));
}

/// The pointwise greatest copula dominating A's mass at the optimal constant.
inline GridFunction upper_bound_copula(const GridFunction& A) {
  detail::require_dominatable(A);
  const Rational alpha = strip_sums(A).max_ratio;
  const Mesh& m = A.mesh();
  const std::size_t nx = m.node_count_x(), ny = m.node_count_y();
  RationalMatrix vals(ny, nx);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const Rational upper_strip = A.at(i, ny - 1) - A.at(i, j);   // V_A([0,x]x[y,1])
      const Rational right_strip = A.at(nx - 1, j) - A.at(i, j);   // V_A([x,1]x[0,y])
      vals(j, i) = std::min(m.xs()[i] - upper_strip / alpha, m.ys()[j] - right_strip / alpha);
    }
  return GridFunction::from_values(m, std::move(vals));
}

/// Cellwise alpha * V_C(R_ij) >= V_A(R_ij), exactly.
inline bool domination_holds(const Rational& alpha, const GridFunction& C,
                             const GridFunction& A) {
  if (C.mesh() != A.mesh()) fail(Errc::MeshMismatch, "domination needs one mesh");
  const MassMatrix mc = C.mass(), ma = A.mass();
  for (std::size_t j = 0; j < mc.cells.rows(); ++j)
    for (std::size_t i = 0; i < mc.cells.cols(); ++i)
      if (alpha * mc.cells(j, i) < ma.cells(j, i)) return false;
  return true;
}

/// Independent dominating copula built by completing the transportation
/// polytope with lower bounds V_A(R_ij)/alpha: the slack in each margin is
/// filled with the outer product of the residual margins. Feasibility (all
/// residuals nonnegative) holds exactly when alpha >= alpha_mass(A).
inline GridFunction completion_witness(const GridFunction& A, const Rational& alpha) {
  detail::require_dominatable(A);
  if (alpha <= 0) fail(Errc::AlphaTooSmall, "alpha must be positive");
  const Mesh& m = A.mesh();
  const MassMatrix ma = A.mass();
  const std::size_t cx = m.cell_count_x(), cy = m.cell_count_y();

  RationalMatrix lower(cy, cx);
  std::vector<Rational> rho(cx), sigma(cy);
  for (std::size_t i = 0; i < cx; ++i) rho[i] = m.cell_width(i);
  for (std::size_t j = 0; j < cy; ++j) sigma[j] = m.cell_height(j);
  for (std::size_t j = 0; j < cy; ++j)
    for (std::size_t i = 0; i < cx; ++i) {
      lower(j, i) = ma.cells(j, i) / alpha;
      rho[i] -= lower(j, i);
      sigma[j] -= lower(j, i);
    }
  for (std::size_t i = 0; i < cx; ++i)
    if (rho[i] < 0)
      fail(Errc::AlphaTooSmall, "residual column margin " + std::to_string(i) +
                                    " is negative: " + format_rational(rho[i]));
  for (std::size_t j = 0; j < cy; ++j)
    if (sigma[j] < 0)
      fail(Errc::AlphaTooSmall, "residual row margin " + std::to_string(j) +
                                    " is negative: " + format_rational(sigma[j]));

  Rational slack = 0;
  for (const Rational& r : rho) slack += r;
  if (slack == 0) return GridFunction::from_mass(m, lower);  // lower is already a copula mass

  RationalMatrix cells(cy, cx);
  for (std::size_t j = 0; j < cy; ++j)
    for (std::size_t i = 0; i < cx; ++i) cells(j, i) = lower(j, i) + rho[i] * sigma[j] / slack;
  return GridFunction::from_mass(m, cells);
}

struct DominationResult {
  AlphaDetail detail;
  GridFunction lower, upper, witness;
  const Rational& alpha() const { return detail.alpha; }
};

inline DominationResult dominate(const GridFunction& A) {
  AlphaDetail d = alpha_mass_detail(A);
  GridFunction lo = lower_bound_copula(A);
  GridFunction hi = upper_bound_copula(A);
  GridFunction w = completion_witness(A, d.alpha);
  return DominationResult{std::move(d), std::move(lo), std::move(hi), std::move(w)};
}

}  // namespace qcspan
