#pragma once

#include <cstddef>
#include <utility>

#include "qcspan/domination.hpp"
#include "qcspan/errors.hpp"
#include "qcspan/grid.hpp"

namespace qcspan {

namespace detail {

inline void require_quasi_copula(const GridFunction& Q) {
  if (!is_discrete_quasi_copula(Q))
    fail(Errc::NotQuasiCopula, "input is not a discrete quasi-copula");
}

}  // namespace detail

/// Q = Q_pos - Q_neg with disjoint cell supports; both grounded 2-increasing.
inline std::pair<GridFunction, GridFunction> split_pos_neg(const GridFunction& Q) {
  detail::require_quasi_copula(Q);
  const MassMatrix mm = Q.mass();
  RationalMatrix pos(mm.cells.rows(), mm.cells.cols());
  RationalMatrix neg(mm.cells.rows(), mm.cells.cols());
  for (std::size_t j = 0; j < mm.cells.rows(); ++j)
    for (std::size_t i = 0; i < mm.cells.cols(); ++i) {
      const Rational& v = mm.cells(j, i);
      if (v > 0)
        pos(j, i) = v;
      else
        neg(j, i) = -v;
    }
  return {GridFunction::from_mass(Q.mesh(), pos), GridFunction::from_mass(Q.mesh(), neg)};
}

/// Affine two-copula decomposition Q = alpha1*C1 + alpha2*C2 with
/// alpha1 >= 1 >= 0 >= alpha2 and alpha1 + alpha2 = 1.
struct AffinePair {
  Rational alpha1;
  GridFunction C1;
  Rational alpha2;
  GridFunction C2;
};

/// Decompose against a base copula whose mass is strictly positive in every
/// cell (default: the product copula). alpha1 is the largest cellwise mass
/// ratio V_Q / V_base; at alpha1 == 1 the target equals the base on the mesh.
inline AffinePair two_copula_split(const GridFunction& Q, const GridFunction& base) {
  detail::require_quasi_copula(Q);
  if (base.mesh() != Q.mesh()) fail(Errc::MeshMismatch, "base lives on a different mesh");
  const ValidationReport base_rep = validate(base);
  if (!base_rep.is_copula()) fail(Errc::NotCopula, "base is not a discrete copula");

  const MassMatrix mq = Q.mass(), mb = base.mass();
  Rational alpha1 = 0;
  for (std::size_t j = 0; j < mq.cells.rows(); ++j)
    for (std::size_t i = 0; i < mq.cells.cols(); ++i) {
      if (mb.cells(j, i) <= 0)
        fail(Errc::BaseHasZeroCell, "base copula has a cell without positive mass");
      alpha1 = std::max(alpha1, Rational(mq.cells(j, i) / mb.cells(j, i)));
    }

  if (alpha1 == 1) return AffinePair{Rational(1), Q, Rational(0), base};

  const Rational alpha2 = 1 - alpha1;
  GridFunction C2 = affine(Rational(1) / alpha2, Q, -alpha1 / alpha2, base);
  return AffinePair{alpha1, base, alpha2, std::move(C2)};
}

inline AffinePair two_copula_split(const GridFunction& Q) {
  return two_copula_split(Q, product_grid(Q.mesh()));
}

/// Exact Minkowski norm of a discrete quasi-copula: 2*alpha_{Q_pos} - 1,
/// which is 1 exactly when Q is a copula.
inline Rational minkowski_norm(const GridFunction& Q) {
  detail::require_quasi_copula(Q);
  if (validate(Q).is_two_increasing) return 1;
  auto [pos, neg] = split_pos_neg(Q);
  (void)neg;
  return 2 * alpha_mass(pos) - 1;
}

/// Minimal decomposition Q = s*A - t*B with s + t = ||Q||_M.
struct NormWitness {
  Rational norm;
  Rational s;
  GridFunction A;
  Rational t;
  GridFunction B;
};

inline NormWitness minkowski_witness(const GridFunction& Q) {
  detail::require_quasi_copula(Q);
  if (validate(Q).is_two_increasing)
    fail(Errc::IsCopula, "a copula has norm 1 with no canonical second component");
  auto [pos, neg] = split_pos_neg(Q);
  const Rational s = alpha_mass(pos);
  const Rational t = s - 1;
  if (alpha_mass(neg) != t)
    fail(Errc::BoundViolated, "alpha_pos - alpha_neg != 1; invariant broken");
  GridFunction A = upper_bound_copula(pos);
  // B = (s*A - Q) / t
  GridFunction B = affine(s / t, A, Rational(-1) / t, Q);
  return NormWitness{s + t, s, std::move(A), t, std::move(B)};
}

}  // namespace qcspan
