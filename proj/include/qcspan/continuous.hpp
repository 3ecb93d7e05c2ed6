#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qcspan/errors.hpp"
#include "qcspan/mesh.hpp"
#include "qcspan/rational.hpp"

namespace qcspan {

/// A function on the unit square given by a pure evaluation map. Evaluation
/// must be deterministic and re-entrant; grid sweeps call it from multiple
/// threads. Oracles built from exact grids also carry an exact rational
/// channel so restriction back to a mesh loses nothing.
class ContinuousQC {
 public:
  using DoubleFn = std::function<double(double, double)>;
  using ExactFn = std::function<Rational(const Rational&, const Rational&)>;
  using AlignmentHint = std::function<Mesh(int)>;

  ContinuousQC() = default;
  ContinuousQC(std::string name, DoubleFn f) : name_(std::move(name)), f_(std::move(f)) {}
  ContinuousQC(std::string name, DoubleFn f, ExactFn fe)
      : name_(std::move(name)), f_(std::move(f)), fe_(std::move(fe)) {}

  double operator()(double x, double y) const { return f_(x, y); }

  bool has_exact() const { return static_cast<bool>(fe_); }
  Rational exact(const Rational& x, const Rational& y) const {
    if (!fe_) fail(Errc::InvalidArgument, "oracle '" + name_ + "' has no exact channel");
    return fe_(x, y);
  }

  const std::string& name() const { return name_; }
  bool is_quasi_copula_flagged() const { return quasi_flag_; }

  ContinuousQC& set_quasi_copula_flag(bool v) {
    quasi_flag_ = v;
    return *this;
  }

  /// Suggested mesh to align span probes with (level-dependent). Optional.
  bool has_alignment_hint() const { return static_cast<bool>(hint_); }
  Mesh alignment_hint(int level) const {
    if (!hint_) fail(Errc::InvalidArgument, "oracle '" + name_ + "' has no alignment hint");
    return hint_(level);
  }
  ContinuousQC& set_alignment_hint(AlignmentHint h) {
    hint_ = std::move(h);
    return *this;
  }

 private:
  std::string name_;
  DoubleFn f_;
  ExactFn fe_;
  AlignmentHint hint_;
  bool quasi_flag_ = false;
};

/// Pointwise sum of coefficient-weighted oracles. The exact channel is kept
/// whenever every term has one.
inline ContinuousQC affine_combination(std::string name,
                                       std::vector<std::pair<Rational, ContinuousQC>> terms) {
  auto shared = std::make_shared<std::vector<std::pair<Rational, ContinuousQC>>>(std::move(terms));
  std::vector<double> coeffs;
  coeffs.reserve(shared->size());
  bool exact_ok = !shared->empty();
  for (const auto& [c, qc] : *shared) {
    coeffs.push_back(to_double(c));
    exact_ok = exact_ok && qc.has_exact();
  }
  ContinuousQC::DoubleFn f = [shared, coeffs](double x, double y) {
    double acc = 0;
    for (std::size_t k = 0; k < shared->size(); ++k) acc += coeffs[k] * (*shared)[k].second(x, y);
    return acc;
  };
  if (!exact_ok) return ContinuousQC(std::move(name), std::move(f));
  ContinuousQC::ExactFn fe = [shared](const Rational& x, const Rational& y) -> Rational {
    Rational acc = 0;
    for (const auto& [c, qc] : *shared) acc += c * qc.exact(x, y);
    return acc;
  };
  return ContinuousQC(std::move(name), std::move(f), std::move(fe));
}

/// Samples on the (k+1) x (k+1) equidistant grid, row-major bottom to top.
inline std::vector<double> sample_grid(const ContinuousQC& Q, std::size_t k) {
  std::vector<double> vals((k + 1) * (k + 1));
  for (std::size_t j = 0; j <= k; ++j) {
    const double y = static_cast<double>(j) / static_cast<double>(k);
    for (std::size_t i = 0; i <= k; ++i)
      vals[j * (k + 1) + i] = Q(static_cast<double>(i) / static_cast<double>(k), y);
  }
  return vals;
}

inline double sup_distance_on_grid(const ContinuousQC& P, const ContinuousQC& R,
                                   std::size_t k) {
  if (k < 2) fail(Errc::InvalidArgument, "grid resolution must be at least 2");
  double worst = 0;
  for (std::size_t j = 0; j <= k; ++j) {
    const double y = static_cast<double>(j) / static_cast<double>(k);
    for (std::size_t i = 0; i <= k; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(k);
      worst = std::max(worst, std::abs(P(x, y) - R(x, y)));
    }
  }
  return worst;
}

/// Outcome of checking the quasi-copula axioms of Q/factor on an equidistant
/// grid with k subintervals. All quantities refer to the divided function.
struct GridCheckReport {
  std::size_t subintervals = 0;
  double tol = 1e-9;
  double factor = 1.0;
  double max_groundedness_error = 0;
  double max_marginal_error = 0;
  double max_monotonicity_violation = 0;  // negative increments along grid lines
  double max_lipschitz_excess = 0;        // |increment| beyond the coordinate gap
  double min_cell_mass = std::numeric_limits<double>::infinity();

  bool quasi_ok() const {
    return max_groundedness_error <= tol && max_marginal_error <= tol &&
           max_monotonicity_violation <= tol && max_lipschitz_excess <= tol;
  }
  bool copula_ok() const {
    return max_groundedness_error <= tol && max_marginal_error <= tol &&
           min_cell_mass >= -tol;
  }
};

/// Core check over a sample buffer laid out as sample_grid produces. The
/// buffer holds factor * Q; bounds are scaled so the report describes Q.
inline GridCheckReport grid_check_buffer(const std::vector<double>& vals, std::size_t k,
                                         double tol = 1e-9, double factor = 1.0) {
  GridCheckReport rep;
  rep.subintervals = k;
  rep.tol = tol;
  rep.factor = factor;
  const std::size_t n = k + 1;
  const double h = 1.0 / static_cast<double>(k);
  const double inv = 1.0 / factor;

  for (std::size_t i = 0; i < n; ++i) {
    rep.max_groundedness_error = std::max(rep.max_groundedness_error, std::abs(vals[i]) * inv);
    const double x = static_cast<double>(i) * h;
    rep.max_marginal_error =
        std::max(rep.max_marginal_error, std::abs(vals[k * n + i] * inv - x));
  }
  for (std::size_t j = 0; j < n; ++j) {
    rep.max_groundedness_error =
        std::max(rep.max_groundedness_error, std::abs(vals[j * n]) * inv);
    const double y = static_cast<double>(j) * h;
    rep.max_marginal_error =
        std::max(rep.max_marginal_error, std::abs(vals[j * n + k] * inv - y));
  }

  const double step = factor * h;
  double worst_neg = 0, worst_lip = 0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double d = vals[j * n + i + 1] - vals[j * n + i];
      worst_neg = std::max(worst_neg, -d);
      worst_lip = std::max(worst_lip, std::abs(d) - step);
    }
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const double d = vals[(j + 1) * n + i] - vals[j * n + i];
      worst_neg = std::max(worst_neg, -d);
      worst_lip = std::max(worst_lip, std::abs(d) - step);
    }
  rep.max_monotonicity_violation = worst_neg * inv;
  rep.max_lipschitz_excess = std::max(0.0, worst_lip * inv);

  double worst_cell = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double mass = vals[(j + 1) * n + i + 1] - vals[(j + 1) * n + i] -
                          vals[j * n + i + 1] + vals[j * n + i];
      worst_cell = std::min(worst_cell, mass);
    }
  rep.min_cell_mass = worst_cell * inv;
  return rep;
}

inline GridCheckReport grid_check(const ContinuousQC& Q, std::size_t k = 100,
                                  double tol = 1e-9, double factor = 1.0) {
  if (k < 2) fail(Errc::InvalidArgument, "grid resolution must be at least 2");
  return grid_check_buffer(sample_grid(Q, k), k, tol, factor);
}

}  // namespace qcspan
