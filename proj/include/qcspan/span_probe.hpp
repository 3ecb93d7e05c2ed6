#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcspan/bilinear.hpp"
#include "qcspan/continuous.hpp"
#include "qcspan/domination.hpp"
#include "qcspan/errors.hpp"
#include "qcspan/grid.hpp"

namespace qcspan {

/// Sequence of probe meshes. Dyadic level n is the 2^n-equidistant mesh;
/// aligned level n is the common refinement of a base mesh with the dyadic
/// one, so the maximum gap still vanishes. The base may depend on the level,
/// which lets targets with block structure expose one more block per level.
class MeshFamily {
 public:
  static MeshFamily dyadic() { return MeshFamily{}; }

  static MeshFamily aligned(Mesh base) {
    MeshFamily f;
    f.base_ = [base = std::move(base)](int) { return base; };
    return f;
  }

  static MeshFamily aligned(std::function<Mesh(int)> base_for_level) {
    MeshFamily f;
    f.base_ = std::move(base_for_level);
    return f;
  }

  bool is_aligned() const { return static_cast<bool>(base_); }
  const char* name() const { return base_ ? "aligned" : "dyadic"; }

  Mesh mesh_for_level(int n) const {
    if (n < 1) fail(Errc::InvalidArgument, "level must be >= 1");
    if (n > 24) fail(Errc::InvalidArgument, "level too deep: 2^n mesh would not fit in memory");
    Mesh dy = Mesh::equidistant(std::size_t{1} << n);
    if (!base_) return dy;
    return Mesh::common_refinement(base_(n), dy);
  }

 private:
  std::function<Mesh(int)> base_;
};

struct AlphaEntry {
  int level = 0;
  Rational alpha;
  Rational max_gap;
};

namespace detail {

/// Largest positive-part strip sum over strip width, over both axes.
inline Rational positive_strip_ratio(const GridFunction& G) {
  const MassMatrix mm = G.mass();
  const Mesh& m = G.mesh();
  Rational best = 0;
  for (std::size_t i = 0; i < mm.cells.cols(); ++i) {
    Rational sum = 0;
    for (std::size_t j = 0; j < mm.cells.rows(); ++j)
      if (mm.cells(j, i) > 0) sum += mm.cells(j, i);
    best = std::max(best, Rational(sum / m.cell_width(i)));
  }
  for (std::size_t j = 0; j < mm.cells.rows(); ++j) {
    Rational sum = 0;
    for (std::size_t i = 0; i < mm.cells.cols(); ++i)
      if (mm.cells(j, i) > 0) sum += mm.cells(j, i);
    best = std::max(best, Rational(sum / m.cell_height(j)));
  }
  return best;
}

inline GridFunction positive_part_grid(const GridFunction& G) {
  const MassMatrix mm = G.mass();
  RationalMatrix pos(mm.cells.rows(), mm.cells.cols());
  for (std::size_t j = 0; j < pos.rows(); ++j)
    for (std::size_t i = 0; i < pos.cols(); ++i)
      if (mm.cells(j, i) > 0) pos(j, i) = mm.cells(j, i);
  return GridFunction::from_mass(G.mesh(), pos);
}

}  // namespace detail

/// Per-level maxima of positive-part strip sums over widths; exact whenever
/// the restriction is exact.
inline std::vector<AlphaEntry> alpha_sequence(const ContinuousQC& Q, const MeshFamily& family,
                                              int levels) {
  if (levels < 1) fail(Errc::InvalidArgument, "need at least one level");
  std::vector<AlphaEntry> out;
  out.reserve(static_cast<std::size_t>(levels));
  for (int n = 1; n <= levels; ++n) {
    const Mesh mesh = family.mesh_for_level(n);
    const GridFunction G = restrict_to_mesh(Q, mesh);
    out.push_back(AlphaEntry{n, detail::positive_strip_ratio(G), mesh.max_gap()});
  }
  return out;
}

enum class SpanVerdict { InSpan, LikelyNotInSpan, Inconclusive };

inline const char* verdict_name(SpanVerdict v) {
  switch (v) {
    case SpanVerdict::InSpan: return "InSpan";
    case SpanVerdict::LikelyNotInSpan: return "LikelyNotInSpan";
    case SpanVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

struct SpanReport {
  std::vector<AlphaEntry> alphas;
  SpanVerdict verdict = SpanVerdict::Inconclusive;
  Rational alpha_estimate;  // sup of the recorded levels
  Rational norm_estimate;   // 2 * alpha_estimate - 1
  std::string evidence;
};

/// Finite-depth decision rule (heuristic; the true criterion is a supremum
/// over all levels): stable when the last three levels agree within 1e-6
/// relative, divergent when each of the last three increments grew by >= 1.
inline SpanReport span_verdict(std::vector<AlphaEntry> alphas) {
  if (alphas.size() < 4) fail(Errc::TooFewLevels, "verdict needs at least 4 levels");
  SpanReport rep;
  rep.alphas = std::move(alphas);
  const std::size_t n = rep.alphas.size();

  Rational sup = 0;
  for (const auto& e : rep.alphas) sup = std::max(sup, e.alpha);
  rep.alpha_estimate = sup;
  rep.norm_estimate = 2 * sup - 1;

  const Rational a1 = rep.alphas[n - 3].alpha, a2 = rep.alphas[n - 2].alpha,
                 a3 = rep.alphas[n - 1].alpha;
  const Rational mx = std::max({a1, a2, a3}), mn = std::min({a1, a2, a3});
  const Rational rel_tol(1, 1000000);
  if (mx - mn <= rel_tol * mx) {
    rep.verdict = SpanVerdict::InSpan;
    rep.evidence = "last 3 levels within 1e-6 relative (heuristic stabilization rule)";
    return rep;
  }
  bool growing = n >= 4;
  for (std::size_t k = n - 3; k < n && growing; ++k)
    growing = rep.alphas[k].alpha - rep.alphas[k - 1].alpha >= 1;
  if (growing) {
    rep.verdict = SpanVerdict::LikelyNotInSpan;
    rep.evidence = "alpha grew by >= 1 over each of the last 3 increments (heuristic growth rule)";
    return rep;
  }
  rep.verdict = SpanVerdict::Inconclusive;
  rep.evidence = "neither the stabilization nor the growth rule fired (heuristic)";
  return rep;
}

/// Minkowski-norm estimate 2*alpha - 1; only meaningful once the sequence
/// stabilized.
inline Rational norm_estimate(const SpanReport& rep) {
  if (rep.verdict != SpanVerdict::InSpan)
    fail(Errc::NotInSpan, "norm estimate requires an InSpan verdict");
  return rep.norm_estimate;
}

/// Finite-level version of the constructive two-copula split: C extends the
/// upper dominating copula of the positive part at this level, and D is the
/// complementary term (Q - alpha*C)/(1 - alpha). When Q lies in the span and
/// the level resolves its mass, D's grid cell masses are nonnegative up to
/// tolerance.
struct ConstructiveSplit {
  int level = 0;
  Rational alpha;
  ContinuousQC C;
  std::optional<ContinuousQC> D;
  bool q_is_copula = false;                 // alpha == 1 at this level
  double min_cell_mass = std::numeric_limits<double>::quiet_NaN();
  bool d_copula_ok = false;                 // cell masses >= -tol at resolution 101
};

inline ConstructiveSplit constructive_split(const ContinuousQC& Q, const MeshFamily& family,
                                            int level, double tol = 1e-9) {
  const Mesh mesh = family.mesh_for_level(level);
  const GridFunction G = restrict_to_mesh(Q, mesh);
  const GridFunction A = detail::positive_part_grid(G);
  ConstructiveSplit out;
  out.level = level;
  out.alpha = alpha_mass(A);
  out.C = extend(upper_bound_copula(A), "C" + std::to_string(level));
  if (out.alpha == 1) {
    out.q_is_copula = true;
    return out;
  }
  const Rational denom = 1 - out.alpha;  // negative
  ContinuousQC D = affine_combination("D" + std::to_string(level),
                                      {{Rational(1) / denom, Q}, {-out.alpha / denom, out.C}});
  const GridCheckReport rep = grid_check(D, 100, tol);
  out.min_cell_mass = rep.min_cell_mass;
  out.d_copula_ok = rep.copula_ok();
  out.D = std::move(D);
  return out;
}

}  // namespace qcspan
