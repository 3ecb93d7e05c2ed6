#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qcspan/bilinear.hpp"
#include "qcspan/continuous.hpp"
#include "qcspan/decomposition.hpp"
#include "qcspan/errors.hpp"
#include "qcspan/grid.hpp"

namespace qcspan {

/// One stage of the approximation pipeline: the target restricted to the
/// n-subinterval equidistant mesh, split into two copulas against the product
/// base, and extended back to the unit square. Qhat agrees with the target at
/// every stage-mesh node.
struct Stage {
  int n = 0;
  Mesh mesh = Mesh::equidistant(1);
  Rational alpha, beta;
  GridFunction restriction = GridFunction::zero(Mesh::equidistant(1));
  ContinuousQC Ahat, Bhat, Qhat;
};

inline Stage build_stage(const ContinuousQC& Q, int n) {
  if (n < 1) fail(Errc::InvalidArgument, "stage index must be >= 1");
  Stage s;
  s.n = n;
  s.mesh = Mesh::equidistant(static_cast<std::size_t>(n));
  s.restriction = restrict_to_mesh(Q, s.mesh);
  AffinePair pair = two_copula_split(s.restriction);
  s.alpha = pair.alpha1;
  s.beta = pair.alpha2;
  const std::string tag = std::to_string(n);
  s.Ahat = extend(pair.C1, "Ahat" + tag);
  s.Bhat = extend(pair.C2, "Bhat" + tag);
  s.Qhat = extend(s.restriction, "Qhat" + tag);  // equals alpha*Ahat + beta*Bhat pointwise
  return s;
}

/// Telescoping difference Qhat_{n+1} - Qhat_n rewritten as zeta*D + xi*E with
/// D, E convex combinations of the stage copulas (hence copulas themselves),
/// zeta >= 1 and xi <= -1.
struct TelescopeTerm {
  int n = 0;
  Rational zeta, xi;
  ContinuousQC D, E;
};

inline TelescopeTerm telescope(const Stage& s, const Stage& t) {
  if (t.n != s.n + 1) fail(Errc::StagesNotConsecutive, "telescope needs stages n and n+1");
  TelescopeTerm term;
  term.n = s.n;
  term.zeta = t.alpha - s.beta;
  term.xi = t.beta - s.alpha;
  const std::string tag = std::to_string(s.n);
  term.D = affine_combination(
      "D" + tag, {{t.alpha / term.zeta, t.Ahat}, {-s.beta / term.zeta, s.Bhat}});
  term.E = affine_combination(
      "E" + tag, {{t.beta / term.xi, t.Bhat}, {-s.alpha / term.xi, s.Ahat}});
  term.D.set_quasi_copula_flag(true);
  term.E.set_quasi_copula_flag(true);

  // probe the identity zeta*D + xi*E = Qhat_{n+1} - Qhat_n
  const double zd = to_double(term.zeta), xd = to_double(term.xi);
  constexpr std::size_t probe = 16;
  for (std::size_t j = 0; j <= probe; ++j)
    for (std::size_t i = 0; i <= probe; ++i) {
      const double x = static_cast<double>(i) / probe, y = static_cast<double>(j) / probe;
      const double lhs = zd * term.D(x, y) + xd * term.E(x, y);
      const double rhs = t.Qhat(x, y) - s.Qhat(x, y);
      if (std::abs(lhs - rhs) > 1e-9)
        fail(Errc::BoundViolated, "telescoping identity failed at stage " + tag);
    }
  return term;
}

struct SeriesTerm {
  int stage = 0;
  char role = 'D';  // 'D' or 'E'
  Rational gamma;
  long repetitions = 0;  // K_n of the owning stage
};

/// Flat expansion of the telescoping series: the head alpha_1*Ahat_1 +
/// beta_1*Bhat_1 followed, for each stage n, by n*K_n alternating repetitions
/// of (zeta_n/(n K_n)) D_n and (xi_n/(n K_n)) E_n, with K_n the smallest
/// integer exceeding |xi_n|.
class CopulaSeries {
 public:
  std::vector<Stage> stages;          // stage p at index p-1, p = 1..N+1
  std::vector<TelescopeTerm> blocks;  // block n at index n-1, n = 1..N
  std::vector<long> K;                // K_n at index n-1
  std::vector<SeriesTerm> terms;      // flattened series after the head
  std::vector<std::size_t> block_end;  // terms consumed through block n

  const Rational& alpha1() const { return stages.front().alpha; }
  const Rational& beta1() const { return stages.front().beta; }
  const ContinuousQC& Ahat1() const { return stages.front().Ahat; }
  const ContinuousQC& Bhat1() const { return stages.front().Bhat; }
  std::size_t size() const { return terms.size(); }
};

inline CopulaSeries expand(const ContinuousQC& Q, int N) {
  if (N < 1) fail(Errc::InvalidArgument, "need at least one stage");
  CopulaSeries series;
  series.stages.reserve(static_cast<std::size_t>(N) + 1);
  for (int n = 1; n <= N + 1; ++n) series.stages.push_back(build_stage(Q, n));
  for (int n = 1; n <= N; ++n) {
    const TelescopeTerm term = telescope(series.stages[n - 1], series.stages[n]);
    const long k = rational_floor(-term.xi).convert_to<long>() + 1;
    const long reps = static_cast<long>(n) * k;
    const Rational gamma_d = term.zeta / reps;
    const Rational gamma_e = term.xi / reps;
    for (long r = 0; r < reps; ++r) {
      series.terms.push_back(SeriesTerm{n, 'D', gamma_d, k});
      series.terms.push_back(SeriesTerm{n, 'E', gamma_e, k});
    }
    series.K.push_back(k);
    series.blocks.push_back(term);
    series.block_end.push_back(series.terms.size());
  }
  return series;
}

/// Exact sum of the head coefficients plus the first j flat coefficients.
inline Rational coefficient_prefix_sum(const CopulaSeries& series, std::size_t j) {
  if (j > series.size()) fail(Errc::IndexOutOfRange, "prefix exceeds series length");
  Rational acc = series.alpha1() + series.beta1();
  for (std::size_t t = 0; t < j; ++t) acc += series.terms[t].gamma;
  return acc;
}

struct PartialSumInfo {
  enum class Form { ConvexOfStages, ScaledQC } form = Form::ConvexOfStages;
  int p = 1;       // stage whose block the cut falls in
  long k = 0;      // completed (D, E) pairs within the block
  Rational factor; // >= 1; the sum divided by this factor is a quasi-copula
};

/// Closed form of the partial sum after the head plus j flat terms: either a
/// convex combination of Qhat_p and Qhat_{p+1}, or that plus a single
/// (zeta_p/(p K_p)) D_p term, which makes it a (1 + zeta_p/(p K_p)) multiple
/// of a quasi-copula.
inline std::pair<ContinuousQC, PartialSumInfo> partial_sum(const CopulaSeries& series,
                                                           std::size_t j) {
  if (j > series.size()) fail(Errc::IndexOutOfRange, "partial sum index exceeds series");
  PartialSumInfo info;
  info.factor = 1;
  if (j == 0) {
    info.p = 1;
    info.k = 0;
    ContinuousQC head = affine_combination(
        "psum0", {{series.alpha1(), series.Ahat1()}, {series.beta1(), series.Bhat1()}});
    head.set_quasi_copula_flag(true);
    return {std::move(head), info};
  }
  std::size_t p = 1, begin = 0;
  while (series.block_end[p - 1] < j) {
    begin = series.block_end[p - 1];
    ++p;
  }
  const std::size_t r = j - begin;
  const long pk = static_cast<long>(p) * series.K[p - 1];
  const Stage& lo = series.stages[p - 1];
  const Stage& hi = series.stages[p];
  const TelescopeTerm& blk = series.blocks[p - 1];
  info.p = static_cast<int>(p);
  const std::string nm = "psum" + std::to_string(j);
  if (r % 2 == 0) {
    info.form = PartialSumInfo::Form::ConvexOfStages;
    info.k = static_cast<long>(r / 2);
    const Rational w(info.k, pk);
    ContinuousQC qc = affine_combination(nm, {{1 - w, lo.Qhat}, {w, hi.Qhat}});
    qc.set_quasi_copula_flag(true);
    return {std::move(qc), info};
  }
  info.form = PartialSumInfo::Form::ScaledQC;
  info.k = static_cast<long>((r + 1) / 2);
  const Rational w(info.k - 1, pk);
  const Rational extra = blk.zeta / pk;
  info.factor = 1 + extra;
  ContinuousQC qc = affine_combination(nm, {{1 - w, lo.Qhat}, {w, hi.Qhat}, {extra, blk.D}});
  return {std::move(qc), info};
}

struct ErrorCertificate {
  int stage = 0;
  double bound = 0;     // 4 / stage
  double measured = 0;  // sup distance on the grid
};

/// Measured sup distance between the target and the stage-p approximant,
/// certified against the 4/p bound.
inline ErrorCertificate error_certificate(const ContinuousQC& Q, const CopulaSeries& series,
                                          int p, std::size_t grid_k) {
  if (p < 1 || static_cast<std::size_t>(p) > series.stages.size())
    fail(Errc::IndexOutOfRange, "stage " + std::to_string(p) + " not built");
  ErrorCertificate cert;
  cert.stage = p;
  cert.bound = 4.0 / p;
  cert.measured = sup_distance_on_grid(Q, series.stages[static_cast<std::size_t>(p) - 1].Qhat,
                                       grid_k);
  if (cert.measured > cert.bound + 1e-9)
    fail(Errc::BoundViolated, "stage " + std::to_string(p) + " error " +
                                  std::to_string(cert.measured) + " exceeds 4/" +
                                  std::to_string(p));
  return cert;
}

struct PartialSumSweep {
  std::size_t checked = 0;
  double max_violation = 0;
  bool all_ok = true;
};

/// Verify that every partial sum, divided by its declared factor, passes the
/// quasi-copula checks on an equidistant grid. Uses the closed forms: within
/// block p the running sum moves by gamma_D * D_p and gamma_E * E_p only, so
/// each partial sum is one vector update of a sample buffer. The buffer is
/// re-seeded from Qhat_p at each block boundary to keep float drift local.
inline PartialSumSweep check_partial_sums_on_grid(const CopulaSeries& series,
                                                  std::size_t grid_k = 100,
                                                  double tol = 1e-9) {
  PartialSumSweep sweep;
  auto digest = [&sweep, tol](const GridCheckReport& rep) {
    const double worst =
        std::max({rep.max_groundedness_error, rep.max_marginal_error,
                  rep.max_monotonicity_violation, rep.max_lipschitz_excess});
    sweep.max_violation = std::max(sweep.max_violation, worst);
    sweep.all_ok = sweep.all_ok && worst <= tol;
    ++sweep.checked;
  };

  digest(grid_check_buffer(sample_grid(series.stages.front().Qhat, grid_k), grid_k, tol));

  const std::size_t pts = (grid_k + 1) * (grid_k + 1);
  for (std::size_t b = 0; b < series.blocks.size(); ++b) {
    const TelescopeTerm& blk = series.blocks[b];
    const long pk = static_cast<long>(blk.n) * series.K[b];
    std::vector<double> acc = sample_grid(series.stages[b].Qhat, grid_k);
    const std::vector<double> d = sample_grid(blk.D, grid_k);
    const std::vector<double> e = sample_grid(blk.E, grid_k);
    const double gd = to_double(blk.zeta) / static_cast<double>(pk);
    const double ge = to_double(blk.xi) / static_cast<double>(pk);
    const double mid_factor = 1.0 + gd;
    for (long r = 0; r < pk; ++r) {
      for (std::size_t q = 0; q < pts; ++q) acc[q] += gd * d[q];
      digest(grid_check_buffer(acc, grid_k, tol, mid_factor));
      for (std::size_t q = 0; q < pts; ++q) acc[q] += ge * e[q];
      digest(grid_check_buffer(acc, grid_k, tol));
    }
  }
  return sweep;
}

}  // namespace qcspan
