#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qcspan/continuous.hpp"
#include "qcspan/errors.hpp"
#include "qcspan/grid.hpp"

namespace qcspan {

namespace detail {

/// Index of the cell containing t, assigning boundary points to the cell on
/// their lower-left. The choice is value-irrelevant by continuity.
template <typename T>
std::size_t cell_index(const std::vector<T>& breaks, const T& t) {
  auto it = std::lower_bound(breaks.begin(), breaks.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - breaks.begin());
  if (idx > 0) --idx;                                  // left neighbour of the insertion point
  return std::min(idx, breaks.size() - 2);
}

struct ExtendData {
  explicit ExtendData(GridFunction g) : grid(std::move(g)) {}
  GridFunction grid;
  std::vector<double> xs, ys;   // breakpoints as doubles
  std::vector<double> vals;     // node values as doubles, row-major bottom to top
};

}  // namespace detail

/// Piecewise-bilinear extension of a grid function to the unit square. Agrees
/// with F exactly at the nodes; within each cell the mass density is uniform.
/// The result carries an exact channel and is flagged quasi-copula exactly
/// when the grid validates as a discrete quasi-copula.
inline ContinuousQC extend(const GridFunction& F, std::string name = {}) {
  if (name.empty()) name = "bilinear[" + std::to_string(F.mesh().cell_count_x()) + "x" +
                           std::to_string(F.mesh().cell_count_y()) + "]";
  auto data = std::make_shared<detail::ExtendData>(F);
  data->xs.reserve(F.mesh().node_count_x());
  data->ys.reserve(F.mesh().node_count_y());
  for (const Rational& x : F.mesh().xs()) data->xs.push_back(to_double(x));
  for (const Rational& y : F.mesh().ys()) data->ys.push_back(to_double(y));
  data->vals.resize(F.values().rows() * F.values().cols());
  for (std::size_t j = 0; j < F.values().rows(); ++j)
    for (std::size_t i = 0; i < F.values().cols(); ++i)
      data->vals[j * F.values().cols() + i] = to_double(F.values()(j, i));

  ContinuousQC::DoubleFn f = [data](double x, double y) {
    x = std::clamp(x, 0.0, 1.0);
    y = std::clamp(y, 0.0, 1.0);
    const std::size_t ci = detail::cell_index(data->xs, x);
    const std::size_t cj = detail::cell_index(data->ys, y);
    const std::size_t nx = data->xs.size();
    const double u = (x - data->xs[ci]) / (data->xs[ci + 1] - data->xs[ci]);
    const double v = (y - data->ys[cj]) / (data->ys[cj + 1] - data->ys[cj]);
    const double f00 = data->vals[cj * nx + ci], f10 = data->vals[cj * nx + ci + 1];
    const double f01 = data->vals[(cj + 1) * nx + ci], f11 = data->vals[(cj + 1) * nx + ci + 1];
    return (1 - u) * (1 - v) * f00 + u * (1 - v) * f10 + (1 - u) * v * f01 + u * v * f11;
  };
  // explicit return type: the bilinear form must collapse from boost's
  // expression templates while the cell locals are still alive
  ContinuousQC::ExactFn fe = [data](const Rational& x, const Rational& y) -> Rational {
    const Mesh& m = data->grid.mesh();
    const std::size_t ci = detail::cell_index(m.xs(), x);
    const std::size_t cj = detail::cell_index(m.ys(), y);
    const Rational u = (x - m.xs()[ci]) / m.cell_width(ci);
    const Rational v = (y - m.ys()[cj]) / m.cell_height(cj);
    const Rational f00 = data->grid.at(ci, cj), f10 = data->grid.at(ci + 1, cj);
    const Rational f01 = data->grid.at(ci, cj + 1), f11 = data->grid.at(ci + 1, cj + 1);
    return (1 - u) * (1 - v) * f00 + u * (1 - v) * f10 + (1 - u) * v * f01 + u * v * f11;
  };

  ContinuousQC qc(std::move(name), std::move(f), std::move(fe));
  qc.set_quasi_copula_flag(validate(F).is_quasi_copula());
  const Mesh mesh_copy = F.mesh();
  qc.set_alignment_hint([mesh_copy](int) { return mesh_copy; });
  return qc;
}

/// Sample a continuous oracle on mesh nodes. Oracles with an exact channel
/// are sampled exactly; otherwise values are rounded to the nearest rational
/// with denominator at most max_den and, when the oracle is flagged as a
/// quasi-copula, the rounded grid is re-validated.
inline GridFunction restrict_to_mesh(const ContinuousQC& Q, const Mesh& mesh,
                                     std::uint64_t max_den = (std::uint64_t{1} << 32)) {
  RationalMatrix vals(mesh.node_count_y(), mesh.node_count_x());
  if (Q.has_exact()) {
    for (std::size_t j = 0; j < vals.rows(); ++j)
      for (std::size_t i = 0; i < vals.cols(); ++i)
        vals(j, i) = Q.exact(mesh.xs()[i], mesh.ys()[j]);
    return GridFunction::from_values(mesh, std::move(vals));
  }
  for (std::size_t j = 0; j < vals.rows(); ++j) {
    const double y = to_double(mesh.ys()[j]);
    for (std::size_t i = 0; i < vals.cols(); ++i)
      vals(j, i) = best_rational(Q(to_double(mesh.xs()[i]), y), max_den);
  }
  GridFunction G = GridFunction::from_values(mesh, std::move(vals));
  if (Q.is_quasi_copula_flagged() && !is_discrete_quasi_copula(G))
    fail(Errc::RoundingBrokeAxioms,
         "rounded restriction of '" + Q.name() + "' fails the quasi-copula axioms");
  return G;
}

}  // namespace qcspan
