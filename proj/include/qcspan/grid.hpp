#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qcspan/errors.hpp"
#include "qcspan/mesh.hpp"
#include "qcspan/rational.hpp"

namespace qcspan {

class GridFunction;

/// Cell volumes V_F(R_ij) of a grid function over the minimal rectangles of a
/// mesh. cells(j, i) is the volume of R_ij = [x_i, x_{i+1}] x [y_j, y_{j+1}].
struct MassMatrix {
  Mesh mesh;
  RationalMatrix cells;  // rows = cell_count_y, cols = cell_count_x

  Rational total() const {
    Rational t = 0;
    for (std::size_t j = 0; j < cells.rows(); ++j)
      for (std::size_t i = 0; i < cells.cols(); ++i) t += cells(j, i);
    return t;
  }
};

/// Exact rational values on mesh nodes. values(j, i) = F(xs[i], ys[j]) with
/// j running bottom (y = 0) to top (y = 1).
class GridFunction {
 public:
  static GridFunction from_values(Mesh mesh, RationalMatrix values) {
    if (values.rows() != mesh.node_count_y() || values.cols() != mesh.node_count_x())
      fail(Errc::DimensionMismatch, "value matrix does not match mesh");
    return GridFunction(std::move(mesh), std::move(values));
  }

  /// Grounded grid function whose cell volumes equal `cells` exactly.
  static GridFunction from_mass(Mesh mesh, const RationalMatrix& cells) {
    if (cells.rows() != mesh.cell_count_y() || cells.cols() != mesh.cell_count_x())
      fail(Errc::DimensionMismatch, "mass matrix does not match mesh");
    RationalMatrix vals(mesh.node_count_y(), mesh.node_count_x());
    for (std::size_t j = 1; j < mesh.node_count_y(); ++j) {
      Rational row_acc = 0;
      for (std::size_t i = 1; i < mesh.node_count_x(); ++i) {
        row_acc += cells(j - 1, i - 1);
        vals(j, i) = vals(j - 1, i) + row_acc;
      }
    }
    return GridFunction(std::move(mesh), std::move(vals));
  }

  static GridFunction from_mass(const MassMatrix& m) { return from_mass(m.mesh, m.cells); }

  /// Zero function on a mesh.
  static GridFunction zero(Mesh mesh) {
    RationalMatrix vals(mesh.node_count_y(), mesh.node_count_x());
    return GridFunction(std::move(mesh), std::move(vals));
  }

  const Mesh& mesh() const { return mesh_; }
  const RationalMatrix& values() const { return values_; }

  /// F(xs[i], ys[j]).
  const Rational& at(std::size_t i, std::size_t j) const { return values_(j, i); }

  Rational rect_volume(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) const {
    if (i1 >= mesh_.node_count_x() || j1 >= mesh_.node_count_y() || i0 >= i1 || j0 >= j1)
      fail(Errc::IndexOutOfRange, "rectangle indices out of range");
    return at(i1, j1) - at(i0, j1) - at(i1, j0) + at(i0, j0);
  }

  MassMatrix mass() const {
    RationalMatrix cells(mesh_.cell_count_y(), mesh_.cell_count_x());
    for (std::size_t j = 0; j < cells.rows(); ++j)
      for (std::size_t i = 0; i < cells.cols(); ++i)
        cells(j, i) = values_(j + 1, i + 1) - values_(j, i + 1) - values_(j + 1, i) + values_(j, i);
    return MassMatrix{mesh_, std::move(cells)};
  }

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  GridFunction(Mesh mesh, RationalMatrix values)
      : mesh_(std::move(mesh)), values_(std::move(values)) {}

  Mesh mesh_;
  RationalMatrix values_;
};

/// a*F + b*G on a shared mesh.
inline GridFunction affine(const Rational& a, const GridFunction& F, const Rational& b,
                           const GridFunction& G) {
  if (F.mesh() != G.mesh()) fail(Errc::MeshMismatch, "affine combination needs one mesh");
  RationalMatrix vals(F.values().rows(), F.values().cols());
  for (std::size_t j = 0; j < vals.rows(); ++j)
    for (std::size_t i = 0; i < vals.cols(); ++i)
      vals(j, i) = a * F.values()(j, i) + b * G.values()(j, i);
  return GridFunction::from_values(F.mesh(), std::move(vals));
}

inline GridFunction scaled(const Rational& a, const GridFunction& F) {
  return GridFunction::from_values(F.mesh(), F.values().scaled(a));
}

/// Pointwise F <= G on all nodes.
inline bool pointwise_leq(const GridFunction& F, const GridFunction& G) {
  if (F.mesh() != G.mesh()) fail(Errc::MeshMismatch, "comparison needs one mesh");
  for (std::size_t j = 0; j < F.values().rows(); ++j)
    for (std::size_t i = 0; i < F.values().cols(); ++i)
      if (F.values()(j, i) > G.values()(j, i)) return false;
  return true;
}

/// The product copula restricted to a mesh: Pi(x, y) = x*y at every node.
inline GridFunction product_grid(const Mesh& mesh) {
  RationalMatrix vals(mesh.node_count_y(), mesh.node_count_x());
  for (std::size_t j = 0; j < vals.rows(); ++j)
    for (std::size_t i = 0; i < vals.cols(); ++i) vals(j, i) = mesh.xs()[i] * mesh.ys()[j];
  return GridFunction::from_values(mesh, std::move(vals));
}

struct Violation {
  std::string property;
  std::size_t i, j;  // node or cell location
  std::string witness;
};

struct ValidationReport {
  bool is_grounded = true;
  bool has_uniform_marginals = true;
  bool is_increasing = true;
  bool is_lipschitz = true;
  bool is_two_increasing = true;
  std::vector<Violation> violations;

  bool is_quasi_copula() const {
    return is_grounded && has_uniform_marginals && is_increasing && is_lipschitz;
  }
  bool is_copula() const { return is_grounded && has_uniform_marginals && is_two_increasing; }
};

/// Check the discrete axioms exactly. Monotonicity and the Lipschitz bound are
/// checked on adjacent node pairs along grid lines, which is equivalent to the
/// all-pairs definition on a mesh.
inline ValidationReport validate(const GridFunction& F) {
  ValidationReport rep;
  const Mesh& m = F.mesh();
  const std::size_t nx = m.node_count_x(), ny = m.node_count_y();
  auto flag = [&rep](bool& field, const char* prop, std::size_t i, std::size_t j,
                     const std::string& witness) {
    field = false;
    rep.violations.push_back(Violation{prop, i, j, witness});
  };

  for (std::size_t i = 0; i < nx; ++i)
    if (F.at(i, 0) != 0)
      flag(rep.is_grounded, "grounded", i, 0, format_rational(F.at(i, 0)));
  for (std::size_t j = 0; j < ny; ++j)
    if (F.at(0, j) != 0)
      flag(rep.is_grounded, "grounded", 0, j, format_rational(F.at(0, j)));

  for (std::size_t i = 0; i < nx; ++i)
    if (F.at(i, ny - 1) != m.xs()[i])
      flag(rep.has_uniform_marginals, "uniform_marginals", i, ny - 1,
           format_rational(F.at(i, ny - 1)) + " != " + format_rational(m.xs()[i]));
  for (std::size_t j = 0; j < ny; ++j)
    if (F.at(nx - 1, j) != m.ys()[j])
      flag(rep.has_uniform_marginals, "uniform_marginals", nx - 1, j,
           format_rational(F.at(nx - 1, j)) + " != " + format_rational(m.ys()[j]));

  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const Rational d = F.at(i + 1, j) - F.at(i, j);
      if (d < 0) flag(rep.is_increasing, "increasing_x", i, j, format_rational(d));
      if (rational_abs(d) > m.cell_width(i))
        flag(rep.is_lipschitz, "lipschitz_x", i, j, format_rational(d));
    }
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      const Rational d = F.at(i, j + 1) - F.at(i, j);
      if (d < 0) flag(rep.is_increasing, "increasing_y", i, j, format_rational(d));
      if (rational_abs(d) > m.cell_height(j))
        flag(rep.is_lipschitz, "lipschitz_y", i, j, format_rational(d));
    }

  const MassMatrix mm = F.mass();
  for (std::size_t j = 0; j < mm.cells.rows(); ++j)
    for (std::size_t i = 0; i < mm.cells.cols(); ++i)
      if (mm.cells(j, i) < 0)
        flag(rep.is_two_increasing, "two_increasing", i, j, format_rational(mm.cells(j, i)));

  return rep;
}

inline bool is_discrete_quasi_copula(const GridFunction& F) {
  return validate(F).is_quasi_copula();
}
inline bool is_discrete_copula(const GridFunction& F) { return validate(F).is_copula(); }

struct StripSums {
  std::vector<Rational> column_volumes;  // V_F([x_i, x_{i+1}] x I)
  std::vector<Rational> column_ratios;   // volume / strip width
  std::vector<Rational> row_volumes;     // V_F(I x [y_j, y_{j+1}])
  std::vector<Rational> row_ratios;      // volume / strip height
  Rational max_ratio = 0;
  bool max_on_column = true;
  std::size_t max_index = 0;
};

inline StripSums strip_sums(const GridFunction& F) {
  const Mesh& m = F.mesh();
  StripSums s;
  const std::size_t nx = m.node_count_x(), ny = m.node_count_y();
  bool first = true;
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    const Rational vol = F.rect_volume(i, i + 1, 0, ny - 1);
    const Rational ratio = vol / m.cell_width(i);
    s.column_volumes.push_back(vol);
    s.column_ratios.push_back(ratio);
    if (first || ratio > s.max_ratio) {
      s.max_ratio = ratio;
      s.max_on_column = true;
      s.max_index = i;
      first = false;
    }
  }
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    const Rational vol = F.rect_volume(0, nx - 1, j, j + 1);
    const Rational ratio = vol / m.cell_height(j);
    s.row_volumes.push_back(vol);
    s.row_ratios.push_back(ratio);
    if (ratio > s.max_ratio) {
      s.max_ratio = ratio;
      s.max_on_column = false;
      s.max_index = j;
    }
  }
  return s;
}

}  // namespace qcspan
