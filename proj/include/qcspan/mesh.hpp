#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "qcspan/errors.hpp"
#include "qcspan/rational.hpp"

namespace qcspan {

/// Breakpoints of a rectangular mesh of the unit square. Both axes run from 0
/// to 1 with strictly increasing entries; rectangular (non-square) meshes are
/// allowed.
class Mesh {
 public:
  Mesh(std::vector<Rational> xs, std::vector<Rational> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    check_axis(xs_, "x");
    check_axis(ys_, "y");
  }

  /// Equidistant mesh with n subintervals on both axes.
  static Mesh equidistant(std::size_t n) { return equidistant(n, n); }

  static Mesh equidistant(std::size_t nx, std::size_t ny) {
    return Mesh(equidistant_axis(nx), equidistant_axis(ny));
  }

  static std::vector<Rational> equidistant_axis(std::size_t n) {
    if (n < 1) fail(Errc::TooFew, "axis needs at least one subinterval");
    std::vector<Rational> pts;
    pts.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) pts.emplace_back(Integer(k), Integer(n));
    return pts;
  }

  const std::vector<Rational>& xs() const { return xs_; }
  const std::vector<Rational>& ys() const { return ys_; }

  std::size_t node_count_x() const { return xs_.size(); }
  std::size_t node_count_y() const { return ys_.size(); }
  std::size_t cell_count_x() const { return xs_.size() - 1; }
  std::size_t cell_count_y() const { return ys_.size() - 1; }

  Rational cell_width(std::size_t i) const { return xs_[i + 1] - xs_[i]; }
  Rational cell_height(std::size_t j) const { return ys_[j + 1] - ys_[j]; }
  Rational cell_area(std::size_t i, std::size_t j) const {
    return cell_width(i) * cell_height(j);
  }

  Rational max_gap() const {
    Rational g = 0;
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) g = std::max(g, cell_width(i));
    for (std::size_t j = 0; j + 1 < ys_.size(); ++j) g = std::max(g, cell_height(j));
    return g;
  }

  friend bool operator==(const Mesh&, const Mesh&) = default;

  /// Union of the breakpoints of two meshes, per axis.
  static Mesh common_refinement(const Mesh& a, const Mesh& b) {
    return Mesh(merge_axis(a.xs_, b.xs_), merge_axis(a.ys_, b.ys_));
  }

 private:
  static std::vector<Rational> merge_axis(const std::vector<Rational>& a,
                                          const std::vector<Rational>& b) {
    std::vector<Rational> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  static void check_axis(const std::vector<Rational>& v, const char* axis) {
    if (v.size() < 2) fail(Errc::TooFew, std::string(axis) + " axis needs >= 2 breakpoints");
    if (v.front() != 0 || v.back() != 1)
      fail(Errc::EndpointsNotUnit, std::string(axis) + " axis must run from 0 to 1");
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
      if (!(v[k] < v[k + 1]))
        fail(Errc::NotSorted, std::string(axis) + " axis not strictly increasing");
  }

  std::vector<Rational> xs_, ys_;
};

/// Convenience constructor mirroring the two-list signature.
inline Mesh mesh_new(std::vector<Rational> xs, std::vector<Rational> ys) {
  return Mesh(std::move(xs), std::move(ys));
}

}  // namespace qcspan
