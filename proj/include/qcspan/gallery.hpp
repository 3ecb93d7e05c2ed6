#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcspan/bilinear.hpp"
#include "qcspan/continuous.hpp"
#include "qcspan/errors.hpp"
#include "qcspan/grid.hpp"

namespace qcspan {

/// Closed-form reference copulas: the product copula and the two
/// Frechet-Hoeffding bounds.
inline ContinuousQC named(const std::string& name) {
  ContinuousQC qc;
  if (name == "pi" || name == "Pi") {
    qc = ContinuousQC(
        "pi", [](double x, double y) { return x * y; },
        [](const Rational& x, const Rational& y) -> Rational { return x * y; });
  } else if (name == "m" || name == "M") {
    qc = ContinuousQC(
        "m", [](double x, double y) { return std::min(x, y); },
        [](const Rational& x, const Rational& y) -> Rational { return std::min(x, y); });
  } else if (name == "w" || name == "W") {
    qc = ContinuousQC(
        "w", [](double x, double y) { return std::max(x + y - 1.0, 0.0); },
        [](const Rational& x, const Rational& y) -> Rational { return std::max<Rational>(x + y - 1, 0); });
  } else {
    fail(Errc::UnknownName, "no closed-form oracle named '" + name + "'");
  }
  qc.set_quasi_copula_flag(true);
  qc.set_alignment_hint([](int) { return Mesh::equidistant(1); });
  return qc;
}

/// Proper discrete quasi-copula on the (2i+1)-equidistant mesh: (i+1)^2 cells
/// of mass +1/(2i+1) and i^2 cells of mass -1/(2i+1) alternating inside the
/// central diamond |i0-(i+1)| + |j0-(j+1)| <= i (1-based cells), zero outside.
inline GridFunction chessboard_diamond(int i) {
  if (i < 1) fail(Errc::InvalidArgument, "diamond level must be >= 1");
  const int n = 2 * i + 1;
  const Rational unit(1, n);
  RationalMatrix cells(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int j0 = 1; j0 <= n; ++j0)
    for (int i0 = 1; i0 <= n; ++i0) {
      const int d = std::abs(i0 - (i + 1)) + std::abs(j0 - (i + 1));
      if (d > i) continue;
      const bool positive = ((d - i) % 2) == 0;
      cells(static_cast<std::size_t>(j0 - 1), static_cast<std::size_t>(i0 - 1)) =
          positive ? unit : -unit;
    }
  return GridFunction::from_mass(Mesh::equidistant(static_cast<std::size_t>(n)), cells);
}

struct OrdinalComponent {
  Rational a, b;
  ContinuousQC qc;
};

/// Ordinal sum: rescaled components on diagonal blocks [a,b]^2, min(x,y)
/// elsewhere. Intervals must have positive length and disjoint interiors.
inline ContinuousQC ordinal_sum(std::vector<OrdinalComponent> components,
                                std::string name = "ordinal_sum") {
  std::sort(components.begin(), components.end(),
            [](const OrdinalComponent& l, const OrdinalComponent& r) { return l.a < r.a; });
  for (const auto& c : components) {
    if (!(c.a >= 0 && c.b <= 1 && c.a < c.b))
      fail(Errc::OverlappingIntervals, "component interval is degenerate or outside [0,1]");
    if (!c.qc.is_quasi_copula_flagged())
      fail(Errc::NotQuasiCopula, "ordinal sum component is not flagged quasi-copula");
  }
  for (std::size_t k = 0; k + 1 < components.size(); ++k)
    if (components[k].b > components[k + 1].a)
      fail(Errc::OverlappingIntervals, "component intervals overlap");

  auto comps = std::make_shared<std::vector<OrdinalComponent>>(std::move(components));
  struct Block {
    double a, b;
  };
  auto blocks = std::make_shared<std::vector<Block>>();
  bool exact_ok = true;
  for (const auto& c : *comps) {
    blocks->push_back(Block{to_double(c.a), to_double(c.b)});
    exact_ok = exact_ok && c.qc.has_exact();
  }

  ContinuousQC::DoubleFn f = [comps, blocks](double x, double y) {
    for (std::size_t k = 0; k < blocks->size(); ++k) {
      const auto& [a, b] = (*blocks)[k];
      if (x >= a && x <= b && y >= a && y <= b) {
        const double len = b - a;
        return a + len * (*comps)[k].qc((x - a) / len, (y - a) / len);
      }
    }
    return std::min(x, y);
  };
  ContinuousQC qc;
  if (exact_ok) {
    ContinuousQC::ExactFn fe = [comps](const Rational& x, const Rational& y) -> Rational {
      for (const auto& c : *comps)
        if (x >= c.a && x <= c.b && y >= c.a && y <= c.b) {
          const Rational len = c.b - c.a;
          return c.a + len * c.qc.exact((x - c.a) / len, (y - c.a) / len);
        }
      return std::min(x, y);
    };
    qc = ContinuousQC(std::move(name), std::move(f), std::move(fe));
  } else {
    qc = ContinuousQC(std::move(name), std::move(f));
  }
  qc.set_quasi_copula_flag(true);
  return qc;
}

namespace detail {

struct DiamondCache {
  std::mutex mu;
  std::map<int, ContinuousQC> blocks;

  const ContinuousQC& block(int i) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = blocks.find(i);
    if (it == blocks.end())
      it = blocks.emplace(i, extend(chessboard_diamond(i), "qhat" + std::to_string(i))).first;
    return it->second;
  }
};

// a_i = 1 - 2^{-i}; J_i = [a_{i-1}, a_i]
inline Rational block_lower(int i) {
  return Rational(Integer((Integer(1) << (i - 1)) - 1), Integer(Integer(1) << (i - 1)));
}
inline Rational block_width(int i) { return Rational(Integer(1), Integer(Integer(1) << i)); }

/// Smallest i with t < a_i (valid for 0 <= t < 1).
inline int block_of(double t) {
  int i = static_cast<int>(std::floor(-std::log2(1.0 - t))) + 1;
  i = std::max(i, 1);
  while (i > 1 && t < 1.0 - std::ldexp(1.0, -(i - 1))) --i;
  while (t >= 1.0 - std::ldexp(1.0, -i)) ++i;
  return i;
}

inline int block_of(const Rational& t) {
  int i = 1;
  while (!(t < 1 - block_width(i))) ++i;
  return i;
}

}  // namespace detail

/// Countable ordinal sum of the diamond quasi-copulas over J_i = [a_{i-1}, a_i]
/// with a_i = 1 - 2^{-i}. Induces a signed measure but has unbounded
/// positive-part strip ratios. Blocks are materialized lazily per level;
/// memoization is synchronized and value-deterministic.
inline ContinuousQC counterexample() {
  auto cache = std::make_shared<detail::DiamondCache>();

  ContinuousQC::DoubleFn f = [cache](double x, double y) {
    x = std::clamp(x, 0.0, 1.0);
    y = std::clamp(y, 0.0, 1.0);
    if (x >= 1.0 || y >= 1.0) return std::min(x, y);
    const int ix = detail::block_of(x);
    const int iy = detail::block_of(y);
    // beyond ~2^-60 the block formula is within noise of the min branch
    if (ix != iy || ix > 60) return std::min(x, y);
    const double a = 1.0 - std::ldexp(1.0, -(ix - 1));
    const double len = std::ldexp(1.0, -ix);
    return a + len * cache->block(ix)((x - a) / len, (y - a) / len);
  };
  ContinuousQC::ExactFn fe = [cache](const Rational& x, const Rational& y) -> Rational {
    if (x >= 1 || y >= 1) return std::min(x, y);
    const int ix = detail::block_of(x);
    const int iy = detail::block_of(y);
    if (ix != iy) return std::min(x, y);
    const Rational a = detail::block_lower(ix);
    const Rational len = detail::block_width(ix);
    return a + len * cache->block(ix).exact((x - a) / len, (y - a) / len);
  };

  ContinuousQC qc("counterexample", std::move(f), std::move(fe));
  qc.set_quasi_copula_flag(true);
  qc.set_alignment_hint([](int level) {
    // all block grid lines of J_1 .. J_level, plus the endpoint 1
    std::vector<Rational> pts{Rational(1)};
    for (int i = 1; i <= std::max(level, 1); ++i) {
      const Rational a = detail::block_lower(i);
      const Rational w = detail::block_width(i) / (2 * i + 1);
      for (int k = 0; k <= 2 * i + 1; ++k) pts.push_back(a + k * w);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return Mesh(pts, pts);
  });
  return qc;
}

/// Sum of 2^{-i} (i+1)^2 / (2i+1) over i <= blocks: the positive mass of the
/// counterexample restricted to its first blocks.
inline Rational truncated_positive_mass(int blocks) {
  Rational acc = 0;
  for (int i = 1; i <= blocks; ++i)
    acc += detail::block_width(i) * Rational((i + 1) * (i + 1), 2 * i + 1);
  return acc;
}

inline Rational truncated_negative_mass(int blocks) {
  Rational acc = 0;
  for (int i = 1; i <= blocks; ++i)
    acc -= detail::block_width(i) * Rational(i * i, 2 * i + 1);
  return acc;
}

// --- name-based lookup used by the command line ---

inline std::vector<std::string> gallery_names() {
  return {"pi", "m", "w", "q1", "q2", "q3", "diamond:<i>", "counterexample"};
}

inline std::optional<int> parse_diamond_name(const std::string& name) {
  if (name.rfind("diamond:", 0) != 0) return std::nullopt;
  const std::string arg = name.substr(8);
  if (arg.empty() || arg.find_first_not_of("0123456789") != std::string::npos)
    fail(Errc::UnknownName, "bad diamond level in '" + name + "'");
  return std::stoi(arg);
}

/// Continuous target for a gallery name.
inline ContinuousQC gallery_target(const std::string& name) {
  if (name == "pi" || name == "m" || name == "w") return named(name);
  if (name == "counterexample") return counterexample();
  if (name == "q1") return extend(chessboard_diamond(1), "q1");
  if (name == "q2") return extend(chessboard_diamond(2), "q2");
  if (name == "q3") return extend(chessboard_diamond(3), "q3");
  if (auto lvl = parse_diamond_name(name))
    return extend(chessboard_diamond(*lvl), "diamond" + std::to_string(*lvl));
  fail(Errc::UnknownName, "unknown gallery name '" + name + "'");
}

/// Grid for a gallery name; closed-form members need a mesh to restrict to.
inline GridFunction gallery_grid(const std::string& name, std::optional<int> mesh_n) {
  if (mesh_n) {
    if (*mesh_n < 1) fail(Errc::InvalidArgument, "mesh size must be >= 1");
    return restrict_to_mesh(gallery_target(name), Mesh::equidistant(static_cast<std::size_t>(*mesh_n)));
  }
  if (name == "q1") return chessboard_diamond(1);
  if (name == "q2") return chessboard_diamond(2);
  if (name == "q3") return chessboard_diamond(3);
  if (auto lvl = parse_diamond_name(name)) return chessboard_diamond(*lvl);
  if (name == "pi" || name == "m" || name == "w" || name == "counterexample")
    fail(Errc::InvalidArgument, "gallery '" + name + "' needs --mesh to emit a grid");
  fail(Errc::UnknownName, "unknown gallery name '" + name + "'");
}

}  // namespace qcspan
