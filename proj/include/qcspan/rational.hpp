#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcspan {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Largest integer <= r (works for negative values too).
inline Integer rational_floor(const Rational& r) {
  Integer q = numerator(r) / denominator(r);
  if (r < 0 && q * denominator(r) != numerator(r)) --q;
  return q;
}

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// "p/q" with q > 1, plain "p" otherwise. Always in lowest terms.
inline std::string format_rational(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Strict parser for "p" or "p/q" with optional leading '-'. Anything else is rejected.
inline bool try_parse_rational(std::string_view s, Rational& out) {
  auto parse_int = [](std::string_view t, Integer& v, bool allow_sign) -> bool {
    if (t.empty()) return false;
    bool neg = false;
    std::size_t k = 0;
    if (allow_sign && (t[0] == '-')) {
      neg = true;
      k = 1;
      if (t.size() == 1) return false;
    }
    Integer acc = 0;
    for (; k < t.size(); ++k) {
      if (t[k] < '0' || t[k] > '9') return false;
      acc = acc * 10 + (t[k] - '0');
    }
    v = neg ? Integer(-acc) : acc;
    return true;
  };
  const auto slash = s.find('/');
  Integer num, den = 1;
  if (slash == std::string_view::npos) {
    if (!parse_int(s, num, true)) return false;
  } else {
    if (!parse_int(s.substr(0, slash), num, true)) return false;
    if (!parse_int(s.substr(slash + 1), den, false)) return false;
    if (den == 0) return false;
  }
  out = Rational(num, den);
  return true;
}

/// Best rational approximation of x with denominator <= max_den
/// (continued-fraction walk; the final semiconvergent is compared exactly).
inline Rational best_rational(double x, std::uint64_t max_den) {
  if (max_den == 0) throw std::invalid_argument("best_rational: max_den == 0");
  const Rational target(x);  // exact binary expansion of the double
  if (denominator(target) <= Integer(max_den)) return target;

  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;  // convergents p0/q0, p1/q1
  Rational rem = target;
  const Integer cap(max_den);
  while (true) {
    const Integer a = rational_floor(rem);
    Integer p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > cap) {
      // cut the last coefficient to stay within the cap
      const Integer t = q1 == 0 ? Integer(0) : Integer((cap - q0) / q1);
      const Rational semi(t * p1 + p0, t * q1 + q0);
      const Rational conv(p1, q1);
      return rational_abs(semi - target) < rational_abs(conv - target) ? semi : conv;
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const Rational frac = rem - Rational(a);
    if (frac == 0) return Rational(p1, q1);
    rem = Rational(1) / frac;
  }
}

/// Dense row-major matrix of rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix from_rows(std::vector<std::vector<Rational>> rows) {
    RationalMatrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.empty() ? 0 : rows.front().size();
    m.data_.reserve(m.rows_ * m.cols_);
    for (auto& r : rows) {
      if (r.size() != m.cols_) throw std::invalid_argument("ragged matrix literal");
      for (auto& v : r) m.data_.push_back(std::move(v));
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

  RationalMatrix scaled(const Rational& f) const {
    RationalMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] * f;
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

}  // namespace qcspan
