#ifndef TDEG_EXACTLA_HPP
#define TDEG_EXACTLA_HPP

// Exact rational arithmetic, rational polynomials and small dense linear
// algebra. No floating point in this header.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "tdeg/error.hpp"

namespace tdeg {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

inline Integer numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

/// Builds num/den in lowest terms with a positive denominator.
inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  return Rational(num, den);
}

inline bool is_integer(const Rational& r) { return denominator_of(r) == 1; }

inline Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

inline Integer ipow(const Integer& base, unsigned exp) { return boost::multiprecision::pow(base, exp); }

inline Rational rpow(const Rational& base, unsigned exp) {
  Rational result = 1;
  Rational b = base;
  while (exp != 0) {
    if (exp & 1U) result *= b;
    b *= b;
    exp >>= 1U;
  }
  return result;
}

inline Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Least common multiple of the denominators; 1 for an empty range.
inline Integer common_denominator(std::span<const Rational> xs) {
  Integer d = 1;
  for (const auto& x : xs) d = lcm(d, denominator_of(x));
  return d;
}

/// `p/q`, or `p` when q = 1.
inline std::string to_string(const Rational& r) {
  std::string s = numerator_of(r).str();
  if (denominator_of(r) != 1) s += "/" + denominator_of(r).str();
  return s;
}

inline std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline Integer parse_integer(std::string_view text) {
  auto s = trim(text);
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw InvalidArgument("not an integer: '" + std::string(text) + "'");
  std::string owned(s.front() == '+' ? s.substr(1) : s);
  return Integer(owned);
}

/// Accepts `p`, `p/q` (q != 0), with optional sign on p.
inline Rational parse_rational(std::string_view text) {
  auto s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s));
  Integer num = parse_integer(s.substr(0, slash));
  auto den_text = trim(s.substr(slash + 1));
  if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+'))
    throw InvalidArgument("signed denominator: '" + std::string(text) + "'");
  Integer den = parse_integer(den_text);
  if (den == 0) throw InvalidArgument("zero denominator: '" + std::string(text) + "'");
  return make_rational(num, den);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

/// Comma-separated rationals; an empty string gives an empty list.
inline std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  if (trim(text).empty()) return out;
  for (auto part : split(text, ',')) out.push_back(parse_rational(part));
  return out;
}

inline std::string join(std::span<const Rational> xs, std::string_view sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i != 0) s += sep;
    s += to_string(xs[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Polynomials

/// Polynomial in n with rational coefficients; index i holds the coefficient
/// of n^i. Trailing zeros are never stored, so the zero polynomial has no
/// coefficients.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }
  RationalPoly(std::initializer_list<Rational> coeffs) : c_(coeffs) { normalize(); }

  static RationalPoly constant(const Rational& c) { return RationalPoly(std::vector<Rational>{c}); }

  static RationalPoly monomial(std::size_t degree, const Rational& c = 1) {
    std::vector<Rational> v(degree + 1);
    v[degree] = c;
    return RationalPoly(std::move(v));
  }

  bool is_zero() const noexcept { return c_.empty(); }
  /// Highest index with a nonzero coefficient; 0 for constants and for zero.
  std::size_t order() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
  std::span<const Rational> coefficients() const noexcept { return c_; }

  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational operator()(const Rational& n) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * n + *it;
    return acc;
  }

  RationalPoly& operator+=(const RationalPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    normalize();
    return *this;
  }
  RationalPoly& operator-=(const RationalPoly& o) { return *this += o * Rational(-1); }

  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }

  friend RationalPoly operator*(const RationalPoly& p, const Rational& s) {
    std::vector<Rational> v(p.c_);
    for (auto& x : v) x *= s;
    return RationalPoly(std::move(v));
  }
  friend RationalPoly operator*(const Rational& s, const RationalPoly& p) { return p * s; }

  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return RationalPoly(std::move(v));
  }

  friend bool operator==(const RationalPoly&, const RationalPoly&) = default;

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

/// n ↦ p(a·n + b), expanded coefficient-wise by the binomial theorem.
inline RationalPoly poly_affine_subst(const RationalPoly& p, const Rational& a, const Rational& b) {
  const std::size_t deg = p.order();
  if (p.is_zero()) return {};
  std::vector<Rational> out(deg + 1);
  for (std::size_t i = 0; i <= deg; ++i) {
    const Rational ci = p.coeff(i);
    if (ci == 0) continue;
    for (std::size_t j = 0; j <= i; ++j) {
      out[j] += ci * Rational(binomial(static_cast<unsigned>(i), static_cast<unsigned>(j))) *
                rpow(a, static_cast<unsigned>(j)) * rpow(b, static_cast<unsigned>(i - j));
    }
  }
  return RationalPoly(std::move(out));
}

/// Coefficients low-to-high, comma-separated: `9,45,81,81`. Zero renders `0`.
inline std::string to_string(const RationalPoly& p) {
  if (p.is_zero()) return "0";
  return join(p.coefficients());
}

inline RationalPoly parse_poly(std::string_view text) {
  if (trim(text).empty()) throw InvalidArgument("empty polynomial");
  return RationalPoly(parse_rational_list(text));
}

// ---------------------------------------------------------------------------
// Dense matrices

using RatVector = std::vector<Rational>;

class RatMatrix {
 public:
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {
    if (rows == 0 || cols == 0) throw DimensionMismatch("matrix dimensions must be positive");
  }

  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
      : RatMatrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != cols_) throw DimensionMismatch("ragged matrix literal");
      std::size_t j = 0;
      for (const auto& x : row) (*this)(i, j++) = x;
      ++i;
    }
  }

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  RatVector column(std::size_t j) const {
    RatVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  friend RatMatrix operator*(const RatMatrix& x, const RatMatrix& y) {
    if (x.cols_ != y.rows_) throw DimensionMismatch("matrix product");
    RatMatrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (x(i, k) == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }

  friend RatVector operator*(const RatMatrix& m, const RatVector& v) {
    if (m.cols_ != v.size()) throw DimensionMismatch("matrix-vector product");
    RatVector r(m.rows_);
    for (std::size_t i = 0; i < m.rows_; ++i)
      for (std::size_t j = 0; j < m.cols_; ++j) r[i] += m(i, j) * v[j];
    return r;
  }

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Rational> a_;
};

inline RatMatrix mat_inverse(const RatMatrix& m) {
  if (!m.square()) throw DimensionMismatch("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix a = m;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) throw SingularMatrix("no pivot in column " + std::to_string(col));
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Rational scale = 1 / a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) *= scale;
      inv(col, j) *= scale;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      const Rational f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Result of eliminating a possibly non-square system.
struct LinearSolution {
  RatVector x;          ///< particular solution, free variables set to zero
  std::size_t rank = 0;
  bool unique = false;  ///< rank equals the number of unknowns
};

/// Gauss–Jordan on [A | b]. Returns nullopt when the system is inconsistent.
inline std::optional<LinearSolution> solve_general(const RatMatrix& a, const RatVector& b) {
  if (b.size() != a.rows()) throw DimensionMismatch("right-hand side length");
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  RatMatrix aug(rows, cols + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug(i, j) = a(i, j);
    aug(i, cols) = b[i];
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t pivot = r;
    while (pivot < rows && aug(pivot, col) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r)
      for (std::size_t j = 0; j <= cols; ++j) std::swap(aug(pivot, j), aug(r, j));
    const Rational scale = 1 / aug(r, col);
    for (std::size_t j = 0; j <= cols; ++j) aug(r, j) *= scale;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || aug(i, col) == 0) continue;
      const Rational f = aug(i, col);
      for (std::size_t j = 0; j <= cols; ++j) aug(i, j) -= f * aug(r, j);
    }
    pivot_cols.push_back(col);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (aug(i, cols) != 0) return std::nullopt;
  LinearSolution sol;
  sol.x.assign(cols, Rational(0));
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) sol.x[pivot_cols[i]] = aug(i, cols);
  sol.rank = r;
  sol.unique = r == cols;
  return sol;
}

inline RatVector solve_linear(const RatMatrix& m, const RatVector& b) {
  if (!m.square()) throw DimensionMismatch("solve_linear needs a square matrix");
  if (b.size() != m.rows()) throw DimensionMismatch("right-hand side length");
  auto sol = solve_general(m, b);
  if (!sol || !sol->unique) throw SingularMatrix("system matrix is singular");
  return sol->x;
}

}  // namespace tdeg

#endif  // TDEG_EXACTLA_HPP
