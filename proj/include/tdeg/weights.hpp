#ifndef TDEG_WEIGHTS_HPP
#define TDEG_WEIGHTS_HPP

// Weights, tuples of weights and the weighted product of a sequence.
//
// A weight (a_0,...,a_{k-1}; b) consumes a window of k consecutive sequence
// values and yields a_0 f(0) + ... + a_{k-1} f(k-1) + b. A tuple of weights is
// applied cyclically to consecutive windows.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdeg/error.hpp"
#include "tdeg/exactla.hpp"

namespace tdeg {

class Weight {
 public:
  Weight() = default;
  Weight(std::vector<Rational> coeffs, Rational constant) : a_(std::move(coeffs)), b_(std::move(constant)) {
    for (const auto& x : a_)
      if (x < 0) throw InvalidArgument("negative window coefficient " + to_string(x));
  }

  /// Number of sequence values consumed (the tuple length minus one).
  std::size_t window() const noexcept { return a_.size(); }
  std::span<const Rational> coeffs() const noexcept { return a_; }
  const Rational& coeff(std::size_t i) const { return a_.at(i); }
  const Rational& constant() const noexcept { return b_; }

  bool is_constant() const {
    for (const auto& x : a_)
      if (x != 0) return false;
    return true;
  }

  bool is_strongly_non_constant() const {
    std::size_t nonzero = 0;
    for (const auto& x : a_)
      if (x != 0) ++nonzero;
    return nonzero >= 2;
  }

  friend bool operator==(const Weight&, const Weight&) = default;

 private:
  std::vector<Rational> a_;
  Rational b_;
};

/// Nonempty sequence of weights.
class WeightTuple {
 public:
  explicit WeightTuple(std::vector<Weight> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw InvalidArgument("a weight tuple must be nonempty");
  }
  WeightTuple(std::initializer_list<Weight> weights) : WeightTuple(std::vector<Weight>(weights)) {}

  std::size_t size() const noexcept { return w_.size(); }
  const Weight& operator[](std::size_t i) const { return w_[i]; }
  std::span<const Weight> weights() const noexcept { return w_; }
  auto begin() const noexcept { return w_.begin(); }
  auto end() const noexcept { return w_.end(); }

  friend bool operator==(const WeightTuple&, const WeightTuple&) = default;

 private:
  std::vector<Weight> w_;
};

inline Rational apply_weight(const Weight& w, std::span<const Rational> window) {
  if (window.size() < w.window())
    throw ShortWindow("weight needs " + std::to_string(w.window()) + " values, got " +
                      std::to_string(window.size()));
  Rational acc = w.constant();
  for (std::size_t i = 0; i < w.window(); ++i) acc += w.coeff(i) * window[i];
  return acc;
}

/// Σ over the weights of their window lengths.
inline std::size_t sum_length(const WeightTuple& t) {
  std::size_t s = 0;
  for (const auto& w : t) s += w.window();
  return s;
}

/// Position in the underlying sequence where the window of product value n starts.
inline std::uint64_t window_offset(const WeightTuple& t, std::uint64_t n) {
  const std::uint64_t cycles = n / t.size();
  std::uint64_t offset = cycles * sum_length(t);
  for (std::size_t j = 0; j < n % t.size(); ++j) offset += t[j].window();
  return offset;
}

/// The weighted product t ⊙ f as a callable n ↦ value. `f` is any callable
/// mapping a position to something convertible to Rational.
template <class Seq>
auto weighted_product(WeightTuple t, Seq f) {
  if (sum_length(t) == 0) throw InvalidArgument("weighted product needs a tuple with positive sum length");
  return [t = std::move(t), f = std::move(f)](std::uint64_t n) -> Rational {
    const Weight& w = t[n % t.size()];
    const std::uint64_t start = window_offset(t, n);
    Rational acc = w.constant();
    for (std::size_t i = 0; i < w.window(); ++i) {
      if (w.coeff(i) == 0) continue;
      acc += w.coeff(i) * Rational(f(start + i));
    }
    return acc;
  };
}

/// First `count` values of t ⊙ values; ShortWindow when `values` runs out.
inline std::vector<Rational> weighted_product_prefix(const WeightTuple& t, std::span<const Rational> values,
                                                     std::size_t count) {
  if (sum_length(t) == 0) throw InvalidArgument("weighted product needs a tuple with positive sum length");
  std::vector<Rational> out;
  out.reserve(count);
  std::size_t pos = 0;
  for (std::size_t n = 0; n < count; ++n) {
    const Weight& w = t[n % t.size()];
    if (pos > values.size()) throw ShortWindow("sequence exhausted");
    out.push_back(apply_weight(w, values.subspan(pos)));
    pos += w.window();
  }
  return out;
}

inline Weight scale(const Rational& c, const Weight& w) {
  if (c < 0) throw InvalidArgument("scalar must be nonnegative");
  std::vector<Rational> a(w.coeffs().begin(), w.coeffs().end());
  for (auto& x : a) x *= c;
  return Weight(std::move(a), w.constant() * c);
}

inline WeightTuple scale(const Rational& c, const WeightTuple& t) {
  std::vector<Weight> ws;
  for (const auto& w : t) ws.push_back(scale(c, w));
  return WeightTuple(std::move(ws));
}

/// Scales only the constant entries: (a; b) ↦ (a; b·c).
inline WeightTuple last_scale(const WeightTuple& t, const Rational& c) {
  if (c < 0) throw InvalidArgument("scalar must be nonnegative");
  std::vector<Weight> ws;
  for (const auto& w : t)
    ws.emplace_back(std::vector<Rational>(w.coeffs().begin(), w.coeffs().end()), w.constant() * c);
  return WeightTuple(std::move(ws));
}

inline WeightTuple concat(const WeightTuple& a, const WeightTuple& b) {
  std::vector<Weight> ws(a.begin(), a.end());
  ws.insert(ws.end(), b.begin(), b.end());
  return WeightTuple(std::move(ws));
}

inline WeightTuple unfold(const WeightTuple& t, std::size_t n) {
  if (n == 0) throw InvalidArgument("unfolding count must be at least 1");
  std::vector<Weight> ws;
  ws.reserve(t.size() * n);
  for (std::size_t i = 0; i < n; ++i) ws.insert(ws.end(), t.begin(), t.end());
  return WeightTuple(std::move(ws));
}

/// γ·(α_0..α_{ℓ-1}) for a weight γ of window ℓ: the windows of the α_i scaled
/// by γ's coefficients, concatenated, with constant Σ x_i b_i + y.
inline Weight compose_weight(const Weight& outer, std::span<const Weight> inner) {
  if (inner.size() != outer.window())
    throw InvalidArgument("outer window " + std::to_string(outer.window()) + " does not match " +
                          std::to_string(inner.size()) + " inner weights");
  std::vector<Rational> a;
  Rational b = outer.constant();
  for (std::size_t i = 0; i < inner.size(); ++i) {
    for (const auto& x : inner[i].coeffs()) a.push_back(outer.coeff(i) * x);
    b += outer.coeff(i) * inner[i].constant();
  }
  return Weight(std::move(a), std::move(b));
}

/// Tuple composition with outer ⊙ (inner ⊙ f) = compose_tuples(outer, inner) ⊙ f.
/// Both tuples are first unfolded so that sum_length(outer) = |inner|.
inline WeightTuple compose_tuples(const WeightTuple& outer, const WeightTuple& inner) {
  const std::size_t s = sum_length(outer);
  if (s == 0) throw InvalidArgument("outer tuple must have positive sum length");
  const std::size_t c = std::lcm(s, inner.size());
  const WeightTuple a = unfold(outer, c / s);
  const WeightTuple b = unfold(inner, c / inner.size());
  std::vector<Weight> out;
  std::size_t pos = 0;
  for (const auto& w : a) {
    out.push_back(compose_weight(w, b.weights().subspan(pos, w.window())));
    pos += w.window();
  }
  return WeightTuple(std::move(out));
}

// ---------------------------------------------------------------------------
// Text form: `(a0,a1,...;b)(...)...`, whitespace insignificant.

inline std::string to_string(const Weight& w) {
  return "(" + join(w.coeffs()) + ";" + to_string(w.constant()) + ")";
}

inline std::string to_string(const WeightTuple& t) {
  std::string s;
  for (const auto& w : t) s += to_string(w);
  return s;
}

inline WeightTuple parse_weight_tuple(std::string_view text) {
  std::string compact;
  for (char ch : text)
    if (ch != ' ' && ch != '\t' && ch != '\n' && ch != '\r') compact += ch;
  std::vector<Weight> ws;
  std::string_view s = compact;
  while (!s.empty()) {
    if (s.front() != '(') throw InvalidArgument("expected '(' in weight tuple '" + std::string(text) + "'");
    auto close = s.find(')');
    if (close == std::string_view::npos) throw InvalidArgument("unterminated weight in '" + std::string(text) + "'");
    auto body = s.substr(1, close - 1);
    auto semi = body.find(';');
    if (semi == std::string_view::npos || body.find(';', semi + 1) != std::string_view::npos)
      throw InvalidArgument("weight needs exactly one ';': '(" + std::string(body) + ")'");
    auto b_text = body.substr(semi + 1);
    if (b_text.empty()) throw InvalidArgument("missing constant in '(" + std::string(body) + ")'");
    ws.emplace_back(parse_rational_list(body.substr(0, semi)), parse_rational(b_text));
    s.remove_prefix(close + 1);
  }
  if (ws.empty()) throw InvalidArgument("empty weight tuple");
  return WeightTuple(std::move(ws));
}

}  // namespace tdeg

#endif  // TDEG_WEIGHTS_HPP
