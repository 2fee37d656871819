#ifndef TDEG_TESTS_SUPPORT_HPP
#define TDEG_TESTS_SUPPORT_HPP

// Random generators and small reference implementations shared by the tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tdeg/tdeg.hpp"

namespace tdeg::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline Rational rational(Rng& rng, long lo, long hi, long max_den = 4) {
  const long den = uniform(rng, 1, max_den);
  return make_rational(Integer(uniform(rng, lo * den, hi * den)), Integer(den));
}

inline RationalPoly poly(Rng& rng, std::size_t degree, long lo, long hi, long max_den = 4) {
  std::vector<Rational> c;
  for (std::size_t i = 0; i <= degree; ++i) c.push_back(rational(rng, lo, hi, max_den));
  return RationalPoly(std::move(c));
}

/// Weight with window in [min_window, max_window], entries a_i in [0, hi].
inline Weight weight(Rng& rng, std::size_t min_window, std::size_t max_window, long hi, long b_lo, long b_hi,
                     long max_den = 1) {
  std::vector<Rational> a;
  const auto k = static_cast<std::size_t>(uniform(rng, static_cast<long>(min_window), static_cast<long>(max_window)));
  for (std::size_t i = 0; i < k; ++i) a.push_back(rational(rng, 0, hi, max_den));
  return Weight(std::move(a), rational(rng, b_lo, b_hi, max_den));
}

inline WeightTuple tuple(Rng& rng, std::size_t max_len, std::size_t max_window, long hi, long b_lo, long b_hi,
                         long max_den = 1) {
  std::vector<Weight> ws;
  const auto m = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(max_len)));
  for (std::size_t j = 0; j < m; ++j) ws.push_back(weight(rng, j == 0 ? 1 : 0, max_window, hi, b_lo, b_hi, max_den));
  return WeightTuple(std::move(ws));
}

inline Word word(Rng& rng, std::size_t max_len) {
  Word w(static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(max_len))), '0');
  for (auto& c : w) c = uniform(rng, 0, 1) ? '1' : '0';
  return w;
}

inline Fst machine(Rng& rng, std::size_t max_states, std::size_t max_out) {
  const auto n = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(max_states)));
  return Fst::from_function(n, 0, [&](State, int) {
    return Edge{static_cast<State>(uniform(rng, 0, static_cast<long>(n) - 1)), word(rng, max_out)};
  });
}

/// Direct weighted product by walking the windows, independent of window_offset.
template <class F>
std::vector<Rational> product_by_walk(const WeightTuple& t, F f, std::size_t count) {
  std::vector<Rational> out;
  std::uint64_t pos = 0;
  for (std::size_t n = 0; n < count; ++n) {
    const Weight& w = t[n % t.size()];
    Rational v = w.constant();
    for (std::size_t i = 0; i < w.window(); ++i) v += w.coeff(i) * Rational(f(pos + i));
    pos += w.window();
    out.push_back(v);
  }
  return out;
}

/// 1 0^{b_0} 1 0^{b_1} ... as a plain string.
inline Word block_string(const std::vector<long>& blocks) {
  Word w;
  for (long b : blocks) {
    w += '1';
    w.append(static_cast<std::size_t>(b), '0');
  }
  return w;
}

inline Rational at(const RationalPoly& p, long n) { return p(Rational(n)); }

}  // namespace tdeg::testing

#endif  // TDEG_TESTS_SUPPORT_HPP
