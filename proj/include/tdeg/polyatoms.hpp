#ifndef TDEG_POLYATOMS_HPP
#define TDEG_POLYATOMS_HPP

// Power means, the moment equations behind non-atoms, the V/M/U linear
// algebra of polynomial block words, and bounded search for weighted
// preimages.

#include <gmp.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tdeg/error.hpp"
#include "tdeg/exactla.hpp"
#include "tdeg/synthesis.hpp"
#include "tdeg/weights.hpp"

namespace tdeg {

using Real = boost::multiprecision::cpp_bin_float_50;

inline Real to_real(const Rational& x) {
  return Real(numerator_of(x).str()) / Real(denominator_of(x).str());
}

/// Exact n-th root of a nonnegative integer, if there is one.
inline std::optional<Integer> exact_root(const Integer& x, unsigned long n) {
  if (x < 0 || n == 0) return std::nullopt;
  Integer r;
  if (mpz_root(r.backend().data(), x.backend().data(), n) == 0) return std::nullopt;
  return r;
}

inline std::optional<Rational> exact_root(const Rational& x, unsigned long n) {
  auto num = exact_root(numerator_of(x), n);
  if (!num) return std::nullopt;
  auto den = exact_root(denominator_of(x), n);
  if (!den) return std::nullopt;
  return make_rational(*num, *den);
}

struct PowerMean {
  Real value;
  std::optional<Rational> exact;  ///< set when the mean is rational and was found exactly
};

/// M_{w,p}(x) = (Σ w_i x_i^p)^{1/p}, and Π x_i^{w_i} for p = 0.
inline PowerMean power_mean(std::span<const Rational> w, const Rational& p, std::span<const Rational> x) {
  if (w.empty() || w.size() != x.size()) throw InvalidArgument("weights and values must have the same positive length");
  Rational total = 0;
  for (const auto& wi : w) {
    if (wi <= 0) throw BadWeights("weight " + to_string(wi) + " is not positive");
    total += wi;
  }
  if (total != 1) throw BadWeights("weights sum to " + to_string(total));
  for (const auto& xi : x)
    if (xi <= 0) throw InvalidArgument("values must be positive");

  PowerMean m;
  if (p == 0) {
    // Π x_i^{u_i} with w_i = u_i / L, then an L-th root.
    const Integer L = common_denominator(w);
    Rational prod = 1;
    bool small = L <= 64;
    for (std::size_t i = 0; i < w.size() && small; ++i) {
      const Integer u = numerator_of(w[i] * Rational(L));
      prod *= rpow(x[i], u.convert_to<unsigned>());
    }
    if (small) m.exact = exact_root(prod, L.convert_to<unsigned long>());
    Real logsum = 0;
    for (std::size_t i = 0; i < w.size(); ++i) logsum += to_real(w[i]) * log(to_real(x[i]));
    m.value = m.exact ? to_real(*m.exact) : Real(exp(logsum));
    return m;
  }
  if (is_integer(p) && abs(numerator_of(p)) <= 64) {
    const long e = numerator_of(p).convert_to<long>();
    Rational s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Rational xp = rpow(x[i], static_cast<unsigned>(e < 0 ? -e : e));
      s += w[i] * (e < 0 ? 1 / xp : xp);
    }
    const Rational base = e < 0 ? 1 / s : s;
    m.exact = exact_root(base, static_cast<unsigned long>(e < 0 ? -e : e));
    m.value = m.exact ? to_real(*m.exact) : Real(pow(to_real(base), Real(1) / Real(e < 0 ? -e : e)));
    return m;
  }
  const Real pr = to_real(p);
  Real s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) s += to_real(w[i]) * pow(to_real(x[i]), pr);
  m.value = pow(s, 1 / pr);
  return m;
}

// ---------------------------------------------------------------------------
// Moment equations

struct MomentInstance {
  unsigned k = 3;
  Integer ell = 1;
  Integer n0 = 0;
  std::vector<Rational> c;
  std::vector<Rational> d;
};

enum class MomentVerdict {
  NoSolution,     ///< the three equations do not hold simultaneously
  Consistent,     ///< they hold, with at most one nonzero c_i
  Contradiction,  ///< they hold with two nonzero c_i at distinct points
};

struct MomentReport {
  MomentVerdict verdict = MomentVerdict::NoSolution;
  // Left and right sides of Σ w_i = 1, Σ w_i d_i = n0/ℓ, Σ w_i d_i^{k-1} = (n0/ℓ)^{k-1}.
  Rational mass, mass_rhs = 1;
  Rational first, first_rhs;
  Rational high, high_rhs;
};

inline std::string to_string(MomentVerdict v) {
  switch (v) {
    case MomentVerdict::NoSolution:
      return "no solution";
    case MomentVerdict::Consistent:
      return "consistent";
    case MomentVerdict::Contradiction:
      return "contradiction";
  }
  return "?";
}

/// Evaluates the moment equations with w_i = c_i / ℓ^k exactly. With two or
/// more nonzero weights at distinct points the strict power-mean inequality
/// M_1 < M_{k-1} forbids all three holding, so a Contradiction verdict can
/// only come from an inconsistent instance.
inline MomentReport moment_check(const MomentInstance& inst) {
  if (inst.k < 3) throw InvalidArgument("moment check needs k >= 3");
  if (inst.ell < 1) throw InvalidArgument("ell must be positive");
  if (inst.c.empty() || inst.c.size() != inst.d.size()) throw InvalidArgument("c and d must have equal positive length");
  for (std::size_t i = 0; i < inst.d.size(); ++i) {
    if (inst.c[i] < 0) throw InvalidArgument("c entries must be nonnegative");
    for (std::size_t j = i + 1; j < inst.d.size(); ++j)
      if (inst.d[i] == inst.d[j]) throw InvalidArgument("d entries must be distinct");
  }
  const Rational scale = Rational(ipow(inst.ell, inst.k));
  const Rational t = make_rational(inst.n0, inst.ell);
  MomentReport r;
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < inst.c.size(); ++i) {
    const Rational w = inst.c[i] / scale;
    if (w != 0) ++nonzero;
    r.mass += w;
    r.first += w * inst.d[i];
    r.high += w * rpow(inst.d[i], inst.k - 1);
  }
  r.first_rhs = t;
  r.high_rhs = rpow(t, inst.k - 1);
  const bool holds = r.mass == r.mass_rhs && r.first == r.first_rhs && r.high == r.high_rhs;
  if (!holds)
    r.verdict = MomentVerdict::NoSolution;
  else
    r.verdict = nonzero >= 2 ? MomentVerdict::Contradiction : MomentVerdict::Consistent;
  return r;
}

// ---------------------------------------------------------------------------
// V, M, U

/// (c_1, ..., c_k) for p = c_0 + c_1 n + ... + c_k n^k.
inline RatVector V_vec(const RationalPoly& p) {
  if (p.is_zero() || p.order() == 0) throw ZeroOrder("V needs a polynomial of order at least 1");
  RatVector v;
  for (std::size_t i = 1; i <= p.order(); ++i) v.push_back(p.coeff(i));
  return v;
}

/// k×k matrix whose column j is V(p(kn + j)).
inline RatMatrix M_mat(const RationalPoly& p) {
  if (p.is_zero() || p.order() == 0) throw ZeroOrder("M needs a polynomial of order at least 1");
  const std::size_t k = p.order();
  RatMatrix m(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    const RationalPoly col = poly_affine_subst(p, Rational(static_cast<long>(k)), Rational(static_cast<long>(j)));
    for (std::size_t i = 0; i < k; ++i) m(i, j) = col.coeff(i + 1);
  }
  return m;
}

inline RatVector U_vec(const Weight& alpha) { return RatVector(alpha.coeffs().begin(), alpha.coeffs().end()); }

/// Σ_{i<k} a_i (kn + i)^k.
inline RationalPoly atom_polynomial(unsigned k, std::span<const Rational> a) {
  if (k == 0) throw InvalidArgument("k must be at least 1");
  if (a.size() != k) throw InvalidArgument("expected " + std::to_string(k) + " coefficients");
  RationalPoly p;
  const RationalPoly nk = RationalPoly::monomial(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (a[i] <= 0) throw NonPositiveCoefficient("a_" + std::to_string(i) + " = " + to_string(a[i]));
    p += a[i] * poly_affine_subst(nk, Rational(k), Rational(static_cast<long>(i)));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Bounded preimage search

struct SearchBounds {
  std::size_t max_tuple_len = 2;
  std::size_t max_window = 4;
  std::size_t max_shift = 3;
  std::optional<Rational> max_coeff;  ///< reject solutions with a larger window entry
};

struct PreimageFound {
  std::size_t n0 = 0;
  std::size_t m0 = 0;
  WeightTuple tuple;
};

struct SearchResult {
  std::optional<PreimageFound> found;
  std::size_t shapes_tried = 0;
};

namespace detail {

// Solves Σ_i a_i g(S q + base + i) + b = target(q) identically in q; returns
// the weight when the exact solution has nonnegative window entries.
inline std::optional<Weight> solve_window(const RationalPoly& g, const RationalPoly& target, std::size_t S,
                                          std::size_t base, std::size_t window, const SearchBounds& bounds) {
  std::vector<RationalPoly> cols;
  std::size_t deg = target.is_zero() ? 0 : target.order();
  for (std::size_t i = 0; i < window; ++i) {
    cols.push_back(poly_affine_subst(g, Rational(static_cast<long>(S)), Rational(static_cast<long>(base + i))));
    if (!cols.back().is_zero()) deg = std::max(deg, cols.back().order());
  }
  cols.push_back(RationalPoly::constant(1));
  RatMatrix a(deg + 1, window + 1);
  RatVector rhs(deg + 1);
  for (std::size_t r = 0; r <= deg; ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) a(r, c) = cols[c].coeff(r);
    rhs[r] = target.coeff(r);
  }
  auto sol = solve_general(a, rhs);
  if (!sol) return std::nullopt;
  std::vector<Rational> coeffs(sol->x.begin(), sol->x.begin() + static_cast<std::ptrdiff_t>(window));
  for (const auto& x : coeffs) {
    if (x < 0) return std::nullopt;
    if (bounds.max_coeff && x > *bounds.max_coeff) return std::nullopt;
  }
  return Weight(std::move(coeffs), sol->x.back());
}

// Calls f(shape) for every window shape of length m with entries ≤ W and
// positive sum, in lexicographic order; stops when f returns true.
template <class F>
bool for_each_shape(std::size_t m, std::size_t W, F&& f) {
  std::vector<std::size_t> shape(m, 0);
  while (true) {
    std::size_t sum = 0;
    for (auto k : shape) sum += k;
    if (sum > 0 && f(shape)) return true;
    std::size_t i = m;
    while (i > 0 && shape[i - 1] == W) shape[--i] = 0;
    if (i == 0) return false;
    ++shape[i - 1];
  }
}

}  // namespace detail

/// Looks for n0, m0 and a tuple t with f(n0 + n) = (t ⊙ g(m0 + ·))(n) for all
/// n. Enumeration order: n0, then m0, then tuple length, then window shapes
/// lexicographically. Each residue class of n modulo the tuple length gives an
/// independent exact linear system in its weight's entries.
inline SearchResult search_weighted_preimage(const RationalPoly& g, const RationalPoly& f, const SearchBounds& bounds) {
  for (const auto* p : {&g, &f}) {
    if (p->is_zero() || p->order() < 1) throw InvalidArgument("search needs polynomials of order at least 1");
    for (const auto& c : p->coefficients())
      if (c < 0) throw InvalidArgument("search needs nonnegative coefficients");
  }
  SearchResult result;
  for (std::size_t n0 = 0; n0 <= bounds.max_shift; ++n0) {
    for (std::size_t m0 = 0; m0 <= bounds.max_shift; ++m0) {
      for (std::size_t m = 1; m <= bounds.max_tuple_len; ++m) {
        const bool hit = detail::for_each_shape(m, bounds.max_window, [&](const std::vector<std::size_t>& shape) {
          ++result.shapes_tried;
          std::size_t S = 0;
          for (auto k : shape) S += k;
          std::vector<Weight> ws;
          std::size_t offset = m0;
          for (std::size_t r = 0; r < m; ++r) {
            const RationalPoly target = poly_affine_subst(f, Rational(static_cast<long>(m)), Rational(static_cast<long>(n0 + r)));
            auto w = detail::solve_window(g, target, S, offset, shape[r], bounds);
            if (!w) return false;
            ws.push_back(std::move(*w));
            offset += shape[r];
          }
          result.found = PreimageFound{n0, m0, WeightTuple(std::move(ws))};
          return true;
        });
        if (hit) return result;
      }
    }
  }
  return result;
}

}  // namespace tdeg

#endif  // TDEG_POLYATOMS_HPP
