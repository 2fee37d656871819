#ifndef TDEG_SYNTHESIS_HPP
#define TDEG_SYNTHESIS_HPP

// Concrete transducers realizing weighted products on block words, and the
// stage chains that clear rational coefficients.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "tdeg/error.hpp"
#include "tdeg/exactla.hpp"
#include "tdeg/fst.hpp"
#include "tdeg/weights.hpp"
#include "tdeg/words.hpp"

namespace tdeg {

/// A natural weighted product applied to the blocks.
struct WeightStage {
  WeightTuple tuple;
  friend bool operator==(const WeightStage&, const WeightStage&) = default;
};

/// Multiplies every block length by e/d; exact only when d divides e·length.
struct RatioStage {
  Integer e;
  Integer d;
  friend bool operator==(const RatioStage&, const RatioStage&) = default;
};

/// Drops the first k blocks.
struct ShiftStage {
  std::uint64_t k = 0;
  friend bool operator==(const ShiftStage&, const ShiftStage&) = default;
};

using Stage = std::variant<WeightStage, RatioStage, ShiftStage>;

class IndivisibleBlock : public Error {
 public:
  IndivisibleBlock(std::size_t block, const std::string& what)
      : Error("IndivisibleBlock: block " + std::to_string(block) + ": " + what), block_(block) {}
  std::size_t block() const noexcept { return block_; }

 private:
  std::size_t block_;
};

/// (1, 0, ..., 0; 0) with window d: keeps every d-th block.
inline WeightTuple selection_tuple(std::size_t d) {
  if (d == 0) throw InvalidArgument("selection stride must be positive");
  std::vector<Rational> a(d, Rational(0));
  a[0] = 1;
  return WeightTuple{Weight(std::move(a), 0)};
}

inline std::optional<std::size_t> selection_stride(const WeightTuple& t) {
  if (t.size() != 1 || t[0].constant() != 0 || t[0].window() == 0) return std::nullopt;
  if (t[0].coeff(0) != 1) return std::nullopt;
  for (std::size_t i = 1; i < t[0].window(); ++i)
    if (t[0].coeff(i) != 0) return std::nullopt;
  return t[0].window();
}

namespace detail {

inline Integer require_integer(const Rational& x, const char* what) {
  if (!is_integer(x)) throw UnsupportedWeights(std::string(what) + " " + to_string(x) + " is not an integer");
  return numerator_of(x);
}

inline std::size_t small(const Integer& x, const char* what) {
  if (x > Integer(std::numeric_limits<std::uint32_t>::max()))
    throw UnsupportedWeights(std::string(what) + " " + x.str() + " is too large for a state counter");
  return x.convert_to<std::size_t>();
}

}  // namespace detail

/// Transducer mapping ⟨f⟩ to ⟨t ⊙ f⟩ for window coefficients in N and integer
/// constants.
///
/// States are (weight j, block i within its window, pending deletions r) plus
/// a start state waiting for the first 1. Each input zero of block i emits
/// a_{j,i} zeros; the 1 opening a window is emitted when the window starts, a
/// positive constant is emitted when the window closes, and a negative
/// constant deletes the first |b| zeros the window would emit. Weights with an
/// empty window are emitted whole at the boundary before the next consuming
/// window. The output is exact whenever every window produces at least |b|
/// zeros, i.e. whenever t ⊙ f is natural.
inline Fst synth_weight_fst(const WeightTuple& t) {
  if (sum_length(t) == 0) throw UnsupportedWeights("tuple consumes no input");
  const std::size_t m = t.size();
  std::vector<std::vector<Integer>> a(m);
  std::vector<Integer> b(m);
  std::vector<std::size_t> del(m, 0);
  std::vector<std::size_t> base(m, 0);
  std::size_t states = 0;
  for (std::size_t j = 0; j < m; ++j) {
    for (const auto& x : t[j].coeffs()) a[j].push_back(detail::require_integer(x, "window coefficient"));
    b[j] = detail::require_integer(t[j].constant(), "constant");
    if (t[j].window() == 0 && b[j] < 0) throw UnsupportedWeights("constant weight with negative value");
    if (b[j] < 0) del[j] = detail::small(-b[j], "deletion count");
    base[j] = states;
    states += t[j].window() * (del[j] + 1);
  }
  const auto start = static_cast<State>(states);
  auto id = [&](std::size_t j, std::size_t i, std::size_t r) {
    return static_cast<State>(base[j] + i * (del[j] + 1) + r);
  };
  // Output at a window boundary: the constant zeros of the closing window,
  // every empty-window weight, then the 1 of the next consuming window.
  auto open_from = [&](std::size_t j, Word out) {
    while (t[j].window() == 0) {
      out += '1';
      out.append(b[j].convert_to<std::size_t>(), '0');
      j = (j + 1) % m;
    }
    out += '1';
    return Edge{id(j, 0, del[j]), std::move(out)};
  };
  std::vector<Edge> edges(2 * (states + 1));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < t[j].window(); ++i) {
      const std::size_t ai = detail::small(a[j][i], "window coefficient");
      for (std::size_t r = 0; r <= del[j]; ++r) {
        const State q = id(j, i, r);
        const std::size_t emitted = ai > r ? ai - r : 0;
        const std::size_t left = r > ai ? r - ai : 0;
        edges[2 * q] = Edge{id(j, i, left), Word(emitted, '0')};
        if (i + 1 < t[j].window()) {
          edges[2 * q + 1] = Edge{id(j, i + 1, r), ""};
        } else {
          Word closing = b[j] > 0 ? Word(b[j].convert_to<std::size_t>(), '0') : Word();
          edges[2 * q + 1] = open_from((j + 1) % m, std::move(closing));
        }
      }
    }
  }
  edges[2 * start] = Edge{start, ""};
  edges[2 * start + 1] = open_from(0, "");
  return Fst(states + 1, start, std::move(edges));
}

/// Copies each 1 and scales each block by e/d: the k-th zero of a block emits
/// ⌊e·k/d⌋ − ⌊e·(k−1)/d⌋ zeros, so a block of length x becomes e·x/d whenever
/// d divides e·x (in particular, e zeros per d input zeros). The counter resets
/// at every 1.
inline Fst synth_ratio_fst(const Integer& e, const Integer& d) {
  if (d < 1 || e < 0) throw InvalidArgument("ratio needs e >= 0 and d >= 1");
  const std::size_t n = detail::small(d, "ratio denominator");
  return Fst::from_function(n, 0, [&](State q, int letter) {
    if (letter == 1) return Edge{0, "1"};
    const Integer before = e * q / d;
    const Integer after = e * (q + 1) / d;
    return Edge{static_cast<State>((q + 1) % n), Word((after - before).convert_to<std::size_t>(), '0')};
  });
}

/// Drops the first k blocks of a block word. State i < k counts the 1s read.
inline Fst synth_shift_fst(std::uint64_t k) {
  const auto copy = static_cast<State>(k + 1);
  return Fst::from_function(k + 2, 0, [k, copy](State q, int letter) {
    if (q == copy) return Edge{copy, letter == 1 ? "1" : "0"};
    if (letter == 0) return Edge{q, ""};
    return q == k ? Edge{copy, "1"} : Edge{q + 1, ""};
  });
}

inline Fst stage_fst(const Stage& s) {
  return std::visit(
      [](const auto& st) -> Fst {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, WeightStage>)
          return synth_weight_fst(st.tuple);
        else if constexpr (std::is_same_v<T, RatioStage>)
          return synth_ratio_fst(st.e, st.d);
        else
          return synth_shift_fst(st.k);
      },
      s);
}

// ---------------------------------------------------------------------------
// Functional and symbolic meaning of stages

/// Applies a stage to a finite list of block lengths, producing every output
/// block fully determined by the input. Throws IndivisibleBlock for a ratio
/// stage whose block does not scale to an integer.
inline std::vector<Integer> apply_stage(const Stage& s, std::span<const Integer> blocks) {
  std::vector<Integer> out;
  if (const auto* w = std::get_if<WeightStage>(&s)) {
    std::size_t pos = 0;
    for (std::size_t n = 0;; ++n) {
      const Weight& wt = w->tuple[n % w->tuple.size()];
      if (pos + wt.window() > blocks.size()) break;
      Rational v = wt.constant();
      for (std::size_t i = 0; i < wt.window(); ++i) v += wt.coeff(i) * Rational(blocks[pos + i]);
      if (!is_integer(v) || v < 0) throw NotNatural("weighted block " + to_string(v));
      out.push_back(numerator_of(v));
      pos += wt.window();
    }
  } else if (const auto* r = std::get_if<RatioStage>(&s)) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const Integer scaled = r->e * blocks[i];
      if (scaled % r->d != 0)
        throw IndivisibleBlock(i, r->e.str() + "*" + blocks[i].str() + " is not divisible by " + r->d.str());
      out.push_back(scaled / r->d);
    }
  } else {
    const auto k = std::get<ShiftStage>(s).k;
    if (k < blocks.size()) out.assign(blocks.begin() + static_cast<std::ptrdiff_t>(k), blocks.end());
  }
  return out;
}

/// The polynomials P_r(q) = (t ⊙ f)(m q + r), r < m = |t|.
inline std::vector<RationalPoly> residue_polys(const WeightTuple& t, const RationalPoly& f) {
  const std::size_t s = sum_length(t);
  std::vector<RationalPoly> out;
  std::size_t offset = 0;
  for (const auto& w : t) {
    RationalPoly acc = RationalPoly::constant(w.constant());
    for (std::size_t i = 0; i < w.window(); ++i)
      if (w.coeff(i) != 0)
        acc += w.coeff(i) * poly_affine_subst(f, Rational(static_cast<long>(s)), Rational(static_cast<long>(offset + i)));
    out.push_back(std::move(acc));
    offset += w.window();
  }
  return out;
}

/// Symbolic action on a block polynomial. Weight stages must hold a single
/// weight so the result is again a polynomial.
inline RationalPoly apply_stage(const Stage& s, const RationalPoly& f) {
  if (const auto* w = std::get_if<WeightStage>(&s)) {
    if (w->tuple.size() != 1) throw InvalidArgument("symbolic action needs a single-weight tuple");
    return residue_polys(w->tuple, f)[0];
  }
  if (const auto* r = std::get_if<RatioStage>(&s)) return f * make_rational(r->e, r->d);
  return poly_affine_subst(f, 1, Rational(Integer(std::get<ShiftStage>(s).k)));
}

// ---------------------------------------------------------------------------
// Clearing rational coefficients

struct Realization {
  std::vector<Stage> stages;
  Fst single;
};

/// Stages taking ⟨f⟩ (that is, ⟨d·f⟩ with d = naturalise(f)) to ⟨t ⊙ f⟩:
/// a natural weight stage producing d·c·(t ⊙ f), where c clears the
/// denominators of t, followed by the ratio e/(d·c) with e = naturalise(t ⊙ f).
/// The ratio is stored in lowest terms.
inline std::vector<Stage> rational_stages(const WeightTuple& t, const RationalPoly& f) {
  Integer c = 1;
  for (const auto& w : t) {
    c = lcm(c, common_denominator(w.coeffs()));
    c = lcm(c, denominator_of(w.constant()));
  }
  const Integer d = naturalise(f);
  Integer e = 1;
  for (const auto& p : residue_polys(t, f)) e = lcm(e, naturalise(p));
  WeightTuple natural = last_scale(scale(Rational(c), t), Rational(d));
  const Integer g = gcd(e, d * c);
  return {WeightStage{std::move(natural)}, RatioStage{e / g, d * c / g}};
}

inline Realization realize_rational(const WeightTuple& t, const RationalPoly& f) {
  auto stages = rational_stages(t, f);
  Fst single = stage_fst(stages.front());
  for (std::size_t i = 1; i < stages.size(); ++i) single = compose(single, stage_fst(stages[i]));
  return Realization{std::move(stages), std::move(single)};
}

/// Nonnegative coefficients and a positive leading coefficient of order ≥ 1.
inline void require_qk(const RationalPoly& q) {
  if (q.is_zero() || q.order() < 1) throw NotInQk("polynomial must have order at least 1");
  for (const auto& c : q.coefficients())
    if (c < 0) throw NotInQk("negative coefficient " + to_string(c));
}

struct EpsilonReduction {
  Integer d;
  RationalPoly q_eps;
  std::vector<Stage> stages;  ///< act on ⟨q⟩ and produce ⟨q_eps⟩
};

/// Smallest d with every coefficient b_i = a_i / (a_k d^{k-i}) (0 < i < k)
/// strictly below ε, where q(n) = Σ a_i n^i. Then
/// q_ε(n) = (q(dn) − a_0) / (a_k d^k) = n^k + b_{k-1} n^{k-1} + ... + b_1 n.
///
/// The stages select every d-th block of ⟨q⟩ and then rescale and drop the
/// constant, cleared to natural weights.
inline EpsilonReduction epsilon_reduce(const RationalPoly& q, const Rational& eps) {
  require_qk(q);
  if (eps <= 0) throw InvalidArgument("epsilon must be positive");
  const std::size_t k = q.order();
  const Rational ak = q.leading();
  Integer d = 1;
  for (std::size_t i = 1; i < k; ++i) {
    if (q.coeff(i) == 0) continue;
    // need d^{k-i} > a_i / (a_k ε)
    const Rational bound = q.coeff(i) / (ak * eps);
    const auto power = static_cast<unsigned>(k - i);
    Integer lo = 1;
    while (Rational(ipow(lo, power)) <= bound) lo *= 2;
    Integer hi = lo;
    lo = lo / 2;
    if (lo < 1) lo = 1;
    if (Rational(ipow(lo, power)) > bound) hi = lo;
    while (hi - lo > 1) {
      Integer mid = (lo + hi) / 2;
      if (Rational(ipow(mid, power)) > bound)
        hi = mid;
      else
        lo = mid;
    }
    if (hi > d) d = hi;
  }
  EpsilonReduction r;
  r.d = d;
  const Rational dk = Rational(ipow(d, static_cast<unsigned>(k)));
  std::vector<Rational> c(k + 1, Rational(0));
  for (std::size_t i = 1; i <= k; ++i)
    c[i] = q.coeff(i) / (ak * Rational(ipow(d, static_cast<unsigned>(k - i))));
  r.q_eps = RationalPoly(std::move(c));

  const Integer dq = naturalise(q);
  const std::size_t stride = d.convert_to<std::size_t>();
  r.stages.push_back(WeightStage{selection_tuple(stride)});
  const RationalPoly selected = poly_affine_subst(q, Rational(d), 0) * Rational(dq);
  const WeightTuple rescale{Weight({1 / (Rational(dq) * ak * dk)}, -q.coeff(0) / (ak * dk))};
  for (auto& s : rational_stages(rescale, selected)) r.stages.push_back(std::move(s));
  return r;
}

}  // namespace tdeg

#endif  // TDEG_SYNTHESIS_HPP
