#ifndef TDEG_WORDS_HPP
#define TDEG_WORDS_HPP

// Infinite binary words queried by prefix: ultimately periodic words, morphic
// words, and block words ⟨f⟩ = 1 0^{f(0)} 1 0^{f(1)} ...

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdeg/error.hpp"
#include "tdeg/exactla.hpp"
#include "tdeg/weights.hpp"

namespace tdeg {

/// Finite word over {0,1}, stored as the characters '0' and '1'.
using Word = std::string;

inline bool is_binary_word(std::string_view w) {
  for (char c : w)
    if (c != '0' && c != '1') return false;
  return true;
}

/// Least d ≥ 1 such that d·p(n) is an integer for every natural n.
///
/// Writes p in the binomial basis p(n) = Σ Δ^j p(0) · C(n, j); p is
/// integer-valued exactly when every forward difference Δ^j p(0) is an
/// integer, so d is the lcm of their denominators.
inline Integer naturalise(const RationalPoly& p) {
  const std::size_t deg = p.order();
  std::vector<Rational> diffs;
  diffs.reserve(deg + 1);
  for (std::size_t i = 0; i <= deg; ++i) diffs.push_back(p(Rational(static_cast<long>(i))));
  Integer d = 1;
  for (std::size_t j = 0; j <= deg; ++j) {
    d = lcm(d, denominator_of(diffs[0]));
    for (std::size_t i = 0; i + 1 < diffs.size(); ++i) diffs[i] = diffs[i + 1] - diffs[i];
    diffs.pop_back();
  }
  return d;
}

// ---------------------------------------------------------------------------
// Integer sequences

/// A sequence N → Z described symbolically. Values are computed on demand;
/// block words reject negative values when they are materialized.
class IntegerSequence {
 public:
  struct Impl {
    virtual ~Impl() = default;
    virtual Integer value(std::uint64_t n) const = 0;
    virtual std::string describe() const = 0;
  };

  explicit IntegerSequence(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  Integer value(std::uint64_t n) const { return impl_->value(n); }
  Integer operator()(std::uint64_t n) const { return impl_->value(n); }
  std::string describe() const { return impl_->describe(); }

  /// n ↦ scale·p(n). Requires scale·p to be integer-valued.
  static IntegerSequence poly(RationalPoly p, Integer scale = 1);
  /// n ↦ d·p(n) with d = naturalise(p).
  static IntegerSequence naturalised(const RationalPoly& p) { return poly(p, naturalise(p)); }
  /// A finite list; querying past its end throws OutOfRange.
  static IntegerSequence explicit_values(std::vector<Integer> values);
  /// n ↦ t ⊙ base at n; throws NotNatural when a value is not an integer.
  static IntegerSequence weighted(WeightTuple t, IntegerSequence base);

  /// n ↦ value(n + k).
  IntegerSequence shifted(std::uint64_t k) const;

 private:
  std::shared_ptr<const Impl> impl_;
};

namespace detail {

struct PolySeq final : IntegerSequence::Impl {
  RationalPoly p;
  Integer scale;
  PolySeq(RationalPoly poly, Integer s) : p(std::move(poly)), scale(std::move(s)) {}
  Integer value(std::uint64_t n) const override {
    Rational v = p(Rational(Integer(n))) * Rational(scale);
    return numerator_of(v);
  }
  std::string describe() const override {
    return scale == 1 ? "poly(" + to_string(p) + ")" : scale.str() + "*poly(" + to_string(p) + ")";
  }
};

struct ExplicitSeq final : IntegerSequence::Impl {
  std::vector<Integer> values;
  explicit ExplicitSeq(std::vector<Integer> v) : values(std::move(v)) {}
  Integer value(std::uint64_t n) const override {
    if (n >= values.size())
      throw OutOfRange("explicit sequence has " + std::to_string(values.size()) + " values, asked for index " +
                       std::to_string(n));
    return values[n];
  }
  std::string describe() const override {
    std::string s = "explicit(";
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + values[i].str();
    return s + ")";
  }
};

struct ShiftedSeq final : IntegerSequence::Impl {
  IntegerSequence base;
  std::uint64_t k;
  ShiftedSeq(IntegerSequence b, std::uint64_t shift) : base(std::move(b)), k(shift) {}
  Integer value(std::uint64_t n) const override { return base.value(n + k); }
  std::string describe() const override { return "shift(" + base.describe() + "," + std::to_string(k) + ")"; }
};

struct WeightedSeq final : IntegerSequence::Impl {
  WeightTuple t;
  IntegerSequence base;
  WeightedSeq(WeightTuple tuple, IntegerSequence b) : t(std::move(tuple)), base(std::move(b)) {
    if (sum_length(t) == 0) throw InvalidArgument("weighted sequence needs a tuple with positive sum length");
  }
  Integer value(std::uint64_t n) const override {
    const Weight& w = t[n % t.size()];
    const std::uint64_t start = window_offset(t, n);
    Rational acc = w.constant();
    for (std::size_t i = 0; i < w.window(); ++i)
      if (w.coeff(i) != 0) acc += w.coeff(i) * Rational(base.value(start + i));
    if (!is_integer(acc)) throw NotNatural("weighted value " + to_string(acc) + " at index " + std::to_string(n));
    return numerator_of(acc);
  }
  std::string describe() const override { return to_string(t) + "*(" + base.describe() + ")"; }
};

}  // namespace detail

inline IntegerSequence IntegerSequence::poly(RationalPoly p, Integer scale) {
  if (scale < 1) throw InvalidArgument("scale must be positive");
  const Integer d = naturalise(p);
  if (scale % d != 0)
    throw NotNatural(scale.str() + "*(" + to_string(p) + ") is not integer-valued; least multiplier is " + d.str());
  return IntegerSequence(std::make_shared<detail::PolySeq>(std::move(p), std::move(scale)));
}

inline IntegerSequence IntegerSequence::explicit_values(std::vector<Integer> values) {
  return IntegerSequence(std::make_shared<detail::ExplicitSeq>(std::move(values)));
}

inline IntegerSequence IntegerSequence::weighted(WeightTuple t, IntegerSequence base) {
  return IntegerSequence(std::make_shared<detail::WeightedSeq>(std::move(t), std::move(base)));
}

inline IntegerSequence IntegerSequence::shifted(std::uint64_t k) const {
  return IntegerSequence(std::make_shared<detail::ShiftedSeq>(*this, k));
}

// ---------------------------------------------------------------------------
// Streams

/// Result of a prefix query. `stalled` is set when fewer than the requested
/// letters exist (only transducts can stall).
struct Prefix {
  Word word;
  bool stalled = false;

  friend bool operator==(const Prefix&, const Prefix&) = default;
};

class StreamSource {
 public:
  virtual ~StreamSource() = default;
  virtual Prefix prefix(std::size_t n) const = 0;
  virtual std::string describe() const = 0;
};

/// Immutable handle to an infinite word description.
class Stream {
 public:
  explicit Stream(std::shared_ptr<const StreamSource> src) : src_(std::move(src)) {}

  Prefix prefix(std::size_t n) const {
    if (n == 0) return {};
    return src_->prefix(n);
  }
  std::string describe() const { return src_->describe(); }

 private:
  std::shared_ptr<const StreamSource> src_;
};

inline Prefix prefix(const Stream& w, std::size_t n) { return w.prefix(n); }

inline bool eq_prefix(const Stream& a, const Stream& b, std::size_t n) { return a.prefix(n) == b.prefix(n); }

namespace detail {

struct PeriodicSource final : StreamSource {
  Word u, v;
  PeriodicSource(Word head, Word cycle) : u(std::move(head)), v(std::move(cycle)) {}
  Prefix prefix(std::size_t n) const override {
    Prefix p;
    p.word.reserve(n);
    p.word.append(u, 0, std::min(n, u.size()));
    while (p.word.size() < n) p.word.append(v, 0, std::min(v.size(), n - p.word.size()));
    return p;
  }
  std::string describe() const override { return "up:" + u + ":" + v; }
};

}  // namespace detail

/// u v v v ...
inline Stream up_word(Word u, Word v) {
  if (v.empty()) throw EmptyCycle("the periodic part must be nonempty");
  if (!is_binary_word(u) || !is_binary_word(v)) throw InvalidArgument("words must be over {0,1}");
  return Stream(std::make_shared<detail::PeriodicSource>(std::move(u), std::move(v)));
}

/// A morphism on the letters 0..size()-1.
using Morphism = std::vector<std::vector<std::uint8_t>>;
/// Maps each internal letter to '0' or '1'.
using Coding = std::vector<char>;

namespace detail {

struct MorphicSource final : StreamSource {
  std::uint8_t start;
  Morphism h;
  Coding c;
  std::string name;
  MorphicSource(std::uint8_t s, Morphism m, Coding cd, std::string nm)
      : start(s), h(std::move(m)), c(std::move(cd)), name(std::move(nm)) {}

  Prefix prefix(std::size_t n) const override {
    std::vector<std::uint8_t> cur{start};
    // h(start) begins with start, so each iterate extends the previous one.
    while (cur.size() < n) {
      std::vector<std::uint8_t> next;
      next.reserve(std::min(n, cur.size() * 4));
      for (auto letter : cur) {
        const auto& img = h[letter];
        next.insert(next.end(), img.begin(), img.end());
        if (next.size() >= n) break;
      }
      cur = std::move(next);
    }
    Prefix p;
    p.word.reserve(n);
    for (std::size_t i = 0; i < n; ++i) p.word.push_back(c[cur[i]]);
    return p;
  }
  std::string describe() const override { return name; }
};

}  // namespace detail

/// c(h^ω(start)). Requires h(start) to begin with start and have length ≥ 2.
inline Stream morphic_word(std::uint8_t start, Morphism h, Coding c, std::string name = "morphic") {
  if (start >= h.size()) throw InvalidArgument("start letter outside the morphism's alphabet");
  if (c.size() != h.size()) throw InvalidArgument("coding must cover every letter");
  for (const auto& img : h)
    for (auto letter : img)
      if (letter >= h.size()) throw InvalidArgument("morphism image uses an unknown letter");
  for (char ch : c)
    if (ch != '0' && ch != '1') throw InvalidArgument("coding must map into {0,1}");
  const auto& img = h[start];
  if (img.size() < 2 || img.front() != start)
    throw NotProlongable("h(start) must begin with start and have length at least 2");
  return Stream(std::make_shared<detail::MorphicSource>(start, std::move(h), std::move(c), std::move(name)));
}

/// ⟨0 | 0 ↦ 01, 1 ↦ 10⟩
inline Stream thue_morse() { return morphic_word(0, {{0, 1}, {1, 0}}, {'0', '1'}, "thue-morse"); }
/// ⟨0 | 0 ↦ 01, 1 ↦ 00⟩
inline Stream period_doubling() { return morphic_word(0, {{0, 1}, {0, 0}}, {'0', '1'}, "period-doubling"); }
/// ⟨0 | 0 ↦ 001, 1 ↦ 110⟩
inline Stream mephisto_waltz() { return morphic_word(0, {{0, 0, 1}, {1, 1, 0}}, {'0', '1'}, "mephisto"); }

namespace detail {

struct BlockSource final : StreamSource {
  IntegerSequence f;
  explicit BlockSource(IntegerSequence seq) : f(std::move(seq)) {}
  Prefix prefix(std::size_t n) const override {
    Prefix p;
    p.word.reserve(n);
    for (std::uint64_t i = 0; p.word.size() < n; ++i) {
      const Integer len = f.value(i);
      if (len < 0) throw NegativeBlock("block " + std::to_string(i) + " has length " + len.str());
      p.word.push_back('1');
      const std::size_t room = n - p.word.size();
      const std::size_t zeros = len >= Integer(room) ? room : len.convert_to<std::size_t>();
      p.word.append(zeros, '0');
    }
    return p;
  }
  std::string describe() const override { return "block:" + f.describe(); }
};

}  // namespace detail

/// ⟨f⟩ = 1 0^{f(0)} 1 0^{f(1)} ...
inline Stream block_word(IntegerSequence f) { return Stream(std::make_shared<detail::BlockSource>(std::move(f))); }

/// Lengths of the complete blocks of a finite block-word prefix: the 0-runs
/// that are followed by a 1. The word must start with 1.
inline std::vector<Integer> complete_blocks(std::string_view word) {
  std::vector<Integer> blocks;
  if (word.empty()) return blocks;
  if (word.front() != '1') throw InvalidArgument("block word prefix must start with 1");
  std::size_t run = 0;
  for (std::size_t i = 1; i < word.size(); ++i) {
    if (word[i] == '1') {
      blocks.emplace_back(run);
      run = 0;
    } else {
      ++run;
    }
  }
  return blocks;
}

/// `up:<u>:<v>`, `thue-morse`, `period-doubling`, `mephisto`,
/// `block:poly:<c0,...,ck>` (naturalised), `block:explicit:<v0,v1,...>`.
inline Stream parse_word_spec(std::string_view spec) {
  spec = trim(spec);
  if (spec == "thue-morse") return thue_morse();
  if (spec == "period-doubling") return period_doubling();
  if (spec == "mephisto") return mephisto_waltz();
  auto parts = split(spec, ':');
  if (parts.size() == 3 && parts[0] == "up") return up_word(Word(parts[1]), Word(parts[2]));
  if (parts.size() == 3 && parts[0] == "block" && parts[1] == "poly")
    return block_word(IntegerSequence::naturalised(parse_poly(parts[2])));
  if (parts.size() == 3 && parts[0] == "block" && parts[1] == "explicit") {
    std::vector<Integer> values;
    for (auto v : split(parts[2], ',')) {
      Integer x = parse_integer(v);
      if (x < 0) throw NegativeBlock("explicit block length " + x.str());
      values.push_back(std::move(x));
    }
    return block_word(IntegerSequence::explicit_values(std::move(values)));
  }
  throw InvalidArgument("unknown word spec '" + std::string(spec) + "'");
}

}  // namespace tdeg

#endif  // TDEG_WORDS_HPP
