#ifndef TDEG_DIAGONAL_HPP
#define TDEG_DIAGONAL_HPP

// Diagonalizing against a finite list of (transducer, word) pairs: build a
// finite word w whose image under each non-predetermined machine already
// fails to be a prefix of the paired word.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdeg/error.hpp"
#include "tdeg/fst.hpp"
#include "tdeg/words.hpp"

namespace tdeg {

/// Neither word is a prefix of the other.
inline bool incomparable(std::string_view a, std::string_view b) {
  const std::size_t n = std::min(a.size(), b.size());
  return a.substr(0, n) != b.substr(0, n);
}

inline std::size_t first_difference(std::string_view a, std::string_view b) {
  std::size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  return i;
}

/// Nonempty binary words in shortlex order: 0, 1, 00, 01, ...
class ShortlexWords {
 public:
  explicit ShortlexWords(std::size_t max_len) : max_(max_len) {}

  std::optional<Word> next() {
    if (cur_.empty()) {
      if (max_ == 0) return std::nullopt;
      cur_ = "0";
      return cur_;
    }
    std::size_t i = cur_.size();
    while (i > 0 && cur_[i - 1] == '1') cur_[--i] = '0';
    if (i == 0) {
      if (cur_.size() == max_) return std::nullopt;
      cur_.assign(cur_.size() + 1, '0');
    } else {
      cur_[i - 1] = '1';
    }
    return cur_;
  }

 private:
  std::size_t max_;
  Word cur_;
};

struct Incomparable {
  Word x, y;
  std::size_t j = 0;  ///< first index where λ(q0, vx) and λ(q0, vy) differ
};

/// Shortlex search over extensions |x| ≤ depth for the first y whose output
/// λ(q0, vy) is prefix-incomparable with some earlier λ(q0, vx); x is the
/// first such earlier word.
inline std::optional<Incomparable> find_incomparable(const Fst& a, std::string_view v, std::size_t depth) {
  if (depth == 0) throw InvalidArgument("depth must be at least 1");
  const Transduction base = transduce_finite(a, v);
  auto output = [&](const Word& x) { return base.output + run(a, base.final_state, x).output; };
  // All outputs seen so far form a chain; `longest` is its top.
  Word longest = base.output;
  ShortlexWords ys(depth);
  while (auto y = ys.next()) {
    const Word oy = output(*y);
    if (!incomparable(oy, longest)) {
      if (oy.size() > longest.size()) longest = oy;
      continue;
    }
    ShortlexWords xs(depth);
    while (auto x = xs.next()) {
      const Word ox = output(*x);
      if (incomparable(ox, oy)) return Incomparable{*x, *y, first_difference(ox, oy)};
    }
  }
  return std::nullopt;
}

/// True when no incomparable extensions exist up to `depth`. Only a false
/// answer is conclusive.
inline bool is_predetermined_bounded(const Fst& a, std::string_view v, std::size_t depth) {
  return !find_incomparable(a, v, depth).has_value();
}

struct AdversaryPair {
  Fst machine;
  Stream word;
};

using Adversary = std::vector<AdversaryPair>;

struct DiagEntry {
  enum class Status { Dodged, PredeterminedWithinBudget };
  Status status = Status::Dodged;
  std::size_t begin = 0;  ///< segment [begin, end) of w chosen for this pair
  std::size_t end = 0;
  std::size_t j = 0;      ///< differing output index (Dodged only)
  std::size_t depth = 0;
};

struct DiagReport {
  std::vector<DiagEntry> entries;
};

inline constexpr std::size_t kDefaultDiagonalDepth = 12;

/// w = w_0 w_1 ... with w_i = 0 for a predetermined pair, and otherwise the
/// one of x, y whose image disagrees with s_i at the differing index j.
inline std::pair<Word, DiagReport> diagonal_word(const Adversary& adv, std::size_t depth = kDefaultDiagonalDepth) {
  if (depth == 0) throw InvalidArgument("depth must be at least 1");
  Word w;
  DiagReport report;
  for (const auto& [machine, s] : adv) {
    DiagEntry e;
    e.begin = w.size();
    e.depth = depth;
    const auto found = find_incomparable(machine, w, depth);
    if (!found) {
      e.status = DiagEntry::Status::PredeterminedWithinBudget;
      w += '0';
    } else {
      const Word ox = transduce_finite(machine, w + found->x).output;
      const Prefix sp = s.prefix(found->j + 1);
      const bool x_agrees = sp.word.size() > found->j && ox[found->j] == sp.word[found->j];
      w += x_agrees ? found->y : found->x;
      e.j = found->j;
    }
    e.end = w.size();
    report.entries.push_back(e);
  }
  return {w, report};
}

/// For each Dodged entry, rechecks that the image of w[0, end) is not a
/// prefix of the paired word; nullopt for the other entries.
inline std::vector<std::optional<bool>> verify_diagonal(const Adversary& adv, std::string_view w,
                                                        const DiagReport& report) {
  std::vector<std::optional<bool>> out;
  for (std::size_t i = 0; i < adv.size(); ++i) {
    if (i >= report.entries.size() || report.entries[i].end > w.size()) {
      out.emplace_back(false);
      continue;
    }
    const DiagEntry& e = report.entries[i];
    if (e.status != DiagEntry::Status::Dodged) {
      out.emplace_back(std::nullopt);
      continue;
    }
    const Word image = transduce_finite(adv[i].machine, w.substr(0, e.end)).output;
    const Prefix sp = adv[i].word.prefix(image.size());
    out.emplace_back(sp.word.size() == image.size() && sp.word != image);
  }
  return out;
}

/// Every machine with at most `max_states` states (initial state 0) and edge
/// outputs of length at most `max_out`. Order: number of states, then the
/// edge targets, then the edge outputs (shortlex), the first edge most
/// significant.
class FstEnumerator {
 public:
  FstEnumerator(std::size_t max_states, std::size_t max_out) : max_states_(max_states) {
    if (max_states == 0) throw InvalidArgument("max_states must be at least 1");
    outputs_.emplace_back();
    ShortlexWords words(max_out);
    while (auto w = words.next()) outputs_.push_back(*w);
    reset(1);
  }

  std::optional<Fst> next() {
    if (n_ > max_states_) return std::nullopt;
    const std::size_t edges = 2 * n_;
    std::vector<Edge> es(edges);
    for (std::size_t e = 0; e < edges; ++e) es[e] = Edge{static_cast<State>(digits_[e]), outputs_[digits_[edges + e]]};
    Fst machine(n_, 0, std::move(es));
    advance();
    return machine;
  }

 private:
  void reset(std::size_t n) {
    n_ = n;
    digits_.assign(4 * n, 0);
  }

  void advance() {
    const std::size_t edges = 2 * n_;
    for (std::size_t i = digits_.size(); i > 0; --i) {
      const std::size_t radix = i - 1 < edges ? n_ : outputs_.size();
      if (++digits_[i - 1] < radix) return;
      digits_[i - 1] = 0;
    }
    reset(n_ + 1);
  }

  std::size_t max_states_;
  std::vector<Word> outputs_;
  std::size_t n_ = 1;
  std::vector<std::size_t> digits_;
};

inline FstEnumerator enumerate_fsts(std::size_t max_states, std::size_t max_out) {
  return FstEnumerator(max_states, max_out);
}

}  // namespace tdeg

#endif  // TDEG_DIAGONAL_HPP
