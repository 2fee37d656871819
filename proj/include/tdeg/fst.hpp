#ifndef TDEG_FST_HPP
#define TDEG_FST_HPP

// Sequential finite-state transducers over the binary alphabet.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdeg/error.hpp"
#include "tdeg/exactla.hpp"
#include "tdeg/words.hpp"

namespace tdeg {

using State = std::uint32_t;

struct Edge {
  State next = 0;
  Word out;

  friend bool operator==(const Edge&, const Edge&) = default;
};

inline int letter_index(char c) {
  if (c == '0') return 0;
  if (c == '1') return 1;
  throw BadLetter(std::string("letter '") + c + "' is not in {0,1}");
}

/// Deterministic transducer with total transition and output functions.
/// Edges are stored at index 2·state + letter.
class Fst {
 public:
  Fst(std::size_t state_count, State initial, std::vector<Edge> edges)
      : n_(state_count), q0_(initial), edges_(std::move(edges)) {
    if (n_ == 0) throw InvalidArgument("a transducer needs at least one state");
    if (q0_ >= n_) throw InvalidArgument("initial state out of range");
    if (edges_.size() != 2 * n_) throw MissingTransition("expected " + std::to_string(2 * n_) + " edges");
    for (const auto& e : edges_) {
      if (e.next >= n_) throw InvalidArgument("edge target out of range");
      if (!is_binary_word(e.out)) throw BadLetter("edge output '" + e.out + "' is not over {0,1}");
    }
  }

  /// Builds a machine from a callback `(state, letter) -> Edge`.
  template <class F>
  static Fst from_function(std::size_t state_count, State initial, F&& edge) {
    std::vector<Edge> edges;
    edges.reserve(2 * state_count);
    for (std::size_t q = 0; q < state_count; ++q)
      for (int a = 0; a < 2; ++a) edges.push_back(edge(static_cast<State>(q), a));
    return Fst(state_count, initial, std::move(edges));
  }

  static Fst identity() {
    return from_function(1, 0, [](State, int a) { return Edge{0, Word(1, static_cast<char>('0' + a))}; });
  }

  std::size_t state_count() const noexcept { return n_; }
  State initial() const noexcept { return q0_; }
  const Edge& edge(State q, int letter) const { return edges_[2 * static_cast<std::size_t>(q) + letter]; }
  State next(State q, int letter) const { return edge(q, letter).next; }
  const Word& output(State q, int letter) const { return edge(q, letter).out; }

  std::size_t max_output_length() const {
    std::size_t m = 0;
    for (const auto& e : edges_) m = std::max(m, e.out.size());
    return m;
  }

  friend bool operator==(const Fst&, const Fst&) = default;

 private:
  std::size_t n_;
  State q0_;
  std::vector<Edge> edges_;
};

struct Transduction {
  Word output;
  State final_state = 0;
};

/// λ(from, w) together with δ(from, w).
inline Transduction run(const Fst& a, State from, std::string_view w) {
  Transduction t{{}, from};
  for (char c : w) {
    const Edge& e = a.edge(t.final_state, letter_index(c));
    t.output += e.out;
    t.final_state = e.next;
  }
  return t;
}

inline Transduction transduce_finite(const Fst& a, std::string_view w) { return run(a, a.initial(), w); }

// ---------------------------------------------------------------------------
// Transducts of streams

inline constexpr std::size_t kDefaultInputBudget = 1'000'000;

namespace detail {

struct TransductSource final : StreamSource {
  Fst machine;
  Stream inner;
  std::size_t budget;

  TransductSource(Fst m, Stream in, std::size_t b) : machine(std::move(m)), inner(std::move(in)), budget(b) {}

  Prefix prefix(std::size_t n) const override {
    Prefix out;
    State q = machine.initial();
    std::size_t consumed = 0;
    std::size_t chunk = std::max<std::size_t>(64, n);
    while (out.word.size() < n) {
      if (consumed >= budget) {
        out.stalled = true;
        break;
      }
      const std::size_t want = std::min(budget, consumed + chunk);
      Prefix in = inner.prefix(want);
      for (std::size_t i = consumed; i < in.word.size() && out.word.size() < n; ++i) {
        const Edge& e = machine.edge(q, letter_index(in.word[i]));
        out.word += e.out;
        q = e.next;
        consumed = i + 1;
      }
      if (out.word.size() >= n) break;
      if (in.word.size() < want) {  // inner word is finite
        out.stalled = true;
        break;
      }
      consumed = in.word.size();
      chunk *= 2;
    }
    if (out.word.size() > n) out.word.resize(n);
    return out;
  }

  std::string describe() const override { return "transduct(" + inner.describe() + ")"; }
};

}  // namespace detail

/// The transduct λ(q0, w). A prefix query feeds at most `budget` input letters
/// and reports `stalled` if that is not enough.
inline Stream transduce_stream(Fst a, Stream w, std::size_t budget = kDefaultInputBudget) {
  return Stream(std::make_shared<detail::TransductSource>(std::move(a), std::move(w), budget));
}

// ---------------------------------------------------------------------------
// Composition

/// Machine C with λ_C(w) = λ_b(λ_a(w)). Only pairs reachable from the initial
/// pair are built.
inline Fst compose(const Fst& a, const Fst& b) {
  std::map<std::pair<State, State>, State> index;
  std::vector<std::pair<State, State>> pairs;
  auto intern = [&](State x, State y) {
    auto [it, fresh] = index.try_emplace({x, y}, static_cast<State>(pairs.size()));
    if (fresh) pairs.emplace_back(x, y);
    return it->second;
  };
  intern(a.initial(), b.initial());
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (int letter = 0; letter < 2; ++letter) {
      const auto [x, y] = pairs[i];
      const Edge& ea = a.edge(x, letter);
      Transduction tb = run(b, y, ea.out);
      edges.push_back(Edge{intern(ea.next, tb.final_state), std::move(tb.output)});
    }
  }
  return Fst(pairs.size(), 0, std::move(edges));
}

/// Drops states unreachable from the initial state, renumbering in BFS order.
inline Fst prune_unreachable(const Fst& a) {
  std::vector<long> id(a.state_count(), -1);
  std::vector<State> order{a.initial()};
  id[a.initial()] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int letter = 0; letter < 2; ++letter) {
      State t = a.next(order[i], letter);
      if (id[t] < 0) {
        id[t] = static_cast<long>(order.size());
        order.push_back(t);
      }
    }
  return Fst::from_function(order.size(), 0, [&](State q, int letter) {
    const Edge& e = a.edge(order[q], letter);
    return Edge{static_cast<State>(id[e.next]), e.out};
  });
}

// ---------------------------------------------------------------------------
// Concrete machines

/// Difference of consecutive bits modulo 2 (states q0, q1, q2 = 0, 1, 2).
inline Fst difference_fst() {
  return Fst(3, 0,
             {
                 Edge{1, ""}, Edge{2, ""},    // q0
                 Edge{1, "0"}, Edge{2, "1"},  // q1
                 Edge{1, "1"}, Edge{2, "0"},  // q2
             });
}

/// On block words, keeps the 1 opening every m-th block and deletes the other
/// 1s, so ⟨f⟩ becomes ⟨g⟩ with g(n) = f(mn) + ... + f(mn + m - 1).
/// State i < m tracks the current block index mod m; state m waits for the
/// first 1.
inline Fst fuse_fst(std::size_t m) {
  if (m == 0) throw InvalidArgument("fuse factor must be at least 1");
  const auto start = static_cast<State>(m);
  return Fst::from_function(m + 1, start, [m, start](State q, int letter) {
    if (q == start) return letter == 1 ? Edge{0, "1"} : Edge{start, ""};
    if (letter == 0) return Edge{q, "0"};
    const auto next = static_cast<State>((q + 1) % m);
    return Edge{next, next == 0 ? "1" : ""};
  });
}

/// Every edge outputs `out` and stays in the single state.
inline Fst constant_fst(Word out) {
  return Fst::from_function(1, 0, [&](State, int) { return Edge{0, out}; });
}

// ---------------------------------------------------------------------------
// FST v1 text format

inline std::string serialize_fst(const Fst& a) {
  std::ostringstream os;
  os << "FST v1\n";
  os << "states " << a.state_count() << "\n";
  os << "initial " << a.initial() << "\n";
  for (State q = 0; q < a.state_count(); ++q)
    for (int letter = 0; letter < 2; ++letter) {
      const Edge& e = a.edge(q, letter);
      os << "trans " << q << " " << letter << " " << e.next << " " << (e.out.empty() ? "-" : e.out) << "\n";
    }
  return os.str();
}

namespace detail {

inline std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline std::size_t parse_count(const std::string& tok, std::size_t line) {
  if (tok.empty() || tok.size() > 9 || tok.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(line, "expected a natural number, got '" + tok + "'");
  return std::stoul(tok);
}

}  // namespace detail

inline Fst parse_fst(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  enum class Expect { Header, States, Initial, Trans } expect = Expect::Header;
  std::size_t n = 0;
  State initial = 0;
  std::vector<Edge> edges;
  std::vector<bool> seen;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    switch (expect) {
      case Expect::Header:
        if (tok.size() != 2 || tok[0] != "FST" || tok[1] != "v1") throw ParseError(line_no, "expected 'FST v1'");
        expect = Expect::States;
        break;
      case Expect::States:
        if (tok.size() != 2 || tok[0] != "states") throw ParseError(line_no, "expected 'states <n>'");
        n = detail::parse_count(tok[1], line_no);
        if (n == 0) throw ParseError(line_no, "state count must be positive");
        edges.assign(2 * n, Edge{});
        seen.assign(2 * n, false);
        expect = Expect::Initial;
        break;
      case Expect::Initial:
        if (tok.size() != 2 || tok[0] != "initial") throw ParseError(line_no, "expected 'initial <id>'");
        initial = static_cast<State>(detail::parse_count(tok[1], line_no));
        if (initial >= n) throw ParseError(line_no, "initial state out of range");
        expect = Expect::Trans;
        break;
      case Expect::Trans: {
        if (tok.size() != 5 || tok[0] != "trans")
          throw ParseError(line_no, "expected 'trans <state> <letter> <next-state> <output|->'");
        const std::size_t q = detail::parse_count(tok[1], line_no);
        if (tok[2] != "0" && tok[2] != "1") throw ParseError(line_no, "letter must be 0 or 1");
        const std::size_t next = detail::parse_count(tok[3], line_no);
        if (q >= n || next >= n) throw ParseError(line_no, "state out of range");
        const std::string out = tok[4] == "-" ? "" : tok[4];
        if (out.empty() && tok[4] != "-") throw ParseError(line_no, "empty output must be written '-'");
        if (!is_binary_word(out)) throw ParseError(line_no, "output must be a word over {0,1} or '-'");
        const std::size_t slot = 2 * q + (tok[2] == "1" ? 1 : 0);
        if (seen[slot]) throw ParseError(line_no, "duplicate transition");
        seen[slot] = true;
        edges[slot] = Edge{static_cast<State>(next), out};
        break;
      }
    }
  }
  if (expect == Expect::Header) throw ParseError(line_no, "empty input");
  if (expect != Expect::Trans) throw ParseError(line_no, "truncated header");
  for (std::size_t slot = 0; slot < seen.size(); ++slot)
    if (!seen[slot])
      throw MissingTransition("no transition for state " + std::to_string(slot / 2) + " letter " +
                              std::to_string(slot % 2));
  return Fst(n, initial, std::move(edges));
}

}  // namespace tdeg

#endif  // TDEG_FST_HPP
