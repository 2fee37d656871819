#ifndef TDEG_FST_RUNS_HPP
#define TDEG_FST_RUNS_HPP

// Transduction of run-length encoded words. Block words with astronomically
// long blocks are fed through a machine one run at a time: a run of a single
// letter walks the functional graph q ↦ δ(q, a), and once it reaches a cycle
// whose edge outputs use only one letter, the whole remaining run is
// accounted for arithmetically.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdeg/error.hpp"
#include "tdeg/exactla.hpp"
#include "tdeg/fst.hpp"

namespace tdeg {

struct Run {
  char letter = '0';
  Integer count;

  friend bool operator==(const Run&, const Run&) = default;
};

/// Maximal runs; adjacent runs always differ in letter and counts are positive.
using RunWord = std::vector<Run>;

inline void append_run(RunWord& w, char letter, const Integer& count) {
  if (count <= 0) return;
  if (!w.empty() && w.back().letter == letter)
    w.back().count += count;
  else
    w.push_back(Run{letter, count});
}

inline void append_word(RunWord& w, std::string_view word) {
  for (char c : word) append_run(w, c, 1);
}

inline RunWord to_runs(std::string_view word) {
  RunWord w;
  append_word(w, word);
  return w;
}

inline Word expand(const RunWord& w) {
  Word out;
  for (const auto& r : w) out.append(r.count.convert_to<std::size_t>(), r.letter);
  return out;
}

inline Integer total_length(const RunWord& w) {
  Integer n = 0;
  for (const auto& r : w) n += r.count;
  return n;
}

/// 1 0^{b_0} 1 0^{b_1} ... 1 0^{b_{n-1}} followed by a closing 1, so every
/// listed block is complete.
inline RunWord block_runs(std::span<const Integer> blocks) {
  RunWord w;
  for (const auto& b : blocks) {
    if (b < 0) throw NegativeBlock("block length " + b.str());
    append_run(w, '1', 1);
    append_run(w, '0', b);
  }
  append_run(w, '1', 1);
  return w;
}

/// Complete blocks of a run-length encoded block-word prefix.
inline std::vector<Integer> run_blocks(const RunWord& w) {
  std::vector<Integer> blocks;
  if (w.empty()) return blocks;
  if (w.front().letter != '1') throw InvalidArgument("block word must start with 1");
  Integer current = 0;
  bool open = false;
  for (const auto& r : w) {
    if (r.letter == '0') {
      current += r.count;
      continue;
    }
    // r.count consecutive 1s: the first closes the open block, the rest close empty blocks.
    if (open) blocks.push_back(current);
    for (Integer i = 1; i < r.count; ++i) blocks.emplace_back(0);
    current = 0;
    open = true;
  }
  return blocks;
}

/// Stateful run-length transducer; feeding consecutive pieces of a word is
/// equivalent to feeding their concatenation.
class RunTransducer {
 public:
  /// Outputs longer than this many repetitions of a mixed-letter cycle are refused.
  static constexpr std::uint64_t kMaxCycleExpansion = 1'000'000;

  explicit RunTransducer(const Fst& a) : a_(a), q_(a.initial()) {
    for (int letter = 0; letter < 2; ++letter) analyse(letter);
  }

  State state() const noexcept { return q_; }

  RunWord feed(const RunWord& input) {
    RunWord out;
    for (const auto& r : input) feed_run(r.letter, r.count, out);
    return out;
  }

  void feed_run(char letter_char, Integer count, RunWord& out) {
    const int letter = letter_index(letter_char);
    const Graph& g = graph_[letter];
    while (count > 0 && g.cycle_of[q_] < 0) {
      step(letter, out);
      --count;
    }
    if (count == 0) return;
    const Cycle& c = g.cycles[static_cast<std::size_t>(g.cycle_of[q_])];
    const std::size_t len = c.states.size();
    const std::size_t p = g.position[q_];
    const Integer full = count / len;
    const std::size_t rem = static_cast<std::size_t>((count % len).convert_to<std::uint64_t>());
    if (c.unary) {
      Integer produced = full * Integer(c.sum[len]);
      if (p + rem <= len)
        produced += Integer(c.sum[p + rem] - c.sum[p]);
      else
        produced += Integer(c.sum[len] - c.sum[p] + c.sum[p + rem - len]);
      append_run(out, c.letter, produced);
      q_ = c.states[(p + rem) % len];
      return;
    }
    if (full > kMaxCycleExpansion) throw InvalidArgument("run too long for a mixed-output cycle");
    const std::uint64_t reps = full.convert_to<std::uint64_t>();
    for (std::uint64_t i = 0; i < reps; ++i)
      for (std::size_t j = 0; j < len; ++j) step(letter, out);
    for (std::size_t j = 0; j < rem; ++j) step(letter, out);
  }

 private:
  struct Cycle {
    std::vector<State> states;
    std::vector<std::uint64_t> sum;  // sum[i] = output length of the first i edges
    bool unary = true;
    char letter = '0';
  };
  struct Graph {
    std::vector<long> cycle_of;  // -1 when the state is not on a cycle
    std::vector<std::size_t> position;
    std::vector<Cycle> cycles;
  };

  void step(int letter, RunWord& out) {
    const Edge& e = a_.edge(q_, letter);
    append_word(out, e.out);
    q_ = e.next;
  }

  void analyse(int letter) {
    const std::size_t n = a_.state_count();
    Graph& g = graph_[letter];
    g.cycle_of.assign(n, -1);
    g.position.assign(n, 0);
    std::vector<std::uint8_t> color(n, 0);  // 0 new, 1 on current path, 2 done
    std::vector<State> path;
    for (State s = 0; s < n; ++s) {
      if (color[s] != 0) continue;
      path.clear();
      State q = s;
      while (color[q] == 0) {
        color[q] = 1;
        path.push_back(q);
        q = a_.next(q, letter);
      }
      if (color[q] == 1) {
        Cycle c;
        auto it = std::find(path.begin(), path.end(), q);
        c.states.assign(it, path.end());
        c.sum.push_back(0);
        bool letter_set = false;
        for (std::size_t i = 0; i < c.states.size(); ++i) {
          const Word& out = a_.output(c.states[i], letter);
          for (char ch : out) {
            if (!letter_set) {
              c.letter = ch;
              letter_set = true;
            } else if (ch != c.letter) {
              c.unary = false;
            }
          }
          c.sum.push_back(c.sum.back() + out.size());
          g.cycle_of[c.states[i]] = static_cast<long>(g.cycles.size());
          g.position[c.states[i]] = i;
        }
        g.cycles.push_back(std::move(c));
      }
      for (State v : path) color[v] = 2;
    }
  }

  Fst a_;
  State q_;
  Graph graph_[2];
};

inline RunWord transduce_runs(const Fst& a, const RunWord& input) {
  RunTransducer t(a);
  return t.feed(input);
}

}  // namespace tdeg

#endif  // TDEG_FST_RUNS_HPP
