#ifndef TDEG_CERTIFICATE_HPP
#define TDEG_CERTIFICATE_HPP

// Atom certificates: a chain of transducer stages taking ⟨q⟩ to ⟨p⟩ for the
// atom polynomial p, with a symbolic and a semantic checker.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tdeg/error.hpp"
#include "tdeg/exactla.hpp"
#include "tdeg/fst.hpp"
#include "tdeg/fst_runs.hpp"
#include "tdeg/polyatoms.hpp"
#include "tdeg/synthesis.hpp"
#include "tdeg/weights.hpp"
#include "tdeg/words.hpp"

namespace tdeg {

struct Certificate {
  RationalPoly source;
  std::vector<Stage> stages;
  RationalPoly target;
  Rational slack;  ///< γ ⊙ q_ε = target + slack

  // Informational, written as comments and not needed for verification.
  std::optional<Rational> eps;
  Integer d = 1;
  RationalPoly q_eps;
  std::vector<Rational> gamma;
};

inline std::vector<Rational> default_eps_schedule() {
  std::vector<Rational> s;
  Rational e = 1;
  for (int i = 0; i < 20; ++i) s.push_back(e /= 2);
  return s;
}

/// Builds a certificate that ⟨q⟩ transduces to ⟨p⟩, p = atom_polynomial(k, a).
///
/// For each ε of the schedule: reduce q to q_ε, solve M(q_ε) U = V(p) and
/// accept when every entry of U is positive. Then γ = (U; 0) satisfies
/// γ ⊙ q_ε = p + c for a constant c, and the weight (U/e; -c) applied to the
/// naturalised ⟨e·q_ε⟩ gives exactly p. Singular M(q_ε) moves on to the next ε.
inline Certificate atom_certificate(const RationalPoly& q, std::span<const Rational> a,
                                    std::span<const Rational> schedule) {
  require_qk(q);
  const auto k = static_cast<unsigned>(q.order());
  const RationalPoly p = atom_polynomial(k, a);
  const RatVector vp = V_vec(p);
  for (const auto& eps : schedule) {
    EpsilonReduction red = epsilon_reduce(q, eps);
    RatVector u;
    try {
      u = solve_linear(M_mat(red.q_eps), vp);
    } catch (const SingularMatrix&) {
      continue;
    }
    bool positive = true;
    for (const auto& x : u) positive = positive && x > 0;
    if (!positive) continue;

    const Weight gamma(u, 0);
    const RationalPoly image = residue_polys(WeightTuple{gamma}, red.q_eps)[0];
    const RationalPoly diff = image - p;
    if (!diff.is_zero() && diff.order() != 0) throw Error("internal: γ ⊙ q_ε − p is not constant");
    const Rational c = diff.coeff(0);

    const Integer e1 = naturalise(red.q_eps);
    const RationalPoly f2 = red.q_eps * Rational(e1);
    std::vector<Rational> w;
    for (const auto& x : u) w.push_back(x / Rational(e1));
    const WeightTuple last{Weight(std::move(w), -c)};

    Certificate cert;
    cert.source = q;
    cert.stages = std::move(red.stages);
    for (auto& s : rational_stages(last, f2)) cert.stages.push_back(std::move(s));
    cert.target = p;
    cert.slack = c;
    cert.eps = eps;
    cert.d = red.d;
    cert.q_eps = red.q_eps;
    cert.gamma = u;
    return cert;
  }
  throw BudgetExhausted("no epsilon in the schedule gave a positive solution");
}

inline Certificate atom_certificate(const RationalPoly& q, std::span<const Rational> a) {
  const auto s = default_eps_schedule();
  return atom_certificate(q, a, s);
}

// ---------------------------------------------------------------------------
// Text form

inline std::string to_string(const Stage& s) {
  if (const auto* w = std::get_if<WeightStage>(&s)) {
    if (auto d = selection_stride(w->tuple)) return "select d=" + std::to_string(*d);
    return "weight " + to_string(w->tuple);
  }
  if (const auto* r = std::get_if<RatioStage>(&s)) return "ratio " + r->e.str() + "/" + r->d.str();
  return "shift k=" + std::to_string(std::get<ShiftStage>(s).k);
}

inline std::string serialize_certificate(const Certificate& c) {
  std::ostringstream os;
  os << "CERT v1\n";
  if (c.eps) {
    os << "# eps " << to_string(*c.eps) << "\n";
    os << "# d " << c.d.str() << "\n";
    os << "# q_eps " << to_string(c.q_eps) << "\n";
    os << "# gamma " << join(c.gamma) << "\n";
  }
  os << "source poly " << to_string(c.source) << "\n";
  for (const auto& s : c.stages) os << "stage " << to_string(s) << "\n";
  os << "target poly " << to_string(c.target) << "\n";
  os << "slack " << to_string(c.slack) << "\n";
  return os.str();
}

inline Certificate parse_certificate(std::string_view text) {
  Certificate c;
  bool header = false, source = false, target = false, slack = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  auto after = [](std::string_view s, std::string_view key) { return trim(s.substr(key.size())); };
  auto starts = [](std::string_view s, std::string_view key) { return s.substr(0, key.size()) == key; };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    try {
      if (!header) {
        if (line != "CERT v1") throw ParseError(line_no, "expected 'CERT v1'");
        header = true;
      } else if (starts(line, "source poly ")) {
        c.source = parse_poly(after(line, "source poly "));
        source = true;
      } else if (starts(line, "target poly ")) {
        c.target = parse_poly(after(line, "target poly "));
        target = true;
      } else if (starts(line, "slack ")) {
        c.slack = parse_rational(after(line, "slack "));
        slack = true;
      } else if (starts(line, "stage select d=")) {
        const Integer d = parse_integer(after(line, "stage select d="));
        if (d < 1 || d > Integer(1'000'000'000)) throw ParseError(line_no, "bad selection stride");
        c.stages.emplace_back(WeightStage{selection_tuple(d.convert_to<std::size_t>())});
      } else if (starts(line, "stage weight ")) {
        c.stages.emplace_back(WeightStage{parse_weight_tuple(after(line, "stage weight "))});
      } else if (starts(line, "stage ratio ")) {
        auto parts = split(after(line, "stage ratio "), '/');
        if (parts.size() != 2) throw ParseError(line_no, "ratio must be e/D");
        Integer e = parse_integer(parts[0]), d = parse_integer(parts[1]);
        if (e < 0 || d < 1) throw ParseError(line_no, "ratio needs e >= 0 and D >= 1");
        c.stages.emplace_back(RatioStage{std::move(e), std::move(d)});
      } else if (starts(line, "stage shift k=")) {
        const Integer k = parse_integer(after(line, "stage shift k="));
        if (k < 0) throw ParseError(line_no, "negative shift");
        c.stages.emplace_back(ShiftStage{k.convert_to<std::uint64_t>()});
      } else {
        throw ParseError(line_no, "unrecognized line '" + std::string(line) + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!header) throw ParseError(0, "empty input");
  if (!source || !target || !slack) throw ParseError(line_no, "certificate needs source, target and slack lines");
  return c;
}

// ---------------------------------------------------------------------------
// Verification

struct CertificateReport {
  bool symbolic = false;
  std::string symbolic_detail;
  bool semantic = false;
  std::string semantic_detail;
  std::size_t blocks_checked = 0;

  bool ok() const { return symbolic && semantic; }
};

/// Exact check: the stages carry the naturalised source polynomial to the
/// naturalised target, and the final weight stage encodes γ ⊙ q_ε = p + slack
/// with all γ_i > 0, where q_ε is the monic polynomial entering that stage.
inline std::pair<bool, std::string> verify_symbolic(const Certificate& c) {
  try {
    require_qk(c.source);
    if (c.target.is_zero()) return {false, "target is zero"};
    RationalPoly f = c.source * Rational(naturalise(c.source));
    std::optional<std::size_t> last_weight;
    for (std::size_t i = 0; i < c.stages.size(); ++i)
      if (std::holds_alternative<WeightStage>(c.stages[i])) last_weight = i;
    if (!last_weight) return {false, "no weight stage"};
    RationalPoly before_last;
    Rational ratio_after = 1;
    for (std::size_t i = 0; i < c.stages.size(); ++i) {
      if (i == *last_weight) before_last = f;
      if (i > *last_weight) {
        const auto* r = std::get_if<RatioStage>(&c.stages[i]);
        if (!r) return {false, "only ratio stages may follow the final weight stage"};
        ratio_after *= make_rational(r->e, r->d);
      }
      f = apply_stage(c.stages[i], f);
    }
    const RationalPoly want = c.target * Rational(naturalise(c.target));
    if (!(f == want)) return {false, "stages give " + to_string(f) + ", expected " + to_string(want)};

    const Weight& w = std::get<WeightStage>(c.stages[*last_weight]).tuple[0];
    if (before_last.is_zero() || before_last.leading() <= 0) return {false, "degenerate input to the final weight"};
    const Rational e1 = before_last.leading();
    const RationalPoly q_eps = before_last * (1 / e1);
    if (q_eps.coeff(0) != 0) return {false, "reduced source has a constant term"};
    const Rational nat_p = Rational(naturalise(c.target));
    std::vector<Rational> gamma;
    for (const auto& x : w.coeffs()) {
      gamma.push_back(ratio_after * x * e1 / nat_p);
      if (gamma.back() <= 0) return {false, "gamma entry " + to_string(gamma.back()) + " is not positive"};
    }
    const RationalPoly image = residue_polys(WeightTuple{Weight(gamma, 0)}, q_eps)[0];
    const RationalPoly diff = image - c.target;
    if (!(diff == RationalPoly::constant(c.slack)))
      return {false, "gamma (.) q_eps - p = " + to_string(diff) + ", slack says " + to_string(c.slack)};
    if (ratio_after * w.constant() / nat_p != -c.slack) return {false, "final constant does not remove the slack"};
    return {true, "gamma = (" + join(gamma) + "), q_eps = " + to_string(q_eps)};
  } catch (const Error& e) {
    return {false, e.what()};
  }
}

namespace detail {

/// One stage acting on run-length encoded words.
class StageRunner {
 public:
  virtual ~StageRunner() = default;
  virtual RunWord feed(const RunWord& in) = 0;
};

class FstRunner final : public StageRunner {
 public:
  explicit FstRunner(const Fst& a) : t_(a) {}
  RunWord feed(const RunWord& in) override { return t_.feed(in); }

 private:
  RunTransducer t_;
};

// The machines of synth_weight_fst / synth_ratio_fst / synth_shift_fst with
// their counters kept as integers, for parameters too large to tabulate.
class ArithmeticRunner final : public StageRunner {
 public:
  explicit ArithmeticRunner(Stage s) : s_(std::move(s)) {
    if (const auto* w = std::get_if<WeightStage>(&s_)) {
      for (const auto& x : w->tuple) {
        std::vector<Integer> a;
        for (const auto& y : x.coeffs()) a.push_back(detail::require_integer(y, "window coefficient"));
        a_.push_back(std::move(a));
        b_.push_back(detail::require_integer(x.constant(), "constant"));
        if (x.window() == 0 && b_.back() < 0) throw UnsupportedWeights("constant weight with negative value");
      }
      if (sum_length(w->tuple) == 0) throw UnsupportedWeights("tuple consumes no input");
    }
  }

  RunWord feed(const RunWord& in) override {
    RunWord out;
    for (const auto& r : in) {
      if (r.letter == '0')
        zeros(r.count, out);
      else
        for (Integer i = 0; i < r.count; ++i) one(out);
    }
    return out;
  }

 private:
  void zeros(const Integer& x, RunWord& out) {
    if (std::holds_alternative<WeightStage>(s_)) {
      if (!started_) return;
      const Integer produced = a_[j_][i_] * x;
      append_run(out, '0', produced > r_ ? produced - r_ : Integer(0));
      r_ = r_ > produced ? r_ - produced : Integer(0);
    } else if (const auto* q = std::get_if<RatioStage>(&s_)) {
      append_run(out, '0', q->e * (pos_ + x) / q->d - q->e * pos_ / q->d);
      pos_ = (pos_ + x) % q->d;
    } else if (copying_) {
      append_run(out, '0', x);
    }
  }

  void one(RunWord& out) {
    if (const auto* w = std::get_if<WeightStage>(&s_)) {
      const std::size_t m = a_.size();
      std::size_t next;
      if (!started_) {
        started_ = true;
        next = 0;
      } else if (i_ + 1 < a_[j_].size()) {
        ++i_;
        return;
      } else {
        if (b_[j_] > 0) append_run(out, '0', b_[j_]);
        next = (j_ + 1) % m;
      }
      while (w->tuple[next].window() == 0) {
        append_run(out, '1', 1);
        append_run(out, '0', b_[next]);
        next = (next + 1) % m;
      }
      append_run(out, '1', 1);
      j_ = next;
      i_ = 0;
      r_ = b_[j_] < 0 ? Integer(-b_[j_]) : Integer(0);
    } else if (std::holds_alternative<RatioStage>(s_)) {
      append_run(out, '1', 1);
      pos_ = 0;
    } else if (copying_) {
      append_run(out, '1', 1);
    } else if (Integer(ones_++) == Integer(std::get<ShiftStage>(s_).k)) {
      copying_ = true;
      append_run(out, '1', 1);
    }
  }

  Stage s_;
  std::vector<std::vector<Integer>> a_;
  std::vector<Integer> b_;
  bool started_ = false;
  std::size_t j_ = 0, i_ = 0;
  Integer r_ = 0;
  Integer pos_ = 0;
  std::uint64_t ones_ = 0;
  bool copying_ = false;
};

// Rough size of the tabulated machine: states plus total edge output.
inline Integer tabulated_size(const Stage& s) {
  if (const auto* w = std::get_if<WeightStage>(&s)) {
    Integer size = 1;
    for (const auto& x : w->tuple) {
      Integer biggest = 1;
      for (const auto& y : x.coeffs()) biggest = std::max(biggest, numerator_of(y) / denominator_of(y) + 1);
      const Integer del = x.constant() < 0 ? Integer(numerator_of(-x.constant())) : Integer(0);
      size += Integer(x.window()) * (del + 1) * (biggest + 1) + abs(numerator_of(x.constant()));
    }
    return size;
  }
  if (const auto* r = std::get_if<RatioStage>(&s)) return r->d * (r->e / r->d + 2);
  return Integer(std::get<ShiftStage>(s).k) + 2;
}

// Input blocks needed so that a stage emits `out` complete blocks.
inline Integer blocks_needed(const Stage& s, const Integer& out) {
  if (const auto* w = std::get_if<WeightStage>(&s)) {
    const std::uint64_t n = out.convert_to<std::uint64_t>() + 1;
    return Integer(window_offset(w->tuple, n)) + 1;
  }
  if (std::holds_alternative<RatioStage>(s)) return out + 1;
  return out + Integer(std::get<ShiftStage>(s).k) + 1;
}

}  // namespace detail

/// Largest tabulated machine the semantic check builds explicitly.
inline constexpr std::uint64_t kTabulationLimit = 4'000'000;

/// Runs the stage machines one after another on the run-length encoded ⟨q⟩
/// and compares the first `blocks` blocks with ⟨p⟩. Ratio stages also check
/// that every block they receive scales to an integer.
inline std::pair<bool, std::string> verify_semantic(const Certificate& c, std::size_t blocks,
                                                    std::size_t* explicit_stages = nullptr) {
  try {
    if (c.stages.empty()) return {false, "no stages"};
    Integer need = blocks;
    for (auto it = c.stages.rbegin(); it != c.stages.rend(); ++it) need = detail::blocks_needed(*it, need);
    const IntegerSequence src = IntegerSequence::naturalised(c.source);
    std::vector<Integer> in;
    for (std::uint64_t n = 0; Integer(n) < need; ++n) in.push_back(src(n));
    RunWord word = block_runs(in);
    std::size_t tabulated = 0;
    for (std::size_t i = 0; i < c.stages.size(); ++i) {
      const Stage& s = c.stages[i];
      if (const auto* r = std::get_if<RatioStage>(&s)) {
        const auto bl = run_blocks(word);
        for (std::size_t b = 0; b < bl.size(); ++b)
          if ((r->e * bl[b]) % r->d != 0)
            return {false, "IndivisibleBlock: stage " + std::to_string(i + 1) + " block " + std::to_string(b) +
                               " has length " + bl[b].str() + ", not divisible by " + r->d.str()};
      }
      std::unique_ptr<detail::StageRunner> runner;
      if (detail::tabulated_size(s) <= Integer(kTabulationLimit)) {
        runner = std::make_unique<detail::FstRunner>(stage_fst(s));
        ++tabulated;
      } else {
        runner = std::make_unique<detail::ArithmeticRunner>(s);
      }
      word = runner->feed(word);
    }
    if (explicit_stages) *explicit_stages = tabulated;
    const auto got = run_blocks(word);
    const IntegerSequence want = IntegerSequence::naturalised(c.target);
    if (got.size() < blocks)
      return {false, "only " + std::to_string(got.size()) + " complete blocks produced, wanted " + std::to_string(blocks)};
    for (std::size_t b = 0; b < blocks; ++b)
      if (got[b] != want(b))
        return {false, "block " + std::to_string(b) + " is " + got[b].str() + ", expected " + want(b).str()};
    return {true, std::to_string(blocks) + " blocks match"};
  } catch (const Error& e) {
    return {false, e.what()};
  }
}

inline CertificateReport verify_certificate(const Certificate& c, std::size_t prefix_blocks) {
  CertificateReport r;
  std::tie(r.symbolic, r.symbolic_detail) = verify_symbolic(c);
  std::tie(r.semantic, r.semantic_detail) = verify_semantic(c, prefix_blocks);
  if (r.semantic) r.blocks_checked = prefix_blocks;
  return r;
}

}  // namespace tdeg

#endif  // TDEG_CERTIFICATE_HPP
