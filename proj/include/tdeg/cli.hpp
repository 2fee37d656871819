#ifndef TDEG_CLI_HPP
#define TDEG_CLI_HPP

// Command-line front end. Exit codes: 0 success, 1 verification failure or
// nothing found, 2 input error.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tdeg/certificate.hpp"
#include "tdeg/diagonal.hpp"
#include "tdeg/error.hpp"
#include "tdeg/exactla.hpp"
#include "tdeg/fst.hpp"
#include "tdeg/polyatoms.hpp"
#include "tdeg/synthesis.hpp"
#include "tdeg/weights.hpp"
#include "tdeg/words.hpp"

namespace tdeg::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kInputError = 2;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Adversary parse_pairs(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path();
  std::istringstream in(read_file(path));
  std::string raw;
  std::size_t line_no = 0;
  Adversary adv;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls{std::string(line)};
    std::string k1, file, k2, spec, extra;
    if (!(ls >> k1 >> file >> k2 >> spec) || (ls >> extra) || k1 != "machine" || k2 != "word")
      throw ParseError(line_no, "expected 'machine <file> word <word-spec>'");
    std::filesystem::path fp(file);
    if (fp.is_relative()) fp = dir / fp;
    try {
      adv.push_back({parse_fst(read_file(fp.string())), parse_word_spec(spec)});
    } catch (const ParseError& e) {
      throw ParseError(line_no, fp.string() + ": " + e.what());
    }
  }
  return adv;
}

inline std::string real_to_string(const Real& x) {
  std::ostringstream os;
  os << std::setprecision(40) << x;
  return os.str();
}

/// Runs one command line (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"transducer degree toolkit", "tdeg"};
  app.require_subcommand(1);
  int status = kOk;

  // word
  auto* word = app.add_subcommand("word", "print a prefix of an infinite word");
  std::string word_spec;
  std::size_t word_n = 0;
  word->add_option("spec", word_spec, "up:<u>:<v>, thue-morse, period-doubling, mephisto, block:poly:<c>, block:explicit:<v>")
      ->required();
  word->add_option("--prefix", word_n, "prefix length")->required();
  word->callback([&] { out << prefix(parse_word_spec(word_spec), word_n).word << "\n"; });

  // transduce
  auto* tr = app.add_subcommand("transduce", "apply a transducer to a word");
  std::string tr_fst, tr_word;
  std::size_t tr_n = 0;
  tr->add_option("--fst", tr_fst, "FST v1 file")->required();
  tr->add_option("--word", tr_word, "word spec")->required();
  tr->add_option("--prefix", tr_n, "output prefix length")->required();
  tr->callback([&] {
    const Prefix p = prefix(transduce_stream(parse_fst(read_file(tr_fst)), parse_word_spec(tr_word)), tr_n);
    out << p.word << "\n";
    if (p.stalled) err << "stalled after " << p.word.size() << " letters\n";
  });

  // weights
  auto* weights = app.add_subcommand("weights", "weighted products");
  weights->require_subcommand(1);
  auto* w_apply = weights->add_subcommand("apply", "apply one weight to a window of values");
  std::string wa_weight, wa_values;
  w_apply->add_option("--weight", wa_weight, "(a0,...;b)")->required();
  w_apply->add_option("--values", wa_values, "comma separated rationals")->required();
  w_apply->callback([&] {
    const WeightTuple t = parse_weight_tuple(wa_weight);
    if (t.size() != 1) throw InvalidArgument("--weight takes a single weight");
    out << to_string(apply_weight(t[0], parse_rational_list(wa_values))) << "\n";
  });
  auto* w_prod = weights->add_subcommand("product", "first values of a weighted product of a polynomial");
  std::string wp_tuple, wp_poly;
  std::size_t wp_count = 0;
  w_prod->add_option("--tuple", wp_tuple, "weight tuple")->required();
  w_prod->add_option("--poly", wp_poly, "coefficients c0,...,ck")->required();
  w_prod->add_option("--count", wp_count, "number of values")->required();
  w_prod->callback([&] {
    const RationalPoly f = parse_poly(wp_poly);
    auto g = weighted_product(parse_weight_tuple(wp_tuple), [&](std::uint64_t n) { return f(Rational(Integer(n))); });
    std::vector<Rational> vals;
    for (std::size_t n = 0; n < wp_count; ++n) vals.push_back(g(n));
    out << join(vals) << "\n";
  });
  auto* w_comp = weights->add_subcommand("compose", "compose two weight tuples");
  std::string wc_outer, wc_inner;
  w_comp->add_option("--outer", wc_outer, "outer tuple")->required();
  w_comp->add_option("--inner", wc_inner, "inner tuple")->required();
  w_comp->callback(
      [&] { out << to_string(compose_tuples(parse_weight_tuple(wc_outer), parse_weight_tuple(wc_inner))) << "\n"; });

  // synth
  auto* synth = app.add_subcommand("synth", "build the transducer of a natural weight tuple");
  std::string sy_weights, sy_ratio, sy_out;
  synth->add_option("--weights", sy_weights, "weight tuple with natural window entries")->required();
  synth->add_option("--ratio", sy_ratio, "append a ratio stage e/D");
  synth->add_option("-o,--output", sy_out, "write the machine here instead of stdout");
  synth->callback([&] {
    Fst m = synth_weight_fst(parse_weight_tuple(sy_weights));
    if (!sy_ratio.empty()) {
      auto parts = split(sy_ratio, '/');
      if (parts.size() != 2) throw InvalidArgument("--ratio must be e/D");
      m = compose(m, synth_ratio_fst(parse_integer(parts[0]), parse_integer(parts[1])));
    }
    const std::string text = serialize_fst(m);
    if (sy_out.empty()) {
      out << text;
    } else {
      std::ofstream f(sy_out, std::ios::binary);
      if (!f) throw InvalidArgument("cannot write '" + sy_out + "'");
      f << text;
    }
  });

  // atom
  auto* atom = app.add_subcommand("atom", "atom polynomials and certificates");
  atom->require_subcommand(1);
  auto* a_poly = atom->add_subcommand("poly", "expand sum a_i (kn+i)^k");
  unsigned ap_k = 0;
  std::string ap_a;
  a_poly->add_option("--k", ap_k, "order")->required();
  a_poly->add_option("--a", ap_a, "positive rationals a_0,...,a_{k-1}")->required();
  a_poly->callback([&] { out << to_string(atom_polynomial(ap_k, parse_rational_list(ap_a))) << "\n"; });

  auto* a_cert = atom->add_subcommand("cert", "certificate that <q> transduces to the atom <p>");
  unsigned ac_k = 0;
  std::string ac_a, ac_q;
  std::size_t ac_blocks = 0;
  a_cert->add_option("--k", ac_k, "order")->required();
  a_cert->add_option("--a", ac_a, "positive rationals a_0,...,a_{k-1}")->required();
  a_cert->add_option("--q", ac_q, "source polynomial coefficients")->required();
  a_cert->add_option("--verify-blocks", ac_blocks, "verify on this many blocks");
  a_cert->callback([&] {
    const RationalPoly q = parse_poly(ac_q);
    require_qk(q);
    if (q.order() != ac_k) throw InvalidArgument("q has order " + std::to_string(q.order()) + ", not " + std::to_string(ac_k));
    const Certificate c = atom_certificate(q, parse_rational_list(ac_a));
    out << serialize_certificate(c);
    if (ac_blocks > 0) {
      const CertificateReport r = verify_certificate(c, ac_blocks);
      out << "# symbolic " << (r.symbolic ? "PASS" : "FAIL") << ": " << r.symbolic_detail << "\n";
      out << "# semantic " << (r.semantic ? "PASS" : "FAIL") << ": " << r.semantic_detail << "\n";
      if (!r.ok()) status = kFailed;
    }
  });

  auto* a_verify = atom->add_subcommand("verify", "check a certificate file");
  std::string av_file;
  std::size_t av_blocks = 8;
  a_verify->add_option("--cert", av_file, "certificate file")->required();
  a_verify->add_option("--blocks", av_blocks, "blocks for the semantic check")->capture_default_str();
  a_verify->callback([&] {
    const CertificateReport r = verify_certificate(parse_certificate(read_file(av_file)), av_blocks);
    out << "symbolic " << (r.symbolic ? "PASS" : "FAIL") << ": " << r.symbolic_detail << "\n";
    out << "semantic " << (r.semantic ? "PASS" : "FAIL") << ": " << r.semantic_detail << "\n";
    if (!r.ok()) status = kFailed;
  });

  // nonatom
  auto* nonatom = app.add_subcommand("nonatom", "evidence that <n^k> is not an atom");
  nonatom->require_subcommand(1);
  auto* n_search = nonatom->add_subcommand("search", "bounded search for f as a weighted product of g");
  unsigned ns_k = 3;
  SearchBounds ns_bounds;
  std::string ns_g, ns_f, ns_max_coeff;
  n_search->add_option("--k", ns_k, "order; g = (kn)^k + ... + (kn+k-1)^k, f = n^k")->required();
  n_search->add_option("--max-window", ns_bounds.max_window, "largest window")->required();
  n_search->add_option("--max-shift", ns_bounds.max_shift, "largest shift n0, m0")->required();
  n_search->add_option("--max-len", ns_bounds.max_tuple_len, "largest tuple length")->required();
  n_search->add_option("--g", ns_g, "override g (coefficients)");
  n_search->add_option("--f", ns_f, "override f (coefficients)");
  n_search->add_option("--max-coeff", ns_max_coeff, "largest window entry accepted");
  n_search->callback([&] {
    if (ns_bounds.max_tuple_len == 0) throw InvalidArgument("--max-len must be positive");
    const RationalPoly g = ns_g.empty() ? atom_polynomial(ns_k, std::vector<Rational>(ns_k, Rational(1))) : parse_poly(ns_g);
    const RationalPoly f = ns_f.empty() ? RationalPoly::monomial(ns_k) : parse_poly(ns_f);
    if (!ns_max_coeff.empty()) ns_bounds.max_coeff = parse_rational(ns_max_coeff);
    const SearchResult r = search_weighted_preimage(g, f, ns_bounds);
    if (r.found) {
      out << "FOUND n0=" << r.found->n0 << " m0=" << r.found->m0 << " tuple=" << to_string(r.found->tuple) << "\n";
    } else {
      out << "NOT FOUND WITHIN BOUNDS\n";
      status = kFailed;
    }
  });
  auto* n_moment = nonatom->add_subcommand("moment", "evaluate the moment equations of a candidate");
  MomentInstance nm;
  std::string nm_ell = "1", nm_n0 = "0", nm_c, nm_d;
  n_moment->add_option("--k", nm.k, "order, at least 3")->required();
  n_moment->add_option("--ell", nm_ell, "ell")->required();
  n_moment->add_option("--n0", nm_n0, "n0")->required();
  n_moment->add_option("--c", nm_c, "coefficients c_i")->required();
  n_moment->add_option("--d", nm_d, "points d_i")->required();
  n_moment->callback([&] {
    nm.ell = parse_integer(nm_ell);
    nm.n0 = parse_integer(nm_n0);
    nm.c = parse_rational_list(nm_c);
    nm.d = parse_rational_list(nm_d);
    const MomentReport r = moment_check(nm);
    out << "mass " << to_string(r.mass) << " vs " << to_string(r.mass_rhs) << "\n";
    out << "first " << to_string(r.first) << " vs " << to_string(r.first_rhs) << "\n";
    out << "power " << to_string(r.high) << " vs " << to_string(r.high_rhs) << "\n";
    out << to_string(r.verdict) << "\n";
  });

  // powermean
  auto* pm = app.add_subcommand("powermean", "weighted power mean");
  std::string pm_w, pm_x, pm_p;
  pm->add_option("--w", pm_w, "positive weights summing to 1")->required();
  pm->add_option("--x", pm_x, "positive values")->required();
  pm->add_option("--p", pm_p, "exponent")->required();
  pm->callback([&] {
    const PowerMean m = power_mean(parse_rational_list(pm_w), parse_rational(pm_p), parse_rational_list(pm_x));
    out << (m.exact ? to_string(*m.exact) : real_to_string(m.value)) << "\n";
  });

  // diagonalize
  auto* dg = app.add_subcommand("diagonalize", "build a word dodging each (machine, word) pair");
  std::string dg_pairs;
  std::size_t dg_depth = kDefaultDiagonalDepth;
  dg->add_option("--pairs", dg_pairs, "file of 'machine <file> word <spec>' lines")->required();
  dg->add_option("--depth", dg_depth, "search depth")->capture_default_str();
  dg->callback([&] {
    const Adversary adv = parse_pairs(dg_pairs);
    const auto [w, report] = diagonal_word(adv, dg_depth);
    const auto checks = verify_diagonal(adv, w, report);
    out << "w " << (w.empty() ? "-" : w) << "\n";
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
      const DiagEntry& e = report.entries[i];
      out << "pair " << i << " segment " << e.begin << ".." << e.end << " ";
      if (e.status == DiagEntry::Status::Dodged) {
        out << "dodged j=" << e.j << " " << (checks[i].value_or(false) ? "verified" : "NOT VERIFIED") << "\n";
        if (!checks[i].value_or(false)) status = kFailed;
      } else {
        out << "predetermined within depth " << e.depth << "\n";
      }
    }
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const BudgetExhausted& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return status;
}

}  // namespace tdeg::cli

#endif  // TDEG_CLI_HPP
