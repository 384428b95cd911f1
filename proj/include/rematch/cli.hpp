#pragma once

// Command-line front end: solving incremental instances, inspecting the
// rotation machinery behind a solve, generating hardness-construction
// instances, and batch cross-validation of the solvers against the
// brute-force oracle.  Exit codes are stable for scripting: 0 yes, 1 no,
// 2 input or usage error, 3 cross-validation mismatch.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rematch/isr_solver.hpp"
#include "rematch/model.hpp"
#include "rematch/oracle.hpp"
#include "rematch/reductions.hpp"
#include "rematch/sm_rotations.hpp"
#include "rematch/sr_core.hpp"
#include "rematch/wcfcs.hpp"
#include "rematch/xp_solver.hpp"

namespace rematch {

// ---- random instance generation -----------------------------------------
//
// One recipe shared by `crossvalidate` and the test suites: acceptability is
// drawn per unordered pair (mutual by construction), each agent ranks its
// acceptable set by a uniform random permutation, and ties mode merges
// adjacent ranks with a fixed probability.  M1 comes from solving profile1,
// so every generated instance meets the solver precondition; profiles
// without a stable matching are redrawn.

struct RandomInstanceOptions {
  int agents = 8;
  long long k_max = 6;
  ProfileKind kind = ProfileKind::Roommates;
  bool ties = false;
  double edge_prob = 0.7;
  double tie_prob = 0.3;
};

inline PreferenceProfile random_profile(std::mt19937_64& rng,
                                        const RandomInstanceOptions& opt) {
  int n = opt.agents;
  if (n < 2) fail(Errc::PreconditionViolated, "need at least two agents");
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = std::to_string(i + 1);

  std::vector<AgentId> side_u, side_w;
  if (opt.kind == ProfileKind::Marriage) {
    for (AgentId a = 0; a < n / 2; ++a) side_u.push_back(a);
    for (AgentId a = n / 2; a < n; ++a) side_w.push_back(a);
  }
  auto compatible = [&](AgentId a, AgentId b) {
    if (opt.kind == ProfileKind::Roommates) return true;
    return (a < n / 2) != (b < n / 2);
  };

  std::bernoulli_distribution edge(opt.edge_prob), tie(opt.tie_prob);
  std::vector<std::vector<AgentId>> acceptable(n);
  for (AgentId a = 0; a < n; ++a)
    for (AgentId b = a + 1; b < n; ++b)
      if (compatible(a, b) && edge(rng)) {
        acceptable[a].push_back(b);
        acceptable[b].push_back(a);
      }
  // nobody may list no one, so isolated agents get one partner each
  for (AgentId a = 0; a < n; ++a)
    if (acceptable[a].empty()) {
      std::vector<AgentId> others;
      for (AgentId b = 0; b < n; ++b)
        if (b != a && compatible(a, b)) others.push_back(b);
      AgentId b = others[std::uniform_int_distribution<size_t>(
          0, others.size() - 1)(rng)];
      acceptable[a].push_back(b);
      acceptable[b].push_back(a);
    }

  std::vector<PreferenceList> lists(n);
  for (AgentId a = 0; a < n; ++a) {
    std::shuffle(acceptable[a].begin(), acceptable[a].end(), rng);
    for (AgentId b : acceptable[a]) lists[a].groups.push_back({b});
    if (!opt.ties) continue;
    auto& groups = lists[a].groups;
    for (size_t g = groups.size(); g-- > 1;)
      if (tie(rng)) {
        groups[g - 1].insert(groups[g - 1].end(), groups[g].begin(),
                             groups[g].end());
        groups.erase(groups.begin() + static_cast<long>(g));
      }
  }
  return make_profile(opt.kind, names, lists, side_u, side_w);
}

inline IncrementalInstance random_instance(std::mt19937_64& rng,
                                           const RandomInstanceOptions& opt) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    auto p1 = random_profile(rng, opt);
    std::optional<Matching> m1;
    if (opt.ties) {
      IncrementalInstance from_empty;
      from_empty.profile1 = p1;
      from_empty.profile2 = p1;
      from_empty.k = opt.agents;  // any matching is within n of empty
      m1 = solve_xp(from_empty);
    } else {
      m1 = find_stable_matching(p1);
    }
    if (!m1) continue;  // profile1 has no stable matching: redraw
    if (!is_stable(p1, *m1))
      fail(Errc::PreconditionViolated,
           "internal: generated matching1 is not stable for profile1");
    IncrementalInstance inst;
    inst.profile1 = std::move(p1);
    inst.profile2 = random_profile(rng, opt);
    inst.matching1 = std::move(*m1);
    inst.k = static_cast<long long>(rng() % static_cast<unsigned long long>(
                                       opt.k_max + 1));
    return inst;
  }
  fail(Errc::PreconditionViolated,
       "could not draw a profile with a stable matching");
}

namespace cli {

struct RunReport {
  std::string instance_id;
  std::string algorithm;
  bool yes = false;
  Matching matching;         // meaningful iff yes
  long long distance = 0;    // |M1 delta M2|
  long long common = 0;      // |M1 cap M2|
  double time_ms = 0.0;
  std::optional<int> depth;  // branching depth of the fixed-clique search
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::MalformedSyntax, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_output(const std::string& path, const std::string& text,
                         std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(Errc::MalformedSyntax, "cannot write '" + path + "'");
  file << text;
}

// "pair a b" lines in the order of format_matching.
inline void print_pairs(std::ostream& out, const PreferenceProfile& p,
                        const Matching& m) {
  std::istringstream rows(format_matching(p, m));
  std::string row;
  while (std::getline(rows, row)) out << "pair " << row << '\n';
}

inline void print_proposals(std::ostream& out, const std::string& label,
                            const PreferenceProfile& p,
                            const ProposalSet& s) {
  out << label;
  for (auto [a, b] : s) out << " (" << p.name(a) << ',' << p.name(b) << ')';
  out << '\n';
}

inline std::string pick_algorithm(const IncrementalInstance& inst) {
  if (inst.profile1.has_ties() || inst.profile2.has_ties()) return "xp";
  return inst.profile2.kind() == ProfileKind::Marriage ? "ism" : "isr-fpt";
}

inline void print_report(std::ostream& out, const PreferenceProfile& p,
                         const RunReport& r) {
  out << "instance " << r.instance_id << '\n';
  out << "algorithm " << r.algorithm << '\n';
  out << "answer " << (r.yes ? "yes" : "no") << '\n';
  if (!r.yes) return;
  print_pairs(out, p, r.matching);
  out << "distance " << r.distance << '\n';
  out << "common " << r.common << '\n';
  out << "time-ms " << std::fixed << std::setprecision(3) << r.time_ms
      << '\n';
  if (r.depth) out << "depth " << *r.depth << '\n';
}

inline long long common_pairs(const Matching& m1, const Matching& m2) {
  long long c = 0;
  for (auto [a, b] : m1.pairs) c += m2.contains(a, b);
  return c;
}

struct SolveArgs {
  std::string path;
  std::string algo = "auto";
  long long work_limit = 100000000;
};

inline int run_solve(const SolveArgs& a, std::ostream& out) {
  auto inst = parse_instance(read_file(a.path));
  RunReport rep;
  rep.instance_id = a.path;
  rep.algorithm = a.algo == "auto" ? pick_algorithm(inst) : a.algo;

  auto start = std::chrono::steady_clock::now();
  std::optional<Matching> m2;
  if (rep.algorithm == "ism") {
    m2 = solve_ism_noties(inst);
  } else if (rep.algorithm == "isr-fpt") {
    WcfcsStats stats;
    m2 = solve_isr_noties(inst, &stats);
    rep.depth = stats.max_depth;
  } else {
    m2 = solve_xp(inst, a.work_limit);
  }
  rep.time_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();

  if (!m2) {
    out << "NO\n";
    return 1;
  }
  rep.yes = true;
  rep.matching = std::move(*m2);
  rep.distance = matching_distance(inst.matching1, rep.matching);
  rep.common = common_pairs(inst.matching1, rep.matching);
  if (rep.distance + 2 * rep.common !=
      inst.matching1.size() + rep.matching.size())
    fail(Errc::PreconditionViolated,
         "internal: distance and overlap disagree on the matching sizes");
  print_report(out, inst.profile2, rep);
  return 0;
}

inline int run_verify(const std::string& path, std::ostream& out) {
  auto inst = parse_instance(read_file(path));  // throws on any defect
  const auto& p = inst.profile1;
  out << "kind "
      << (p.kind() == ProfileKind::Marriage ? "marriage" : "roommates")
      << '\n';
  out << "agents " << p.n() << '\n';
  out << "k " << inst.k << '\n';
  out << "profile1-ties " << (p.has_ties() ? "yes" : "no") << '\n';
  out << "profile2-ties " << (inst.profile2.has_ties() ? "yes" : "no")
      << '\n';
  auto d = profile_swap_distance(inst.profile1, inst.profile2);
  if (d)
    out << "profile-distance " << *d << '\n';
  else
    out << "profile-distance incomparable\n";
  out << "matching1-size " << inst.matching1.size() << '\n';
  out << "matching1-stable yes\n";
  return 0;
}

inline int run_distance(const std::string& path, std::ostream& out) {
  auto inst = parse_instance(read_file(path));
  auto d = profile_swap_distance(inst.profile1, inst.profile2);
  if (!d) {
    out << "profile-distance incomparable\n";
    return 1;
  }
  out << "profile-distance " << *d << '\n';
  return 0;
}

inline int run_rotations(const std::string& path, std::ostream& out) {
  auto inst = parse_instance(read_file(path));
  const auto& p2 = inst.profile2;
  auto pair_text = [&](const Rotation& rho) {
    std::string s;
    for (auto [a, b] : rho.pairs)
      s += " (" + p2.name(a) + ',' + p2.name(b) + ')';
    return s;
  };

  if (p2.kind() == ProfileKind::Marriage) {
    auto dg = sm_rotation_digraph(p2, inst.matching1);
    out << "kind marriage\n";
    out << "rotations " << dg.size() << '\n';
    for (int i = 0; i < dg.size(); ++i)
      out << "rotation r" << i + 1 << " [weight " << dg.weights[i] << ']'
          << pair_text(dg.rotations[i]) << '\n';
    for (auto [a, b] : dg.arcs)
      out << "order r" << a + 1 << " r" << b + 1 << '\n';
    out << "u-optimal\n";
    print_pairs(out, p2, dg.u_optimal);
    return 0;
  }

  auto poset = build_rotation_poset(p2);
  if (!poset) {
    out << "no stable matching\n";
    return 1;
  }
  out << "kind roommates\n";
  out << "rotations " << poset->size() << '\n';
  for (int i = 0; i < poset->size(); ++i) {
    out << "rotation r" << i + 1;
    if (poset->is_singleton(i))
      out << " [singleton]";
    else
      out << " [dual r" << poset->dual[i] + 1 << ']';
    out << pair_text(poset->rotations[i]) << '\n';
  }
  for (auto [a, b] : poset->reduced_arcs())
    out << "order r" << a + 1 << " r" << b + 1 << '\n';
  return 0;
}

// The full budgeted reduction behind the fixed-parameter solver, one stage
// per line: proposal sets, the weighted conflict-free closed-subset
// instance, the chosen eliminations, and the reconstructed matching.
inline int run_wcfcs(const std::string& path, std::ostream& out) {
  auto inst = parse_instance(read_file(path));
  const auto& p2 = inst.profile2;
  auto poset = build_rotation_poset(p2);
  if (!poset) {
    out << "no stable matching\n";
    return 1;
  }
  auto s0 = proposal_set(table_after_singletons(*poset));
  print_proposals(out, "s0", p2, s0);

  Matching m1r;
  long long kr = 0;
  try {
    std::tie(m1r, kr) = apply_unmatched_rule(inst.matching1, s0, inst.k);
  } catch (const Error& e) {
    if (e.kind() != Errc::BudgetExhausted) throw;
    out << "forced removals exceed the budget\nNO\n";
    return 1;
  }
  print_proposals(out, "s-m1", p2, proposal_set(m1r));

  auto red = build_wcfcs_instance(p2, m1r, kr);
  if (red.kind == IsrReduction::Kind::TrivialYes) {
    out << "trivial-yes\n";
    print_pairs(out, p2, *red.unique_matching);
    out << "distance " << matching_distance(inst.matching1, *red.unique_matching)
        << '\n';
    return 0;
  }
  out << serialize_wcfcs(*red.instance);

  WcfcsStats stats;
  auto chosen = solve_wcfcs(*red.instance, &stats);
  if (!chosen) {
    out << "NO\n";
    return 1;
  }
  out << "chosen";
  for (int e : *chosen) out << ' ' << red.instance->names[e];
  out << '\n';
  out << "depth " << stats.max_depth << '\n';

  std::set<int> closed;
  for (int i : red.poset->singleton_ids()) closed.insert(i);
  for (int e : *chosen) closed.insert(red.rotation_ids[e]);
  auto m2 = matching_from_closed_subset(*red.poset, closed);
  print_pairs(out, p2, m2);
  out << "distance " << matching_distance(inst.matching1, m2) << '\n';
  return 0;
}

struct OracleArgs {
  std::string path;
  int max_agents = 12;
};

inline int run_oracle(const OracleArgs& a, std::ostream& out) {
  auto inst = parse_instance(read_file(a.path));
  auto all = enumerate_stable_matchings(inst.profile2, a.max_agents);
  out << "stable-count " << all.size() << '\n';
  if (all.empty()) {
    out << "answer no\n";
    return 1;
  }
  long long best = -1;
  long long max_common = 0;
  for (const auto& m : all) {
    long long d = matching_distance(inst.matching1, m);
    if (best < 0 || d < best) best = d;
    max_common = std::max(max_common, common_pairs(inst.matching1, m));
  }
  out << "min-distance " << best << '\n';
  out << "max-common " << max_common << '\n';
  bool yes = best <= inst.k;
  out << "answer " << (yes ? "yes" : "no") << '\n';
  return yes ? 0 : 1;
}

struct GenerateArgs {
  std::string construction;
  std::string input;
  int h = 0;
  std::string out_path;
};

inline int run_generate(const GenerateArgs& a, std::ostream& out) {
  const auto text = read_file(a.input);
  std::string result;
  if (a.construction == "eiis") {
    result = serialize_eiis(gen_eiis(parse_graph(text), a.h));
  } else if (a.construction == "edcpe") {
    result = serialize_edcpe(gen_edcpe(parse_eiis(text)));
  } else if (a.construction == "ism-oneswap") {
    result = serialize_instance(gen_ism_ties_oneswap(parse_edcpe(text)));
  } else if (a.construction == "ism-twoswap") {
    result = serialize_instance(gen_ism_ties_twoswap(parse_graph(text), a.h));
  } else if (a.construction == "isr-oneswap") {
    result = serialize_instance(gen_isr_oneswap_complete(parse_eiis(text)));
  } else {
    result = serialize_instance(gen_isr_noties_feder(parse_graph(text)));
  }
  write_output(a.out_path, result, out);
  return 0;
}

struct CrossvalidateArgs {
  long long count = 100;
  int agents = 8;
  long long k_max = 6;
  unsigned long long seed = 1;
  bool ties = false;
  bool marriage = false;
};

// Solver versus oracle on freshly drawn instances.  The summary never
// contains timing, so a fixed seed reproduces it byte for byte.
inline int run_crossvalidate(const CrossvalidateArgs& a, std::ostream& out) {
  RandomInstanceOptions opt;
  opt.agents = a.marriage && a.agents % 2 != 0 ? a.agents + 1 : a.agents;
  opt.k_max = a.k_max;
  opt.ties = a.ties;
  opt.kind = a.marriage ? ProfileKind::Marriage : ProfileKind::Roommates;

  std::mt19937_64 rng(a.seed);
  long long yes = 0, no = 0, mismatches = 0;
  for (long long i = 0; i < a.count; ++i) {
    auto inst = random_instance(rng, opt);
    std::string algo = pick_algorithm(inst);

    std::optional<Matching> got;
    std::optional<int> got_depth;
    if (algo == "ism")
      got = solve_ism_noties(inst);
    else if (algo == "isr-fpt")
      got = solve_isr_noties(inst);
    else
      got = solve_xp(inst);

    auto expect = min_distance_stable(inst.profile2, inst.matching1,
                                      opt.agents);
    bool want_yes = expect && expect->first <= inst.k;

    std::string defect;
    if (got.has_value() != want_yes) {
      defect = "solver answered " + std::string(got ? "yes" : "no") +
               ", oracle says " + (want_yes ? "yes" : "no");
    } else if (got) {
      long long dist = matching_distance(inst.matching1, *got);
      if (!is_stable(inst.profile2, *got))
        defect = "witness is not stable";
      else if (dist > inst.k)
        defect = "witness distance exceeds k";
      else if (algo != "isr-fpt" && dist != expect->first)
        defect = "witness distance " + std::to_string(dist) +
                 " is not the oracle minimum " +
                 std::to_string(expect->first);
    }
    (want_yes ? yes : no) += 1;

    if (!defect.empty()) {
      ++mismatches;
      out << "mismatch i" << i << " algorithm " << algo << ": " << defect
          << '\n';
      out << serialize_instance(inst);
    }
  }

  out << "instances " << a.count << '\n';
  out << "agents " << opt.agents << '\n';
  out << "kmax " << a.k_max << '\n';
  out << "seed " << a.seed << '\n';
  out << "mode " << (a.ties ? "ties" : "strict") << ' '
      << (a.marriage ? "marriage" : "roommates") << '\n';
  out << "yes " << yes << '\n';
  out << "no " << no << '\n';
  out << "mismatches " << mismatches << '\n';
  return mismatches > 0 ? 3 : 0;
}

}  // namespace detail

// Parses the argument list (program name excluded) and runs one subcommand.
inline int run(std::vector<std::string> args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"incremental stable matching toolkit"};
  app.name("rematch");
  app.require_subcommand(1);

  detail::SolveArgs solve_args;
  auto* solve = app.add_subcommand(
      "solve", "solve an instance file within its swap budget");
  solve->add_option("file", solve_args.path, "instance file")->required();
  solve->add_option("--algo", solve_args.algo, "algorithm (default: auto)")
      ->check(CLI::IsMember({"auto", "ism", "isr-fpt", "xp"}));
  solve->add_option("--work-limit", solve_args.work_limit,
                    "abort the ties solver beyond this many search steps")
      ->check(CLI::PositiveNumber);

  std::string verify_path;
  auto* verify =
      app.add_subcommand("verify", "validate an instance file and report it");
  verify->add_option("file", verify_path, "instance file")->required();

  std::string distance_path;
  auto* distance = app.add_subcommand(
      "distance", "swap distance between the two profiles of an instance");
  distance->add_option("file", distance_path, "instance file")->required();

  std::string rotations_path;
  auto* rotations = app.add_subcommand(
      "rotations", "rotation structure of the new profile");
  rotations->add_option("file", rotations_path, "instance file")->required();

  std::string wcfcs_path;
  auto* wcfcs = app.add_subcommand(
      "wcfcs", "stages of the budgeted closed-subset reduction");
  wcfcs->add_option("file", wcfcs_path, "instance file")->required();

  detail::OracleArgs oracle_args;
  auto* oracle = app.add_subcommand(
      "oracle", "brute-force enumeration report for small instances");
  oracle->add_option("file", oracle_args.path, "instance file")->required();
  oracle->add_option("--max-agents", oracle_args.max_agents,
                     "refuse instances larger than this (default: 12)")
      ->check(CLI::PositiveNumber);

  detail::GenerateArgs gen_args;
  auto* generate = app.add_subcommand(
      "generate", "emit a hardness-construction instance");
  generate
      ->add_option("--construction", gen_args.construction,
                   "which construction to emit")
      ->required()
      ->check(CLI::IsMember({"eiis", "edcpe", "ism-oneswap", "ism-twoswap",
                             "isr-oneswap", "feder"}));
  generate
      ->add_option("--input,--graph", gen_args.input,
                   "graph file (eiis, ism-twoswap, feder), independent-set "
                   "step file (edcpe, isr-oneswap), or clique step file "
                   "(ism-oneswap)")
      ->required();
  generate->add_option("--witness", gen_args.h, "witness size, where required");
  generate->add_option("--out", gen_args.out_path,
                       "output file (default: stdout)");

  detail::CrossvalidateArgs cv_args;
  auto* crossvalidate = app.add_subcommand(
      "crossvalidate", "random instances: solver versus brute-force oracle");
  crossvalidate->add_option("--count", cv_args.count, "instances to draw")
      ->check(CLI::NonNegativeNumber);
  crossvalidate
      ->add_option("--agents", cv_args.agents,
                   "agents per instance (oracle-bound, keep at most 12)")
      ->check(CLI::Range(2, 12));
  crossvalidate->add_option("--k", cv_args.k_max, "swap budgets drawn from [0, k]")
      ->check(CLI::NonNegativeNumber);
  crossvalidate->add_option("--seed", cv_args.seed, "random seed");
  crossvalidate->add_flag("--ties", cv_args.ties, "draw profiles with ties");
  crossvalidate->add_flag("--marriage", cv_args.marriage,
                          "draw two-sided profiles");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return detail::run_solve(solve_args, out);
    if (verify->parsed()) return detail::run_verify(verify_path, out);
    if (distance->parsed()) return detail::run_distance(distance_path, out);
    if (rotations->parsed()) return detail::run_rotations(rotations_path, out);
    if (wcfcs->parsed()) return detail::run_wcfcs(wcfcs_path, out);
    if (oracle->parsed()) return detail::run_oracle(oracle_args, out);
    if (generate->parsed()) return detail::run_generate(gen_args, out);
    if (crossvalidate->parsed())
      return detail::run_crossvalidate(cv_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace cli
}  // namespace rematch
