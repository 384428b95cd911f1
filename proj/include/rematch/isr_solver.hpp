#pragma once

// Fixed-parameter pipeline for incremental stable roommates without ties:
// find a matching stable for the new profile within swap budget k of the old
// matching.  The search over stable matchings is reduced to a weighted
// conflict-free closed-subset instance whose elements are the dual rotations
// of the new profile; the budget caps the proposal pairs of the old matching
// that the chosen eliminations destroy.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rematch/model.hpp"
#include "rematch/sr_core.hpp"
#include "rematch/wcfcs.hpp"

namespace rematch {

using ProposalSet = std::set<std::pair<AgentId, AgentId>>;

// Both directed proposal pairs of every matched couple.
inline ProposalSet proposal_set(const Matching& m) {
  ProposalSet out;
  for (auto [a, b] : m.pairs) {
    out.emplace(a, b);
    out.emplace(b, a);
  }
  return out;
}

// Proposal pairs gained and lost by eliminating a rotation, with their
// overlap against a reference matching's proposal set.  Eliminating
// ((e_0,h_0),...,(e_{r-1},h_{r-1})) moves each e_i from proposing to h_i to
// proposing to h_{i+1}.
struct WeightedRotation {
  Rotation rotation;
  std::vector<std::pair<AgentId, AgentId>> gain;  // (e_i, h_{i+1})
  std::vector<std::pair<AgentId, AgentId>> loss;  // (e_i, h_i)
  int w_plus = 0;
  int w_minus = 0;
};

inline WeightedRotation rotation_weights(const Rotation& rho,
                                         const Matching& m1) {
  WeightedRotation out;
  out.rotation = rho;
  auto s_m1 = proposal_set(m1);
  int r = rho.length();
  for (int i = 0; i < r; ++i) {
    AgentId e = rho.pairs[i].first;
    out.gain.emplace_back(e, rho.pairs[(i + 1) % r].second);
    out.loss.emplace_back(e, rho.pairs[i].second);
  }
  for (const auto& pair : out.gain)
    out.w_plus += static_cast<int>(s_m1.count(pair));
  for (const auto& pair : out.loss)
    out.w_minus += static_cast<int>(s_m1.count(pair));
  return out;
}

// An agent that proposes nowhere in s0 is unmatched in every stable matching
// of the new profile, so its old pair is certain to dissolve: remove it and
// charge the budget one unit per removed pair.
inline std::pair<Matching, long long> apply_unmatched_rule(
    const Matching& m1, const ProposalSet& s0, long long k) {
  std::set<AgentId> proposers;
  for (const auto& [i, j] : s0) proposers.insert(i);
  std::vector<std::pair<AgentId, AgentId>> kept;
  for (auto [a, b] : m1.pairs) {
    if (proposers.count(a) && proposers.count(b))
      kept.emplace_back(a, b);
    else
      --k;
  }
  if (k < 0)
    fail(Errc::BudgetExhausted, "forced pair removals exceed the budget");
  return {Matching::from_pairs(kept), k};
}

struct IsrReduction {
  enum class Kind { Instance, NoStableMatching, TrivialYes };
  Kind kind = Kind::NoStableMatching;

  // Kind::Instance
  std::optional<WcfcsInstance> instance;
  std::vector<int> rotation_ids;  // instance element index -> poset rotation id
  std::vector<WeightedRotation> weights;  // aligned with rotation_ids
  std::optional<RotationPoset> poset;
  ProposalSet s0;

  // Kind::TrivialYes
  std::optional<Matching> unique_matching;
};

namespace detail {

inline long long floor_half(long long num) {
  return num >= 0 ? num / 2 : -((-num + 1) / 2);
}

// Core of the reduction once the poset and base proposal set are known.
inline IsrReduction reduce_isr(RotationPoset poset, ProposalSet s0,
                               const Matching& m1, long long k) {
  IsrReduction red;
  red.s0 = std::move(s0);

  std::vector<int> duals;
  for (int i = 0; i < poset.size(); ++i)
    if (!poset.is_singleton(i)) duals.push_back(i);

  auto s_m1 = proposal_set(m1);
  long long overlap = 0;
  for (const auto& pair : s_m1) overlap += red.s0.count(pair);

  long long sum_wplus = 0;
  std::set<std::pair<AgentId, AgentId>> seen_gains;
  for (int id : duals) {
    red.weights.push_back(rotation_weights(poset.rotations[id], m1));
    sum_wplus += red.weights.back().w_plus;
    for (const auto& pair : red.weights.back().gain) {
      if (!seen_gains.insert(pair).second)
        fail(Errc::PreconditionViolated,
             "internal: two dual rotations gain the same proposal pair");
      if (red.s0.count(pair))
        fail(Errc::PreconditionViolated,
             "internal: a gained proposal pair is already proposed");
    }
  }

  if (red.s0.size() % 2 != 0)
    fail(Errc::PreconditionViolated,
         "internal: odd proposal count after singleton eliminations");
  long long numerator = overlap + sum_wplus - m1.size() -
                        static_cast<long long>(red.s0.size()) / 2 + k;
  long long budget = floor_half(numerator);
  if (2 * budget > k)
    fail(Errc::PreconditionViolated, "internal: budget exceeds half of k");

  if (duals.empty()) {
    std::set<int> all;
    for (int i = 0; i < poset.size(); ++i) all.insert(i);
    Matching unique = matching_from_closed_subset(poset, all);
    if (matching_distance(m1, unique) <= k) {
      red.kind = IsrReduction::Kind::TrivialYes;
      red.unique_matching = std::move(unique);
      return red;
    }
  }

  std::vector<std::string> names;
  std::vector<long long> weights;
  std::vector<int> index_of(poset.size(), -1);
  for (size_t e = 0; e < duals.size(); ++e) {
    names.push_back("r" + std::to_string(duals[e] + 1));
    weights.push_back(red.weights[e].w_minus);
    index_of[duals[e]] = static_cast<int>(e);
  }
  std::vector<std::pair<int, int>> order;
  for (int a : duals)
    for (int b : duals)
      if (poset.precedes[a][b]) order.emplace_back(index_of[a], index_of[b]);
  std::vector<std::vector<int>> cliques;
  for (auto [a, b] : poset.dual_pairs())
    cliques.push_back({index_of[a], index_of[b]});

  red.kind = IsrReduction::Kind::Instance;
  red.instance = make_wcfcs(std::move(names), std::move(weights), order,
                            cliques, static_cast<int>(cliques.size()), budget);
  red.rotation_ids = std::move(duals);
  red.poset = std::move(poset);
  return red;
}

}  // namespace detail

// Reduction of one incremental query to a closed-subset instance.  Expects
// the unmatched rule to have been applied to (m1, k) already.  Returns
// NoStableMatching when the new profile admits none, TrivialYes when the
// stable matching is unique and close enough, and otherwise an instance over
// the dual rotations (weights w^-, one clique per dual pair, budget derived
// from k; at most k/2).
inline IsrReduction build_wcfcs_instance(const PreferenceProfile& p2,
                                         const Matching& m1, long long k) {
  if (p2.has_ties())
    fail(Errc::TiesPresent, "the reduction requires strict preferences");
  auto poset = build_rotation_poset(p2);
  if (!poset) return {};  // Kind::NoStableMatching
  auto s0 = proposal_set(table_after_singletons(*poset));
  return detail::reduce_isr(std::move(*poset), std::move(s0), m1, k);
}

// Stable matching for inst.profile2 within swap distance inst.k of
// inst.matching1, or nullopt when none exists.  `stats`, when given, receives
// the branching counters of the inner fixed-clique search.
inline std::optional<Matching> solve_isr_noties(const IncrementalInstance& inst,
                                                WcfcsStats* stats = nullptr) {
  if (inst.profile1.has_ties() || inst.profile2.has_ties())
    fail(Errc::TiesPresent, "the no-ties solver requires strict preferences");

  auto poset = build_rotation_poset(inst.profile2);
  if (!poset) return std::nullopt;
  auto s0 = proposal_set(table_after_singletons(*poset));

  Matching m1r;
  long long kr = 0;
  try {
    std::tie(m1r, kr) = apply_unmatched_rule(inst.matching1, s0, inst.k);
  } catch (const Error& e) {
    if (e.kind() == Errc::BudgetExhausted) return std::nullopt;
    throw;
  }

  auto red = detail::reduce_isr(std::move(*poset), std::move(s0), m1r, kr);
  std::optional<Matching> m2;
  if (red.kind == IsrReduction::Kind::TrivialYes) {
    m2 = std::move(red.unique_matching);
  } else if (red.kind == IsrReduction::Kind::Instance) {
    auto chosen = solve_wcfcs(*red.instance, stats);
    if (!chosen) return std::nullopt;
    std::set<int> closed;
    for (int i : red.poset->singleton_ids()) closed.insert(i);
    for (int e : *chosen) closed.insert(red.rotation_ids[e]);
    m2 = matching_from_closed_subset(*red.poset, closed);
  } else {
    return std::nullopt;
  }

  if (!is_stable(inst.profile2, *m2) ||
      matching_distance(inst.matching1, *m2) > inst.k)
    fail(Errc::PreconditionViolated,
         "internal: reconstructed matching breaks the solve contract");
  return m2;
}

}  // namespace rematch
