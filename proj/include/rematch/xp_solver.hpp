#pragma once

// Exhaustive edit search: delete k1 old pairs, add k2 fresh disjoint
// acceptable pairs, test stability, trying budgets in ascending k1+k2
// order so the first hit is a minimum-distance solution.  Exponential in
// the budget but indifferent to ties, which the rotation machinery is not.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "rematch/model.hpp"

namespace rematch {

struct EditBudget {
  int k1 = 0;  // pairs deleted from the old matching
  int k2 = 0;  // pairs added between agents left unmatched
};

struct XpStats {
  long long deletion_guesses = 0;
  long long stability_checks = 0;
  long long work = 0;  // enumeration nodes; every candidate check is one
};

// Some stable matching for profile2 within distance k of matching1, or
// nullopt when none exists.  The returned matching has minimum distance.
// Enumeration effort is metered; crossing work_limit raises an error
// instead of running for days.
inline std::optional<Matching> solve_xp(const IncrementalInstance& inst,
                                        long long work_limit = 100000000,
                                        XpStats* stats = nullptr) {
  const PreferenceProfile& p2 = inst.profile2;
  const Matching& m1 = inst.matching1;
  XpStats local;
  XpStats& st = stats ? *stats : local;

  auto spend = [&] {
    if (++st.work > work_limit)
      fail(Errc::WorkLimitExceeded, "edit enumeration exceeded the work limit");
  };

  // Old pairs no longer acceptable under the new profile can never stay,
  // so they are deleted off the top of every k1 budget.
  std::vector<std::pair<AgentId, AgentId>> keepable, doomed;
  for (auto [a, b] : m1.pairs)
    (p2.accepts(a, b) && p2.accepts(b, a) ? keepable : doomed)
        .push_back({a, b});

  std::vector<std::pair<AgentId, AgentId>> fresh;
  for (auto [a, b] : p2.acceptable_edges())
    if (!m1.contains(a, b)) fresh.push_back({a, b});

  std::vector<char> used(p2.n(), 0);
  std::vector<char> deleted(keepable.size(), 0);
  std::vector<std::pair<AgentId, AgentId>> added;

  // extend the kept pairs with `left` more disjoint fresh pairs
  auto grow = [&](auto&& self, size_t start, int left) -> std::optional<Matching> {
    spend();
    if (left == 0) {
      ++st.stability_checks;
      std::vector<std::pair<AgentId, AgentId>> pairs = added;
      for (size_t i = 0; i < keepable.size(); ++i)
        if (!deleted[i]) pairs.push_back(keepable[i]);
      auto cand = Matching::from_pairs(std::move(pairs));
      if (is_stable(p2, cand)) return cand;
      return std::nullopt;
    }
    for (size_t e = start; e < fresh.size(); ++e) {
      auto [a, b] = fresh[e];
      if (used[a] || used[b]) continue;
      used[a] = used[b] = 1;
      added.push_back(fresh[e]);
      auto got = self(self, e + 1, left - 1);
      added.pop_back();
      used[a] = used[b] = 0;
      if (got) return got;
    }
    return std::nullopt;
  };

  // choose `left` more deletions among keepable[start..]
  auto cut = [&](auto&& self, size_t start, int left,
                 int k2) -> std::optional<Matching> {
    spend();
    if (left == 0) {
      ++st.deletion_guesses;
      return grow(grow, 0, k2);
    }
    for (size_t i = start; i + left <= keepable.size(); ++i) {
      deleted[i] = 1;
      used[keepable[i].first] = used[keepable[i].second] = 0;
      auto got = self(self, i + 1, left - 1, k2);
      deleted[i] = 0;
      used[keepable[i].first] = used[keepable[i].second] = 1;
      if (got) return got;
    }
    return std::nullopt;
  };

  for (auto [a, b] : keepable) used[a] = used[b] = 1;
  long long smax =
      std::min<long long>(inst.k, m1.size() + p2.n() / 2);
  for (long long s = 0; s <= smax; ++s) {
    int k1_max = static_cast<int>(std::min<long long>(s, m1.size()));
    for (int k1 = static_cast<int>(doomed.size()); k1 <= k1_max; ++k1) {
      EditBudget budget{k1, static_cast<int>(s - k1)};
      if (budget.k2 > p2.n() / 2) continue;
      if (auto got = cut(cut, 0, budget.k1 - static_cast<int>(doomed.size()),
                         budget.k2))
        return got;
    }
  }
  return std::nullopt;
}

}  // namespace rematch
