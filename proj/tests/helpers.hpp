#pragma once

// Shared test utilities: seeded random profiles and matchings.

#include <random>
#include <string>
#include <vector>

#include "rematch/model.hpp"

namespace testutil {

using namespace rematch;

struct ProfileOptions {
  int n = 6;
  ProfileKind kind = ProfileKind::Roommates;
  double edge_prob = 0.7;
  double tie_prob = 0.0;  // chance of merging each adjacent entry pair
};

inline PreferenceProfile random_profile(std::mt19937_64& rng,
                                        const ProfileOptions& opt) {
  int n = opt.n;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i + 1));

  std::vector<AgentId> side_u, side_w;
  std::vector<int> side(n, 0);
  if (opt.kind == ProfileKind::Marriage) {
    for (int i = 0; i < n / 2; ++i) side_u.push_back(i);
    for (int i = n / 2; i < n; ++i) {
      side_w.push_back(i);
      side[i] = 1;
    }
  }
  auto cross_ok = [&](int a, int b) {
    return opt.kind == ProfileKind::Roommates || side[a] != side[b];
  };

  std::bernoulli_distribution take(opt.edge_prob);
  std::vector<std::vector<AgentId>> adj(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (cross_ok(a, b) && take(rng)) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
  for (int a = 0; a < n; ++a)
    if (adj[a].empty()) {
      std::vector<int> cands;
      for (int b = 0; b < n; ++b)
        if (b != a && cross_ok(a, b)) cands.push_back(b);
      int b = cands[std::uniform_int_distribution<size_t>(
          0, cands.size() - 1)(rng)];
      adj[a].push_back(b);
      adj[b].push_back(a);
    }

  std::bernoulli_distribution merge(opt.tie_prob);
  std::vector<PreferenceList> lists(n);
  for (int a = 0; a < n; ++a) {
    auto order = adj[a];
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t i = 0; i < order.size(); ++i) {
      if (i > 0 && opt.tie_prob > 0 && merge(rng))
        lists[a].groups.back().push_back(order[i]);
      else
        lists[a].groups.push_back({order[i]});
    }
  }
  return make_profile(opt.kind, names, lists, side_u, side_w);
}

// Rows are preference lists over agents named "1".."n", row i owned by
// agent i+1.  Ties parenthesized as in instance files.
inline PreferenceProfile profile_1based(const std::vector<std::string>& rows,
                                        ProfileKind kind =
                                            ProfileKind::Roommates,
                                        std::vector<AgentId> side_u = {},
                                        std::vector<AgentId> side_w = {}) {
  int n = static_cast<int>(rows.size());
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i + 1));
  auto resolve = [&](const std::string& tok) {
    for (int i = 0; i < n; ++i)
      if (names[i] == tok) return static_cast<AgentId>(i);
    fail(Errc::MalformedSyntax, "unknown agent '" + tok + "'");
  };
  std::vector<PreferenceList> lists;
  for (const auto& row : rows)
    lists.push_back(
        detail::parse_pref_groups(detail::tokenize(row), resolve));
  return make_profile(kind, names, lists, side_u, side_w);
}

inline Matching matching_1based(
    const std::vector<std::pair<int, int>>& pairs) {
  std::vector<std::pair<AgentId, AgentId>> zero;
  for (auto [a, b] : pairs) zero.emplace_back(a - 1, b - 1);
  return Matching::from_pairs(zero);
}

// Any maximal matching in the acceptability graph (not necessarily stable).
inline Matching greedy_matching(std::mt19937_64& rng,
                                const PreferenceProfile& p) {
  auto edges = p.acceptable_edges();
  std::shuffle(edges.begin(), edges.end(), rng);
  std::vector<bool> used(p.n(), false);
  std::vector<std::pair<AgentId, AgentId>> pairs;
  for (auto [a, b] : edges)
    if (!used[a] && !used[b]) {
      used[a] = used[b] = true;
      pairs.emplace_back(a, b);
    }
  return Matching::from_pairs(pairs);
}

}  // namespace testutil
