#pragma once

// Brute-force ground truth: enumerate all weakly stable matchings, compute
// minimum incremental distance, and decide the small graph problems used by
// the instance generators.  Deliberately simple; size-guarded.

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rematch/model.hpp"

namespace rematch {

struct SimpleGraph {
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> edges;  // canonical: a < b, sorted, unique

  int n() const { return static_cast<int>(names.size()); }

  bool has_edge(int a, int b) const {
    auto pr = std::minmax(a, b);
    return std::binary_search(edges.begin(), edges.end(),
                              std::make_pair(pr.first, pr.second));
  }

  std::optional<int> find_vertex(const std::string& nm) const {
    for (int i = 0; i < n(); ++i)
      if (names[i] == nm) return i;
    return std::nullopt;
  }

  std::vector<std::uint32_t> adjacency_masks() const {
    std::vector<std::uint32_t> adj(n(), 0);
    for (auto [a, b] : edges) {
      adj[a] |= 1u << b;
      adj[b] |= 1u << a;
    }
    return adj;
  }

  SimpleGraph complement() const {
    SimpleGraph g;
    g.names = names;
    for (int a = 0; a < n(); ++a)
      for (int b = a + 1; b < n(); ++b)
        if (!has_edge(a, b)) g.edges.emplace_back(a, b);
    return g;
  }

  bool operator==(const SimpleGraph&) const = default;
};

inline SimpleGraph make_graph(std::vector<std::string> names,
                              std::vector<std::pair<int, int>> edges) {
  SimpleGraph g;
  int n = static_cast<int>(names.size());
  std::set<std::string> seen;
  for (const auto& nm : names) {
    if (nm.empty() || nm.find_first_of(" \t\r\n") != std::string::npos)
      fail(Errc::MalformedSyntax, "bad vertex name '" + nm + "'");
    if (!seen.insert(nm).second)
      fail(Errc::DuplicateEntry, "duplicate vertex '" + nm + "'");
  }
  std::set<std::pair<int, int>> canon;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n)
      fail(Errc::MalformedSyntax, "edge endpoint out of range");
    if (a == b) fail(Errc::MalformedSyntax, "self-loop");
    if (!canon.emplace(std::min(a, b), std::max(a, b)).second)
      fail(Errc::DuplicateEntry, "duplicate edge");
  }
  g.names = std::move(names);
  g.edges.assign(canon.begin(), canon.end());
  return g;
}

// Lines 'v name' then 'e name name'; '#' comments.
inline SimpleGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string rawline;
  std::vector<std::string> names;
  std::map<std::string, int> ids;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, rawline)) {
    auto toks = detail::tokenize(detail::strip_comment(rawline));
    if (toks.empty()) continue;
    if (toks[0] == "v" && toks.size() == 2) {
      if (!ids.emplace(toks[1], static_cast<int>(names.size())).second)
        fail(Errc::DuplicateEntry, "duplicate vertex '" + toks[1] + "'");
      names.push_back(toks[1]);
    } else if (toks[0] == "e" && toks.size() == 3) {
      auto look = [&](const std::string& nm) {
        auto it = ids.find(nm);
        if (it == ids.end())
          fail(Errc::MalformedSyntax, "unknown vertex '" + nm + "'");
        return it->second;
      };
      edges.emplace_back(look(toks[1]), look(toks[2]));
    } else {
      fail(Errc::MalformedSyntax, "unrecognized graph line: " + rawline);
    }
  }
  return make_graph(std::move(names), std::move(edges));
}

inline std::string serialize_graph(const SimpleGraph& g) {
  std::string out;
  for (const auto& nm : g.names) out += "v " + nm + "\n";
  for (auto [a, b] : g.edges) out += "e " + g.names[a] + " " + g.names[b] + "\n";
  return out;
}

namespace detail {

// Backtracking over agents in id order.  state: -2 undecided, -1 decided
// unmatched, >=0 partner.  Decisions are final, so a blocking pair among
// decided agents can be pruned the moment its second member is decided;
// every leaf reached is therefore stable.
class StableSearch {
 public:
  StableSearch(const PreferenceProfile& p,
               std::function<bool(const std::vector<AgentId>&)> emit)
      : p_(p), emit_(std::move(emit)), state_(p.n(), -2), nbrs_(p.n()) {
    for (AgentId a = 0; a < p.n(); ++a) nbrs_[a] = p.list(a).flatten();
  }

  void run() { go(0); }

 private:
  bool creates_block(AgentId u) const {
    for (AgentId v : nbrs_[u]) {
      if (state_[v] == -2 || state_[u] == v) continue;
      bool u_wants = state_[u] == -1 || p_.prefers(u, v, state_[u]);
      bool v_wants = state_[v] == -1 || p_.prefers(v, u, state_[v]);
      if (u_wants && v_wants) return true;
    }
    return false;
  }

  void go(AgentId a) {
    if (stopped_) return;
    while (a < p_.n() && state_[a] != -2) ++a;
    if (a == p_.n()) {
      stopped_ = emit_(state_);
      return;
    }
    state_[a] = -1;
    if (!creates_block(a)) go(a + 1);
    state_[a] = -2;
    for (AgentId b : nbrs_[a]) {
      if (stopped_) return;
      if (state_[b] != -2) continue;
      state_[a] = b;
      state_[b] = a;
      if (!creates_block(a) && !creates_block(b)) go(a + 1);
      state_[a] = state_[b] = -2;
    }
  }

  const PreferenceProfile& p_;
  std::function<bool(const std::vector<AgentId>&)> emit_;
  std::vector<AgentId> state_;
  std::vector<std::vector<AgentId>> nbrs_;
  bool stopped_ = false;
};

inline Matching matching_from_state(const std::vector<AgentId>& state) {
  std::vector<std::pair<AgentId, AgentId>> pairs;
  for (AgentId a = 0; a < static_cast<AgentId>(state.size()); ++a)
    if (state[a] > a) pairs.emplace_back(a, state[a]);
  return Matching::from_pairs(pairs);
}

inline void check_size(const PreferenceProfile& p, int max_agents) {
  if (p.n() > max_agents)
    fail(Errc::TooLarge, "profile has " + std::to_string(p.n()) +
                             " agents, oracle bound is " +
                             std::to_string(max_agents));
}

}  // namespace detail

inline std::vector<Matching> enumerate_stable_matchings(
    const PreferenceProfile& p, int max_agents = 12) {
  detail::check_size(p, max_agents);
  std::vector<Matching> out;
  detail::StableSearch search(p, [&](const std::vector<AgentId>& st) {
    out.push_back(detail::matching_from_state(st));
    return false;
  });
  search.run();
  std::sort(out.begin(), out.end());
  return out;
}

inline bool exists_stable_matching(const PreferenceProfile& p,
                                   int max_agents = 12) {
  detail::check_size(p, max_agents);
  bool found = false;
  detail::StableSearch search(p, [&](const std::vector<AgentId>&) {
    found = true;
    return true;
  });
  search.run();
  return found;
}

// Minimum |m1 Δ M| over stable matchings M of p2, with a witness; nullopt if
// p2 has no stable matching.
inline std::optional<std::pair<long long, Matching>> min_distance_stable(
    const PreferenceProfile& p2, const Matching& m1, int max_agents = 12) {
  detail::check_size(p2, max_agents);
  std::optional<std::pair<long long, Matching>> best;
  detail::StableSearch search(p2, [&](const std::vector<AgentId>& st) {
    auto m = detail::matching_from_state(st);
    long long d = matching_distance(m1, m);
    if (!best || d < best->first) best = {d, m};
    return false;
  });
  search.run();
  return best;
}

// Maximum |m1 ∩ M| over stable matchings M of p2; nullopt if p2 has no
// stable matching.  Branch and bound: a partial assignment can still gain at
// most the number of m1 pairs with both endpoints undecided.  Stops early
// once `target` (if nonnegative) is reached.
inline std::optional<int> max_common_pairs(const PreferenceProfile& p2,
                                           const Matching& m1,
                                           int max_agents = 12,
                                           int target = -1) {
  detail::check_size(p2, max_agents);
  int n = p2.n();
  auto m1_partner = m1.partners(std::max(n, [&] {
    int hi = n;
    for (auto [a, b] : m1.pairs) hi = std::max({hi, a + 1, b + 1});
    return hi;
  }()));

  std::vector<std::vector<AgentId>> nbrs(n);
  for (AgentId a = 0; a < n; ++a) nbrs[a] = p2.list(a).flatten();
  std::vector<AgentId> state(n, -2);
  int best = -1;  // -1 until any stable matching is found
  int common = 0;

  // m1 pairs fully undecided; decremented when either endpoint is decided
  int avail = 0;
  for (auto [a, b] : m1.pairs)
    if (a < n && b < n) ++avail;

  auto in_m1_range = [&](AgentId a) {
    return a < static_cast<AgentId>(m1_partner.size()) && m1_partner[a] >= 0 &&
           m1_partner[a] < n;
  };

  auto creates_block = [&](AgentId u) {
    for (AgentId v : nbrs[u]) {
      if (state[v] == -2 || state[u] == v) continue;
      bool u_wants = state[u] == -1 || p2.prefers(u, v, state[u]);
      bool v_wants = state[v] == -1 || p2.prefers(v, u, state[v]);
      if (u_wants && v_wants) return true;
    }
    return false;
  };

  std::function<void(AgentId)> go = [&](AgentId a) {
    if (target >= 0 && best >= target) return;
    while (a < n && state[a] != -2) ++a;
    if (a == n) {
      best = std::max(best, common);
      return;
    }
    if (best >= 0 && common + avail <= best) return;  // cannot improve

    // common counted once per pair, from its lower endpoint
    auto decide = [&](AgentId u, AgentId mate) {
      state[u] = mate;
      if (in_m1_range(u) && state[m1_partner[u]] == -2) --avail;
      if (mate >= 0 && m1_partner[u] == mate && mate > u) ++common;
    };
    auto undo = [&](AgentId u) {
      AgentId mate = state[u];
      if (mate >= 0 && m1_partner[u] == mate && mate > u) --common;
      if (in_m1_range(u) && state[m1_partner[u]] == -2) ++avail;
      state[u] = -2;
    };

    // try reunions with m1 partners first so early leaves score high
    std::vector<AgentId> order;
    if (in_m1_range(a) && state[m1_partner[a]] == -2 &&
        p2.accepts(a, m1_partner[a]))
      order.push_back(m1_partner[a]);
    for (AgentId b : nbrs[a])
      if (state[b] == -2 && (order.empty() || b != order[0]))
        order.push_back(b);

    for (AgentId b : order) {
      decide(a, b);
      decide(b, a);
      if (!creates_block(a) && !creates_block(b)) go(a + 1);
      undo(b);
      undo(a);
      if (target >= 0 && best >= target) return;
    }
    decide(a, -1);
    if (!creates_block(a)) go(a + 1);
    undo(a);
  };
  go(0);

  if (best < 0) return std::nullopt;
  return best;
}

namespace detail {

inline void check_graph_size(const SimpleGraph& g, int max_vertices) {
  if (g.n() > max_vertices || max_vertices > 31)
    fail(Errc::TooLarge, "graph has " + std::to_string(g.n()) +
                             " vertices, oracle bound is " +
                             std::to_string(max_vertices));
}

inline bool independent_rec(const std::vector<std::uint32_t>& adj,
                            std::uint32_t cand, int need) {
  if (need <= 0) return true;
  if (std::popcount(cand) < need) return false;
  int v = std::countr_zero(cand);
  std::uint32_t bit = 1u << v;
  if (independent_rec(adj, cand & ~bit & ~adj[v], need - 1)) return true;
  return independent_rec(adj, cand & ~bit, need);
}

inline bool clique_pendant_rec(const std::vector<std::uint32_t>& adj,
                               std::uint32_t clique, std::uint32_t cand,
                               int left, int n) {
  if (left == 0) {
    std::uint32_t rest = clique;
    while (rest) {
      int v = std::countr_zero(rest);
      rest &= rest - 1;
      if ((adj[v] & ~clique) == 0) return false;  // no pendant neighbor
    }
    return true;
  }
  if (std::popcount(cand) < left) return false;
  while (cand) {
    int v = std::countr_zero(cand);
    std::uint32_t bit = 1u << v;
    cand &= ~bit;
    // restrict future candidates to v's neighbors above v
    std::uint32_t next = cand & adj[v];
    if (clique_pendant_rec(adj, clique | bit, next, left - 1, n)) return true;
  }
  return false;
}

}  // namespace detail

inline bool max_independent_set(const SimpleGraph& g, int h,
                                int max_vertices = 16) {
  detail::check_graph_size(g, max_vertices);
  if (h <= 0) return true;
  if (h > g.n()) return false;
  auto adj = g.adjacency_masks();
  std::uint32_t all = g.n() == 31 ? 0x7fffffffu : ((1u << g.n()) - 1);
  return detail::independent_rec(adj, all, h);
}

inline bool has_clique_with_pendant_edges(const SimpleGraph& g, int h,
                                          int max_vertices = 16) {
  detail::check_graph_size(g, max_vertices);
  if (h <= 0) return true;
  if (h > g.n()) return false;
  auto adj = g.adjacency_masks();
  std::uint32_t all = g.n() == 31 ? 0x7fffffffu : ((1u << g.n()) - 1);
  return detail::clique_pendant_rec(adj, 0, all, h, g.n());
}

}  // namespace rematch
