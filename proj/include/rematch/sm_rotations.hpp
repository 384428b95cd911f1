#pragma once

// Two-sided matching machinery: deferred acceptance, marriage rotations
// discovered at the matching level, and a min-cut search for the closed
// subset of rotations sharing the most pairs with a reference matching.
// Together these solve the incremental problem for two-sided instances
// without ties in polynomial time.

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "rematch/model.hpp"
#include "rematch/sr_core.hpp"

namespace rematch {

enum class Side { U, W };

namespace detail {

inline void require_marriage_noties(const PreferenceProfile& p) {
  if (p.kind() != ProfileKind::Marriage)
    fail(Errc::NotMarriage, "this algorithm needs a two-sided instance");
  if (p.has_ties())
    fail(Errc::TiesPresent, "this algorithm needs strict preferences");
}

// Successor for rotation discovery.  Unlike the plain successor scan, an
// unmatched acceptable agent below the partner ends the search: it would
// pair up with u the moment a rotation moved u past it, so no stable
// matching places u lower and no rotation may route through.
inline std::optional<AgentId> rotation_successor(
    const PreferenceProfile& p, const std::vector<AgentId>& partner,
    AgentId u) {
  bool past_partner = false;
  for (AgentId w : p.list(u).flatten()) {
    if (w == partner[u]) {
      past_partner = true;
      continue;
    }
    if (!past_partner) continue;
    if (partner[w] == -1) return std::nullopt;
    if (p.prefers(w, u, partner[w])) return w;
  }
  return std::nullopt;
}

}  // namespace detail

// Deferred acceptance with the chosen side proposing in ascending-id order.
// Returns the proposing side's optimal stable matching; agents whose lists
// run out stay unmatched.
inline Matching gale_shapley(const PreferenceProfile& p, Side side = Side::U) {
  detail::require_marriage_noties(p);
  const auto& proposers = side == Side::U ? p.side_u() : p.side_w();

  std::vector<AgentId> partner(p.n(), -1);
  std::vector<std::vector<AgentId>> pref(p.n());
  std::vector<size_t> next(p.n(), 0);
  for (AgentId a = 0; a < p.n(); ++a) pref[a] = p.list(a).flatten();

  std::queue<AgentId> free;
  for (AgentId u : proposers) free.push(u);
  while (!free.empty()) {
    AgentId u = free.front();
    free.pop();
    while (partner[u] == -1 && next[u] < pref[u].size()) {
      AgentId w = pref[u][next[u]++];
      if (partner[w] == -1) {
        partner[w] = u;
        partner[u] = w;
      } else if (p.prefers(w, u, partner[w])) {
        partner[partner[w]] = -1;
        free.push(partner[w]);
        partner[w] = u;
        partner[u] = w;
      }
    }
  }

  std::vector<std::pair<AgentId, AgentId>> pairs;
  for (AgentId u : proposers)
    if (partner[u] != -1) pairs.emplace_back(u, partner[u]);
  return Matching::from_pairs(pairs);
}

// First agent after m(u) on u's list that is matched and prefers u to its
// current partner.  m must be stable, u matched.
inline std::optional<AgentId> successor(const PreferenceProfile& p,
                                        const Matching& m, AgentId u) {
  auto partner = m.partners(p.n());
  if (partner.at(u) == -1)
    fail(Errc::UnmatchedAgent, "successor of an unmatched agent");
  bool past_partner = false;
  for (AgentId w : p.list(u).flatten()) {
    if (w == partner[u]) {
      past_partner = true;
      continue;
    }
    if (!past_partner || partner[w] == -1) continue;
    if (p.prefers(w, u, partner[w])) return w;
  }
  return std::nullopt;
}

// Rotations exposed in a stable matching: cycles of u -> partner(successor(u))
// over the proposing side.  Pairs are (u_i, m(u_i)); canonical form starts at
// the lexicographically least pair.
inline std::vector<Rotation> exposed_sm_rotations(const PreferenceProfile& p,
                                                  const Matching& m) {
  detail::require_marriage_noties(p);
  auto partner = m.partners(p.n());
  std::vector<AgentId> hop(p.n(), -1);
  for (AgentId u : p.side_u()) {
    if (partner[u] == -1) continue;
    if (auto w = detail::rotation_successor(p, partner, u))
      hop[u] = partner[*w];
  }

  std::vector<Rotation> out;
  std::vector<int> state(p.n(), 0);  // 0 fresh, 1 on current walk, 2 done
  for (AgentId start : p.side_u()) {
    if (state[start] != 0) continue;
    std::vector<AgentId> walk;
    AgentId cur = start;
    while (cur != -1 && state[cur] == 0) {
      state[cur] = 1;
      walk.push_back(cur);
      cur = hop[cur];
    }
    if (cur != -1 && state[cur] == 1) {
      std::vector<std::pair<AgentId, AgentId>> pairs;
      for (auto it = std::find(walk.begin(), walk.end(), cur);
           it != walk.end(); ++it)
        pairs.emplace_back(*it, partner[*it]);
      out.push_back(Rotation::make(std::move(pairs)));
    }
    for (AgentId a : walk) state[a] = 2;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Replace each pair (u_i, w_i) of an exposed rotation with (u_i, w_{i+1}).
// The result is stable whenever the input is.
inline Matching eliminate_sm_rotation(const PreferenceProfile& p,
                                      const Matching& m, const Rotation& rho) {
  auto partner = m.partners(p.n());
  int r = rho.length();
  for (int i = 0; i < r; ++i) {
    auto [u, w] = rho.pairs[i];
    if (partner.at(u) != w ||
        detail::rotation_successor(p, partner, u) !=
            std::optional<AgentId>{rho.pairs[(i + 1) % r].second})
      fail(Errc::RotationNotExposed, "rotation is not exposed in this matching");
  }

  std::vector<bool> involved(p.n(), false);
  for (auto [u, w] : rho.pairs) involved[u] = involved[w] = true;
  std::vector<std::pair<AgentId, AgentId>> pairs;
  for (auto [a, b] : m.pairs)
    if (!involved[a] && !involved[b]) pairs.emplace_back(a, b);
  for (int i = 0; i < r; ++i)
    pairs.emplace_back(rho.pairs[i].first, rho.pairs[(i + 1) % r].second);
  return Matching::from_pairs(pairs);
}

// All rotations of the profile, their reduced precedence arcs, the
// proposing-side optimum they descend from, and per-rotation weights
// against a reference matching: pairs of `reference` gained minus pairs
// lost when the rotation is eliminated.
struct SmRotationDigraph {
  Matching u_optimal;
  std::vector<Rotation> rotations;
  std::vector<long long> weights;
  std::vector<std::vector<char>> precedes;   // strict, transitively closed
  std::vector<std::pair<int, int>> arcs;     // transitive reduction

  int size() const { return static_cast<int>(rotations.size()); }
};

// Breadth-first elimination exploration from the U-optimal matching with
// rotation dedup by canonical form.  States are visited level by level in
// lexicographic order of their eliminated-id sets, so discovery ids are
// deterministic.  State count is capped: random instances stay tiny, but
// contrived profiles have exponentially many stable matchings.
inline SmRotationDigraph sm_rotation_digraph(const PreferenceProfile& p,
                                             const Matching& reference,
                                             int max_states = 100000) {
  detail::require_marriage_noties(p);
  SmRotationDigraph dg;
  dg.u_optimal = gale_shapley(p, Side::U);

  std::map<Rotation, int> id_of;
  std::vector<std::set<int>> pred;  // intersection of exposing states
  std::map<std::vector<int>, Matching> frontier{{{}, dg.u_optimal}};
  std::set<std::vector<int>> seen{{}};
  int states = 1;

  while (!frontier.empty()) {
    std::map<std::vector<int>, Matching> next;
    for (const auto& [elim, m] : frontier) {
      for (const auto& rho : exposed_sm_rotations(p, m)) {
        auto [it, fresh] = id_of.try_emplace(rho, dg.size());
        int id = it->second;
        if (fresh) {
          dg.rotations.push_back(rho);
          pred.emplace_back(elim.begin(), elim.end());
        } else {
          std::set<int> cut;
          for (int e : elim)
            if (pred[id].count(e)) cut.insert(e);
          pred[id] = std::move(cut);
        }
        std::vector<int> elim2 = elim;
        elim2.insert(std::lower_bound(elim2.begin(), elim2.end(), id), id);
        if (!seen.insert(elim2).second) continue;
        if (++states > max_states)
          fail(Errc::TooLarge, "too many stable matchings to explore");
        next.emplace(std::move(elim2), eliminate_sm_rotation(p, m, rho));
      }
    }
    frontier = std::move(next);
  }

  int r = dg.size();
  dg.precedes.assign(r, std::vector<char>(r, 0));
  for (int j = 0; j < r; ++j)
    for (int i : pred[j]) dg.precedes[i][j] = 1;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (dg.precedes[i][j] && dg.precedes[j][i])
        fail(Errc::PreconditionViolated, "internal: cyclic rotation order");
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (dg.precedes[i][j])
        for (int m = 0; m < r; ++m)
          if (dg.precedes[j][m] && !dg.precedes[i][m])
            fail(Errc::PreconditionViolated,
                 "internal: rotation order is not transitive");
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (!dg.precedes[i][j]) continue;
      bool direct = true;
      for (int m = 0; m < r && direct; ++m)
        if (dg.precedes[i][m] && dg.precedes[m][j]) direct = false;
      if (direct) dg.arcs.emplace_back(i, j);
    }

  dg.weights.assign(r, 0);
  for (int i = 0; i < r; ++i) {
    const auto& pairs = dg.rotations[i].pairs;
    int len = dg.rotations[i].length();
    for (int q = 0; q < len; ++q) {
      if (reference.contains(pairs[q].first, pairs[(q + 1) % len].second))
        ++dg.weights[i];
      if (reference.contains(pairs[q].first, pairs[q].second)) --dg.weights[i];
    }
  }
  return dg;
}

// A maximum-weight subset of rotations closed under predecessors, found by
// the project-selection reduction: source feeds positive rotations, negative
// rotations feed the sink, and each reduced arc becomes an uncuttable edge
// from dependent to prerequisite.  chosen = source side of a minimum cut.
struct MaxClosure {
  std::vector<int> chosen;       // sorted rotation ids
  long long weight = 0;          // total weight of chosen
  long long positive_total = 0;  // sum of all positive weights
  long long cut_value = 0;       // max flow == min cut of the network
};

inline MaxClosure max_weight_closed_subset(const SmRotationDigraph& dg) {
  int r = dg.size();
  int src = r, snk = r + 1;
  struct Arc {
    int to;
    long long cap;
    int rev;
  };
  std::vector<std::vector<Arc>> net(r + 2);
  auto link = [&](int a, int b, long long cap) {
    net[a].push_back({b, cap, static_cast<int>(net[b].size())});
    net[b].push_back({a, 0, static_cast<int>(net[a].size()) - 1});
  };

  MaxClosure out;
  for (int i = 0; i < r; ++i)
    if (dg.weights[i] > 0) out.positive_total += dg.weights[i];
  long long uncuttable = out.positive_total + 1;
  for (int i = 0; i < r; ++i) {
    if (dg.weights[i] > 0) link(src, i, dg.weights[i]);
    if (dg.weights[i] < 0) link(i, snk, -dg.weights[i]);
  }
  for (auto [i, j] : dg.arcs) link(j, i, uncuttable);

  while (true) {
    std::vector<std::pair<int, int>> via(r + 2, {-1, -1});  // node, arc index
    std::queue<int> q;
    q.push(src);
    via[src] = {src, -1};
    while (!q.empty() && via[snk].first == -1) {
      int v = q.front();
      q.pop();
      for (int a = 0; a < static_cast<int>(net[v].size()); ++a)
        if (net[v][a].cap > 0 && via[net[v][a].to].first == -1) {
          via[net[v][a].to] = {v, a};
          q.push(net[v][a].to);
        }
    }
    if (via[snk].first == -1) break;
    long long push = uncuttable;
    for (int v = snk; v != src; v = via[v].first)
      push = std::min(push, net[via[v].first][via[v].second].cap);
    for (int v = snk; v != src; v = via[v].first) {
      auto& arc = net[via[v].first][via[v].second];
      arc.cap -= push;
      net[arc.to][arc.rev].cap += push;
    }
    out.cut_value += push;
  }

  std::vector<char> reach(r + 2, 0);
  std::queue<int> q;
  q.push(src);
  reach[src] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const auto& arc : net[v])
      if (arc.cap > 0 && !reach[arc.to]) {
        reach[arc.to] = 1;
        q.push(arc.to);
      }
  }
  for (int i = 0; i < r; ++i)
    if (reach[i]) {
      out.chosen.push_back(i);
      out.weight += dg.weights[i];
    }

  for (auto [i, j] : dg.arcs)
    if (reach[j] && !reach[i])
      fail(Errc::PreconditionViolated, "internal: cut side is not closed");
  if (out.weight != out.positive_total - out.cut_value)
    fail(Errc::PreconditionViolated,
         "internal: closure weight disagrees with the cut value");
  return out;
}

// Stable matching for profile2 at minimum distance from matching1, when that
// minimum is within budget.  Two-sided instances without ties always admit a
// stable matching, so the digraph and optimum always exist; the distance gate
// is the only source of NoSolution.
inline std::optional<Matching> solve_ism_noties(const IncrementalInstance& inst) {
  detail::require_marriage_noties(inst.profile1);
  detail::require_marriage_noties(inst.profile2);

  auto dg = sm_rotation_digraph(inst.profile2, inst.matching1);
  auto best = max_weight_closed_subset(dg);

  Matching m2 = dg.u_optimal;
  std::set<int> left(best.chosen.begin(), best.chosen.end());
  while (!left.empty()) {
    int pick = -1;
    for (int id : left) {
      bool minimal = true;
      for (int other : left)
        if (other != id && dg.precedes[other][id]) minimal = false;
      if (minimal) {
        pick = id;
        break;
      }
    }
    if (pick == -1)
      fail(Errc::PreconditionViolated, "internal: chosen subset has no minimum");
    m2 = eliminate_sm_rotation(inst.profile2, m2, dg.rotations[pick]);
    left.erase(pick);
  }

  long long dist = matching_distance(inst.matching1, m2);
  if (m2.size() != dg.u_optimal.size() ||
      dist != matching_distance(inst.matching1, dg.u_optimal) - 2 * best.weight ||
      !is_stable(inst.profile2, m2))
    fail(Errc::PreconditionViolated,
         "internal: reconstructed matching breaks the solve contract");
  if (dist > inst.k) return std::nullopt;
  return m2;
}

}  // namespace rematch
