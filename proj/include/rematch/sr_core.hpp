#pragma once

// Irving's stable-roommates machinery for strict (no-ties) preferences:
// Phase-1 proposals, preference tables, rotations and their elimination,
// and the rotation poset whose complete closed subsets are exactly the
// stable matchings.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "rematch/model.hpp"

namespace rematch {

// Symmetric collection of ordered preference lists.  Throughout Phase 2 the
// first/last duality holds: x first on y's list iff y last on x's list.
struct PreferenceTable {
  std::vector<std::vector<AgentId>> lists;

  int n() const { return static_cast<int>(lists.size()); }
  bool empty(AgentId a) const { return lists[a].empty(); }
  int size(AgentId a) const { return static_cast<int>(lists[a].size()); }
  AgentId first(AgentId a) const { return lists[a].front(); }
  AgentId second(AgentId a) const { return lists[a][1]; }
  AgentId last(AgentId a) const { return lists[a].back(); }

  bool contains(AgentId a, AgentId b) const {
    for (AgentId x : lists[a])
      if (x == b) return true;
    return false;
  }

  void erase_pair(AgentId a, AgentId b) {
    std::erase(lists[a], b);
    std::erase(lists[b], a);
  }

  bool symmetric() const {
    for (AgentId a = 0; a < n(); ++a)
      for (AgentId b : lists[a])
        if (!contains(b, a)) return false;
    return true;
  }

  bool first_last_dual() const {
    for (AgentId a = 0; a < n(); ++a)
      if (!lists[a].empty() && last(first(a)) != a) return false;
    return true;
  }

  std::string fingerprint() const {
    std::string out;
    for (AgentId a = 0; a < n(); ++a) {
      for (AgentId b : lists[a]) {
        out += std::to_string(b);
        out += ',';
      }
      out += ';';
    }
    return out;
  }

  bool operator==(const PreferenceTable&) const = default;
};

// Phase 1: every agent proposes to its current first choice; an accepted
// proposal deletes everything the holder likes less, with symmetric
// deletions.  The resulting table is order-independent.
inline PreferenceTable phase1(const PreferenceProfile& p,
                              std::vector<AgentId> proposal_order = {}) {
  if (p.has_ties()) fail(Errc::TiesPresent, "phase 1 requires strict lists");
  PreferenceTable t;
  t.lists.resize(p.n());
  for (AgentId a = 0; a < p.n(); ++a) t.lists[a] = p.list(a).flatten();

  std::deque<AgentId> queue;
  if (proposal_order.empty())
    for (AgentId a = 0; a < p.n(); ++a) queue.push_back(a);
  else
    queue.assign(proposal_order.begin(), proposal_order.end());

  std::vector<AgentId> holds(p.n(), -1);  // holds[y]: proposer y accepted
  while (!queue.empty()) {
    AgentId x = queue.front();
    queue.pop_front();
    if (t.empty(x)) continue;
    AgentId y = t.first(x);
    if (holds[y] == x) continue;
    // everything below x leaves y's list; a displaced holder re-proposes
    AgentId old = holds[y];
    holds[y] = x;
    int pos = 0;
    while (t.lists[y][pos] != x) ++pos;
    std::vector<AgentId> dropped(t.lists[y].begin() + pos + 1,
                                 t.lists[y].end());
    t.lists[y].resize(pos + 1);
    for (AgentId z : dropped) std::erase(t.lists[z], y);
    if (old >= 0 && !t.contains(y, old)) queue.push_back(old);
  }
  return t;
}

struct Phase1Class {
  enum Kind { AllEmpty, UniqueMatching, Proceed } kind;
  Matching unique;                // set iff UniqueMatching
  std::vector<AgentId> matched;   // agents matched by every stable matching
};

inline Phase1Class classify_phase1(const PreferenceTable& t) {
  bool all_empty = true, all_single = true;
  Phase1Class out;
  for (AgentId a = 0; a < t.n(); ++a) {
    if (!t.empty(a)) {
      all_empty = false;
      out.matched.push_back(a);
    }
    if (t.size(a) > 1) all_single = false;
  }
  if (all_empty) {
    out.kind = Phase1Class::AllEmpty;
  } else if (all_single) {
    out.kind = Phase1Class::UniqueMatching;
    std::vector<std::pair<AgentId, AgentId>> pairs;
    for (AgentId a = 0; a < t.n(); ++a)
      if (!t.empty(a) && a < t.first(a)) pairs.emplace_back(a, t.first(a));
    out.unique = Matching::from_pairs(pairs);
  } else {
    out.kind = Phase1Class::Proceed;
  }
  return out;
}

// Cyclic sequence ((e_0,h_0),...,(e_{r-1},h_{r-1})): h_i first and
// h_{i+1 mod r} second on e_i's list.  Canonical form rotates the
// lexicographically least pair to the front.
struct Rotation {
  std::vector<std::pair<AgentId, AgentId>> pairs;

  static Rotation make(std::vector<std::pair<AgentId, AgentId>> seq) {
    Rotation r;
    size_t lead = 0;
    for (size_t i = 1; i < seq.size(); ++i)
      if (seq[i] < seq[lead]) lead = i;
    r.pairs.reserve(seq.size());
    for (size_t i = 0; i < seq.size(); ++i)
      r.pairs.push_back(seq[(lead + i) % seq.size()]);
    return r;
  }

  int length() const { return static_cast<int>(pairs.size()); }

  Rotation negation() const {
    int r = length();
    std::vector<std::pair<AgentId, AgentId>> seq(r);
    for (int i = 0; i < r; ++i)
      seq[i] = {pairs[i].second, pairs[(i + r - 1) % r].first};
    return make(std::move(seq));
  }

  auto operator<=>(const Rotation&) const = default;
};

inline std::vector<Rotation> exposed_rotations(const PreferenceTable& t) {
  std::vector<Rotation> out;
  std::vector<char> done(t.n(), 0);
  auto next = [&](AgentId e) { return t.last(t.second(e)); };
  for (AgentId a = 0; a < t.n(); ++a) {
    if (done[a] || t.size(a) < 2) continue;
    std::vector<AgentId> path;
    std::map<AgentId, int> pos;
    AgentId x = a;
    while (true) {
      if (t.size(x) < 2 || done[x]) break;  // tail into decided territory
      auto it = pos.find(x);
      if (it != pos.end()) {
        std::vector<std::pair<AgentId, AgentId>> seq;
        for (size_t i = it->second; i < path.size(); ++i)
          seq.emplace_back(path[i], t.first(path[i]));
        if (seq.size() >= 2) out.push_back(Rotation::make(std::move(seq)));
        break;
      }
      pos[x] = static_cast<int>(path.size());
      path.push_back(x);
      x = next(x);
    }
    for (AgentId v : path) done[v] = 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_exposed(const PreferenceTable& t, const Rotation& rho) {
  int r = rho.length();
  if (r < 2) return false;
  for (int i = 0; i < r; ++i) {
    auto [e, h] = rho.pairs[i];
    if (t.size(e) < 2) return false;
    if (t.first(e) != h) return false;
    if (t.second(e) != rho.pairs[(i + 1) % r].second) return false;
  }
  return true;
}

// Elimination: for each i, everything below e_i leaves h_{i+1}'s list, with
// symmetric deletions.  All removals are read off the pre-elimination table
// and applied as one set; the per-i rules may overlap when an agent serves
// as e in one pair and h in another.  nullopt when some list becomes empty,
// which proves no stable matching exists at all.
inline std::optional<PreferenceTable> eliminate(const PreferenceTable& t,
                                                const Rotation& rho) {
  if (!is_exposed(t, rho))
    fail(Errc::RotationNotExposed, "rotation is not exposed in this table");
  std::set<std::pair<AgentId, AgentId>> dead;
  int r = rho.length();
  for (int i = 0; i < r; ++i) {
    AgentId e = rho.pairs[i].first;
    AgentId h = rho.pairs[(i + 1) % r].second;
    const auto& lst = t.lists[h];
    size_t pos = 0;
    while (pos < lst.size() && lst[pos] != e) ++pos;
    if (pos == lst.size())
      fail(Errc::RotationNotExposed, "exposed rotation lost a table pair");
    for (size_t q = pos + 1; q < lst.size(); ++q)
      dead.emplace(std::min(h, lst[q]), std::max(h, lst[q]));
  }
  PreferenceTable out = t;
  for (auto [a, b] : dead) out.erase_pair(a, b);
  for (AgentId a = 0; a < out.n(); ++a)
    if (out.empty(a) && !t.empty(a)) return std::nullopt;
  return out;
}

// Rotations indexed by discovery id: breadth-first over reachable tables,
// new rotations numbered in canonical order per state.  This matches the
// numbering convention of worked examples (rho_1, rho_2, ... in order of
// first exposure).
struct RotationPoset {
  PreferenceTable base;            // the Phase-1 table
  std::vector<Rotation> rotations;
  std::vector<int> dual;           // dual[i] = partner id, -1 for singletons
  // precedes[i][j]: i must be eliminated before j can ever be exposed
  std::vector<std::vector<char>> precedes;

  int size() const { return static_cast<int>(rotations.size()); }
  bool is_singleton(int i) const { return dual[i] < 0; }

  std::vector<int> singleton_ids() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
      if (is_singleton(i)) out.push_back(i);
    return out;
  }
  std::vector<std::pair<int, int>> dual_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i)
      if (dual[i] > i) out.emplace_back(i, dual[i]);
    return out;
  }

  // arcs of the transitive reduction, (pred, succ)
  std::vector<std::pair<int, int>> reduced_arcs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j) {
        if (!precedes[i][j]) continue;
        bool direct = true;
        for (int m = 0; m < size() && direct; ++m)
          if (precedes[i][m] && precedes[m][j]) direct = false;
        if (direct) out.emplace_back(i, j);
      }
    return out;
  }

  std::optional<int> find(const Rotation& rho) const {
    for (int i = 0; i < size(); ++i)
      if (rotations[i] == rho) return i;
    return std::nullopt;
  }
};

// nullopt: the profile has no stable matching (Phase-1 all-empty, or a list
// emptied during some Phase-2 elimination).
//
// States are explored level by level (by number of eliminations), within a
// level in lexicographic order of the eliminated-id set; new rotations are
// numbered in canonical order per state.  This reproduces the numbering of
// the worked examples.
inline std::optional<RotationPoset> build_rotation_poset(
    const PreferenceProfile& p, int max_states = 100000) {
  RotationPoset poset;
  poset.base = phase1(p);
  if (classify_phase1(poset.base).kind == Phase1Class::AllEmpty)
    return std::nullopt;

  std::map<Rotation, int> ids;
  // pred[j]: intersection of the eliminated-sets of all states exposing j
  std::vector<std::set<int>> pred;
  std::vector<char> pred_seen;

  // eliminated-id set (sorted) -> table; table states and eliminated sets
  // are in bijection, which `fingerprints` double-checks
  std::map<std::vector<int>, PreferenceTable> frontier;
  std::unordered_map<std::string, std::vector<int>> fingerprints;
  long long state_count = 1;
  frontier.emplace(std::vector<int>{}, poset.base);
  fingerprints.emplace(poset.base.fingerprint(), std::vector<int>{});

  while (!frontier.empty()) {
    std::map<std::vector<int>, PreferenceTable> next_frontier;
    for (const auto& [elim, table] : frontier) {
      for (const Rotation& rho : exposed_rotations(table)) {
        auto [it, fresh] = ids.emplace(rho, static_cast<int>(ids.size()));
        int id = it->second;
        if (fresh) {
          poset.rotations.push_back(rho);
          pred.emplace_back();
          pred_seen.push_back(0);
        }
        std::set<int> elim_set(elim.begin(), elim.end());
        if (!pred_seen[id]) {
          pred[id] = elim_set;
          pred_seen[id] = 1;
        } else {
          std::set<int> merged;
          std::set_intersection(pred[id].begin(), pred[id].end(),
                                elim_set.begin(), elim_set.end(),
                                std::inserter(merged, merged.begin()));
          pred[id] = std::move(merged);
        }
        auto next = eliminate(table, rho);
        if (!next) return std::nullopt;
        std::vector<int> child = elim;
        child.insert(std::lower_bound(child.begin(), child.end(), id), id);
        auto fp = next->fingerprint();
        auto known = fingerprints.find(fp);
        if (known != fingerprints.end()) {
          if (known->second != child)
            fail(Errc::PreconditionViolated,
                 "internal: one table reached by two eliminated-sets");
          continue;
        }
        if (++state_count > max_states)
          fail(Errc::TooLarge, "rotation-poset state space exceeds " +
                                   std::to_string(max_states) + " tables");
        fingerprints.emplace(std::move(fp), child);
        next_frontier.emplace(std::move(child), std::move(*next));
      }
    }
    frontier = std::move(next_frontier);
  }

  int r = static_cast<int>(poset.rotations.size());
  poset.precedes.assign(r, std::vector<char>(r, 0));
  for (int j = 0; j < r; ++j)
    for (int i : pred[j]) poset.precedes[i][j] = 1;

  poset.dual.assign(r, -1);
  for (int i = 0; i < r; ++i) {
    auto it = ids.find(poset.rotations[i].negation());
    if (it != ids.end()) poset.dual[i] = it->second;
  }
  return poset;
}

// Eliminates the subset's rotations (which must include all singletons and
// one of each dual pair, and be predecessor-closed) from the base table and
// reads off the matching.
inline Matching matching_from_closed_subset(const RotationPoset& poset,
                                            const std::set<int>& c) {
  for (int i : c)
    if (i < 0 || i >= poset.size())
      fail(Errc::UnknownElement, "rotation id out of range");
  for (int j : c)
    for (int i = 0; i < poset.size(); ++i)
      if (poset.precedes[i][j] && !c.count(i))
        fail(Errc::NotClosed, "subset misses a predecessor rotation");
  for (int i = 0; i < poset.size(); ++i) {
    if (poset.is_singleton(i)) {
      if (!c.count(i))
        fail(Errc::NotComplete, "subset misses a singleton rotation");
    } else if (poset.dual[i] > i) {
      if (c.count(i) + c.count(poset.dual[i]) != 1)
        fail(Errc::NotComplete,
             "subset must take exactly one of each dual pair");
    }
  }

  PreferenceTable t = poset.base;
  std::set<int> left = c;
  while (!left.empty()) {
    bool progress = false;
    for (int i : left) {
      if (!is_exposed(t, poset.rotations[i])) continue;
      auto next = eliminate(t, poset.rotations[i]);
      // closed complete subsets of a valid poset never empty a list
      if (!next)
        fail(Errc::NotClosed, "elimination emptied a list unexpectedly");
      t = std::move(*next);
      left.erase(i);
      progress = true;
      break;
    }
    if (!progress)
      fail(Errc::NotClosed, "no member rotation is exposed; subset invalid");
  }

  std::vector<std::pair<AgentId, AgentId>> pairs;
  for (AgentId a = 0; a < t.n(); ++a) {
    if (t.empty(a)) continue;
    if (t.size(a) != 1)
      fail(Errc::NotComplete, "table not fully reduced by the subset");
    if (a < t.first(a)) pairs.emplace_back(a, t.first(a));
  }
  return Matching::from_pairs(pairs);
}

inline Matching matching_from_closed_subset(
    const RotationPoset& poset, const std::vector<Rotation>& rotations) {
  std::set<int> c;
  for (const auto& rho : rotations) {
    auto id = poset.find(rho);
    if (!id) fail(Errc::UnknownElement, "rotation not in the poset");
    c.insert(*id);
  }
  return matching_from_closed_subset(poset, c);
}

// All complete closed subsets; one per stable matching.  Guarded: the count
// is exponential in the number of dual pairs.
inline std::vector<std::set<int>> complete_closed_subsets(
    const RotationPoset& poset, int max_count = 100000) {
  std::vector<int> singles = poset.singleton_ids();
  auto duals = poset.dual_pairs();
  std::vector<std::set<int>> out;
  std::set<int> cur(singles.begin(), singles.end());
  auto closed = [&](const std::set<int>& c) {
    for (int j : c)
      for (int i = 0; i < poset.size(); ++i)
        if (poset.precedes[i][j] && !c.count(i)) return false;
    return true;
  };
  std::function<void(size_t)> rec = [&](size_t d) {
    if (static_cast<int>(out.size()) > max_count)
      fail(Errc::TooLarge, "too many complete closed subsets");
    if (d == duals.size()) {
      if (closed(cur)) out.push_back(cur);
      return;
    }
    for (int pick : {duals[d].first, duals[d].second}) {
      cur.insert(pick);
      rec(d + 1);
      cur.erase(pick);
    }
  };
  rec(0);
  return out;
}

// Eliminates the exposed rotation with the lowest discovery id until the
// table is all singletons.  Reproduces the worked eight-agent run
// (rho_1, rho_2, rho_3, rho_4 -> {1-5, 2-3, 4-7, 6-8}).
inline std::optional<Matching> find_stable_matching(
    const PreferenceProfile& p) {
  PreferenceTable t = phase1(p);
  auto cls = classify_phase1(t);
  if (cls.kind == Phase1Class::AllEmpty) return std::nullopt;
  if (cls.kind == Phase1Class::UniqueMatching) return cls.unique;

  std::map<Rotation, int> ids;
  std::vector<Rotation> by_id;
  while (true) {
    auto exposed = exposed_rotations(t);
    if (exposed.empty()) break;
    for (const auto& rho : exposed)
      if (ids.emplace(rho, static_cast<int>(ids.size())).second)
        by_id.push_back(rho);
    int pick = -1;
    for (const auto& rho : exposed) {
      int id = ids[rho];
      if (pick < 0 || id < pick) pick = id;
    }
    auto next = eliminate(t, by_id[pick]);
    if (!next) return std::nullopt;
    t = std::move(*next);
  }

  std::vector<std::pair<AgentId, AgentId>> pairs;
  for (AgentId a = 0; a < t.n(); ++a) {
    if (t.empty(a)) continue;
    if (t.size(a) != 1) fail(Errc::PreconditionViolated,
                             "table has a multi-entry list but no rotation");
    if (a < t.first(a)) pairs.emplace_back(a, t.first(a));
  }
  return Matching::from_pairs(pairs);
}

// Proposal set of a table: every agent points at its current first choice.
inline std::set<std::pair<AgentId, AgentId>> proposal_set(
    const PreferenceTable& t) {
  std::set<std::pair<AgentId, AgentId>> out;
  for (AgentId a = 0; a < t.n(); ++a)
    if (!t.empty(a)) out.emplace(a, t.first(a));
  return out;
}

// Base table with all singleton rotations eliminated (in precedence order).
inline PreferenceTable table_after_singletons(const RotationPoset& poset) {
  PreferenceTable t = poset.base;
  std::set<int> left;
  for (int i : poset.singleton_ids()) left.insert(i);
  while (!left.empty()) {
    bool progress = false;
    for (int i : left) {
      if (!is_exposed(t, poset.rotations[i])) continue;
      auto next = eliminate(t, poset.rotations[i]);
      if (!next)
        fail(Errc::PreconditionViolated,
             "eliminating a singleton emptied a list");
      t = std::move(*next);
      left.erase(i);
      progress = true;
      break;
    }
    if (!progress)
      fail(Errc::PreconditionViolated,
           "singleton set is not closed under precedence");
  }
  return t;
}

}  // namespace rematch
