#pragma once

// Weighted conflict-free closed-subset solver for conflict graphs that are
// disjoint unions of cliques: choose exactly one element per clique so that
// the chosen set is closed under the precedence order and its total weight
// stays within the budget.  Search-tree depth is bounded by the budget.

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rematch/model.hpp"

namespace rematch {

// The target always equals the clique count (validated in make_wcfcs), so a
// solution must pick exactly one element from every clique.
struct WcfcsInstance {
  std::vector<std::string> names;
  std::vector<long long> weights;
  // Strict precedence, transitively closed; precedes[a][b] means a must be
  // in every closed set containing b.
  std::vector<std::vector<char>> precedes;
  std::vector<std::vector<int>> cliques;  // partition of all elements
  std::vector<int> clique_of;
  int target = 0;
  long long budget = 0;

  int size() const { return static_cast<int>(names.size()); }

  int find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
      if (names[i] == name) return i;
    fail(Errc::UnknownElement, "unknown element '" + name + "'");
  }
};

// Everything that must accompany p in a closed set, including p itself.
inline std::vector<int> up_set(const WcfcsInstance& inst, int p) {
  if (p < 0 || p >= inst.size())
    fail(Errc::UnknownElement, "element id out of range");
  std::vector<int> out;
  for (int q = 0; q < inst.size(); ++q)
    if (q == p || inst.precedes[q][p]) out.push_back(q);
  return out;
}

// Everything that requires p, including p itself.
inline std::vector<int> down_set(const WcfcsInstance& inst, int p) {
  if (p < 0 || p >= inst.size())
    fail(Errc::UnknownElement, "element id out of range");
  std::vector<int> out;
  for (int q = 0; q < inst.size(); ++q)
    if (q == p || inst.precedes[p][q]) out.push_back(q);
  return out;
}

// order: pairs (a, b) meaning a precedes b; the transitive closure is taken
// here, so callers pass generating arcs only.  clique_groups must be
// disjoint; elements in no group become singleton cliques.  target must
// equal the resulting clique count.
inline WcfcsInstance make_wcfcs(std::vector<std::string> names,
                                std::vector<long long> weights,
                                const std::vector<std::pair<int, int>>& order,
                                const std::vector<std::vector<int>>& clique_groups,
                                int target, long long budget) {
  int n = static_cast<int>(names.size());
  WcfcsInstance inst;
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos)
      fail(Errc::MalformedSyntax, "bad element name '" + name + "'");
    if (!seen.insert(name).second)
      fail(Errc::DuplicateEntry, "duplicate element '" + name + "'");
  }
  if (static_cast<int>(weights.size()) != n)
    fail(Errc::PreconditionViolated, "one weight per element required");
  for (long long w : weights)
    if (w < 0) fail(Errc::PreconditionViolated, "weights must be nonnegative");

  inst.names = std::move(names);
  inst.weights = std::move(weights);
  inst.precedes.assign(n, std::vector<char>(n, 0));
  for (auto [a, b] : order) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      fail(Errc::UnknownElement, "order arc endpoint out of range");
    if (a == b) fail(Errc::PreconditionViolated, "order arc from an element to itself");
    inst.precedes[a][b] = 1;
  }
  for (int via = 0; via < n; ++via)
    for (int a = 0; a < n; ++a)
      if (inst.precedes[a][via])
        for (int b = 0; b < n; ++b)
          if (inst.precedes[via][b]) inst.precedes[a][b] = 1;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (inst.precedes[a][b] && inst.precedes[b][a])
        fail(Errc::PreconditionViolated, "precedence order contains a cycle");

  inst.clique_of.assign(n, -1);
  for (const auto& group : clique_groups) {
    if (group.empty()) fail(Errc::MalformedSyntax, "empty clique");
    std::vector<int> members;
    for (int v : group) {
      if (v < 0 || v >= n)
        fail(Errc::UnknownElement, "clique member out of range");
      if (inst.clique_of[v] != -1)
        fail(Errc::PreconditionViolated,
             "element '" + inst.names[v] + "' appears in two cliques");
      inst.clique_of[v] = static_cast<int>(inst.cliques.size());
      members.push_back(v);
    }
    std::sort(members.begin(), members.end());
    inst.cliques.push_back(std::move(members));
  }
  for (int v = 0; v < n; ++v)
    if (inst.clique_of[v] == -1) {
      inst.clique_of[v] = static_cast<int>(inst.cliques.size());
      inst.cliques.push_back({v});
    }
  if (target != static_cast<int>(inst.cliques.size()))
    fail(Errc::PreconditionViolated,
         "target must equal the clique count (one pick per clique)");
  inst.target = target;
  inst.budget = budget;
  return inst;
}

// Text format: `elem name weight`, `order a b` (a precedes b),
// `clique a b ...`, `target l`, `budget b`.  '#' starts a comment.
inline WcfcsInstance parse_wcfcs(const std::string& text) {
  std::vector<std::string> names;
  std::vector<long long> weights;
  std::vector<std::pair<std::string, std::string>> order_names;
  std::vector<std::vector<std::string>> clique_names;
  std::optional<long long> target, budget;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = detail::tokenize(detail::strip_comment(line));
    if (tokens.empty()) continue;
    const std::string& head = tokens[0];
    if (head == "elem") {
      if (tokens.size() != 3)
        fail(Errc::MalformedSyntax, "expected 'elem name weight'");
      names.push_back(tokens[1]);
      weights.push_back(detail::parse_int(tokens[2]));
    } else if (head == "order") {
      if (tokens.size() != 3)
        fail(Errc::MalformedSyntax, "expected 'order a b'");
      order_names.emplace_back(tokens[1], tokens[2]);
    } else if (head == "clique") {
      if (tokens.size() < 2)
        fail(Errc::MalformedSyntax, "expected 'clique a b ...'");
      clique_names.emplace_back(tokens.begin() + 1, tokens.end());
    } else if (head == "target") {
      if (tokens.size() != 2 || target)
        fail(Errc::MalformedSyntax, "expected one 'target l' line");
      target = detail::parse_int(tokens[1]);
    } else if (head == "budget") {
      if (tokens.size() != 2 || budget)
        fail(Errc::MalformedSyntax, "expected one 'budget b' line");
      budget = detail::parse_int(tokens[1]);
    } else {
      fail(Errc::MalformedSyntax, "unknown directive '" + head + "'");
    }
  }
  if (!target) fail(Errc::MalformedSyntax, "missing 'target' line");
  if (!budget) fail(Errc::MalformedSyntax, "missing 'budget' line");

  auto resolve = [&](const std::string& name) {
    for (int i = 0; i < static_cast<int>(names.size()); ++i)
      if (names[i] == name) return i;
    fail(Errc::UnknownElement, "unknown element '" + name + "'");
  };
  std::vector<std::pair<int, int>> order;
  for (auto& [a, b] : order_names) order.emplace_back(resolve(a), resolve(b));
  std::vector<std::vector<int>> cliques;
  for (auto& group : clique_names) {
    std::vector<int> ids;
    for (auto& name : group) ids.push_back(resolve(name));
    cliques.push_back(std::move(ids));
  }
  return make_wcfcs(std::move(names), std::move(weights), order, cliques,
                    static_cast<int>(*target), *budget);
}

inline std::string serialize_wcfcs(const WcfcsInstance& inst) {
  std::ostringstream out;
  for (int p = 0; p < inst.size(); ++p)
    out << "elem " << inst.names[p] << ' ' << inst.weights[p] << '\n';
  for (int a = 0; a < inst.size(); ++a)
    for (int b = 0; b < inst.size(); ++b)
      if (inst.precedes[a][b]) out << "order " << inst.names[a] << ' ' << inst.names[b] << '\n';
  for (const auto& clique : inst.cliques) {
    if (clique.size() < 2) continue;
    out << "clique";
    for (int v : clique) out << ' ' << inst.names[v];
    out << '\n';
  }
  out << "target " << inst.target << '\n';
  out << "budget " << inst.budget << '\n';
  return out.str();
}

struct WcfcsStats {
  int rr2_firings = 0;  // oversized or orphaned up-set deletions
  int rr3_firings = 0;  // last-member clique takes
  int rr4_firings = 0;  // common-predecessor takes
  int max_depth = 0;    // branching depth only; bounded by the initial budget
  long long nodes = 0;
};

namespace detail {

// Search state over element statuses.  Taking an element pulls in its whole
// remaining up-set, pays for it once, marks the affected cliques satisfied,
// and discards the down-sets of their unchosen members.  A take fails when
// the closure needs a discarded element, overruns the budget, or lands two
// elements in one clique.
class WcfcsSearch {
 public:
  WcfcsSearch(const WcfcsInstance& inst, WcfcsStats& stats)
      : inst_(inst), stats_(stats) {
    int n = inst.size();
    up_.resize(n);
    down_.resize(n);
    for (int p = 0; p < n; ++p) {
      up_[p] = up_set(inst, p);
      down_[p] = down_set(inst, p);
    }
  }

  std::optional<std::vector<int>> run() {
    Frame root;
    root.status.assign(inst_.size(), kAvailable);
    root.satisfied.assign(inst_.cliques.size(), 0);
    root.b = inst_.budget;
    return search(std::move(root), 0);
  }

 private:
  static constexpr char kAvailable = 0, kTaken = 1, kDeleted = 2;

  struct Frame {
    std::vector<char> status;
    std::vector<char> satisfied;
    long long b = 0;
  };

  bool take(Frame& f, int p) {
    std::vector<int> newly;
    for (int q : up_[p]) {
      if (f.status[q] == kDeleted) return false;
      if (f.status[q] == kAvailable) newly.push_back(q);
    }
    for (int q : newly) {
      f.status[q] = kTaken;
      f.b -= inst_.weights[q];
    }
    if (f.b < 0) return false;
    for (int q : newly) {
      int clique = inst_.clique_of[q];
      if (f.satisfied[clique]) return false;
      f.satisfied[clique] = 1;
    }
    for (int q : newly)
      for (int m : inst_.cliques[inst_.clique_of[q]])
        if (f.status[m] == kAvailable) delete_down(f, m);
    return true;
  }

  void delete_down(Frame& f, int p) {
    for (int q : down_[p])
      if (f.status[q] == kAvailable) f.status[q] = kDeleted;
  }

  // Reduction rules to fixpoint; false means this state is a dead end.
  bool rules(Frame& f) {
    int n = inst_.size();
    for (bool changed = true; changed;) {
      changed = false;
      for (size_t clique = 0; clique < inst_.cliques.size(); ++clique) {
        if (f.satisfied[clique]) continue;
        bool alive = false;
        for (int m : inst_.cliques[clique]) alive |= f.status[m] == kAvailable;
        if (!alive) return false;
      }
      for (int p = 0; p < n && !changed; ++p) {
        if (f.status[p] != kAvailable) continue;
        long long need = 0;
        bool orphaned = false;
        for (int q : up_[p]) {
          if (f.status[q] == kDeleted) orphaned = true;
          if (f.status[q] == kAvailable) need += inst_.weights[q];
        }
        if (orphaned || need > f.b) {
          delete_down(f, p);
          ++stats_.rr2_firings;
          changed = true;
        }
      }
      if (changed) continue;
      for (size_t clique = 0; clique < inst_.cliques.size() && !changed; ++clique) {
        if (f.satisfied[clique]) continue;
        std::vector<int> members;
        for (int m : inst_.cliques[clique])
          if (f.status[m] == kAvailable) members.push_back(m);
        if (members.size() < 2) continue;
        for (int p = 0; p < n && !changed; ++p) {
          if (f.status[p] != kAvailable) continue;
          bool common = true;
          for (int m : members)
            common &= p == m || inst_.precedes[p][m];
          if (!common) continue;
          if (!take(f, p)) return false;
          ++stats_.rr4_firings;
          changed = true;
        }
      }
      if (changed) continue;
      for (size_t clique = 0; clique < inst_.cliques.size() && !changed; ++clique) {
        if (f.satisfied[clique]) continue;
        std::vector<int> members;
        for (int m : inst_.cliques[clique])
          if (f.status[m] == kAvailable) members.push_back(m);
        if (members.size() != 1) continue;
        if (!take(f, members[0])) return false;
        ++stats_.rr3_firings;
        changed = true;
      }
    }
    return true;
  }

  long long residual_weight(const Frame& f, int p) const {
    long long need = 0;
    for (int q : up_[p])
      if (f.status[q] == kAvailable) need += inst_.weights[q];
    return need;
  }

  std::optional<std::vector<int>> search(Frame f, int depth) {
    ++stats_.nodes;
    stats_.max_depth = std::max(stats_.max_depth, depth);
    if (f.b < 0) return std::nullopt;
    if (!rules(f)) return std::nullopt;

    // Pending cliques now have available members with residual weights in
    // [0, b]; cliques whose members all cost something must be branched on,
    // the rest can be finished greedily by their free members.
    int branch_clique = -1;
    std::pair<long long, int> branch_best{0, 0};  // (cheapest member, least id)
    int greedy_member = -1;
    bool any_pending = false;
    for (size_t clique = 0; clique < inst_.cliques.size(); ++clique) {
      if (f.satisfied[clique]) continue;
      any_pending = true;
      long long cheapest = -1;
      int least = -1;
      int free_member = -1;
      for (int m : inst_.cliques[clique]) {
        if (f.status[m] != kAvailable) continue;
        long long need = residual_weight(f, m);
        if (cheapest < 0 || need < cheapest) cheapest = need;
        if (least < 0) least = m;
        if (need == 0 && free_member < 0) free_member = m;
      }
      if (free_member >= 0) {
        if (greedy_member < 0) greedy_member = free_member;
      } else if (branch_clique < 0 ||
                 std::pair{cheapest, least} < branch_best) {
        branch_clique = static_cast<int>(clique);
        branch_best = {cheapest, least};
      }
    }
    if (!any_pending) {
      std::vector<int> chosen;
      for (int p = 0; p < inst_.size(); ++p)
        if (f.status[p] == kTaken) chosen.push_back(p);
      return chosen;
    }
    if (branch_clique >= 0) {
      for (int m : inst_.cliques[branch_clique]) {
        if (f.status[m] != kAvailable) continue;
        Frame child = f;
        if (!take(child, m)) continue;
        if (auto got = search(std::move(child), depth + 1)) return got;
      }
      return std::nullopt;
    }
    // Zero-cost takes satisfy their clique without touching the budget, so
    // the branching depth does not grow.
    if (!take(f, greedy_member)) return std::nullopt;
    return search(std::move(f), depth);
  }

  const WcfcsInstance& inst_;
  WcfcsStats& stats_;
  std::vector<std::vector<int>> up_, down_;
};

}  // namespace detail

// One element per clique, closed under precedence, total weight <= budget;
// nullopt when no such set exists.
inline std::optional<std::vector<int>> solve_wcfcs(const WcfcsInstance& inst,
                                                   WcfcsStats* stats = nullptr) {
  WcfcsStats local;
  detail::WcfcsSearch search(inst, stats ? *stats : local);
  return search.run();
}

}  // namespace rematch
