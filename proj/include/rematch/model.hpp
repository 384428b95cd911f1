#pragma once

// Core data model: agents, preference profiles (ties and incompleteness
// allowed), matchings, the three distance measures, stability checks, and
// the instance file format.
//
// All values are immutable after construction; operations are pure.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rematch {

using AgentId = int;

enum class Errc {
  MalformedSyntax,
  SelfRanking,
  NonMutualAcceptability,
  DuplicateEntry,
  M1NotStable,
  EmptyPreferenceList,
  InvalidMatching,
  AgentSetMismatch,
  TiesPresent,
  NotMarriage,
  RotationNotExposed,
  NotClosed,
  NotComplete,
  UnknownElement,
  PreconditionViolated,
  BudgetExhausted,
  TooLarge,
  HTooSmall,
  UnmatchedAgent,
  WorkLimitExceeded,
};

inline const char* errc_name(Errc k) {
  switch (k) {
    case Errc::MalformedSyntax: return "MalformedSyntax";
    case Errc::SelfRanking: return "SelfRanking";
    case Errc::NonMutualAcceptability: return "NonMutualAcceptability";
    case Errc::DuplicateEntry: return "DuplicateEntry";
    case Errc::M1NotStable: return "M1NotStable";
    case Errc::EmptyPreferenceList: return "EmptyPreferenceList";
    case Errc::InvalidMatching: return "InvalidMatching";
    case Errc::AgentSetMismatch: return "AgentSetMismatch";
    case Errc::TiesPresent: return "TiesPresent";
    case Errc::NotMarriage: return "NotMarriage";
    case Errc::RotationNotExposed: return "RotationNotExposed";
    case Errc::NotClosed: return "NotClosed";
    case Errc::NotComplete: return "NotComplete";
    case Errc::UnknownElement: return "UnknownElement";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::TooLarge: return "TooLarge";
    case Errc::HTooSmall: return "HTooSmall";
    case Errc::UnmatchedAgent: return "UnmatchedAgent";
    case Errc::WorkLimitExceeded: return "WorkLimitExceeded";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc kind, const std::string& msg)
      : std::runtime_error(std::string(errc_name(kind)) + ": " + msg),
        kind_(kind) {}
  Errc kind() const { return kind_; }

 private:
  Errc kind_;
};

[[noreturn]] inline void fail(Errc kind, const std::string& msg) {
  throw Error(kind, msg);
}

// Ordered tie groups; a list without ties has all groups singleton.
struct PreferenceList {
  std::vector<std::vector<AgentId>> groups;

  bool has_ties() const {
    for (const auto& g : groups)
      if (g.size() > 1) return true;
    return false;
  }
  std::vector<AgentId> flatten() const {
    std::vector<AgentId> out;
    for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
    return out;
  }
  bool operator==(const PreferenceList&) const = default;
};

enum class ProfileKind { Roommates, Marriage };

// Rank of an unacceptable partner; larger than any group index.
inline constexpr int kUnacceptable = std::numeric_limits<int>::max();

class PreferenceProfile {
 public:
  PreferenceProfile() = default;

  ProfileKind kind() const { return kind_; }
  int n() const { return static_cast<int>(names_.size()); }
  const std::string& name(AgentId a) const { return names_.at(a); }
  const std::vector<std::string>& names() const { return names_; }
  const PreferenceList& list(AgentId a) const { return lists_.at(a); }
  const std::vector<AgentId>& side_u() const { return side_u_; }
  const std::vector<AgentId>& side_w() const { return side_w_; }

  // Tie-group index of b in a's list, kUnacceptable if absent.
  int rank(AgentId a, AgentId b) const { return ranks_[a][b]; }
  bool accepts(AgentId a, AgentId b) const {
    return ranks_[a][b] != kUnacceptable;
  }
  // a strictly prefers b to c (c == -1 means unmatched, worse than anyone).
  bool prefers(AgentId a, AgentId b, AgentId c) const {
    int rb = ranks_[a][b];
    if (c < 0) return rb != kUnacceptable;
    return rb < ranks_[a][c];
  }

  bool has_ties() const {
    for (const auto& l : lists_)
      if (l.has_ties()) return true;
    return false;
  }

  // Edges {a,b} with a < b of the acceptability graph.
  std::vector<std::pair<AgentId, AgentId>> acceptable_edges() const {
    std::vector<std::pair<AgentId, AgentId>> out;
    for (AgentId a = 0; a < n(); ++a)
      for (const auto& g : lists_[a].groups)
        for (AgentId b : g)
          if (a < b) out.emplace_back(a, b);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::optional<AgentId> find_agent(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const PreferenceProfile& o) const {
    return kind_ == o.kind_ && names_ == o.names_ && lists_ == o.lists_ &&
           side_u_ == o.side_u_ && side_w_ == o.side_w_;
  }

  friend PreferenceProfile make_profile(ProfileKind, std::vector<std::string>,
                                        std::vector<PreferenceList>,
                                        std::vector<AgentId>,
                                        std::vector<AgentId>);

 private:
  ProfileKind kind_ = ProfileKind::Roommates;
  std::vector<std::string> names_;
  std::vector<PreferenceList> lists_;
  std::vector<AgentId> side_u_, side_w_;
  std::vector<std::vector<int>> ranks_;
  std::map<std::string, AgentId> by_name_;
};

// Validates: unique whitespace-free names, no self-ranking, no duplicate list
// entries, mutual acceptability, no empty lists, marriage side constraints.
inline PreferenceProfile make_profile(ProfileKind kind,
                                      std::vector<std::string> names,
                                      std::vector<PreferenceList> lists,
                                      std::vector<AgentId> side_u = {},
                                      std::vector<AgentId> side_w = {}) {
  PreferenceProfile p;
  int n = static_cast<int>(names.size());
  if (static_cast<int>(lists.size()) != n)
    fail(Errc::MalformedSyntax, "one preference list per agent required");
  for (int a = 0; a < n; ++a) {
    if (names[a].empty() ||
        names[a].find_first_of(" \t\r\n") != std::string::npos)
      fail(Errc::MalformedSyntax, "bad agent name '" + names[a] + "'");
    if (!p.by_name_.emplace(names[a], a).second)
      fail(Errc::DuplicateEntry, "duplicate agent name '" + names[a] + "'");
  }

  // Tie groups are unordered; canonicalize member order so equality and
  // serialization agree.
  for (auto& l : lists)
    for (auto& g : l.groups) std::sort(g.begin(), g.end());

  p.ranks_.assign(n, std::vector<int>(n, kUnacceptable));
  for (AgentId a = 0; a < n; ++a) {
    const auto& l = lists[a];
    if (l.flatten().empty())
      fail(Errc::EmptyPreferenceList, "agent '" + names[a] + "' lists no one");
    for (int g = 0; g < static_cast<int>(l.groups.size()); ++g) {
      if (l.groups[g].empty())
        fail(Errc::MalformedSyntax, "empty tie group");
      for (AgentId b : l.groups[g]) {
        if (b < 0 || b >= n) fail(Errc::MalformedSyntax, "agent id range");
        if (b == a)
          fail(Errc::SelfRanking, "agent '" + names[a] + "' ranks itself");
        if (p.ranks_[a][b] != kUnacceptable)
          fail(Errc::DuplicateEntry,
               "agent '" + names[a] + "' lists '" + names[b] + "' twice");
        p.ranks_[a][b] = g;
      }
    }
  }
  for (AgentId a = 0; a < n; ++a)
    for (AgentId b = 0; b < n; ++b)
      if ((p.ranks_[a][b] != kUnacceptable) !=
          (p.ranks_[b][a] != kUnacceptable))
        fail(Errc::NonMutualAcceptability,
             "'" + names[a] + "' and '" + names[b] +
                 "' disagree on acceptability");

  if (kind == ProfileKind::Marriage) {
    if (side_u.empty() || side_w.empty())
      fail(Errc::MalformedSyntax, "marriage kind requires both sides");
    if (side_u.size() != side_w.size())
      fail(Errc::MalformedSyntax, "marriage sides must have equal size");
    std::vector<int> side(n, -1);
    for (AgentId a : side_u) side.at(a) = 0;
    for (AgentId a : side_w) {
      if (side.at(a) == 0)
        fail(Errc::MalformedSyntax, "agent on both sides");
      side[a] = 1;
    }
    for (AgentId a = 0; a < n; ++a)
      if (side[a] < 0) fail(Errc::MalformedSyntax, "agent on neither side");
    for (AgentId a = 0; a < n; ++a)
      for (AgentId b : lists[a].flatten())
        if (side[a] == side[b])
          fail(Errc::MalformedSyntax,
               "preference within one side: '" + names[a] + "' lists '" +
                   names[b] + "'");
  } else if (!side_u.empty() || !side_w.empty()) {
    fail(Errc::MalformedSyntax, "sides given for roommates kind");
  }

  p.kind_ = kind;
  p.names_ = std::move(names);
  p.lists_ = std::move(lists);
  p.side_u_ = std::move(side_u);
  p.side_w_ = std::move(side_w);
  return p;
}

// Disjoint unordered pairs, stored canonically (a < b, sorted).
struct Matching {
  std::vector<std::pair<AgentId, AgentId>> pairs;

  static Matching from_pairs(std::vector<std::pair<AgentId, AgentId>> raw) {
    Matching m;
    std::set<AgentId> seen;
    for (auto [a, b] : raw) {
      if (a == b) fail(Errc::InvalidMatching, "agent paired with itself");
      if (!seen.insert(a).second || !seen.insert(b).second)
        fail(Errc::InvalidMatching, "agent matched twice");
      m.pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(m.pairs.begin(), m.pairs.end());
    return m;
  }

  int size() const { return static_cast<int>(pairs.size()); }

  // partner_of[a] == -1 when a is unmatched.
  std::vector<AgentId> partners(int n) const {
    std::vector<AgentId> p(n, -1);
    for (auto [a, b] : pairs) {
      p.at(a) = b;
      p.at(b) = a;
    }
    return p;
  }

  bool contains(AgentId a, AgentId b) const {
    auto pr = std::minmax(a, b);
    return std::binary_search(pairs.begin(), pairs.end(),
                              std::make_pair(pr.first, pr.second));
  }

  bool operator==(const Matching&) const = default;
  bool operator<(const Matching& o) const { return pairs < o.pairs; }
};

struct IncrementalInstance {
  PreferenceProfile profile1;
  PreferenceProfile profile2;
  Matching matching1;
  long long k = 0;
};

// All acceptable pairs {x,y} outside m where each side is unmatched or
// strictly prefers the other to its partner; empty result == weakly stable.
inline std::vector<std::pair<AgentId, AgentId>> blocking_pairs(
    const PreferenceProfile& profile, const Matching& m) {
  for (auto [a, b] : m.pairs)
    if (a < 0 || b >= profile.n())
      fail(Errc::InvalidMatching, "matched agent id out of range");
  for (auto [a, b] : m.pairs)
    if (!profile.accepts(a, b))
      fail(Errc::InvalidMatching, "matched pair '" + profile.name(a) + " " +
                                      profile.name(b) + "' is not acceptable");
  auto partner = m.partners(profile.n());
  std::vector<std::pair<AgentId, AgentId>> out;
  for (auto [x, y] : profile.acceptable_edges()) {
    if (partner[x] == y) continue;
    if (profile.prefers(x, y, partner[x]) && profile.prefers(y, x, partner[y]))
      out.emplace_back(x, y);
  }
  return out;
}

inline bool is_stable(const PreferenceProfile& profile, const Matching& m) {
  return blocking_pairs(profile, m).empty();
}

// Swap distance between two lists: the number of unordered pairs {x,y} whose
// relation (x above y / y above x / tied) differs between the lists, or
// infinity (nullopt) when the lists cover different sets.  Equivalent to the
// ordered-disagreement count plus the count of pairs tied in exactly the
// first list, and symmetric.
inline std::optional<long long> swap_distance(const PreferenceList& l1,
                                              const PreferenceList& l2) {
  auto f1 = l1.flatten(), f2 = l2.flatten();
  std::set<AgentId> s1(f1.begin(), f1.end()), s2(f2.begin(), f2.end());
  if (s1 != s2) return std::nullopt;

  std::map<AgentId, int> r1, r2;
  for (int g = 0; g < static_cast<int>(l1.groups.size()); ++g)
    for (AgentId a : l1.groups[g]) r1[a] = g;
  for (int g = 0; g < static_cast<int>(l2.groups.size()); ++g)
    for (AgentId a : l2.groups[g]) r2[a] = g;

  auto rel = [](int rx, int ry) { return rx < ry ? -1 : (rx > ry ? 1 : 0); };
  long long d = 0;
  for (auto itx = s1.begin(); itx != s1.end(); ++itx)
    for (auto ity = std::next(itx); ity != s1.end(); ++ity)
      if (rel(r1[*itx], r1[*ity]) != rel(r2[*itx], r2[*ity])) ++d;
  return d;
}

inline std::optional<long long> profile_swap_distance(
    const PreferenceProfile& p1, const PreferenceProfile& p2) {
  if (p1.names() != p2.names())
    fail(Errc::AgentSetMismatch, "profiles cover different agent sets");
  long long total = 0;
  for (AgentId a = 0; a < p1.n(); ++a) {
    auto d = swap_distance(p1.list(a), p2.list(a));
    if (!d) return std::nullopt;
    total += *d;
  }
  return total;
}

inline long long matching_distance(const Matching& m1, const Matching& m2) {
  long long common = 0;
  for (const auto& pr : m1.pairs)
    if (std::binary_search(m2.pairs.begin(), m2.pairs.end(), pr)) ++common;
  return (m1.size() - common) + (m2.size() - common);
}

// --- instance file format ----------------------------------------------
//
//   kind roommates            (or: kind marriage)
//   agents 8
//   sideU 1 2 3 4             (marriage only)
//   sideW 5 6 7 8
//   k 4
//   [profile1]
//   1: 7 2 6 8 5 3 4          (ties parenthesized:  1: (7 2) 6)
//   [profile2]
//   ...
//   [matching1]
//   1 7
//
// '#' starts a comment; blank lines are skipped.  Roommates agent ids follow
// first appearance as a list owner in [profile1]; marriage ids follow the
// sideU line then the sideW line.

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

inline long long parse_int(const std::string& tok) {
  try {
    size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(Errc::MalformedSyntax, "expected an integer, got '" + tok + "'");
  }
}

// "7 (2 6) 8" -> groups {7},{2,6},{8}; names resolved via the callback.
template <typename Resolve>
PreferenceList parse_pref_groups(const std::vector<std::string>& toks,
                                 Resolve resolve) {
  PreferenceList list;
  bool in_tie = false;
  for (std::string tok : toks) {
    bool opens = false, closes = false;
    if (tok.starts_with("(")) {
      opens = true;
      tok = tok.substr(1);
    }
    if (tok.ends_with(")")) {
      closes = true;
      tok = tok.substr(0, tok.size() - 1);
    }
    if (opens) {
      if (in_tie) fail(Errc::MalformedSyntax, "nested tie group");
      in_tie = true;
      list.groups.emplace_back();
    }
    if (tok.empty()) fail(Errc::MalformedSyntax, "empty preference token");
    if (!in_tie) list.groups.emplace_back();
    list.groups.back().push_back(resolve(tok));
    if (closes) {
      if (!in_tie) fail(Errc::MalformedSyntax, "unmatched ')'");
      in_tie = false;
    }
  }
  if (in_tie) fail(Errc::MalformedSyntax, "unclosed tie group");
  return list;
}

}  // namespace detail

inline IncrementalInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string rawline;

  ProfileKind kind = ProfileKind::Roommates;
  bool kind_seen = false;
  int agents = -1;
  long long k = -1;
  std::vector<std::string> side_u_names, side_w_names;

  // section -> owner name -> raw preference tokens
  std::vector<std::pair<std::string, std::vector<std::string>>> prof_lines[2];
  std::vector<std::pair<std::string, std::string>> matching_lines;
  int section = 0;  // 0 header, 1 profile1, 2 profile2, 3 matching1

  while (std::getline(in, rawline)) {
    auto toks = detail::tokenize(detail::strip_comment(rawline));
    if (toks.empty()) continue;
    if (toks[0] == "[profile1]" || toks[0] == "[profile2]" ||
        toks[0] == "[matching1]") {
      if (toks.size() != 1) fail(Errc::MalformedSyntax, "tokens after section");
      int next = toks[0] == "[profile1]" ? 1 : toks[0] == "[profile2]" ? 2 : 3;
      if (next <= section)
        fail(Errc::MalformedSyntax, "section " + toks[0] + " out of order");
      section = next;
      continue;
    }
    switch (section) {
      case 0: {
        if (toks[0] == "kind" && toks.size() == 2) {
          if (toks[1] == "roommates") kind = ProfileKind::Roommates;
          else if (toks[1] == "marriage") kind = ProfileKind::Marriage;
          else fail(Errc::MalformedSyntax, "unknown kind '" + toks[1] + "'");
          kind_seen = true;
        } else if (toks[0] == "agents" && toks.size() == 2) {
          agents = detail::parse_int(toks[1]);
        } else if (toks[0] == "k" && toks.size() == 2) {
          k = detail::parse_int(toks[1]);
        } else if (toks[0] == "sideU") {
          side_u_names.assign(toks.begin() + 1, toks.end());
        } else if (toks[0] == "sideW") {
          side_w_names.assign(toks.begin() + 1, toks.end());
        } else {
          fail(Errc::MalformedSyntax, "unrecognized header line: " + rawline);
        }
        break;
      }
      case 1:
      case 2: {
        if (toks[0].size() < 2 || !toks[0].ends_with(":"))
          fail(Errc::MalformedSyntax, "expected 'agent:' in " + rawline);
        std::string owner = toks[0].substr(0, toks[0].size() - 1);
        prof_lines[section - 1].emplace_back(
            owner, std::vector<std::string>(toks.begin() + 1, toks.end()));
        break;
      }
      case 3: {
        if (toks.size() != 2)
          fail(Errc::MalformedSyntax, "matching line needs two agents");
        matching_lines.emplace_back(toks[0], toks[1]);
        break;
      }
    }
  }

  if (!kind_seen) fail(Errc::MalformedSyntax, "missing 'kind' line");
  if (agents < 0) fail(Errc::MalformedSyntax, "missing 'agents' line");
  if (k < 0) fail(Errc::MalformedSyntax, "missing or negative 'k'");
  if (section < 3) fail(Errc::MalformedSyntax, "missing sections");

  // Agent table.
  std::vector<std::string> names;
  std::map<std::string, AgentId> ids;
  auto add_agent = [&](const std::string& nm) {
    if (!ids.emplace(nm, static_cast<AgentId>(names.size())).second)
      fail(Errc::DuplicateEntry, "agent '" + nm + "' declared twice");
    names.push_back(nm);
  };
  std::vector<AgentId> side_u, side_w;
  if (kind == ProfileKind::Marriage) {
    for (const auto& nm : side_u_names) add_agent(nm);
    for (const auto& nm : side_w_names) add_agent(nm);
    for (AgentId a = 0; a < static_cast<AgentId>(side_u_names.size()); ++a)
      side_u.push_back(a);
    for (AgentId a = static_cast<AgentId>(side_u_names.size());
         a < static_cast<AgentId>(names.size()); ++a)
      side_w.push_back(a);
  } else {
    if (!side_u_names.empty() || !side_w_names.empty())
      fail(Errc::MalformedSyntax, "sideU/sideW are for marriage kind");
    for (const auto& [owner, toks] : prof_lines[0]) {
      if (!ids.count(owner)) add_agent(owner);
      (void)toks;
    }
  }
  if (static_cast<int>(names.size()) != agents)
    fail(Errc::MalformedSyntax,
         "agents " + std::to_string(agents) + " but found " +
             std::to_string(names.size()));

  auto resolve = [&](const std::string& nm) -> AgentId {
    auto it = ids.find(nm);
    if (it == ids.end())
      fail(Errc::MalformedSyntax, "unknown agent '" + nm + "'");
    return it->second;
  };

  auto build_lists = [&](int which) {
    std::vector<PreferenceList> lists(names.size());
    std::vector<bool> seen(names.size(), false);
    for (const auto& [owner, toks] : prof_lines[which]) {
      AgentId a = resolve(owner);
      if (seen[a])
        fail(Errc::DuplicateEntry, "two lists for agent '" + owner + "'");
      seen[a] = true;
      lists[a] = detail::parse_pref_groups(toks, resolve);
    }
    for (AgentId a = 0; a < static_cast<AgentId>(names.size()); ++a)
      if (!seen[a])
        fail(Errc::EmptyPreferenceList, "no list for agent '" + names[a] + "'");
    return lists;
  };

  IncrementalInstance inst;
  inst.profile1 =
      make_profile(kind, names, build_lists(0), side_u, side_w);
  inst.profile2 =
      make_profile(kind, names, build_lists(1), side_u, side_w);
  inst.k = k;

  std::vector<std::pair<AgentId, AgentId>> mpairs;
  for (const auto& [a, b] : matching_lines)
    mpairs.emplace_back(resolve(a), resolve(b));
  inst.matching1 = Matching::from_pairs(mpairs);

  auto blocks = blocking_pairs(inst.profile1, inst.matching1);
  if (!blocks.empty())
    fail(Errc::M1NotStable,
         "matching1 is blocked in profile1 by {" +
             inst.profile1.name(blocks[0].first) + "," +
             inst.profile1.name(blocks[0].second) + "}");
  return inst;
}

// Pairs ordered by smaller display name, smaller name first in each pair.
inline std::string format_matching(const PreferenceProfile& p,
                                   const Matching& m) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (auto [a, b] : m.pairs) {
    std::string na = p.name(a), nb = p.name(b);
    if (nb < na) std::swap(na, nb);
    rows.emplace_back(na, nb);
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const auto& [a, b] : rows) out += a + " " + b + "\n";
  return out;
}

inline std::string serialize_profile_lists(const PreferenceProfile& p) {
  std::string out;
  for (AgentId a = 0; a < p.n(); ++a) {
    out += p.name(a) + ":";
    for (const auto& g : p.list(a).groups) {
      auto sorted = g;
      std::sort(sorted.begin(), sorted.end());
      if (sorted.size() == 1) {
        out += " " + p.name(sorted[0]);
      } else {
        out += " (";
        for (size_t i = 0; i < sorted.size(); ++i)
          out += (i ? " " : "") + p.name(sorted[i]);
        out += ")";
      }
    }
    out += "\n";
  }
  return out;
}

// Canonical form: agents by id, tie-group members ascending; parse of the
// output reproduces the instance exactly.
inline std::string serialize_instance(const IncrementalInstance& inst) {
  const auto& p = inst.profile1;
  std::string out;
  out += std::string("kind ") +
         (p.kind() == ProfileKind::Marriage ? "marriage" : "roommates") + "\n";
  out += "agents " + std::to_string(p.n()) + "\n";
  if (p.kind() == ProfileKind::Marriage) {
    out += "sideU";
    for (AgentId a : p.side_u()) out += " " + p.name(a);
    out += "\nsideW";
    for (AgentId a : p.side_w()) out += " " + p.name(a);
    out += "\n";
  }
  out += "k " + std::to_string(inst.k) + "\n";
  out += "[profile1]\n" + serialize_profile_lists(inst.profile1);
  out += "[profile2]\n" + serialize_profile_lists(inst.profile2);
  out += "[matching1]\n" + format_matching(p, inst.matching1);
  return out;
}

}  // namespace rematch
