#pragma once

// Generators that turn graph problems into incremental matching instances.
// Each construction fixes an old profile, a matching stable for it, a new
// profile a prescribed swap distance away, and a budget k such that the
// instance is a yes-instance exactly when the source graph question is.
// The graph oracles decide the source question independently, which is what
// the round-trip tests compare against.

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rematch/model.hpp"
#include "rematch/oracle.hpp"

namespace rematch {

// Independent set under one extra edge: s_star is an independent set of
// size h in g minus e_star; asked is whether g itself has one of size h.
struct EiisInstance {
  SimpleGraph g;
  std::pair<int, int> e_star{-1, -1};  // canonical a < b, an edge of g
  int h = 0;
  std::vector<int> s_star;  // sorted vertex ids
};

// Clique with pendant edges under one edge deletion: s_star is a size-h
// clique of g whose members all have a neighbor outside it; asked is whether
// g minus e_star still has such a clique of size h.
struct EdcpeInstance {
  SimpleGraph g;
  std::pair<int, int> e_star{-1, -1};
  int h = 0;
  std::vector<int> s_star;
};

inline SimpleGraph minus_edge(const SimpleGraph& g, std::pair<int, int> e) {
  std::pair<int, int> key{std::min(e.first, e.second),
                          std::max(e.first, e.second)};
  auto edges = g.edges;
  edges.erase(std::remove(edges.begin(), edges.end(), key), edges.end());
  return make_graph(g.names, std::move(edges));
}

namespace detail {

inline void check_witness_ids(const SimpleGraph& g, const std::vector<int>& s,
                              int h) {
  if (h < 1 || static_cast<int>(s.size()) != h)
    fail(Errc::PreconditionViolated, "witness size must equal h");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= g.n())
      fail(Errc::PreconditionViolated, "witness vertex out of range");
    if (i > 0 && s[i - 1] >= s[i])
      fail(Errc::PreconditionViolated, "witness must be sorted and distinct");
  }
}

inline void check_marked_edge(const SimpleGraph& g, std::pair<int, int> e) {
  if (e.first >= e.second || !g.has_edge(e.first, e.second))
    fail(Errc::PreconditionViolated,
         "marked edge must be a canonical edge of the graph");
}

}  // namespace detail

inline void validate_eiis(const EiisInstance& e) {
  detail::check_witness_ids(e.g, e.s_star, e.h);
  detail::check_marked_edge(e.g, e.e_star);
  for (std::size_t i = 0; i < e.s_star.size(); ++i)
    for (std::size_t j = i + 1; j < e.s_star.size(); ++j) {
      std::pair<int, int> pr{e.s_star[i], e.s_star[j]};
      if (pr != e.e_star && e.g.has_edge(pr.first, pr.second))
        fail(Errc::PreconditionViolated,
             "witness must be independent once the marked edge is dropped");
    }
}

inline void validate_edcpe(const EdcpeInstance& e) {
  detail::check_witness_ids(e.g, e.s_star, e.h);
  detail::check_marked_edge(e.g, e.e_star);
  std::vector<char> inside(e.g.n(), 0);
  for (int v : e.s_star) inside[v] = 1;
  for (std::size_t i = 0; i < e.s_star.size(); ++i)
    for (std::size_t j = i + 1; j < e.s_star.size(); ++j)
      if (!e.g.has_edge(e.s_star[i], e.s_star[j]))
        fail(Errc::PreconditionViolated, "witness must be a clique");
  for (int v : e.s_star) {
    bool outside = false;
    for (auto [a, b] : e.g.edges) {
      int other = a == v ? b : (b == v ? a : -1);
      if (other >= 0 && !inside[other]) outside = true;
    }
    if (!outside)
      fail(Errc::PreconditionViolated,
           "every clique member needs a neighbor outside the clique");
  }
}

inline EiisInstance make_eiis(SimpleGraph g, std::pair<int, int> e_star, int h,
                              std::vector<int> s_star) {
  std::sort(s_star.begin(), s_star.end());
  EiisInstance out{std::move(g), std::minmax(e_star.first, e_star.second), h,
                   std::move(s_star)};
  validate_eiis(out);
  return out;
}

inline EdcpeInstance make_edcpe(SimpleGraph g, std::pair<int, int> e_star,
                                int h, std::vector<int> s_star) {
  std::sort(s_star.begin(), s_star.end());
  EdcpeInstance out{std::move(g), std::minmax(e_star.first, e_star.second), h,
                    std::move(s_star)};
  validate_edcpe(out);
  return out;
}

inline bool eiis_is_yes(const EiisInstance& e, int max_vertices = 16) {
  return max_independent_set(e.g, e.h, max_vertices);
}

inline bool edcpe_is_yes(const EdcpeInstance& e, int max_vertices = 16) {
  return has_clique_with_pendant_edges(minus_edge(e.g, e.e_star), e.h,
                                       max_vertices);
}

// ---------------------------------------------------------------------------
// Text form: the plain graph format plus three directive lines.
//
//   estar <name> <name>
//   h <N>
//   sstar <name> <name> ...

namespace detail {

struct MarkedGraph {
  SimpleGraph g;
  std::pair<int, int> e_star{-1, -1};
  int h = -1;
  std::vector<int> s_star;
  bool have_estar = false, have_h = false, have_sstar = false;
};

inline MarkedGraph parse_marked_graph(const std::string& text) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  std::pair<std::string, std::string> estar;
  std::vector<std::string> sstar;
  MarkedGraph out;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "v") {
      std::string nm;
      if (!(ls >> nm)) fail(Errc::MalformedSyntax, "v line needs a name");
      names.push_back(nm);
    } else if (head == "e" || head == "estar") {
      std::string a, b;
      if (!(ls >> a >> b))
        fail(Errc::MalformedSyntax, head + " line needs two names");
      if (head == "e")
        edges.emplace_back(a, b);
      else
        estar = {a, b}, out.have_estar = true;
    } else if (head == "h") {
      if (!(ls >> out.h)) fail(Errc::MalformedSyntax, "h line needs a number");
      out.have_h = true;
    } else if (head == "sstar") {
      std::string nm;
      while (ls >> nm) sstar.push_back(nm);
      out.have_sstar = true;
    } else {
      fail(Errc::MalformedSyntax, "unknown directive '" + head + "'");
    }
  }

  SimpleGraph tmp;
  tmp.names = names;
  auto id = [&](const std::string& nm) {
    auto v = tmp.find_vertex(nm);
    if (!v) fail(Errc::UnknownElement, "unknown vertex '" + nm + "'");
    return *v;
  };
  std::vector<std::pair<int, int>> eidx;
  for (auto& [a, b] : edges) eidx.emplace_back(id(a), id(b));
  out.g = make_graph(std::move(names), std::move(eidx));
  if (out.have_estar)
    out.e_star = std::minmax(id(estar.first), id(estar.second));
  for (auto& nm : sstar) out.s_star.push_back(id(nm));
  std::sort(out.s_star.begin(), out.s_star.end());
  return out;
}

inline std::string serialize_marked_graph(const SimpleGraph& g,
                                          std::pair<int, int> e_star, int h,
                                          const std::vector<int>& s_star) {
  std::string out = serialize_graph(g);
  out += "estar " + g.names[e_star.first] + " " + g.names[e_star.second] + "\n";
  out += "h " + std::to_string(h) + "\n";
  out += "sstar";
  for (int v : s_star) out += " " + g.names[v];
  out += "\n";
  return out;
}

inline std::string fresh_name(std::set<std::string>& used, std::string base) {
  while (used.count(base)) base.insert(base.begin(), '_');
  used.insert(base);
  return base;
}

// Extends a ranking into a complete list: every agent not yet ranked is
// appended strictly in ascending id order.
inline void append_remaining(PreferenceList& l, AgentId self, int n) {
  std::vector<char> seen(n, 0);
  seen[self] = 1;
  for (const auto& grp : l.groups)
    for (AgentId a : grp) seen[a] = 1;
  for (AgentId a = 0; a < n; ++a)
    if (!seen[a]) l.groups.push_back({a});
}

}  // namespace detail

inline EiisInstance parse_eiis(const std::string& text) {
  auto mg = detail::parse_marked_graph(text);
  if (!mg.have_estar || !mg.have_h || !mg.have_sstar)
    fail(Errc::MalformedSyntax, "estar, h and sstar lines are all required");
  EiisInstance e{std::move(mg.g), mg.e_star, mg.h, std::move(mg.s_star)};
  validate_eiis(e);
  return e;
}

inline std::string serialize_eiis(const EiisInstance& e) {
  return detail::serialize_marked_graph(e.g, e.e_star, e.h, e.s_star);
}

inline EdcpeInstance parse_edcpe(const std::string& text) {
  auto mg = detail::parse_marked_graph(text);
  if (!mg.have_estar || !mg.have_h || !mg.have_sstar)
    fail(Errc::MalformedSyntax, "estar, h and sstar lines are all required");
  EdcpeInstance e{std::move(mg.g), mg.e_star, mg.h, std::move(mg.s_star)};
  validate_edcpe(e);
  return e;
}

inline std::string serialize_edcpe(const EdcpeInstance& e) {
  return detail::serialize_marked_graph(e.g, e.e_star, e.h, e.s_star);
}

// ---------------------------------------------------------------------------
// Graph-to-graph steps.

// Adds h new vertices joined to every original vertex plus one edge between
// the last two of them.  The new vertices are independent once that edge is
// dropped, and no independent set of size h >= 2 in the grown graph can use
// them (pairwise they only miss edges inside the new block, which caps such
// sets at h-1), so the question reduces to g itself.
inline EiisInstance gen_eiis(const SimpleGraph& g, int h) {
  if (h < 2) fail(Errc::PreconditionViolated, "need h >= 2");
  int n = g.n();
  std::set<std::string> used(g.names.begin(), g.names.end());
  std::vector<std::string> names = g.names;
  for (int i = 0; i < h; ++i)
    names.push_back(detail::fresh_name(used, "s" + std::to_string(i + 1)));
  auto edges = g.edges;
  for (int v = 0; v < n; ++v)
    for (int s = 0; s < h; ++s) edges.emplace_back(v, n + s);
  edges.emplace_back(n + h - 2, n + h - 1);
  EiisInstance out;
  out.g = make_graph(std::move(names), std::move(edges));
  out.e_star = {n + h - 2, n + h - 1};
  out.h = h;
  for (int s = 0; s < h; ++s) out.s_star.push_back(n + s);
  validate_eiis(out);
  return out;
}

// Complements the graph (with the marked edge put back) and hangs a pendant
// vertex off every original vertex: independent sets become cliques whose
// members keep an outside neighbor.  Pendants have degree one, so for h > 2
// no size-h clique can use one and the correspondence is exact.
inline EdcpeInstance gen_edcpe(const EiisInstance& e) {
  validate_eiis(e);
  if (e.h <= 2)
    fail(Errc::HTooSmall, "pendant vertices could join cliques of size <= 2");
  int n = e.g.n();
  std::set<std::string> used(e.g.names.begin(), e.g.names.end());
  std::vector<std::string> names = e.g.names;
  for (int v = 0; v < n; ++v)
    names.push_back(detail::fresh_name(used, e.g.names[v] + "p"));
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!e.g.has_edge(a, b) || std::make_pair(a, b) == e.e_star)
        edges.emplace_back(a, b);
  for (int v = 0; v < n; ++v) edges.emplace_back(v, n + v);
  EdcpeInstance out;
  out.g = make_graph(std::move(names), std::move(edges));
  out.e_star = e.e_star;
  out.h = e.h;
  out.s_star = e.s_star;
  validate_edcpe(out);
  return out;
}

// ---------------------------------------------------------------------------
// Roommates without ties, permissive budget.

// Vertex i becomes four agents p_i, pb_i, q_i, qb_i.  Under the new profile
// a stable matching can hold {p_i, qb_i} only for an independent set of
// vertices (adjacent p's would block each other), while the old profile
// ranks qb_i ahead of the neighbor block, so keeping every {p_i, qb_i} and
// {pb_i, q_i} is stable before the change.  The budget covers any rematch.
inline IncrementalInstance gen_isr_noties_feder(const SimpleGraph& g) {
  int n = g.n();
  auto P = [](int i) { return 4 * i; };
  auto Pb = [](int i) { return 4 * i + 1; };
  auto Q = [](int i) { return 4 * i + 2; };
  auto Qb = [](int i) { return 4 * i + 3; };
  std::vector<std::string> names(4 * n);
  for (int i = 0; i < n; ++i) {
    std::string suf = std::to_string(i + 1);
    names[P(i)] = "p" + suf;
    names[Pb(i)] = "pb" + suf;
    names[Q(i)] = "q" + suf;
    names[Qb(i)] = "qb" + suf;
  }
  std::vector<std::vector<int>> nbr(n);
  for (auto [a, b] : g.edges) {
    nbr[a].push_back(b);
    nbr[b].push_back(a);
  }
  for (auto& v : nbr) std::sort(v.begin(), v.end());

  auto build = [&](bool old_profile) {
    std::vector<PreferenceList> ls(4 * n);
    for (int i = 0; i < n; ++i) {
      PreferenceList pi;
      pi.groups.push_back({Pb(i)});
      if (old_profile) pi.groups.push_back({Qb(i)});
      for (int j : nbr[i]) pi.groups.push_back({P(j)});
      if (!old_profile) pi.groups.push_back({Qb(i)});
      ls[P(i)] = std::move(pi);
      ls[Pb(i)].groups = {{Q(i)}, {P(i)}};
      ls[Q(i)].groups = {{Qb(i)}, {Pb(i)}};
      ls[Qb(i)].groups = {{P(i)}, {Q(i)}};
    }
    return ls;
  };
  auto p1 = make_profile(ProfileKind::Roommates, names, build(true));
  auto p2 = make_profile(ProfileKind::Roommates, names, build(false));
  std::vector<std::pair<AgentId, AgentId>> m1;
  for (int i = 0; i < n; ++i) {
    m1.emplace_back(P(i), Qb(i));
    m1.emplace_back(Pb(i), Q(i));
  }
  return {std::move(p1), std::move(p2), Matching::from_pairs(std::move(m1)),
          8LL * n};
}

// ---------------------------------------------------------------------------
// Roommates with ties, complete lists, swap distance 1, budget 4h.

// Cover agents c_1..c_{r-h} absorb all but h vertices; each triple
// (y_i, z_i, x_i) forces x_i onto a vertex in every stable matching, and the
// vertices taken by the x's must be pairwise nonadjacent, so the new profile
// has a stable matching at all (equivalently: within 4h of the old one) iff
// the graph has an independent set of size h.  The old and new profiles
// differ by one adjacent transposition in the last vertex's list; dropping
// the marked edge's other endpoint below x_1 is what lets the old matching
// be stable.  Requires the witness to be the last h vertices with the marked
// edge inside it; the two marked endpoints are rotated to the last two slots.
inline IncrementalInstance gen_isr_oneswap_complete(const EiisInstance& e) {
  validate_eiis(e);
  int r = e.g.n(), h = e.h;
  if (h >= r) fail(Errc::PreconditionViolated, "need h < |V|");
  for (int i = 0; i < h; ++i)
    if (e.s_star[i] != r - h + i)
      fail(Errc::PreconditionViolated, "witness must be the last h vertices");
  if (e.e_star.first < r - h)
    fail(Errc::PreconditionViolated, "marked edge must join witness vertices");

  std::vector<int> order(r);
  std::iota(order.begin(), order.end(), 0);
  auto move_to = [&](int vertex, int pos) {
    auto it = std::find(order.begin(), order.end(), vertex);
    std::swap(*it, order[pos]);
  };
  move_to(e.e_star.first, r - 2);
  move_to(e.e_star.second, r - 1);
  auto adj = [&](int i, int j) { return e.g.has_edge(order[i], order[j]); };

  int N = 2 * r + 2 * h;
  auto Y = [](int i) { return 3 * i; };
  auto Z = [](int i) { return 3 * i + 1; };
  auto X = [](int i) { return 3 * i + 2; };
  auto C = [&](int j) { return 3 * h + j; };
  auto V = [&](int i) { return 3 * h + (r - h) + i; };

  std::vector<std::string> names(N);
  std::set<std::string> used;
  for (int i = 0; i < h; ++i) {
    std::string suf = std::to_string(i + 1);
    names[Y(i)] = detail::fresh_name(used, "y" + suf);
    names[Z(i)] = detail::fresh_name(used, "z" + suf);
    names[X(i)] = detail::fresh_name(used, "x" + suf);
  }
  for (int j = 0; j < r - h; ++j)
    names[C(j)] = detail::fresh_name(used, "c" + std::to_string(j + 1));
  for (int i = 0; i < r; ++i)
    names[V(i)] = detail::fresh_name(used, e.g.names[order[i]]);

  std::vector<AgentId> all_v(r);
  for (int i = 0; i < r; ++i) all_v[i] = V(i);

  auto vertex_list = [&](int i, bool old_profile) {
    PreferenceList l;
    for (int j = 0; j < r - h; ++j) l.groups.push_back({C(j)});
    for (int j = 0; j < r; ++j) {
      if (j == i) continue;
      if (i == r - 1 && j == r - 2) continue;  // pulled next to the x block
      if (adj(i, j)) l.groups.push_back({V(j)});
    }
    if (i == r - 1) {
      if (old_profile) {
        l.groups.push_back({X(0)});
        l.groups.push_back({V(r - 2)});
        for (int t = 1; t < h; ++t) l.groups.push_back({X(t)});
      } else {
        l.groups.push_back({V(r - 2)});
        for (int t = 0; t < h; ++t) l.groups.push_back({X(t)});
      }
    } else {
      for (int t = 0; t < h; ++t) l.groups.push_back({X(t)});
    }
    detail::append_remaining(l, V(i), N);
    return l;
  };

  auto build = [&](bool old_profile) {
    std::vector<PreferenceList> ls(N);
    for (int i = 0; i < h; ++i) {
      ls[Y(i)].groups = {{Z(i)}, {X(i)}};
      detail::append_remaining(ls[Y(i)], Y(i), N);
      ls[Z(i)].groups = {{X(i)}, {Y(i)}};
      detail::append_remaining(ls[Z(i)], Z(i), N);
      ls[X(i)].groups = {all_v, {Y(i)}, {Z(i)}};
      detail::append_remaining(ls[X(i)], X(i), N);
    }
    for (int j = 0; j < r - h; ++j) {
      ls[C(j)].groups = {all_v};
      detail::append_remaining(ls[C(j)], C(j), N);
    }
    for (int i = 0; i < r; ++i) ls[V(i)] = vertex_list(i, old_profile);
    return ls;
  };

  auto p1 = make_profile(ProfileKind::Roommates, names, build(true));
  auto p2 = make_profile(ProfileKind::Roommates, names, build(false));
  std::vector<std::pair<AgentId, AgentId>> m1;
  for (int i = 0; i < h; ++i) m1.emplace_back(V(r - 1 - i), X(i));
  for (int j = 0; j < r - h; ++j) m1.emplace_back(V(j), C(j));
  for (int i = 0; i < h; ++i) m1.emplace_back(Y(i), Z(i));
  return {std::move(p1), std::move(p2), Matching::from_pairs(std::move(m1)),
          4LL * h};
}

// ---------------------------------------------------------------------------
// Marriage with ties, swap distance 2, common-pair target.

// Every stable matching of the new profile is perfect: each vertex gadget
// pairs {u_i, w_i} with {x_i, y_i}, and the edge cycle c, d, a, b, h, e, f
// locks into one global rotation once c_0 and d_0 break their ties.  If
// u_i keeps y_i (vertex selected) the gadget of every incident edge must
// route e toward the other endpoint, which fails when both endpoints are
// selected.  A stable matching sharing at least 2h pairs with the old one
// therefore exists iff the graph has an independent set of size h; the
// budget converts that common-pair target into distance form.
inline IncrementalInstance gen_ism_ties_twoswap(const SimpleGraph& g, int h) {
  if (h < 1) fail(Errc::PreconditionViolated, "need h >= 1");
  int n = g.n(), m = static_cast<int>(g.edges.size());
  if (m == 0)
    fail(Errc::PreconditionViolated,
         "construction needs an edge to host the two tie breaks");

  auto U = [](int i) { return 4 * i; };
  auto W = [](int i) { return 4 * i + 1; };
  auto Xv = [](int i) { return 4 * i + 2; };
  auto Yv = [](int i) { return 4 * i + 3; };
  std::vector<std::string> names(4 * n);
  for (int i = 0; i < n; ++i) {
    std::string suf = std::to_string(i + 1);
    names[U(i)] = "u" + suf;
    names[W(i)] = "w" + suf;
    names[Xv(i)] = "x" + suf;
    names[Yv(i)] = "y" + suf;
  }

  // Edge-agent ids are laid out so that a depth-first stability search in id
  // order sees each forced decision as early as possible: the tie-broken
  // pair first, then the cycle unwound backwards.
  std::vector<int> eid(m), fid(m), cid(m), did(m), aid(m), bid(m), hui(m),
      huj(m);
  auto alloc = [&](int& slot, const std::string& nm) {
    slot = static_cast<int>(names.size());
    names.push_back(nm);
  };
  auto hname = [&](int l, int v) {
    return "h" + std::to_string(l + 1) + "u" + std::to_string(v + 1);
  };
  alloc(cid[0], "c1");
  alloc(aid[m - 1], "a" + std::to_string(m));
  alloc(bid[m - 1], "b" + std::to_string(m));
  alloc(did[0], "d1");
  for (int l = m - 1; l >= 1; --l) {
    auto [vi, vj] = g.edges[l];
    alloc(hui[l], hname(l, vi));
    alloc(huj[l], hname(l, vj));
    alloc(eid[l], "e" + std::to_string(l + 1));
    alloc(fid[l], "f" + std::to_string(l + 1));
    alloc(cid[l], "c" + std::to_string(l + 1));
    alloc(did[l], "d" + std::to_string(l + 1));
    alloc(aid[l - 1], "a" + std::to_string(l));
    alloc(bid[l - 1], "b" + std::to_string(l));
  }
  {
    auto [vi, vj] = g.edges[0];
    alloc(hui[0], hname(0, vi));
    alloc(huj[0], hname(0, vj));
    alloc(eid[0], "e1");
    alloc(fid[0], "f1");
  }
  int N = static_cast<int>(names.size());

  std::vector<std::vector<int>> inc(n);
  for (int l = 0; l < m; ++l) {
    inc[g.edges[l].first].push_back(l);
    inc[g.edges[l].second].push_back(l);
  }

  std::vector<PreferenceList> base(N);
  for (int i = 0; i < n; ++i) {
    PreferenceList ui;
    ui.groups.push_back({Xv(i)});
    for (int l : inc[i])
      ui.groups.push_back({g.edges[l].first == i ? hui[l] : huj[l]});
    ui.groups.push_back({Yv(i)});
    base[U(i)] = std::move(ui);
    base[W(i)].groups = {{Yv(i)}, {Xv(i)}};
    base[Xv(i)].groups = {{W(i)}, {U(i)}};
    base[Yv(i)].groups = {{U(i)}, {W(i)}};
  }
  for (int l = 0; l < m; ++l) {
    auto [vi, vj] = g.edges[l];
    base[eid[l]].groups = {{hui[l], huj[l]}, {cid[l]}};
    base[fid[l]].groups = {{hui[l], huj[l]}, {did[l]}};
    base[hui[l]].groups = {{eid[l], U(vi), aid[l]}, {fid[l]}};
    base[huj[l]].groups = {{eid[l], U(vj), bid[l]}, {fid[l]}};
    base[aid[l]].groups = {{cid[(l + 1) % m]}, {hui[l]}};
    base[bid[l]].groups = {{did[(l + 1) % m]}, {huj[l]}};
    base[cid[l]].groups = {{aid[(l + m - 1) % m], eid[l]}};
    base[did[l]].groups = {{bid[(l + m - 1) % m], fid[l]}};
  }

  std::vector<AgentId> side_u, side_w;
  for (int i = 0; i < n; ++i) {
    side_u.push_back(U(i));
    side_u.push_back(W(i));
    side_w.push_back(Xv(i));
    side_w.push_back(Yv(i));
  }
  for (int l = 0; l < m; ++l) {
    side_u.push_back(eid[l]);
    side_u.push_back(fid[l]);
    side_u.push_back(aid[l]);
    side_u.push_back(bid[l]);
    side_w.push_back(hui[l]);
    side_w.push_back(huj[l]);
    side_w.push_back(cid[l]);
    side_w.push_back(did[l]);
  }

  auto lists2 = base;
  lists2[cid[0]].groups = {{aid[m - 1]}, {eid[0]}};
  lists2[did[0]].groups = {{bid[m - 1]}, {fid[0]}};

  auto p1 = make_profile(ProfileKind::Marriage, names, std::move(base), side_u,
                         side_w);
  auto p2 = make_profile(ProfileKind::Marriage, names, std::move(lists2),
                         side_u, side_w);

  std::vector<std::pair<AgentId, AgentId>> m1;
  for (int i = 0; i < n; ++i) {
    m1.emplace_back(U(i), Yv(i));
    m1.emplace_back(W(i), Xv(i));
  }
  for (int l = 0; l < m; ++l) {
    m1.emplace_back(eid[l], cid[l]);
    m1.emplace_back(fid[l], did[l]);
    m1.emplace_back(aid[l], hui[l]);
    m1.emplace_back(bid[l], huj[l]);
  }
  // Sharing 2h pairs with a matching of equal size means distance
  // 2*(2n + 4m) - 2*2h.
  return {std::move(p1), std::move(p2), Matching::from_pairs(std::move(m1)),
          2LL * (2 * n + 4 * m) - 4LL * h};
}

// ---------------------------------------------------------------------------
// Bipartite with ties and unmatched agents, swap distance 1.

// Emitted in roommates form: the two sides are never equal in size (exactly
// h*(h-1)/2 edge agents stay unmatched in the old matching), which the
// marriage representation here does not allow.  Acceptability stays
// bipartite throughout.
//
// Vertex agents choose between an incident edge agent (joining the clique,
// that edge becoming its pendant) and an x agent; y agents soak up the edges
// a clique does not use; the starred pair e/y plus their shadows edag/ydag
// flip on the single swapped entry; a q-chain makes leaving an x agent
// unmatched cost more than the budget.  The new profile has a stable
// matching within k = h^2+5h+4 of the old one iff the graph minus the
// marked edge still has a size-h clique with pendant edges.
inline IncrementalInstance gen_ism_ties_oneswap(const EdcpeInstance& in) {
  validate_edcpe(in);
  const auto& g = in.g;
  int nv = g.n(), m = static_cast<int>(g.edges.size()), h = in.h;
  long long cb = 1LL * h * (h - 1) / 2;
  if (m <= cb + h)
    fail(Errc::PreconditionViolated,
         "need more edges than one clique with pendants uses");
  long long k = 1LL * h * h + 5LL * h + 4;
  int t = static_cast<int>(k) + 2;
  int y_count = static_cast<int>(m - cb - h);

  std::vector<char> in_witness(nv, 0);
  for (int v : in.s_star) in_witness[v] = 1;
  int lstar = -1;
  for (int l = 0; l < m; ++l)
    if (g.edges[l] == in.e_star) lstar = l;

  // 0 plain, 1 witness-internal, 2 pendant (edge to least outside neighbor).
  std::vector<int> edge_kind(m, 0);
  std::vector<int> pen_edge(nv, -1);
  for (int l = 0; l < m; ++l) {
    auto [a, b] = g.edges[l];
    if (in_witness[a] && in_witness[b]) edge_kind[l] = 1;
  }
  for (int v : in.s_star) {
    int best = -1, least = nv;
    for (int l = 0; l < m; ++l) {
      auto [a, b] = g.edges[l];
      int other = a == v ? b : (b == v ? a : -1);
      if (other < 0 || in_witness[other]) continue;
      if (other < least) best = l, least = other;
    }
    pen_edge[v] = best;
    edge_kind[best] = 2;
  }

  std::vector<std::string> names;
  std::set<std::string> used;
  auto add = [&](const std::string& base) {
    int id = static_cast<int>(names.size());
    names.push_back(detail::fresh_name(used, base));
    return id;
  };

  // Id order is chosen so that a stability search in id order hits forced
  // decisions first: the starred quartet, then y, edge, vertex, x agents,
  // with the q-chain last.
  int ydag = add("ydag"), ystar = add("ystar"), edag = add("edag");
  std::vector<int> eid(m, -1);
  eid[lstar] = add("estar");
  std::vector<int> yid;
  for (int i = 1; i < y_count; ++i) yid.push_back(add("y" + std::to_string(i)));
  for (int l = 0; l < m; ++l) {
    if (l == lstar) continue;
    auto [a, b] = g.edges[l];
    eid[l] = add("e" + std::to_string(a + 1) + "_" + std::to_string(b + 1));
  }
  std::vector<int> vid(nv);
  for (int v = 0; v < nv; ++v) vid[v] = add(g.names[v]);
  std::vector<int> xid(nv - h);
  for (int i = 0; i < nv - h; ++i) xid[i] = add("x" + std::to_string(i + 1));
  std::vector<int> qid(t);
  for (int i = 0; i < t; ++i) qid[i] = add("q" + std::to_string(i + 1));
  int N = static_cast<int>(names.size());

  std::vector<AgentId> all_edges(eid.begin(), eid.end());
  std::vector<AgentId> all_y = yid;
  all_y.push_back(ystar);
  std::vector<AgentId> all_x(xid.begin(), xid.end());
  std::vector<AgentId> all_v(vid.begin(), vid.end());

  std::vector<std::vector<int>> inc(nv);
  for (int l = 0; l < m; ++l) {
    inc[g.edges[l].first].push_back(l);
    inc[g.edges[l].second].push_back(l);
  }

  std::vector<PreferenceList> base(N);
  base[ydag].groups = {{edag}, {ystar}};
  base[ystar].groups = {{ydag}, all_edges};
  base[edag].groups = {{ydag}, {eid[lstar]}};
  {
    auto [a, b] = g.edges[lstar];
    base[eid[lstar]].groups = {{edag}, all_y, {vid[a], vid[b]}};
  }
  for (int y : yid) base[y].groups = {all_edges};
  for (int l = 0; l < m; ++l) {
    if (l == lstar) continue;
    PreferenceList pl;
    for (int y : yid) pl.groups.push_back({y});
    pl.groups.push_back({ystar});
    auto [a, b] = g.edges[l];
    pl.groups.push_back({vid[a], vid[b]});
    base[eid[l]] = std::move(pl);
  }
  for (int v = 0; v < nv; ++v) {
    PreferenceList pl;
    if (!inc[v].empty()) {
      std::vector<AgentId> incident;
      for (int l : inc[v]) incident.push_back(eid[l]);
      pl.groups.push_back(std::move(incident));
    }
    pl.groups.push_back(all_x);
    base[vid[v]] = std::move(pl);
  }
  for (int x : xid) base[x].groups = {all_v, {qid[0]}};
  base[qid[0]].groups = {all_x, {qid[1]}};
  for (int i = 1; i < t - 1; ++i)
    base[qid[i]].groups = {{qid[i - 1]}, {qid[i + 1]}};
  base[qid[t - 1]].groups = {{qid[t - 2]}};

  auto lists1 = base;
  auto lists2 = std::move(base);
  lists2[ydag].groups = {{ystar}, {edag}};

  auto p1 = make_profile(ProfileKind::Roommates, names, std::move(lists1));
  auto p2 = make_profile(ProfileKind::Roommates, names, std::move(lists2));

  std::vector<std::pair<AgentId, AgentId>> m1;
  m1.emplace_back(edag, ydag);
  for (int v : in.s_star) m1.emplace_back(vid[v], eid[pen_edge[v]]);
  int xi = 0;
  for (int v = 0; v < nv; ++v)
    if (!in_witness[v]) m1.emplace_back(vid[v], xid[xi++]);
  std::vector<int> leftovers;
  for (int l = 0; l < m; ++l)
    if (edge_kind[l] == 0) leftovers.push_back(l);
  for (int i = 0; i + 1 < y_count; ++i)
    m1.emplace_back(yid[i], eid[leftovers[i]]);
  m1.emplace_back(ystar, eid[leftovers[y_count - 1]]);
  for (int i = 0; i + 1 < t; i += 2) m1.emplace_back(qid[i], qid[i + 1]);

  return {std::move(p1), std::move(p2), Matching::from_pairs(std::move(m1)),
          k};
}

}  // namespace rematch
