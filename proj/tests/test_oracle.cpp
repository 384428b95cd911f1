#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "rematch/oracle.hpp"

using namespace rematch;

namespace {

const std::vector<std::string> kEightAgentRows = {
    "7 2 6 8 5 3 4", "4 6 5 3 8 1 7", "5 2 1 7 4 6 8", "1 7 3 6 5 8 2",
    "7 1 8 4 6 2 3", "7 3 8 4 5 1 2", "2 8 4 3 5 6 1", "4 2 3 5 6 7 1"};

// Independent enumerator: every subset of acceptable edges that forms a
// matching, filtered by the model-level stability check.
std::vector<Matching> all_stable_by_subsets(const PreferenceProfile& p) {
  auto edges = p.acceptable_edges();
  std::vector<Matching> out;
  std::vector<bool> used(p.n(), false);
  std::vector<std::pair<AgentId, AgentId>> cur;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == edges.size()) {
      auto m = Matching::from_pairs(cur);
      if (is_stable(p, m)) out.push_back(m);
      return;
    }
    rec(i + 1);
    auto [a, b] = edges[i];
    if (!used[a] && !used[b]) {
      used[a] = used[b] = true;
      cur.emplace_back(a, b);
      rec(i + 1);
      cur.pop_back();
      used[a] = used[b] = false;
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

// Independent clique check: scan all vertex subsets of the right size.
bool clique_by_masks(const SimpleGraph& g, int h) {
  int n = g.n();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != h) continue;
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = a + 1; b < n && ok; ++b)
        if ((mask >> a & 1) && (mask >> b & 1) && !g.has_edge(a, b))
          ok = false;
    if (ok) return true;
  }
  return h == 0;
}

}  // namespace

TEST_CASE("eight-agent instance has exactly the three known stable matchings") {
  auto p = testutil::profile_1based(kEightAgentRows);
  auto all = enumerate_stable_matchings(p);
  REQUIRE(all.size() == 3);
  auto has = [&](std::vector<std::pair<int, int>> prs) {
    auto m = testutil::matching_1based(prs);
    return std::find(all.begin(), all.end(), m) != all.end();
  };
  CHECK(has({{1, 5}, {2, 3}, {4, 7}, {6, 8}}));
  CHECK(has({{1, 6}, {2, 3}, {4, 7}, {5, 8}}));
  CHECK(has({{1, 4}, {2, 3}, {5, 7}, {6, 8}}));
  for (const auto& m : all) REQUIRE(is_stable(p, m));
}

TEST_CASE("mutual top choices give a unique stable matching") {
  auto p = testutil::profile_1based(
      {"2 3 4", "1 3 4", "4 1 2", "3 1 2"});
  auto all = enumerate_stable_matchings(p);
  REQUIRE(all.size() == 1);
  REQUIRE(all[0] == testutil::matching_1based({{1, 2}, {3, 4}}));
}

TEST_CASE("enumeration agrees with subset filtering on random instances") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 150; ++trial) {
    testutil::ProfileOptions opt;
    opt.n = 3 + static_cast<int>(rng() % 5);
    opt.tie_prob = (trial % 2) ? 0.3 : 0.0;
    opt.edge_prob = 0.6;
    auto p = testutil::random_profile(rng, opt);
    auto fast = enumerate_stable_matchings(p);
    auto slow = all_stable_by_subsets(p);
    CAPTURE(trial, opt.n);
    REQUIRE(fast == slow);
    REQUIRE(exists_stable_matching(p) == !slow.empty());
  }
}

TEST_CASE("no-ties instances match the same agent set in every stable matching") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    testutil::ProfileOptions opt;
    opt.n = 4 + static_cast<int>(rng() % 5);
    auto p = testutil::random_profile(rng, opt);
    auto all = enumerate_stable_matchings(p);
    if (all.size() < 2) continue;
    auto matched_set = [&](const Matching& m) {
      std::set<AgentId> s;
      for (auto [a, b] : m.pairs) {
        s.insert(a);
        s.insert(b);
      }
      return s;
    };
    auto ref = matched_set(all[0]);
    for (const auto& m : all) REQUIRE(matched_set(m) == ref);
  }
}

TEST_CASE("a four-agent odd cycle has no stable matching") {
  // 1,2,3 each rank the next cyclically first and agent 4 last; 4 is
  // everyone's last resort, so every matching is blocked.
  auto p = testutil::profile_1based({"2 3 4", "3 1 4", "1 2 4", "1 2 3"});
  REQUIRE(!exists_stable_matching(p));
  REQUIRE(enumerate_stable_matchings(p).empty());
  REQUIRE(!min_distance_stable(p, Matching{}).has_value());
}

TEST_CASE("minimum distance and witnesses agree with plain enumeration") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 120; ++trial) {
    testutil::ProfileOptions opt;
    opt.n = 3 + static_cast<int>(rng() % 5);
    opt.tie_prob = (trial % 2) ? 0.25 : 0.0;
    auto p2 = testutil::random_profile(rng, opt);
    auto m1 = testutil::greedy_matching(rng, p2);
    auto got = min_distance_stable(p2, m1);
    auto all = enumerate_stable_matchings(p2);
    if (all.empty()) {
      REQUIRE(!got.has_value());
      continue;
    }
    long long want = std::numeric_limits<long long>::max();
    for (const auto& m : all) want = std::min(want, matching_distance(m1, m));
    REQUIRE(got.has_value());
    REQUIRE(got->first == want);
    REQUIRE(is_stable(p2, got->second));
    REQUIRE(matching_distance(m1, got->second) == want);
  }
}

TEST_CASE("stable m1 has distance zero to itself") {
  auto p = testutil::profile_1based(kEightAgentRows);
  auto m1 = testutil::matching_1based({{1, 5}, {2, 3}, {4, 7}, {6, 8}});
  auto got = min_distance_stable(p, m1);
  REQUIRE(got.has_value());
  REQUIRE(got->first == 0);
  REQUIRE(got->second == m1);
}

TEST_CASE("max common pairs agrees with enumeration") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 120; ++trial) {
    testutil::ProfileOptions opt;
    opt.n = 3 + static_cast<int>(rng() % 5);
    opt.tie_prob = (trial % 3 == 0) ? 0.3 : 0.0;
    auto p2 = testutil::random_profile(rng, opt);
    auto m1 = testutil::greedy_matching(rng, p2);
    auto got = max_common_pairs(p2, m1);
    auto all = enumerate_stable_matchings(p2);
    if (all.empty()) {
      REQUIRE(!got.has_value());
      continue;
    }
    int want = 0;
    for (const auto& m : all) {
      int c = 0;
      for (const auto& pr : m1.pairs)
        if (m.contains(pr.first, pr.second)) ++c;
      want = std::max(want, c);
    }
    CAPTURE(trial);
    REQUIRE(got.has_value());
    REQUIRE(*got == want);
    // early-exit variant reports reaching any achievable target
    if (want > 0) REQUIRE(*max_common_pairs(p2, m1, 12, want) >= want);
  }
}

TEST_CASE("oracle size guards") {
  testutil::ProfileOptions opt;
  opt.n = 13;
  std::mt19937_64 rng(1);
  auto p = testutil::random_profile(rng, opt);
  REQUIRE_THROWS_AS(enumerate_stable_matchings(p), Error);
  REQUIRE_NOTHROW(enumerate_stable_matchings(p, 14));
  SimpleGraph big;
  for (int i = 0; i < 17; ++i) big.names.push_back("v" + std::to_string(i));
  REQUIRE_THROWS_AS(max_independent_set(big, 2), Error);
  REQUIRE_NOTHROW(max_independent_set(big, 2, 17));
}

TEST_CASE("independent set on the four-vertex fan") {
  auto g = make_graph({"v1", "v2", "v3", "v4"},
                      {{0, 1}, {1, 2}, {1, 3}, {2, 3}});
  REQUIRE(max_independent_set(g, 2));   // {v1, v4}
  REQUIRE(!max_independent_set(g, 3));
  auto k4 = make_graph({"a", "b", "c", "d"},
                       {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  REQUIRE(!max_independent_set(k4, 2));
  REQUIRE(max_independent_set(k4, 1));
}

TEST_CASE("independent set matches complement cliques on random graphs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng() % 9);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng() % 2) edges.emplace_back(a, b);
    auto g = make_graph(names, edges);
    auto comp = g.complement();
    for (int h = 0; h <= n; ++h) {
      CAPTURE(trial, n, h);
      REQUIRE(max_independent_set(g, h) == clique_by_masks(comp, h));
    }
  }
}

TEST_CASE("clique with pendant edges needs an outside neighbor per member") {
  // triangle with a pendant vertex on each corner
  auto tri3 = make_graph({"a", "b", "c", "pa", "pb", "pc"},
                         {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 4}, {2, 5}});
  REQUIRE(has_clique_with_pendant_edges(tri3, 3));
  // bare triangle: no member has an outside neighbor
  auto tri = make_graph({"a", "b", "c"}, {{0, 1}, {0, 2}, {1, 2}});
  REQUIRE(!has_clique_with_pendant_edges(tri, 3));
  REQUIRE(has_clique_with_pendant_edges(tri, 2));  // edge + third as pendant
  // path on three vertices: each 2-clique has an endpoint with no outside
  // neighbor
  auto p3 = make_graph({"a", "b", "c"}, {{0, 1}, {1, 2}});
  REQUIRE(!has_clique_with_pendant_edges(p3, 2));
  auto p4 = make_graph({"a", "b", "c", "d"}, {{0, 1}, {1, 2}, {2, 3}});
  REQUIRE(has_clique_with_pendant_edges(p4, 2));  // {b,c} with a and d
}

TEST_CASE("clique with pendant edges agrees with a naive scan") {
  std::mt19937_64 rng(6);
  auto naive = [](const SimpleGraph& g, int h) {
    int n = g.n();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != h) continue;
      bool ok = true;
      for (int a = 0; a < n && ok; ++a) {
        if (!(mask >> a & 1)) continue;
        bool pendant = false;
        for (int b = 0; b < n && ok; ++b) {
          if (b == a) continue;
          bool inside = mask >> b & 1;
          if (inside && !g.has_edge(a, b)) ok = false;
          if (!inside && g.has_edge(a, b)) pendant = true;
        }
        if (ok && !pendant) ok = false;
      }
      if (ok) return true;
    }
    return h == 0;
  };
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng() % 8);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng() % 2) edges.emplace_back(a, b);
    auto g = make_graph(names, edges);
    for (int h = 0; h <= n; ++h) {
      CAPTURE(trial, n, h);
      REQUIRE(has_clique_with_pendant_edges(g, h) == naive(g, h));
    }
  }
}

TEST_CASE("graph files round trip and report faults") {
  std::string text = "v a\nv b\nv c\ne a b   # one edge\ne b c\n";
  auto g = parse_graph(text);
  REQUIRE(g.n() == 3);
  REQUIRE(g.has_edge(0, 1));
  REQUIRE(!g.has_edge(0, 2));
  auto g2 = parse_graph(serialize_graph(g));
  REQUIRE(g2 == g);

  auto kind = [](const std::string& body) {
    try {
      parse_graph(body);
    } catch (const Error& e) {
      return e.kind();
    }
    FAIL("expected an error");
    return Errc::MalformedSyntax;
  };
  CHECK(kind("v a\nv a\n") == Errc::DuplicateEntry);
  CHECK(kind("v a\nv b\ne a b\ne b a\n") == Errc::DuplicateEntry);
  CHECK(kind("v a\ne a a\n") == Errc::MalformedSyntax);
  CHECK(kind("v a\ne a b\n") == Errc::MalformedSyntax);
  CHECK(kind("vertex a\n") == Errc::MalformedSyntax);
}
