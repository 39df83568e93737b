#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "pg/graph.hpp"

using namespace pg;

namespace {

int count_internal(const Graph& g) {
  int n = 0;
  for (auto& e : g.edges()) n += e.internal();
  return n;
}

// Oracle: try every flag bijection and check that all structure, listings included, is preserved.
bool brute_strict_iso(const Graph& a, const Graph& b) {
  if (a.num_flags() != b.num_flags() || a.num_vertices() != b.num_vertices()) return false;
  std::vector<int> p(a.num_flags());
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    std::vector<int> vmap(a.num_vertices(), -2);
    for (int x = 0; x < a.num_flags() && ok; ++x) {
      int y = p[x];
      if (a.iota[x] >= 0 && p[a.iota[x]] != b.iota[y]) ok = false;
      if ((a.pi[x] < 0) != (b.pi[y] < 0)) ok = false;
      if (ok && a.pi[x] >= 0 && p[a.pi[x]] != b.pi[y]) ok = false;
      if (a.color[x] != b.color[y] || a.dir[x] != b.dir[y]) ok = false;
      if ((a.cell[x] < 0) != (b.cell[y] < 0)) ok = false;
      if (ok && a.cell[x] >= 0) {
        if (vmap[a.cell[x]] == -2) vmap[a.cell[x]] = b.cell[y];
        else if (vmap[a.cell[x]] != b.cell[y]) ok = false;
      }
    }
    for (std::size_t k = 0; ok && k < a.gin.size(); ++k) ok = p[a.gin[k]] == b.gin[k];
    for (std::size_t k = 0; ok && k < a.gout.size(); ++k) ok = p[a.gout[k]] == b.gout[k];
    for (int v = 0; ok && v < a.num_vertices(); ++v) {
      if (vmap[v] < 0) continue;
      for (std::size_t k = 0; ok && k < a.vin[v].size(); ++k) ok = p[a.vin[v][k]] == b.vin[vmap[v]][k];
      for (std::size_t k = 0; ok && k < a.vout[v].size(); ++k) ok = p[a.vout[v][k]] == b.vout[vmap[v]][k];
    }
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

}  // namespace

TEST_CASE("empty description gives the empty graph") {
  Graph g = parse_graph("graph\nend\n");
  CHECK(g.empty());
  CHECK(g.edges().empty());
}

TEST_CASE("exceptional edge from two flags") {
  Graph g = parse_graph(
      "graph\nflags: a b\nexceptional: a b\npi: a=b\ncolor: a=c b=c\ndirection: a=+ b=-\nend\n");
  auto es = g.edges();
  REQUIRE(es.size() == 1);
  CHECK(es[0].kind == EdgeKind::ExceptionalEdge);
  CHECK_FALSE(es[0].internal());
  CHECK(g.gin.size() == 1);
  CHECK(g.gout.size() == 1);
}

TEST_CASE("validation errors name the flag") {
  Graph g = corolla(1, 1);
  g.iota[0] = 1;  // 1 does not map back to 0
  CHECK_THROWS_WITH_AS(validate(g), doctest::Contains("non-involutive"), GraphError);
  Graph h = exceptional_edge();
  h.pi[0] = 0;
  CHECK_THROWS_AS(validate(h), GraphError);
  Graph k = corolla(2, 1);
  k.gin = {k.gin[0], k.gin[0]};
  CHECK_THROWS_AS(validate(k), GraphError);
  Graph d = exceptional_edge();
  d.dir[1] = 1;
  CHECK_THROWS_AS(validate(d), GraphError);
  Graph c = contracted_corolla({"a"}, {"a"}, 0, 0);
  c.color[0] = "b";
  CHECK_THROWS_WITH(validate(c), doctest::Contains("flag"));
}

TEST_CASE("standard graphs") {
  Graph c = corolla(2, 1);
  CHECK(c.num_flags() == 3);
  CHECK(c.num_vertices() == 1);
  CHECK(count_internal(c) == 0);
  for (auto& e : c.edges()) CHECK(e.kind == EdgeKind::Leg);

  CHECK(count_internal(contracted_corolla(ones(2), ones(3), 1, 0)) == 1);
  CHECK(count_internal(partially_grafted(ones(1), ones(3), ones(3), ones(1), {{0, 0}, {1, 2}, {2, 1}})) == 3);
  CHECK(count_internal(dioperadic(ones(1), ones(2), ones(2), ones(1), 1, 0)) == 1);
  CHECK_THROWS_AS(partially_grafted(ones(1), ones(1), ones(1), ones(1), {{0, 3}}), GraphError);
  CHECK_THROWS_AS(dioperadic({"a"}, {"b"}, {"c"}, {"d"}, 0, 0), GraphError);
  CHECK_THROWS_AS(contracted_corolla({"a"}, {"b"}, 0, 0), GraphError);

  Graph loop = exceptional_loop("c");
  REQUIRE(loop.edges().size() == 1);
  CHECK(loop.edges()[0].kind == EdgeKind::ExceptionalLoop);
  CHECK(loop.edges()[0].internal());

  Graph l3 = linear(3);
  CHECK(l3.num_vertices() == 3);
  CHECK(count_internal(l3) == 2);
  CHECK(isolated_vertices(2).num_vertices() == 2);
  CHECK(print_graph(linear(3)) == print_graph(linear(3)));
}

TEST_CASE("relabeling acts on the graph listing only") {
  Graph c = corolla(2, 1);
  Graph r = relabel(c, {0}, {1, 0});
  CHECK(r.gin[1] == c.gin[0]);
  CHECK(r.gin[0] == c.gin[1]);
  CHECK(r.vin == c.vin);
  CHECK(strict_iso(relabel(r, {0}, {1, 0}), c).has_value());
  CHECK_THROWS_AS(relabel(c, {0}, {0}), GraphError);

  Graph g = corolla(3, 2);
  std::vector<int> s1{1, 0}, t1{2, 0, 1}, s2{1, 0}, t2{1, 2, 0};
  // relabel(relabel(G,s,t),s',t') = relabel(G, s's, t t')
  std::vector<int> s12(2), t12(3);
  for (int k = 0; k < 2; ++k) s12[k] = s2[s1[k]];
  for (int k = 0; k < 3; ++k) t12[k] = t2[t1[k]];
  CHECK(strict_iso(relabel(relabel(g, s1, t1), s2, t2), relabel(g, s12, t12)).has_value());
}

TEST_CASE("strict isomorphism versus listing-free isomorphism") {
  Graph c = corolla(2, 1);
  CHECK(strict_iso(c, c).has_value());
  CHECK_FALSE(strict_iso(corolla(2, 1), corolla(1, 2)).has_value());
  Graph r = relabel(c, {0}, {1, 0});
  CHECK_FALSE(strict_iso(c, r).has_value());
  CHECK_FALSE(brute_strict_iso(c, r));
  CHECK(iso_up_to_listing(c, r).has_value());
  CHECK_FALSE(iso_up_to_listing(linear(2), linear(3)).has_value());
  CHECK_FALSE(iso_up_to_listing(partially_grafted(ones(1), ones(2), ones(2), ones(1), {{0, 0}, {1, 1}}),
                                dioperadic(ones(1), ones(2), ones(2), ones(1), 0, 0))
                  .has_value());
}

TEST_CASE("strict isomorphism agrees with exhaustive bijection search") {
  std::vector<Graph> gs = {corolla(2, 1),
                           relabel(corolla(2, 1), {0}, {1, 0}),
                           corolla(1, 2),
                           linear(2),
                           contracted_corolla(ones(2), ones(2), 0, 1),
                           contracted_corolla(ones(2), ones(2), 1, 0),
                           contracted_corolla(ones(2), ones(2), 0, 0),
                           dioperadic(ones(1), ones(2), ones(1), ones(1), 0, 0),
                           dioperadic(ones(1), ones(2), ones(1), ones(1), 1, 0),
                           exceptional_edge(),
                           exceptional_loop()};
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = 0; j < gs.size(); ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(strict_iso(gs[i], gs[j]).has_value() == brute_strict_iso(gs[i], gs[j]));
    }
}

TEST_CASE("isomorphisms are preserved by renaming flags") {
  Graph g = partially_grafted(ones(2), ones(2), ones(2), ones(1), {{0, 1}, {1, 0}});
  Graph h = g;
  for (auto& f : h.flag) f = "z" + f;
  std::reverse(h.vname.begin(), h.vname.end());
  auto iso = strict_iso(g, h);
  REQUIRE(iso.has_value());
  CHECK(canon_strict(g) == canon_strict(h));
  CHECK(canon_free(g) == canon_free(h));
  CHECK(all_isos_up_to_listing(g, g).size() == 4);  // swap the parallel edges and/or the inputs of u
}

TEST_CASE("text format round trip") {
  std::vector<Graph> gs = {empty_graph(), exceptional_edge("c"), exceptional_loop("d"),
                           partially_grafted({"a"}, {"b", "c"}, {"c", "b"}, {}, {{0, 1}, {1, 0}}),
                           contracted_corolla(ones(2), ones(2), 1, 0), linear(3, {"p", "q", "r", "s"})};
  for (auto& g : gs) {
    std::string text = print_graph(g);
    Graph back = parse_graph(text);
    CHECK(print_graph(back) == text);
    CHECK(strict_iso(g, back).has_value());
  }
  CHECK_THROWS_AS(parse_graph("graph\nflags: a\nvertex v: a\nend\n"), GraphError);  // no direction
}

TEST_CASE("dot output depends only on the canonical form") {
  Graph g = linear(2);
  Graph h = g;
  for (auto& f : h.flag) f += "x";
  CHECK(to_dot(g) == to_dot(h));
  CHECK(to_dot(exceptional_loop()).find("dashed") != std::string::npos);
}
