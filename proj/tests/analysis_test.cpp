#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "pg/analysis.hpp"

using namespace pg;

namespace {

std::set<std::string> names_of(const Graph& g, const std::vector<int>& vs) {
  std::set<std::string> s;
  for (int v : vs) s.insert(g.vname[v]);
  return s;
}

std::set<std::set<std::string>> pair_names(const Graph& g, const std::vector<std::pair<int, int>>& ps) {
  std::set<std::set<std::string>> s;
  for (auto [a, b] : ps) s.insert({g.vname[a], g.vname[b]});
  return s;
}

// Oracle: a cycle is a nonempty connected edge subset in which every touched vertex has degree 2.
std::vector<std::set<int>> brute_cycles(const Graph& g) {
  auto es = g.edges();
  std::vector<int> ord;
  for (int i = 0; i < static_cast<int>(es.size()); ++i)
    if (es[i].ordinary()) ord.push_back(i);
  std::vector<std::set<int>> out;
  for (unsigned mask = 1; mask < (1u << ord.size()); ++mask) {
    std::map<int, int> deg;
    std::set<int> chosen;
    for (std::size_t k = 0; k < ord.size(); ++k)
      if (mask >> k & 1) {
        chosen.insert(ord[k]);
        deg[es[ord[k]].tail]++;
        deg[es[ord[k]].head]++;
      }
    if (!std::all_of(deg.begin(), deg.end(), [](auto& p) { return p.second == 2; })) continue;
    // connectivity of the chosen edges
    std::set<int> seen{deg.begin()->first};
    bool grew = true;
    while (grew) {
      grew = false;
      for (int e : chosen)
        if (seen.count(es[e].tail) != seen.count(es[e].head)) {
          seen.insert(es[e].tail);
          seen.insert(es[e].head);
          grew = true;
        }
    }
    if (seen.size() == deg.size()) out.push_back(chosen);
  }
  return out;
}

}  // namespace

TEST_CASE("classification of standard examples") {
  auto d = classify(dioperadic(ones(1), ones(2), ones(2), ones(1), 0, 1));
  CHECK(d.connected);
  CHECK(d.wheel_free);
  CHECK(d.simply_connected);
  CHECK_FALSE(d.unital_tree);

  auto c = classify(fx::cycle_not_wheel());
  CHECK(c.connected);
  CHECK(c.wheel_free);
  CHECK_FALSE(c.simply_connected);

  CHECK_FALSE(classify(isolated_vertices(2)).connected);
  CHECK_FALSE(classify(empty_graph()).connected);
  CHECK(classify(isolated_vertices(1)).connected);

  auto up = classify(exceptional_edge());
  CHECK(up.linear);
  auto loop = classify(exceptional_loop());
  CHECK(loop.connected);
  CHECK_FALSE(loop.wheel_free);
  CHECK_FALSE(loop.simply_connected);

  auto cc = classify(contracted_corolla(ones(1), ones(1), 0, 0));
  CHECK(cc.connected);
  CHECK_FALSE(cc.wheel_free);
  CHECK(classify(linear(3)).linear);
  CHECK(classify(corolla(3, 1)).unital_tree);
  CHECK_FALSE(classify(corolla(3, 1)).linear);
  CHECK(classify(corolla(1, 1)).special);
  CHECK_FALSE(classify(corolla(0, 1)).special);
}

TEST_CASE("cycles and wheels") {
  auto cw = wheels_and_cycles(fx::cycle_not_wheel());
  CHECK(cw.cycles.size() == 1);
  CHECK(cw.wheels.empty());
  auto rw = wheels_and_cycles(fx::directed_four_cycle());
  CHECK(rw.cycles.size() == 1);
  REQUIRE(rw.wheels.size() == 1);
  CHECK(rw.wheels[0].edges.size() == 4);
  auto lin = wheels_and_cycles(linear(3));
  CHECK(lin.cycles.empty());
  CHECK(lin.wheels.empty());
  CHECK(wheels_and_cycles(fx::closest_neighbor_k()).cycles.size() == 3);
}

TEST_CASE("cycle enumeration agrees with the subset oracle") {
  std::vector<Graph> gs = {fx::cycle_not_wheel(), fx::closest_neighbor_k(), fx::diamond(), fx::double_edge(),
                           fx::edge_and_loop(), fx::triangle(),
                           partially_grafted(ones(0), ones(3), ones(3), ones(0), {{0, 0}, {1, 1}, {2, 2}})};
  for (auto& g : gs) {
    auto found = wheels_and_cycles(g).cycles;
    auto oracle = brute_cycles(g);
    CHECK(found.size() == oracle.size());
    std::set<std::set<int>> a, b(oracle.begin(), oracle.end());
    for (auto& p : found) a.insert(std::set<int>(p.edges.begin(), p.edges.end()));
    CHECK(a == b);
    // disconnectable edges are exactly those on a cycle
    std::set<int> on_cycle;
    for (auto& s : oracle) on_cycle.insert(s.begin(), s.end());
    auto dis = disconnectable_edges(g);
    CHECK(std::set<int>(dis.begin(), dis.end()) == on_cycle);
  }
}

TEST_CASE("closest neighbors") {
  Graph k = fx::closest_neighbor_k();
  CHECK(pair_names(k, closest_neighbors(k)) == std::set<std::set<std::string>>{{"u", "v"}, {"v", "w"}});
  Graph p = partially_grafted(ones(1), ones(2), ones(2), ones(1), {{0, 0}, {1, 1}});
  CHECK(closest_neighbors(p).size() == 1);
  CHECK(closest_neighbors(corolla(2, 2)).empty());
  CHECK_THROWS_AS(closest_neighbors(fx::directed_four_cycle()), ClassError);
}

TEST_CASE("almost isolated vertices and extremal paths") {
  Graph k = fx::closest_neighbor_k();
  CHECK(names_of(k, almost_isolated(k)) == std::set<std::string>{"u", "w"});
  Graph v = fx::v_shape();
  CHECK(names_of(v, almost_isolated(v)).count("u") == 0);

  Graph d = fx::diamond();
  Path q = maximal_extremal_path(d);
  std::vector<std::string> names;
  for (int x : q.vertices) names.push_back(d.vname[x]);
  CHECK(names == std::vector<std::string>{"u", "v", "w", "x"});

  Path kp = maximal_extremal_path(k);
  CHECK(std::set<std::string>{k.vname[kp.vertices.front()], k.vname[kp.vertices.back()]} ==
        std::set<std::string>{"u", "w"});
  Path pp = maximal_extremal_path(partially_grafted(ones(1), ones(1), ones(1), ones(1), {{0, 0}}));
  CHECK(pp.edges.size() == 1);

  for (Graph g : {k, d, v, fx::cycle_not_wheel(), fx::triangle(), linear(4)}) {
    auto ai = almost_isolated(g);
    CHECK(ai.size() >= 2);
    Path m = maximal_extremal_path(g);
    CHECK(std::count(ai.begin(), ai.end(), m.vertices.front()) == 1);
    CHECK(std::count(ai.begin(), ai.end(), m.vertices.back()) == 1);
  }
}

TEST_CASE("deletable vertices") {
  CHECK(deletable_vertices(fx::double_edge()).empty());
  CHECK(deletable_vertices(corolla(1, 1)) == std::vector<int>{0});
  CHECK(deletable_vertices(corolla(0, 0)).empty());
  CHECK(deletable_vertices(linear(3)) == std::vector<int>{0, 2});
  CHECK(deletable_vertices(fx::triangle()).empty());
  CHECK(deletable_vertices(fx::v_shape()).size() == 2);
}

TEST_CASE("disconnectable edges and loops") {
  Graph l = fx::edge_and_loop();
  auto dis = disconnectable_edges(l);
  REQUIRE(dis.size() == 1);
  CHECK(l.edges()[dis[0]].name == "b");
  CHECK(disconnectable_edges(linear(3)).empty());
  CHECK(disconnectable_edges(exceptional_loop()) == std::vector<int>{0});
  CHECK(loops(contracted_corolla(ones(2), ones(2), 0, 0)).size() == 1);
  CHECK(loops(fx::triangle()).empty());
  CHECK(loops(l).size() == 1);
}

TEST_CASE("linear branches") {
  Graph l = linear(3);
  auto br = linear_branch(l, l.find_edge("e0"), l.find_edge("e2"));
  REQUIRE(br.has_value());
  CHECK(br->vertices == std::vector<int>{0, 1});
  auto one = linear_branch(l, l.find_edge("e1"), l.find_edge("e2"));
  REQUIRE(one.has_value());
  CHECK(one->vertices.size() == 1);
  Graph c = corolla(2, 1);
  CHECK_FALSE(linear_branch(c, 0, 1).has_value());
  CHECK_THROWS_AS(linear_branch(l, 0, 0), std::invalid_argument);
}

TEST_CASE("vertex deletion and edge disconnection") {
  Graph k = fx::closest_neighbor_k();
  Graph kv = delete_vertex(k, k.find_vertex("v"));
  CHECK(kv.num_vertices() == 2);
  CHECK(kv.gout.size() == 1);
  CHECK(kv.gin.size() == 2);
  Graph up = disconnect_edge(exceptional_loop(), 0);
  CHECK(up.edges()[0].kind == EdgeKind::ExceptionalEdge);
}
