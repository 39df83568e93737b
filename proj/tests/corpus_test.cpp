#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <random>
#include <set>

#include "pg/analysis.hpp"
#include "pg/corpus.hpp"

using namespace pg;

namespace {

int internal_count(const Graph& g) {
  int k = 0;
  for (auto& e : g.edges()) k += e.internal();
  return k;
}

bool contains(const std::vector<CorpusEntry>& c, const Graph& g) {
  for (auto& e : c)
    if (iso_up_to_listing(e.graph, g)) return true;
  return false;
}

}  // namespace

TEST_CASE("one-vertex corpus") {
  auto c = generate_corpus({.max_vertices = 1, .max_internal = 0, .max_legs = 2, .wheeled = false});
  // the exceptional edge and the six corollas with at most two legs
  CHECK(c.size() == 7);
  auto w = generate_corpus({.max_vertices = 1, .max_internal = 1, .max_legs = 2, .wheeled = true});
  CHECK(contains(w, exceptional_loop()));
  CHECK(contains(w, isolated_vertices(1)));
  CHECK(contains(w, contracted_corolla({"*"}, {"*"}, 0, 0)));
  CHECK_FALSE(contains(c, exceptional_loop()));
}

TEST_CASE("entries are valid, in bounds and pairwise distinct") {
  for (bool wheeled : {false, true}) {
    CorpusBounds b{3, 3, 2, wheeled};
    auto c = generate_corpus(b);
    std::set<std::string> names;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Graph& g = c[i].graph;
      CHECK_NOTHROW(validate(g));
      CHECK(is_connected(g));
      if (!wheeled) CHECK(is_wheel_free(g));
      CHECK(g.num_vertices() <= b.max_vertices);
      CHECK(internal_count(g) <= b.max_internal);
      CHECK(g.gin.size() + g.gout.size() <= static_cast<std::size_t>(b.max_legs) + (g.num_vertices() == 0 ? 2 : 0));
      CHECK(names.insert(c[i].name).second);
    }
    // distinctness with the backtracking isomorphism search instead of canonical keys
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j)
        if (c[i].graph.num_vertices() == c[j].graph.num_vertices() &&
            c[i].graph.num_flags() == c[j].graph.num_flags())
          CHECK(all_isos_up_to_listing(c[i].graph, c[j].graph, 1).empty());
  }
}

TEST_CASE("random graphs within bounds are found") {
  std::mt19937 rng(7);
  for (bool wheeled : {false, true}) {
    auto c = generate_corpus({.max_vertices = 3, .max_internal = 3, .max_legs = 2, .wheeled = wheeled});
    int tried = 0;
    while (tried < 150) {
      int n = 1 + rng() % 3;
      int k = rng() % 4;
      std::vector<std::string> vs;
      for (int v = 0; v < n; ++v) vs.push_back("x" + std::to_string(v));
      std::vector<EdgeSpec> es;
      for (int i = 0; i < k; ++i) es.push_back({"a" + std::to_string(i), vs[rng() % n], vs[rng() % n]});
      int legs = rng() % 3;
      for (int i = 0; i < legs; ++i) {
        if (rng() % 2) es.push_back({"l" + std::to_string(i), "", vs[rng() % n]});
        else es.push_back({"l" + std::to_string(i), vs[rng() % n], ""});
      }
      Graph g = graph_from_edges(vs, es);
      if (!is_connected(g) || (!wheeled && !is_wheel_free(g))) continue;
      ++tried;
      CHECK(contains(c, g));
    }
  }
}

TEST_CASE("partially grafted corollas with two glued edges appear") {
  auto c = generate_corpus({.max_vertices = 2, .max_internal = 2, .max_legs = 2, .wheeled = false});
  CHECK(contains(c, partially_grafted({}, ones(2), ones(2), {}, {{0, 0}, {1, 1}})));
  CHECK(contains(c, partially_grafted(ones(1), ones(2), ones(2), ones(1), {{0, 0}, {1, 1}})));
  CHECK(contains(c, partially_grafted(ones(1), ones(2), ones(2), {}, {{0, 0}, {1, 1}})));
}

TEST_CASE("writing and reading back is deterministic") {
  CorpusBounds b{2, 2, 2, true};
  auto c = generate_corpus(b);
  auto again = generate_corpus(b);
  REQUIRE(c.size() == again.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c[i].name == again[i].name);
    CHECK(print_graph(c[i].graph) == print_graph(again[i].graph));
  }
  auto dir = std::filesystem::temp_directory_path() / "pg_corpus_test";
  std::filesystem::remove_all(dir);
  write_corpus(dir.string(), c, b);
  auto back = read_corpus(dir.string());
  REQUIRE(back.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(strict_iso(back[i].graph, c[i].graph).has_value());
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(read_corpus(dir.string()), GraphError);
}
