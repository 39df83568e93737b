#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "pg/corpus.hpp"
#include "pg/nerve.hpp"

using namespace pg;

namespace {

const std::vector<std::vector<int>> z2{{0, 1}, {1, 0}};

std::vector<Graph> small_shapes(bool wheeled, int max_vertices = 2) {
  CorpusBounds b;
  b.max_vertices = max_vertices;
  b.max_internal = wheeled ? 2 : max_vertices;
  b.max_legs = 2;
  b.max_arity = 3;
  b.wheeled = wheeled;
  return graphs_of(generate_corpus(b));
}

// |NP(G)| by summing over edge colorings the product of component sizes, with component sizes
// counted directly: (product of output set sizes) ^ (product of input set sizes).
std::size_t end_nerve_oracle(const std::vector<int>& sizes, const Graph& g) {
  auto es = g.edges();
  auto eo = g.edge_of_flag();
  const int nc = static_cast<int>(sizes.size());
  std::size_t total = 0;
  std::vector<int> col(es.size(), 0);
  while (true) {
    double prod = 1;
    for (int v = 0; v < g.num_vertices(); ++v) {
      double in = 1, out = 1;
      for (int x : g.vin[v]) in *= sizes[col[eo[x]]];
      for (int x : g.vout[v]) out *= sizes[col[eo[x]]];
      prod *= std::pow(out, in);
    }
    total += static_cast<std::size_t>(prod);
    int k = static_cast<int>(col.size()) - 1;
    while (k >= 0 && ++col[k] == nc) col[k--] = 0;
    if (k < 0) break;
  }
  return total;
}

std::string first_nondegenerate(const FinitePropad& p, const GraphicalSet& x, const Graph& g) {
  for (auto& v : x.values(g)) {
    auto d = Decoration::parse(v);
    bool degenerate = false;
    for (auto& e : d.elems)
      for (int c = 0; c < static_cast<int>(p.colors.size()); ++c) degenerate = degenerate || e == unit(p, c);
    if (!degenerate) return v;
  }
  return {};
}

}  // namespace

TEST_CASE("endomorphism components") {
  auto p = end_propad({"a"}, {2});
  CHECK(component(p, {0}, {0}).size() == 4);
  CHECK(component(p, {}, {0}).size() == 2);
  CHECK(component(p, {0, 0}, {0}).size() == 16);
  CHECK(component(p, {0}, {}).size() == 1);
  CHECK(unit(p, 0) == "0,1");

  // swap then swap is the identity, swap then constant-0 is constant-0
  auto l2 = linear(2);
  p = end_propad({"*"}, {2});
  CHECK(evaluate(p, l2, {"1,0", "1,0"}) == "0,1");
  CHECK(evaluate(p, l2, {"1,0", "0,0"}) == "0,0");
  CHECK(evaluate(p, l2, {"0,0", "1,0"}) == "1,1");

  // a two-input vertex fed by a nullary one
  auto g = graph_from_edges({"u", "v"}, {{"x", "", "v"}, {"e", "u", "v"}, {"y", "v", ""}});
  // u emits 1; v is addition mod 2 on inputs (x, e)
  CHECK(evaluate(p, g, {"1", "0,1,1,0"}) == "1,0");
}

TEST_CASE("propad validation and text round trip") {
  CHECK_THROWS_AS(monoid_propad("bad", {"a"}, {"0", "1"}, {{0, 1}, {0, 0}}), GraphError);
  CHECK_THROWS_AS(monoid_propad("noid", {"a"}, {"0", "1"}, {{1, 0}, {0, 1}}), GraphError);
  CHECK_THROWS_AS(monoid_propad("sp", {"a"}, {"0"}, {{0}}, Support::Special, Mode::Wheeled), GraphError);
  for (Mode m : {Mode::Properadic, Mode::Wheeled})
    for (auto& p : sample_propads(3, 20, m)) {
      auto q = parse_propad(print_propad(p));
      CHECK(print_propad(q) == print_propad(p));
    }
  CHECK_THROWS_AS(parse_propad("propad P\ncolors a\nkind end\n"), GraphError);
  CHECK_THROWS_AS(parse_propad("propad P\ncolors a\nkind monoid\nelements 0 1\ncompose 0 0 = 0\nend\n"), GraphError);
}

TEST_CASE("sampled properads") {
  auto ps = sample_propads(11, 20);
  REQUIRE(ps.size() == 20);
  CHECK(ps[0].kind == PropadKind::End);
  CHECK(ps[0].set_size == std::vector<int>{2});
  for (auto& p : ps) {
    CHECK(p.colors.size() <= 2);
    if (p.kind == PropadKind::Monoid) CHECK(p.monoid.size() <= 3);
  }
  CHECK(print_propad(sample_propads(11, 20)[7]) == print_propad(ps[7]));
}

TEST_CASE("nerve sizes match the counting oracle") {
  for (auto sizes : {std::vector<int>{2}, std::vector<int>{1, 2}}) {
    std::vector<std::string> cs{"a", "b"};
    cs.resize(sizes.size());
    auto p = end_propad(cs, sizes);
    for (auto& g : small_shapes(false)) CHECK(nerve_at(p, g).size() == end_nerve_oracle(sizes, g));
  }
  auto m = monoid_propad("Z2", {"a"}, {"0", "1"}, z2, Support::Special);
  CHECK(nerve_at(m, corolla(0, 1)).empty());
  CHECK(nerve_at(m, linear(3)).size() == 8);
  CHECK(nerve_at(m, exceptional_edge()).size() == 1);
}

TEST_CASE("nerve restriction is functorial on composable maps") {
  auto p = end_propad({"a"}, {2});
  auto x = nerve(p);
  auto l3 = linear(3);
  int checked = 0;
  for (auto& d : cofaces_into(l3, Mode::Properadic))
    for (auto& e : cofaces_into(d.src, Mode::Properadic)) {
      auto de = compose(d, e);
      for (auto& v : x.values(l3)) {
        CHECK(x.restrict(de, v) == x.restrict(e, x.restrict(d, v)));
        ++checked;
      }
    }
  CHECK(checked > 0);
  auto s = codegeneracy(l3, 1);
  for (auto& d : cofaces_into(l3, Mode::Properadic)) {
    auto sd = compose(s, d);
    for (auto& v : x.values(s.tgt)) CHECK(x.restrict(sd, v) == x.restrict(d, x.restrict(s, v)));
  }
  for (auto& v : x.values(l3)) CHECK(x.restrict(identity_map(l3), v) == v);
}

TEST_CASE("Segal maps of nerves are bijective") {
  for (auto& p : sample_propads(5, 6)) {
    auto x = nerve(p);
    for (auto& g : small_shapes(false)) {
      if (g.num_vertices() < 2) continue;
      auto r = segal_check(x, g);
      CHECK(r.bijective());
    }
  }
}

TEST_CASE("partially grafted horn is a pair of elements") {
  auto p = end_propad({"a"}, {2});
  auto x = nerve(p);
  auto g = partially_grafted(ones(1), ones(2), ones(2), ones(1), {{0, 0}, {1, 1}});
  std::vector<Morphism> inner;
  for (auto& d : cofaces_into(g, Mode::Properadic))
    if (is_inner_coface(d)) inner.push_back(d);
  REQUIRE(inner.size() == 1);
  auto h = horn_problem(g, inner[0], Mode::Properadic);
  CHECK(h.faces.size() == 2);
  for (auto& f : h.faces) CHECK(f.src.num_vertices() == 1);
  auto fams = compatible_families(x, h);
  CHECK(fams.size() == corolla_ribbon(x, g).size());
  for (auto& fam : fams) CHECK(horn_fillers(x, h, fam).size() == 1);
}

TEST_CASE("contracted corolla horn is one element") {
  auto m = monoid_propad("Z2", {"a"}, {"0", "1"}, z2, Support::Balanced, Mode::Wheeled);
  auto x = nerve(m);
  auto g = graph_from_edges({"v"}, {{"i", "", "v"}, {"e", "v", "v"}, {"o", "v", ""}});
  std::vector<Morphism> inner;
  for (auto& d : cofaces_into(g, Mode::Wheeled))
    if (is_inner_coface(d)) inner.push_back(d);
  REQUIRE(inner.size() == 1);
  auto h = horn_problem(g, inner[0], Mode::Wheeled);
  REQUIRE(h.faces.size() == 1);
  CHECK(h.faces[0].src.num_vertices() == 1);
  for (auto& fam : compatible_families(x, h)) CHECK(horn_fillers(x, h, fam).size() == 1);
}

TEST_CASE("nerves are strict, mutants are not") {
  auto shapes = small_shapes(false, 3);
  auto p = end_propad({"a"}, {2});
  auto x = nerve(p);
  auto r = strict_check(x, shapes, "test");
  CHECK(r.segal);
  CHECK(r.fillers_exist);
  CHECK(r.fillers_unique);

  auto victim = first_nondegenerate(p, x, linear(2));
  REQUIRE(!victim.empty());
  auto y = without_element(x, linear(2), victim);
  CHECK(y.values(linear(2)).size() + 1 == x.values(linear(2)).size());
  CHECK(y.values(corolla(1, 1)).size() == x.values(corolla(1, 1)).size());
  auto ry = strict_check(y, shapes, "test");
  CHECK_FALSE(ry.segal);
  CHECK_FALSE(ry.fillers_unique);
}

TEST_CASE("pair labels: fillers exist on two-vertex shapes but are not unique") {
  auto x = product(nerve(end_propad({"a"}, {2})), pair_labels(z2, Mode::Properadic));
  auto r = strict_check(x, small_shapes(false, 2), "two vertices");
  CHECK_FALSE(r.segal);
  CHECK(r.fillers_exist);
  CHECK_FALSE(r.fillers_unique);
  auto r3 = strict_check(pair_labels(z2, Mode::Properadic), {linear(3)}, "linear");
  CHECK_FALSE(r3.fillers_exist);
}

TEST_CASE("homotopy on nerves is equality") {
  auto p = end_propad({"a"}, {2});
  auto x = nerve(p);
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 2}, {0, 1}, {1, 0}}) {
    auto h = homotopy_report(x, m, n);
    CHECK(h.reflexive);
    CHECK(h.symmetric);
    CHECK(h.transitive);
    CHECK(h.all_equal);
    CHECK(h.is_equality);
  }
  auto f = x.values(corolla(2, 1))[3];
  CHECK(homotopy_witness(x, 2, 1, true, 1, f, f).has_value());
  CHECK_FALSE(homotopy_witness(x, 2, 1, true, 1, f, x.values(corolla(2, 1))[4]).has_value());
  CHECK_THROWS_AS(homotopy_shape(1, 1, true, 1), GraphError);
}

TEST_CASE("homotopy relations on a non-strict truncation") {
  auto x = product(nerve(end_propad({"a"}, {2})), pair_labels(z2, Mode::Properadic));
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 2}}) {
    auto h = homotopy_report(x, m, n);
    CHECK(h.reflexive);
    CHECK(h.symmetric);
    CHECK(h.transitive);
    CHECK(h.all_equal);
  }
}

TEST_CASE("fundamental properad of a nerve recovers the properad") {
  auto shapes = small_shapes(false, 2);
  for (auto& p : sample_propads(2, 5)) {
    FundamentalPropad f(nerve(p), 3);
    CHECK(f.colors().size() == p.colors.size());
    CHECK(f.check_axioms(shapes, 8).empty());
    CHECK(compare_with(f, p, shapes).empty());
  }
  FundamentalPropad f(nerve(end_propad({"a"}, {2})), 3);
  CHECK_THROWS_AS(f.representative(1, 1, "junk"), GraphError);
}

TEST_CASE("wheeled nerves") {
  auto shapes = small_shapes(true);
  for (auto& p : sample_propads(4, 4, Mode::Wheeled)) {
    auto x = nerve(p);
    CHECK(x.values(exceptional_loop()).size() == p.colors.size());
    auto r = strict_check(x, shapes, "wheeled");
    CHECK(r.strict());
    FundamentalPropad f(x, 3);
    CHECK(f.check_axioms(shapes, 8).empty());
    CHECK(compare_with(f, p, shapes).empty());
  }
  auto e = end_propad({"a"}, {2});
  e.mode = Mode::Wheeled;
  CHECK_THROWS_AS(validate_propad(e), GraphError);
}
