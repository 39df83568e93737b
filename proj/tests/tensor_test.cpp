#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "pg/analysis.hpp"
#include "pg/corpus.hpp"
#include "pg/tensor.hpp"

using namespace pg;

namespace {

// Edge order chosen so every vertex listing reads as in the printed generators.
Graph worked_g() {
  return graph_from_edges({"u", "v", "w"}, {{"e1", "", "u"},
                                             {"e6", "u", "w"},
                                             {"e7", "u", "v"},
                                             {"e2", "", "v"},
                                             {"e8", "v", "w"},
                                             {"e9", "v", "w"},
                                             {"e5", "v", ""},
                                             {"e3", "w", ""},
                                             {"e4", "w", ""}});
}

Graph worked_h() {
  return graph_from_edges({"x", "y"}, {{"f2", "", "x"},
                                        {"f3", "", "x"},
                                        {"f1", "", "y"},
                                        {"f6", "x", "y"},
                                        {"f7", "x", "y"},
                                        {"f5", "x", ""},
                                        {"f4", "y", ""}});
}

std::vector<Graph> special_shapes(int max_vertices) {
  CorpusBounds b;
  b.max_vertices = max_vertices;
  b.max_internal = 3;
  b.max_legs = 3;
  std::vector<Graph> out;
  for (auto& e : generate_corpus(b)) {
    const Graph& g = e.graph;
    auto c = classify(g);
    if (c.special && c.wheel_free) out.push_back(decorate(g));
  }
  return out;
}

const Relation& relation_for(const Presentation& p, const std::string& a, const std::string& b) {
  for (auto& r : p.relations)
    if (r.p == a && r.q == b) return r;
  throw std::runtime_error("missing relation");
}

}  // namespace

TEST_CASE("smash product of the worked generating objects") {
  auto a = generating_object(worked_g());
  auto b = generating_object(worked_h());
  auto s = smash(a, b);
  CHECK(s.colors.size() == 63);
  // |vertices(G)| |edges(H)| + |edges(G)| |vertices(H)|
  CHECK(s.elements.size() == 3 * 7 + 9 * 2);
  std::set<std::string> names;
  for (auto& e : s.elements) names.insert(e.name);
  CHECK(names.size() == s.elements.size());
  CHECK(names.count("u*f2"));
  CHECK(names.count("e9*y"));
  for (auto& e : s.elements)
    if (e.name == "v*f4") {
      CHECK(e.ins == std::vector<std::string>{"(e7,f4)", "(e2,f4)"});
      CHECK(e.outs == std::vector<std::string>{"(e8,f4)", "(e9,f4)", "(e5,f4)"});
    }
}

TEST_CASE("smash with an empty factor") {
  GeneratingObject a{{"c1", "c2"}, {}};
  auto b = generating_object(corolla(1, 2));
  auto s = smash(a, b);
  CHECK(s.elements.size() == 2);
  for (auto& e : s.elements) CHECK_FALSE(e.left);
  CHECK(smash(b, a).elements.size() == 2);
}

TEST_CASE("smash is associative element-wise") {
  auto a = generating_object(linear(2));
  auto b = generating_object(corolla(1, 2));
  auto c = generating_object(corolla(2, 1));
  auto l = smash(as_generating_object(smash(a, b)), c);
  auto r = smash(a, as_generating_object(smash(b, c)));
  CHECK(l.colors.size() == r.colors.size());
  CHECK(l.elements.size() == r.elements.size());
  // Strip the bracketing: ((x,y),z) and (x,(y,z)) both become x,y,z.  A label p*d pairs like a
  // color, so '*' and ',' are identified.
  auto flat = [](std::string s) {
    std::string o;
    for (char ch : s)
      if (ch == '*') o += ',';
      else if (ch != '(' && ch != ')') o += ch;
    return o;
  };
  std::multiset<std::string> ls, rs;
  for (auto& e : l.elements) {
    std::string key = flat(e.name) + ":";
    for (auto& x : e.ins) key += flat(x) + ";";
    for (auto& x : e.outs) key += flat(x) + ";";
    ls.insert(key);
  }
  for (auto& e : r.elements) {
    std::string key = flat(e.name) + ":";
    for (auto& x : e.ins) key += flat(x) + ";";
    for (auto& x : e.outs) key += flat(x) + ";";
    rs.insert(key);
  }
  CHECK(ls == rs);
}

TEST_CASE("worked presentation") {
  auto p = tensor_presentation(worked_g(), worked_h());
  CHECK(p.relations.size() == 6);
  auto& ux = relation_for(p, "u", "x");
  CHECK(ux.left.input_colors() == std::vector<std::string>{"(e1,f2)", "(e1,f3)"});
  CHECK(ux.left.output_colors() ==
        std::vector<std::string>{"(e6,f6)", "(e7,f6)", "(e6,f7)", "(e7,f7)", "(e6,f5)", "(e7,f5)"});
  CHECK(ux.right.output_colors() ==
        std::vector<std::string>{"(e6,f6)", "(e6,f7)", "(e6,f5)", "(e7,f6)", "(e7,f7)", "(e7,f5)"});
  CHECK(ux.left.num_vertices() == 4);
  CHECK(ux.right.num_vertices() == 4);
  std::multiset<std::string> internal;
  for (auto& e : ux.left.edges())
    if (e.internal()) internal.insert(ux.left.color[e.in_flag]);
  CHECK(internal == std::multiset<std::string>{"(e1,f6)", "(e1,f7)", "(e1,f5)"});
  internal.clear();
  for (auto& e : ux.right.edges())
    if (e.internal()) internal.insert(ux.right.color[e.in_flag]);
  CHECK(internal == std::multiset<std::string>{"(e6,f2)", "(e7,f2)", "(e6,f3)", "(e7,f3)"});
  CHECK(ux.sigma_in == std::vector<int>{0, 1});
  CHECK(ux.sigma_out == std::vector<int>{0, 3, 1, 4, 2, 5});

  for (auto& r : p.relations) {
    validate(r.left);
    validate(r.right);
    CHECK(is_connected(r.left));
    CHECK(is_wheel_free(r.right));
    auto lin = r.left.input_colors(), rin = r.right.input_colors();
    auto lout = r.left.output_colors(), rout = r.right.output_colors();
    CHECK(std::multiset<std::string>(lin.begin(), lin.end()) == std::multiset<std::string>(rin.begin(), rin.end()));
    CHECK(std::multiset<std::string>(lout.begin(), lout.end()) == std::multiset<std::string>(rout.begin(), rout.end()));
    for (std::size_t i = 0; i < lout.size(); ++i) CHECK(rout[r.sigma_out[i]] == lout[i]);
    for (std::size_t i = 0; i < lin.size(); ++i) CHECK(rin[r.sigma_in[i]] == lin[i]);
  }
  auto text = print_presentation(p);
  CHECK(text.find("generators 39") != std::string::npos);
  CHECK(text.find("relations 6") != std::string::npos);
}

TEST_CASE("relation counts and class checks") {
  for (auto& g : special_shapes(2))
    for (auto& h : special_shapes(2)) {
      if (g.num_vertices() == 0 || h.num_vertices() == 0) continue;
      auto p = tensor_presentation(g, h);
      CHECK(p.relations.size() == static_cast<std::size_t>(g.num_vertices() * h.num_vertices()));
      CHECK(p.generators.elements.size() ==
            static_cast<std::size_t>(g.num_vertices()) * h.edges().size() + g.edges().size() * h.num_vertices());
    }
  CHECK_THROWS_AS(tensor_presentation(corolla(0, 1), corolla(1, 1)), ClassError);
  Graph cyc = graph_from_edges({"a", "b"}, {{"i", "", "a"}, {"x", "a", "b"}, {"y", "b", "a"}, {"o", "b", ""}});
  CHECK_THROWS_AS(tensor_presentation(cyc, corolla(1, 1)), ClassError);
  CHECK(tensor_presentation(cyc, corolla(1, 1), Mode::Wheeled).relations.size() == 2);
}

TEST_CASE("smallest relation is a pair of linear graphs") {
  auto r = make_relation({"p", {"a"}, {"b"}}, {"q", {"c"}, {"d"}});
  CHECK(r.left.num_vertices() == 2);
  CHECK(r.right.num_vertices() == 2);
  CHECK(classify(r.left).linear);
  CHECK(classify(r.right).linear);
  CHECK(r.left.input_colors() == std::vector<std::string>{"(a,c)"});
  CHECK(r.right.output_colors() == std::vector<std::string>{"(b,d)"});
}

TEST_CASE("rewriting the printed element") {
  Builder b;
  auto vertex = [&](const std::string& name, const std::string& label, std::vector<std::string> ins,
                    std::vector<std::string> outs) {
    int v = b.vertex(name, label);
    std::vector<int> in, out;
    for (std::size_t k = 0; k < ins.size(); ++k) in.push_back(b.in_flag(v, name + "i" + std::to_string(k), ins[k]));
    for (std::size_t k = 0; k < outs.size(); ++k) out.push_back(b.out_flag(v, name + "o" + std::to_string(k), outs[k]));
    return std::make_pair(in, out);
  };
  auto W = vertex("W", "w*f4", {"(e6,f4)", "(e8,f4)", "(e9,f4)"}, {"(e3,f4)", "(e4,f4)"});
  auto V1 = vertex("V1", "v*f4", {"(e7,f4)", "(e2,f4)"}, {"(e8,f4)", "(e9,f4)", "(e5,f4)"});
  auto V2 = vertex("V2", "v*f4", {"(e7,f4)", "(e2,f4)"}, {"(e8,f4)", "(e9,f4)", "(e5,f4)"});
  auto Y1 = vertex("Y1", "e7*y", {"(e7,f1)", "(e7,f6)", "(e7,f7)"}, {"(e7,f4)"});
  auto Y2 = vertex("Y2", "e2*y", {"(e2,f1)", "(e2,f6)", "(e2,f7)"}, {"(e2,f4)"});
  auto U = vertex("U", "u*f4", {"(e1,f4)"}, {"(e6,f4)", "(e7,f4)"});
  auto Y3 = vertex("Y3", "e1*y", {"(e1,f1)", "(e1,f6)", "(e1,f7)"}, {"(e1,f4)"});
  auto X = vertex("X", "e1*x", {"(e1,f2)", "(e1,f3)"}, {"(e1,f6)", "(e1,f7)", "(e1,f5)"});
  b.connect(V1.second[0], W.first[1]);
  b.connect(V2.second[1], W.first[2]);
  b.connect(Y1.second[0], V1.first[0]);
  b.connect(Y2.second[0], V1.first[1]);
  b.connect(U.second[1], V2.first[0]);
  b.connect(Y3.second[0], U.first[0]);
  b.connect(X.second[0], Y3.first[1]);
  b.connect(X.second[1], Y3.first[2]);
  Graph k = b.build();
  validate(k);
  CHECK(k.gin.size() == 11);
  CHECK(k.gout.size() == 8);

  auto p = tensor_presentation(worked_g(), worked_h());
  auto vy = relation_for(p, "v", "y");
  auto uy = relation_for(p, "u", "y");
  Graph k1 = apply_relation(k, vy, {k.find_vertex("V1"), k.find_vertex("Y1"), k.find_vertex("Y2")}, true);
  Graph k2 = apply_relation(k1, uy, {k1.find_vertex("U"), k1.find_vertex("Y3")}, true);
  validate(k2);
  CHECK(is_connected(k2));
  CHECK(is_wheel_free(k2));
  CHECK(k2.num_vertices() == 8 - 3 + 6 - 2 + 5);
  std::multiset<std::string> labels(k2.vlabel.begin(), k2.vlabel.end());
  CHECK(labels.count("v*f1") == 1);
  CHECK(labels.count("v*f6") == 1);
  CHECK(labels.count("e8*y") == 1);
  CHECK(labels.count("u*f7") == 1);
  CHECK(labels.count("e6*y") == 1);
  CHECK(labels.count("v*f4") == 1);
  auto ki = k.input_colors(), k2i = k2.input_colors();
  CHECK(std::multiset<std::string>(ki.begin(), ki.end()) == std::multiset<std::string>(k2i.begin(), k2i.end()));

  CHECK_THROWS_AS(apply_relation(k, uy, {k.find_vertex("V1"), k.find_vertex("Y1")}, true), GraphError);
}

TEST_CASE("distributivity chains have length mn") {
  auto shapes = special_shapes(3);
  REQUIRE(shapes.size() > 20);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < shapes.size(); i += 3)
    for (std::size_t j = 0; j < shapes.size(); j += 2) {
      auto c = distributivity_decompose(shapes[i], shapes[j]);
      CHECK(c.steps.size() == static_cast<std::size_t>(shapes[i].num_vertices() * shapes[j].num_vertices()));
      CHECK(verify_chain(c).empty());
      ++checked;
    }
  CHECK(checked > 100);
}

TEST_CASE("two-step and four-step chains") {
  auto c = distributivity_decompose(decorate(linear(2)), decorate(corolla(1, 2)));
  CHECK(c.steps.size() == 2);
  CHECK(verify_chain(c).empty());
  // three copies of p on the left when q has three outputs
  auto c3 = distributivity_decompose(decorate(linear(2)), decorate(corolla(1, 3)));
  CHECK(c3.steps.size() == 2);
  CHECK(c3.left.num_vertices() == 3 * 2 + 1);
  auto c4 = distributivity_decompose(decorate(linear(2)), decorate(linear(2)));
  CHECK(c4.steps.size() == 4);
  CHECK(verify_chain(c4).empty());
  auto c0 = distributivity_decompose(exceptional_edge("a"), decorate(corolla(2, 2)));
  CHECK(c0.steps.empty());
  CHECK(verify_chain(c0).empty());
  CHECK(canon_free(c0.left) == canon_free(c0.right));
  CHECK_THROWS_AS(distributivity_decompose(decorate(linear(4)), decorate(linear(1))), GraphError);
  CHECK_THROWS_AS(distributivity_decompose(decorate(corolla(0, 1)), decorate(linear(1))), ClassError);
  CHECK(format_chain(c).find("step 2") != std::string::npos);
}

TEST_CASE("tampered chains are rejected") {
  auto c = distributivity_decompose(decorate(linear(2)), decorate(linear(2)));
  auto bad = c;
  std::swap(bad.steps[0], bad.steps[1]);
  CHECK_FALSE(verify_chain(bad).empty());
  bad = c;
  bad.steps.pop_back();
  CHECK_FALSE(verify_chain(bad).empty());
  bad = c;
  bad.steps[1].removed.pop_back();
  CHECK_FALSE(verify_chain(bad).empty());
}

TEST_CASE("maps out of the tensor product into a commutative monoid") {
  const std::vector<std::vector<int>> z3{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  auto r = monoid_propad("Z3", {"*"}, {"0", "1", "2"}, z3);
  auto g = decorate(corolla(1, 2)), h = decorate(linear(2));
  auto pres = tensor_presentation(g, h);
  std::mt19937_64 rng(99);
  int satisfied = 0;
  for (int trial = 0; trial < 200; ++trial) {
    GeneratorMap f;
    for (auto& c : pres.generators.colors) f.color[c] = "*";
    std::map<std::string, int> value;
    for (auto& e : pres.generators.elements) {
      value[e.name] = static_cast<int>(rng() % 3);
      f.element[e.name] = std::to_string(value[e.name]);
    }
    auto fails = distributivity_failures(pres.relations, r, f);
    // oracle: the sum of the generator values on each side of the relation
    std::set<std::string> expected;
    for (auto& rel : pres.relations) {
      int left = 0, right = 0;
      for (auto& l : rel.left.vlabel) left += value[l];
      for (auto& l : rel.right.vlabel) right += value[l];
      if (left % 3 != right % 3) expected.insert(rel.p + " x " + rel.q);
    }
    CHECK(std::set<std::string>(fails.begin(), fails.end()) == expected);
    if (!fails.empty()) continue;
    ++satisfied;
    // then every distributivity between small elements holds as well
    for (auto& pe : enumerate_elements(g, 1))
      for (auto& qe : enumerate_elements(h, 2)) {
        if (pe.num_vertices() == 0 && qe.num_vertices() == 0) continue;
        auto c = distributivity_decompose(pe, qe);
        CHECK(evaluate_under(c.left, r, f) == evaluate_under(c.right, r, f));
      }
  }
  CHECK(satisfied > 0);
}

TEST_CASE("maps into endomorphisms of a two-element set") {
  // (1;1) with (1;1): the relation says a square of functions commutes.
  auto r = end_propad({"*"}, {2});
  auto pres = tensor_presentation(decorate(linear(1)), decorate(linear(1)));
  REQUIRE(pres.relations.size() == 1);
  const std::vector<std::string> fns{"0,0", "0,1", "1,0", "1,1"};
  auto apply = [](const std::string& fn, int x) { return fn[2 * x] - '0'; };
  int count = 0, oracle = 0;
  std::vector<std::string> names;
  for (auto& e : pres.generators.elements) names.push_back(e.name);
  REQUIRE(names.size() == 4);
  for (int code = 0; code < 256; ++code) {
    GeneratorMap f;
    for (auto& c : pres.generators.colors) f.color[c] = "*";
    std::map<std::string, std::string> val;
    for (int k = 0; k < 4; ++k) f.element[names[k]] = val[names[k]] = fns[(code >> (2 * k)) & 3];
    if (distributivity_failures(pres.relations, r, f).empty()) ++count;
    auto& rel = pres.relations[0];
    // left: top over bottom; right: top over bottom
    std::string lt = val[rel.left.vlabel[0]], lb = val[rel.left.vlabel[1]];
    std::string rt = val[rel.right.vlabel[0]], rb = val[rel.right.vlabel[1]];
    bool commutes = true;
    for (int x = 0; x < 2; ++x) commutes = commutes && apply(lt, apply(lb, x)) == apply(rt, apply(rb, x));
    oracle += commutes;
  }
  CHECK(count == oracle);
  CHECK(count > 16);
}
