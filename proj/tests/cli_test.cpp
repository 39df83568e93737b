#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "pg/analysis.hpp"
#include "pg/nerve.hpp"

using namespace pg;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "pgtool");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = pgtool::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct ScratchDir {
  fs::path path;
  ScratchDir() : path(fs::temp_directory_path() / ("pgtool_test_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
};

fs::path scratch() {
  static ScratchDir dir;
  return dir.path;
}

std::string write(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string graph_file(const std::string& name, const Graph& g) { return write(name, print_graph(g)); }

int count_lines(const std::string& text, const std::string& prefix) {
  int n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

Graph colored(Graph g, const std::string& c) {
  for (auto& x : g.color) x = c;
  return g;
}

}  // namespace

TEST_CASE("classify reports the cycle that is not a wheel") {
  auto r = run({"classify", graph_file("cycle.graph", fx::cycle_not_wheel())});
  CHECK(r.code == 0);
  CHECK(r.out.find("connected=true\n") != std::string::npos);
  CHECK(r.out.find("wheel-free=true\n") != std::string::npos);
  CHECK(r.out.find("simply-connected=false\n") != std::string::npos);
}

TEST_CASE("enumerate elements of a linear graph") {
  auto r = run({"enumerate", "--max-vertices", "2", graph_file("l2.graph", linear(2))});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("elements 6\n", 0) == 0);
  CHECK(count_lines(r.out, "element ") == 6);
  auto w = run({"--wheeled", "enumerate", "--max-vertices", "1", graph_file("loop.graph", exceptional_loop())});
  CHECK(w.code == 0);
  // the unit edge and the loop itself
  CHECK(w.out.rfind("elements 2\n", 0) == 0);
}

TEST_CASE("dot output of the exceptional loop is deterministic") {
  auto path = graph_file("loop.graph", exceptional_loop());
  auto a = run({"dot", path});
  auto b = run({"dot", path, path, "--jobs", "2"});
  CHECK(a.code == 0);
  CHECK(a.out.find("->") != std::string::npos);
  CHECK(b.out == a.out + a.out);
}

TEST_CASE("validate verdicts and exit codes") {
  auto good = graph_file("good.graph", linear(1));
  auto wheel = graph_file("wheel.graph", fx::directed_four_cycle());
  auto bad = write("bad.graph", "graph\nflags: a\nend\n");
  CHECK(run({"validate", good}).code == 0);
  auto r = run({"validate", good, wheel});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL\t" + wheel + " properadic object\thas a wheel") != std::string::npos);
  CHECK(run({"--wheeled", "validate", wheel}).code == 0);
  CHECK(run({"validate", bad}).code == 1);
  CHECK(run({"validate", (scratch() / "missing.graph").string()}).code == 2);
  CHECK(run({"no-such-verb"}).code == 2);
  auto usage = run({"factor"});
  CHECK(usage.code == 2);
  CHECK(usage.err.find("--kind") != std::string::npos);
}

TEST_CASE("factor and substitute") {
  auto k = graph_file("k.graph", fx::closest_neighbor_k());
  auto r = run({"factor", k, "--kind", "inner-prop"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("factorizations 2\n", 0) == 0);
  CHECK(r.out.find("PASS\trecomposition") != std::string::npos);
  CHECK(run({"factor", k, "--kind", "sideways"}).code == 2);

  auto s = run({"substitute", graph_file("outer.graph", linear(2)), "v1=" + graph_file("inner.graph", linear(2))});
  CHECK(s.code == 0);
  CHECK(count_lines(s.out, "vertex ") == 3);
  CHECK(run({"substitute", graph_file("outer2.graph", linear(2)), "v1=" + graph_file("c12.graph", corolla(1, 2))}).code == 2);
}

TEST_CASE("maps: homset, factorize-map and codim2") {
  auto r = run({"homset", graph_file("l1.graph", linear(1)), graph_file("l2.graph", linear(2))});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("maps 6\n", 0) == 0);

  auto s = write("s.map", print_morphism(codegeneracy(linear(2), 0)));
  auto f = run({"factorize-map", s});
  CHECK(f.code == 0);
  CHECK(f.out.find("codegeneracies 1\n") != std::string::npos);

  Graph d = fx::double_edge();
  Graph hp = graph_from_edges({"up", "vp"}, {{"em", "", "vp"}, {"fp", "up", "vp"}, {"ep", "up", ""}});
  auto psi0 = fx::f0_by_names(hp, d, {{"em", "e"}, {"fp", "f"}, {"ep", "e"}});
  Morphism psi = make_morphism(hp, d, psi0, {fx::corolla_along(hp, d, psi0, 0, 0), fx::corolla_along(hp, d, psi0, 1, 1)});
  auto psi_file = write("psi.map", print_morphism(psi));
  auto np = run({"factorize-map", psi_file});
  CHECK(np.code == 1);
  CHECK(np.out.find("FAIL\tgraphical") != std::string::npos);
  CHECK(run({"--wheeled", "factorize-map", psi_file}).code == 0);

  auto du = cofaces_into(linear(3), Mode::Properadic).front();
  auto dv = cofaces_into(du.src, Mode::Properadic).front();
  auto c = run({"codim2", write("du.map", print_morphism(du)), write("dv.map", print_morphism(dv))});
  CHECK(c.code == 0);
  CHECK(c.out.find("classes 2\n") != std::string::npos);
}

TEST_CASE("corpus and reedy, with the corpus directory from the environment") {
  auto dir = (scratch() / "corpus").string();
  auto w = run({"corpus", "--out", dir, "--max-vertices", "2", "--max-internal", "1"});
  CHECK(w.code == 0);
  CHECK(fs::exists(fs::path(dir) / "MANIFEST"));
  auto r = run({"reedy", "--corpus", dir});
  CHECK(r.code == 0);
  CHECK(count_lines(r.out, "verdict\tPASS") == 5);
  ::setenv("PROPGRAPH_CORPUS", dir.c_str(), 1);
  CHECK(run({"reedy"}).code == 0);
  ::unsetenv("PROPGRAPH_CORPUS");
  CHECK(run({"reedy"}).code == 2);
}

TEST_CASE("nerve, segal, horn and fundamental") {
  auto end2 = write("end2.propad", print_propad(end_propad({"a"}, {2})));
  auto n = run({"nerve", end2, graph_file("c11.graph", colored(corolla(1, 1), "a"))});
  CHECK(n.code == 0);
  CHECK(n.out.rfind("elements 4\n", 0) == 0);

  auto s = run({"segal", end2, "--max-vertices", "2"});
  CHECK(s.code == 0);
  CHECK(count_lines(s.out, "verdict\tPASS") == 3);

  auto l2 = graph_file("l2a.graph", colored(linear(2), "a"));
  auto faces = run({"horn", end2, "--inner", l2});
  CHECK(faces.out.rfind("inner faces 1\n", 0) == 0);
  auto h = run({"horn", end2, "--inner", l2, "--exclude", "0"});
  CHECK(h.code == 0);
  CHECK(h.out.find("families 16\n") != std::string::npos);
  CHECK(run({"horn", end2, "--inner", l2, "--exclude", "3"}).code == 2);

  auto f = run({"fundamental", end2, "--max-arity", "2", "--max-vertices", "2"});
  CHECK(f.code == 0);
  CHECK(f.out.find("component (1,1) 4\n") != std::string::npos);

  CHECK(run({"nerve", write("junk.propad", "propad x\nkind nothing\nend\n"), l2}).code == 2);
}

TEST_CASE("tensor and distribute") {
  auto g = graph_file("g.graph", corolla(1, 2));
  auto h = graph_file("h.graph", linear(2));
  auto t = run({"tensor", g, h});
  CHECK(t.code == 0);
  CHECK(t.out.find("relations 2") != std::string::npos);
  auto d = run({"distribute", graph_file("p.graph", linear(1)), h});
  CHECK(d.code == 0);
  CHECK(d.out.find("step 2") != std::string::npos);
  CHECK(run({"distribute", graph_file("c01.graph", corolla(0, 1)), h}).code == 2);
}

TEST_CASE("structured report") {
  auto path = (scratch() / "report.json").string();
  auto r = run({"--report", path, "validate", graph_file("l1.graph", linear(1))});
  CHECK(r.code == 0);
  std::ifstream in(path);
  auto j = nlohmann::ordered_json::parse(in);
  std::vector<std::string> keys;
  for (auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"command", "inputs", "verdicts", "timing_ms"});
  CHECK(j["verdicts"].size() == 2);
  CHECK(j["verdicts"][0]["pass"] == true);
}
