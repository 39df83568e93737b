#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pg/analysis.hpp"
#include "pg/corpus.hpp"
#include "pg/gamma.hpp"
#include "pg/nerve.hpp"
#include "pg/substitution.hpp"
#include "pg/tensor.hpp"

namespace pgtool {
namespace {

using namespace pg;

constexpr const char* kCorpusEnv = "PROPGRAPH_CORPUS";

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Verdict {
  std::string check;
  bool pass = true;
  std::string witness;
};

struct Report {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<Verdict> verdicts;
  std::ostringstream body;
  void verdict(const std::string& check, bool pass, const std::string& witness = {}) {
    verdicts.push_back({check, pass, witness});
  }
  bool ok() const {
    for (auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
};

struct Options {
  bool wheeled = false;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string report_path;
  Mode mode() const { return wheeled ? Mode::Wheeled : Mode::Properadic; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Graph load_graph(const std::string& path) {
  try {
    Graph g = parse_graph(read_file(path));
    validate(g);
    return g;
  } catch (const GraphError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Morphism load_map(const std::string& path, Mode m) {
  try {
    return parse_morphism(read_file(path), m);
  } catch (const GraphError& e) {
    throw InputError(path + ": " + e.what());
  }
}

FinitePropad load_propad(const std::string& path) {
  try {
    return parse_propad(read_file(path));
  } catch (const GraphError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string one_line(const Graph& g) {
  std::string s = print_graph(g);
  for (auto& c : s)
    if (c == '\n') c = ' ';
  return s;
}

std::string default_corpus_dir(const std::string& given) {
  if (!given.empty()) return given;
  if (const char* env = std::getenv(kCorpusEnv)) return env;
  throw InputError(std::string("no corpus directory: pass --corpus or set ") + kCorpusEnv);
}

// Applies f to every file on `jobs` threads; results come back in input order.
template <class R, class F>
std::vector<R> per_file(const std::vector<std::string>& files, int jobs, F f) {
  std::vector<R> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) results[i] = f(files[i]);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

// ---------------------------------------------------------------------------------------------
// Verbs.  Library errors (GraphError, ClassError) propagate and become input errors.

void cmd_validate(Report& r, const Options& o, const std::vector<std::string>& files) {
  struct Result {
    std::string error, object;
  };
  auto results = per_file<Result>(files, o.jobs, [&](const std::string& path) {
    Result res;
    Graph g;
    try {
      g = parse_graph(read_file(path));
      validate(g);
    } catch (const GraphError& e) {
      res.error = e.what();
      return res;
    }
    if (!is_connected(g)) res.object = "not connected";
    else if (!o.wheeled && !is_wheel_free(g)) res.object = "has a wheel";
    return res;
  });
  for (std::size_t i = 0; i < files.size(); ++i) {
    r.verdict(files[i] + " graph axioms", results[i].error.empty(), results[i].error);
    if (results[i].error.empty())
      r.verdict(files[i] + (o.wheeled ? " wheeled object" : " properadic object"), results[i].object.empty(),
                results[i].object);
  }
}

void cmd_classify(Report& r, const Options& o, const std::vector<std::string>& files) {
  auto results = per_file<std::string>(files, o.jobs, [](const std::string& path) { return format_class(classify(load_graph(path))); });
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (files.size() > 1) r.body << "# " << files[i] << "\n";
    r.body << results[i];
  }
}

void cmd_factor(Report& r, const std::string& file, const std::string& kind_name) {
  FactorKind kind;
  try {
    kind = parse_factor_kind(kind_name);
  } catch (const std::invalid_argument&) {
    throw InputError("unknown factorization kind " + kind_name);
  }
  Graph k = load_graph(file);
  auto fs = factorizations(k, kind);
  r.body << "factorizations " << fs.size() << "\n";
  auto es = k.edges();
  int bad = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto& f = fs[i];
    r.body << "factorization " << i << " " << factor_kind_name(f.kind) << "\n";
    r.body << "witness";
    for (int v : f.vertices) r.body << " vertex=" << k.vname[v];
    if (f.edge >= 0) r.body << " edge=" << es[f.edge].name;
    if (f.leg >= 0) r.body << " leg=" << k.flag[f.leg];
    r.body << "\nouter at " << f.outer.vname[f.w] << "\n" << print_graph(f.outer) << "inner\n" << print_graph(f.inner);
    bad += !strict_iso(recompose(f), k).has_value();
  }
  r.verdict("recomposition", bad == 0, bad ? std::to_string(bad) + " factorizations do not recompose" : "");
}

void cmd_substitute(Report& r, const std::string& outer_file, const std::vector<std::string>& assignments) {
  Graph g = load_graph(outer_file);
  std::map<int, Graph> inner;
  for (auto& a : assignments) {
    auto eq = a.find('=');
    if (eq == std::string::npos) throw InputError("expected <vertex>=<file>, got " + a);
    int v = g.find_vertex(a.substr(0, eq));
    if (v < 0) throw InputError("no vertex " + a.substr(0, eq) + " in " + outer_file);
    inner[v] = load_graph(a.substr(eq + 1));
    r.inputs.push_back(a.substr(eq + 1));
  }
  r.body << print_graph(substitute(g, inner).graph);
}

void cmd_enumerate(Report& r, const Options& o, const std::string& file, int max_vertices) {
  Graph g = load_graph(file);
  auto elems = enumerate_elements(g, max_vertices, o.mode());
  r.body << "elements " << elems.size() << "\n";
  for (std::size_t i = 0; i < elems.size(); ++i) r.body << "element " << i << "\n" << print_graph(elems[i]);
}

void cmd_homset(Report& r, const Options& o, const std::string& a, const std::string& b) {
  Graph g = load_graph(a), k = load_graph(b);
  auto maps = enumerate_graphical_maps(g, k, o.mode());
  r.body << "maps " << maps.size() << "\n";
  for (auto& f : maps) r.body << print_morphism(f);
}

void cmd_factorize_map(Report& r, const Options& o, const std::string& file) {
  Morphism f = load_map(file, o.mode());
  bool graphical = is_graphical(f, o.mode());
  r.verdict("graphical", graphical, graphical ? "" : "the map does not factor through a subgraph");
  if (!graphical) return;
  MapFactorization a = factorize(f, o.mode(), o.seed);
  r.body << "codegeneracies " << a.codegeneracies.size() << "\ninner cofaces " << a.inner.size() << "\nouter cofaces "
         << a.outer.size() << "\n";
  if (a.exceptional) r.body << "exceptional coface\n";
  r.body << "minus part\n" << print_morphism(a.minus_part()) << "plus part\n" << print_morphism(a.plus_part());
  r.verdict("recomposition", same_map(a.composite(), f));
  MapFactorization b = factorize(f, o.mode());
  r.verdict("independent of choices", equivalent_factorizations(a, b));
}

void cmd_codim2(Report& r, const Options& o, const std::string& d1_file, const std::string& d2_file) {
  Morphism du = load_map(d1_file, o.mode()), dv = load_map(d2_file, o.mode());
  auto alt = codim2_alternative(dv, du, o.mode());
  r.verdict("alternative exists", alt.has_value());
  if (!alt) return;
  r.body << "shape " << alt->shape << "\nclasses " << alt->classes << "\nfirst\n"
         << print_morphism(alt->dy) << "second\n" << print_morphism(alt->dx);
  r.verdict("unique up to listing", alt->classes == 2, std::to_string(alt->classes) + " classes");
  r.verdict("same composite", same_map(compose(alt->dx, alt->dy), compose(du, dv)));
}

void cmd_reedy(Report& r, const std::string& dir) {
  auto corpus = graphs_of(read_corpus(default_corpus_dir(dir)));
  std::vector<Graph> wheel_free;
  for (auto& g : corpus)
    if (is_wheel_free(g)) wheel_free.push_back(g);
  ReedyReport rr = reedy_axioms(wheel_free);
  r.body << format_reedy(rr);
  r.verdict("degree", rr.degree_axiom);
  r.verdict("plus and minus meet in isomorphisms", rr.intersection_axiom);
  r.verdict("factorization", rr.factorization_axiom);
  r.verdict("minus rigid", rr.minus_rigid);
  r.verdict("plus rigid", rr.plus_rigid);
  for (auto& f : rr.failures) r.body << "failure " << f << "\n";
}

std::vector<Graph> shapes_for(const FinitePropad& p, const std::string& dir, int max_vertices) {
  if (!dir.empty()) return graphs_of(read_corpus(dir));
  CorpusBounds b;
  b.max_vertices = max_vertices;
  b.max_internal = p.mode == Mode::Wheeled ? 2 : 3;
  b.max_legs = 2;
  b.max_arity = 3;
  b.wheeled = p.mode == Mode::Wheeled;
  // Shapes are colored by the propad's colors; the corpus uses the first color.
  auto shapes = graphs_of(generate_corpus(b));
  for (auto& g : shapes)
    for (auto& c : g.color) c = p.colors.front();
  return shapes;
}

void cmd_nerve(Report& r, const std::string& propad_file, const std::string& shape_file) {
  FinitePropad p = load_propad(propad_file);
  Graph g = load_graph(shape_file);
  auto values = nerve_at(p, g);
  r.body << "elements " << values.size() << "\n";
  for (auto& v : values) r.body << v << "\n";
}

void cmd_segal(Report& r, const std::string& propad_file, const std::string& dir, int max_vertices) {
  FinitePropad p = load_propad(propad_file);
  auto x = nerve(p);
  auto shapes = shapes_for(p, dir, max_vertices);
  StrictReport s = strict_check(x, shapes, std::to_string(shapes.size()) + " shapes");
  for (auto& l : s.lines) r.body << l << "\n";
  r.verdict("segal maps bijective", s.segal);
  r.verdict("inner horn fillers exist", s.fillers_exist);
  r.verdict("inner horn fillers unique", s.fillers_unique);
}

void cmd_horn(Report& r, const std::string& propad_file, const std::string& shape_file, int exclude) {
  FinitePropad p = load_propad(propad_file);
  Graph g = load_graph(shape_file);
  std::vector<Morphism> inner;
  for (auto& d : cofaces_into(g, p.mode, p.mode == Mode::Wheeled))
    if (is_inner_coface(d)) inner.push_back(d);
  if (exclude < 0) {
    r.body << "inner faces " << inner.size() << "\n";
    for (std::size_t i = 0; i < inner.size(); ++i) r.body << "face " << i << " " << one_line(inner[i].src) << "\n";
    return;
  }
  if (exclude >= static_cast<int>(inner.size())) throw InputError("no inner face " + std::to_string(exclude));
  auto x = nerve(p);
  HornProblem h = horn_problem(g, inner[exclude], p.mode);
  auto families = compatible_families(x, h);
  std::size_t missing = 0, several = 0;
  for (std::size_t i = 0; i < families.size(); ++i) {
    auto fillers = horn_fillers(x, h, families[i]);
    r.body << "family " << i << " fillers " << fillers.size() << "\n";
    missing += fillers.empty();
    several += fillers.size() > 1;
  }
  r.body << "faces " << h.faces.size() << "\nfamilies " << families.size() << "\n";
  r.verdict("fillers exist", missing == 0, std::to_string(missing) + " families without a filler");
  r.verdict("fillers unique", several == 0, std::to_string(several) + " families with several fillers");
}

void cmd_fundamental(Report& r, const std::string& propad_file, int max_arity, int max_vertices) {
  FinitePropad p = load_propad(propad_file);
  FundamentalPropad f(nerve(p), max_arity);
  r.body << "colors " << join(f.colors(), " ") << "\n";
  for (int m = 0; m <= max_arity; ++m)
    for (int n = 0; m + n <= max_arity; ++n) {
      auto& e = f.elements(m, n);
      r.body << "component (" << m << "," << n << ") " << e.size() << "\n";
    }
  auto shapes = shapes_for(p, "", max_vertices);
  auto ax = f.check_axioms(shapes, 8);
  for (auto& a : ax) r.body << "axiom " << a << "\n";
  r.verdict("properad axioms", ax.empty(), ax.empty() ? "" : ax.front());
  auto cmp = compare_with(f, p, shapes);
  for (auto& c : cmp) r.body << "mismatch " << c << "\n";
  r.verdict("recovers the properad", cmp.empty(), cmp.empty() ? "" : cmp.front());
}

void cmd_tensor(Report& r, const Options& o, const std::string& a, const std::string& b) {
  Graph g = load_graph(a), h = load_graph(b);
  r.body << print_presentation(tensor_presentation(g, h, o.mode()));
}

void cmd_distribute(Report& r, const std::string& a, const std::string& b) {
  Graph p = decorate(load_graph(a)), q = decorate(load_graph(b));
  auto c = distributivity_decompose(p, q);
  r.body << format_chain(c);
  auto problems = verify_chain(c);
  r.verdict("chain verified", problems.empty(), problems.empty() ? "" : problems.front());
  std::size_t mn = static_cast<std::size_t>(p.num_vertices() * q.num_vertices());
  r.verdict("length mn", c.steps.size() == mn, std::to_string(c.steps.size()) + " steps");
}

void cmd_dot(Report& r, const Options& o, const std::vector<std::string>& files) {
  auto results = per_file<std::string>(files, o.jobs, [](const std::string& path) { return to_dot(load_graph(path)); });
  for (auto& d : results) r.body << d;
}

void cmd_corpus(Report& r, const Options& o, const std::string& dir, const CorpusBounds& b0) {
  CorpusBounds b = b0;
  b.wheeled = o.wheeled;
  std::string out = default_corpus_dir(dir);
  auto corpus = generate_corpus(b);
  write_corpus(out, corpus, b);
  r.body << "wrote " << corpus.size() << " graphs to " << out << "\n";
}

// ---------------------------------------------------------------------------------------------

void emit(const Report& r, double ms, const Options& o, std::ostream& out) {
  out << r.body.str();
  for (auto& v : r.verdicts)
    out << "verdict\t" << (v.pass ? "PASS" : "FAIL") << "\t" << v.check << (v.witness.empty() || v.pass ? "" : "\t" + v.witness)
        << "\n";
  if (o.report_path.empty()) return;
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  j["verdicts"] = nlohmann::ordered_json::array();
  for (auto& v : r.verdicts) j["verdicts"].push_back({{"check", v.check}, {"pass", v.pass}, {"witness", v.witness}});
  j["timing_ms"] = ms;
  std::ofstream f(o.report_path);
  if (!f) throw InputError("cannot write " + o.report_path);
  f << j.dump(2) << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graphs, graphical properads and their nerves", "pgtool"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--wheeled", o.wheeled, "Work in the wheeled setting");
  app.add_option("--seed", o.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--jobs", o.jobs, "Files processed in parallel")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--report", o.report_path, "Also write a JSON report to this file");

  Report r;
  std::function<void()> action;
  std::vector<std::string> files, assignments;
  std::string a, b, kind, dir, shape;
  int max_vertices = 2, max_arity = 3, exclude = -1;
  CorpusBounds bounds;

  auto* v = app.add_subcommand("validate", "Check graph files against the graph axioms");
  v->add_option("files", files, "Graph files")->required()->check(CLI::ExistingFile);
  v->callback([&] { action = [&] { cmd_validate(r, o, files); }; });

  auto* c = app.add_subcommand("classify", "Print the class table of graph files");
  c->add_option("files", files, "Graph files")->required()->check(CLI::ExistingFile);
  c->callback([&] { action = [&] { cmd_classify(r, o, files); }; });

  auto* f = app.add_subcommand("factor", "List the factorizations of a graph of one kind");
  f->add_option("file", a, "Graph file")->required()->check(CLI::ExistingFile);
  f->add_option("--kind", kind, "inner-prop, outer-prop, inner-diop, outer-diop, inner-contr or outer-contr")->required();
  f->callback([&] { action = [&] { cmd_factor(r, a, kind); }; });

  auto* s = app.add_subcommand("substitute", "Substitute graphs into vertices of an outer graph");
  s->add_option("outer", a, "Outer graph file")->required()->check(CLI::ExistingFile);
  s->add_option("assignments", assignments, "<vertex>=<graph file>")->required();
  s->callback([&] { action = [&] { cmd_substitute(r, a, assignments); }; });

  auto* e = app.add_subcommand("enumerate", "Elements of the graphical properad of a graph");
  e->add_option("file", a, "Graph file")->required()->check(CLI::ExistingFile);
  e->add_option("--max-vertices", max_vertices, "Largest element size")->capture_default_str();
  e->callback([&] { action = [&] { cmd_enumerate(r, o, a, max_vertices); }; });

  auto* h = app.add_subcommand("homset", "Graphical maps between two graphs");
  h->add_option("source", a, "Source graph file")->required()->check(CLI::ExistingFile);
  h->add_option("target", b, "Target graph file")->required()->check(CLI::ExistingFile);
  h->callback([&] { action = [&] { cmd_homset(r, o, a, b); }; });

  auto* fm = app.add_subcommand("factorize-map", "Factor a graphical map into codegeneracies, an isomorphism and cofaces");
  fm->add_option("map", a, "Map file")->required()->check(CLI::ExistingFile);
  fm->callback([&] { action = [&] { cmd_factorize_map(r, o, a); }; });

  auto* c2 = app.add_subcommand("codim2", "The other factorization of a composite of two cofaces");
  c2->add_option("outer", a, "Coface into the target")->required()->check(CLI::ExistingFile);
  c2->add_option("inner", b, "Coface composable before it")->required()->check(CLI::ExistingFile);
  c2->callback([&] { action = [&] { cmd_codim2(r, o, a, b); }; });

  auto* re = app.add_subcommand("reedy", "Check the Reedy axioms on the wheel-free graphs of a corpus");
  re->add_option("--corpus", dir, std::string("Corpus directory (default $") + kCorpusEnv + ")");
  re->callback([&] { action = [&] { cmd_reedy(r, dir); }; });

  auto* n = app.add_subcommand("nerve", "Elements of the nerve of a properad at one shape");
  n->add_option("propad", a, "Properad file")->required()->check(CLI::ExistingFile);
  n->add_option("shape", b, "Graph file")->required()->check(CLI::ExistingFile);
  n->callback([&] { action = [&] { cmd_nerve(r, a, b); }; });

  auto* sg = app.add_subcommand("segal", "Segal maps and inner horns of the nerve of a properad");
  sg->add_option("propad", a, "Properad file")->required()->check(CLI::ExistingFile);
  sg->add_option("--corpus", dir, "Shapes from this corpus instead of generated ones");
  sg->add_option("--max-vertices", max_vertices, "Vertex bound of generated shapes")->capture_default_str();
  sg->callback([&] { action = [&] { cmd_segal(r, a, dir, max_vertices); }; });

  auto* hn = app.add_subcommand("horn", "Fillers of one inner horn of the nerve of a properad");
  hn->add_option("propad", a, "Properad file")->required()->check(CLI::ExistingFile);
  hn->add_option("--inner", shape, "Shape graph file")->required()->check(CLI::ExistingFile);
  hn->add_option("--exclude", exclude, "Index of the excluded inner face; omit to list the faces");
  hn->callback([&] { action = [&] { cmd_horn(r, a, shape, exclude); }; });

  auto* fu = app.add_subcommand("fundamental", "Fundamental properad of the nerve of a properad");
  fu->add_option("propad", a, "Properad file")->required()->check(CLI::ExistingFile);
  fu->add_option("--max-arity", max_arity, "Largest component computed")->capture_default_str();
  fu->add_option("--max-vertices", max_vertices, "Vertex bound of the comparison shapes")->capture_default_str();
  fu->callback([&] { action = [&] { cmd_fundamental(r, a, max_arity, max_vertices); }; });

  auto* t = app.add_subcommand("tensor", "Presentation of the tensor product of two graphical properads");
  t->add_option("left", a, "Graph file")->required()->check(CLI::ExistingFile);
  t->add_option("right", b, "Graph file")->required()->check(CLI::ExistingFile);
  t->callback([&] { action = [&] { cmd_tensor(r, o, a, b); }; });

  auto* d = app.add_subcommand("distribute", "Rewrite chain of the distributivity of two graphs");
  d->add_option("p", a, "Graph file")->required()->check(CLI::ExistingFile);
  d->add_option("q", b, "Graph file")->required()->check(CLI::ExistingFile);
  d->callback([&] { action = [&] { cmd_distribute(r, a, b); }; });

  auto* dt = app.add_subcommand("dot", "Graphviz rendering of graph files");
  dt->add_option("files", files, "Graph files")->required()->check(CLI::ExistingFile);
  dt->callback([&] { action = [&] { cmd_dot(r, o, files); }; });

  auto* co = app.add_subcommand("corpus", "Write every graph within bounds, one file per class");
  co->add_option("--out", dir, std::string("Output directory (default $") + kCorpusEnv + ")");
  co->add_option("--max-vertices", bounds.max_vertices)->capture_default_str();
  co->add_option("--max-internal", bounds.max_internal)->capture_default_str();
  co->add_option("--max-legs", bounds.max_legs)->capture_default_str();
  co->add_option("--max-arity", bounds.max_arity, "Flags per vertex, 0 for no bound")->capture_default_str();
  co->callback([&] { action = [&] { cmd_corpus(r, o, dir, bounds); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) return app.exit(ex, out, err);
    err << "error: " << ex.what() << "\n";
    auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  for (int i = 0; i < argc; ++i) r.command += (i ? " " : "") + std::string(argv[i]);
  r.inputs.insert(r.inputs.begin(), files.begin(), files.end());
  for (auto* x : {&a, &b, &shape})
    if (!x->empty()) r.inputs.push_back(*x);
  auto t0 = std::chrono::steady_clock::now();
  try {
    action();
    emit(r, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count(), o, out);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 2;
  }
  return r.ok() ? 0 : 1;
}

}  // namespace pgtool
