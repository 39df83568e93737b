#include "pg/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "pg/analysis.hpp"

namespace pg {

namespace {

namespace fs = std::filesystem;

using Arc = std::pair<int, int>;  // (tail, head)

bool arcs_connected(int n, const std::vector<Arc>& arcs) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int comps = n;
  for (auto [a, b] : arcs) {
    int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --comps;
    }
  }
  return comps == 1;
}

bool arcs_acyclic(int n, const std::vector<Arc>& arcs) {
  std::vector<int> indeg(n, 0);
  for (auto [a, b] : arcs) {
    if (a == b) return false;
    ++indeg[b];
  }
  std::vector<int> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  int seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    for (auto [a, b] : arcs)
      if (a == v && --indeg[b] == 0) ready.push_back(b);
  }
  return seen == n;
}

Graph build(int n, const std::vector<Arc>& arcs, const std::vector<int>& in_legs, const std::vector<int>& out_legs) {
  std::vector<std::string> names;
  for (int v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
  std::vector<EdgeSpec> specs;
  int li = 0, lo = 0;
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < in_legs[v]; ++k) specs.push_back({"i" + std::to_string(li++), "", names[v]});
  for (std::size_t k = 0; k < arcs.size(); ++k)
    specs.push_back({"e" + std::to_string(k), names[arcs[k].first], names[arcs[k].second]});
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < out_legs[v]; ++k) specs.push_back({"o" + std::to_string(lo++), names[v], ""});
  return graph_from_edges(names, specs);
}

// Calls visit on every split of at most `budget` legs over 2n slots.
template <class F>
void leg_splits(int n, int budget, F&& visit) {
  std::vector<int> slots(2 * n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == 2 * n) {
      visit(std::vector<int>(slots.begin(), slots.begin() + n), std::vector<int>(slots.begin() + n, slots.end()));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      slots[i] = c;
      rec(i + 1, left - c);
    }
    slots[i] = 0;
  };
  rec(0, budget);
}

int leg_count(const Graph& g) { return static_cast<int>(g.gin.size() + g.gout.size()); }

int internal_count(const Graph& g) {
  int k = 0;
  for (auto& e : g.edges()) k += e.internal();
  return k;
}

}  // namespace

std::vector<CorpusEntry> generate_corpus(const CorpusBounds& b) {
  std::map<std::string, Graph> found;
  auto add = [&](const Graph& g) {
    if (b.max_arity > 0)
      for (int v = 0; v < g.num_vertices(); ++v)
        if (static_cast<int>(g.vin[v].size() + g.vout[v].size()) > b.max_arity) return;
    found.emplace(canon_free(g), g);
  };
  add(exceptional_edge());
  if (b.wheeled) add(exceptional_loop());

  for (int n = 1; n <= b.max_vertices; ++n) {
    std::vector<Arc> pairs;
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        if (a != c || b.wheeled) pairs.emplace_back(a, c);
    std::map<std::string, std::vector<Arc>> skeletons;
    std::vector<Arc> cur;
    std::vector<int> none(n, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      if (arcs_connected(n, cur) && (b.wheeled || arcs_acyclic(n, cur)))
        skeletons.emplace(canon_free(build(n, cur, none, none)), cur);
      if (static_cast<int>(cur.size()) == b.max_internal) return;
      for (std::size_t p = from; p < pairs.size(); ++p) {
        cur.push_back(pairs[p]);
        rec(p);
        cur.pop_back();
      }
    };
    rec(0);
    for (auto& [key, arcs] : skeletons)
      leg_splits(n, b.max_legs, [&](const std::vector<int>& ins, const std::vector<int>& outs) {
        add(build(n, arcs, ins, outs));
      });
  }

  std::vector<std::tuple<int, int, int, std::string>> order;
  for (auto& [key, g] : found) order.emplace_back(g.num_vertices(), internal_count(g), leg_count(g), key);
  std::sort(order.begin(), order.end());
  std::vector<CorpusEntry> out;
  std::map<std::string, int> serial;
  for (auto& [nv, ni, nl, key] : order) {
    std::ostringstream name;
    std::string stem = "v" + std::to_string(nv) + "e" + std::to_string(ni) + "l" + std::to_string(nl);
    name << stem << '-' << serial[stem]++;
    out.push_back({name.str(), found.at(key)});
  }
  return out;
}

void write_corpus(const std::string& dir, const std::vector<CorpusEntry>& corpus, const CorpusBounds& b) {
  fs::create_directories(dir);
  std::ofstream manifest(fs::path(dir) / "MANIFEST");
  manifest << "# max_vertices " << b.max_vertices << " max_internal " << b.max_internal << " max_legs " << b.max_legs
           << " max_arity " << b.max_arity << " wheeled " << (b.wheeled ? 1 : 0) << '\n';
  for (auto& e : corpus) {
    std::ofstream f(fs::path(dir) / (e.name + ".graph"));
    f << print_graph(e.graph);
    manifest << e.name << '\n';
  }
}

std::vector<CorpusEntry> read_corpus(const std::string& dir) {
  std::vector<std::string> names;
  fs::path root(dir);
  if (!fs::is_directory(root)) throw GraphError("corpus directory " + dir + " does not exist");
  std::ifstream manifest(root / "MANIFEST");
  if (manifest) {
    std::string line;
    while (std::getline(manifest, line))
      if (!line.empty() && line[0] != '#') names.push_back(line);
  } else {
    for (auto& p : fs::directory_iterator(root))
      if (p.path().extension() == ".graph") names.push_back(p.path().stem().string());
    std::sort(names.begin(), names.end());
  }
  std::vector<CorpusEntry> out;
  for (auto& n : names) {
    std::ifstream f(root / (n + ".graph"));
    if (!f) throw GraphError("missing corpus file " + n + ".graph");
    std::stringstream ss;
    ss << f.rdbuf();
    out.push_back({n, parse_graph(ss.str())});
  }
  return out;
}

std::vector<Graph> graphs_of(const std::vector<CorpusEntry>& corpus) {
  std::vector<Graph> out;
  for (auto& e : corpus) out.push_back(e.graph);
  return out;
}

}  // namespace pg
