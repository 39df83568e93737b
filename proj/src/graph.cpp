#include "pg/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace pg {

const char* edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::Ordinary: return "ordinary-edge";
    case EdgeKind::Loop: return "loop";
    case EdgeKind::ExceptionalEdge: return "exceptional-edge";
    case EdgeKind::ExceptionalLoop: return "exceptional-loop";
    case EdgeKind::Leg: return "ordinary-leg";
  }
  return "?";
}

int Graph::find_flag(const std::string& name) const {
  for (int i = 0; i < num_flags(); ++i)
    if (flag[i] == name) return i;
  return -1;
}

int Graph::find_vertex(const std::string& name) const {
  for (int i = 0; i < num_vertices(); ++i)
    if (vname[i] == name) return i;
  return -1;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  std::vector<char> seen(flag.size(), 0);
  for (int x = 0; x < num_flags(); ++x) {
    if (seen[x]) continue;
    Edge e;
    int y = iota[x];
    if (cell[x] >= 0) {
      if (y == x) {
        e.kind = EdgeKind::Leg;
        if (dir[x] > 0) e.in_flag = x; else e.out_flag = x;
      } else {
        e.kind = cell[x] == cell[y] ? EdgeKind::Loop : EdgeKind::Ordinary;
        e.in_flag = dir[x] > 0 ? x : y;
        e.out_flag = dir[x] > 0 ? y : x;
      }
    } else {
      if (y != x) {
        e.kind = EdgeKind::ExceptionalLoop;
      } else {
        e.kind = EdgeKind::ExceptionalEdge;
        y = pi[x];
      }
      e.in_flag = dir[x] > 0 ? x : y;
      e.out_flag = dir[x] > 0 ? y : x;
    }
    seen[x] = 1;
    if (y >= 0) seen[y] = 1;
    if (e.in_flag >= 0) e.head = cell[e.in_flag];
    if (e.out_flag >= 0) e.tail = cell[e.out_flag];
    e.name = flag[e.in_flag >= 0 ? e.in_flag : e.out_flag];
    out.push_back(e);
  }
  return out;
}

std::vector<int> Graph::edge_of_flag() const {
  std::vector<int> res(flag.size(), -1);
  auto es = edges();
  for (int i = 0; i < static_cast<int>(es.size()); ++i) {
    if (es[i].in_flag >= 0) res[es[i].in_flag] = i;
    if (es[i].out_flag >= 0) res[es[i].out_flag] = i;
  }
  return res;
}

int Graph::find_edge(const std::string& name) const {
  auto es = edges();
  for (int i = 0; i < static_cast<int>(es.size()); ++i)
    if (es[i].name == name) return i;
  return -1;
}

std::vector<std::string> Graph::input_colors() const {
  std::vector<std::string> r;
  for (int x : gin) r.push_back(color[x]);
  return r;
}
std::vector<std::string> Graph::output_colors() const {
  std::vector<std::string> r;
  for (int x : gout) r.push_back(color[x]);
  return r;
}
std::vector<std::string> Graph::vertex_in_colors(int v) const {
  std::vector<std::string> r;
  for (int x : vin[v]) r.push_back(color[x]);
  return r;
}
std::vector<std::string> Graph::vertex_out_colors(int v) const {
  std::vector<std::string> r;
  for (int x : vout[v]) r.push_back(color[x]);
  return r;
}

bool Graph::ordinary() const {
  return std::all_of(cell.begin(), cell.end(), [](int c) { return c >= 0; });
}

namespace {

bool bad_name(const std::string& s) {
  if (s.empty()) return true;
  for (char c : s)
    if (c == ' ' || c == '\t' || c == '\n' || c == '=' || c == ':' || c == '|') return true;
  return false;
}

void check_listing(const std::vector<int>& listed, const std::vector<int>& expected,
                   const std::string& where, const Graph& g) {
  std::vector<int> a = listed, b = expected;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (std::adjacent_find(a.begin(), a.end()) != a.end())
    throw GraphError("listing of " + where + " repeats a flag", g.flag[*std::adjacent_find(a.begin(), a.end())]);
  if (a != b) {
    std::vector<int> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    throw GraphError("listing of " + where + " is not a bijection", g.flag[diff.front()]);
  }
}

}  // namespace

void validate(const Graph& g) {
  const int n = g.num_flags();
  if (static_cast<int>(g.cell.size()) != n || static_cast<int>(g.iota.size()) != n ||
      static_cast<int>(g.pi.size()) != n || static_cast<int>(g.color.size()) != n ||
      static_cast<int>(g.dir.size()) != n)
    throw GraphError("flag attribute arrays have inconsistent sizes");
  const int nv = g.num_vertices();
  if (static_cast<int>(g.vlabel.size()) != nv || static_cast<int>(g.vin.size()) != nv ||
      static_cast<int>(g.vout.size()) != nv)
    throw GraphError("vertex attribute arrays have inconsistent sizes");
  {
    std::set<std::string> names;
    for (int x = 0; x < n; ++x) {
      if (bad_name(g.flag[x])) throw GraphError("invalid flag name '" + g.flag[x] + "'");
      if (!names.insert(g.flag[x]).second) throw GraphError("duplicate flag name", g.flag[x]);
    }
    std::set<std::string> vn;
    for (int v = 0; v < nv; ++v) {
      if (bad_name(g.vname[v])) throw GraphError("invalid vertex name '" + g.vname[v] + "'");
      if (!vn.insert(g.vname[v]).second) throw GraphError("duplicate vertex name " + g.vname[v]);
    }
  }
  for (int x = 0; x < n; ++x) {
    if (g.cell[x] < -1 || g.cell[x] >= nv) throw GraphError("flag in unknown cell", g.flag[x]);
    if (g.dir[x] != 1 && g.dir[x] != -1) throw GraphError("direction must be +1 or -1", g.flag[x]);
    if (bad_name(g.color[x])) throw GraphError("invalid color", g.flag[x]);
    int y = g.iota[x];
    if (y < 0 || y >= n) throw GraphError("iota undefined", g.flag[x]);
    if (g.iota[y] != x) throw GraphError("non-involutive iota", g.flag[x]);
    if ((g.cell[x] < 0) != (g.cell[y] < 0)) throw GraphError("exceptional cell not closed under iota", g.flag[x]);
    if (y != x && g.dir[y] == g.dir[x]) throw GraphError("iota does not reverse direction", g.flag[x]);
    if (g.color[y] != g.color[x]) throw GraphError("coloring not constant on an iota orbit", g.flag[x]);
    bool needs_pi = g.cell[x] < 0 && y == x;
    int p = g.pi[x];
    if (!needs_pi) {
      if (p != -1) throw GraphError("pi defined outside the exceptional iota-fixed flags", g.flag[x]);
      continue;
    }
    if (p < 0 || p >= n) throw GraphError("pi undefined on an exceptional iota-fixed flag", g.flag[x]);
    if (p == x) throw GraphError("pi has a fixed point", g.flag[x]);
    if (g.pi[p] != x) throw GraphError("non-involutive pi", g.flag[x]);
    if (!(g.cell[p] < 0 && g.iota[p] == p)) throw GraphError("pi leaves the exceptional iota-fixed flags", g.flag[x]);
    if (g.dir[p] == g.dir[x]) throw GraphError("pi does not reverse direction", g.flag[x]);
    if (g.color[p] != g.color[x]) throw GraphError("coloring not constant on a pi orbit", g.flag[x]);
  }
  for (int v = 0; v < nv; ++v) {
    std::vector<int> ins, outs;
    for (int x = 0; x < n; ++x)
      if (g.cell[x] == v) (g.dir[x] > 0 ? ins : outs).push_back(x);
    check_listing(g.vin[v], ins, "inputs of vertex " + g.vname[v], g);
    check_listing(g.vout[v], outs, "outputs of vertex " + g.vname[v], g);
  }
  std::vector<int> ins, outs;
  for (int x = 0; x < n; ++x)
    if (g.iota[x] == x) (g.dir[x] > 0 ? ins : outs).push_back(x);
  check_listing(g.gin, ins, "graph inputs", g);
  check_listing(g.gout, outs, "graph outputs", g);
}

// ---------------------------------------------------------------- Builder

int Builder::add_flag(int cell, const std::string& name, const std::string& color, int dir) {
  int id = g_.num_flags();
  g_.flag.push_back(name);
  g_.cell.push_back(cell);
  g_.iota.push_back(id);
  g_.pi.push_back(-1);
  g_.color.push_back(color);
  g_.dir.push_back(dir);
  return id;
}

int Builder::vertex(const std::string& name, const std::string& label) {
  g_.vname.push_back(name);
  g_.vlabel.push_back(label);
  g_.vin.emplace_back();
  g_.vout.emplace_back();
  return g_.num_vertices() - 1;
}

int Builder::in_flag(int v, const std::string& name, const std::string& color) {
  int x = add_flag(v, name, color, +1);
  g_.vin[v].push_back(x);
  return x;
}

int Builder::out_flag(int v, const std::string& name, const std::string& color) {
  int x = add_flag(v, name, color, -1);
  g_.vout[v].push_back(x);
  return x;
}

void Builder::connect(int out_flag, int in_flag) {
  g_.iota[out_flag] = in_flag;
  g_.iota[in_flag] = out_flag;
}

std::pair<int, int> Builder::exceptional_edge(const std::string& in_name, const std::string& out_name,
                                              const std::string& color) {
  int a = add_flag(-1, in_name, color, +1);
  int b = add_flag(-1, out_name, color, -1);
  g_.pi[a] = b;
  g_.pi[b] = a;
  return {a, b};
}

std::pair<int, int> Builder::exceptional_loop(const std::string& in_name, const std::string& out_name,
                                              const std::string& color) {
  int a = add_flag(-1, in_name, color, +1);
  int b = add_flag(-1, out_name, color, -1);
  g_.iota[a] = b;
  g_.iota[b] = a;
  return {a, b};
}

Graph Builder::build() {
  std::set<int> listed(g_.gin.begin(), g_.gin.end());
  listed.insert(g_.gout.begin(), g_.gout.end());
  for (int x = 0; x < g_.num_flags(); ++x) {
    if (g_.iota[x] != x || listed.count(x)) continue;
    (g_.dir[x] > 0 ? g_.gin : g_.gout).push_back(x);
  }
  validate(g_);
  return g_;
}

// ---------------------------------------------------------------- standard graphs

Colors ones(int n) { return Colors(static_cast<std::size_t>(n), "*"); }

Graph empty_graph() { return Builder().build(); }

Graph isolated_vertices(int n) {
  Builder b;
  for (int i = 1; i <= n; ++i) b.vertex("v" + std::to_string(i));
  return b.build();
}

Graph exceptional_edge(const std::string& c) {
  Builder b;
  b.exceptional_edge("e", "e'", c);
  return b.build();
}

Graph exceptional_loop(const std::string& c) {
  Builder b;
  b.exceptional_loop("e", "e'", c);
  return b.build();
}

Graph corolla(const Colors& ins, const Colors& outs) {
  Builder b;
  int v = b.vertex("v");
  for (std::size_t i = 0; i < ins.size(); ++i) b.in_flag(v, "i" + std::to_string(i + 1), ins[i]);
  for (std::size_t i = 0; i < outs.size(); ++i) b.out_flag(v, "o" + std::to_string(i + 1), outs[i]);
  return b.build();
}

Graph corolla(int m, int n) { return corolla(ones(m), ones(n)); }

Graph permuted_corolla(const Colors& ins, const Colors& outs, const std::vector<int>& sigma,
                       const std::vector<int>& tau) {
  return relabel(corolla(ins, outs), sigma, tau);
}

Graph contracted_corolla(const Colors& ins, const Colors& outs, int i, int j) {
  if (i < 0 || i >= static_cast<int>(outs.size()) || j < 0 || j >= static_cast<int>(ins.size()))
    throw GraphError("contracted corolla index out of range");
  if (outs[i] != ins[j]) throw GraphError("contracted corolla colors differ");
  Graph c = corolla(ins, outs);
  int fin = c.find_flag("i" + std::to_string(j + 1));
  int fout = c.find_flag("o" + std::to_string(i + 1));
  c.iota[fin] = fout;
  c.iota[fout] = fin;
  c.gin.erase(std::find(c.gin.begin(), c.gin.end(), fin));
  c.gout.erase(std::find(c.gout.begin(), c.gout.end(), fout));
  validate(c);
  return c;
}

Graph partially_grafted(const Colors& u_ins, const Colors& u_outs, const Colors& v_ins,
                        const Colors& v_outs, const std::vector<std::pair<int, int>>& glue) {
  if (glue.empty()) throw GraphError("partially grafted corollas need at least one edge");
  Builder b;
  int u = b.vertex("u");
  int v = b.vertex("v");
  std::vector<int> ui, uo, vi, vo;
  for (std::size_t k = 0; k < u_ins.size(); ++k) ui.push_back(b.in_flag(u, "a" + std::to_string(k + 1), u_ins[k]));
  for (std::size_t k = 0; k < v_ins.size(); ++k) vi.push_back(b.in_flag(v, "c" + std::to_string(k + 1), v_ins[k]));
  for (std::size_t k = 0; k < u_outs.size(); ++k) uo.push_back(b.out_flag(u, "b" + std::to_string(k + 1), u_outs[k]));
  for (std::size_t k = 0; k < v_outs.size(); ++k) vo.push_back(b.out_flag(v, "d" + std::to_string(k + 1), v_outs[k]));
  std::set<int> used_o, used_i;
  for (auto [o, i] : glue) {
    if (o < 0 || o >= static_cast<int>(uo.size()) || i < 0 || i >= static_cast<int>(vi.size()))
      throw GraphError("segment index out of range");
    if (!used_o.insert(o).second || !used_i.insert(i).second) throw GraphError("segment index repeated");
    if (u_outs[o] != v_ins[i]) throw GraphError("mismatched colors on identified segments");
    b.connect(uo[o], vi[i]);
  }
  return b.build();
}

Graph dioperadic(const Colors& u_ins, const Colors& u_outs, const Colors& v_ins,
                 const Colors& v_outs, int i, int j) {
  return partially_grafted(u_ins, u_outs, v_ins, v_outs, {{i, j}});
}

Graph linear(int n, const Colors& colors_in) {
  Colors colors = colors_in.empty() ? ones(n + 1) : colors_in;
  if (static_cast<int>(colors.size()) != n + 1) throw GraphError("linear graph needs n+1 colors");
  if (n == 0) return exceptional_edge(colors[0]);
  Builder b;
  std::vector<int> vs;
  for (int k = 1; k <= n; ++k) vs.push_back(b.vertex("v" + std::to_string(k)));
  int prev_out = -1;
  for (int k = 0; k < n; ++k) {
    int in = b.in_flag(vs[k], "e" + std::to_string(k), colors[k]);
    if (prev_out >= 0) b.connect(prev_out, in);
    prev_out = b.out_flag(vs[k], k + 1 == n ? "e" + std::to_string(n) : "e" + std::to_string(k + 1) + "'",
                          colors[k + 1]);
  }
  return b.build();
}

Graph graph_from_edges(const std::vector<std::string>& vertices, const std::vector<EdgeSpec>& edges) {
  Builder b;
  std::map<std::string, int> vid;
  for (auto& v : vertices) vid[v] = b.vertex(v);
  auto lookup = [&](const std::string& v) {
    auto it = vid.find(v);
    if (it == vid.end()) throw GraphError("unknown vertex " + v);
    return it->second;
  };
  std::vector<int> in_of(edges.size(), -1), out_of(edges.size(), -1);
  for (auto& v : vertices) {
    int id = vid[v];
    for (std::size_t k = 0; k < edges.size(); ++k)
      if (edges[k].head == v) in_of[k] = b.in_flag(id, edges[k].name, edges[k].color);
    for (std::size_t k = 0; k < edges.size(); ++k)
      if (edges[k].tail == v)
        out_of[k] = b.out_flag(id, edges[k].head.empty() ? edges[k].name : edges[k].name + "'", edges[k].color);
  }
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const EdgeSpec& e = edges[k];
    if (!e.tail.empty()) lookup(e.tail);
    if (!e.head.empty()) lookup(e.head);
    if (e.tail.empty() && e.head.empty()) {
      auto [a, c] = b.exceptional_edge(e.name, e.name + "'", e.color);
      b.list_input(a);
      b.list_output(c);
    } else if (e.tail.empty()) {
      b.list_input(in_of[k]);
    } else if (e.head.empty()) {
      b.list_output(out_of[k]);
    } else {
      b.connect(out_of[k], in_of[k]);
    }
  }
  return b.build();
}

bool is_permutation(const std::vector<int>& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int x : p) {
    if (x < 0 || x >= n || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

std::vector<int> inverse_perm(const std::vector<int>& p) {
  std::vector<int> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
  return q;
}

Graph relabel(const Graph& g, const std::vector<int>& sigma, const std::vector<int>& tau) {
  if (!is_permutation(sigma, static_cast<int>(g.gout.size())) ||
      !is_permutation(tau, static_cast<int>(g.gin.size())))
    throw GraphError("relabeling permutation has the wrong arity");
  Graph r = g;
  for (std::size_t k = 0; k < g.gin.size(); ++k) r.gin[tau[k]] = g.gin[k];
  for (std::size_t k = 0; k < g.gout.size(); ++k) r.gout[sigma[k]] = g.gout[k];
  return r;
}

// ---------------------------------------------------------------- canonical forms

namespace {

// Breadth-first flag order from the given seeds; vertices expand in listing order.
void bfs_order(const Graph& g, std::vector<int>& order, std::vector<char>& seen,
               std::vector<char>& vdone, const std::vector<int>& seeds) {
  std::vector<int> queue;
  auto push = [&](int x) {
    if (x < 0 || seen[x]) return;
    seen[x] = 1;
    queue.push_back(x);
  };
  auto expand = [&](int v) {
    if (v < 0 || vdone[v]) return;
    vdone[v] = 1;
    for (int y : g.vin[v]) push(y);
    for (int y : g.vout[v]) push(y);
  };
  for (int s : seeds) push(s);
  for (std::size_t h = 0; h < queue.size(); ++h) {
    int x = queue[h];
    order.push_back(x);
    push(g.iota[x]);
    push(g.pi[x]);
    expand(g.cell[x]);
  }
}

std::string encode_order(const Graph& g, const std::vector<int>& order, bool with_graph_listing) {
  std::vector<int> rank(g.flag.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  std::vector<int> vrank(g.vname.size(), -1);
  std::vector<int> vorder;
  for (int x : order) {
    int v = g.cell[x];
    if (v >= 0 && vrank[v] < 0) {
      vrank[v] = static_cast<int>(vorder.size());
      vorder.push_back(v);
    }
  }
  std::ostringstream os;
  for (int x : order) {
    os << (g.cell[x] < 0 ? std::string("E") : std::to_string(vrank[g.cell[x]])) << ','
       << rank[g.iota[x]] << ',' << (g.pi[x] < 0 ? -1 : rank[g.pi[x]]) << ',' << (g.dir[x] > 0 ? '+' : '-')
       << ',' << g.color[x] << ';';
  }
  os << '#';
  for (int v : vorder) {
    os << g.vlabel[v] << '[';
    for (int y : g.vin[v]) os << rank[y] << ' ';
    os << '|';
    for (int y : g.vout[v]) os << rank[y] << ' ';
    os << ']';
  }
  if (with_graph_listing) {
    os << "#in";
    for (int x : g.gin) os << ' ' << rank[x];
    os << "#out";
    for (int x : g.gout) os << ' ' << rank[x];
  }
  return os.str();
}

std::vector<int> strict_order(const Graph& g) {
  const int n = g.num_flags();
  std::vector<int> order;
  std::vector<char> seen(n, 0), vdone(g.num_vertices(), 0);
  std::vector<int> seeds = g.gin;
  seeds.insert(seeds.end(), g.gout.begin(), g.gout.end());
  bfs_order(g, order, seen, vdone, seeds);

  // Components without legs: pick the root giving the least local code.
  struct Comp {
    std::string code;
    std::vector<int> order;
  };
  std::vector<Comp> comps;
  std::vector<char> vseen_comp(g.num_vertices(), 0);
  auto try_root = [&](std::vector<int> seeds_local, int root_vertex, Comp& best, bool& have) {
    std::vector<int> ord;
    std::vector<char> s2 = seen, v2 = vdone;
    if (root_vertex >= 0) {
      v2[root_vertex] = 1;
      for (int y : g.vin[root_vertex]) seeds_local.push_back(y);
      for (int y : g.vout[root_vertex]) seeds_local.push_back(y);
    }
    bfs_order(g, ord, s2, v2, seeds_local);
    std::vector<int> rank(n, -1);
    for (std::size_t i = 0; i < ord.size(); ++i) rank[ord[i]] = static_cast<int>(i);
    std::vector<int> vr(g.num_vertices(), -1);
    int nvr = 0;
    if (root_vertex >= 0) vr[root_vertex] = nvr++;
    std::ostringstream os;
    for (int x : ord) {
      int v = g.cell[x];
      if (v >= 0 && vr[v] < 0) vr[v] = nvr++;
    }
    for (int x : ord) {
      os << (g.cell[x] < 0 ? std::string("E") : std::to_string(vr[g.cell[x]])) << ',' << rank[g.iota[x]] << ','
         << (g.pi[x] < 0 ? -1 : rank[g.pi[x]]) << ',' << (g.dir[x] > 0 ? '+' : '-') << ',' << g.color[x] << ';';
    }
    std::vector<int> vlist(nvr);
    for (int v = 0; v < g.num_vertices(); ++v)
      if (vr[v] >= 0) vlist[vr[v]] = v;
    for (int v : vlist) {
      os << g.vlabel[v] << '[';
      for (int y : g.vin[v]) os << rank[y] << ' ';
      os << '|';
      for (int y : g.vout[v]) os << rank[y] << ' ';
      os << ']';
    }
    std::string code = os.str();
    if (!have || code < best.code) {
      best.code = code;
      best.order = ord;
      have = true;
    }
  };
  std::vector<char> claimed(n, 0);
  std::vector<char> vclaimed(g.num_vertices(), 0);
  for (int x : order) claimed[x] = 1;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (vdone[v]) vclaimed[v] = 1;
  auto component_of = [&](int start_flag, int start_vertex) {
    std::vector<int> flags;
    std::vector<int> verts;
    std::vector<char> s2 = seen, v2 = vdone;
    std::vector<int> ord;
    std::vector<int> seeds_local;
    if (start_flag >= 0) seeds_local.push_back(start_flag);
    if (start_vertex >= 0) {
      v2[start_vertex] = 1;
      for (int y : g.vin[start_vertex]) seeds_local.push_back(y);
      for (int y : g.vout[start_vertex]) seeds_local.push_back(y);
    }
    bfs_order(g, ord, s2, v2, seeds_local);
    for (int x : ord) {
      flags.push_back(x);
      if (g.cell[x] >= 0) verts.push_back(g.cell[x]);
    }
    if (start_vertex >= 0) verts.push_back(start_vertex);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return std::make_pair(flags, verts);
  };
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (vclaimed[v]) continue;
    auto [flags, verts] = component_of(-1, v);
    Comp best;
    bool have = false;
    for (int r : verts) try_root({}, r, best, have);
    for (int x : flags) claimed[x] = 1;
    for (int u : verts) vclaimed[u] = 1;
    comps.push_back(best);
  }
  for (int x = 0; x < n; ++x) {
    if (claimed[x]) continue;
    // Exceptional loop: root at its input end.
    int root = g.dir[x] > 0 ? x : g.iota[x];
    auto [flags, verts] = component_of(root, -1);
    Comp best;
    bool have = false;
    try_root({root}, -1, best, have);
    for (int y : flags) claimed[y] = 1;
    comps.push_back(best);
  }
  std::stable_sort(comps.begin(), comps.end(), [](const Comp& a, const Comp& b) { return a.code < b.code; });
  for (auto& c : comps) order.insert(order.end(), c.order.begin(), c.order.end());
  return order;
}

std::vector<std::string> refine_signatures(const Graph& g, std::vector<std::string> sig);

// Listing-free vertex invariants, refined by neighbourhoods.
std::vector<std::string> vertex_signatures(const Graph& g) {
  const int nv = g.num_vertices();
  std::vector<std::string> sig(nv);
  for (int v = 0; v < nv; ++v) {
    std::vector<std::string> parts;
    for (int x : g.vin[v]) {
      if (g.is_leg(x)) parts.push_back("L+" + g.color[x]);
      else if (g.cell[g.iota[x]] == v) parts.push_back("O" + g.color[x]);
      else parts.push_back("I+" + g.color[x]);
    }
    for (int x : g.vout[v]) {
      if (g.is_leg(x)) parts.push_back("L-" + g.color[x]);
      else if (g.cell[g.iota[x]] != v) parts.push_back("I-" + g.color[x]);
    }
    std::sort(parts.begin(), parts.end());
    sig[v] = g.vlabel[v] + "{" + join(parts, ",") + "}";
  }
  return refine_signatures(g, sig);
}

std::vector<std::string> refine_signatures(const Graph& g, std::vector<std::string> sig) {
  const int nv = g.num_vertices();
  const std::vector<std::string> base = sig;
  for (int round = 0; round < nv; ++round) {
    std::vector<std::string> next(nv);
    for (int v = 0; v < nv; ++v) {
      std::vector<std::string> nb;
      for (int x : g.vin[v])
        if (!g.is_leg(x) && g.cell[g.iota[x]] != v) nb.push_back("<" + g.color[x] + ":" + sig[g.cell[g.iota[x]]]);
      for (int x : g.vout[v])
        if (!g.is_leg(x) && g.cell[g.iota[x]] != v) nb.push_back(">" + g.color[x] + ":" + sig[g.cell[g.iota[x]]]);
      std::sort(nb.begin(), nb.end());
      next[v] = sig[v] + "(" + join(nb, ";") + ")";
    }
    // Hash the refined strings so they stay short; the unrefined prefix is kept verbatim.
    std::size_t before = std::set<std::string>(sig.begin(), sig.end()).size();
    std::vector<std::string> compressed(nv);
    for (int v = 0; v < nv; ++v) {
      std::ostringstream h;
      h << base[v] << '#' << std::hex << std::hash<std::string>{}(next[v]);
      compressed[v] = h.str();
    }
    bool stable = std::set<std::string>(compressed.begin(), compressed.end()).size() == before;
    sig = compressed;
    if (stable) break;
  }
  return sig;
}

std::string encode_free(const Graph& g, const std::vector<int>& pos) {
  std::ostringstream os;
  const int nv = g.num_vertices();
  std::vector<int> at(nv);
  for (int v = 0; v < nv; ++v) at[pos[v]] = v;
  for (int k = 0; k < nv; ++k) {
    int v = at[k];
    std::vector<std::string> legs;
    for (int x : g.vin[v])
      if (g.is_leg(x)) legs.push_back("+" + g.color[x]);
    for (int x : g.vout[v])
      if (g.is_leg(x)) legs.push_back("-" + g.color[x]);
    std::sort(legs.begin(), legs.end());
    os << g.vlabel[v] << '(' << join(legs, ",") << ')';
  }
  std::vector<std::tuple<int, int, std::string>> es;
  std::vector<std::string> xe, xl;
  for (const Edge& e : g.edges()) {
    if (e.kind == EdgeKind::Ordinary || e.kind == EdgeKind::Loop)
      es.emplace_back(pos[e.tail], pos[e.head], g.color[e.in_flag]);
    else if (e.kind == EdgeKind::ExceptionalEdge)
      xe.push_back(g.color[e.in_flag]);
    else if (e.kind == EdgeKind::ExceptionalLoop)
      xl.push_back(g.color[e.in_flag]);
  }
  std::sort(es.begin(), es.end());
  std::sort(xe.begin(), xe.end());
  std::sort(xl.begin(), xl.end());
  os << '#';
  for (auto& [t, h, c] : es) os << t << '>' << h << ':' << c << ';';
  os << "#X" << join(xe, ",") << "#O" << join(xl, ",");
  return os.str();
}

// Calls visit(pos) on the vertex orders reached by individualizing one vertex of the first smallest
// non-singleton class and refining again, until every class is a singleton.
template <class F>
void for_each_class_order(const Graph& g, const std::vector<std::string>& sig, F&& visit, int depth = 0) {
  const int nv = static_cast<int>(sig.size());
  std::vector<int> idx(nv);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return sig[a] < sig[b]; });
  int best_lo = -1, best_hi = -1;
  for (int i = 0; i < nv;) {
    int j = i;
    while (j < nv && sig[idx[j]] == sig[idx[i]]) ++j;
    if (j - i > 1 && (best_lo < 0 || j - i < best_hi - best_lo)) {
      best_lo = i;
      best_hi = j;
    }
    i = j;
  }
  if (best_lo < 0) {
    std::vector<int> pos(nv);
    for (int k = 0; k < nv; ++k) pos[idx[k]] = k;
    visit(pos);
    return;
  }
  for (int k = best_lo; k < best_hi; ++k) {
    std::vector<std::string> next = sig;
    next[idx[k]] += "!" + std::to_string(depth);
    for_each_class_order(g, refine_signatures(g, next), visit, depth + 1);
  }
}

}  // namespace

std::string canon_strict(const Graph& g) { return encode_order(g, strict_order(g), true); }

std::string canon_free(const Graph& g) {
  auto sig = vertex_signatures(g);
  std::string best;
  bool have = false;
  for_each_class_order(g, sig, [&](const std::vector<int>& pos) {
    std::string s = encode_free(g, pos);
    if (!have || s < best) {
      best = std::move(s);
      have = true;
    }
  });
  if (!have) best = encode_free(g, {});
  return best;
}

std::optional<std::vector<int>> strict_iso(const Graph& a, const Graph& b) {
  if (a.num_flags() != b.num_flags() || a.num_vertices() != b.num_vertices()) return std::nullopt;
  auto oa = strict_order(a);
  auto ob = strict_order(b);
  if (encode_order(a, oa, true) != encode_order(b, ob, true)) return std::nullopt;
  std::vector<int> bij(a.flag.size());
  for (std::size_t i = 0; i < oa.size(); ++i) bij[oa[i]] = ob[i];
  return bij;
}

std::vector<std::vector<int>> all_isos_up_to_listing(const Graph& a, const Graph& b, std::size_t limit) {
  std::vector<std::vector<int>> result;
  if (a.num_flags() != b.num_flags() || a.num_vertices() != b.num_vertices()) return result;
  auto sa = vertex_signatures(a);
  auto sb = vertex_signatures(b);
  {
    auto x = sa, y = sb;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return result;
  }
  const int nv = a.num_vertices();
  auto ea = a.edges();
  auto eb = b.edges();
  // Edge multiplicities between vertex pairs, keyed by (tail, head, color).
  std::map<std::tuple<int, int, std::string>, std::vector<int>> ga, gb;
  std::map<std::pair<int, std::string>, std::vector<int>> la, lb;  // legs keyed by (vertex, dir+color)
  std::map<std::string, std::vector<int>> xa, xb, oa, ob;
  auto classify = [](const Graph& g, const std::vector<Edge>& es, auto& gm, auto& lm, auto& xm, auto& om) {
    for (int i = 0; i < static_cast<int>(es.size()); ++i) {
      const Edge& e = es[i];
      switch (e.kind) {
        case EdgeKind::Ordinary:
        case EdgeKind::Loop: gm[{e.tail, e.head, g.color[e.in_flag]}].push_back(i); break;
        case EdgeKind::Leg: {
          int x = e.in_flag >= 0 ? e.in_flag : e.out_flag;
          lm[{g.cell[x], std::string(g.dir[x] > 0 ? "+" : "-") + g.color[x]}].push_back(i);
          break;
        }
        case EdgeKind::ExceptionalEdge: xm[g.color[e.in_flag]].push_back(i); break;
        case EdgeKind::ExceptionalLoop: om[g.color[e.in_flag]].push_back(i); break;
      }
    }
  };
  classify(a, ea, ga, la, xa, oa);
  classify(b, eb, gb, lb, xb, ob);
  auto sizes_match = [](const auto& m1, const auto& m2) {
    if (m1.size() != m2.size()) return false;
    for (auto& [k, v] : m1) {
      auto it = m2.find(k);
      if (it == m2.end() || it->second.size() != v.size()) return false;
    }
    return true;
  };
  if (!sizes_match(xa, xb) || !sizes_match(oa, ob)) return result;

  std::vector<int> vmap(nv, -1);
  std::vector<char> used(nv, 0);
  auto count_between = [](const auto& gm, int t, int h) {
    std::map<std::string, std::size_t> c;
    for (auto& [k, v] : gm)
      if (std::get<0>(k) == t && std::get<1>(k) == h) c[std::get<2>(k)] += v.size();
    return c;
  };
  // Emit all flag bijections for a complete vertex map.
  auto emit = [&]() {
    // Groups to permute: list of (a-edge list, b-edge list).
    std::vector<std::pair<std::vector<int>, std::vector<int>>> groups;
    for (auto& [k, v] : ga) {
      auto it = gb.find({vmap[std::get<0>(k)], vmap[std::get<1>(k)], std::get<2>(k)});
      if (it == gb.end() || it->second.size() != v.size()) return;
      groups.emplace_back(v, it->second);
    }
    for (auto& [k, v] : la) {
      auto it = lb.find({vmap[k.first], k.second});
      if (it == lb.end() || it->second.size() != v.size()) return;
      groups.emplace_back(v, it->second);
    }
    for (auto& [k, v] : xa) groups.emplace_back(v, xb.at(k));
    for (auto& [k, v] : oa) groups.emplace_back(v, ob.at(k));
    std::vector<std::vector<int>> perms;
    for (auto& gr : groups) {
      std::vector<int> p(gr.first.size());
      std::iota(p.begin(), p.end(), 0);
      perms.push_back(p);
    }
    std::function<void(std::size_t)> rec = [&](std::size_t gi) {
      if (result.size() >= limit) return;
      if (gi == groups.size()) {
        std::vector<int> bij(a.flag.size(), -1);
        for (std::size_t q = 0; q < groups.size(); ++q) {
          for (std::size_t r = 0; r < groups[q].first.size(); ++r) {
            const Edge& e1 = ea[groups[q].first[r]];
            const Edge& e2 = eb[groups[q].second[perms[q][r]]];
            if (e1.in_flag >= 0) bij[e1.in_flag] = e2.in_flag;
            if (e1.out_flag >= 0) bij[e1.out_flag] = e2.out_flag;
          }
        }
        result.push_back(bij);
        return;
      }
      auto& p = perms[gi];
      std::sort(p.begin(), p.end());
      do {
        rec(gi + 1);
        if (result.size() >= limit) return;
      } while (std::next_permutation(p.begin(), p.end()));
    };
    rec(0);
  };
  std::function<void(int)> rec = [&](int v) {
    if (result.size() >= limit) return;
    if (v == nv) {
      emit();
      return;
    }
    for (int w = 0; w < nv; ++w) {
      if (used[w] || sa[v] != sb[w]) continue;
      vmap[v] = w;
      bool ok = true;
      for (int u = 0; u <= v && ok; ++u) {
        if (count_between(ga, u, v) != count_between(gb, vmap[u], w)) ok = false;
        if (ok && count_between(ga, v, u) != count_between(gb, w, vmap[u])) ok = false;
      }
      if (ok) {
        used[w] = 1;
        rec(v + 1);
        used[w] = 0;
      }
      vmap[v] = -1;
    }
  };
  rec(0);
  return result;
}

std::optional<std::vector<int>> iso_up_to_listing(const Graph& a, const Graph& b) {
  if (canon_free(a) != canon_free(b)) return std::nullopt;
  auto all = all_isos_up_to_listing(a, b, 1);
  if (all.empty()) return std::nullopt;
  return all.front();
}

// ---------------------------------------------------------------- text format

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string r;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) r += sep;
    r += v[i];
  }
  return r;
}

std::string print_graph(const Graph& g) {
  std::ostringstream os;
  os << "graph\n";
  os << "flags:";
  for (auto& f : g.flag) os << ' ' << f;
  os << '\n';
  for (int v = 0; v < g.num_vertices(); ++v) {
    os << "vertex " << g.vname[v] << ':';
    for (int x : g.vin[v]) os << ' ' << g.flag[x];
    for (int x : g.vout[v]) os << ' ' << g.flag[x];
    os << '\n';
    if (!g.vlabel[v].empty()) os << "label " << g.vname[v] << ": " << g.vlabel[v] << '\n';
  }
  std::vector<std::string> ex;
  for (int x = 0; x < g.num_flags(); ++x)
    if (g.cell[x] < 0) ex.push_back(g.flag[x]);
  if (!ex.empty()) os << "exceptional: " << join(ex, " ") << '\n';
  std::vector<std::string> io, pp;
  for (int x = 0; x < g.num_flags(); ++x) {
    if (g.iota[x] > x) io.push_back(g.flag[x] + "=" + g.flag[g.iota[x]]);
    if (g.pi[x] > x) pp.push_back(g.flag[x] + "=" + g.flag[g.pi[x]]);
  }
  if (!io.empty()) os << "iota: " << join(io, " ") << '\n';
  if (!pp.empty()) os << "pi: " << join(pp, " ") << '\n';
  if (g.num_flags()) {
    os << "color:";
    for (int x = 0; x < g.num_flags(); ++x) os << ' ' << g.flag[x] << '=' << g.color[x];
    os << "\ndirection:";
    for (int x = 0; x < g.num_flags(); ++x) os << ' ' << g.flag[x] << '=' << (g.dir[x] > 0 ? '+' : '-');
    os << '\n';
  }
  auto listing = [&](const std::vector<int>& ins, const std::vector<int>& outs) {
    std::string s = " in";
    for (int x : ins) s += " " + g.flag[x];
    s += " | out";
    for (int x : outs) s += " " + g.flag[x];
    return s;
  };
  os << "glisting:" << listing(g.gin, g.gout) << '\n';
  for (int v = 0; v < g.num_vertices(); ++v)
    os << "vlisting " << g.vname[v] << ':' << listing(g.vin[v], g.vout[v]) << '\n';
  os << "end\n";
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::pair<std::string, std::string> split_colon(const std::string& line) {
  auto p = line.find(':');
  if (p == std::string::npos) throw GraphError("expected ':' in line '" + line + "'");
  return {trim(line.substr(0, p)), trim(line.substr(p + 1))};
}

std::pair<std::string, std::string> split_eq(const std::string& tok) {
  auto p = tok.find('=');
  if (p == std::string::npos) throw GraphError("expected '=' in '" + tok + "'");
  return {tok.substr(0, p), tok.substr(p + 1)};
}

}  // namespace

Graph parse_graph_lines(const std::vector<std::string>& lines, std::size_t& pos) {
  while (pos < lines.size() && (trim(lines[pos]).empty() || trim(lines[pos])[0] == '#')) ++pos;
  if (pos >= lines.size() || trim(lines[pos]) != "graph") throw GraphError("expected 'graph'");
  ++pos;
  Graph g;
  std::map<std::string, int> fid;
  auto flag_id = [&](const std::string& name) {
    auto it = fid.find(name);
    if (it == fid.end()) throw GraphError("unknown flag", name);
    return it->second;
  };
  std::vector<std::pair<std::string, std::vector<std::string>>> vertex_lines;
  std::map<std::string, std::string> labels;
  std::vector<std::string> exceptional;
  std::string iota_line, pi_line, color_line, dir_line, glisting;
  std::map<std::string, std::string> vlistings;
  bool saw_flags = false;
  for (; pos < lines.size(); ++pos) {
    std::string line = trim(lines[pos]);
    if (line.empty() || line[0] == '#') continue;
    if (line == "end") {
      ++pos;
      break;
    }
    if (line.rfind("flags:", 0) == 0) {
      saw_flags = true;
      for (auto& t : split_ws(line.substr(6))) {
        if (fid.count(t)) throw GraphError("duplicate flag name", t);
        fid[t] = static_cast<int>(g.flag.size());
        g.flag.push_back(t);
      }
    } else if (line.rfind("vertex ", 0) == 0) {
      auto [k, v] = split_colon(line.substr(7));
      vertex_lines.emplace_back(k, split_ws(v));
    } else if (line.rfind("label ", 0) == 0) {
      auto [k, v] = split_colon(line.substr(6));
      labels[k] = v;
    } else if (line.rfind("exceptional:", 0) == 0) {
      exceptional = split_ws(line.substr(12));
    } else if (line.rfind("iota:", 0) == 0) {
      iota_line = line.substr(5);
    } else if (line.rfind("pi:", 0) == 0) {
      pi_line = line.substr(3);
    } else if (line.rfind("color:", 0) == 0) {
      color_line = line.substr(6);
    } else if (line.rfind("direction:", 0) == 0) {
      dir_line = line.substr(10);
    } else if (line.rfind("glisting:", 0) == 0) {
      glisting = line.substr(9);
    } else if (line.rfind("vlisting ", 0) == 0) {
      auto [k, v] = split_colon(line.substr(9));
      vlistings[k] = v;
    } else {
      throw GraphError("unrecognized line '" + line + "'");
    }
  }
  if (!saw_flags && !vertex_lines.empty()) throw GraphError("missing flags line");
  const int n = g.num_flags();
  g.cell.assign(n, -2);
  g.iota.resize(n);
  std::iota(g.iota.begin(), g.iota.end(), 0);
  g.pi.assign(n, -1);
  g.color.assign(n, "*");
  g.dir.assign(n, 0);
  for (auto& [name, flags] : vertex_lines) {
    int v = g.num_vertices();
    g.vname.push_back(name);
    g.vlabel.push_back(labels.count(name) ? labels[name] : "");
    g.vin.emplace_back();
    g.vout.emplace_back();
    for (auto& f : flags) {
      int x = flag_id(f);
      if (g.cell[x] != -2) throw GraphError("flag listed in two cells", f);
      g.cell[x] = v;
    }
  }
  for (auto& [k, _] : labels)
    if (std::none_of(vertex_lines.begin(), vertex_lines.end(), [&](auto& p) { return p.first == k; }))
      throw GraphError("label for unknown vertex " + k);
  for (auto& f : exceptional) {
    int x = flag_id(f);
    if (g.cell[x] != -2) throw GraphError("flag listed in two cells", f);
    g.cell[x] = -1;
  }
  for (int x = 0; x < n; ++x)
    if (g.cell[x] == -2) throw GraphError("flag not assigned to a cell", g.flag[x]);
  for (auto& t : split_ws(iota_line)) {
    auto [a, b] = split_eq(t);
    int x = flag_id(a), y = flag_id(b);
    if (g.iota[x] != x || g.iota[y] != y) throw GraphError("non-involutive iota", a);
    g.iota[x] = y;
    g.iota[y] = x;
  }
  for (auto& t : split_ws(pi_line)) {
    auto [a, b] = split_eq(t);
    int x = flag_id(a), y = flag_id(b);
    if (g.pi[x] != -1 || g.pi[y] != -1) throw GraphError("non-involutive pi", a);
    g.pi[x] = y;
    g.pi[y] = x;
  }
  for (auto& t : split_ws(color_line)) {
    auto [a, b] = split_eq(t);
    g.color[flag_id(a)] = b;
  }
  for (auto& t : split_ws(dir_line)) {
    auto [a, b] = split_eq(t);
    int d = (b == "+" || b == "+1" || b == "1") ? 1 : (b == "-" || b == "-1") ? -1 : 0;
    if (!d) throw GraphError("bad direction value '" + b + "'", a);
    g.dir[flag_id(a)] = d;
  }
  auto parse_listing = [&](const std::string& s, std::vector<int>& ins, std::vector<int>& outs) {
    auto toks = split_ws(s);
    int mode = 0;
    for (auto& t : toks) {
      if (t == "in") mode = 1;
      else if (t == "|") continue;
      else if (t == "out") mode = 2;
      else if (mode == 1) ins.push_back(flag_id(t));
      else if (mode == 2) outs.push_back(flag_id(t));
      else throw GraphError("listing must start with 'in'");
    }
  };
  for (int v = 0; v < g.num_vertices(); ++v) {
    auto it = vlistings.find(g.vname[v]);
    if (it == vlistings.end()) {
      for (int x = 0; x < n; ++x)
        if (g.cell[x] == v) (g.dir[x] > 0 ? g.vin[v] : g.vout[v]).push_back(x);
    } else {
      parse_listing(it->second, g.vin[v], g.vout[v]);
    }
  }
  for (int x = 0; x < n; ++x)
    if (g.dir[x] == 0) throw GraphError("missing direction", g.flag[x]);
  if (glisting.empty()) {
    for (int x = 0; x < n; ++x)
      if (g.iota[x] == x) (g.dir[x] > 0 ? g.gin : g.gout).push_back(x);
  } else {
    parse_listing(glisting, g.gin, g.gout);
  }
  validate(g);
  return g;
}

Graph parse_graph(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string l;
  while (std::getline(is, l)) lines.push_back(l);
  std::size_t pos = 0;
  return parse_graph_lines(lines, pos);
}

std::string to_dot(const Graph& g) {
  auto order = strict_order(g);
  std::vector<int> rank(g.flag.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  std::vector<int> vrank(g.vname.size(), -1);
  int nv = 0;
  for (int x : order)
    if (g.cell[x] >= 0 && vrank[g.cell[x]] < 0) vrank[g.cell[x]] = nv++;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (vrank[v] < 0) vrank[v] = nv++;
  std::vector<int> vat(nv);
  for (int v = 0; v < g.num_vertices(); ++v) vat[vrank[v]] = v;
  std::ostringstream os;
  os << "digraph G {\n  rankdir=BT;\n";
  for (int k = 0; k < nv; ++k) {
    int v = vat[k];
    os << "  v" << k << " [shape=circle,label=\"" << (g.vlabel[v].empty() ? "" : g.vlabel[v]) << "\"];\n";
  }
  auto es = g.edges();
  std::vector<std::pair<int, std::string>> lines;
  for (const Edge& e : es) {
    int key = rank[e.in_flag >= 0 ? e.in_flag : e.out_flag];
    std::string col = g.color[e.in_flag >= 0 ? e.in_flag : e.out_flag];
    std::ostringstream l;
    switch (e.kind) {
      case EdgeKind::Ordinary:
      case EdgeKind::Loop:
        l << "  v" << vrank[e.tail] << " -> v" << vrank[e.head] << " [label=\"" << col << "\"];\n";
        break;
      case EdgeKind::Leg:
        if (e.in_flag >= 0)
          l << "  p" << key << " [shape=point];\n  p" << key << " -> v" << vrank[e.head] << " [label=\"" << col
            << "\"];\n";
        else
          l << "  p" << key << " [shape=point];\n  v" << vrank[e.tail] << " -> p" << key << " [label=\"" << col
            << "\"];\n";
        break;
      case EdgeKind::ExceptionalEdge:
        l << "  p" << key << "a [shape=point];\n  p" << key << "b [shape=point];\n  p" << key << "a -> p" << key
          << "b [label=\"" << col << "\"];\n";
        break;
      case EdgeKind::ExceptionalLoop:
        l << "  p" << key << " [shape=point];\n  p" << key << " -> p" << key << " [style=dashed,label=\"" << col
          << "\"];\n";
        break;
    }
    lines.emplace_back(key, l.str());
  }
  std::sort(lines.begin(), lines.end());
  for (auto& [k, s] : lines) os << s;
  os << "}\n";
  return os.str();
}

}  // namespace pg
