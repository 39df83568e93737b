#include "pg/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pg {

namespace {

struct Adjacency {
  // Ordinary edges (including loops) as (edge index, tail, head).
  std::vector<std::tuple<int, int, int>> ordinary;
  std::vector<std::vector<int>> incident;  // vertex -> ordinary edge positions in `ordinary`
};

Adjacency adjacency(const Graph& g) {
  Adjacency a;
  a.incident.resize(g.num_vertices());
  auto es = g.edges();
  for (int i = 0; i < static_cast<int>(es.size()); ++i) {
    if (!es[i].ordinary()) continue;
    int k = static_cast<int>(a.ordinary.size());
    a.ordinary.emplace_back(i, es[i].tail, es[i].head);
    a.incident[es[i].tail].push_back(k);
    if (es[i].head != es[i].tail) a.incident[es[i].head].push_back(k);
  }
  return a;
}

// Connectivity of the vertices not in `removed`, through ordinary edges avoiding `skip_edge`.
bool vertices_connected(const Graph& g, const Adjacency& a, const std::vector<char>& removed, int skip_edge = -1) {
  int start = -1, alive = 0;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!removed[v]) {
      ++alive;
      if (start < 0) start = v;
    }
  if (alive == 0) return false;
  std::vector<char> seen(g.num_vertices(), 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int k : a.incident[v]) {
      auto [e, t, h] = a.ordinary[k];
      if (e == skip_edge) continue;
      int w = t == v ? h : t;
      if (removed[w] || seen[w]) continue;
      seen[w] = 1;
      ++count;
      stack.push_back(w);
    }
  }
  return count == alive;
}

bool has_directed_cycle(const Graph& g, const Adjacency& a, const std::vector<char>& removed) {
  std::vector<int> state(g.num_vertices(), 0);
  std::function<bool(int)> dfs = [&](int v) {
    state[v] = 1;
    for (int k : a.incident[v]) {
      auto [e, t, h] = a.ordinary[k];
      if (t != v || removed[h]) continue;
      if (state[h] == 1) return true;
      if (state[h] == 0 && dfs(h)) return true;
    }
    state[v] = 2;
    return false;
  };
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!removed[v] && state[v] == 0 && dfs(v)) return true;
  return false;
}

bool only_exceptional_edge(const Graph& g) {
  return g.num_vertices() == 0 && g.num_flags() == 2 && g.edges().front().kind == EdgeKind::ExceptionalEdge;
}
bool only_exceptional_loop(const Graph& g) {
  return g.num_vertices() == 0 && g.num_flags() == 2 && g.edges().front().kind == EdgeKind::ExceptionalLoop;
}

void require_connected_wheel_free(const Graph& g, const char* op) {
  if (!is_connected(g) || !is_wheel_free(g))
    throw ClassError(std::string(op) + " requires a connected wheel-free graph");
}

void require_connected(const Graph& g, const char* op) {
  if (!is_connected(g)) throw ClassError(std::string(op) + " requires a connected graph");
}

std::vector<int> canonical_rotation(const std::vector<int>& seq, bool allow_reversal) {
  std::vector<int> best = seq;
  auto consider = [&](std::vector<int> s) {
    for (std::size_t r = 0; r < s.size(); ++r) {
      std::rotate(s.begin(), s.begin() + 1, s.end());
      if (s < best) best = s;
    }
  };
  consider(seq);
  if (allow_reversal) {
    std::vector<int> rev(seq.rbegin(), seq.rend());
    consider(rev);
  }
  return best;
}

}  // namespace

bool is_connected(const Graph& g) {
  if (only_exceptional_edge(g) || only_exceptional_loop(g)) return true;
  if (!g.ordinary() || g.num_vertices() == 0) return false;
  return vertices_connected(g, adjacency(g), std::vector<char>(g.num_vertices(), 0));
}

bool is_wheel_free(const Graph& g) {
  for (auto& e : g.edges())
    if (e.kind == EdgeKind::ExceptionalLoop) return false;
  return !has_directed_cycle(g, adjacency(g), std::vector<char>(g.num_vertices(), 0));
}

bool is_simply_connected(const Graph& g) {
  if (!is_connected(g) || only_exceptional_loop(g)) return false;
  int internal = 0;
  for (auto& e : g.edges()) internal += e.ordinary();
  return internal + 1 == std::max(1, g.num_vertices());
}

GraphClass classify(const Graph& g) {
  GraphClass c;
  c.connected = is_connected(g);
  c.wheel_free = is_wheel_free(g);
  c.simply_connected = is_simply_connected(g);
  bool one_out = true, one_in = true;
  c.nonempty_inputs = c.nonempty_outputs = true;
  for (int v = 0; v < g.num_vertices(); ++v) {
    one_out = one_out && g.vout[v].size() == 1;
    one_in = one_in && g.vin[v].size() == 1;
    c.nonempty_inputs = c.nonempty_inputs && !g.vin[v].empty();
    c.nonempty_outputs = c.nonempty_outputs && !g.vout[v].empty();
  }
  c.unital_tree = c.simply_connected && one_out;
  c.linear = c.unital_tree && one_in;
  c.special = c.nonempty_inputs && c.nonempty_outputs;
  c.ordinary = g.ordinary();
  return c;
}

std::string format_class(const GraphClass& c) {
  std::ostringstream os;
  auto b = [](bool x) { return x ? "true" : "false"; };
  os << "connected=" << b(c.connected) << '\n'
     << "wheel-free=" << b(c.wheel_free) << '\n'
     << "simply-connected=" << b(c.simply_connected) << '\n'
     << "unital-tree=" << b(c.unital_tree) << '\n'
     << "linear=" << b(c.linear) << '\n'
     << "non-empty-inputs=" << b(c.nonempty_inputs) << '\n'
     << "non-empty-outputs=" << b(c.nonempty_outputs) << '\n'
     << "special=" << b(c.special) << '\n'
     << "ordinary=" << b(c.ordinary) << '\n';
  return os.str();
}

CyclesAndWheels wheels_and_cycles(const Graph& g) {
  Adjacency a = adjacency(g);
  std::set<std::vector<int>> cycle_keys, wheel_keys;
  CyclesAndWheels out;
  std::vector<char> on_path(g.num_vertices(), 0), used(a.ordinary.size(), 0);
  std::vector<int> vpath, epath;
  auto record = [&]() {
    // vpath has v0..v_{r-1}; the cycle closes back to v0.
    std::vector<int> edge_ids;
    for (int k : epath) edge_ids.push_back(std::get<0>(a.ordinary[k]));
    auto key = canonical_rotation(edge_ids, true);
    if (cycle_keys.insert(key).second) {
      Path p;
      p.edges = edge_ids;
      p.vertices = vpath;
      p.vertices.push_back(vpath.front());
      out.cycles.push_back(p);
    }
    bool directed = true;
    for (std::size_t j = 0; j < epath.size(); ++j) {
      auto [e, t, h] = a.ordinary[epath[j]];
      int from = vpath[j], to = j + 1 < vpath.size() ? vpath[j + 1] : vpath.front();
      if (t != from || h != to) directed = false;
    }
    if (directed && wheel_keys.insert(canonical_rotation(edge_ids, false)).second) {
      Path p;
      p.edges = edge_ids;
      p.vertices = vpath;
      p.vertices.push_back(vpath.front());
      out.wheels.push_back(p);
    }
  };
  std::function<void(int, int)> dfs = [&](int s, int v) {
    for (int k : a.incident[v]) {
      if (used[k]) continue;
      auto [e, t, h] = a.ordinary[k];
      int w = t == v ? h : t;
      if (w == s) {
        used[k] = 1;
        epath.push_back(k);
        record();
        epath.pop_back();
        used[k] = 0;
        continue;
      }
      if (w < s || on_path[w]) continue;
      used[k] = 1;
      on_path[w] = 1;
      epath.push_back(k);
      vpath.push_back(w);
      dfs(s, w);
      vpath.pop_back();
      epath.pop_back();
      on_path[w] = 0;
      used[k] = 0;
    }
  };
  for (int s = 0; s < g.num_vertices(); ++s) {
    on_path[s] = 1;
    vpath = {s};
    dfs(s, s);
    on_path[s] = 0;
  }
  // Wheels reversed relative to the traversal are found when the traversal runs the other way round;
  // a wheel's reversal is not a wheel, so the wheel set is complete.
  return out;
}

bool weakly_initial(const Graph& g, int v) {
  for (auto& e : g.edges())
    if (e.ordinary() && e.head == v) return false;
  return true;
}

bool weakly_terminal(const Graph& g, int v) {
  for (auto& e : g.edges())
    if (e.ordinary() && e.tail == v) return false;
  return true;
}

bool extremal(const Graph& g, int v) { return weakly_initial(g, v) || weakly_terminal(g, v); }

std::vector<std::pair<int, int>> closest_neighbors(const Graph& g) {
  require_connected_wheel_free(g, "closest_neighbors");
  const int nv = g.num_vertices();
  std::vector<std::vector<char>> reach(nv, std::vector<char>(nv, 0));
  auto es = g.edges();
  for (auto& e : es)
    if (e.ordinary()) reach[e.tail][e.head] = 1;
  for (int k = 0; k < nv; ++k)
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
  std::set<std::pair<int, int>> pairs;
  for (auto& e : es) {
    if (!e.ordinary()) continue;
    int u = e.tail, v = e.head;
    bool via_third = false;
    for (int w = 0; w < nv && !via_third; ++w)
      if (w != u && w != v && reach[u][w] && reach[w][v]) via_third = true;
    if (!via_third) pairs.insert({u, v});
  }
  return {pairs.begin(), pairs.end()};
}

std::vector<int> almost_isolated(const Graph& g) {
  require_connected_wheel_free(g, "almost_isolated");
  const int nv = g.num_vertices();
  if (nv == 1) return {0};
  std::vector<int> out;
  Adjacency a = adjacency(g);
  for (int v = 0; v < nv; ++v) {
    if (!extremal(g, v)) continue;
    std::vector<char> removed(nv, 0);
    removed[v] = 1;
    if (vertices_connected(g, a, removed)) out.push_back(v);
  }
  return out;
}

std::vector<Path> extremal_paths(const Graph& g) {
  require_connected_wheel_free(g, "extremal_paths");
  Adjacency a = adjacency(g);
  const int nv = g.num_vertices();
  std::vector<char> ext(nv);
  for (int v = 0; v < nv; ++v) ext[v] = extremal(g, v);
  std::vector<Path> out;
  std::vector<char> on(nv, 0);
  Path cur;
  std::function<void(int)> dfs = [&](int v) {
    if (cur.vertices.size() >= 2 && ext[v] && v != cur.vertices.front()) out.push_back(cur);
    for (int k : a.incident[v]) {
      auto [e, t, h] = a.ordinary[k];
      int w = t == v ? h : t;
      if (on[w]) continue;
      // One representative edge per consecutive vertex pair keeps the list finite and small.
      bool first = true;
      for (int k2 : a.incident[v]) {
        auto [e2, t2, h2] = a.ordinary[k2];
        int w2 = t2 == v ? h2 : t2;
        if (w2 == w && e2 < e) first = false;
      }
      if (!first) continue;
      on[w] = 1;
      cur.vertices.push_back(w);
      cur.edges.push_back(e);
      dfs(w);
      cur.vertices.pop_back();
      cur.edges.pop_back();
      on[w] = 0;
    }
  };
  for (int s = 0; s < nv; ++s) {
    if (!ext[s]) continue;
    on[s] = 1;
    cur = Path{{}, {s}};
    dfs(s);
    on[s] = 0;
  }
  return out;
}

Path maximal_extremal_path(const Graph& g) {
  require_connected_wheel_free(g, "maximal_extremal_path");
  if (g.num_vertices() < 2) throw ClassError("maximal_extremal_path requires at least two vertices");
  auto paths = extremal_paths(g);
  auto contains = [](const std::vector<int>& big, const std::vector<int>& small) {
    if (small.size() >= big.size()) return false;
    for (std::size_t i = 0; i + small.size() <= big.size(); ++i) {
      if (std::equal(small.begin(), small.end(), big.begin() + i)) return true;
      if (std::equal(small.rbegin(), small.rend(), big.begin() + i)) return true;
    }
    return false;
  };
  const Path* best = nullptr;
  for (auto& p : paths) {
    bool maximal = std::none_of(paths.begin(), paths.end(), [&](const Path& q) { return contains(q.vertices, p.vertices); });
    if (!maximal) continue;
    if (!best || p.vertices.size() > best->vertices.size() ||
        (p.vertices.size() == best->vertices.size() && p.vertices < best->vertices))
      best = &p;
  }
  return *best;
}

std::vector<int> deletable_vertices(const Graph& g) {
  require_connected(g, "deletable_vertices");
  auto es = g.edges();
  if (g.num_vertices() == 1) {
    bool any_internal = std::any_of(es.begin(), es.end(), [](const Edge& e) { return e.internal(); });
    if (!any_internal && !(g.gin.empty() && g.gout.empty())) return {0};
  }
  std::vector<int> out;
  for (int v = 0; v < g.num_vertices(); ++v) {
    int adjacent = 0;
    bool loop = false;
    for (auto& e : es) {
      if (!e.ordinary()) continue;
      if (e.kind == EdgeKind::Loop && e.head == v) loop = true;
      if (e.head == v || e.tail == v) ++adjacent;
    }
    if (!loop && adjacent == 1) out.push_back(v);
  }
  return out;
}

std::vector<int> disconnectable_edges(const Graph& g) {
  require_connected(g, "disconnectable_edges");
  auto es = g.edges();
  if (only_exceptional_loop(g)) return {0};
  Adjacency a = adjacency(g);
  std::vector<int> out;
  std::vector<char> none(g.num_vertices(), 0);
  for (int i = 0; i < static_cast<int>(es.size()); ++i) {
    if (!es[i].ordinary()) continue;
    if (es[i].kind == EdgeKind::Loop || vertices_connected(g, a, none, i)) out.push_back(i);
  }
  return out;
}

std::optional<LinearBranch> linear_branch(const Graph& g, int a, int b) {
  if (a == b) throw std::invalid_argument("edges must be distinct");
  auto es = g.edges();
  auto walk = [&](int from, int to) -> std::optional<LinearBranch> {
    LinearBranch br;
    br.edges.push_back(from);
    int cur = from;
    for (int steps = 0; steps <= g.num_vertices(); ++steps) {
      const Edge& e = es[cur];
      if (e.in_flag < 0 || e.head < 0) return std::nullopt;
      int v = e.head;
      if (g.vin[v].size() != 1 || g.vout[v].size() != 1) return std::nullopt;
      br.vertices.push_back(v);
      int x = g.vout[v][0];
      int next = -1;
      for (int i = 0; i < static_cast<int>(es.size()); ++i)
        if (es[i].out_flag == x) next = i;
      br.edges.push_back(next);
      if (next == to) return br;
      cur = next;
    }
    return std::nullopt;
  };
  if (auto r = walk(a, b)) return r;
  return walk(b, a);
}

std::vector<std::pair<int, int>> loops(const Graph& g) {
  std::vector<std::pair<int, int>> out;
  auto es = g.edges();
  for (int i = 0; i < static_cast<int>(es.size()); ++i)
    if (es[i].kind == EdgeKind::Loop) out.emplace_back(es[i].head, i);
  return out;
}

std::vector<int> distinct_vertex_edges(const Graph& g) {
  std::vector<int> out;
  auto es = g.edges();
  for (int i = 0; i < static_cast<int>(es.size()); ++i)
    if (es[i].kind == EdgeKind::Ordinary) out.push_back(i);
  return out;
}

Graph delete_vertex(const Graph& g, int v) {
  std::vector<int> keep, newid(g.num_flags(), -1);
  for (int x = 0; x < g.num_flags(); ++x)
    if (g.cell[x] != v) {
      newid[x] = static_cast<int>(keep.size());
      keep.push_back(x);
    }
  Graph r;
  for (int x : keep) {
    r.flag.push_back(g.flag[x]);
    r.cell.push_back(g.cell[x] < 0 ? -1 : (g.cell[x] > v ? g.cell[x] - 1 : g.cell[x]));
    int y = g.iota[x];
    r.iota.push_back(g.cell[y] == v ? newid[x] : newid[y]);
    r.pi.push_back(g.pi[x] < 0 ? -1 : newid[g.pi[x]]);
    r.color.push_back(g.color[x]);
    r.dir.push_back(g.dir[x]);
  }
  auto remap = [&](const std::vector<int>& xs) {
    std::vector<int> o;
    for (int x : xs)
      if (newid[x] >= 0) o.push_back(newid[x]);
    return o;
  };
  for (int u = 0; u < g.num_vertices(); ++u) {
    if (u == v) continue;
    r.vname.push_back(g.vname[u]);
    r.vlabel.push_back(g.vlabel[u]);
    r.vin.push_back(remap(g.vin[u]));
    r.vout.push_back(remap(g.vout[u]));
  }
  r.gin = remap(g.gin);
  r.gout = remap(g.gout);
  for (int x : keep) {
    int y = g.iota[x];
    if (y != x && g.cell[y] == v) (g.dir[x] > 0 ? r.gin : r.gout).push_back(newid[x]);
  }
  validate(r);
  return r;
}

Graph disconnect_edge(const Graph& g, int e) {
  auto es = g.edges();
  const Edge& ed = es.at(e);
  if (!ed.internal()) throw ClassError("disconnect_edge requires an internal edge");
  Graph r = g;
  r.iota[ed.in_flag] = ed.in_flag;
  r.iota[ed.out_flag] = ed.out_flag;
  if (ed.kind == EdgeKind::ExceptionalLoop) {
    r.pi[ed.in_flag] = ed.out_flag;
    r.pi[ed.out_flag] = ed.in_flag;
  }
  r.gin.push_back(ed.in_flag);
  r.gout.push_back(ed.out_flag);
  validate(r);
  return r;
}

}  // namespace pg
