#include "pg/gamma.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pg/analysis.hpp"

namespace pg {

namespace {

bool is_unit_shape(const Graph& d) { return d.num_vertices() == 0 && d.num_flags() == 2 && d.iota[0] == 0; }
bool is_loop_shape(const Graph& d) { return d.num_vertices() == 0 && d.num_flags() == 2 && d.iota[0] == 1; }

bool no_internal_edges(const Graph& d) {
  for (int x = 0; x < d.num_flags(); ++x)
    if (!d.is_leg(x)) return false;
  return true;
}

bool is_corolla_shape(const Graph& d) { return d.num_vertices() == 1 && no_internal_edges(d); }

int internal_edge_count(const Graph& g) {
  int n = 0;
  for (auto& e : g.edges()) n += e.internal();
  return n;
}

std::unordered_map<std::string, int> flag_map(const Graph& g) {
  std::unordered_map<std::string, int> m;
  for (int x = 0; x < g.num_flags(); ++x) m[g.flag[x]] = x;
  return m;
}

// Names of the target edges hit by the inputs (outputs) of source vertex v.
std::vector<std::string> image_colors(const Morphism& f, const std::vector<int>& flags,
                                      const std::vector<int>& seo, const std::vector<Edge>& te) {
  std::vector<std::string> r;
  for (int x : flags) r.push_back(te[f.f0[seo[x]]].name);
  return r;
}

template <class T>
void maybe_shuffle(std::vector<T>& v, std::mt19937_64* rng) {
  if (rng) std::shuffle(v.begin(), v.end(), *rng);
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Elements

std::map<std::string, int> edge_index(const Graph& g) {
  std::map<std::string, int> m;
  auto es = g.edges();
  for (int i = 0; i < static_cast<int>(es.size()); ++i) m[es[i].name] = i;
  return m;
}

Graph decorate(const Graph& g) {
  Graph d = g;
  auto es = g.edges();
  auto eo = g.edge_of_flag();
  for (int x = 0; x < g.num_flags(); ++x) d.color[x] = es[eo[x]].name;
  for (int v = 0; v < g.num_vertices(); ++v) d.vlabel[v] = g.vname[v];
  return d;
}

Graph corolla_element(const Graph& g, int v) { return vertex_corolla(decorate(g), v); }

Graph unit_element(const Graph& g, int e) { return exceptional_edge(g.edges().at(e).name); }

Graph relist(const Graph& d, const std::vector<std::string>& ins, const std::vector<std::string>& outs) {
  if (ins.size() != d.gin.size() || outs.size() != d.gout.size())
    throw GraphError("relist: profile has the wrong length");
  Graph r = d;
  std::vector<char> used(d.num_flags(), 0);
  auto pick = [&](const std::vector<int>& legs, const std::string& c) {
    for (int x : legs)
      if (!used[x] && d.color[x] == c) {
        used[x] = 1;
        return x;
      }
    throw GraphError("relist: no free leg colored " + c);
  };
  r.gin.clear();
  r.gout.clear();
  for (auto& c : ins) r.gin.push_back(pick(d.gin, c));
  for (auto& c : outs) r.gout.push_back(pick(d.gout, c));
  return r;
}

Graph as_element(const Graph& h, const Graph& k) {
  Graph d = h;
  auto es = k.edges();
  auto eo = k.edge_of_flag();
  auto fm = flag_map(k);
  for (int x = 0; x < h.num_flags(); ++x) {
    auto it = fm.find(h.flag[x]);
    if (it == fm.end()) throw GraphError("as_element: flag is not a flag of the target", h.flag[x]);
    d.color[x] = es[eo[it->second]].name;
  }
  for (int v = 0; v < h.num_vertices(); ++v) d.vlabel[v] = h.vname[v];
  return d;
}

Graph normalize_element(const Graph& d, const Graph& k) {
  Graph r = d;
  auto es = k.edges();
  auto eo = k.edge_of_flag();
  auto order = [&](const std::vector<int>& have, const std::vector<int>& want, const std::string& v) {
    std::vector<int> out;
    std::vector<char> used(have.size(), 0);
    for (int x : want)
      for (std::size_t i = 0; i < have.size(); ++i)
        if (!used[i] && d.color[have[i]] == es[eo[x]].name) {
          used[i] = 1;
          out.push_back(have[i]);
          break;
        }
    if (out.size() != have.size() || have.size() != want.size())
      throw GraphError("vertex " + v + " does not match the profile of its label");
    return out;
  };
  for (int v = 0; v < d.num_vertices(); ++v) {
    int y = k.find_vertex(d.vlabel[v]);
    if (y < 0) throw GraphError("label of vertex " + d.vname[v] + " is not a vertex");
    r.vin[v] = order(d.vin[v], k.vin[y], d.vname[v]);
    r.vout[v] = order(d.vout[v], k.vout[y], d.vname[v]);
  }
  return r;
}

std::string element_error(const Graph& d, const Graph& g, Mode m) {
  try {
    validate(d);
  } catch (const GraphError& e) {
    return e.what();
  }
  auto idx = edge_index(g);
  for (int x = 0; x < d.num_flags(); ++x)
    if (!idx.count(d.color[x])) return "color " + d.color[x] + " is not an edge";
  if (d.num_vertices() == 0) {
    if (d.num_flags() != 2) return "not connected";
    if (is_loop_shape(d) && m == Mode::Properadic) return "exceptional loop in the properadic setting";
    return {};
  }
  if (!is_connected(d)) return "not connected";
  if (m == Mode::Properadic && !is_wheel_free(d)) return "has a wheel";
  auto es = g.edges();
  auto eo = g.edge_of_flag();
  for (int v = 0; v < d.num_vertices(); ++v) {
    int y = g.find_vertex(d.vlabel[v]);
    if (y < 0) return "label of vertex " + d.vname[v] + " is not a vertex";
    std::vector<std::string> ins, outs;
    for (int x : g.vin[y]) ins.push_back(es[eo[x]].name);
    for (int x : g.vout[y]) outs.push_back(es[eo[x]].name);
    if (d.vertex_in_colors(v) != ins || d.vertex_out_colors(v) != outs)
      return "vertex " + d.vname[v] + " does not match the profile of " + d.vlabel[v];
  }
  return {};
}

std::string element_key(const Graph& d) { return canon_free(d); }

GeneratingObject generating_object(const Graph& g) {
  if (!is_connected(g)) throw ClassError("generating object requires a connected graph");
  GeneratingObject o;
  auto es = g.edges();
  auto eo = g.edge_of_flag();
  for (auto& e : es) o.colors.push_back(e.name);
  for (int v = 0; v < g.num_vertices(); ++v) {
    GeneratingObject::Element el;
    el.name = g.vname[v];
    for (int x : g.vin[v]) el.ins.push_back(es[eo[x]].name);
    for (int x : g.vout[v]) el.outs.push_back(es[eo[x]].name);
    o.elements.push_back(el);
  }
  return o;
}

std::string format_generating_object(const GeneratingObject& o) {
  std::ostringstream os;
  os << "colors: " << join(o.colors, " ") << '\n';
  for (auto& e : o.elements) os << "element " << e.name << ": (" << join(e.ins, " ") << " ; " << join(e.outs, " ") << ")\n";
  return os.str();
}

std::vector<Graph> enumerate_elements(const Graph& g, int max_vertices, Mode m) {
  if (!is_connected(g)) throw ClassError("enumeration requires a connected graph");
  if (m == Mode::Properadic && !is_wheel_free(g)) throw ClassError("properadic enumeration requires a wheel-free graph");
  std::map<std::string, Graph> found;
  auto add = [&](const Graph& d) { found.emplace(element_key(d), d); };
  auto es = g.edges();
  for (auto& e : es) {
    add(exceptional_edge(e.name));
    if (m == Mode::Wheeled) add(exceptional_loop(e.name));
  }
  Graph dg = decorate(g);
  const int nv = g.num_vertices();

  std::vector<int> pick;
  auto process = [&]() {
    // Flags of the copies.
    Graph d;
    std::vector<int> outs, ins;
    for (int i = 0; i < static_cast<int>(pick.size()); ++i) {
      int y = pick[i];
      d.vname.push_back(g.vname[y] + "." + std::to_string(i));
      d.vlabel.push_back(g.vname[y]);
      d.vin.emplace_back();
      d.vout.emplace_back();
      auto add_flag = [&](int x) {
        int id = d.num_flags();
        d.flag.push_back(g.flag[x] + "." + std::to_string(i));
        d.cell.push_back(i);
        d.iota.push_back(id);
        d.pi.push_back(-1);
        d.color.push_back(dg.color[x]);
        d.dir.push_back(g.dir[x]);
        return id;
      };
      for (int x : g.vin[y]) {
        int id = add_flag(x);
        d.vin[i].push_back(id);
        ins.push_back(id);
      }
      for (int x : g.vout[y]) {
        int id = add_flag(x);
        d.vout[i].push_back(id);
        outs.push_back(id);
      }
    }
    const int nc = static_cast<int>(pick.size());
    std::vector<char> used(d.num_flags(), 0);
    std::function<void(std::size_t)> match = [&](std::size_t k) {
      if (k == outs.size()) {
        // connectivity over the copies
        std::vector<int> parent(nc);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
        int comps = nc;
        for (int x : outs)
          if (d.iota[x] != x) {
            int a = find(d.cell[x]), b = find(d.cell[d.iota[x]]);
            if (a != b) parent[a] = b, --comps;
          }
        if (comps != 1) return;
        Graph r = d;
        for (int x : ins)
          if (r.iota[x] == x) r.gin.push_back(x);
        for (int x : outs)
          if (r.iota[x] == x) r.gout.push_back(x);
        if (m == Mode::Properadic && !is_wheel_free(r)) return;
        add(r);
        return;
      }
      int o = outs[k];
      match(k + 1);  // o stays a leg
      for (int j : ins) {
        if (used[j] || d.color[j] != d.color[o]) continue;
        if (m == Mode::Properadic && d.cell[j] == d.cell[o]) continue;
        used[j] = 1;
        d.iota[o] = j;
        d.iota[j] = o;
        match(k + 1);
        d.iota[o] = o;
        d.iota[j] = j;
        used[j] = 0;
      }
    };
    match(0);
  };
  std::function<void(int, int)> rec = [&](int start, int left) {
    if (!pick.empty()) process();
    if (left == 0) return;
    for (int v = start; v < nv; ++v) {
      pick.push_back(v);
      rec(v, left - 1);
      pick.pop_back();
    }
  };
  rec(0, max_vertices);
  std::vector<Graph> out;
  for (auto& [k, d] : found) out.push_back(d);
  return out;
}

bool is_finite(const Graph& g, Mode m) {
  if (is_loop_shape(g)) {
    if (m == Mode::Properadic) throw ClassError("the exceptional loop is not a properadic graph");
    return true;
  }
  if (!is_connected(g)) throw ClassError("finiteness is defined for connected graphs");
  if (m == Mode::Properadic && !is_wheel_free(g)) throw ClassError("properadic finiteness needs a wheel-free graph");
  return is_simply_connected(g);
}

Graph cycle_witness(const Graph& g, int n) {
  auto cw = wheels_and_cycles(g);
  const Path* cyc = nullptr;
  for (auto& p : cw.cycles)
    if (p.edges.size() >= 2) {
      cyc = &p;
      break;
    }
  if (!cyc) throw ClassError("cycle witness needs a cycle through at least two vertices");
  if (n < 1) throw std::invalid_argument("cycle witness needs n >= 1");
  auto es = g.edges();
  Graph dg = decorate(g);
  const int r = static_cast<int>(cyc->edges.size());
  // vertices v_0 .. v_{r-1}; edge k joins v_k and v_{k+1}
  Graph d;
  std::vector<std::vector<int>> copy_of(n, std::vector<int>(g.num_vertices(), -1));
  std::vector<std::vector<int>> fl(n, std::vector<int>(g.num_flags(), -1));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < r; ++k) {
      int y = cyc->vertices[k];
      int id = d.num_vertices();
      copy_of[j][y] = id;
      d.vname.push_back(g.vname[y] + "." + std::to_string(j));
      d.vlabel.push_back(g.vname[y]);
      d.vin.emplace_back();
      d.vout.emplace_back();
      for (int pass = 0; pass < 2; ++pass)
        for (int x : pass == 0 ? g.vin[y] : g.vout[y]) {
          int f = d.num_flags();
          fl[j][x] = f;
          d.flag.push_back(g.flag[x] + "." + std::to_string(j));
          d.cell.push_back(id);
          d.iota.push_back(f);
          d.pi.push_back(-1);
          d.color.push_back(dg.color[x]);
          d.dir.push_back(g.dir[x]);
          (pass == 0 ? d.vin : d.vout)[id].push_back(f);
        }
    }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < r; ++k) {
      const Edge& e = es[cyc->edges[k]];
      int a = cyc->vertices[k];
      int ja = j, jb = (k == r - 1) ? (j + 1) % n : j;
      // copy of the tail and of the head
      int jt = e.tail == a ? ja : jb;
      int jh = e.head == a ? ja : jb;
      if (e.tail == e.head) continue;
      int o = fl[jt][e.out_flag], i = fl[jh][e.in_flag];
      d.iota[o] = i;
      d.iota[i] = o;
    }
  for (int x = 0; x < d.num_flags(); ++x)
    if (d.iota[x] == x) (d.dir[x] > 0 ? d.gin : d.gout).push_back(x);
  validate(d);
  return d;
}

Graph loop_witness(const Graph& g, int n) {
  auto ls = loops(g);
  if (ls.empty()) throw ClassError("loop witness needs a loop");
  if (n < 1) throw std::invalid_argument("loop witness needs n >= 1");
  auto [v, e] = ls.front();
  const Edge le = g.edges()[e];
  Graph dg = decorate(g);
  Graph d;
  std::vector<std::vector<int>> fl(n, std::vector<int>(g.num_flags(), -1));
  for (int j = 0; j < n; ++j) {
    d.vname.push_back(g.vname[v] + "." + std::to_string(j));
    d.vlabel.push_back(g.vname[v]);
    d.vin.emplace_back();
    d.vout.emplace_back();
    for (int pass = 0; pass < 2; ++pass)
      for (int x : pass == 0 ? g.vin[v] : g.vout[v]) {
        int f = d.num_flags();
        fl[j][x] = f;
        d.flag.push_back(g.flag[x] + "." + std::to_string(j));
        d.cell.push_back(j);
        d.iota.push_back(f);
        d.pi.push_back(-1);
        d.color.push_back(dg.color[x]);
        d.dir.push_back(g.dir[x]);
        (pass == 0 ? d.vin : d.vout)[j].push_back(f);
      }
  }
  for (int j = 0; j + 1 < n; ++j) {
    int o = fl[j][le.out_flag], i = fl[j + 1][le.in_flag];
    d.iota[o] = i;
    d.iota[i] = o;
  }
  for (int x = 0; x < d.num_flags(); ++x)
    if (d.iota[x] == x) (d.dir[x] > 0 ? d.gin : d.gout).push_back(x);
  validate(d);
  return d;
}

// ---------------------------------------------------------------------------------------------
// Morphisms

void validate_morphism(const Morphism& f, Mode m) {
  auto se = f.src.edges();
  auto te = f.tgt.edges();
  if (f.f0.size() != se.size()) throw GraphError("f0 must have one entry per source edge");
  for (int t : f.f0)
    if (t < 0 || t >= static_cast<int>(te.size())) throw GraphError("f0 points outside the target edges");
  if (static_cast<int>(f.f1.size()) != f.src.num_vertices()) throw GraphError("f1 must have one entry per source vertex");
  if (!is_connected(f.src)) throw GraphError("source graph is not connected");
  if (m == Mode::Properadic && (!is_wheel_free(f.src) || is_loop_shape(f.src)))
    throw GraphError("source graph is not wheel-free");
  auto seo = f.src.edge_of_flag();
  for (int v = 0; v < f.src.num_vertices(); ++v) {
    const Graph& d = f.f1[v];
    std::string err = element_error(d, f.tgt, m);
    if (!err.empty()) throw GraphError("vertex " + f.src.vname[v] + ": " + err);
    if (d.input_colors() != image_colors(f, f.src.vin[v], seo, te) ||
        d.output_colors() != image_colors(f, f.src.vout[v], seo, te))
      throw GraphError("profile mismatch at vertex " + f.src.vname[v]);
  }
}

Morphism make_morphism(Graph src, Graph tgt, std::vector<int> f0, std::vector<Graph> f1, Mode m) {
  Morphism f{std::move(src), std::move(tgt), std::move(f0), std::move(f1)};
  validate_morphism(f, m);
  return f;
}

Morphism identity_map(const Graph& g) {
  Morphism f;
  f.src = f.tgt = g;
  f.f0.resize(g.edges().size());
  std::iota(f.f0.begin(), f.f0.end(), 0);
  Graph dg = decorate(g);
  for (int v = 0; v < g.num_vertices(); ++v) f.f1.push_back(vertex_corolla(dg, v));
  return f;
}

Graph apply(const Morphism& f, const Graph& element) {
  auto sidx = edge_index(f.src);
  auto te = f.tgt.edges();
  Graph r = element;
  for (int x = 0; x < r.num_flags(); ++x) {
    auto it = sidx.find(element.color[x]);
    if (it == sidx.end()) throw GraphError("apply: color " + element.color[x] + " is not a source edge");
    r.color[x] = te[f.f0[it->second]].name;
  }
  if (r.num_vertices() == 0) return r;
  std::map<int, Graph> inner;
  for (int v = 0; v < r.num_vertices(); ++v) {
    int sv = f.src.find_vertex(element.vlabel[v]);
    if (sv < 0) throw GraphError("apply: label " + element.vlabel[v] + " is not a source vertex");
    inner.emplace(v, f.f1[sv]);
  }
  return substitute(r, inner).graph;
}

Morphism compose(const Morphism& g, const Morphism& f) {
  Morphism h;
  h.src = f.src;
  h.tgt = g.tgt;
  h.f0.resize(f.f0.size());
  for (std::size_t i = 0; i < f.f0.size(); ++i) h.f0[i] = g.f0.at(f.f0[i]);
  for (auto& d : f.f1) h.f1.push_back(apply(g, d));
  return h;
}

bool same_map(const Morphism& a, const Morphism& b) {
  if (a.f0 != b.f0 || a.f1.size() != b.f1.size()) return false;
  for (std::size_t v = 0; v < a.f1.size(); ++v)
    if (canon_strict(a.f1[v]) != canon_strict(b.f1[v])) return false;
  return true;
}

Graph image(const Morphism& f) { return apply(f, decorate(f.src)); }

// ---------------------------------------------------------------------------------------------
// Cofaces and codegeneracies

namespace {

bool inner_kind(FactorKind k) {
  return k == FactorKind::InnerProperadic || k == FactorKind::InnerDioperadic || k == FactorKind::InnerContracting;
}

// Corolla of target vertex y, listed along the f0-images of source vertex u.
Graph listed_corolla(const Morphism& f, const Graph& dk, int y, int u) {
  auto seo = f.src.edge_of_flag();
  auto te = f.tgt.edges();
  return relist(vertex_corolla(dk, y), image_colors(f, f.src.vin[u], seo, te), image_colors(f, f.src.vout[u], seo, te));
}

}  // namespace

Morphism coface(const Graph& k, const Factorization& fz) {
  const bool inner = inner_kind(fz.kind);
  Morphism f;
  f.tgt = k;
  f.src = inner ? fz.outer : fz.inner;
  auto se = f.src.edges();
  auto keo = k.edge_of_flag();
  auto fm = flag_map(k);
  for (auto& e : se) {
    if (!inner && fz.leg >= 0) {
      f.f0.push_back(fz.leg);
      continue;
    }
    auto it = fm.find(f.src.flag[e.in_flag >= 0 ? e.in_flag : e.out_flag]);
    if (it == fm.end()) throw GraphError("coface: source edge has no counterpart in the target", e.name);
    f.f0.push_back(keo[it->second]);
  }
  Graph dk = decorate(k);
  for (int u = 0; u < f.src.num_vertices(); ++u) {
    if (inner && u == fz.w) {
      f.f1.push_back(as_element(fz.inner, k));
      continue;
    }
    int y = k.find_vertex(f.src.vname[u]);
    if (y < 0) throw GraphError("coface: vertex " + f.src.vname[u] + " has no counterpart in the target");
    f.f1.push_back(listed_corolla(f, dk, y, u));
  }
  return f;
}

Morphism codegeneracy(const Graph& g, int v) {
  Reduction r = degenerate_reduction(g, v);
  Morphism s;
  s.src = g;
  s.tgt = r.graph;
  auto teo = r.graph.edge_of_flag();
  auto fm = flag_map(r.graph);
  std::set<int> at_v(g.vin[v].begin(), g.vin[v].end());
  at_v.insert(g.vout[v].begin(), g.vout[v].end());
  for (auto& e : g.edges()) {
    bool touches = (e.in_flag >= 0 && at_v.count(e.in_flag)) || (e.out_flag >= 0 && at_v.count(e.out_flag));
    int t = -1;
    if (touches) {
      t = r.edge;
    } else {
      auto it = fm.find(g.flag[e.in_flag >= 0 ? e.in_flag : e.out_flag]);
      if (it == fm.end()) throw GraphError("codegeneracy: lost edge " + e.name);
      t = teo[it->second];
    }
    s.f0.push_back(t);
  }
  Graph dt = decorate(r.graph);
  for (int u = 0; u < g.num_vertices(); ++u) {
    if (u == v) {
      s.f1.push_back(unit_element(r.graph, r.edge));
      continue;
    }
    int y = r.graph.find_vertex(g.vname[u]);
    if (y < 0) throw GraphError("codegeneracy: lost vertex " + g.vname[u]);
    s.f1.push_back(listed_corolla(s, dt, y, u));
  }
  return s;
}

Morphism exceptional_coface(const std::string& color) {
  Morphism f;
  f.src = isolated_vertices(1);
  f.tgt = exceptional_loop(color);
  f.f1.push_back(decorate(f.tgt));
  return f;
}

std::vector<Morphism> cofaces_into(const Graph& k, Mode m, bool include_exceptional) {
  std::vector<Morphism> out;
  std::vector<FactorKind> kinds;
  if (m == Mode::Properadic)
    kinds = {FactorKind::InnerProperadic, FactorKind::OuterProperadic};
  else
    kinds = {FactorKind::InnerDioperadic, FactorKind::OuterDioperadic, FactorKind::InnerContracting,
             FactorKind::OuterContracting};
  for (FactorKind kind : kinds) {
    if (k.num_vertices() == 0 && !(m == Mode::Wheeled && kind == FactorKind::OuterContracting)) continue;
    if (m == Mode::Wheeled && kind == FactorKind::OuterContracting && is_unit_shape(k)) continue;
    std::vector<Factorization> fs;
    try {
      fs = factorizations(k, kind);
    } catch (const ClassError&) {
      continue;
    }
    for (auto& fz : fs) out.push_back(coface(k, fz));
  }
  if (include_exceptional && m == Mode::Wheeled && is_loop_shape(k)) {
    Morphism f;
    f.src = isolated_vertices(1);
    f.tgt = k;
    f.f1.push_back(decorate(k));
    out.push_back(f);
  }
  return out;
}

bool is_inner_coface(const Morphism& f) {
  Graph im = image(f);
  return im.num_vertices() == f.tgt.num_vertices() && internal_edge_count(im) == internal_edge_count(f.tgt);
}

std::optional<Morphism> iso_with_edge_map(const Graph& a, const Graph& b, const std::vector<int>& e0) {
  auto ae = a.edges(), be = b.edges();
  if (ae.size() != be.size() || e0.size() != ae.size() || a.num_vertices() != b.num_vertices()) return std::nullopt;
  if (!is_permutation(e0, static_cast<int>(be.size()))) return std::nullopt;
  Morphism f;
  f.src = a;
  f.tgt = b;
  f.f0 = e0;
  if (a.num_vertices() == 0) {
    if (ae.empty() || ae[0].kind != be[0].kind) return std::nullopt;
    return f;
  }
  auto aeo = a.edge_of_flag(), beo = b.edge_of_flag();
  auto sorted_edges = [](const std::vector<int>& flags, const std::vector<int>& eo, const std::vector<int>* map) {
    std::vector<int> r;
    for (int x : flags) r.push_back(map ? (*map)[eo[x]] : eo[x]);
    std::sort(r.begin(), r.end());
    return r;
  };
  std::vector<char> used(b.num_vertices(), 0);
  Graph db = decorate(b);
  for (int v = 0; v < a.num_vertices(); ++v) {
    auto ins = sorted_edges(a.vin[v], aeo, &e0), outs = sorted_edges(a.vout[v], aeo, &e0);
    int match = -1;
    for (int y = 0; y < b.num_vertices() && match < 0; ++y)
      if (!used[y] && sorted_edges(b.vin[y], beo, nullptr) == ins && sorted_edges(b.vout[y], beo, nullptr) == outs)
        match = y;
    if (match < 0) return std::nullopt;
    used[match] = 1;
    f.f1.push_back(listed_corolla(f, db, match, v));
  }
  // Edges must keep their endpoints.
  for (std::size_t i = 0; i < ae.size(); ++i) {
    const Edge &x = ae[i], &y = be[e0[i]];
    if (x.kind != y.kind) return std::nullopt;
  }
  try {
    validate_morphism(f, Mode::Wheeled);
  } catch (const GraphError&) {
    return std::nullopt;
  }
  return f;
}

// ---------------------------------------------------------------------------------------------
// Subgraphs

bool is_subgraph_element(const Graph& d, const Graph& k, Mode m) {
  if (d.num_vertices() == 0) {
    if (is_unit_shape(d)) return k.find_edge(d.color[0]) >= 0;
    // Exceptional loops only sit inside the exceptional graphs of the wheeled setting.
    return m == Mode::Wheeled && k.num_vertices() == 0;
  }
  std::vector<char> in_s(k.num_vertices(), 0);
  for (int v = 0; v < d.num_vertices(); ++v) {
    int y = k.find_vertex(d.vlabel[v]);
    if (y < 0 || in_s[y]) return false;
    in_s[y] = 1;
  }
  if (m == Mode::Wheeled) return true;
  auto es = k.edges();
  int among = 0;
  for (auto& e : es)
    if (e.ordinary() && in_s[e.tail] && in_s[e.head]) ++among;
  if (among != internal_edge_count(d)) return false;
  // No directed path may leave the vertex set and come back.
  std::vector<char> seen(k.num_vertices(), 0);
  std::vector<int> stack;
  for (auto& e : es)
    if (e.ordinary() && in_s[e.tail] && !in_s[e.head] && !seen[e.head]) {
      seen[e.head] = 1;
      stack.push_back(e.head);
    }
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int x : k.vout[u]) {
      if (k.is_leg(x)) continue;
      int h = k.cell[k.iota[x]];
      if (in_s[h]) return false;
      if (!seen[h]) {
        seen[h] = 1;
        stack.push_back(h);
      }
    }
  }
  return true;
}

namespace {

struct OuterChain {
  std::vector<Morphism> down;  // down[0] has target K
  Graph z;
};

template <class Pred>
const Factorization* find_face(const std::vector<Factorization>& fs, Pred p) {
  for (auto& f : fs)
    if (p(f)) return &f;
  return nullptr;
}

// Outer cofaces cutting K down to the subgraph D.
OuterChain outer_chain(const Graph& k, const Graph& d, Mode m, std::mt19937_64* rng) {
  OuterChain c;
  Graph cur = k;
  auto push = [&](const Factorization& fz) {
    Morphism mm = coface(cur, fz);
    cur = mm.src;
    c.down.push_back(std::move(mm));
  };
  auto fail = [](const std::string& what) { throw std::logic_error("outer chain: " + what); };

  // Wheeled steps shared by both cases: delete a vertex outside `keep`, otherwise cut an edge
  // allowed by `cuttable`.
  auto wheeled_step = [&](const std::set<std::string>& keep, const std::function<bool(const std::string&)>& cuttable) {
    if (cur.num_vertices() > static_cast<int>(keep.size())) {
      std::vector<int> dv;
      for (int v : deletable_vertices(cur))
        if (!keep.count(cur.vname[v])) dv.push_back(v);
      maybe_shuffle(dv, rng);
      if (!dv.empty()) {
        auto fs = outer_dioperadic_factorizations(cur);
        std::string name = cur.vname[dv.front()];
        auto* fz = find_face(fs, [&](const Factorization& f) { return f.vertices.size() == 1 && cur.vname[f.vertices[0]] == name; });
        if (!fz) fail("deletable vertex without a face");
        push(*fz);
        return true;
      }
    }
    auto es = cur.edges();
    std::vector<int> de;
    for (int e : disconnectable_edges(cur))
      if (cuttable(es[e].name)) de.push_back(e);
    maybe_shuffle(de, rng);
    if (de.empty()) return false;
    std::string name = es[de.front()].name;
    auto fs = outer_contracting_factorizations(cur);
    auto* fz = find_face(fs, [&](const Factorization& f) { return es[f.edge].name == name; });
    if (!fz) fail("disconnectable edge without a face");
    push(*fz);
    return true;
  };

  if (d.num_vertices() == 0) {
    const bool loop = is_loop_shape(d);
    if (cur.num_vertices() == 0) {
      if (!loop && is_loop_shape(cur)) push(outer_contracting_factorizations(cur).at(0));
      c.z = cur;
      return c;
    }
    if (loop) fail("exceptional loop inside an ordinary graph");
    int ke = k.find_edge(d.color[0]);
    const Edge e = k.edges().at(ke);
    int keep = e.head >= 0 ? e.head : e.tail;
    const std::string keep_name = k.vname[keep];
    const std::string fname = k.flag[e.head >= 0 ? e.in_flag : e.out_flag];
    while (cur.num_vertices() > 1 || (m == Mode::Wheeled && !no_internal_edges(cur))) {
      if (m == Mode::Properadic) {
        std::vector<int> ai;
        for (int u : almost_isolated(cur))
          if (cur.vname[u] != keep_name) ai.push_back(u);
        maybe_shuffle(ai, rng);
        if (ai.empty()) fail("no almost isolated vertex");
        std::string name = cur.vname[ai.front()];
        auto fs = outer_properadic_factorizations(cur);
        auto* fz = find_face(fs, [&](const Factorization& f) { return cur.vname[f.vertices.at(0)] == name; });
        push(*fz);
      } else if (!wheeled_step({keep_name}, [](const std::string&) { return true; })) {
        fail("no outer face towards an edge");
      }
    }
    auto eo = cur.edge_of_flag();
    int x = cur.find_flag(fname);
    if (x < 0) fail("lost the flag of the edge");
    int leg = eo[x];
    auto fs = m == Mode::Properadic ? outer_properadic_factorizations(cur) : outer_dioperadic_factorizations(cur);
    auto* fz = find_face(fs, [&](const Factorization& f) { return f.leg == leg; });
    if (!fz) fail("no subdivision face");
    push(*fz);
    c.z = cur;
    return c;
  }

  std::set<std::string> s;
  for (auto& l : d.vlabel) s.insert(l);
  std::set<std::string> dint;
  for (auto& e : d.edges())
    if (e.internal()) dint.insert(d.color[e.in_flag]);
  for (;;) {
    if (m == Mode::Properadic) {
      if (cur.num_vertices() == static_cast<int>(s.size())) break;
      std::vector<int> ai;
      for (int u : almost_isolated(cur))
        if (!s.count(cur.vname[u])) ai.push_back(u);
      maybe_shuffle(ai, rng);
      if (ai.empty()) fail("no almost isolated vertex outside the subgraph");
      std::string name = cur.vname[ai.front()];
      auto fs = outer_properadic_factorizations(cur);
      auto* fz = find_face(fs, [&](const Factorization& f) { return f.vertices.size() == 1 && cur.vname[f.vertices[0]] == name; });
      if (!fz) fail("almost isolated vertex without a face");
      push(*fz);
    } else {
      if (!wheeled_step(s, [&](const std::string& n) { return !dint.count(n); })) {
        if (cur.num_vertices() == static_cast<int>(s.size())) break;
        fail("no outer face towards the subgraph");
      }
    }
  }
  c.z = cur;
  return c;
}

Morphism fold(const Graph& source, const std::vector<const Morphism*>& steps) {
  Morphism m = identity_map(source);
  for (auto* s : steps) m = compose(*s, m);
  return m;
}

// Every graphical isomorphism a -> b.
std::vector<Morphism> all_graph_isos(const Graph& a, const Graph& b) {
  std::vector<Morphism> out;
  if (a.num_vertices() == 0 || b.num_vertices() == 0) {
    if (a.num_vertices() == 0 && b.num_vertices() == 0 && a.num_flags() == 2 && b.num_flags() == 2) {
      if (auto f = iso_with_edge_map(a, b, {0})) out.push_back(*f);
    }
    return out;
  }
  auto ae = a.edges();
  auto aeo = a.edge_of_flag(), beo = b.edge_of_flag();
  std::set<std::vector<int>> seen;
  // Colors are not part of graphical properad structure, so compare uncolored shapes.
  Graph ua = a, ub = b;
  std::fill(ua.color.begin(), ua.color.end(), "*");
  std::fill(ub.color.begin(), ub.color.end(), "*");
  std::fill(ua.vlabel.begin(), ua.vlabel.end(), "");
  std::fill(ub.vlabel.begin(), ub.vlabel.end(), "");
  for (auto& fb : all_isos_up_to_listing(ua, ub)) {
    std::vector<int> e0(ae.size(), -1);
    for (int x = 0; x < a.num_flags(); ++x) e0[aeo[x]] = beo[fb[x]];
    if (!seen.insert(e0).second) continue;
    if (auto f = iso_with_edge_map(a, b, e0)) out.push_back(*f);
  }
  return out;
}

// Is there an isomorphism t: a.tgt -> b.tgt with t a_first = b_first and b_second t = a_second?
bool splits_isomorphic(const Morphism& a1, const Morphism& a2, const Morphism& b1, const Morphism& b2) {
  for (auto& t : all_graph_isos(a1.tgt, b1.tgt))
    if (same_map(compose(t, a1), b1) && same_map(compose(b2, t), a2)) return true;
  return false;
}

}  // namespace

std::optional<SubgraphWitness> subgraph_witness(const Morphism& f, Mode m) {
  for (auto& d : f.f1)
    if (!is_corolla_shape(d)) return std::nullopt;
  Graph d = image(f);
  if (!is_subgraph_element(d, f.tgt, m)) return std::nullopt;
  MapFactorization fz;
  try {
    fz = factorize(f, m);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (!fz.codegeneracies.empty() || !fz.inner.empty()) return std::nullopt;
  SubgraphWitness w;
  w.iso = fz.iso;
  w.chain = fz.outer;
  const Graph& k = f.tgt;
  if (d.num_vertices() == 0) {
    // k = H(edge) where H subdivides the edge with a (1;1) vertex.
    if (!w.chain.empty()) {
      w.outer = k;
      int e = k.find_edge(d.color[0]);
      const Edge ed = k.edges()[e];
      Graph h = k;
      int nv = h.num_vertices();
      h.vname.push_back("w");
      for (int i = 2; k.find_vertex(h.vname.back()) >= 0; ++i) h.vname.back() = "w" + std::to_string(i);
      h.vlabel.push_back("");
      auto add = [&](const std::string& name, int dir) {
        h.flag.push_back(name);
        h.cell.push_back(nv);
        h.iota.push_back(h.num_flags() - 1);
        h.pi.push_back(-1);
        h.color.push_back(k.color[ed.in_flag >= 0 ? ed.in_flag : ed.out_flag]);
        h.dir.push_back(dir);
        return h.num_flags() - 1;
      };
      int a = add(ed.name + "^", +1), b = add(ed.name + "^'", -1);
      h.vin.push_back({a});
      h.vout.push_back({b});
      if (ed.out_flag >= 0) {
        h.iota[ed.out_flag] = a;
        h.iota[a] = ed.out_flag;
      } else {
        std::replace(h.gin.begin(), h.gin.end(), ed.in_flag, a);
      }
      if (ed.in_flag >= 0) {
        h.iota[ed.in_flag] = b;
        h.iota[b] = ed.in_flag;
      } else {
        std::replace(h.gout.begin(), h.gout.end(), ed.out_flag, b);
      }
      validate(h);
      w.outer = h;
      w.w = nv;
    } else {
      w.outer = isolated_vertices(1);
      w.w = 0;
    }
    return w;
  }
  std::vector<int> s, e;
  for (auto& l : d.vlabel) s.push_back(k.find_vertex(l));
  for (auto& ed : d.edges())
    if (ed.internal()) e.push_back(k.find_edge(d.color[ed.in_flag]));
  Collapsed c = collapse(k, s, e);
  w.outer = c.outer;
  w.w = c.w;
  return w;
}

bool is_graphical(const Morphism& f, Mode m) {
  Graph d = image(f);
  if (is_subgraph_element(d, f.tgt, m)) return true;
  return false;
}

// ---------------------------------------------------------------------------------------------
// Hom-set enumeration

namespace {

struct Candidate {
  Graph element;  // decorated over K, listing to be fixed per use
  std::vector<int> ins, outs;  // K edges on the boundary, as multisets in leg order
};

std::vector<Candidate> subgraph_candidates(const Graph& k, Mode m) {
  std::vector<Candidate> out;
  auto es = k.edges();
  auto idx = edge_index(k);
  auto add = [&](const Graph& d) {
    Candidate c;
    c.element = d;
    for (int x : d.gin) c.ins.push_back(idx.at(d.color[x]));
    for (int x : d.gout) c.outs.push_back(idx.at(d.color[x]));
    out.push_back(std::move(c));
  };
  for (int e = 0; e < static_cast<int>(es.size()); ++e) {
    add(unit_element(k, e));
    if (m == Mode::Wheeled && k.num_vertices() == 0) add(exceptional_loop(es[e].name));
  }
  const int nv = k.num_vertices();
  if (nv == 0 || nv > 20) return out;
  Graph dk = decorate(k);
  for (unsigned mask = 1; mask < (1u << nv); ++mask) {
    std::vector<int> s;
    for (int v = 0; v < nv; ++v)
      if (mask & (1u << v)) s.push_back(v);
    std::vector<int> among;
    for (int i = 0; i < static_cast<int>(es.size()); ++i)
      if (es[i].ordinary() && (mask >> es[i].tail & 1) && (mask >> es[i].head & 1)) among.push_back(i);
    // Wheeled subgraphs may leave any of the edges among s cut.
    unsigned cut_limit = m == Mode::Wheeled ? (1u << among.size()) : 1u;
    for (unsigned cut = 0; cut < cut_limit; ++cut) {
      std::vector<int> keep;
      for (std::size_t i = 0; i < among.size(); ++i)
        if (!(cut >> i & 1)) keep.push_back(among[i]);
      Graph h = collapse(dk, s, keep).inner;
      if (!is_connected(h)) continue;
      if (!is_subgraph_element(h, k, m)) continue;
      add(h);
    }
  }
  return out;
}

}  // namespace

std::vector<Morphism> enumerate_graphical_maps(const Graph& g, const Graph& k, Mode m) {
  if (m == Mode::Properadic && !is_wheel_free(k)) throw ClassError("properadic maps need a wheel-free target");
  std::vector<Morphism> out;
  auto ge = g.edges();
  auto geo = g.edge_of_flag();
  auto ke = k.edges();
  auto cands = subgraph_candidates(k, m);
  const int nv = g.num_vertices();
  std::vector<int> f0(ge.size(), -1);
  std::vector<int> choice(nv, -1);
  std::vector<std::vector<int>> in_perm(nv), out_perm(nv);

  auto finish = [&]() {
    Morphism f;
    f.src = g;
    f.tgt = k;
    f.f0 = f0;
    for (int v = 0; v < nv; ++v) {
      const Candidate& c = cands[choice[v]];
      std::vector<std::string> ins, outs;
      for (int x : g.vin[v]) ins.push_back(ke[f0[geo[x]]].name);
      for (int x : g.vout[v]) outs.push_back(ke[f0[geo[x]]].name);
      f.f1.push_back(relist(c.element, ins, outs));
    }
    try {
      validate_morphism(f, m);
    } catch (const GraphError&) {
      return;
    }
    if (!is_graphical(f, m)) return;
    for (auto& o : out)
      if (same_map(o, f)) return;
    out.push_back(std::move(f));
  };

  // Assign f0 on the edges of vertex v by matching its flags to a candidate's boundary.
  std::function<void(int)> rec = [&](int v) {
    if (v == nv) {
      // Edges not touching any vertex (exceptional sources).
      int free_edge = -1;
      for (std::size_t i = 0; i < ge.size(); ++i)
        if (f0[i] < 0) free_edge = static_cast<int>(i);
      if (free_edge >= 0) {
        for (int t = 0; t < static_cast<int>(ke.size()); ++t) {
          f0[free_edge] = t;
          Morphism f;
          f.src = g;
          f.tgt = k;
          f.f0 = f0;
          if ((!is_loop_shape(g) || m == Mode::Wheeled) && is_graphical(f, m)) out.push_back(f);
          f0[free_edge] = -1;
        }
        return;
      }
      finish();
      return;
    }
    for (int ci = 0; ci < static_cast<int>(cands.size()); ++ci) {
      const Candidate& c = cands[ci];
      if (c.ins.size() != g.vin[v].size() || c.outs.size() != g.vout[v].size()) continue;
      choice[v] = ci;
      std::vector<int> pi(c.ins.size()), po(c.outs.size());
      std::iota(pi.begin(), pi.end(), 0);
      do {
        std::iota(po.begin(), po.end(), 0);
        do {
          std::vector<int> set_here;
          bool ok = true;
          auto assign = [&](int x, int target) {
            int e = geo[x];
            if (f0[e] < 0) {
              f0[e] = target;
              set_here.push_back(e);
            } else if (f0[e] != target) {
              ok = false;
            }
          };
          for (std::size_t i = 0; i < pi.size() && ok; ++i) assign(g.vin[v][i], c.ins[pi[i]]);
          for (std::size_t i = 0; i < po.size() && ok; ++i) assign(g.vout[v][i], c.outs[po[i]]);
          if (ok) rec(v + 1);
          for (int e : set_here) f0[e] = -1;
        } while (std::next_permutation(po.begin(), po.end()));
      } while (std::next_permutation(pi.begin(), pi.end()));
    }
    choice[v] = -1;
  };
  rec(0);
  return out;
}

// ---------------------------------------------------------------------------------------------
// Factorization

Morphism MapFactorization::minus_part() const {
  if (exceptional) return iso;
  std::vector<const Morphism*> steps;
  for (auto& s : codegeneracies) steps.push_back(&s);
  steps.push_back(&iso);
  return fold(source, steps);
}

Morphism MapFactorization::plus_part() const {
  if (exceptional) return identity_map(iso.tgt);
  std::vector<const Morphism*> steps;
  for (auto& s : inner) steps.push_back(&s);
  for (auto& s : outer) steps.push_back(&s);
  return fold(iso.tgt, steps);
}

Morphism MapFactorization::image_part() const {
  if (exceptional) return iso;
  std::vector<const Morphism*> steps;
  for (auto& s : codegeneracies) steps.push_back(&s);
  steps.push_back(&iso);
  for (auto& s : inner) steps.push_back(&s);
  return fold(source, steps);
}

Morphism MapFactorization::outer_part() const {
  if (exceptional) return identity_map(iso.tgt);
  std::vector<const Morphism*> steps;
  for (auto& s : outer) steps.push_back(&s);
  Graph start = outer.empty() ? (inner.empty() ? iso.tgt : inner.back().tgt) : outer.front().src;
  return fold(start, steps);
}

Morphism MapFactorization::composite() const {
  if (exceptional) return iso;
  std::vector<const Morphism*> steps;
  for (auto& s : codegeneracies) steps.push_back(&s);
  steps.push_back(&iso);
  for (auto& s : inner) steps.push_back(&s);
  for (auto& s : outer) steps.push_back(&s);
  return fold(source, steps);
}

MapFactorization factorize(const Morphism& f, Mode m, std::uint64_t seed) {
  validate_morphism(f, m);
  if (!is_graphical(f, m)) throw GraphError("map is not graphical");
  std::mt19937_64 gen(seed);
  std::mt19937_64* rng = seed ? &gen : nullptr;
  MapFactorization r;
  r.source = f.src;
  const Graph& k = f.tgt;

  if (f.src.num_vertices() == 1 && is_loop_shape(f.f1[0])) {
    r.exceptional = true;
    r.iso = f;
    return r;
  }

  // Codegeneracies at the vertices sent to exceptional edges.
  std::vector<std::string> t;
  for (int v = 0; v < f.src.num_vertices(); ++v)
    if (is_unit_shape(f.f1[v])) t.push_back(f.src.vname[v]);
  maybe_shuffle(t, rng);
  Graph g1 = f.src;
  for (auto& name : t) {
    Morphism s = codegeneracy(g1, g1.find_vertex(name));
    g1 = s.tgt;
    r.codegeneracies.push_back(std::move(s));
  }
  Morphism sigma = fold(f.src, [&] {
    std::vector<const Morphism*> v;
    for (auto& s : r.codegeneracies) v.push_back(&s);
    return v;
  }());
  // f = fp sigma
  Morphism fp;
  fp.src = g1;
  fp.tgt = k;
  fp.f0.assign(g1.edges().size(), -1);
  for (std::size_t e = 0; e < sigma.f0.size(); ++e) fp.f0[sigma.f0[e]] = f.f0[e];
  for (int u = 0; u < g1.num_vertices(); ++u) fp.f1.push_back(f.f1.at(f.src.find_vertex(g1.vname[u])));

  // Image with provenance.
  Graph recol = g1;
  {
    auto ke = k.edges();
    auto eo = g1.edge_of_flag();
    for (int x = 0; x < g1.num_flags(); ++x) recol.color[x] = ke[fp.f0[eo[x]]].name;
    for (int u = 0; u < g1.num_vertices(); ++u) recol.vlabel[u] = g1.vname[u];
  }
  std::map<int, Graph> inner_map;
  for (int u = 0; u < g1.num_vertices(); ++u) inner_map.emplace(u, fp.f1[u]);
  Substituted img = substitute(recol, inner_map);

  OuterChain oc = outer_chain(k, img.graph, m, rng);
  const Graph& z = oc.z;
  for (auto it = oc.down.rbegin(); it != oc.down.rend(); ++it) r.outer.push_back(*it);

  if (g1.num_vertices() == 0) {
    Morphism i;
    i.src = g1;
    i.tgt = z;
    i.f0 = {0};
    r.iso = i;
  } else {
    // Flags of the image -> flags of z, through labels and slot positions.
    const Graph& im = img.graph;
    std::vector<int> beta(im.num_flags(), -1);
    std::map<std::string, int> block;  // vertex name of z -> vertex of g1
    for (int x = 0; x < im.num_vertices(); ++x) {
      int zv = z.find_vertex(im.vlabel[x]);
      if (zv < 0) throw std::logic_error("factorize: image vertex missing from the subgraph");
      block[z.vname[zv]] = img.provenance.vertex_origin[x].first;
      for (std::size_t j = 0; j < im.vin[x].size(); ++j) beta[im.vin[x][j]] = z.vin[zv].at(j);
      for (std::size_t j = 0; j < im.vout[x].size(); ++j) beta[im.vout[x][j]] = z.vout[zv].at(j);
    }
    std::set<std::string> bflags;  // names of z flags internal to a block
    for (int y = 0; y < im.num_flags(); ++y)
      if (img.provenance.flag_origin[y].outer_flag < 0 && beta[y] >= 0) bflags.insert(z.flag[beta[y]]);

    Graph cur = z;
    std::vector<Morphism> inner_down;
    auto push = [&](const Factorization& fz, const std::string& merged_from) {
      Morphism mm = coface(cur, fz);
      block[fz.outer.vname[fz.w]] = block.at(merged_from);
      cur = fz.outer;
      inner_down.push_back(std::move(mm));
    };
    for (;;) {
      if (m == Mode::Properadic) {
        std::vector<std::pair<int, int>> pairs;
        for (auto [a, b] : closest_neighbors(cur))
          if (block.at(cur.vname[a]) == block.at(cur.vname[b])) pairs.emplace_back(a, b);
        maybe_shuffle(pairs, rng);
        if (pairs.empty()) break;
        auto [a, b] = pairs.front();
        std::string an = cur.vname[a], bn = cur.vname[b];
        auto fs = inner_properadic_factorizations(cur);
        auto* fz = find_face(fs, [&](const Factorization& x) {
          return x.vertices.size() == 2 && cur.vname[x.vertices[0]] == an && cur.vname[x.vertices[1]] == bn;
        });
        if (!fz) throw std::logic_error("factorize: closest neighbors without a face");
        push(*fz, an);
      } else {
        auto es = cur.edges();
        std::vector<int> lp, de;
        for (auto [v, e] : loops(cur))
          if (bflags.count(cur.flag[es[e].in_flag])) lp.push_back(e);
        for (int e : distinct_vertex_edges(cur))
          if (bflags.count(cur.flag[es[e].in_flag])) de.push_back(e);
        maybe_shuffle(lp, rng);
        maybe_shuffle(de, rng);
        if (!lp.empty()) {
          std::string en = es[lp.front()].name;
          auto fs = inner_contracting_factorizations(cur);
          auto* fz = find_face(fs, [&](const Factorization& x) { return es[x.edge].name == en; });
          push(*fz, cur.vname[es[lp.front()].head]);
        } else if (!de.empty()) {
          std::string en = es[de.front()].name;
          auto fs = inner_dioperadic_factorizations(cur);
          auto* fz = find_face(fs, [&](const Factorization& x) { return es[x.edge].name == en; });
          push(*fz, cur.vname[es[de.front()].head]);
        } else {
          break;
        }
      }
    }
    if (cur.num_vertices() != g1.num_vertices()) throw std::logic_error("factorize: blocks did not collapse");
    for (auto it = inner_down.rbegin(); it != inner_down.rend(); ++it) r.inner.push_back(*it);

    // i: g1 -> cur, through the provenance of the image.
    std::vector<int> slot_to_image(g1.num_flags(), -1);
    for (int y = 0; y < im.num_flags(); ++y) {
      int o = img.provenance.flag_origin[y].outer_flag;
      if (o >= 0 && im.cell[y] >= 0) slot_to_image[o] = y;
    }
    auto g1e = g1.edges();
    auto ceo = cur.edge_of_flag();
    auto cfm = flag_map(cur);
    std::vector<int> e0;
    for (auto& e : g1e) {
      int x = e.in_flag >= 0 ? e.in_flag : e.out_flag;
      int y = slot_to_image.at(x);
      if (y < 0 || beta[y] < 0) throw std::logic_error("factorize: slot without image flag");
      e0.push_back(ceo[cfm.at(z.flag[beta[y]])]);
    }
    auto iso = iso_with_edge_map(g1, cur, e0);
    if (!iso) throw std::logic_error("factorize: no isomorphism onto the collapsed graph");
    r.iso = *iso;
  }
  if (!same_map(r.composite(), f)) throw std::logic_error("factorize: recomposition differs from the map");
  return r;
}

bool equivalent_factorizations(const MapFactorization& a, const MapFactorization& b) {
  if (a.exceptional || b.exceptional) return a.exceptional == b.exceptional && same_map(a.iso, b.iso);
  return splits_isomorphic(a.minus_part(), a.plus_part(), b.minus_part(), b.plus_part()) &&
         splits_isomorphic(a.image_part(), a.outer_part(), b.image_part(), b.outer_part());
}

// ---------------------------------------------------------------------------------------------
// Codimension 2

namespace {

std::string face_kind(const Morphism& d) { return is_inner_coface(d) ? "inner" : "outer"; }

// Isomorphisms t: k -> k2 with c t = f.
std::optional<Morphism> match_source(const Morphism& c, const Morphism& f) {
  const Graph& k = f.src;
  const Graph& k2 = c.src;
  auto ke = k.edges();
  auto k2e = k2.edges();
  if (ke.size() != k2e.size() || k.num_vertices() != k2.num_vertices()) return std::nullopt;
  std::vector<int> t0(ke.size(), -1);
  std::vector<char> used(k2e.size(), 0);
  std::optional<Morphism> found;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (found) return;
    if (i == ke.size()) {
      auto t = iso_with_edge_map(k, k2, t0);
      if (t && same_map(compose(c, *t), f)) found = *t;
      return;
    }
    for (std::size_t j = 0; j < k2e.size(); ++j)
      if (!used[j] && c.f0[j] == f.f0[i] && k2e[j].kind == ke[i].kind) {
        used[j] = 1;
        t0[i] = static_cast<int>(j);
        rec(i + 1);
        used[j] = 0;
      }
  };
  rec(0);
  return found;
}

}  // namespace

std::optional<Codim2> codim2_alternative(const Morphism& dv, const Morphism& du, Mode m) {
  Morphism f = compose(du, dv);
  const Graph& g = du.tgt;
  struct Cand {
    Morphism dy, dx;
  };
  std::vector<Cand> all{{dv, du}};
  for (auto& dx : cofaces_into(g, m)) {
    const Graph& j = dx.src;
    if (std::abs(j.num_vertices() - f.src.num_vertices()) > 1) continue;
    for (auto& dy : cofaces_into(j, m)) {
      if (dy.src.num_vertices() != f.src.num_vertices()) continue;
      auto t = match_source(compose(dx, dy), f);
      if (t) all.push_back({compose(dy, *t), dx});
    }
  }
  std::vector<int> reps;
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    bool fresh = true;
    for (int r : reps)
      if (splits_isomorphic(all[r].dy, all[r].dx, all[i].dy, all[i].dx)) {
        fresh = false;
        break;
      }
    if (fresh) reps.push_back(i);
  }
  if (reps.size() < 2) return std::nullopt;
  Codim2 c;
  c.dy = all[reps[1]].dy;
  c.dx = all[reps[1]].dx;
  c.classes = static_cast<int>(reps.size());
  c.shape = face_kind(dv) + "/" + face_kind(du) + " -> " + face_kind(c.dy) + "/" + face_kind(c.dx);
  return c;
}

std::vector<Morphism> graph_isomorphisms(const Graph& a, const Graph& b) { return all_graph_isos(a, b); }

std::optional<Morphism> factor_through_iso(const Morphism& c, const Morphism& f) { return match_source(c, f); }

Morphism corolla_inclusion(const Graph& g, int v) {
  Graph c = corolla(g.vertex_in_colors(v), g.vertex_out_colors(v));
  auto eo = g.edge_of_flag();
  std::vector<int> f0;
  for (int x : g.vin[v]) f0.push_back(eo[x]);
  for (int x : g.vout[v]) f0.push_back(eo[x]);
  // corolla edges are its inputs then its outputs, in listing order
  auto ce = c.edges();
  auto ceo = c.edge_of_flag();
  std::vector<int> m(ce.size());
  for (std::size_t k = 0; k < c.gin.size(); ++k) m[ceo[c.gin[k]]] = f0[k];
  for (std::size_t k = 0; k < c.gout.size(); ++k) m[ceo[c.gout[k]]] = f0[c.gin.size() + k];
  Morphism f;
  f.src = c;
  f.tgt = g;
  f.f0 = m;
  f.f1.push_back(corolla_element(g, v));
  return f;
}

Morphism total_inclusion(const Graph& g) {
  Graph c = corolla(g.input_colors(), g.output_colors());
  auto eo = g.edge_of_flag();
  auto ceo = c.edge_of_flag();
  Morphism f;
  f.src = c;
  f.tgt = g;
  f.f0.assign(c.edges().size(), -1);
  for (std::size_t k = 0; k < c.gin.size(); ++k) f.f0[ceo[c.gin[k]]] = eo[g.gin[k]];
  for (std::size_t k = 0; k < c.gout.size(); ++k) f.f0[ceo[c.gout[k]]] = eo[g.gout[k]];
  f.f1.push_back(decorate(g));
  return f;
}

Morphism edge_inclusion(const Graph& g, int e) {
  Morphism f;
  f.src = exceptional_edge();
  f.tgt = g;
  f.f0 = {e};
  return f;
}

// ---------------------------------------------------------------------------------------------
// Reedy

const char* reedy_class_name(ReedyClass c) {
  switch (c) {
    case ReedyClass::Plus: return "plus";
    case ReedyClass::Minus: return "minus";
    case ReedyClass::Iso: return "iso";
    case ReedyClass::Neither: return "neither";
  }
  return "?";
}

bool edge_injective(const Morphism& f) {
  std::set<int> s(f.f0.begin(), f.f0.end());
  return s.size() == f.f0.size();
}

bool edge_surjective(const Morphism& f) {
  std::set<int> s(f.f0.begin(), f.f0.end());
  return s.size() == f.tgt.edges().size();
}

bool in_plus(const Morphism& f) { return edge_injective(f); }

bool in_minus(const Morphism& f) {
  if (!edge_surjective(f)) return false;
  std::set<std::string> hit;
  for (auto& d : f.f1)
    if (is_corolla_shape(d)) hit.insert(d.vlabel[0]);
  for (auto& n : f.tgt.vname)
    if (!hit.count(n)) return false;
  return true;
}

bool is_isomorphism(const Morphism& f) {
  if (!edge_injective(f) || !edge_surjective(f)) return false;
  if (f.src.num_vertices() != f.tgt.num_vertices()) return false;
  std::set<std::string> hit;
  for (auto& d : f.f1) {
    if (!is_corolla_shape(d)) return false;
    hit.insert(d.vlabel[0]);
  }
  return static_cast<int>(hit.size()) == f.tgt.num_vertices();
}

ReedyClass reedy_class(const Morphism& f) {
  if (is_isomorphism(f)) return ReedyClass::Iso;
  if (in_plus(f)) return ReedyClass::Plus;
  if (in_minus(f)) return ReedyClass::Minus;
  return ReedyClass::Neither;
}

ReedyReport reedy_axioms(const std::vector<Graph>& corpus) {
  ReedyReport rep;
  rep.objects = static_cast<int>(corpus.size());
  const int n = rep.objects;
  std::vector<std::vector<std::vector<Morphism>>> hom(n, std::vector<std::vector<Morphism>>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) hom[a][b] = enumerate_graphical_maps(corpus[a], corpus[b]);
  std::vector<std::vector<Morphism>> auts(n);
  for (int a = 0; a < n; ++a)
    for (auto& f : hom[a][a])
      if (is_isomorphism(f)) auts[a].push_back(f);
  auto fail = [&](bool& flag, const std::string& what, int a, int b) {
    flag = false;
    if (rep.failures.size() < 20) rep.failures.push_back(what + " on a map " + std::to_string(a) + " -> " + std::to_string(b));
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (auto& f : hom[a][b]) {
        ++rep.maps;
        bool p = in_plus(f), mi = in_minus(f), iso = is_isomorphism(f);
        int da = corpus[a].num_vertices(), db = corpus[b].num_vertices();
        if (iso) ++rep.iso;
        else if (p) ++rep.plus;
        else if (mi) ++rep.minus;
        else ++rep.neither;
        if ((p && mi) != iso) fail(rep.intersection_axiom, "plus and minus but not iso (or iso not both)", a, b);
        if (iso && da != db) fail(rep.degree_axiom, "isomorphism changes degree", a, b);
        if (p && !iso && !(da < db)) fail(rep.degree_axiom, "plus map does not raise degree", a, b);
        if (mi && !iso && !(da > db)) fail(rep.degree_axiom, "minus map does not lower degree", a, b);
        try {
          MapFactorization fz = factorize(f);
          MapFactorization fz2 = factorize(f, Mode::Properadic, 977 + rep.maps);
          if (!in_minus(fz.minus_part()) || !in_plus(fz.plus_part()) || !same_map(fz.composite(), f) ||
              !equivalent_factorizations(fz, fz2))
            fail(rep.factorization_axiom, "factorization", a, b);
        } catch (const std::exception& e) {
          fail(rep.factorization_axiom, std::string("factorization threw: ") + e.what(), a, b);
        }
        if (mi)
          for (auto& t : auts[b])
            if (same_map(compose(t, f), f) && !same_map(t, identity_map(corpus[b])))
              fail(rep.minus_rigid, "nontrivial automorphism fixes a minus map", a, b);
        if (p)
          for (auto& t : auts[a])
            if (same_map(compose(f, t), f) && !same_map(t, identity_map(corpus[a])))
              fail(rep.plus_rigid, "nontrivial automorphism fixes a plus map", a, b);
      }
  return rep;
}

std::string format_reedy(const ReedyReport& r) {
  std::ostringstream os;
  os << "objects " << r.objects << "\nmaps " << r.maps << "\nplus " << r.plus << "\nminus " << r.minus << "\niso "
     << r.iso << "\nneither " << r.neither << "\n";
  os << "axiom-i " << (r.degree_axiom ? "pass" : "fail") << "\naxiom-ii " << (r.intersection_axiom ? "pass" : "fail")
     << "\naxiom-iii " << (r.factorization_axiom ? "pass" : "fail") << "\naxiom-iv " << (r.minus_rigid ? "pass" : "fail")
     << "\naxiom-iv' " << (r.plus_rigid ? "pass" : "fail") << "\n";
  for (auto& f : r.failures) os << "failure " << f << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------------------------
// Text form

std::string print_morphism(const Morphism& f) {
  std::ostringstream os;
  os << "map\nsource\n" << print_graph(f.src) << "target\n" << print_graph(f.tgt);
  auto se = f.src.edges(), te = f.tgt.edges();
  for (std::size_t i = 0; i < se.size(); ++i) os << "f0 " << se[i].name << "=" << te[f.f0[i]].name << "\n";
  for (int v = 0; v < f.src.num_vertices(); ++v) os << "f1 " << f.src.vname[v] << "\n" << print_graph(f.f1[v]);
  os << "end\n";
  return os.str();
}

Morphism parse_morphism(const std::string& text, Mode m) {
  std::vector<std::string> lines;
  {
    std::istringstream is(text);
    std::string l;
    while (std::getline(is, l)) lines.push_back(l);
  }
  auto trimmed = [&](std::size_t i) {
    auto t = split_ws(lines[i]);
    return join(t, " ");
  };
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < lines.size() && (trimmed(pos).empty() || trimmed(pos)[0] == '#')) ++pos;
  };
  auto expect = [&](const std::string& word) {
    skip();
    if (pos >= lines.size() || trimmed(pos) != word) throw GraphError("map file: expected '" + word + "'");
    ++pos;
  };
  expect("map");
  expect("source");
  Morphism f;
  f.src = parse_graph_lines(lines, pos);
  expect("target");
  f.tgt = parse_graph_lines(lines, pos);
  auto se = f.src.edges();
  auto tidx = edge_index(f.tgt);
  auto sidx = edge_index(f.src);
  f.f0.assign(se.size(), -1);
  f.f1.assign(f.src.num_vertices(), Graph{});
  std::vector<char> have(f.src.num_vertices(), 0);
  for (;;) {
    skip();
    if (pos >= lines.size()) throw GraphError("map file: missing 'end'");
    auto tok = split_ws(lines[pos]);
    if (tok[0] == "end") break;
    if (tok[0] == "f0") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        auto eq = tok[i].find('=');
        if (eq == std::string::npos) throw GraphError("map file: expected a=b after f0");
        std::string a = tok[i].substr(0, eq), b = tok[i].substr(eq + 1);
        if (!sidx.count(a)) throw GraphError("map file: unknown source edge " + a);
        if (!tidx.count(b)) throw GraphError("map file: unknown target edge " + b);
        f.f0[sidx[a]] = tidx[b];
      }
      ++pos;
    } else if (tok[0] == "f1" && tok.size() == 2) {
      int v = f.src.find_vertex(tok[1]);
      if (v < 0) throw GraphError("map file: unknown source vertex " + tok[1]);
      ++pos;
      f.f1[v] = parse_graph_lines(lines, pos);
      have[v] = 1;
    } else {
      throw GraphError("map file: unexpected line '" + lines[pos] + "'");
    }
  }
  for (std::size_t i = 0; i < se.size(); ++i)
    if (f.f0[i] < 0) throw GraphError("map file: no f0 entry for edge " + se[i].name);
  for (int v = 0; v < f.src.num_vertices(); ++v)
    if (!have[v]) throw GraphError("map file: no f1 entry for vertex " + f.src.vname[v]);
  validate_morphism(f, m);
  return f;
}

}  // namespace pg
