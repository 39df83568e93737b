#include "pg/substitution.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "pg/analysis.hpp"

namespace pg {

Graph vertex_corolla(const Graph& g, int v) {
  Builder b;
  int c = b.vertex(g.vname[v], g.vlabel[v]);
  for (int x : g.vin[v]) b.in_flag(c, g.flag[x], g.color[x]);
  for (int x : g.vout[v]) b.out_flag(c, g.flag[x], g.color[x]);
  return b.build();
}

namespace {

class NameSet {
 public:
  std::string claim(const std::string& want) {
    std::string n = want;
    for (int k = 2; used_.count(n); ++k) n = want + "~" + std::to_string(k);
    used_.insert(n);
    return n;
  }

 private:
  std::set<std::string> used_;
};

}  // namespace

Substituted substitute(const Graph& G, const std::map<int, Graph>& inner_in) {
  const int nv = G.num_vertices();
  std::vector<Graph> H(nv);
  for (int v = 0; v < nv; ++v) {
    auto it = inner_in.find(v);
    H[v] = it == inner_in.end() ? vertex_corolla(G, v) : it->second;
    if (H[v].input_colors() != G.vertex_in_colors(v) || H[v].output_colors() != G.vertex_out_colors(v))
      throw GraphError("profile mismatch at vertex " + G.vname[v]);
  }
  for (auto& [v, _] : inner_in)
    if (v < 0 || v >= nv) throw GraphError("substitution at unknown vertex");

  // Slot bookkeeping: outer flag at a vertex <-> leg of the inner graph.
  std::vector<int> hleg(G.num_flags(), -1);
  std::vector<std::vector<int>> slot_of(nv);
  for (int v = 0; v < nv; ++v) {
    slot_of[v].assign(H[v].num_flags(), -1);
    for (std::size_t k = 0; k < G.vin[v].size(); ++k) {
      hleg[G.vin[v][k]] = H[v].gin[k];
      slot_of[v][H[v].gin[k]] = G.vin[v][k];
    }
    for (std::size_t k = 0; k < G.vout[v].size(); ++k) {
      hleg[G.vout[v][k]] = H[v].gout[k];
      slot_of[v][H[v].gout[k]] = G.vout[v][k];
    }
  }

  Substituted out;
  Graph& R = out.graph;
  Provenance& P = out.provenance;
  NameSet names;
  // Reserve outer flag names first so that inner-only flags yield to them.
  for (int x = 0; x < G.num_flags(); ++x) names.claim(G.flag[x]);

  auto add_flag = [&](const std::string& name, int cell, const std::string& color, int dir, FlagOrigin o) {
    R.flag.push_back(name);
    R.cell.push_back(cell);
    R.iota.push_back(static_cast<int>(R.iota.size()));
    R.pi.push_back(-1);
    R.color.push_back(color);
    R.dir.push_back(dir);
    P.flag_origin.push_back(o);
    return R.num_flags() - 1;
  };

  // Vertices.
  std::vector<int> offset(nv, 0);
  {
    NameSet vnames;
    int count = 0;
    for (int v = 0; v < nv; ++v) {
      offset[v] = count;
      count += H[v].num_vertices();
    }
    for (int v = 0; v < nv; ++v) vnames.claim(G.vname[v]);
    for (int v = 0; v < nv; ++v) {
      for (int w = 0; w < H[v].num_vertices(); ++w) {
        std::string nm = H[v].num_vertices() == 1 ? G.vname[v] : vnames.claim(G.vname[v] + "." + H[v].vname[w]);
        R.vname.push_back(nm);
        R.vlabel.push_back(H[v].vlabel[w].empty() ? G.vlabel[v] : H[v].vlabel[w]);
        R.vin.emplace_back();
        R.vout.emplace_back();
        P.vertex_origin.emplace_back(v, w);
      }
    }
  }

  // Flags: outer exceptional flags, then inner flags that are not exceptional wires.
  std::vector<int> from_outer(G.num_flags(), -1);
  for (int x = 0; x < G.num_flags(); ++x)
    if (G.cell[x] < 0) from_outer[x] = add_flag(G.flag[x], -1, G.color[x], G.dir[x], {x, -1, -1});
  std::vector<std::vector<int>> from_inner(nv);
  for (int v = 0; v < nv; ++v) {
    const Graph& h = H[v];
    from_inner[v].assign(h.num_flags(), -1);
    for (int y = 0; y < h.num_flags(); ++y) {
      bool leg = h.iota[y] == y;
      if (h.cell[y] < 0 && leg) continue;  // a wire, resolved below
      std::string nm = leg ? G.flag[slot_of[v][y]] : names.claim(G.vname[v] + "." + h.flag[y]);
      int cell = h.cell[y] < 0 ? -1 : offset[v] + h.cell[y];
      from_inner[v][y] = add_flag(nm, cell, h.color[y], h.dir[y], {leg ? slot_of[v][y] : -1, v, y});
    }
  }
  for (int x = 0; x < G.num_flags(); ++x)
    if (G.cell[x] < 0) {
      R.iota[from_outer[x]] = from_outer[G.iota[x]];
      if (G.pi[x] >= 0) R.pi[from_outer[x]] = from_outer[G.pi[x]];
    }
  for (int v = 0; v < nv; ++v)
    for (int y = 0; y < H[v].num_flags(); ++y)
      if (from_inner[v][y] >= 0 && H[v].iota[y] != y) R.iota[from_inner[v][y]] = from_inner[v][H[v].iota[y]];

  // Wires: exceptional legs of inner graphs, paired by pi.  Chains alternate outer iota and inner pi.
  std::vector<std::vector<char>> wire_seen(nv);
  for (int v = 0; v < nv; ++v) wire_seen[v].assign(H[v].num_flags(), 0);
  struct End {
    bool real = false;
    int id = -1;    // result flag when real
    int slot = -1;  // outer leg slot otherwise
  };
  auto follow = [&](int s) {
    for (;;) {
      int t = G.iota[s];
      if (t == s) return End{false, -1, s};
      int u = G.cell[t];
      int l = hleg[t];
      if (H[u].cell[l] >= 0) return End{true, from_inner[u][l], -1};
      wire_seen[u][l] = 1;
      int l2 = H[u].pi[l];
      wire_seen[u][l2] = 1;
      s = slot_of[u][l2];
    }
  };
  std::vector<int> leg_result(G.num_flags(), -1);
  for (int v = 0; v < nv; ++v)
    for (int y = 0; y < H[v].num_flags(); ++y) {
      if (from_inner[v][y] < 0 || H[v].iota[y] != y || H[v].cell[y] < 0) continue;
      End e = follow(slot_of[v][y]);
      if (e.real) R.iota[from_inner[v][y]] = e.id;
      else leg_result[e.slot] = from_inner[v][y];
    }
  // Chains of wires between two outer legs become exceptional edges.
  for (int s = 0; s < G.num_flags(); ++s) {
    if (G.cell[s] < 0 || G.iota[s] != s || leg_result[s] >= 0) continue;
    int v = G.cell[s];
    int l = hleg[s];
    if (H[v].cell[l] >= 0) continue;
    wire_seen[v][l] = 1;
    int l2 = H[v].pi[l];
    wire_seen[v][l2] = 1;
    End e = follow(slot_of[v][l2]);
    if (e.real) throw GraphError("internal error: wire chain ends at a real flag");
    int a = add_flag(G.flag[s], -1, G.color[s], G.dir[s], {s, v, l});
    int b = add_flag(G.flag[e.slot], -1, G.color[e.slot], G.dir[e.slot], {e.slot, G.cell[e.slot], hleg[e.slot]});
    R.pi[a] = b;
    R.pi[b] = a;
    leg_result[s] = a;
    leg_result[e.slot] = b;
  }
  // Closed chains become exceptional loops.
  for (int v = 0; v < nv; ++v)
    for (int l = 0; l < H[v].num_flags(); ++l) {
      if (H[v].cell[l] >= 0 || H[v].iota[l] != l || wire_seen[v][l]) continue;
      // Walk the cycle, remembering the outer edges crossed.
      std::vector<std::pair<int, int>> crossed;  // (outer out flag, outer in flag)
      int u = v, cur = l;
      do {
        wire_seen[u][cur] = 1;
        int l2 = H[u].pi[cur];
        wire_seen[u][l2] = 1;
        int s = slot_of[u][l2];
        int t = G.iota[s];
        crossed.emplace_back(G.dir[s] < 0 ? s : t, G.dir[s] < 0 ? t : s);
        u = G.cell[t];
        cur = hleg[t];
      } while (!(u == v && cur == l));
      auto best = *std::min_element(crossed.begin(), crossed.end(),
                                    [](auto& p, auto& q) { return p.second < q.second; });
      int a = add_flag(G.flag[best.second], -1, G.color[best.second], +1, {best.second, -1, -1});
      int b = add_flag(G.flag[best.first], -1, G.color[best.first], -1, {best.first, -1, -1});
      R.iota[a] = b;
      R.iota[b] = a;
    }

  // Listings.
  auto map_outer = [&](int x) { return G.cell[x] < 0 ? from_outer[x] : leg_result[x]; };
  for (int x : G.gin) R.gin.push_back(map_outer(x));
  for (int x : G.gout) R.gout.push_back(map_outer(x));
  for (int v = 0; v < nv; ++v)
    for (int w = 0; w < H[v].num_vertices(); ++w) {
      for (int y : H[v].vin[w]) R.vin[offset[v] + w].push_back(from_inner[v][y]);
      for (int y : H[v].vout[w]) R.vout[offset[v] + w].push_back(from_inner[v][y]);
    }
  {
    std::set<std::string> seen;
    for (auto& f : R.flag)
      if (!seen.insert(f).second) throw GraphError("internal error: duplicate flag name in substitution", f);
  }
  validate(R);
  return out;
}

Graph substitute_vertex(const Graph& outer, int v, const Graph& inner) {
  return substitute(outer, {{v, inner}}).graph;
}

Collapsed collapse(const Graph& k, const std::vector<int>& s, const std::vector<int>& e) {
  auto es = k.edges();
  std::vector<char> in_s(k.num_vertices(), 0);
  for (int v : s) in_s[v] = 1;
  std::vector<char> in_e_flag(k.num_flags(), 0);
  for (int i : e) {
    const Edge& ed = es.at(i);
    if (!ed.ordinary() || !in_s[ed.tail] || !in_s[ed.head])
      throw GraphError("collapse: edge " + ed.name + " is not an internal edge among the chosen vertices");
    in_e_flag[ed.in_flag] = in_e_flag[ed.out_flag] = 1;
  }
  Collapsed c;
  // Inner graph on S.
  {
    Graph& h = c.inner;
    std::vector<int> id(k.num_flags(), -1);
    std::vector<int> vpos(k.num_vertices(), -1);
    for (std::size_t i = 0; i < s.size(); ++i) vpos[s[i]] = static_cast<int>(i);
    for (int x = 0; x < k.num_flags(); ++x) {
      if (k.cell[x] < 0 || !in_s[k.cell[x]]) continue;
      id[x] = h.num_flags();
      h.flag.push_back(k.flag[x]);
      h.cell.push_back(vpos[k.cell[x]]);
      h.iota.push_back(-1);
      h.pi.push_back(-1);
      h.color.push_back(k.color[x]);
      h.dir.push_back(k.dir[x]);
    }
    for (int x = 0; x < k.num_flags(); ++x)
      if (id[x] >= 0) h.iota[id[x]] = in_e_flag[x] ? id[k.iota[x]] : id[x];
    for (int v : s) {
      h.vname.push_back(k.vname[v]);
      h.vlabel.push_back(k.vlabel[v]);
      std::vector<int> a, b;
      for (int x : k.vin[v]) a.push_back(id[x]);
      for (int x : k.vout[v]) b.push_back(id[x]);
      h.vin.push_back(a);
      h.vout.push_back(b);
    }
    for (int v : s) {
      for (int x : k.vin[v])
        if (!in_e_flag[x]) h.gin.push_back(id[x]);
    }
    for (int v : s) {
      for (int x : k.vout[v])
        if (!in_e_flag[x]) h.gout.push_back(id[x]);
    }
    validate(h);
  }
  // Outer graph with S merged into w.
  {
    Graph& g = c.outer;
    int first = *std::min_element(s.begin(), s.end());
    std::vector<int> vnew(k.num_vertices(), -1);
    int count = 0;
    for (int v = 0; v < k.num_vertices(); ++v) {
      if (in_s[v] && v != first) continue;
      vnew[v] = count++;
    }
    c.w = vnew[first];
    for (int v : s) vnew[v] = c.w;
    std::vector<int> id(k.num_flags(), -1);
    for (int x = 0; x < k.num_flags(); ++x) {
      if (in_e_flag[x]) continue;
      id[x] = g.num_flags();
      g.flag.push_back(k.flag[x]);
      g.cell.push_back(k.cell[x] < 0 ? -1 : vnew[k.cell[x]]);
      g.iota.push_back(-1);
      g.pi.push_back(-1);
      g.color.push_back(k.color[x]);
      g.dir.push_back(k.dir[x]);
    }
    for (int x = 0; x < k.num_flags(); ++x)
      if (id[x] >= 0) {
        g.iota[id[x]] = id[k.iota[x]];
        if (k.pi[x] >= 0) g.pi[id[x]] = id[k.pi[x]];
      }
    std::vector<std::string> snames;
    for (int v : s) snames.push_back(k.vname[v]);
    for (int v = 0; v < k.num_vertices(); ++v) {
      if (in_s[v] && v != first) continue;
      if (v == first) {
        g.vname.push_back(join(snames, "+"));
        g.vlabel.push_back("");
        std::vector<int> a, b;
        for (int y : c.inner.gin) a.push_back(id[k.find_flag(c.inner.flag[y])]);
        for (int y : c.inner.gout) b.push_back(id[k.find_flag(c.inner.flag[y])]);
        g.vin.push_back(a);
        g.vout.push_back(b);
      } else {
        g.vname.push_back(k.vname[v]);
        g.vlabel.push_back(k.vlabel[v]);
        std::vector<int> a, b;
        for (int x : k.vin[v]) a.push_back(id[x]);
        for (int x : k.vout[v]) b.push_back(id[x]);
        g.vin.push_back(a);
        g.vout.push_back(b);
      }
    }
    for (int x : k.gin) g.gin.push_back(id[x]);
    for (int x : k.gout) g.gout.push_back(id[x]);
    validate(g);
  }
  return c;
}

const char* factor_kind_name(FactorKind k) {
  switch (k) {
    case FactorKind::InnerProperadic: return "inner-prop";
    case FactorKind::OuterProperadic: return "outer-prop";
    case FactorKind::InnerDioperadic: return "inner-diop";
    case FactorKind::OuterDioperadic: return "outer-diop";
    case FactorKind::InnerContracting: return "inner-contr";
    case FactorKind::OuterContracting: return "outer-contr";
  }
  return "?";
}

FactorKind parse_factor_kind(const std::string& s) {
  for (FactorKind k : {FactorKind::InnerProperadic, FactorKind::OuterProperadic, FactorKind::InnerDioperadic,
                       FactorKind::OuterDioperadic, FactorKind::InnerContracting, FactorKind::OuterContracting})
    if (s == factor_kind_name(k)) return k;
  throw std::invalid_argument("unknown factorization kind '" + s + "'");
}

namespace {

Factorization from_collapse(FactorKind kind, const Graph& k, const std::vector<int>& s, const std::vector<int>& e) {
  Collapsed c = collapse(k, s, e);
  Factorization f{kind, c.outer, c.w, c.inner, {}, -1, -1};
  return f;
}

std::vector<int> all_but(int n, int skip) {
  std::vector<int> r;
  for (int i = 0; i < n; ++i)
    if (i != skip) r.push_back(i);
  return r;
}

// Ordinary edges with both ends in the vertex set.
std::vector<int> edges_among(const Graph& k, const std::vector<int>& s) {
  std::vector<char> in(k.num_vertices(), 0);
  for (int v : s) in[v] = 1;
  std::vector<int> r;
  auto es = k.edges();
  for (int i = 0; i < static_cast<int>(es.size()); ++i)
    if (es[i].ordinary() && in[es[i].tail] && in[es[i].head]) r.push_back(i);
  return r;
}

// Corolla case of the outer factorizations: subdivide leg `leg` of the single vertex by a new
// (1;1) vertex w, whose inner graph is the exceptional edge.
Factorization subdivide_leg(FactorKind kind, const Graph& k, int leg_edge) {
  auto es = k.edges();
  const Edge& e = es[leg_edge];
  int x = e.in_flag >= 0 ? e.in_flag : e.out_flag;
  Graph g = k;
  int w = g.num_vertices();
  g.vname.push_back("w");
  {
    std::set<std::string> vn(k.vname.begin(), k.vname.end());
    for (int i = 2; vn.count(g.vname.back()); ++i) g.vname.back() = "w" + std::to_string(i);
  }
  g.vlabel.push_back("");
  g.vin.emplace_back();
  g.vout.emplace_back();
  auto add = [&](const std::string& name, int dir) {
    g.flag.push_back(name);
    g.cell.push_back(w);
    g.iota.push_back(g.num_flags() - 1);
    g.pi.push_back(-1);
    g.color.push_back(k.color[x]);
    g.dir.push_back(dir);
    return g.num_flags() - 1;
  };
  int a = add(k.flag[x] + "^", +1);
  int b = add(k.flag[x] + "^'", -1);
  g.vin[w] = {a};
  g.vout[w] = {b};
  if (k.dir[x] > 0) {
    // input leg: w sits below the vertex
    g.iota[b] = x;
    g.iota[x] = b;
    std::replace(g.gin.begin(), g.gin.end(), x, a);
  } else {
    g.iota[a] = x;
    g.iota[x] = a;
    std::replace(g.gout.begin(), g.gout.end(), x, b);
  }
  validate(g);
  Builder hb;
  hb.exceptional_edge(k.flag[x] + "^", k.flag[x] + "^'", k.color[x]);
  Factorization f{kind, g, w, hb.build(), {}, -1, leg_edge};
  return f;
}

bool is_single_vertex_without_internal(const Graph& k) {
  if (k.num_vertices() != 1) return false;
  for (auto& e : k.edges())
    if (e.internal()) return false;
  return true;
}

}  // namespace

std::vector<Factorization> inner_properadic_factorizations(const Graph& k) {
  std::vector<Factorization> out;
  for (auto [u, v] : closest_neighbors(k)) {
    std::vector<int> s{u, v};
    auto f = from_collapse(FactorKind::InnerProperadic, k, s, edges_among(k, s));
    f.vertices = {u, v};
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Factorization> outer_properadic_factorizations(const Graph& k) {
  auto ai = almost_isolated(k);  // checks the class
  if (!k.ordinary()) throw ClassError("outer properadic factorization requires an ordinary graph");
  std::vector<Factorization> out;
  if (k.num_vertices() == 1) {
    auto es = k.edges();
    for (int i = 0; i < static_cast<int>(es.size()); ++i)
      if (es[i].kind == EdgeKind::Leg) out.push_back(subdivide_leg(FactorKind::OuterProperadic, k, i));
    return out;
  }
  for (int u : ai) {
    auto s = all_but(k.num_vertices(), u);
    auto f = from_collapse(FactorKind::OuterProperadic, k, s, edges_among(k, s));
    f.vertices = {u};
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Factorization> outer_dioperadic_factorizations(const Graph& k) {
  auto dv = deletable_vertices(k);
  std::vector<Factorization> out;
  if (is_single_vertex_without_internal(k)) {
    auto es = k.edges();
    for (int i = 0; i < static_cast<int>(es.size()); ++i)
      if (es[i].kind == EdgeKind::Leg) out.push_back(subdivide_leg(FactorKind::OuterDioperadic, k, i));
    return out;
  }
  for (int v : dv) {
    auto s = all_but(k.num_vertices(), v);
    auto f = from_collapse(FactorKind::OuterDioperadic, k, s, edges_among(k, s));
    f.vertices = {v};
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Factorization> inner_dioperadic_factorizations(const Graph& k) {
  if (!is_connected(k)) throw ClassError("inner dioperadic factorization requires a connected graph");
  std::vector<Factorization> out;
  auto es = k.edges();
  for (int i : distinct_vertex_edges(k)) {
    auto f = from_collapse(FactorKind::InnerDioperadic, k, {es[i].tail, es[i].head}, {i});
    f.edge = i;
    f.vertices = {es[i].tail, es[i].head};
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Factorization> outer_contracting_factorizations(const Graph& k) {
  auto dis = disconnectable_edges(k);  // checks the class
  std::vector<Factorization> out;
  auto es = k.edges();
  if (k.num_vertices() == 0) {
    // The exceptional loop is (xi C(c;c))(exceptional edge).
    const Edge& e = es[0];
    Graph g = contracted_corolla({k.color[e.in_flag]}, {k.color[e.in_flag]}, 0, 0);
    g.flag = {k.flag[e.in_flag], k.flag[e.out_flag]};
    g.vname = {"w"};
    validate(g);
    Builder hb;
    hb.exceptional_edge(k.flag[e.in_flag], k.flag[e.out_flag], k.color[e.in_flag]);
    out.push_back(Factorization{FactorKind::OuterContracting, g, 0, hb.build(), {}, 0, -1});
    return out;
  }
  for (int i : dis) {
    std::vector<int> s(k.num_vertices());
    for (int v = 0; v < k.num_vertices(); ++v) s[v] = v;
    std::vector<int> rest;
    for (int j : edges_among(k, s))
      if (j != i) rest.push_back(j);
    auto f = from_collapse(FactorKind::OuterContracting, k, s, rest);
    f.edge = i;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Factorization> inner_contracting_factorizations(const Graph& k) {
  if (!is_connected(k)) throw ClassError("inner contracting factorization requires a connected graph");
  std::vector<Factorization> out;
  for (auto [v, e] : loops(k)) {
    auto f = from_collapse(FactorKind::InnerContracting, k, {v}, {e});
    f.edge = e;
    f.vertices = {v};
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Factorization> factorizations(const Graph& k, FactorKind kind) {
  switch (kind) {
    case FactorKind::InnerProperadic: return inner_properadic_factorizations(k);
    case FactorKind::OuterProperadic: return outer_properadic_factorizations(k);
    case FactorKind::InnerDioperadic: return inner_dioperadic_factorizations(k);
    case FactorKind::OuterDioperadic: return outer_dioperadic_factorizations(k);
    case FactorKind::InnerContracting: return inner_contracting_factorizations(k);
    case FactorKind::OuterContracting: return outer_contracting_factorizations(k);
  }
  return {};
}

Graph recompose(const Factorization& f) { return substitute_vertex(f.outer, f.w, f.inner); }

Reduction degenerate_reduction(const Graph& g, int v) {
  if (v < 0 || v >= g.num_vertices() || g.vin[v].size() != 1 || g.vout[v].size() != 1)
    throw GraphError("degenerate reduction needs a vertex with one input and one output");
  int in = g.vin[v][0];
  Builder hb;
  hb.exceptional_edge(g.flag[in], g.flag[g.vout[v][0]], g.color[in]);
  Substituted s = substitute(g, {{v, hb.build()}});
  Reduction r;
  r.graph = s.graph;
  // e_v is the edge of the reduced graph made from the two edges at v.
  auto efl = r.graph.edge_of_flag();
  int o = g.vout[v][0];
  std::set<int> around{in, o, g.iota[in], g.iota[o]};
  int target = -1;
  for (int x = 0; x < r.graph.num_flags() && target < 0; ++x)
    if (around.count(s.provenance.flag_origin[x].outer_flag)) target = x;
  r.edge = efl[target];
  return r;
}

}  // namespace pg
