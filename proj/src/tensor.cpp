#include "pg/tensor.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "pg/analysis.hpp"
#include "pg/substitution.hpp"

namespace pg {

std::string pair_color(const std::string& c, const std::string& d) { return "(" + c + "," + d + ")"; }
std::string smash_label(const std::string& a, const std::string& b) { return a + "*" + b; }

namespace {

std::string label_of(const Graph& g, int v) { return g.vlabel[v].empty() ? g.vname[v] : g.vlabel[v]; }

std::vector<int> positions(const std::vector<std::string>& from, const std::vector<std::string>& to) {
  std::vector<int> out;
  std::vector<char> used(to.size(), 0);
  for (auto& c : from) {
    int k = -1;
    for (std::size_t j = 0; j < to.size(); ++j)
      if (!used[j] && to[j] == c) {
        k = static_cast<int>(j);
        break;
      }
    if (k < 0) throw GraphError("relation sides have different profiles at " + c);
    used[k] = 1;
    out.push_back(k);
  }
  return out;
}

bool has_inputs_and_outputs(const Graph& g) {
  for (int v = 0; v < g.num_vertices(); ++v)
    if (g.vin[v].empty() || g.vout[v].empty()) return false;
  return true;
}

// reach[a][b]: a directed path runs from vertex a to vertex b (a != b).
std::vector<std::vector<char>> reachability(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<std::vector<int>> next(n);
  for (auto& e : g.edges())
    if (e.kind == EdgeKind::Ordinary) next[e.tail].push_back(e.head);
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int s = 0; s < n; ++s) {
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : next[v])
        if (!reach[s][w]) {
          reach[s][w] = 1;
          stack.push_back(w);
        }
    }
  }
  return reach;
}

Graph with_color_on_right(const Graph& p, const std::string& d) {
  Graph r = p;
  for (auto& c : r.color) c = pair_color(c, d);
  for (int v = 0; v < r.num_vertices(); ++v) r.vlabel[v] = smash_label(label_of(p, v), d);
  return r;
}

Graph with_color_on_left(const std::string& c, const Graph& q) {
  Graph r = q;
  for (auto& x : r.color) x = pair_color(c, x);
  for (int w = 0; w < r.num_vertices(); ++w) r.vlabel[w] = smash_label(c, label_of(q, w));
  return r;
}

GeneratingObject::Element element_at(const Graph& g, int v) {
  return {label_of(g, v), g.vertex_in_colors(v), g.vertex_out_colors(v)};
}

void require_decomposable(const Graph& g, int max_vertices, const char* which) {
  if (g.num_vertices() > max_vertices)
    throw GraphError(std::string(which) + " has more than " + std::to_string(max_vertices) + " vertices");
  if (!is_connected(g) || !is_wheel_free(g)) throw ClassError(std::string(which) + " must be connected and wheel-free");
  if (!has_inputs_and_outputs(g)) throw ClassError(std::string(which) + " has a vertex without inputs or outputs");
}

}  // namespace

// ---------------------------------------------------------------------------------------------

SmashObject smash(const GeneratingObject& a, const GeneratingObject& b) {
  SmashObject s;
  for (auto& c : a.colors)
    for (auto& d : b.colors) s.colors.push_back(pair_color(c, d));
  for (auto& p : a.elements)
    for (auto& d : b.colors) {
      SmashElement e{smash_label(p.name, d), true, p.name, d, {}, {}};
      for (auto& c : p.ins) e.ins.push_back(pair_color(c, d));
      for (auto& c : p.outs) e.outs.push_back(pair_color(c, d));
      s.elements.push_back(e);
    }
  for (auto& c : a.colors)
    for (auto& q : b.elements) {
      SmashElement e{smash_label(c, q.name), false, q.name, c, {}, {}};
      for (auto& d : q.ins) e.ins.push_back(pair_color(c, d));
      for (auto& d : q.outs) e.outs.push_back(pair_color(c, d));
      s.elements.push_back(e);
    }
  return s;
}

GeneratingObject as_generating_object(const SmashObject& s) {
  GeneratingObject o;
  o.colors = s.colors;
  for (auto& e : s.elements) o.elements.push_back({e.name, e.ins, e.outs});
  return o;
}

Relation make_relation(const GeneratingObject::Element& p, const GeneratingObject::Element& q) {
  if (p.ins.empty() || p.outs.empty() || q.ins.empty() || q.outs.empty())
    throw ClassError("generating distributivity needs elements with inputs and outputs: " + p.name + ", " + q.name);
  const auto &a = p.ins, &b = p.outs, &c = q.ins, &d = q.outs;
  const int k = static_cast<int>(a.size()), l = static_cast<int>(b.size());
  const int m = static_cast<int>(c.size()), n = static_cast<int>(d.size());
  auto idx = [](const char* s, int i, int j) { return std::string(s) + std::to_string(i + 1) + "_" + std::to_string(j + 1); };
  Relation r;
  r.p = p.name;
  r.q = q.name;
  {
    // p*d_j on top of a_i*q; output r of a_i*q feeds input i of p*d_r
    std::vector<std::string> vs;
    for (int j = 0; j < n; ++j) vs.push_back("pd" + std::to_string(j + 1));
    for (int i = 0; i < k; ++i) vs.push_back("aq" + std::to_string(i + 1));
    std::vector<EdgeSpec> es;
    for (int i = 0; i < k; ++i)
      for (int s = 0; s < m; ++s) es.push_back({idx("in", i, s), "", "aq" + std::to_string(i + 1), pair_color(a[i], c[s])});
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < n; ++j)
        es.push_back({idx("x", i, j), "aq" + std::to_string(i + 1), "pd" + std::to_string(j + 1), pair_color(a[i], d[j])});
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < l; ++t) es.push_back({idx("out", t, j), "pd" + std::to_string(j + 1), "", pair_color(b[t], d[j])});
    r.left = graph_from_edges(vs, es);
    for (int j = 0; j < n; ++j) r.left.vlabel[j] = smash_label(p.name, d[j]);
    for (int i = 0; i < k; ++i) r.left.vlabel[n + i] = smash_label(a[i], q.name);
  }
  {
    // b_s*q on top of p*c_j; output s of p*c_j feeds input j of b_s*q
    std::vector<std::string> vs;
    for (int s = 0; s < l; ++s) vs.push_back("bq" + std::to_string(s + 1));
    for (int j = 0; j < m; ++j) vs.push_back("pc" + std::to_string(j + 1));
    std::vector<EdgeSpec> es;
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < k; ++i) es.push_back({idx("in", i, j), "", "pc" + std::to_string(j + 1), pair_color(a[i], c[j])});
    for (int j = 0; j < m; ++j)
      for (int s = 0; s < l; ++s)
        es.push_back({idx("y", s, j), "pc" + std::to_string(j + 1), "bq" + std::to_string(s + 1), pair_color(b[s], c[j])});
    for (int s = 0; s < l; ++s)
      for (int t = 0; t < n; ++t) es.push_back({idx("out", s, t), "bq" + std::to_string(s + 1), "", pair_color(b[s], d[t])});
    r.right = graph_from_edges(vs, es);
    for (int s = 0; s < l; ++s) r.right.vlabel[s] = smash_label(b[s], q.name);
    for (int j = 0; j < m; ++j) r.right.vlabel[l + j] = smash_label(p.name, c[j]);
  }
  r.sigma_out = positions(r.left.output_colors(), r.right.output_colors());
  r.sigma_in = positions(r.left.input_colors(), r.right.input_colors());
  return r;
}

std::vector<Relation> generating_distributivity(const GeneratingObject& a, const GeneratingObject& b) {
  std::vector<Relation> out;
  for (auto& p : a.elements)
    for (auto& q : b.elements) out.push_back(make_relation(p, q));
  return out;
}

Presentation tensor_presentation(const Graph& g, const Graph& h, Mode m) {
  for (const Graph* x : {&g, &h}) {
    if (!is_connected(*x)) throw ClassError("tensor factors must be connected");
    if (m == Mode::Properadic && !is_wheel_free(*x)) throw ClassError("properadic tensor factors must be wheel-free");
    if (!has_inputs_and_outputs(*x)) throw ClassError("tensor factors must have inputs and outputs at every vertex");
  }
  Presentation p;
  p.mode = m;
  auto a = generating_object(g), b = generating_object(h);
  p.generators = smash(a, b);
  p.relations = generating_distributivity(a, b);
  return p;
}

std::string print_presentation(const Presentation& p) {
  std::ostringstream os;
  os << "presentation " << (p.mode == Mode::Wheeled ? "wheeled" : "properadic") << '\n';
  os << "colors " << p.generators.colors.size() << '\n';
  os << "  " << join(p.generators.colors, " ") << '\n';
  os << "generators " << p.generators.elements.size() << '\n';
  for (auto& e : p.generators.elements)
    os << "  " << e.name << " : (" << join(e.ins, " ") << " ; " << join(e.outs, " ") << ")\n";
  os << "relations " << p.relations.size() << '\n';
  for (auto& r : p.relations) {
    os << "relation " << r.p << ' ' << r.q << '\n';
    os << "left\n" << print_graph(r.left);
    os << "right\n" << print_graph(r.right);
    std::vector<std::string> so, si;
    for (int x : r.sigma_out) so.push_back(std::to_string(x));
    for (int x : r.sigma_in) si.push_back(std::to_string(x));
    os << "sigma_out " << join(so, " ") << '\n';
    os << "sigma_in " << join(si, " ") << '\n';
  }
  return os.str();
}

Graph apply_relation(const Graph& k, const Relation& r, const std::vector<int>& vertices, bool left_to_right) {
  const Graph& from = left_to_right ? r.left : r.right;
  const Graph& to = left_to_right ? r.right : r.left;
  std::set<int> s(vertices.begin(), vertices.end());
  std::vector<int> internal;
  auto es = k.edges();
  for (int e = 0; e < static_cast<int>(es.size()); ++e)
    if (es[e].kind == EdgeKind::Ordinary && s.count(es[e].tail) && s.count(es[e].head)) internal.push_back(e);
  Collapsed c = collapse(k, vertices, internal);
  if (canon_free(c.inner) != canon_free(from))
    throw GraphError("subgraph does not match the " + std::string(left_to_right ? "left" : "right") + " side of " +
                     r.p + " x " + r.q);
  Graph replacement = relist(to, c.outer.vertex_in_colors(c.w), c.outer.vertex_out_colors(c.w));
  return substitute_vertex(c.outer, c.w, replacement);
}

Relation distributivity_sides(const Graph& p, const Graph& q) {
  Relation base = make_relation({"P", p.input_colors(), p.output_colors()}, {"Q", q.input_colors(), q.output_colors()});
  auto expand = [&](const Graph& side) {
    std::map<int, Graph> inner;
    for (int v = 0; v < side.num_vertices(); ++v) {
      const std::string& name = side.vname[v];
      int j = std::stoi(name.substr(2)) - 1;
      if (name.rfind("pd", 0) == 0) inner[v] = with_color_on_right(p, q.output_colors()[j]);
      else if (name.rfind("pc", 0) == 0) inner[v] = with_color_on_right(p, q.input_colors()[j]);
      else if (name.rfind("aq", 0) == 0) inner[v] = with_color_on_left(p.input_colors()[j], q);
      else inner[v] = with_color_on_left(p.output_colors()[j], q);
    }
    return substitute(side, inner).graph;
  };
  Relation r;
  r.p = "P";
  r.q = "Q";
  r.left = expand(base.left);
  r.right = expand(base.right);
  r.sigma_out = base.sigma_out;
  r.sigma_in = base.sigma_in;
  return r;
}

Graph distributivity_state(const Graph& p, const Graph& q, const std::vector<std::vector<char>>& above) {
  auto ep = p.edges(), eq = q.edges();
  auto fp = p.edge_of_flag(), fq = q.edge_of_flag();
  auto pcolor = [&](int e) { return p.color[ep[e].in_flag >= 0 ? ep[e].in_flag : ep[e].out_flag]; };
  auto qcolor = [&](int e) { return q.color[eq[e].in_flag >= 0 ? eq[e].in_flag : eq[e].out_flag]; };
  if (p.num_vertices() == 0 && q.num_vertices() == 0) return exceptional_edge(pair_color(pcolor(0), qcolor(0)));

  Builder b;
  using Key = std::pair<int, int>;
  std::map<Key, int> producer, consumer;
  for (int v = 0; v < p.num_vertices(); ++v)
    for (int e = 0; e < static_cast<int>(eq.size()); ++e) {
      if (eq[e].tail >= 0 && !above[v][eq[e].tail]) continue;
      if (eq[e].head >= 0 && above[v][eq[e].head]) continue;
      std::string name = smash_label(p.vname[v], eq[e].name);
      int c = b.vertex(name, smash_label(label_of(p, v), qcolor(e)));
      for (int x : p.vin[v]) consumer[{fp[x], e}] = b.in_flag(c, name + "/" + p.flag[x], pair_color(p.color[x], qcolor(e)));
      for (int x : p.vout[v]) producer[{fp[x], e}] = b.out_flag(c, name + "/" + p.flag[x], pair_color(p.color[x], qcolor(e)));
    }
  for (int e = 0; e < static_cast<int>(ep.size()); ++e)
    for (int w = 0; w < q.num_vertices(); ++w) {
      if (ep[e].tail >= 0 && above[ep[e].tail][w]) continue;
      if (ep[e].head >= 0 && !above[ep[e].head][w]) continue;
      std::string name = smash_label(ep[e].name, q.vname[w]);
      int c = b.vertex(name, smash_label(pcolor(e), label_of(q, w)));
      for (int y : q.vin[w]) consumer[{e, fq[y]}] = b.in_flag(c, name + "/" + q.flag[y], pair_color(pcolor(e), q.color[y]));
      for (int y : q.vout[w]) producer[{e, fq[y]}] = b.out_flag(c, name + "/" + q.flag[y], pair_color(pcolor(e), q.color[y]));
    }
  for (auto& [key, out] : producer) {
    auto it = consumer.find(key);
    if (it != consumer.end()) b.connect(out, it->second);
  }
  // Listing: the p coordinate is major on inputs and the q coordinate on outputs when every pair
  // lies above, which is the left side; the reverse otherwise.
  bool all_above = true;
  for (auto& row : above)
    for (char c : row) all_above = all_above && c;
  auto pos = [](const std::vector<int>& legs, const std::vector<int>& eof, int e) {
    for (std::size_t i = 0; i < legs.size(); ++i)
      if (eof[legs[i]] == e) return static_cast<int>(i);
    return static_cast<int>(legs.size());
  };
  std::vector<std::tuple<int, int, int>> ins, outs;
  for (auto& [key, flag] : consumer)
    if (!producer.count(key)) {
      int a = pos(p.gin, fp, key.first), c = pos(q.gin, fq, key.second);
      ins.emplace_back(all_above ? a : c, all_above ? c : a, flag);
    }
  for (auto& [key, flag] : producer)
    if (!consumer.count(key)) {
      int a = pos(p.gout, fp, key.first), d = pos(q.gout, fq, key.second);
      outs.emplace_back(all_above ? d : a, all_above ? a : d, flag);
    }
  std::sort(ins.begin(), ins.end());
  std::sort(outs.begin(), outs.end());
  for (auto& [x, y, f] : ins) b.list_input(f);
  for (auto& [x, y, f] : outs) b.list_output(f);
  return b.build();
}

DistributivityChain distributivity_decompose(const Graph& p, const Graph& q, int max_vertices) {
  require_decomposable(p, max_vertices, "p");
  require_decomposable(q, max_vertices, "q");
  const int m = p.num_vertices(), n = q.num_vertices();
  auto rp = reachability(p), rq = reachability(q);
  std::vector<std::vector<char>> above(m, std::vector<char>(n, 1));
  DistributivityChain chain;
  chain.p = p;
  chain.q = q;
  chain.left = distributivity_state(p, q, above);
  Graph current = chain.left;
  for (int step = 0; step < m * n; ++step) {
    // The first pair (v, w) with v minimal among the p-vertices above w and w maximal among the
    // q-vertices below v.
    int sv = -1, sw = -1;
    for (int v = 0; v < m && sv < 0; ++v)
      for (int w = 0; w < n && sv < 0; ++w) {
        if (!above[v][w]) continue;
        bool ok = true;
        for (int w2 = 0; w2 < n && ok; ++w2) ok = !(above[v][w2] && rq[w][w2]);
        for (int v2 = 0; v2 < m && ok; ++v2) ok = !(above[v2][w] && rp[v2][v]);
        if (ok) {
          sv = v;
          sw = w;
        }
      }
    if (sv < 0) throw GraphError("no removable pair");
    above[sv][sw] = 0;
    Graph next = distributivity_state(p, q, above);
    DistributivityStep s;
    s.p_vertex = p.vname[sv];
    s.q_vertex = q.vname[sw];
    s.relation = make_relation(element_at(p, sv), element_at(q, sw));
    s.before = current;
    s.after = next;
    std::set<std::string> a(current.vname.begin(), current.vname.end()), b(next.vname.begin(), next.vname.end());
    for (auto& x : a)
      if (!b.count(x)) s.removed.push_back(x);
    for (auto& x : b)
      if (!a.count(x)) s.added.push_back(x);
    chain.steps.push_back(std::move(s));
    current = std::move(next);
  }
  chain.right = current;
  return chain;
}

std::vector<std::string> verify_chain(const DistributivityChain& c) {
  std::vector<std::string> bad;
  Relation sides = distributivity_sides(c.p, c.q);
  if (canon_free(c.left) != canon_free(sides.left)) bad.push_back("chain does not start at the left side");
  if (canon_free(c.right) != canon_free(sides.right)) bad.push_back("chain does not end at the right side");
  if (c.steps.size() != static_cast<std::size_t>(c.p.num_vertices() * c.q.num_vertices()))
    bad.push_back("chain length differs from the product of vertex counts");
  std::string at = canon_free(c.left);
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    auto& s = c.steps[i];
    std::string tag = "step " + std::to_string(i + 1) + ": ";
    if (canon_free(s.before) != at) bad.push_back(tag + "does not continue the chain");
    int v = c.p.find_vertex(s.p_vertex), w = c.q.find_vertex(s.q_vertex);
    if (v < 0 || w < 0) {
      bad.push_back(tag + "unknown vertex");
      continue;
    }
    Relation r = make_relation(element_at(c.p, v), element_at(c.q, w));
    std::vector<int> idx;
    for (auto& name : s.removed) idx.push_back(s.before.find_vertex(name));
    try {
      Graph rewritten = apply_relation(s.before, r, idx, true);
      if (canon_free(rewritten) != canon_free(s.after)) bad.push_back(tag + "rewrite does not give the next graph");
    } catch (const GraphError& e) {
      bad.push_back(tag + e.what());
    }
    at = canon_free(s.after);
  }
  if (!c.steps.empty() && at != canon_free(c.right)) bad.push_back("last step does not reach the right side");
  return bad;
}

std::string format_chain(const DistributivityChain& c) {
  std::ostringstream os;
  os << "chain " << c.steps.size() << " steps (" << c.p.num_vertices() << " x " << c.q.num_vertices() << " vertices)\n";
  os << "left " << c.left.num_vertices() << " vertices\n";
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    auto& s = c.steps[i];
    os << "step " << i + 1 << ": " << s.relation.p << " x " << s.relation.q << " at (" << s.p_vertex << ", " << s.q_vertex
       << ") replaces " << join(s.removed, " ") << " by " << join(s.added, " ") << '\n';
  }
  os << "right " << c.right.num_vertices() << " vertices\n";
  return os.str();
}

std::string evaluate_under(const Graph& d, const FinitePropad& r, const GeneratorMap& f) {
  Graph h = d;
  for (auto& c : h.color) {
    auto it = f.color.find(c);
    if (it == f.color.end()) throw GraphError("no image for color " + c);
    c = it->second;
  }
  std::vector<std::string> elems;
  for (int v = 0; v < d.num_vertices(); ++v) {
    auto it = f.element.find(d.vlabel[v]);
    if (it == f.element.end()) throw GraphError("no image for generator " + d.vlabel[v]);
    elems.push_back(it->second);
  }
  return evaluate(r, h, elems);
}

std::vector<std::string> distributivity_failures(const std::vector<Relation>& rels, const FinitePropad& r,
                                                 const GeneratorMap& f) {
  std::vector<std::string> bad;
  for (auto& rel : rels) {
    Graph right = relist(rel.right, rel.left.input_colors(), rel.left.output_colors());
    if (evaluate_under(rel.left, r, f) != evaluate_under(right, r, f)) bad.push_back(rel.p + " x " + rel.q);
  }
  return bad;
}

}  // namespace pg
