#include "pg/nerve.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pg/analysis.hpp"
#include "pg/substitution.hpp"

namespace pg {

namespace {

bool supported(const FinitePropad& p, const std::vector<int>& ins, const std::vector<int>& outs) {
  if (p.kind == PropadKind::End) return true;
  switch (p.support) {
    case Support::All: return true;
    case Support::Special: return !ins.empty() && !outs.empty();
    case Support::Balanced: {
      auto a = ins, b = outs;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      return a == b;
    }
  }
  return false;
}

long long tuple_count(const FinitePropad& p, const std::vector<int>& cs) {
  long long n = 1;
  for (int c : cs) n *= p.set_size[c];
  return n;
}

std::vector<int> parse_table(const std::string& s) {
  std::vector<int> t;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) t.push_back(std::stoi(item));
  return t;
}

std::string table_key(const std::vector<int>& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(t[i]);
  }
  return s;
}

int monoid_index(const FinitePropad& p, const std::string& e) {
  for (std::size_t i = 0; i < p.monoid.size(); ++i)
    if (p.monoid[i] == e) return static_cast<int>(i);
  throw GraphError("unknown monoid element " + e);
}

std::vector<int> colors_of(const FinitePropad& p, const Graph& h, const std::vector<int>& flags) {
  std::vector<int> out;
  for (int x : flags) out.push_back(p.color_index(h.color[x]));
  return out;
}

std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + sep.size();
  }
}

int internal_edges(const Graph& g) {
  int k = 0;
  for (auto& e : g.edges()) k += e.internal();
  return k;
}

// Values cached per exact graph text.
std::function<std::vector<std::string>(const Graph&)> cached(std::function<std::vector<std::string>(const Graph&)> f) {
  auto cache = std::make_shared<std::map<std::string, std::vector<std::string>>>();
  return [f, cache](const Graph& g) {
    std::string k = print_graph(g);
    auto it = cache->find(k);
    if (it != cache->end()) return it->second;
    auto v = f(g);
    cache->emplace(k, v);
    return v;
  };
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Finite properads

int FinitePropad::color_index(const std::string& c) const {
  for (std::size_t i = 0; i < colors.size(); ++i)
    if (colors[i] == c) return static_cast<int>(i);
  throw GraphError("unknown color " + c);
}

FinitePropad end_propad(const std::vector<std::string>& colors, const std::vector<int>& sizes) {
  FinitePropad p;
  p.kind = PropadKind::End;
  p.colors = colors;
  p.set_size = sizes;
  std::ostringstream name;
  name << "End(";
  for (std::size_t i = 0; i < colors.size(); ++i) name << (i ? "," : "") << colors[i] << ':' << sizes[i];
  name << ')';
  p.name = name.str();
  validate_propad(p);
  return p;
}

FinitePropad monoid_propad(const std::string& name, const std::vector<std::string>& colors,
                           const std::vector<std::string>& elements, const std::vector<std::vector<int>>& product,
                           Support support, Mode mode) {
  FinitePropad p;
  p.name = name;
  p.kind = PropadKind::Monoid;
  p.mode = mode;
  p.colors = colors;
  p.monoid = elements;
  p.product = product;
  p.support = support;
  validate_propad(p);
  return p;
}

void validate_propad(const FinitePropad& p) {
  if (p.colors.empty()) throw GraphError("a properad needs at least one color");
  if (p.kind == PropadKind::End) {
    if (p.mode == Mode::Wheeled) throw GraphError("endomorphism properads of sets are not wheeled");
    if (p.set_size.size() != p.colors.size()) throw GraphError("one set size per color is required");
    for (int s : p.set_size)
      if (s < 1) throw GraphError("set sizes must be positive");
    return;
  }
  const int n = static_cast<int>(p.monoid.size());
  if (n == 0) throw GraphError("a monoid needs an identity");
  if (static_cast<int>(p.product.size()) != n) throw GraphError("product table has the wrong size");
  for (auto& row : p.product) {
    if (static_cast<int>(row.size()) != n) throw GraphError("product table has the wrong size");
    for (int c : row)
      if (c < 0 || c >= n) throw GraphError("product table entry out of range");
  }
  for (int a = 0; a < n; ++a) {
    if (p.product[0][a] != a || p.product[a][0] != a) throw GraphError("element 0 is not an identity");
    for (int b = 0; b < n; ++b) {
      if (p.product[a][b] != p.product[b][a]) throw GraphError("product is not commutative");
      for (int c = 0; c < n; ++c)
        if (p.product[p.product[a][b]][c] != p.product[a][p.product[b][c]]) throw GraphError("product is not associative");
    }
  }
  if (p.mode == Mode::Wheeled && p.support == Support::Special)
    throw GraphError("special support is not closed under contraction");
}

std::vector<std::string> component(const FinitePropad& p, const std::vector<int>& ins, const std::vector<int>& outs) {
  if (!supported(p, ins, outs)) return {};
  if (p.kind == PropadKind::Monoid) return p.monoid;
  const long long nin = tuple_count(p, ins), nout = tuple_count(p, outs);
  double total = 1;
  for (long long k = 0; k < nin; ++k) total *= static_cast<double>(nout);
  if (total > 1e6) throw GraphError("component too large to enumerate");
  std::vector<std::string> out;
  std::vector<int> t(nin, 0);
  while (true) {
    out.push_back(table_key(t));
    long long k = nin - 1;
    while (k >= 0 && ++t[k] == nout) t[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

std::string unit(const FinitePropad& p, int color) {
  if (p.kind == PropadKind::Monoid) return p.monoid[0];
  std::vector<int> t(p.set_size[color]);
  std::iota(t.begin(), t.end(), 0);
  return table_key(t);
}

std::string evaluate(const FinitePropad& p, const Graph& h, const std::vector<std::string>& elems) {
  if (static_cast<int>(elems.size()) != h.num_vertices()) throw GraphError("one element per vertex is required");
  auto ins = colors_of(p, h, h.gin), outs = colors_of(p, h, h.gout);
  if (p.kind == PropadKind::Monoid) {
    int acc = 0;
    for (auto& e : elems) acc = p.product[acc][monoid_index(p, e)];
    if (!supported(p, ins, outs)) throw GraphError("composite lands outside the support");
    return p.monoid[acc];
  }
  std::vector<std::vector<int>> tables;
  for (auto& e : elems) tables.push_back(parse_table(e));
  const long long nin = tuple_count(p, ins);
  std::vector<int> result;
  std::vector<int> digits(h.gin.size(), 0);
  for (long long t = 0; t < nin; ++t) {
    std::vector<int> val(h.num_flags(), -1);
    auto set_out = [&](int y, int value) {
      val[y] = value;
      if (h.iota[y] != y) val[h.iota[y]] = value;
    };
    for (std::size_t k = 0; k < h.gin.size(); ++k) {
      int x = h.gin[k];
      val[x] = digits[k];
      if (h.cell[x] < 0) val[h.pi[x]] = digits[k];
    }
    std::vector<char> done(h.num_vertices(), 0);
    bool progress = true;
    int remaining = h.num_vertices();
    while (remaining > 0 && progress) {
      progress = false;
      for (int v = 0; v < h.num_vertices(); ++v) {
        if (done[v]) continue;
        bool ready = true;
        for (int x : h.vin[v]) ready = ready && val[x] >= 0;
        if (!ready) continue;
        long long idx = 0;
        for (int x : h.vin[v]) idx = idx * p.set_size[p.color_index(h.color[x])] + val[x];
        if (idx >= static_cast<long long>(tables[v].size())) throw GraphError("element does not fit its vertex");
        long long code = tables[v][idx];
        for (int k = static_cast<int>(h.vout[v].size()) - 1; k >= 0; --k) {
          int x = h.vout[v][k];
          int s = p.set_size[p.color_index(h.color[x])];
          set_out(x, static_cast<int>(code % s));
          code /= s;
        }
        done[v] = 1;
        --remaining;
        progress = true;
      }
    }
    if (remaining > 0) throw GraphError("evaluation needs a wheel-free graph");
    long long code = 0;
    for (int x : h.gout) {
      if (val[x] < 0) throw GraphError("unreached output");
      code = code * p.set_size[p.color_index(h.color[x])] + val[x];
    }
    result.push_back(static_cast<int>(code));
    for (int k = static_cast<int>(digits.size()) - 1; k >= 0; --k) {
      if (++digits[k] < p.set_size[ins[k]]) break;
      digits[k] = 0;
    }
  }
  return table_key(result);
}

std::vector<FinitePropad> sample_propads(std::uint64_t seed, int count, Mode mode) {
  struct Table {
    std::string name;
    std::vector<std::string> elems;
    std::vector<std::vector<int>> product;
  };
  const std::vector<Table> tables{
      {"trivial", {"e"}, {{0}}},
      {"Z2", {"0", "1"}, {{0, 1}, {1, 0}}},
      {"bool", {"1", "0"}, {{0, 1}, {1, 1}}},
      {"Z3", {"0", "1", "2"}, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}},
      {"chain", {"0", "1", "2"}, {{0, 1, 2}, {1, 1, 2}, {2, 2, 2}}},
      {"capped", {"0", "1", "2"}, {{0, 1, 2}, {1, 2, 2}, {2, 2, 2}}},
      {"nil", {"1", "a", "0"}, {{0, 1, 2}, {1, 2, 2}, {2, 2, 2}}},
      {"sign", {"1", "-1", "0"}, {{0, 1, 2}, {1, 0, 2}, {2, 2, 2}}},
  };
  std::vector<FinitePropad> pool;
  const std::vector<std::vector<std::string>> palettes{{"a"}, {"a", "b"}};
  if (mode == Mode::Properadic) {
    pool.push_back(end_propad({"a"}, {2}));
    pool.push_back(end_propad({"a"}, {1}));
    pool.push_back(end_propad({"a", "b"}, {1, 2}));
  }
  for (auto& t : tables)
    for (auto& pal : palettes)
      for (Support s : {Support::All, Support::Special, Support::Balanced}) {
        if (mode == Mode::Wheeled && s == Support::Special) continue;
        std::string sname = s == Support::All ? "all" : s == Support::Special ? "special" : "balanced";
        pool.push_back(monoid_propad(t.name + "/" + sname + "/" + std::to_string(pal.size()), pal, t.elems, t.product, s, mode));
      }
  std::mt19937_64 rng(seed);
  std::vector<FinitePropad> out;
  // endomorphisms of a two-element set always take part
  std::size_t first = 0;
  if (mode == Mode::Properadic) {
    out.push_back(pool[0]);
    first = 1;
  }
  std::vector<std::size_t> idx(pool.size() - first);
  std::iota(idx.begin(), idx.end(), first);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (std::size_t i = 0; static_cast<int>(out.size()) < count && i < idx.size(); ++i) out.push_back(pool[idx[i]]);
  return out;
}

std::string print_propad(const FinitePropad& p) {
  std::ostringstream os;
  os << "propad " << p.name << '\n';
  os << "mode " << (p.mode == Mode::Wheeled ? "wheeled" : "properadic") << '\n';
  os << "colors " << join(p.colors, " ") << '\n';
  if (p.kind == PropadKind::End) {
    os << "kind end\n";
    for (std::size_t i = 0; i < p.colors.size(); ++i) os << "size " << p.colors[i] << ' ' << p.set_size[i] << '\n';
  } else {
    os << "kind monoid\n";
    os << "elements " << join(p.monoid, " ") << '\n';
    for (std::size_t a = 0; a < p.monoid.size(); ++a)
      for (std::size_t b = 0; b < p.monoid.size(); ++b)
        os << "compose " << p.monoid[a] << ' ' << p.monoid[b] << " = " << p.monoid[p.product[a][b]] << '\n';
    os << "support " << (p.support == Support::All ? "all" : p.support == Support::Special ? "special" : "balanced")
       << '\n';
  }
  os << "end\n";
  return os.str();
}

FinitePropad parse_propad(const std::string& text) {
  FinitePropad p;
  std::istringstream in(text);
  std::string line;
  bool started = false, finished = false;
  std::map<std::string, int> sizes;
  std::vector<std::tuple<std::string, std::string, std::string>> entries;
  int lineno = 0;
  auto fail = [&](const std::string& what) { throw GraphError("propad line " + std::to_string(lineno) + ": " + what); };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto w = split_ws(line);
    if (w.empty()) continue;
    if (!started) {
      if (w[0] != "propad") fail("expected 'propad'");
      p.name = w.size() > 1 ? w[1] : "P";
      started = true;
      continue;
    }
    if (w[0] == "end") {
      finished = true;
      break;
    }
    if (w[0] == "mode" && w.size() == 2) {
      if (w[1] == "wheeled") p.mode = Mode::Wheeled;
      else if (w[1] == "properadic") p.mode = Mode::Properadic;
      else fail("unknown mode " + w[1]);
    } else if (w[0] == "colors") {
      p.colors.assign(w.begin() + 1, w.end());
    } else if (w[0] == "kind" && w.size() == 2) {
      if (w[1] == "end") p.kind = PropadKind::End;
      else if (w[1] == "monoid") p.kind = PropadKind::Monoid;
      else fail("unknown kind " + w[1]);
    } else if (w[0] == "size" && w.size() == 3) {
      sizes[w[1]] = std::stoi(w[2]);
    } else if (w[0] == "elements") {
      p.monoid.assign(w.begin() + 1, w.end());
    } else if (w[0] == "compose" && w.size() == 5 && w[3] == "=") {
      entries.emplace_back(w[1], w[2], w[4]);
    } else if (w[0] == "support" && w.size() == 2) {
      if (w[1] == "all") p.support = Support::All;
      else if (w[1] == "special") p.support = Support::Special;
      else if (w[1] == "balanced") p.support = Support::Balanced;
      else fail("unknown support " + w[1]);
    } else {
      fail("unrecognized line");
    }
  }
  if (!finished) throw GraphError("propad block is not terminated by 'end'");
  if (p.kind == PropadKind::End) {
    for (auto& c : p.colors) {
      auto it = sizes.find(c);
      if (it == sizes.end()) throw GraphError("missing size for color " + c);
      p.set_size.push_back(it->second);
    }
  } else {
    const int n = static_cast<int>(p.monoid.size());
    p.product.assign(n, std::vector<int>(n, -1));
    for (auto& [a, b, c] : entries) p.product[monoid_index(p, a)][monoid_index(p, b)] = monoid_index(p, c);
    for (auto& row : p.product)
      for (int c : row)
        if (c < 0) throw GraphError("compose table is incomplete");
  }
  validate_propad(p);
  return p;
}

std::string describe_propad(const FinitePropad& p, int max_arity) {
  std::ostringstream os;
  os << "colors " << join(p.colors, " ") << '\n';
  for (std::size_t c = 0; c < p.colors.size(); ++c) os << "unit " << p.colors[c] << " = " << unit(p, static_cast<int>(c)) << '\n';
  const int nc = static_cast<int>(p.colors.size());
  for (int total = 0; total <= max_arity; ++total)
    for (int m = 0; m <= total; ++m) {
      int n = total - m;
      std::vector<int> cs(total, 0);
      while (true) {
        std::vector<int> ins(cs.begin(), cs.begin() + m), outs(cs.begin() + m, cs.end());
        auto comp = component(p, ins, outs);
        std::vector<std::string> in_names, out_names;
        for (int c : ins) in_names.push_back(p.colors[c]);
        for (int c : outs) out_names.push_back(p.colors[c]);
        os << "component (" << join(in_names, " ") << " ; " << join(out_names, " ") << ") " << comp.size();
        if (comp.size() <= 8) os << " : " << join(comp, " ");
        os << '\n';
        int k = total - 1;
        while (k >= 0 && ++cs[k] == nc) cs[k--] = 0;
        if (k < 0) break;
      }
      (void)n;
    }
  return os.str();
}

// ---------------------------------------------------------------------------------------------
// Nerves

std::string Decoration::key() const {
  std::string s;
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(colors[i]);
  }
  s += '|';
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) s += ';';
    s += elems[i];
  }
  return s;
}

Decoration Decoration::parse(const std::string& key) {
  Decoration d;
  auto bar = key.find('|');
  if (bar == std::string::npos) throw GraphError("malformed decoration " + key);
  for (auto& c : split_ws(key.substr(0, bar))) d.colors.push_back(std::stoi(c));
  std::string rest = key.substr(bar + 1);
  if (!rest.empty()) d.elems = split_on(rest, ";");
  return d;
}

std::vector<std::string> nerve_at(const FinitePropad& p, const Graph& g) {
  auto es = g.edges();
  auto eo = g.edge_of_flag();
  const int nc = static_cast<int>(p.colors.size());
  std::vector<std::string> out;
  std::vector<int> col(es.size(), 0);
  while (true) {
    std::vector<std::vector<std::string>> comps;
    bool empty = false;
    for (int v = 0; v < g.num_vertices() && !empty; ++v) {
      std::vector<int> ins, outs;
      for (int x : g.vin[v]) ins.push_back(col[eo[x]]);
      for (int x : g.vout[v]) outs.push_back(col[eo[x]]);
      comps.push_back(component(p, ins, outs));
      empty = comps.back().empty();
    }
    if (!empty) {
      Decoration d;
      d.colors = col;
      d.elems.resize(g.num_vertices());
      std::function<void(int)> rec = [&](int v) {
        if (v == g.num_vertices()) {
          out.push_back(d.key());
          return;
        }
        for (auto& e : comps[v]) {
          d.elems[v] = e;
          rec(v + 1);
        }
      };
      rec(0);
    }
    int k = static_cast<int>(col.size()) - 1;
    while (k >= 0 && ++col[k] == nc) col[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

std::string nerve_restrict(const FinitePropad& p, const Morphism& f, const std::string& x) {
  Decoration d = Decoration::parse(x);
  auto tidx = edge_index(f.tgt);
  Decoration r;
  for (int e : f.f0) r.colors.push_back(d.colors.at(e));
  for (const Graph& h : f.f1) {
    Graph colored = h;
    for (int y = 0; y < colored.num_flags(); ++y) colored.color[y] = p.colors[d.colors.at(tidx.at(h.color[y]))];
    std::vector<std::string> elems;
    for (int w = 0; w < h.num_vertices(); ++w) elems.push_back(d.elems.at(f.tgt.find_vertex(h.vlabel[w])));
    r.elems.push_back(evaluate(p, colored, elems));
  }
  return r.key();
}

GraphicalSet nerve(const FinitePropad& p) {
  GraphicalSet x;
  x.name = "N(" + p.name + ")";
  x.mode = p.mode;
  x.values = cached([p](const Graph& g) { return nerve_at(p, g); });
  x.restrict = [p](const Morphism& f, const std::string& e) { return nerve_restrict(p, f, e); };
  return x;
}

namespace {

std::string pair_key(const std::string& a, const std::string& b) { return std::to_string(a.size()) + ":" + a + b; }

std::pair<std::string, std::string> unpair(const std::string& k) {
  auto colon = k.find(':');
  std::size_t n = std::stoul(k.substr(0, colon));
  return {k.substr(colon + 1, n), k.substr(colon + 1 + n)};
}

std::vector<std::pair<int, int>> adjacent_pairs(const Graph& g) {
  std::set<std::pair<int, int>> s;
  for (auto& e : g.edges())
    if (e.kind == EdgeKind::Ordinary && e.tail != e.head) s.emplace(std::min(e.tail, e.head), std::max(e.tail, e.head));
  return {s.begin(), s.end()};
}

}  // namespace

GraphicalSet product(const GraphicalSet& a, const GraphicalSet& b) {
  GraphicalSet x;
  x.name = a.name + " x " + b.name;
  x.mode = a.mode;
  x.values = cached([a, b](const Graph& g) {
    std::vector<std::string> out;
    auto va = a.values(g);
    auto vb = b.values(g);
    for (auto& s : va)
      for (auto& t : vb) out.push_back(pair_key(s, t));
    return out;
  });
  x.restrict = [a, b](const Morphism& f, const std::string& e) {
    auto [s, t] = unpair(e);
    return pair_key(a.restrict(f, s), b.restrict(f, t));
  };
  return x;
}

GraphicalSet pair_labels(const std::vector<std::vector<int>>& table, Mode mode) {
  GraphicalSet x;
  x.name = "pairs(" + std::to_string(table.size()) + ")";
  x.mode = mode;
  const int n = static_cast<int>(table.size());
  x.values = cached([n](const Graph& g) {
    auto pairs = adjacent_pairs(g);
    std::vector<std::string> out;
    std::vector<int> lab(pairs.size(), 0);
    while (true) {
      out.push_back(table_key(lab));
      int k = static_cast<int>(lab.size()) - 1;
      while (k >= 0 && ++lab[k] == n) lab[k--] = 0;
      if (k < 0) break;
    }
    return out;
  });
  x.restrict = [table](const Morphism& f, const std::string& e) {
    auto tp = adjacent_pairs(f.tgt);
    std::vector<int> lab = e.empty() ? std::vector<int>{} : parse_table(e);
    std::map<std::pair<int, int>, int> at;
    for (std::size_t i = 0; i < tp.size(); ++i) at[tp[i]] = lab[i];
    std::vector<std::vector<int>> over(f.src.num_vertices());
    for (int v = 0; v < f.src.num_vertices(); ++v)
      for (int w = 0; w < f.f1[v].num_vertices(); ++w) over[v].push_back(f.tgt.find_vertex(f.f1[v].vlabel[w]));
    std::vector<int> out;
    for (auto [a, b] : adjacent_pairs(f.src)) {
      int acc = 0;
      for (int p : over[a])
        for (int q : over[b]) {
          auto it = at.find({std::min(p, q), std::max(p, q)});
          if (it != at.end()) acc = table[acc][it->second];
        }
      out.push_back(acc);
    }
    return table_key(out);
  };
  return x;
}

GraphicalSet without_element(const GraphicalSet& x, const Graph& g0, const std::string& elem) {
  GraphicalSet y = x;
  y.name = x.name + " minus one element";
  y.values = cached([x, g0, elem](const Graph& g) {
    std::vector<Morphism> maps;
    try {
      maps = enumerate_graphical_maps(g0, g, x.mode);
    } catch (const ClassError&) {
    }
    std::vector<std::string> out;
    for (auto& e : x.values(g)) {
      bool keep = true;
      for (auto& f : maps)
        if (x.restrict(f, e) == elem) {
          keep = false;
          break;
        }
      if (keep) out.push_back(e);
    }
    return out;
  });
  return y;
}

// ---------------------------------------------------------------------------------------------
// Segal maps

namespace {

struct CorollaData {
  Morphism inclusion;
  std::vector<std::string> elems;
  std::vector<std::vector<std::string>> leg;  // leg[k][i]: restriction of elems[i] to the k-th leg
};

CorollaData corolla_data(const GraphicalSet& x, const Graph& g, int v) {
  CorollaData d;
  d.inclusion = corolla_inclusion(g, v);
  const Graph& c = d.inclusion.src;
  d.elems = x.values(c);
  auto ceo = c.edge_of_flag();
  std::vector<int> legs;
  for (int f : c.gin) legs.push_back(ceo[f]);
  for (int f : c.gout) legs.push_back(ceo[f]);
  for (int e : legs) {
    Morphism lam = edge_inclusion(c, e);
    std::vector<std::string> r;
    for (auto& el : d.elems) r.push_back(x.restrict(lam, el));
    d.leg.push_back(r);
  }
  return d;
}

}  // namespace

std::vector<std::string> corolla_ribbon(const GraphicalSet& x, const Graph& g) {
  const int nv = g.num_vertices();
  std::vector<CorollaData> data;
  for (int v = 0; v < nv; ++v) data.push_back(corolla_data(x, g, v));
  // position of each flag within its vertex, inputs first
  std::vector<int> pos(g.num_flags(), -1);
  for (int v = 0; v < nv; ++v) {
    int k = 0;
    for (int f : g.vin[v]) pos[f] = k++;
    for (int f : g.vout[v]) pos[f] = k++;
  }
  struct Link {
    int u, ku, v, kv;
  };
  std::vector<Link> links;
  for (auto& e : g.edges())
    if (e.kind == EdgeKind::Ordinary || e.kind == EdgeKind::Loop)
      links.push_back({e.tail, pos[e.out_flag], e.head, pos[e.in_flag]});
  std::vector<std::string> out;
  std::vector<int> choice(nv, -1);
  std::function<void(int)> rec = [&](int v) {
    if (v == nv) {
      std::vector<std::string> parts;
      for (int w = 0; w < nv; ++w) parts.push_back(data[w].elems[choice[w]]);
      out.push_back(join(parts, " / "));
      return;
    }
    for (std::size_t i = 0; i < data[v].elems.size(); ++i) {
      choice[v] = static_cast<int>(i);
      bool ok = true;
      for (auto& l : links) {
        if (std::max(l.u, l.v) != v) continue;
        if (data[l.u].leg[l.ku][choice[l.u]] != data[l.v].leg[l.kv][choice[l.v]]) {
          ok = false;
          break;
        }
      }
      if (ok) rec(v + 1);
    }
    choice[v] = -1;
  };
  rec(0);
  return out;
}

std::string segal_image(const GraphicalSet& x, const Graph& g, const std::string& elem) {
  std::vector<std::string> parts;
  for (int v = 0; v < g.num_vertices(); ++v) parts.push_back(x.restrict(corolla_inclusion(g, v), elem));
  return join(parts, " / ");
}

SegalReport segal_check(const GraphicalSet& x, const Graph& g) {
  SegalReport r;
  auto elems = x.values(g);
  r.elements = elems.size();
  std::vector<Morphism> incl;
  for (int v = 0; v < g.num_vertices(); ++v) incl.push_back(corolla_inclusion(g, v));
  std::set<std::string> images;
  for (auto& e : elems) {
    std::vector<std::string> parts;
    for (auto& i : incl) parts.push_back(x.restrict(i, e));
    if (!images.insert(join(parts, " / ")).second) r.injective = false;
  }
  r.image = images.size();
  r.ribbon = corolla_ribbon(x, g).size();
  return r;
}

// ---------------------------------------------------------------------------------------------
// Horns

HornProblem horn_problem(const Graph& g, const Morphism& excluded, Mode m) {
  HornProblem h;
  h.shape = g;
  h.excluded = excluded;
  for (auto& d : cofaces_into(g, m))
    if (!factor_through_iso(excluded, d)) h.faces.push_back(d);
  std::vector<std::vector<Morphism>> sub;
  for (auto& d : h.faces) sub.push_back(cofaces_into(d.src, m));
  for (int i = 0; i < static_cast<int>(h.faces.size()); ++i)
    for (auto& a : sub[i]) {
      Morphism c = compose(h.faces[i], a);
      for (int j = i; j < static_cast<int>(h.faces.size()); ++j)
        for (auto& b : sub[j]) {
          if (j == i && same_map(a, b)) continue;
          if (b.src.num_vertices() != a.src.num_vertices()) continue;
          auto t = factor_through_iso(compose(h.faces[j], b), c);
          if (t) h.squares.push_back({i, j, a, compose(b, *t)});
        }
    }
  return h;
}

std::vector<std::vector<std::string>> compatible_families(const GraphicalSet& x, const HornProblem& h) {
  const int n = static_cast<int>(h.faces.size());
  std::vector<std::vector<std::string>> cand(n);
  for (int i = 0; i < n; ++i) cand[i] = x.values(h.faces[i].src);
  struct Pre {
    int i, j;
    std::vector<std::string> ra, rb;
  };
  std::vector<Pre> pre;
  for (auto& s : h.squares) {
    Pre p{s.i, s.j, {}, {}};
    for (auto& e : cand[s.i]) p.ra.push_back(x.restrict(s.a, e));
    for (auto& e : cand[s.j]) p.rb.push_back(x.restrict(s.b, e));
    pre.push_back(std::move(p));
  }
  std::vector<std::vector<std::string>> out;
  std::vector<int> choice(n, -1);
  std::function<void(int)> rec = [&](int k) {
    if (k == n) {
      std::vector<std::string> fam;
      for (int i = 0; i < n; ++i) fam.push_back(cand[i][choice[i]]);
      out.push_back(fam);
      return;
    }
    for (std::size_t c = 0; c < cand[k].size(); ++c) {
      choice[k] = static_cast<int>(c);
      bool ok = true;
      for (auto& p : pre) {
        if (std::max(p.i, p.j) != k) continue;
        if (p.ra[choice[p.i]] != p.rb[choice[p.j]]) {
          ok = false;
          break;
        }
      }
      if (ok) rec(k + 1);
    }
    choice[k] = -1;
  };
  rec(0);
  return out;
}

std::vector<std::string> horn_fillers(const GraphicalSet& x, const HornProblem& h, const std::vector<std::string>& family) {
  std::vector<std::string> out;
  for (auto& e : x.values(h.shape)) {
    bool ok = true;
    for (std::size_t i = 0; i < h.faces.size() && ok; ++i) ok = x.restrict(h.faces[i], e) == family[i];
    if (ok) out.push_back(e);
  }
  return out;
}

std::vector<HornReport> inner_horn_reports(const GraphicalSet& x, const Graph& g) {
  std::vector<HornReport> out;
  for (auto& d : cofaces_into(g, x.mode)) {
    if (!is_inner_coface(d)) continue;
    HornProblem h = horn_problem(g, d, x.mode);
    std::map<std::string, std::size_t> fillers;
    for (auto& e : x.values(g)) {
      std::vector<std::string> fam;
      for (auto& f : h.faces) fam.push_back(x.restrict(f, e));
      ++fillers[join(fam, " / ")];
    }
    HornReport r;
    r.shape = canon_free(g);
    r.face = std::to_string(d.src.num_vertices()) + "-vertex inner face";
    for (auto& fam : compatible_families(x, h)) {
      ++r.families;
      auto it = fillers.find(join(fam, " / "));
      std::size_t c = it == fillers.end() ? 0 : it->second;
      if (c == 0) ++r.without_filler;
      if (c > 1) ++r.with_several;
    }
    out.push_back(r);
  }
  return out;
}

StrictReport strict_check(const GraphicalSet& x, const std::vector<Graph>& shapes, const std::string& bound) {
  StrictReport r;
  r.bound = bound;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const Graph& g = shapes[i];
    if (!g.ordinary() || g.num_vertices() == 0) continue;
    bool segal_shape = x.mode == Mode::Properadic ? g.num_vertices() >= 2 : internal_edges(g) >= 1;
    std::ostringstream line;
    line << "shape " << i << " (" << g.num_vertices() << " vertices, " << internal_edges(g) << " internal edges):";
    if (segal_shape) {
      SegalReport s = segal_check(x, g);
      line << " segal " << s.elements << "->" << s.ribbon << (s.bijective() ? " ok" : " FAILS");
      if (!s.bijective()) r.segal = false;
    }
    for (auto& h : inner_horn_reports(x, g)) {
      line << " horn families " << h.families << " missing " << h.without_filler << " several " << h.with_several;
      if (h.without_filler) r.fillers_exist = false;
      if (h.without_filler || h.with_several) r.fillers_unique = false;
    }
    r.lines.push_back(line.str());
  }
  return r;
}

// ---------------------------------------------------------------------------------------------
// Homotopy

HomotopyShape homotopy_shape(int m, int n, bool along_input, int index) {
  if (along_input ? (index < 0 || index >= m) : (index < 0 || index >= n))
    throw GraphError("homotopy index out of range");
  std::vector<EdgeSpec> es;
  std::vector<std::string> vs;
  auto in = [](int k) { return "in" + std::to_string(k + 1); };
  auto out = [](int k) { return "out" + std::to_string(k + 1); };
  if (along_input) {
    vs = {"v", "u"};
    for (int k = 0; k < m; ++k) {
      if (k == index) {
        es.push_back({in(k), "", "u"});
        es.push_back({"e", "u", "v"});
      } else {
        es.push_back({in(k), "", "v"});
      }
    }
    for (int k = 0; k < n; ++k) es.push_back({out(k), "v", ""});
  } else {
    vs = {"v", "u"};
    for (int k = 0; k < m; ++k) es.push_back({in(k), "", "v"});
    for (int k = 0; k < n; ++k) {
      if (k == index) {
        es.push_back({"e", "v", "u"});
        es.push_back({out(k), "u", ""});
      } else {
        es.push_back({out(k), "v", ""});
      }
    }
  }
  HomotopyShape s;
  s.d = graph_from_edges(vs, es);
  s.outer_face = corolla_inclusion(s.d, 0);
  s.unit_face = corolla_inclusion(s.d, 1);
  s.inner_face = total_inclusion(s.d);
  return s;
}

namespace {

// The degenerate element over the color of leg k of a corolla element.
std::string unit_on_leg(const GraphicalSet& x, const Graph& c, const std::string& f, bool input, int k) {
  auto eo = c.edge_of_flag();
  int e = eo[input ? c.gin.at(k) : c.gout.at(k)];
  std::string color = x.restrict(edge_inclusion(c, e), f);
  Morphism s = codegeneracy(corolla(1, 1), 0);
  Morphism to_standard{s.tgt, exceptional_edge(), {0}, {}};
  return x.restrict(s, x.restrict(to_standard, color));
}

}  // namespace

std::optional<std::string> homotopy_witness(const GraphicalSet& x, int m, int n, bool along_input, int index,
                                            const std::string& f, const std::string& g) {
  HomotopyShape s = homotopy_shape(m, n, along_input, index);
  std::string one = unit_on_leg(x, corolla(m, n), f, along_input, index);
  for (auto& h : x.values(s.d))
    if (x.restrict(s.outer_face, h) == f && x.restrict(s.inner_face, h) == g && x.restrict(s.unit_face, h) == one)
      return h;
  return std::nullopt;
}

namespace {

std::set<std::pair<std::string, std::string>> homotopy_relation(const GraphicalSet& x, int m, int n, bool input, int k) {
  HomotopyShape s = homotopy_shape(m, n, input, k);
  Graph c = corolla(m, n);
  std::set<std::pair<std::string, std::string>> rel;
  for (auto& h : x.values(s.d)) {
    std::string f = x.restrict(s.outer_face, h);
    if (x.restrict(s.unit_face, h) != unit_on_leg(x, c, f, input, k)) continue;
    rel.emplace(f, x.restrict(s.inner_face, h));
  }
  return rel;
}

}  // namespace

HomotopyReport homotopy_report(const GraphicalSet& x, int m, int n) {
  HomotopyReport r;
  r.m = m;
  r.n = n;
  auto elems = x.values(corolla(m, n));
  r.elements = elems.size();
  std::vector<std::set<std::pair<std::string, std::string>>> rels;
  for (int k = 0; k < m; ++k) rels.push_back(homotopy_relation(x, m, n, true, k));
  for (int k = 0; k < n; ++k) rels.push_back(homotopy_relation(x, m, n, false, k));
  for (auto& rel : rels) {
    for (auto& e : elems) r.reflexive = r.reflexive && rel.count({e, e});
    for (auto& [a, b] : rel) {
      r.symmetric = r.symmetric && rel.count({b, a});
      if (a != b) r.is_equality = false;
      for (auto& [c, d] : rel)
        if (c == b) r.transitive = r.transitive && rel.count({a, d});
    }
    if (rel != rels.front()) r.all_equal = false;
  }
  if (!rels.empty()) r.related_pairs = rels.front().size();
  return r;
}

// ---------------------------------------------------------------------------------------------
// Fundamental properad

FundamentalPropad::FundamentalPropad(GraphicalSet x, int max_arity) : x_(std::move(x)), max_arity_(max_arity) {
  colors_ = x_.values(exceptional_edge());
  for (int total = 0; total <= max_arity; ++total)
    for (int m = 0; m <= total; ++m) elements(m, total - m);
}

const std::vector<std::string>& FundamentalPropad::elements(int m, int n) const {
  auto key = std::make_pair(m, n);
  auto it = reps_.find(key);
  if (it != reps_.end()) return it->second;
  auto& self = const_cast<FundamentalPropad&>(*this);
  auto elems = x_.values(corolla(m, n));
  std::map<std::string, std::string> parent;
  for (auto& e : elems) parent[e] = e;
  std::function<std::string(const std::string&)> find = [&](const std::string& a) {
    std::string r = a;
    while (parent[r] != r) r = parent[r];
    return r;
  };
  if (m > 0 || n > 0) {
    for (auto& [a, b] : homotopy_relation(x_, m, n, m > 0, 0)) {
      std::string ra = find(a), rb = find(b);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }
  auto& rep_of = self.rep_of_[key];
  std::set<std::string> reps;
  for (auto& e : elems) {
    // the least member of each class
    rep_of[e] = find(e);
    reps.insert(rep_of[e]);
  }
  return self.reps_[key] = std::vector<std::string>(reps.begin(), reps.end());
}

std::string FundamentalPropad::representative(int m, int n, const std::string& elem) const {
  elements(m, n);
  auto& table = rep_of_.at({m, n});
  auto it = table.find(elem);
  if (it == table.end()) throw GraphError("not an element of the corolla: " + elem);
  return it->second;
}

std::string FundamentalPropad::unit(const std::string& color) const {
  Morphism s = codegeneracy(corolla(1, 1), 0);
  Morphism to_standard{s.tgt, exceptional_edge(), {0}, {}};
  return representative(1, 1, x_.restrict(s, x_.restrict(to_standard, color)));
}

std::string FundamentalPropad::color_of_leg(int m, int n, const std::string& elem, bool input, int k) const {
  Graph c = corolla(m, n);
  auto eo = c.edge_of_flag();
  return x_.restrict(edge_inclusion(c, eo[input ? c.gin.at(k) : c.gout.at(k)]), elem);
}

std::string FundamentalPropad::compose(const Graph& d, const std::vector<std::string>& elems) const {
  std::vector<Morphism> incl;
  for (int v = 0; v < d.num_vertices(); ++v) incl.push_back(corolla_inclusion(d, v));
  const std::string* best = nullptr;
  auto values = x_.values(d);
  for (auto& h : values) {
    bool ok = true;
    for (int v = 0; v < d.num_vertices() && ok; ++v) {
      int m = static_cast<int>(d.vin[v].size()), n = static_cast<int>(d.vout[v].size());
      ok = representative(m, n, x_.restrict(incl[v], h)) == elems[v];
    }
    if (ok && (!best || h < *best)) best = &h;
  }
  if (!best) throw GraphError("no filler for the decorated shape");
  return representative(static_cast<int>(d.gin.size()), static_cast<int>(d.gout.size()),
                        x_.restrict(total_inclusion(d), *best));
}

std::vector<std::vector<std::string>> corolla_decorations(const FundamentalPropad& f, const Graph& d, std::size_t limit) {
  const int nv = d.num_vertices();
  std::vector<std::vector<std::string>> cand(nv);
  std::vector<std::vector<std::vector<std::string>>> leg(nv);
  std::vector<int> pos(d.num_flags(), -1);
  for (int v = 0; v < nv; ++v) {
    int m = static_cast<int>(d.vin[v].size()), n = static_cast<int>(d.vout[v].size());
    cand[v] = f.elements(m, n);
    int k = 0;
    for (int x : d.vin[v]) pos[x] = k++;
    for (int x : d.vout[v]) pos[x] = k++;
    leg[v].resize(m + n);
    for (auto& e : cand[v]) {
      for (int i = 0; i < m; ++i) leg[v][i].push_back(f.color_of_leg(m, n, e, true, i));
      for (int j = 0; j < n; ++j) leg[v][m + j].push_back(f.color_of_leg(m, n, e, false, j));
    }
  }
  std::vector<std::vector<std::string>> out;
  std::vector<int> choice(nv, -1);
  auto edges = d.edges();
  std::function<void(int)> rec = [&](int v) {
    if (out.size() >= limit) return;
    if (v == nv) {
      std::vector<std::string> dec;
      for (int w = 0; w < nv; ++w) dec.push_back(cand[w][choice[w]]);
      out.push_back(dec);
      return;
    }
    for (std::size_t i = 0; i < cand[v].size(); ++i) {
      choice[v] = static_cast<int>(i);
      bool ok = true;
      for (auto& e : edges) {
        if (!(e.kind == EdgeKind::Ordinary || e.kind == EdgeKind::Loop) || std::max(e.tail, e.head) != v) continue;
        if (leg[e.tail][pos[e.out_flag]][choice[e.tail]] != leg[e.head][pos[e.in_flag]][choice[e.head]]) ok = false;
      }
      if (ok) rec(v + 1);
    }
    choice[v] = -1;
  };
  rec(0);
  return out;
}

namespace {

// Composite of a decorated shape by collapsing two vertices (or one loop) at a time, in the
// order given by `pick`, which chooses among the available collapses.
std::string collapse_in_order(const FundamentalPropad& f, Graph g, std::vector<std::string> elems, Mode m,
                              std::size_t pick) {
  while (g.num_vertices() > 1 || internal_edges(g) > 0) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> options;
    auto es = g.edges();
    if (m == Mode::Properadic) {
      for (auto [u, v] : closest_neighbors(g)) {
        std::vector<int> between;
        for (int i = 0; i < static_cast<int>(es.size()); ++i)
          if (es[i].kind == EdgeKind::Ordinary &&
              ((es[i].tail == u && es[i].head == v) || (es[i].tail == v && es[i].head == u)))
            between.push_back(i);
        options.push_back({{u, v}, between});
      }
    } else {
      for (int e : distinct_vertex_edges(g)) options.push_back({{es[e].tail, es[e].head}, {e}});
      for (auto [v, e] : loops(g)) options.push_back({{v}, {e}});
    }
    if (options.empty()) break;
    auto& [s, e] = options[pick % options.size()];
    pick /= options.size();
    Collapsed c = collapse(g, s, e);
    std::vector<std::string> inner;
    for (int w = 0; w < c.inner.num_vertices(); ++w) inner.push_back(elems[g.find_vertex(c.inner.vname[w])]);
    std::string composite = f.compose(c.inner, inner);
    std::vector<std::string> next;
    for (int w = 0; w < c.outer.num_vertices(); ++w)
      next.push_back(w == c.w ? composite : elems[g.find_vertex(c.outer.vname[w])]);
    g = c.outer;
    elems = next;
  }
  return f.compose(g, elems);
}

}  // namespace

std::vector<std::string> FundamentalPropad::check_axioms(const std::vector<Graph>& shapes, std::size_t max_decorations) const {
  std::vector<std::string> failures;
  for (int total = 1; total <= max_arity_; ++total)
    for (int m = 0; m <= total; ++m) {
      int n = total - m;
      for (auto& e : elements(m, n)) {
        for (int k = 0; k < m + n; ++k) {
          bool input = k < m;
          int idx = input ? k : k - m;
          HomotopyShape s = homotopy_shape(m, n, input, idx);
          std::string one = unit(color_of_leg(m, n, e, input, idx));
          try {
            if (compose(s.d, {e, one}) != e) failures.push_back("unity fails for " + e);
          } catch (const GraphError& err) {
            failures.push_back(std::string("unity: ") + err.what());
          }
        }
      }
    }
  for (auto& g : shapes) {
    if (g.num_vertices() < 2 && internal_edges(g) == 0) continue;
    if (!g.ordinary()) continue;
    for (auto& dec : corolla_decorations(*this, g, max_decorations)) {
      try {
        std::string direct = compose(g, dec);
        for (std::size_t pick = 0; pick < 6; ++pick)
          if (collapse_in_order(*this, g, dec, x_.mode, pick) != direct)
            failures.push_back("associativity fails on " + canon_free(g) + " at " + join(dec, " / "));
      } catch (const GraphError& err) {
        failures.push_back(std::string("composition: ") + err.what());
      }
    }
  }
  return failures;
}

std::vector<std::string> compare_with(const FundamentalPropad& f, const FinitePropad& p, const std::vector<Graph>& shapes) {
  std::vector<std::string> bad;
  if (f.colors().size() != p.colors.size()) bad.push_back("color count differs");
  for (std::size_t c = 0; c < p.colors.size(); ++c) {
    Decoration up{{static_cast<int>(c)}, {}};
    Decoration one{{static_cast<int>(c), static_cast<int>(c)}, {unit(p, static_cast<int>(c))}};
    if (f.unit(up.key()) != one.key()) bad.push_back("unit differs at color " + p.colors[c]);
  }
  for (int total = 0; total <= f.max_arity(); ++total)
    for (int m = 0; m <= total; ++m) {
      int n = total - m;
      auto expected = nerve_at(p, corolla(m, n)).size();
      if (f.elements(m, n).size() != expected)
        bad.push_back("component count differs at (" + std::to_string(m) + ";" + std::to_string(n) + ")");
    }
  for (auto& g : shapes) {
    if (g.num_vertices() < 2 || !g.ordinary()) continue;
    auto eo = g.edge_of_flag();
    for (auto& dec : corolla_decorations(f, g, 64)) {
      // color every edge of g from the corolla decorations, then evaluate in P
      Graph colored = g;
      std::vector<std::string> elems;
      for (int v = 0; v < g.num_vertices(); ++v) {
        Decoration d = Decoration::parse(dec[v]);
        Graph c = corolla(static_cast<int>(g.vin[v].size()), static_cast<int>(g.vout[v].size()));
        auto ceo = c.edge_of_flag();
        for (std::size_t k = 0; k < g.vin[v].size(); ++k)
          colored.color[g.vin[v][k]] = p.colors[d.colors[ceo[c.gin[k]]]];
        for (std::size_t k = 0; k < g.vout[v].size(); ++k)
          colored.color[g.vout[v][k]] = p.colors[d.colors[ceo[c.gout[k]]]];
        elems.push_back(d.elems.at(0));
      }
      for (int x = 0; x < g.num_flags(); ++x)
        if (!g.is_leg(x)) colored.color[g.iota[x]] = colored.color[x];
      std::string value = evaluate(p, colored, elems);
      Graph c = corolla(static_cast<int>(g.gin.size()), static_cast<int>(g.gout.size()));
      auto ceo = c.edge_of_flag();
      Decoration want;
      want.colors.assign(c.edges().size(), 0);
      for (std::size_t k = 0; k < g.gin.size(); ++k) want.colors[ceo[c.gin[k]]] = p.color_index(colored.color[g.gin[k]]);
      for (std::size_t k = 0; k < g.gout.size(); ++k) want.colors[ceo[c.gout[k]]] = p.color_index(colored.color[g.gout[k]]);
      want.elems = {value};
      std::string got;
      try {
        got = f.compose(g, dec);
      } catch (const GraphError& err) {
        got = err.what();
      }
      if (got != want.key()) bad.push_back("composite differs on " + canon_free(g) + ": " + got + " vs " + want.key());
    }
    (void)eo;
  }
  return bad;
}

}  // namespace pg
