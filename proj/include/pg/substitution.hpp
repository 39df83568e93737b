#pragma once

#include <map>
#include <string>
#include <vector>

#include "pg/graph.hpp"

namespace pg {

// Where a flag of a substituted graph came from.  outer_flag is the flag of the outer graph it
// replaces (legs of inner graphs take over the outer slot), inner_flag the flag of inner graph
// H_{outer_vertex}.  Fields not applicable are -1.
struct FlagOrigin {
  int outer_flag = -1;
  int outer_vertex = -1;
  int inner_flag = -1;
};

struct Provenance {
  std::vector<std::pair<int, int>> vertex_origin;  // result vertex -> (outer vertex, inner vertex)
  std::vector<FlagOrigin> flag_origin;             // result flag -> origin
};

struct Substituted {
  Graph graph;
  Provenance provenance;
};

// G({H_v}).  Vertices missing from `inner` are left as they are.  The k-th input (output) leg of
// H_v is glued in place of the k-th input (output) flag of v; colors must agree exactly.
Substituted substitute(const Graph& outer, const std::map<int, Graph>& inner);
Graph substitute_vertex(const Graph& outer, int v, const Graph& inner);

// The corolla with the profile and listing of vertex v, named like v.
Graph vertex_corolla(const Graph& g, int v);

// Splits K along a set S of vertices and a set E of internal edges among them: returns an outer
// graph G with S merged into one vertex w and the inner graph H on S whose internal edges are E,
// such that G(H at w) = K strictly.  Flag names of K are reused in both.
struct Collapsed {
  Graph outer;
  int w = -1;
  Graph inner;
};
Collapsed collapse(const Graph& k, const std::vector<int>& s, const std::vector<int>& e);

enum class FactorKind { InnerProperadic, OuterProperadic, InnerDioperadic, OuterDioperadic, InnerContracting, OuterContracting };
const char* factor_kind_name(FactorKind k);
FactorKind parse_factor_kind(const std::string& s);  // "inner-prop", ... ; throws std::invalid_argument

struct Factorization {
  FactorKind kind;
  Graph outer;
  int w = -1;
  Graph inner;
  std::vector<int> vertices;  // witnessing vertices of K
  int edge = -1;              // witnessing edge of K (index into K.edges())
  int leg = -1;               // corolla case of the outer factorizations: the subdivided leg
};

std::vector<Factorization> inner_properadic_factorizations(const Graph& k);
std::vector<Factorization> outer_properadic_factorizations(const Graph& k);
std::vector<Factorization> inner_dioperadic_factorizations(const Graph& k);
std::vector<Factorization> outer_dioperadic_factorizations(const Graph& k);
std::vector<Factorization> inner_contracting_factorizations(const Graph& k);
std::vector<Factorization> outer_contracting_factorizations(const Graph& k);
std::vector<Factorization> factorizations(const Graph& k, FactorKind kind);

Graph recompose(const Factorization& f);

struct Reduction {
  Graph graph;
  int edge = -1;  // e_v in the reduced graph
};
// Substitutes the exceptional edge at a vertex with one input and one output.
Reduction degenerate_reduction(const Graph& g, int v);

}  // namespace pg
