#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pg/graph.hpp"
#include "pg/substitution.hpp"

namespace pg {

// Properadic graphs and maps live in the graphical category; wheeled ones in its wheeled
// counterpart.  Most operations take the mode and differ only in which shapes and cofaces exist.
enum class Mode { Properadic, Wheeled };

// ---------------------------------------------------------------------------------------------
// Elements of the graphical properad of G.
//
// An element is a decorated graph: every flag is colored by the *name* of an edge of G and every
// vertex is labeled by the *name* of a vertex of G.  The listing of a decorated vertex always
// follows the listing of its label in G, so two elements are equal exactly when their shapes are
// strictly isomorphic (canon_strict) and equal up to listing when canon_free agrees.

// Edge name -> index into g.edges().
std::map<std::string, int> edge_index(const Graph& g);

// G itself, viewed as an element of its own graphical properad.
Graph decorate(const Graph& g);
// The corolla C_v.
Graph corolla_element(const Graph& g, int v);
// The exceptional edge colored by edge e.
Graph unit_element(const Graph& g, int e);
// Reorders the graph listing of d so that its input (output) colors read `ins` (`outs`).
Graph relist(const Graph& d, const std::vector<std::string>& ins, const std::vector<std::string>& outs);
// A graph whose flag and vertex names are names of k, decorated accordingly.
Graph as_element(const Graph& h, const Graph& k);
// Reorders every vertex listing of d to follow the listing of its label in k.
Graph normalize_element(const Graph& d, const Graph& k);

// Empty when d is an element of the (wheeled) graphical properad of g, else the reason.
std::string element_error(const Graph& d, const Graph& g, Mode m);
std::string element_key(const Graph& d);  // up to listing

struct GeneratingObject {
  struct Element {
    std::string name;
    std::vector<std::string> ins, outs;
  };
  std::vector<std::string> colors;
  std::vector<Element> elements;
};
GeneratingObject generating_object(const Graph& g);
std::string format_generating_object(const GeneratingObject& o);

// All elements with at most max_vertices vertices, up to listing, sorted by key.  Exceptional
// edges (and in wheeled mode exceptional loops) are included once per color.
std::vector<Graph> enumerate_elements(const Graph& g, int max_vertices, Mode m = Mode::Properadic);
// Finite iff simply connected; the exceptional loop is the one finite non-simply-connected
// wheeled case.
bool is_finite(const Graph& g, Mode m = Mode::Properadic);
// n copies of a cycle of g spliced into one long cycle (requires a cycle through two vertices).
Graph cycle_witness(const Graph& g, int n);
// n copies of a vertex with a loop, chained along that loop.
Graph loop_witness(const Graph& g, int n);

// ---------------------------------------------------------------------------------------------
// Maps of graphical properads: f0 on edges and f1 on vertices.

struct Morphism {
  Graph src, tgt;
  std::vector<int> f0;    // edge of src -> edge of tgt
  std::vector<Graph> f1;  // vertex of src -> element of tgt
};

// Throws GraphError naming the first offending vertex.
void validate_morphism(const Morphism& f, Mode m = Mode::Properadic);
Morphism make_morphism(Graph src, Graph tgt, std::vector<int> f0, std::vector<Graph> f1,
                       Mode m = Mode::Properadic);
Morphism identity_map(const Graph& g);
// f applied to an element of the source.
Graph apply(const Morphism& f, const Graph& element);
Morphism compose(const Morphism& g, const Morphism& f);  // g after f
bool same_map(const Morphism& a, const Morphism& b);
Graph image(const Morphism& f);

// Coface map determined by a factorization of k (inner kinds: outer graph -> k; outer kinds:
// inner graph -> k).
Morphism coface(const Graph& k, const Factorization& fz);
Morphism codegeneracy(const Graph& g, int v);
// The wheeled exceptional inner coface from the isolated vertex to the exceptional loop.
Morphism exceptional_coface(const std::string& color = "*");
// Every coface map with target k.
std::vector<Morphism> cofaces_into(const Graph& k, Mode m, bool include_exceptional = false);
bool is_inner_coface(const Morphism& f);

// Isomorphism a -> b with the given edge bijection, if one exists.
std::optional<Morphism> iso_with_edge_map(const Graph& a, const Graph& b, const std::vector<int>& e0);
// Every isomorphism a -> b in the graphical category.
std::vector<Morphism> graph_isomorphisms(const Graph& a, const Graph& b);
// An isomorphism t: f.src -> c.src with c t = f, if one exists.
std::optional<Morphism> factor_through_iso(const Morphism& c, const Morphism& f);
// The map from the standard corolla onto vertex v of g, matching listings.
Morphism corolla_inclusion(const Graph& g, int v);
// The map from the standard corolla onto all of g, matching the graph listing.
Morphism total_inclusion(const Graph& g);
// The exceptional edge onto edge e of g.
Morphism edge_inclusion(const Graph& g, int e);

// ---------------------------------------------------------------------------------------------
// Subgraphs and graphical maps.

bool is_subgraph_element(const Graph& d, const Graph& k, Mode m);

struct SubgraphWitness {
  Graph outer;                 // H with k = H(source) at vertex w
  int w = -1;
  Morphism iso;                // source -> first object of the chain
  std::vector<Morphism> chain;  // outer cofaces, in order of application
};
std::optional<SubgraphWitness> subgraph_witness(const Morphism& f, Mode m = Mode::Properadic);
bool is_graphical(const Morphism& f, Mode m = Mode::Properadic);

// All graphical maps g -> k.
std::vector<Morphism> enumerate_graphical_maps(const Graph& g, const Graph& k, Mode m = Mode::Properadic);

// ---------------------------------------------------------------------------------------------
// Codegeneracies, then an isomorphism, then inner cofaces, then outer cofaces.

struct MapFactorization {
  Graph source;
  std::vector<Morphism> codegeneracies;
  Morphism iso;
  std::vector<Morphism> inner;
  std::vector<Morphism> outer;
  bool exceptional = false;  // the wheeled exceptional coface, kept whole in `iso`

  Morphism minus_part() const;  // iso after the codegeneracies
  Morphism plus_part() const;   // all cofaces
  Morphism image_part() const;  // everything up to the image
  Morphism outer_part() const;  // the subgraph inclusion of the image
  Morphism composite() const;
};
// A nonzero seed shuffles every internal choice (vertex orders, face orders).
MapFactorization factorize(const Morphism& f, Mode m = Mode::Properadic, std::uint64_t seed = 0);
// Same codegeneracy part and plus parts related by an isomorphism of the middle objects.
bool equivalent_factorizations(const MapFactorization& a, const MapFactorization& b);

// ---------------------------------------------------------------------------------------------
// Codimension 2.

struct Codim2 {
  Morphism dy;  // K -> J
  Morphism dx;  // J -> G
  std::string shape;  // e.g. "inner/outer -> outer/inner"
  int classes = 0;    // factorizations of the composite up to listing, the input included
};
std::optional<Codim2> codim2_alternative(const Morphism& dv, const Morphism& du, Mode m = Mode::Properadic);

// ---------------------------------------------------------------------------------------------
// Generalized Reedy structure, degree = number of vertices.

enum class ReedyClass { Plus, Minus, Iso, Neither };
const char* reedy_class_name(ReedyClass c);
bool edge_injective(const Morphism& f);
bool edge_surjective(const Morphism& f);
bool in_plus(const Morphism& f);
bool in_minus(const Morphism& f);
bool is_isomorphism(const Morphism& f);
ReedyClass reedy_class(const Morphism& f);

struct ReedyReport {
  int objects = 0;
  int maps = 0;
  int plus = 0, minus = 0, iso = 0, neither = 0;
  bool degree_axiom = true;        // (i)
  bool intersection_axiom = true;  // (ii)
  bool factorization_axiom = true; // (iii)
  bool minus_rigid = true;         // (iv)
  bool plus_rigid = true;          // (iv')
  std::vector<std::string> failures;
  bool ok() const {
    return degree_axiom && intersection_axiom && factorization_axiom && minus_rigid && plus_rigid;
  }
};
ReedyReport reedy_axioms(const std::vector<Graph>& corpus);
std::string format_reedy(const ReedyReport& r);

// ---------------------------------------------------------------------------------------------
// Text form of maps: a `map` block with `source` and `target` graph sections, `f0: a=b` lines and
// one `f1 v` graph section per source vertex.
std::string print_morphism(const Morphism& f);
Morphism parse_morphism(const std::string& text, Mode m = Mode::Properadic);

}  // namespace pg
