#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pg/gamma.hpp"
#include "pg/graph.hpp"

namespace pg {

// ---------------------------------------------------------------------------------------------
// Finite properads over sets.
//
// Components are infinite in number, so a finite properad is kept as a presentation from which any
// component and any composite can be computed: either the endomorphism properad of finite sets, or a
// finite commutative monoid placed in every supported component with composition given by the
// monoid product.  The monoid kind also makes sense in the wheeled setting; the endomorphism kind
// does not, since contraction would need a trace.

enum class PropadKind { End, Monoid };
// Which profiles of a monoid properad are nonempty.  Special: at least one input and one output.
// Balanced: the input and output color multisets agree.
enum class Support { All, Special, Balanced };

struct FinitePropad {
  std::string name;
  PropadKind kind = PropadKind::Monoid;
  Mode mode = Mode::Properadic;
  std::vector<std::string> colors;
  std::vector<int> set_size;              // End: size of the set of each color
  std::vector<std::string> monoid;        // Monoid: element names, the identity first
  std::vector<std::vector<int>> product;  // Monoid: product[a][b]
  Support support = Support::All;

  int color_index(const std::string& c) const;  // throws GraphError when unknown
};

FinitePropad end_propad(const std::vector<std::string>& colors, const std::vector<int>& sizes);
FinitePropad monoid_propad(const std::string& name, const std::vector<std::string>& colors,
                           const std::vector<std::string>& elements, const std::vector<std::vector<int>>& product,
                           Support support = Support::All, Mode mode = Mode::Properadic);
// Throws GraphError when the monoid table is not a commutative monoid with identity 0, or an
// endomorphism properad is asked to be wheeled.
void validate_propad(const FinitePropad& p);

// Elements of P(ins; outs).  End elements are written as the table of output tuples, one per input
// tuple in lexicographic order; monoid elements by name.
std::vector<std::string> component(const FinitePropad& p, const std::vector<int>& ins, const std::vector<int>& outs);
std::string unit(const FinitePropad& p, int color);
// The composite of a P-decorated graph: h is colored by color names of P and elems[v] lies in
// the component of vertex v, relative to its listing.  The result is relative to h's listing.
std::string evaluate(const FinitePropad& p, const Graph& h, const std::vector<std::string>& elems);

// A deterministic family of small properads: at most two colors and at most three elements per
// component, apart from endomorphisms of two-element sets.
std::vector<FinitePropad> sample_propads(std::uint64_t seed, int count, Mode mode = Mode::Properadic);

std::string print_propad(const FinitePropad& p);
FinitePropad parse_propad(const std::string& text);
// Components and units over every profile with at most `max_arity` inputs plus outputs.
std::string describe_propad(const FinitePropad& p, int max_arity);

// ---------------------------------------------------------------------------------------------
// Graphical sets, evaluated on demand.  Elements are opaque string keys; `restrict` is the action
// of a graphical map f: X(f.tgt) -> X(f.src).

struct GraphicalSet {
  std::string name;
  Mode mode = Mode::Properadic;
  std::function<std::vector<std::string>(const Graph&)> values;
  std::function<std::string(const Morphism&, const std::string&)> restrict;
};

// Elements of NP(G): edge colors followed by vertex decorations, as in "a b|x;y".
struct Decoration {
  std::vector<int> colors;
  std::vector<std::string> elems;
  std::string key() const;
  static Decoration parse(const std::string& key);
};

std::vector<std::string> nerve_at(const FinitePropad& p, const Graph& g);
std::string nerve_restrict(const FinitePropad& p, const Morphism& f, const std::string& x);
GraphicalSet nerve(const FinitePropad& p);

// Elementwise product of graphical sets.
GraphicalSet product(const GraphicalSet& a, const GraphicalSet& b);
// A monoid label on every pair of adjacent vertices; restriction multiplies the labels of the
// adjacent pairs lying over a pair.  Inner horns of two-vertex shapes then have one filler per
// monoid element.  Shapes with three or more vertices have horns without fillers, since faces
// meeting only in corollas carry independent labels.
GraphicalSet pair_labels(const std::vector<std::vector<int>>& group_product, Mode mode);
// The largest graphical subset of x avoiding the element `elem` of X(g0).
GraphicalSet without_element(const GraphicalSet& x, const Graph& g0, const std::string& elem);

// ---------------------------------------------------------------------------------------------
// Segal maps.

// Compatible families of corolla elements of G, one key per family ("x_v1 / x_v2 / ...").
std::vector<std::string> corolla_ribbon(const GraphicalSet& x, const Graph& g);
std::string segal_image(const GraphicalSet& x, const Graph& g, const std::string& elem);

struct SegalReport {
  std::size_t elements = 0, ribbon = 0, image = 0;
  bool injective = true;
  bool bijective() const { return injective && image == ribbon && elements == ribbon; }
};
SegalReport segal_check(const GraphicalSet& x, const Graph& g);

// ---------------------------------------------------------------------------------------------
// Faces and horns.

// Cofaces into g other than d and its relistings, with the commuting squares relating them.
struct HornProblem {
  Graph shape;
  Morphism excluded;
  std::vector<Morphism> faces;
  struct Square {
    int i, j;
    Morphism a, b;  // faces[i] a = faces[j] b
  };
  std::vector<Square> squares;
};
HornProblem horn_problem(const Graph& g, const Morphism& excluded, Mode m);
// Families (one key per face, joined by " / ") compatible on every square.
std::vector<std::vector<std::string>> compatible_families(const GraphicalSet& x, const HornProblem& h);
std::vector<std::string> horn_fillers(const GraphicalSet& x, const HornProblem& h, const std::vector<std::string>& family);

struct HornReport {
  std::string shape, face;
  std::size_t families = 0, without_filler = 0, with_several = 0;
};
std::vector<HornReport> inner_horn_reports(const GraphicalSet& x, const Graph& g);

struct StrictReport {
  std::string bound;
  bool segal = true, fillers_exist = true, fillers_unique = true;
  std::vector<std::string> lines;
  bool strict() const { return segal && fillers_exist && fillers_unique; }
};
// Segal maps of shapes with two or more vertices (wheeled: one or more internal edges) and every
// inner horn, over the given shapes.
StrictReport strict_check(const GraphicalSet& x, const std::vector<Graph>& shapes, const std::string& bound);

// ---------------------------------------------------------------------------------------------
// Homotopy of one-dimensional elements, the elements of X(corolla(m, n)).

// Shape of a homotopy along input i (0-based): a (1;1) vertex u feeding input i of v.  Along an
// output: output j of v feeding u.
struct HomotopyShape {
  Graph d;
  Morphism outer_face;  // the corolla onto v
  Morphism unit_face;   // corolla(1,1) onto u
  Morphism inner_face;  // the corolla onto all of d
};
HomotopyShape homotopy_shape(int m, int n, bool along_input, int index);
std::optional<std::string> homotopy_witness(const GraphicalSet& x, int m, int n, bool along_input, int index,
                                            const std::string& f, const std::string& g);

struct HomotopyReport {
  int m = 0, n = 0;
  std::size_t elements = 0, related_pairs = 0;
  bool reflexive = true, symmetric = true, transitive = true, all_equal = true, is_equality = true;
};
HomotopyReport homotopy_report(const GraphicalSet& x, int m, int n);

// ---------------------------------------------------------------------------------------------
// Fundamental properad of a truncated graphical set.

class FundamentalPropad {
 public:
  FundamentalPropad(GraphicalSet x, int max_arity);

  const std::vector<std::string>& colors() const { return colors_; }
  // Homotopy class representatives of X(corolla(m, n)).
  const std::vector<std::string>& elements(int m, int n) const;
  std::string representative(int m, int n, const std::string& elem) const;
  std::string unit(const std::string& color) const;
  std::string color_of_leg(int m, int n, const std::string& elem, bool input, int k) const;
  // The composite of a decorated shape: a filler of the corolla elements of d, restricted along the
  // inclusion of the standard corolla onto all of d.  Throws GraphError when no filler exists.
  std::string compose(const Graph& d, const std::vector<std::string>& elems) const;
  // Unity on every element and input/output, and agreement of iterated compositions over every
  // collapsing order of the given shapes; failures are described.
  std::vector<std::string> check_axioms(const std::vector<Graph>& shapes, std::size_t max_decorations) const;
  int max_arity() const { return max_arity_; }
  const GraphicalSet& source() const { return x_; }

 private:
  GraphicalSet x_;
  int max_arity_;
  std::vector<std::string> colors_;
  std::map<std::pair<int, int>, std::vector<std::string>> reps_;
  std::map<std::pair<int, int>, std::map<std::string, std::string>> rep_of_;
};

// Decorations of d by representatives whose leg colors match along every internal edge.
std::vector<std::vector<std::string>> corolla_decorations(const FundamentalPropad& f, const Graph& d,
                                                          std::size_t limit);

// Compares the fundamental properad of NP with P: colors, components, units and composites on
// the given shapes.  Returns the mismatches.
std::vector<std::string> compare_with(const FundamentalPropad& f, const FinitePropad& p, const std::vector<Graph>& shapes);

}  // namespace pg
