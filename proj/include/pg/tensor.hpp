#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pg/gamma.hpp"
#include "pg/graph.hpp"
#include "pg/nerve.hpp"

namespace pg {

// Colors of a smash product are pairs written "(c,d)"; the element p (x) d is labeled "p*d" and
// c (x) q is labeled "c*q".
std::string pair_color(const std::string& c, const std::string& d);
std::string smash_label(const std::string& a, const std::string& b);

struct SmashElement {
  std::string name;      // "p*d" or "c*q"
  bool left = true;      // true for p (x) d
  std::string generator; // p or q
  std::string color;     // d or c
  std::vector<std::string> ins, outs;
};

struct SmashObject {
  std::vector<std::string> colors;
  std::vector<SmashElement> elements;
};

SmashObject smash(const GeneratingObject& a, const GeneratingObject& b);
// The smash product viewed as a generating object in its own right, for iterated smashing.
GeneratingObject as_generating_object(const SmashObject& s);

// A generating distributivity relation.  `left` has the copies p*d_j on top of the copies a_i*q,
// `right` has the copies b_s*q on top of p*c_j.  The listings are those of the two pictures:
// left inputs run a-major and left outputs d-major, right inputs c-major and right outputs
// b-major.  sigma_out[i] is the position among right's outputs of left's i-th output, and
// sigma_in likewise for inputs.
struct Relation {
  std::string p, q;
  Graph left, right;
  std::vector<int> sigma_out, sigma_in;
};

// Throws ClassError unless both elements have nonempty inputs and outputs.
Relation make_relation(const GeneratingObject::Element& p, const GeneratingObject::Element& q);
std::vector<Relation> generating_distributivity(const GeneratingObject& a, const GeneratingObject& b);

struct Presentation {
  Mode mode = Mode::Properadic;
  std::string left_name, right_name;
  SmashObject generators;
  std::vector<Relation> relations;
};

// G and H must be connected with every vertex having inputs and outputs, and in properadic mode
// wheel-free; otherwise ClassError.
Presentation tensor_presentation(const Graph& g, const Graph& h, Mode m = Mode::Properadic);
std::string print_presentation(const Presentation& p);

// Replaces the decorated subgraph on `vertices` of k, which must match one side of the relation
// up to listing, by the other side.  Throws GraphError when the subgraph does not match.
Graph apply_relation(const Graph& k, const Relation& r, const std::vector<int>& vertices, bool left_to_right);

// The two sides of the distributivity relation for arbitrary decorated graphs p and q, built by
// substituting p (x) d and c (x) q into the profile-level relation.
Relation distributivity_sides(const Graph& p, const Graph& q);

// Graph in which p-vertex v sits above q-vertex w exactly when above[v][w].  The empty relation
// gives the right side of the (p, q) distributivity, the full relation the left side.
Graph distributivity_state(const Graph& p, const Graph& q, const std::vector<std::vector<char>>& above);

struct DistributivityStep {
  std::string p_vertex, q_vertex;  // vertex names in p and q
  Relation relation;               // the generating relation applied, left to right
  Graph before, after;
  std::vector<std::string> removed, added;  // vertex names of before and after
};

struct DistributivityChain {
  Graph p, q;
  Graph left, right;  // chain endpoints
  std::vector<DistributivityStep> steps;
};

// Rewrites the left side of the (p, q) distributivity into the right side one generating
// relation at a time.  p and q must be wheel-free, with every vertex having inputs and outputs,
// and at most max_vertices vertices each (GraphError otherwise).
DistributivityChain distributivity_decompose(const Graph& p, const Graph& q, int max_vertices = 3);
// Re-derives every step by rewriting and checks both endpoints against distributivity_sides.
// Returns the problems found.
std::vector<std::string> verify_chain(const DistributivityChain& c);
std::string format_chain(const DistributivityChain& c);

// A map of generators into a finite properad: smash colors to colors of R and smash elements
// (by label) to elements of R.  Returns the relations whose two sides evaluate differently.
struct GeneratorMap {
  std::map<std::string, std::string> color;
  std::map<std::string, std::string> element;
};
std::vector<std::string> distributivity_failures(const std::vector<Relation>& rels, const FinitePropad& r,
                                                 const GeneratorMap& f);
// Value in R of a smash-decorated graph under f.
std::string evaluate_under(const Graph& d, const FinitePropad& r, const GeneratorMap& f);

}  // namespace pg
