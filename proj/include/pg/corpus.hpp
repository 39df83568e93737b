#pragma once

#include <string>
#include <vector>

#include "pg/graph.hpp"

namespace pg {

// Bounds for the generated corpus.  Graphs are one-colored and connected; `max_legs` bounds the
// total number of input and output legs, and `max_arity`, when positive, the flags at any one vertex.
struct CorpusBounds {
  int max_vertices = 2;
  int max_internal = 2;
  int max_legs = 2;
  int max_arity = 0;
  bool wheeled = false;
};

struct CorpusEntry {
  std::string name;
  Graph graph;
};

// Every connected (wheel-free unless wheeled) graph within the bounds, one per class up to
// listing, in a deterministic order with deterministic names.  The exceptional edge is always
// present, the exceptional loop in wheeled mode.
std::vector<CorpusEntry> generate_corpus(const CorpusBounds& b);

// One `<name>.graph` file per entry plus a `MANIFEST` listing bounds and names.
void write_corpus(const std::string& dir, const std::vector<CorpusEntry>& corpus, const CorpusBounds& b);
// Reads the files named in MANIFEST, or every *.graph file in name order when there is none.
std::vector<CorpusEntry> read_corpus(const std::string& dir);

std::vector<Graph> graphs_of(const std::vector<CorpusEntry>& corpus);

}  // namespace pg
