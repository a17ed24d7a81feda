#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbm/graph.hpp"

namespace cbm {

constexpr int kMaxAleph = 14;

struct TreeShape {
    std::vector<Edge> edges;  // over {0,...,aleph}, canonical labeling, root 0
    int aleph = 0;
    std::uint64_t aut = 1;
    std::string code;  // AHU code rooted at the canonical center

    Graph graph() const { return Graph(aleph + 1, edges); }
};

// Canonical data for a tree given as adjacency lists over {0,...,v-1}.
struct TreeCanon {
    std::string code;
    std::uint64_t aut = 1;
    std::vector<Edge> edges;
};
TreeCanon canonicalize_tree(const std::vector<std::vector<int>>& adj);
// Same, for a connected acyclic Graph (relabels its vertex set to 0..v-1).
TreeCanon canonicalize_tree(const Graph& tree);

// All unlabeled trees with `aleph` edges, sorted by code. Cached.
const std::vector<TreeShape>& enumerate_trees(int aleph);
double otter_estimate(int aleph);

double a_coefficient(const TreeShape& shape, long long n, double s);
double log_a_coefficient(const TreeShape& shape, long long n, double s);

// Number of labeled copies of a tree with v vertices and automorphism
// count aut inside the complete graph on n vertices: n!/((n-v)! aut).
double labeled_copy_count(long long n, int v, std::uint64_t aut);

// Default tree size ceil(log n / (3 log log n)), at least 1.
int default_aleph(long long n);

}  // namespace cbm
