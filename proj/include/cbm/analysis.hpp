#pragma once

#include <vector>

#include "cbm/graph.hpp"

namespace cbm {

// Parameters of the density functional. n is a real scale so that the
// regime log D / log n -> 0 can be represented at desk scale; the default
// n = D^60 keeps the vertex factor above 1 and the edge factor below 1.
struct DensityParams {
    double n = 1e120;
    int D = 100;
    double lambda_tilde = 1.0;
    int k = 2;

    void validate() const;
    double log_vertex_base() const;  // log(2 lt^2 k^2 n / D^50)
    double log_edge_base() const;    // log(1000 lt^20 k^20 D^50 / n)
    double bad_threshold() const;    // -log log n
};

double phi_log(const Graph& h, const DensityParams& p);
bool is_bad(const Graph& h, const DensityParams& p);

constexpr int kSubgraphVertexLimit = 26;

// Minimum of log Phi over all subgraphs of h (the empty graph included),
// and over proper subgraphs only. Exact; exponential in component size.
double min_subgraph_phi_log(const Graph& h, const DensityParams& p);
double min_proper_subgraph_phi_log(const Graph& h, const DensityParams& p);

bool is_self_bad(const Graph& h, const DensityParams& p);
bool has_bad_subgraph(const Graph& h, const DensityParams& p);
bool is_admissible(const Graph& h, const DensityParams& p, int N);

// max over vertex subsets K of |E(g_K)| - rho |K|, with a maximizer.
struct DensestResult {
    double value = 0.0;
    std::vector<int> vertices;
};
DensestResult max_density_excess(const Graph& g, double rho);

// Self-bad subgraphs of a large sparse graph, searched inside connected
// components of its 2-core with at most vertex_cap vertices and at most
// edge_cap edges. Components beyond the caps are reported in `skipped`.
struct SelfBadSearch {
    std::vector<Graph> found;
    int skipped = 0;
};
SelfBadSearch find_self_bad_subgraphs(const Graph& g, const DensityParams& p, int vertex_cap,
                                      int edge_cap = 18);

constexpr double kOtterAlpha = 0.338;

int choose_N(double delta, double eps, int k);

// A path is a walk without repeated vertices, except that a closed path
// starts and ends at its single endpoint.
struct Path {
    std::vector<int> walk;

    bool closed() const { return walk.size() > 2 && walk.front() == walk.back(); }
    std::vector<int> endpoints() const;
    std::vector<int> interior() const;
    std::vector<Edge> edges() const;
};

struct Decomposition {
    std::vector<std::vector<int>> cycles;  // vertex sequences
    std::vector<Path> paths;

    std::vector<Graph> cycle_graphs(int n) const;
    int num_paths() const { return static_cast<int>(paths.size()); }
};

// |L(S) \ V(H)| + tau(S) - tau(H).
int path_budget(const Graph& h, const Graph& s);

Decomposition decompose_plain(const Graph& h, const Graph& s);
Decomposition decompose_revised(const Graph& h, const Graph& s);

}  // namespace cbm
