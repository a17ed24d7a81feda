#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cbm/analysis.hpp"
#include "cbm/graph.hpp"

namespace cbm {

// SplitMix64 finalizer; used to derive independent streams.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index, std::uint64_t tag);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}
    static Rng derive(std::uint64_t master, std::uint64_t index, std::uint64_t tag = 0) {
        return Rng(stream_seed(master, index, tag));
    }

    std::mt19937_64& engine() { return eng_; }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    bool bernoulli(double p) { return uniform() < p; }
    long long binomial(long long trials, double p);

private:
    std::mt19937_64 eng_;
};

struct ModelParams {
    int n = 1000;
    double lambda = 1.0;
    int k = 2;
    double eps = 0.0;
    double s = 1.0;

    void validate() const;
    double p_in() const { return (1.0 + (k - 1) * eps) * lambda / n; }
    double p_out() const { return (1.0 - eps) * lambda / n; }
    double null_density() const { return lambda * s / n; }  // lambda s / n
    double ks_product() const { return lambda * s * eps * eps; }
};

struct SbmSample {
    std::vector<int> sigma;
    Graph g;
};

struct CorrelatedSample {
    std::vector<int> sigma;
    Permutation pi;
    Graph parent;
    Graph a;
    Graph b;
};

struct TruncatedSample {
    std::vector<int> sigma;
    Graph g;
    Graph g_prime;
    std::vector<Edge> removed;
    int patterns = 0;
};

SbmSample sample_sbm(const ModelParams& p, Rng& rng);
Graph sample_er(int n, double density, Rng& rng);
// Keep each edge independently with probability s.
Graph subsample(const Graph& g, double s, Rng& rng);
CorrelatedSample sample_correlated(const ModelParams& p, Rng& rng);
std::pair<Graph, Graph> sample_null(const ModelParams& p, Rng& rng);

// Poisson intensity (1 + (k-1) eps^j) lambda^j / (2j) of j-cycles.
double cycle_intensity(int j, const ModelParams& p);

constexpr int kDefaultVertexCap = 30;

struct Truncation {
    Graph g_prime;
    std::vector<Edge> removed;
    int patterns = 0;
};

// Removes one uniformly chosen edge from every cycle of length <= N and
// every detected self-bad subgraph of g.
Truncation truncate_graph(const Graph& g, int N, int vertex_cap, const DensityParams& dp, Rng& rng);

// SBM draw followed by truncate_graph.
TruncatedSample sample_truncated(const ModelParams& p, int N, int vertex_cap,
                                 const DensityParams& dp, Rng& rng);
// No cycle of length <= N and no bad subgraph with at most vertex_cap vertices.
bool event_E_holds(const Graph& g, int N, int vertex_cap, const DensityParams& dp);

DensityParams density_params_for(const ModelParams& p, int D = 100);

}  // namespace cbm
