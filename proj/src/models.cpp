#include "cbm/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace cbm {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index, std::uint64_t tag) {
    return mix64(mix64(mix64(master) ^ index) ^ (tag * 0xd1b54a32d192ed03ULL));
}

long long Rng::binomial(long long trials, double p) {
    if (trials <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    return std::binomial_distribution<long long>(trials, p)(eng_);
}

void ModelParams::validate() const {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    if (!(eps >= 0 && eps < 1)) throw std::invalid_argument("eps outside [0, 1)");
    if (!(s > 0 && s <= 1)) throw std::invalid_argument("s outside (0, 1]");
    if (p_in() > 1.0) throw std::invalid_argument("intra-block probability exceeds 1");
    if (p_out() < 0.0) throw std::invalid_argument("inter-block probability negative");
    if (!(null_density() > 0 && null_density() < 1)) throw std::invalid_argument("lambda s / n outside (0, 1)");
}

namespace {

// Draw Binomial(#pairs, prob) edges between two vertex lists (or inside
// one list when same) and place them uniformly without repetition.
void place_edges(const std::vector<int>& xs, const std::vector<int>& ys, bool same, double prob,
                 Rng& rng, std::vector<Edge>& out) {
    long long nx = static_cast<long long>(xs.size()), ny = static_cast<long long>(ys.size());
    long long pairs = same ? nx * (nx - 1) / 2 : nx * ny;
    long long m = rng.binomial(pairs, prob);
    if (m == 0) return;
    if (2 * m > pairs) {
        // Dense case: plain Bernoulli trials.
        for (long long i = 0; i < nx; ++i)
            for (long long j = same ? i + 1 : 0; j < (same ? nx : ny); ++j)
                if (rng.bernoulli(prob)) out.push_back(make_edge(xs[i], same ? xs[j] : ys[j]));
        return;
    }
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(2 * m));
    while (static_cast<long long>(seen.size()) < m) {
        int u, v;
        if (same) {
            int i = rng.uniform_int(0, static_cast<int>(nx) - 1);
            int j = rng.uniform_int(0, static_cast<int>(nx) - 2);
            if (j >= i) ++j;
            u = xs[i];
            v = xs[j];
        } else {
            u = xs[rng.uniform_int(0, static_cast<int>(nx) - 1)];
            v = ys[rng.uniform_int(0, static_cast<int>(ny) - 1)];
        }
        Edge e = make_edge(u, v);
        auto key = (static_cast<std::uint64_t>(e.first) << 32) | static_cast<std::uint32_t>(e.second);
        if (seen.insert(key).second) out.push_back(e);
    }
}

}  // namespace

SbmSample sample_sbm(const ModelParams& p, Rng& rng) {
    p.validate();
    SbmSample out;
    out.sigma.resize(p.n);
    std::vector<std::vector<int>> blocks(p.k);
    for (int i = 0; i < p.n; ++i) {
        out.sigma[i] = rng.uniform_int(0, p.k - 1);
        blocks[out.sigma[i]].push_back(i);
    }
    std::vector<Edge> es;
    for (int a = 0; a < p.k; ++a)
        for (int b = a; b < p.k; ++b) {
            if (blocks[a].empty() || blocks[b].empty()) continue;
            place_edges(blocks[a], blocks[b], a == b, a == b ? p.p_in() : p.p_out(), rng, es);
        }
    out.g = Graph(p.n, std::move(es));
    return out;
}

Graph sample_er(int n, double density, Rng& rng) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    std::vector<Edge> es;
    place_edges(all, all, true, density, rng, es);
    return Graph(n, std::move(es));
}

Graph subsample(const Graph& g, double s, Rng& rng) {
    std::vector<Edge> es;
    for (const auto& e : g.edges())
        if (rng.bernoulli(s)) es.push_back(e);
    return Graph::with_vertices(g.universe(), g.vertices(), std::move(es));
}

CorrelatedSample sample_correlated(const ModelParams& p, Rng& rng) {
    auto sbm = sample_sbm(p, rng);
    CorrelatedSample out;
    out.sigma = std::move(sbm.sigma);
    out.parent = std::move(sbm.g);
    std::vector<int> image(p.n);
    for (int i = 0; i < p.n; ++i) image[i] = i;
    std::shuffle(image.begin(), image.end(), rng.engine());
    out.pi = Permutation(std::move(image));
    out.a = subsample(out.parent, p.s, rng);
    // B_{ij} = G_{pi^-1(i), pi^-1(j)} K_{ij}.
    out.b = apply_permutation(subsample(out.parent, p.s, rng), out.pi);
    return out;
}

std::pair<Graph, Graph> sample_null(const ModelParams& p, Rng& rng) {
    p.validate();
    Graph a = sample_er(p.n, p.null_density(), rng);
    Graph b = sample_er(p.n, p.null_density(), rng);
    return {std::move(a), std::move(b)};
}

double cycle_intensity(int j, const ModelParams& p) {
    if (j < 3) throw std::invalid_argument("cycle length below 3");
    return (1.0 + (p.k - 1) * std::pow(p.eps, j)) * std::pow(p.lambda, j) / (2.0 * j);
}

DensityParams density_params_for(const ModelParams& p, int D) {
    DensityParams dp;
    dp.D = D;
    dp.n = std::pow(static_cast<double>(D), 60.0);
    dp.lambda_tilde = std::max(p.lambda, 1.0);
    dp.k = p.k;
    return dp;
}

Truncation truncate_graph(const Graph& g, int N, int vertex_cap, const DensityParams& dp, Rng& rng) {
    if (N < 3) throw std::invalid_argument("N must be at least 3");
    std::vector<std::vector<Edge>> patterns;
    for (const auto& cyc : cycle_sequences(g, N)) {
        std::vector<Edge> es;
        for (std::size_t i = 0; i < cyc.size(); ++i) es.push_back(make_edge(cyc[i], cyc[(i + 1) % cyc.size()]));
        std::sort(es.begin(), es.end());
        patterns.push_back(std::move(es));
    }
    auto bad = find_self_bad_subgraphs(g, dp, vertex_cap);
    if (bad.skipped > 0) throw std::runtime_error("bad subgraph component exceeds the search caps");
    for (const auto& k : bad.found) patterns.push_back(k.edges());
    std::sort(patterns.begin(), patterns.end());

    Truncation out;
    out.patterns = static_cast<int>(patterns.size());
    // Independent uniform choices; hitting an already removed edge is a no-op.
    std::vector<Edge> removed;
    for (const auto& pat : patterns)
        removed.push_back(pat[rng.uniform_int(0, static_cast<int>(pat.size()) - 1)]);
    std::sort(removed.begin(), removed.end());
    removed.erase(std::unique(removed.begin(), removed.end()), removed.end());
    std::vector<Edge> kept;
    std::set_difference(g.edges().begin(), g.edges().end(), removed.begin(), removed.end(),
                        std::back_inserter(kept));
    out.g_prime = Graph::with_vertices(g.universe(), g.vertices(), std::move(kept));
    out.removed = std::move(removed);

    auto left = count_cycles(out.g_prime, N);
    for (int j = 3; j <= N; ++j)
        if (left[j] != 0) throw std::logic_error("truncated graph still has a short cycle");
    if (!find_self_bad_subgraphs(out.g_prime, dp, vertex_cap).found.empty())
        throw std::logic_error("truncated graph still has a self-bad subgraph");
    return out;
}

TruncatedSample sample_truncated(const ModelParams& p, int N, int vertex_cap,
                                 const DensityParams& dp, Rng& rng) {
    if (N < 3) throw std::invalid_argument("N must be at least 3");
    auto sbm = sample_sbm(p, rng);
    TruncatedSample out;
    out.sigma = std::move(sbm.sigma);
    out.g = std::move(sbm.g);
    auto t = truncate_graph(out.g, N, vertex_cap, dp, rng);
    out.g_prime = std::move(t.g_prime);
    out.removed = std::move(t.removed);
    out.patterns = t.patterns;
    return out;
}

bool event_E_holds(const Graph& g, int N, int vertex_cap, const DensityParams& dp) {
    auto counts = count_cycles(g, N);
    for (int j = 3; j <= N; ++j)
        if (counts[j] > 0) return false;
    if (!has_bad_subgraph(g, dp)) return true;
    // A bad subgraph exists; it counts only if one fits within the cap.
    double lv = dp.log_vertex_base(), le = dp.log_edge_base();
    if (!(lv > 0 && le < 0)) return false;
    auto best = max_density_excess(g, lv / -le);
    if (static_cast<int>(best.vertices.size()) <= vertex_cap) return false;
    Graph core = two_core(g);
    for (const auto& comp : components(core)) {
        if (static_cast<int>(comp.size()) > vertex_cap) continue;
        if (has_bad_subgraph(induced_subgraph(core, comp), dp)) return false;
    }
    return true;
}

}  // namespace cbm
