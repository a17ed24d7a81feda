#pragma once

#include "cbm/graph.hpp"
#include "cbm/models.hpp"

namespace cbm {

struct LabelKernel {
    double omega_equal;
    double omega_diff = -1.0;

    explicit LabelKernel(int k) : omega_equal(k - 1.0) {}
    double operator()(int a, int b) const { return a == b ? omega_equal : omega_diff; }
};

// E[Abar^r Bbar^t | sigma, pi] for one vertex pair, by summing over the 8
// outcomes of (G, J, K). Abar = A - lambda s / n, unnormalized.
double centered_moment(int r, int t, bool same_block, const ModelParams& p);
// Closed forms; the first-order and mixed cases use the compact a, b form.
double centered_moment_closed(int r, int t, bool same_block, const ModelParams& p);

double chain_expectation(int l, double eps, int k, bool endpoint_equal);
double chain_bruteforce(int l, double eps, int k, bool endpoint_equal);

// E_Q[phi_{S1,S2} phi_{T1,T2}] for normalized centered polynomials.
double exact_phi_expectation_Q(const Graph& s1, const Graph& s2, const Graph& t1, const Graph& t2,
                               const ModelParams& p);

struct DualPathValue {
    double brute = 0.0;        // all permutations, all labelings, 8-outcome kernels
    double decomposed = 0.0;   // injective maps of V(S2), closed forms, label averaging
};
constexpr int kExactPermutationLimit = 8;
// E_P[phi_{S1,S2}] exactly at tiny n.
DualPathValue exact_phi_expectation_P(const Graph& s1, const Graph& s2, const ModelParams& p);

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
};
// Monte Carlo over pi for larger n; the conditional expectation is exact.
Estimate phi_expectation_P_sampled(const Graph& s1, const Graph& s2, const ModelParams& p, int samples,
                                   Rng& rng);

// E_sigma[prod over edges of omega(sigma_i, sigma_j)] by brute force over k^|V|.
double label_product_expectation(const Graph& g, int k);
// Same, restricted to forests; a graph with a cycle is rejected.
double tree_product_vanishes(const Graph& forest, int k);

double predicted_f_mean(const ModelParams& p, int aleph);
double predicted_f_var_null(const ModelParams& p, int aleph);

}  // namespace cbm
