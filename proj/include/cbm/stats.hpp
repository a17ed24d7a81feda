#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cbm/graph.hpp"
#include "cbm/models.hpp"
#include "cbm/moments.hpp"
#include "cbm/trees.hpp"

namespace cbm {

// Entry (i,j) is edge_value if (i,j) is an edge of the base graph, else nonedge_value.
class CenteredMatrix {
public:
    CenteredMatrix(Graph base, double edge_value, double nonedge_value);
    // Normalized centering at null density d = lambda s / n.
    static CenteredMatrix from_density(Graph base, double d);
    static CenteredMatrix for_model(Graph base, const ModelParams& p) {
        return from_density(std::move(base), p.null_density());
    }

    int n() const { return base_.universe(); }
    const Graph& base_graph() const { return base_; }
    const std::vector<std::vector<int>>& adjacency() const { return adj_; }
    double edge_value() const { return edge_value_; }
    double nonedge_value() const { return nonedge_value_; }
    double entry(int i, int j) const { return base_.has_edge(i, j) ? edge_value_ : nonedge_value_; }

private:
    Graph base_;
    std::vector<std::vector<int>> adj_;
    double edge_value_;
    double nonedge_value_;
};

double psi(const Graph& s, const CenteredMatrix& x);

constexpr double kExactMapBudget = 2e8;

// (1/Aut) * sum over injective maps V(H) -> [n] of the entry product.
double w_exact(const TreeShape& shape, const CenteredMatrix& x, double budget = kExactMapBudget);

enum class MessageForm { split, naive };

// One coloring: sum over colorful embeddings, rescaled by the colorful
// probability and divided by Aut. Unbiased for w_exact.
double color_coding_once(const TreeShape& shape, const CenteredMatrix& x, const std::vector<int>& colors,
                         MessageForm form = MessageForm::split);
Estimate w_color_coding(const TreeShape& shape, const CenteredMatrix& x, int reps, Rng& rng,
                        MessageForm form = MessageForm::split);

// Injective homomorphism counts of forests into a fixed graph. A forest is
// given by the sorted codes of its nontrivial component trees; counts of
// multi-component forests use inclusion-exclusion over overlap graphs.
class ForestCounter {
public:
    explicit ForestCounter(const Graph& g);
    long double count(const std::vector<std::string>& forest);
    long double tree_count(const std::string& code);

private:
    struct Embeddings {
        int size = 0;              // tree vertex count
        std::vector<int> flat;     // count * size images
        std::vector<std::vector<int>> by_vertex;
        long long num() const { return size ? static_cast<long long>(flat.size()) / size : 0; }
    };
    const Embeddings& embeddings(const std::string& code);
    long double overlap_tuples(const std::vector<std::string>& members, std::uint32_t edge_mask);
    // For each embedding of `parent`, the number of embeddings of `child` meeting it.
    const std::vector<long double>& hit_counts(const std::string& child, const std::string& parent);

    std::vector<std::vector<int>> adj_;
    int n_;
    std::map<std::string, std::unique_ptr<Embeddings>> emb_;
    std::map<std::vector<std::string>, long double> forest_cache_;
    std::map<std::pair<std::vector<std::string>, std::uint32_t>, long double> overlap_cache_;
    std::map<std::pair<std::string, std::string>, std::vector<long double>> hit_cache_;
};

// Exact W via the expansion of each entry as c0 + c1 * A_ij over edge subsets.
double w_expansion(const TreeShape& shape, const CenteredMatrix& x, ForestCounter& counter);

enum class TreeMethod { exact, color_coding, brute_force };
std::string to_string(TreeMethod m);
TreeMethod tree_method_from_string(const std::string& s);

struct ShapeTerm {
    int shape_id = 0;
    double w_a = 0.0;
    double w_b = 0.0;
    double a_coeff = 0.0;
};

struct TreeStatResult {
    double value = 0.0;
    std::vector<ShapeTerm> per_shape;
    TreeMethod method = TreeMethod::exact;
    int reps = 0;
};

TreeStatResult f_tree_stat(const Graph& a, const Graph& b, const ModelParams& p, int aleph, TreeMethod method,
                           int reps, Rng& rng);
// Double sum over labeled copies (S1, S2) of the normalized centered
// polynomials; tiny instances only.
double f_tree_stat_direct(const Graph& a, const Graph& b, const ModelParams& p, int aleph);

// Smallest R with sum_H (g_H^2/R^2 + 2 g_H/R) <= 0.04 |T|, g_H = v^v/(v! Aut_H),
// v = aleph + 1. Keeps the added standard deviation of the estimated
// statistic within 20% of s^aleph sqrt|T|.
int default_reps(int aleph);

// Planted iff value >= C s^{2 aleph} |T_aleph| (inclusive).
bool threshold_test(double value, const ModelParams& p, int aleph, double C);
double threshold_value(const ModelParams& p, int aleph, double C);

// (C_ell(A) - m0) / sqrt(m0), m0 = (lambda s)^ell / (2 ell).
double cycle_count_test(const Graph& a, int ell, const ModelParams& p);

}  // namespace cbm
