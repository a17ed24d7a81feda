#include "cbm/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "cbm/trees.hpp"

namespace cbm {

namespace {

double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

double omega_value(bool same, int k) { return same ? k - 1.0 : -1.0; }

void check_rt(int r, int t) {
    if (r < 0 || r > 2 || t < 0 || t > 2) throw std::out_of_range("moment orders must lie in [0, 2]");
}

double sigma_hat(const ModelParams& p) {
    double d = p.null_density();
    return std::sqrt(d * (1.0 - d));
}

// Pair (u, v) with multiplicities in the A-side and B-side pattern.
struct PairMult {
    Edge e;
    int r = 0;
    int t = 0;
};

std::vector<PairMult> merge_pairs(const std::vector<Edge>& a_side, const std::vector<Edge>& b_side) {
    std::map<Edge, PairMult> m;
    for (const auto& e : a_side) {
        auto& x = m[e];
        x.e = e;
        x.r += 1;
    }
    for (const auto& e : b_side) {
        auto& x = m[e];
        x.e = e;
        x.t += 1;
    }
    std::vector<PairMult> out;
    for (auto& [e, x] : m) out.push_back(x);
    return out;
}

void check_pattern(const Graph& g, const ModelParams& p) {
    if (g.universe() != p.n) throw std::invalid_argument("pattern universe differs from n");
}

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) { return parent_[x] == x ? x : parent_[x] = find(parent_[x]); }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[a] = b;
        return true;
    }

private:
    std::vector<int> parent_;
};

// E_sigma of prod_e (f_diff_e + k beta_e 1{sigma_u = sigma_v}) via subsets of
// monochromatic edges: all edges of a subset F agree with probability
// k^{c(F) - |V(F)|}.
double label_average_affine(const std::vector<Edge>& es, const std::vector<double>& f_diff,
                            const std::vector<double>& k_beta, int k) {
    int m = static_cast<int>(es.size());
    if (m > 20) throw std::length_error("too many pairs for subset expansion");
    std::vector<int> verts;
    for (const auto& [u, v] : es) {
        verts.push_back(u);
        verts.push_back(v);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    auto idx = [&](int x) { return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), x) - verts.begin()); };
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        double w = 1.0;
        UnionFind uf(static_cast<int>(verts.size()));
        std::vector<char> touched(verts.size(), 0);
        int merges = 0;
        for (int i = 0; i < m; ++i) {
            if (mask >> i & 1) {
                w *= k_beta[i];
                int a = idx(es[i].first), b = idx(es[i].second);
                touched[a] = touched[b] = 1;
                if (uf.unite(a, b)) ++merges;
            } else {
                w *= f_diff[i];
            }
        }
        if (w == 0.0) continue;
        // c(F) - |V(F)| = -(number of successful merges)
        total += w * std::pow(static_cast<double>(k), -merges);
    }
    return total;
}

}  // namespace

double centered_moment(int r, int t, bool same_block, const ModelParams& p) {
    check_rt(r, t);
    double w = omega_value(same_block, p.k);
    double q = (1.0 + p.eps * w) * p.lambda / p.n;
    double c = p.null_density();
    double total = 0.0;
    for (int g = 0; g <= 1; ++g)
        for (int j = 0; j <= 1; ++j)
            for (int kk = 0; kk <= 1; ++kk) {
                double pr = (g ? q : 1.0 - q) * (j ? p.s : 1.0 - p.s) * (kk ? p.s : 1.0 - p.s);
                double a = g * j - c, b = g * kk - c;
                total += pr * ipow(a, r) * ipow(b, t);
            }
    return total;
}

double centered_moment_closed(int r, int t, bool same_block, const ModelParams& p) {
    check_rt(r, t);
    double w = omega_value(same_block, p.k);
    double lam = p.lambda, n = p.n, s = p.s;
    if (r == 0 && t == 0) return 1.0;
    if (r + t == 1) return w * p.eps * lam * s / n;
    if (r == 1 && t == 1) {
        double a = p.eps * (1.0 - 2.0 * lam / n);
        double b = 1.0 - lam / n;
        return (a * w + b) * lam * s * s / n;
    }
    double q = (1.0 + p.eps * w) * lam / n;
    double c = p.null_density();
    auto side = [&](int e) { return s * ipow(1.0 - c, e) + (1.0 - s) * ipow(-c, e); };
    return (1.0 - q) * ipow(-c, r + t) + q * side(r) * side(t);
}

double chain_expectation(int l, double eps, int k, bool endpoint_equal) {
    if (l < 1) throw std::invalid_argument("chain length must be positive");
    return 1.0 + std::pow(eps, l) * omega_value(endpoint_equal, k);
}

double chain_bruteforce(int l, double eps, int k, bool endpoint_equal) {
    if (l < 1) throw std::invalid_argument("chain length must be positive");
    std::vector<int> lab(l + 1, 0);
    lab[l] = endpoint_equal ? 0 : 1;
    long long total_labelings = 1;
    for (int i = 1; i < l; ++i) total_labelings *= k;
    double sum = 0.0;
    for (long long code = 0; code < total_labelings; ++code) {
        long long c = code;
        for (int i = 1; i < l; ++i) {
            lab[i] = static_cast<int>(c % k);
            c /= k;
        }
        double prod = 1.0;
        for (int i = 0; i < l; ++i) prod *= 1.0 + eps * omega_value(lab[i] == lab[i + 1], k);
        sum += prod;
    }
    return sum / static_cast<double>(total_labelings);
}

double exact_phi_expectation_Q(const Graph& s1, const Graph& s2, const Graph& t1, const Graph& t2,
                               const ModelParams& p) {
    for (const Graph* g : {&s1, &s2, &t1, &t2})
        if (!isolated(*g).empty()) throw std::invalid_argument("patterns must not have isolated vertices");
    double c = p.null_density();
    double sh = sigma_hat(p);
    auto moment = [&](int m) {
        return (c * ipow(1.0 - c, m) + (1.0 - c) * ipow(-c, m)) / ipow(sh, m);
    };
    double val = 1.0;
    for (const auto& side : {merge_pairs(s1.edges(), t1.edges()), merge_pairs(s2.edges(), t2.edges())})
        for (const auto& pm : side) val *= moment(pm.r + pm.t);
    return val;
}

DualPathValue exact_phi_expectation_P(const Graph& s1, const Graph& s2, const ModelParams& p) {
    p.validate();
    if (p.n > kExactPermutationLimit) throw std::length_error("exhaustive permutations need n <= 8");
    check_pattern(s1, p);
    check_pattern(s2, p);
    const int n = p.n, k = p.k;
    const double sh = sigma_hat(p);

    // Normalized kernels: [same][r][t].
    double brute[2][3][3], closed[2][3][3];
    for (int same = 0; same < 2; ++same)
        for (int r = 0; r <= 2; ++r)
            for (int t = 0; t <= 2; ++t) {
                brute[same][r][t] = centered_moment(r, t, same, p) / ipow(sh, r + t);
                closed[same][r][t] = centered_moment_closed(r, t, same, p) / ipow(sh, r + t);
            }

    const std::vector<int>& v2 = s2.vertices();
    auto mapped_s2 = [&](const std::vector<int>& img) {
        // img[i] is the preimage under pi of v2[i]
        std::vector<Edge> es;
        for (const auto& [u, v] : s2.edges()) {
            int iu = static_cast<int>(std::lower_bound(v2.begin(), v2.end(), u) - v2.begin());
            int iv = static_cast<int>(std::lower_bound(v2.begin(), v2.end(), v) - v2.begin());
            es.push_back(make_edge(img[iu], img[iv]));
        }
        return merge_pairs(s1.edges(), es);
    };

    // (a) every permutation, memoized on the preimage of V(S2).
    std::map<std::vector<int>, double> memo;
    auto brute_conditional = [&](const std::vector<PairMult>& pairs) {
        std::vector<int> verts;
        for (const auto& pm : pairs) {
            verts.push_back(pm.e.first);
            verts.push_back(pm.e.second);
        }
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        std::vector<std::pair<int, int>> local;
        for (const auto& pm : pairs)
            local.push_back({static_cast<int>(std::lower_bound(verts.begin(), verts.end(), pm.e.first) - verts.begin()),
                             static_cast<int>(std::lower_bound(verts.begin(), verts.end(), pm.e.second) - verts.begin())});
        int nv = static_cast<int>(verts.size());
        long long count = 1;
        for (int i = 0; i < nv; ++i) count *= k;
        std::vector<int> lab(nv, 0);
        double sum = 0.0;
        for (long long code = 0; code < count; ++code) {
            long long c = code;
            for (int i = 0; i < nv; ++i) {
                lab[i] = static_cast<int>(c % k);
                c /= k;
            }
            double prod = 1.0;
            for (std::size_t e = 0; e < pairs.size() && prod != 0.0; ++e)
                prod *= brute[lab[local[e].first] == lab[local[e].second]][pairs[e].r][pairs[e].t];
            sum += prod;
        }
        return sum / static_cast<double>(count);
    };
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double total_a = 0.0;
    long long perms = 0;
    do {
        // perm is pi; preimage of v under pi is pi^{-1}(v).
        std::vector<int> inv(n);
        for (int i = 0; i < n; ++i) inv[perm[i]] = i;
        std::vector<int> key;
        for (int v : v2) key.push_back(inv[v]);
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, brute_conditional(mapped_s2(key))).first;
        total_a += it->second;
        ++perms;
    } while (std::next_permutation(perm.begin(), perm.end()));

    // (b) injective maps of V(S2), closed-form kernels, subset label averaging.
    double total_b = 0.0;
    long long maps = 0;
    std::vector<int> img(v2.size());
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == v2.size()) {
            auto pairs = mapped_s2(img);
            std::vector<Edge> es;
            std::vector<double> f_diff, k_beta;
            for (const auto& pm : pairs) {
                double fe = closed[1][pm.r][pm.t], fd = closed[0][pm.r][pm.t];
                es.push_back(pm.e);
                f_diff.push_back(fd);
                k_beta.push_back(fe - fd);
            }
            total_b += label_average_affine(es, f_diff, k_beta, k);
            ++maps;
            return;
        }
        for (int x = 0; x < n; ++x) {
            if (used[x]) continue;
            used[x] = 1;
            img[pos] = x;
            self(self, pos + 1);
            used[x] = 0;
        }
    };
    rec(rec, 0);

    DualPathValue out;
    out.brute = total_a / static_cast<double>(perms);
    out.decomposed = total_b / static_cast<double>(maps);
    return out;
}

Estimate phi_expectation_P_sampled(const Graph& s1, const Graph& s2, const ModelParams& p, int samples,
                                   Rng& rng) {
    p.validate();
    check_pattern(s1, p);
    check_pattern(s2, p);
    if (samples < 2) throw std::invalid_argument("need at least two samples");
    const double sh = sigma_hat(p);
    std::vector<int> perm(p.n);
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0, sum2 = 0.0;
    for (int it = 0; it < samples; ++it) {
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        // perm plays pi^{-1}
        std::vector<Edge> es;
        for (const auto& [u, v] : s2.edges()) es.push_back(make_edge(perm[u], perm[v]));
        auto pairs = merge_pairs(s1.edges(), es);
        std::vector<Edge> ps;
        std::vector<double> f_diff, k_beta;
        for (const auto& pm : pairs) {
            double scale = ipow(sh, pm.r + pm.t);
            double fe = centered_moment_closed(pm.r, pm.t, true, p) / scale;
            double fd = centered_moment_closed(pm.r, pm.t, false, p) / scale;
            ps.push_back(pm.e);
            f_diff.push_back(fd);
            k_beta.push_back(fe - fd);
        }
        double v = label_average_affine(ps, f_diff, k_beta, p.k);
        sum += v;
        sum2 += v * v;
    }
    Estimate e;
    e.mean = sum / samples;
    double var = std::max(0.0, (sum2 - samples * e.mean * e.mean) / (samples - 1));
    e.se = std::sqrt(var / samples);
    return e;
}

double label_product_expectation(const Graph& g, int k) {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    const auto& verts = g.vertices();
    int nv = g.num_vertices();
    double count = std::pow(static_cast<double>(k), nv);
    if (count > 1e8) throw std::length_error("too many labelings");
    std::vector<std::pair<int, int>> local;
    for (const auto& [u, v] : g.edges())
        local.push_back({static_cast<int>(std::lower_bound(verts.begin(), verts.end(), u) - verts.begin()),
                         static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin())});
    std::vector<int> lab(nv, 0);
    double sum = 0.0;
    auto total = static_cast<long long>(count);
    for (long long code = 0; code < total; ++code) {
        long long c = code;
        for (int i = 0; i < nv; ++i) {
            lab[i] = static_cast<int>(c % k);
            c /= k;
        }
        double prod = 1.0;
        for (const auto& [a, b] : local) prod *= omega_value(lab[a] == lab[b], k);
        sum += prod;
    }
    return sum / count;
}

double tree_product_vanishes(const Graph& forest, int k) {
    if (!is_forest(forest)) throw std::invalid_argument("input contains a cycle");
    if (forest.num_edges() == 0) throw std::invalid_argument("forest needs at least one edge");
    return label_product_expectation(forest, k);
}

double predicted_f_mean(const ModelParams& p, int aleph) {
    return std::pow(p.s, 2 * aleph) * static_cast<double>(enumerate_trees(aleph).size());
}

double predicted_f_var_null(const ModelParams& p, int aleph) { return predicted_f_mean(p, aleph); }

}  // namespace cbm
