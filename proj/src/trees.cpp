#include "cbm/trees.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace cbm {

namespace {

struct Rooted {
    std::string code;
    std::uint64_t aut = 1;
};

std::uint64_t factorial(int m) {
    std::uint64_t f = 1;
    for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

Rooted rooted_code(const std::vector<std::vector<int>>& adj, int v, int parent) {
    std::vector<Rooted> kids;
    for (int w : adj[v])
        if (w != parent) kids.push_back(rooted_code(adj, w, v));
    std::sort(kids.begin(), kids.end(), [](const Rooted& a, const Rooted& b) { return a.code < b.code; });
    Rooted r;
    r.code = "(";
    for (std::size_t i = 0; i < kids.size(); ++i) {
        r.code += kids[i].code;
        r.aut *= kids[i].aut;
    }
    r.code += ")";
    for (std::size_t i = 0; i < kids.size();) {
        std::size_t j = i;
        while (j < kids.size() && kids[j].code == kids[i].code) ++j;
        r.aut *= factorial(static_cast<int>(j - i));
        i = j;
    }
    return r;
}

std::vector<int> centers(const std::vector<std::vector<int>>& adj) {
    int v = static_cast<int>(adj.size());
    if (v <= 2) {
        std::vector<int> c(v);
        for (int i = 0; i < v; ++i) c[i] = i;
        return c;
    }
    std::vector<int> deg(v);
    std::vector<int> layer;
    for (int i = 0; i < v; ++i) {
        deg[i] = static_cast<int>(adj[i].size());
        if (deg[i] <= 1) layer.push_back(i);
    }
    int remaining = v;
    while (remaining > 2) {
        remaining -= static_cast<int>(layer.size());
        std::vector<int> next;
        for (int x : layer)
            for (int w : adj[x])
                if (--deg[w] == 1) next.push_back(w);
        layer = std::move(next);
    }
    std::sort(layer.begin(), layer.end());
    return layer;
}

void label_preorder(const std::vector<std::vector<int>>& adj, int v, int parent, int my_label,
                    int& next_label, std::vector<Edge>& out) {
    std::vector<std::pair<std::string, int>> kids;
    for (int w : adj[v])
        if (w != parent) kids.push_back({rooted_code(adj, w, v).code, w});
    std::sort(kids.begin(), kids.end());
    for (const auto& [code, w] : kids) {
        int lw = next_label++;
        out.push_back({my_label, lw});
        label_preorder(adj, w, v, lw, next_label, out);
    }
}

}  // namespace

TreeCanon canonicalize_tree(const std::vector<std::vector<int>>& adj) {
    int v = static_cast<int>(adj.size());
    if (v == 0) throw std::invalid_argument("empty tree");
    auto cs = centers(adj);
    int root = cs[0];
    Rooted best = rooted_code(adj, root, -1);
    std::uint64_t aut = best.aut;
    if (cs.size() == 2) {
        Rooted other = rooted_code(adj, cs[1], -1);
        if (other.code < best.code) {
            best = other;
            root = cs[1];
        }
        // The central edge can be flipped iff both halves agree.
        if (rooted_code(adj, cs[0], cs[1]).code == rooted_code(adj, cs[1], cs[0]).code) aut *= 2;
    }
    TreeCanon tc;
    tc.code = best.code;
    tc.aut = aut;
    int next_label = 1;
    label_preorder(adj, root, -1, 0, next_label, tc.edges);
    for (auto& e : tc.edges) e = make_edge(e.first, e.second);
    std::sort(tc.edges.begin(), tc.edges.end());
    return tc;
}

TreeCanon canonicalize_tree(const Graph& tree) {
    if (!is_connected(tree) || !is_forest(tree)) throw std::invalid_argument("not a tree");
    std::map<int, int> idx;
    for (int i = 0; i < tree.num_vertices(); ++i) idx[tree.vertices()[i]] = i;
    std::vector<std::vector<int>> adj(tree.num_vertices());
    for (const auto& [u, w] : tree.edges()) {
        adj[idx[u]].push_back(idx[w]);
        adj[idx[w]].push_back(idx[u]);
    }
    return canonicalize_tree(adj);
}

const std::vector<TreeShape>& enumerate_trees(int aleph) {
    if (aleph < 1 || aleph > kMaxAleph) throw std::out_of_range("aleph outside [1, 14]");
    static std::mutex mu;
    static std::vector<std::vector<TreeShape>> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (cache.empty()) {
        TreeShape edge;
        edge.edges = {{0, 1}};
        edge.aleph = 1;
        edge.aut = 2;
        edge.code = canonicalize_tree(std::vector<std::vector<int>>{{1}, {0}}).code;
        cache.push_back({});
        cache.push_back({edge});
    }
    // Grow by attaching a leaf at every vertex, dedup by canonical code.
    while (static_cast<int>(cache.size()) <= aleph) {
        int a = static_cast<int>(cache.size());
        std::map<std::string, TreeShape> found;
        for (const auto& t : cache.back()) {
            for (int at = 0; at < t.aleph + 1; ++at) {
                std::vector<std::vector<int>> adj(a + 1);
                for (const auto& [u, w] : t.edges) {
                    adj[u].push_back(w);
                    adj[w].push_back(u);
                }
                adj[at].push_back(a);
                adj[a].push_back(at);
                auto tc = canonicalize_tree(adj);
                if (found.count(tc.code)) continue;
                TreeShape s;
                s.edges = tc.edges;
                s.aleph = a;
                s.aut = tc.aut;
                s.code = tc.code;
                found.emplace(tc.code, std::move(s));
            }
        }
        std::vector<TreeShape> level;
        for (auto& [code, s] : found) level.push_back(std::move(s));
        cache.push_back(std::move(level));
    }
    return cache[aleph];
}

double otter_estimate(int aleph) {
    return std::pow(static_cast<double>(enumerate_trees(aleph).size()), 1.0 / aleph);
}

double log_a_coefficient(const TreeShape& shape, long long n, double s) {
    if (n <= shape.aleph + 1) throw std::invalid_argument("n must exceed aleph + 1");
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("s outside (0, 1]");
    double la = shape.aleph * std::log(s) + std::log(static_cast<double>(shape.aut));
    for (int i = 0; i <= shape.aleph; ++i) la -= std::log(static_cast<double>(n - i));
    return la;
}

double a_coefficient(const TreeShape& shape, long long n, double s) {
    if (n <= shape.aleph + 1) throw std::invalid_argument("n must exceed aleph + 1");
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("s outside [0, 1]");
    double a = std::pow(s, shape.aleph) * static_cast<double>(shape.aut);
    for (int i = 0; i <= shape.aleph; ++i) a /= static_cast<double>(n - i);
    return a;
}

double labeled_copy_count(long long n, int v, std::uint64_t aut) {
    double c = 1.0;
    for (int i = 0; i < v; ++i) c *= static_cast<double>(n - i);
    return c / static_cast<double>(aut);
}

int default_aleph(long long n) {
    double ln = std::log(static_cast<double>(n));
    double lln = std::log(ln);
    if (!(lln > 0.0)) return 1;
    return std::max(1, static_cast<int>(std::ceil(ln / (3.0 * lln))));
}

}  // namespace cbm
