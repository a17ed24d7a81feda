#include "cbm/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace cbm {

CenteredMatrix::CenteredMatrix(Graph base, double edge_value, double nonedge_value)
    : base_(std::move(base)), edge_value_(edge_value), nonedge_value_(nonedge_value) {
    adj_ = base_.adjacency();
}

CenteredMatrix CenteredMatrix::from_density(Graph base, double d) {
    if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("density outside (0, 1)");
    double sd = std::sqrt(d * (1.0 - d));
    return CenteredMatrix(std::move(base), (1.0 - d) / sd, -d / sd);
}

double psi(const Graph& s, const CenteredMatrix& x) {
    double v = 1.0;
    for (const auto& [a, b] : s.edges()) {
        if (a >= x.n() || b >= x.n()) throw std::out_of_range("pattern vertex outside [n]");
        v *= x.entry(a, b);
    }
    return v;
}

namespace {

std::vector<int> parents_of(const TreeShape& shape) {
    std::vector<int> par(shape.aleph + 1, -1);
    for (const auto& [u, v] : shape.edges) par[v] = u;
    return par;
}

double falling(double n, int r) {
    double f = 1.0;
    for (int i = 0; i < r; ++i) f *= n - i;
    return f;
}

}  // namespace

double w_exact(const TreeShape& shape, const CenteredMatrix& x, double budget) {
    const int n = x.n(), v = shape.aleph + 1;
    if (falling(n, v) > budget) throw std::length_error("exact embedding sum exceeds the budget");
    std::vector<double> dense(static_cast<std::size_t>(n) * n, x.nonedge_value());
    for (const auto& [a, b] : x.base_graph().edges()) dense[a * n + b] = dense[b * n + a] = x.edge_value();
    auto par = parents_of(shape);
    std::vector<int> img(v);
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int i, double acc) -> double {
        if (i == v) return acc;
        double sum = 0.0;
        for (int w = 0; w < n; ++w) {
            if (used[w]) continue;
            double f = i == 0 ? 1.0 : dense[img[par[i]] * n + w];
            used[w] = 1;
            img[i] = w;
            sum += self(self, i + 1, acc * f);
            used[w] = 0;
        }
        return sum;
    };
    return rec(rec, 0, 1.0) / static_cast<double>(shape.aut);
}

double color_coding_once(const TreeShape& shape, const CenteredMatrix& x, const std::vector<int>& colors,
                         MessageForm form) {
    const int n = x.n(), K = shape.aleph + 1;
    if (static_cast<int>(colors.size()) != n) throw std::invalid_argument("one color per vertex required");
    const int S = 1 << K;
    const double c0 = x.nonedge_value(), c1 = x.edge_value() - x.nonedge_value();
    const auto& adj = x.adjacency();
    auto par = parents_of(shape);
    std::vector<std::vector<int>> kids(K);
    for (int i = 1; i < K; ++i) kids[par[i]].push_back(i);
    std::vector<std::vector<int>> by_size(K + 1);
    for (int m = 0; m < S; ++m) by_size[std::popcount(static_cast<unsigned>(m))].push_back(m);

    std::vector<std::vector<double>> D(K);
    std::vector<int> size(K, 1);
    std::vector<double> M(static_cast<std::size_t>(n) * S), G(S);
    for (int i = K - 1; i >= 0; --i) {
        auto& Di = D[i];
        Di.assign(static_cast<std::size_t>(n) * S, 0.0);
        for (int v = 0; v < n; ++v) Di[v * S + (1 << colors[v])] = 1.0;
        for (int j : kids[i]) {
            const auto& Dj = D[j];
            const auto& Ts = by_size[size[j]];
            std::fill(M.begin(), M.end(), 0.0);
            if (form == MessageForm::split) {
                for (int T : Ts) {
                    double g = 0.0;
                    for (int u = 0; u < n; ++u) g += Dj[u * S + T];
                    G[T] = g;
                }
                for (int v = 0; v < n; ++v)
                    for (int T : Ts) {
                        double nb = 0.0;
                        for (int u : adj[v]) nb += Dj[u * S + T];
                        M[v * S + T] = c0 * (G[T] - Dj[v * S + T]) + c1 * nb;
                    }
            } else {
                for (int v = 0; v < n; ++v)
                    for (int T : Ts) {
                        double acc = 0.0;
                        for (int u = 0; u < n; ++u)
                            if (u != v) acc += x.entry(v, u) * Dj[u * S + T];
                        M[v * S + T] = acc;
                    }
            }
            std::vector<double> next(static_cast<std::size_t>(n) * S, 0.0);
            for (int v = 0; v < n; ++v)
                for (int A : by_size[size[i]]) {
                    double da = Di[v * S + A];
                    if (da == 0.0) continue;
                    for (int T : Ts)
                        if (!(A & T)) next[v * S + (A | T)] += da * M[v * S + T];
                }
            Di.swap(next);
            size[i] += size[j];
            D[j].clear();
            D[j].shrink_to_fit();
        }
    }
    double total = 0.0;
    for (int v = 0; v < n; ++v) total += D[0][v * S + (S - 1)];
    // colorful probability K!/K^K
    double pc = 1.0;
    for (int i = 1; i <= K; ++i) pc *= static_cast<double>(i) / K;
    return total / pc / static_cast<double>(shape.aut);
}

Estimate w_color_coding(const TreeShape& shape, const CenteredMatrix& x, int reps, Rng& rng, MessageForm form) {
    if (reps < 1) throw std::invalid_argument("reps must be at least 1");
    const int K = shape.aleph + 1;
    std::vector<int> colors(x.n());
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        for (auto& c : colors) c = rng.uniform_int(0, K - 1);
        double y = color_coding_once(shape, x, colors, form);
        sum += y;
        sum2 += y * y;
    }
    Estimate e;
    e.mean = sum / reps;
    if (reps > 1) {
        double var = std::max(0.0, (sum2 - reps * e.mean * e.mean) / (reps - 1));
        e.se = std::sqrt(var / reps);
    }
    return e;
}

namespace {

std::mutex registry_mu;
std::map<std::string, std::vector<Edge>>& tree_registry() {
    static std::map<std::string, std::vector<Edge>> reg;
    return reg;
}

std::vector<Edge> registered_edges(const std::string& code) {
    std::lock_guard<std::mutex> lock(registry_mu);
    auto it = tree_registry().find(code);
    if (it == tree_registry().end()) throw std::out_of_range("unregistered tree code");
    return it->second;
}

struct ExpansionTerm {
    int f_edges = 0;
    int covered = 0;  // vertices touched by the edge subset
    double mult = 0.0;
    std::vector<std::string> forest;
};

// Edge subsets of a shape grouped by (|F|, covered vertices, forest class).
const std::vector<ExpansionTerm>& shape_expansion(const TreeShape& shape) {
    static std::mutex mu;
    static std::map<std::string, std::vector<ExpansionTerm>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(shape.code);
    if (it != cache.end()) return it->second;
    const int v = shape.aleph + 1, m = shape.aleph;
    std::map<std::tuple<int, int, std::vector<std::string>>, double> groups;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> comp(v);
        std::iota(comp.begin(), comp.end(), 0);
        auto find = [&](int a) {
            while (comp[a] != a) a = comp[a] = comp[comp[a]];
            return a;
        };
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1) comp[find(shape.edges[e].first)] = find(shape.edges[e].second);
        std::map<int, std::vector<int>> members;
        for (int x = 0; x < v; ++x) members[find(x)].push_back(x);
        std::vector<std::string> forest;
        int covered = 0;
        for (const auto& [root, vs] : members) {
            if (vs.size() < 2) continue;
            covered += static_cast<int>(vs.size());
            std::vector<std::vector<int>> adj(vs.size());
            auto loc = [&](int x) { return static_cast<int>(std::lower_bound(vs.begin(), vs.end(), x) - vs.begin()); };
            for (int e = 0; e < m; ++e) {
                if (!(mask >> e & 1)) continue;
                auto [a, b] = shape.edges[e];
                if (find(a) != root) continue;
                adj[loc(a)].push_back(loc(b));
                adj[loc(b)].push_back(loc(a));
            }
            auto tc = canonicalize_tree(adj);
            {
                std::lock_guard<std::mutex> rl(registry_mu);
                tree_registry().emplace(tc.code, tc.edges);
            }
            forest.push_back(tc.code);
        }
        std::sort(forest.begin(), forest.end());
        groups[{std::popcount(mask), covered, forest}] += 1.0;
    }
    std::vector<ExpansionTerm> terms;
    for (auto& [key, mult] : groups) {
        ExpansionTerm t;
        t.f_edges = std::get<0>(key);
        t.covered = std::get<1>(key);
        t.forest = std::get<2>(key);
        t.mult = mult;
        terms.push_back(std::move(t));
    }
    return cache.emplace(shape.code, std::move(terms)).first->second;
}

}  // namespace

ForestCounter::ForestCounter(const Graph& g) : adj_(g.adjacency()), n_(g.universe()) {}

const ForestCounter::Embeddings& ForestCounter::embeddings(const std::string& code) {
    auto it = emb_.find(code);
    if (it != emb_.end()) return *it->second;
    auto edges = registered_edges(code);
    auto e = std::make_unique<Embeddings>();
    const int m = static_cast<int>(edges.size()) + 1;
    e->size = m;
    std::vector<int> par(m, -1);
    for (const auto& [a, b] : edges) par[b] = a;
    std::vector<int> img(m);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == m) {
            e->flat.insert(e->flat.end(), img.begin(), img.end());
            return;
        }
        for (int w : adj_[img[par[i]]]) {
            bool clash = false;
            for (int j = 0; j < i && !clash; ++j) clash = img[j] == w;
            if (clash) continue;
            img[i] = w;
            self(self, i + 1);
        }
    };
    for (int v = 0; v < n_; ++v) {
        if (adj_[v].empty()) continue;
        img[0] = v;
        rec(rec, 1);
    }
    e->by_vertex.assign(n_, {});
    long long cnt = e->num();
    for (long long id = 0; id < cnt; ++id)
        for (int j = 0; j < m; ++j) e->by_vertex[e->flat[id * m + j]].push_back(static_cast<int>(id));
    return *emb_.emplace(code, std::move(e)).first->second;
}

long double ForestCounter::tree_count(const std::string& code) {
    return static_cast<long double>(embeddings(code).num());
}

const std::vector<long double>& ForestCounter::hit_counts(const std::string& child, const std::string& parent) {
    auto key = std::make_pair(child, parent);
    auto it = hit_cache_.find(key);
    if (it != hit_cache_.end()) return it->second;
    const auto& ec = embeddings(child);
    const auto& ep = embeddings(parent);
    std::vector<int> stamp(static_cast<std::size_t>(ec.num()), -1);
    std::vector<long double> out(static_cast<std::size_t>(ep.num()), 0.0L);
    for (long long id = 0; id < ep.num(); ++id) {
        int hits = 0;
        for (int x = 0; x < ep.size; ++x)
            for (int cid : ec.by_vertex[ep.flat[id * ep.size + x]]) {
                if (stamp[cid] == id) continue;
                stamp[cid] = static_cast<int>(id);
                ++hits;
            }
        out[id] = hits;
    }
    return hit_cache_.emplace(key, std::move(out)).first->second;
}

// Tuples of embeddings, one per member, whose images intersect along every
// pair in edge_mask (pairs ordered (0,1),(0,2),...,(1,2),...). The mask is
// connected over the members.
long double ForestCounter::overlap_tuples(const std::vector<std::string>& members, std::uint32_t edge_mask) {
    const int g = static_cast<int>(members.size());
    if (g == 1) return tree_count(members[0]);

    auto pair_bit = [g](int i, int j) {
        if (i > j) std::swap(i, j);
        return i * (2 * g - i - 1) / 2 + (j - i - 1);
    };
    // The count is invariant under relabeling members; key on the
    // lexicographically smallest relabeling.
    std::vector<int> perm(g);
    std::iota(perm.begin(), perm.end(), 0);
    std::pair<std::vector<std::string>, std::uint32_t> key{members, edge_mask};
    do {
        std::vector<std::string> codes(g);
        for (int i = 0; i < g; ++i) codes[perm[i]] = members[i];
        std::uint32_t m = 0;
        for (int i = 0; i < g; ++i)
            for (int j = i + 1; j < g; ++j)
                if (edge_mask >> pair_bit(i, j) & 1) m |= 1u << pair_bit(perm[i], perm[j]);
        std::pair<std::vector<std::string>, std::uint32_t> cand{std::move(codes), m};
        if (cand < key) key = std::move(cand);
    } while (std::next_permutation(perm.begin(), perm.end()));
    auto it = overlap_cache_.find(key);
    if (it != overlap_cache_.end()) return it->second;

    std::vector<std::vector<char>> linked(g, std::vector<char>(g, 0));
    std::vector<int> degree(g, 0);
    int links = 0;
    for (int i = 0; i < g; ++i)
        for (int j = i + 1; j < g; ++j)
            if (edge_mask >> pair_bit(i, j) & 1) {
                linked[i][j] = linked[j][i] = 1;
                ++degree[i];
                ++degree[j];
                ++links;
            }
    std::vector<const Embeddings*> E(g);
    for (int i = 0; i < g; ++i) E[i] = &embeddings(members[i]);
    auto image = [&](int mbr, long long id) { return &E[mbr]->flat[static_cast<std::size_t>(id) * E[mbr]->size]; };

    // Distinct embeddings of member c meeting an image; safe to nest.
    std::vector<std::vector<int>> stamp(g);
    std::vector<int> gen(g, 0);
    for (int i = 0; i < g; ++i) stamp[i].assign(static_cast<std::size_t>(E[i]->num()), -1);
    auto collect = [&](int c, const int* img, int sz, std::vector<int>& out) {
        out.clear();
        int gc = ++gen[c];
        for (int x = 0; x < sz; ++x)
            for (int id : E[c]->by_vertex[img[x]]) {
                if (stamp[c][id] == gc) continue;
                stamp[c][id] = gc;
                out.push_back(id);
            }
    };

    // Fold pendant members (degree one in the overlap graph) into weights
    // on their neighbor, repeatedly; what remains is the 2-core, or a
    // single member when the overlap graph is a tree.
    std::vector<std::vector<long double>> weight(g);
    std::vector<char> alive(g, 1);
    int remaining = g;
    bool changed = true;
    while (changed && remaining > 1) {
        changed = false;
        for (int c = 0; c < g && remaining > 1; ++c) {
            if (!alive[c] || degree[c] != 1) continue;
            int p = -1;
            for (int j = 0; j < g; ++j)
                if (alive[j] && linked[c][j]) p = j;
            auto& wp = weight[p];
            if (wp.empty()) wp.assign(static_cast<std::size_t>(E[p]->num()), 1.0L);
            if (weight[c].empty()) {
                const auto& h = hit_counts(members[c], members[p]);
                for (std::size_t id = 0; id < wp.size(); ++id) wp[id] *= h[id];
            } else {
                std::vector<int> lst;
                for (long long id = 0; id < E[p]->num(); ++id) {
                    collect(c, image(p, id), E[p]->size, lst);
                    long double sum = 0.0L;
                    for (int cid : lst) sum += weight[c][cid];
                    wp[id] *= sum;
                }
            }
            weight[c].clear();
            alive[c] = 0;
            --degree[p];
            degree[c] = 0;
            --remaining;
            changed = true;
        }
    }
    auto w = [&](int mbr, long long id) { return weight[mbr].empty() ? 1.0L : weight[mbr][id]; };
    std::vector<int> core;
    for (int i = 0; i < g; ++i)
        if (alive[i]) core.push_back(i);

    long double v = 0.0L;
    if (core.size() == 1) {
        int c = core[0];
        for (long long id = 0; id < E[c]->num(); ++id) v += w(c, id);
    } else {
        // A separator pair {x, y} whose two other members u, v are each
        // linked to both and not to each other factorizes the count.
        int sx = -1, sy = -1, su = -1, sv = -1;
        if (core.size() == 4) {
            for (int a = 0; a < 4 && sx < 0; ++a)
                for (int b = a + 1; b < 4 && sx < 0; ++b) {
                    std::vector<int> rest;
                    for (int c = 0; c < 4; ++c)
                        if (c != a && c != b) rest.push_back(core[c]);
                    int x = core[a], y = core[b], u = rest[0], q = rest[1];
                    if (linked[u][x] && linked[u][y] && linked[q][x] && linked[q][y] && !linked[u][q]) {
                        sx = x;
                        sy = y;
                        su = u;
                        sv = q;
                    }
                }
        }
        if (sx >= 0) {
            if (E[sy]->num() < E[sx]->num()) std::swap(sx, sy);
            const bool xy = linked[sx][sy];
            std::vector<long double> acc_u(static_cast<std::size_t>(E[sy]->num()), 0.0L), acc_v(acc_u.size(), 0.0L);
            std::vector<char> near(acc_u.size(), 0);
            std::vector<int> touched, lst, lst2, direct;
            for (long long ex = 0; ex < E[sx]->num(); ++ex) {
                long double wx = w(sx, ex);
                if (wx == 0.0L) continue;
                touched.clear();
                for (int pass = 0; pass < 2; ++pass) {
                    int mid = pass == 0 ? su : sv;
                    auto& acc = pass == 0 ? acc_u : acc_v;
                    collect(mid, image(sx, ex), E[sx]->size, lst);
                    for (int em : lst) {
                        long double wm = w(mid, em);
                        collect(sy, image(mid, em), E[mid]->size, lst2);
                        for (int ey : lst2) {
                            if (acc_u[ey] == 0.0L && acc_v[ey] == 0.0L && !near[ey]) touched.push_back(ey);
                            near[ey] = 1;
                            acc[ey] += wm;
                        }
                    }
                }
                if (xy) {
                    collect(sy, image(sx, ex), E[sx]->size, direct);
                    for (int ey : direct) near[ey] = 2;
                }
                long double sum = 0.0L;
                for (int ey : touched) {
                    if (!xy || near[ey] == 2) sum += w(sy, ey) * acc_u[ey] * acc_v[ey];
                    acc_u[ey] = acc_v[ey] = 0.0L;
                    near[ey] = 0;
                }
                if (xy)
                    for (int ey : direct) near[ey] = 0;
                v += wx * sum;
            }
        } else {
            // Weighted backtracking over the core in BFS order.
            int root = core[0];
            for (int c : core)
                if (E[c]->num() < E[root]->num()) root = c;
            std::vector<int> order{root}, parent(g, -1);
            std::vector<char> seen(g, 0);
            seen[root] = 1;
            for (std::size_t h = 0; h < order.size(); ++h)
                for (int j : core)
                    if (linked[order[h]][j] && !seen[j]) {
                        seen[j] = 1;
                        parent[j] = order[h];
                        order.push_back(j);
                    }
            const int depth = static_cast<int>(order.size());
            std::vector<const int*> img(g, nullptr);
            std::vector<std::vector<int>> cand(depth);
            // vertex marks of each placed member's image
            std::vector<std::vector<int>> vmark(g);
            std::vector<int> vgen(g, 0);
            for (int c : core) vmark[c].assign(n_, 0);
            auto place = [&](int mbr, const int* im) {
                img[mbr] = im;
                int gc = ++vgen[mbr];
                for (int x = 0; x < E[mbr]->size; ++x) vmark[mbr][im[x]] = gc;
            };
            auto meets = [&](int mbr, const int* im, int other) {
                for (int x = 0; x < E[mbr]->size; ++x)
                    if (vmark[other][im[x]] == vgen[other]) return true;
                return false;
            };
            auto rec = [&](auto&& self, int pos) -> long double {
                int mbr = order[pos];
                long double total = 0.0L;
                if (pos == 0) {
                    for (long long id = 0; id < E[mbr]->num(); ++id) {
                        long double wm = w(mbr, id);
                        if (wm == 0.0L) continue;
                        place(mbr, image(mbr, id));
                        total += wm * self(self, 1);
                    }
                    return total;
                }
                int p = parent[mbr];
                auto& mine_list = cand[pos];
                collect(mbr, img[p], E[p]->size, mine_list);
                for (int id : mine_list) {
                    const int* mine = image(mbr, id);
                    bool ok = true;
                    for (int q = 0; q < pos && ok; ++q) {
                        int other = order[q];
                        if (other == p || !linked[mbr][other]) continue;
                        ok = meets(mbr, mine, other);
                    }
                    if (!ok) continue;
                    long double wm = w(mbr, id);
                    if (pos + 1 == depth) {
                        total += wm;
                    } else {
                        place(mbr, mine);
                        total += wm * self(self, pos + 1);
                    }
                }
                return total;
            };
            v = rec(rec, 0);
        }
    }
    (void)links;
    overlap_cache_.emplace(std::move(key), v);
    return v;
}

long double ForestCounter::count(const std::vector<std::string>& forest) {
    if (forest.empty()) return 1.0L;
    if (forest.size() == 1) return tree_count(forest[0]);
    auto it = forest_cache_.find(forest);
    if (it != forest_cache_.end()) return it->second;
    const int r = static_cast<int>(forest.size());
    if (r > 6) throw std::length_error("too many forest components");
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) pairs.push_back({i, j});
    const int np = static_cast<int>(pairs.size());
    // Injective maps = tuples with pairwise disjoint images; expand
    // prod over pairs (1 - overlap) over subsets of pairs.
    long double total = 0.0L;
    for (std::uint32_t mask = 0; mask < (1u << np); ++mask) {
        std::vector<int> comp(r);
        std::iota(comp.begin(), comp.end(), 0);
        auto find = [&](int a) {
            while (comp[a] != a) a = comp[a] = comp[comp[a]];
            return a;
        };
        for (int b = 0; b < np; ++b)
            if (mask >> b & 1) comp[find(pairs[b].first)] = find(pairs[b].second);
        long double prod = 1.0L;
        for (int c = 0; c < r && prod != 0.0L; ++c) {
            if (find(c) != c) continue;
            std::vector<int> mem;
            for (int i = 0; i < r; ++i)
                if (find(i) == c) mem.push_back(i);
            std::vector<std::string> codes;
            for (int i : mem) codes.push_back(forest[i]);
            std::uint32_t local = 0;
            int lb = 0;
            for (std::size_t x = 0; x < mem.size(); ++x)
                for (std::size_t y = x + 1; y < mem.size(); ++y, ++lb) {
                    int gb = 0;
                    for (int b = 0; b < np; ++b)
                        if (pairs[b].first == mem[x] && pairs[b].second == mem[y]) gb = b;
                    if (mask >> gb & 1) local |= 1u << lb;
                }
            prod *= overlap_tuples(codes, local);
        }
        total += (std::popcount(mask) % 2 ? -prod : prod);
    }
    forest_cache_.emplace(forest, total);
    return total;
}

double w_expansion(const TreeShape& shape, const CenteredMatrix& x, ForestCounter& counter) {
    const auto& terms = shape_expansion(shape);
    const long double c0 = x.nonedge_value(), c1 = x.edge_value() - x.nonedge_value();
    const int v = shape.aleph + 1, n = x.n();
    long double sum = 0.0L;
    for (const auto& t : terms) {
        long double w = t.mult;
        for (int i = 0; i < shape.aleph - t.f_edges; ++i) w *= c0;
        for (int i = 0; i < t.f_edges; ++i) w *= c1;
        for (int i = 0; i < v - t.covered; ++i) w *= static_cast<long double>(n - t.covered - i);
        if (w == 0.0L) continue;
        sum += w * counter.count(t.forest);
    }
    return static_cast<double>(sum / static_cast<long double>(shape.aut));
}

std::string to_string(TreeMethod m) {
    switch (m) {
        case TreeMethod::exact: return "exact";
        case TreeMethod::color_coding: return "cc";
        case TreeMethod::brute_force: return "brute";
    }
    return "exact";
}

TreeMethod tree_method_from_string(const std::string& s) {
    if (s == "exact") return TreeMethod::exact;
    if (s == "cc" || s == "color_coding") return TreeMethod::color_coding;
    if (s == "brute") return TreeMethod::brute_force;
    throw std::invalid_argument("unknown method: " + s);
}

TreeStatResult f_tree_stat(const Graph& a, const Graph& b, const ModelParams& p, int aleph, TreeMethod method,
                           int reps, Rng& rng) {
    p.validate();
    if (a.universe() != p.n || b.universe() != p.n) throw std::invalid_argument("graph size differs from n");
    const auto& shapes = enumerate_trees(aleph);
    CenteredMatrix xa = CenteredMatrix::for_model(a, p), xb = CenteredMatrix::for_model(b, p);
    TreeStatResult res;
    res.method = method;
    if (method == TreeMethod::color_coding) res.reps = reps > 0 ? reps : default_reps(aleph);
    std::unique_ptr<ForestCounter> ca, cb;
    if (method == TreeMethod::exact) {
        ca = std::make_unique<ForestCounter>(a);
        cb = std::make_unique<ForestCounter>(b);
    }
    for (std::size_t id = 0; id < shapes.size(); ++id) {
        const auto& h = shapes[id];
        ShapeTerm st;
        st.shape_id = static_cast<int>(id);
        st.a_coeff = a_coefficient(h, p.n, p.s);
        switch (method) {
            case TreeMethod::exact:
                st.w_a = w_expansion(h, xa, *ca);
                st.w_b = w_expansion(h, xb, *cb);
                break;
            case TreeMethod::color_coding:
                st.w_a = w_color_coding(h, xa, res.reps, rng).mean;
                st.w_b = w_color_coding(h, xb, res.reps, rng).mean;
                break;
            case TreeMethod::brute_force:
                st.w_a = w_exact(h, xa);
                st.w_b = w_exact(h, xb);
                break;
        }
        res.value += st.a_coeff * st.w_a * st.w_b;
        res.per_shape.push_back(st);
    }
    return res;
}

double f_tree_stat_direct(const Graph& a, const Graph& b, const ModelParams& p, int aleph) {
    p.validate();
    if (p.n > 10 || aleph > 2) throw std::length_error("direct double sum limited to n <= 10, aleph <= 2");
    CenteredMatrix xa = CenteredMatrix::for_model(a, p), xb = CenteredMatrix::for_model(b, p);
    double total = 0.0;
    for (const auto& h : enumerate_trees(aleph)) {
        // distinct labeled copies as edge sets
        std::set<std::vector<Edge>> copies;
        const int v = h.aleph + 1;
        std::vector<int> img(v);
        std::vector<char> used(p.n, 0);
        auto rec = [&](auto&& self, int i) -> void {
            if (i == v) {
                std::vector<Edge> es;
                for (const auto& [x, y] : h.edges) es.push_back(make_edge(img[x], img[y]));
                std::sort(es.begin(), es.end());
                copies.insert(es);
                return;
            }
            for (int w = 0; w < p.n; ++w) {
                if (used[w]) continue;
                used[w] = 1;
                img[i] = w;
                self(self, i + 1);
                used[w] = 0;
            }
        };
        rec(rec, 0);
        std::vector<double> pa, pb;
        for (const auto& es : copies) {
            Graph s = Graph::edge_induced(p.n, es);
            pa.push_back(psi(s, xa));
            pb.push_back(psi(s, xb));
        }
        double inner = 0.0;
        for (double x : pa)
            for (double y : pb) inner += x * y;
        total += a_coefficient(h, p.n, p.s) * inner;
    }
    return total;
}

int default_reps(int aleph) {
    const auto& shapes = enumerate_trees(aleph);
    const int v = aleph + 1;
    double base = std::pow(static_cast<double>(v), v);
    for (int i = 2; i <= v; ++i) base /= i;
    auto excess = [&](double R) {
        double tot = 0.0;
        for (const auto& h : shapes) {
            double g = base / static_cast<double>(h.aut);
            tot += g * g / (R * R) + 2.0 * g / R;
        }
        return tot;
    };
    const double target = 0.04 * static_cast<double>(shapes.size());
    long long hi = 1;
    while (excess(static_cast<double>(hi)) > target) hi *= 2;
    long long lo = hi / 2;
    while (lo + 1 < hi) {
        long long mid = (lo + hi) / 2;
        if (excess(static_cast<double>(mid)) > target) lo = mid;
        else hi = mid;
    }
    return static_cast<int>(hi);
}

double threshold_value(const ModelParams& p, int aleph, double C) {
    if (!(C > 0.0 && C < 1.0)) throw std::invalid_argument("C outside (0, 1)");
    return C * predicted_f_mean(p, aleph);
}

bool threshold_test(double value, const ModelParams& p, int aleph, double C) {
    return value >= threshold_value(p, aleph, C);
}

double cycle_count_test(const Graph& a, int ell, const ModelParams& p) {
    if (ell < 3) throw std::invalid_argument("cycle length below 3");
    double m0 = std::pow(p.lambda * p.s, ell) / (2.0 * ell);
    double c = static_cast<double>(count_cycles(a, ell)[ell]);
    return (c - m0) / std::sqrt(m0);
}

}  // namespace cbm
