#include "cbm/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cbm {

Edge make_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("self-loop");
    return u < v ? Edge{u, v} : Edge{v, u};
}

Graph::Graph(int n) : n_(n) {
    if (n < 0) throw std::invalid_argument("negative universe");
    vertices_.resize(n);
    std::iota(vertices_.begin(), vertices_.end(), 0);
}

Graph::Graph(int n, std::vector<Edge> edges) : Graph(n) {
    edges_ = std::move(edges);
    normalize();
}

Graph Graph::with_vertices(int n, std::vector<int> vertices, std::vector<Edge> edges) {
    Graph g;
    g.n_ = n;
    g.vertices_ = std::move(vertices);
    g.edges_ = std::move(edges);
    g.normalize();
    return g;
}

Graph Graph::edge_induced(int n, std::vector<Edge> edges) {
    std::vector<int> vs;
    vs.reserve(2 * edges.size());
    for (const auto& [u, v] : edges) {
        vs.push_back(u);
        vs.push_back(v);
    }
    return with_vertices(n, std::move(vs), std::move(edges));
}

void Graph::normalize() {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    if (!vertices_.empty() && (vertices_.front() < 0 || vertices_.back() >= n_))
        throw std::invalid_argument("vertex outside universe");
    for (auto& e : edges_) e = make_edge(e.first, e.second);
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("duplicate edge");
    for (const auto& [u, v] : edges_)
        if (!has_vertex(u) || !has_vertex(v))
            throw std::invalid_argument("edge endpoint outside vertex set");
}

bool Graph::has_vertex(int v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Graph::has_edge(int u, int v) const {
    if (u == v) return false;
    return std::binary_search(edges_.begin(), edges_.end(), make_edge(u, v));
}

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(n_);
    for (const auto& [u, v] : edges_) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> d(n_, 0);
    for (const auto& [u, v] : edges_) {
        ++d[u];
        ++d[v];
    }
    return d;
}

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
    std::vector<char> seen(image_.size(), 0);
    for (int x : image_) {
        if (x < 0 || x >= size() || seen[x]) throw std::invalid_argument("not a permutation");
        seen[x] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(image_.size());
    for (int i = 0; i < size(); ++i) inv[image_[i]] = i;
    return Permutation(std::move(inv));
}

Permutation compose(const Permutation& p, const Permutation& q) {
    if (p.size() != q.size()) throw std::invalid_argument("permutation size mismatch");
    std::vector<int> im(p.size());
    for (int i = 0; i < p.size(); ++i) im[i] = p(q(i));
    return Permutation(std::move(im));
}

int excess(const Graph& g) { return g.num_edges() - g.num_vertices(); }

std::vector<int> leaves(const Graph& g) {
    auto d = g.degrees();
    std::vector<int> out;
    for (int v : g.vertices())
        if (d[v] == 1) out.push_back(v);
    return out;
}

std::vector<int> isolated(const Graph& g) {
    auto d = g.degrees();
    std::vector<int> out;
    for (int v : g.vertices())
        if (d[v] == 0) out.push_back(v);
    return out;
}

namespace {

void check_universe(const Graph& a, const Graph& b) {
    if (a.universe() != b.universe()) throw std::invalid_argument("universe mismatch");
}

std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> set_inter(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

template <class F>
std::vector<Edge> edge_op(const Graph& a, const Graph& b, F op) {
    std::vector<Edge> out;
    op(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end(),
       std::back_inserter(out));
    return out;
}

}  // namespace

Graph graph_union(const Graph& a, const Graph& b) {
    check_universe(a, b);
    auto es = edge_op(a, b, [](auto... xs) { return std::set_union(xs...); });
    return Graph::with_vertices(a.universe(), set_union(a.vertices(), b.vertices()), std::move(es));
}

Graph graph_intersection(const Graph& a, const Graph& b) {
    check_universe(a, b);
    auto es = edge_op(a, b, [](auto... xs) { return std::set_intersection(xs...); });
    return Graph::with_vertices(a.universe(), set_inter(a.vertices(), b.vertices()), std::move(es));
}

Graph edge_intersection(const Graph& a, const Graph& b) {
    check_universe(a, b);
    return Graph::edge_induced(a.universe(),
                               edge_op(a, b, [](auto... xs) { return std::set_intersection(xs...); }));
}

Graph edge_difference(const Graph& a, const Graph& b) {
    check_universe(a, b);
    return Graph::edge_induced(a.universe(),
                               edge_op(a, b, [](auto... xs) { return std::set_difference(xs...); }));
}

Graph symmetric_difference(const Graph& a, const Graph& b) {
    check_universe(a, b);
    return Graph::edge_induced(
        a.universe(), edge_op(a, b, [](auto... xs) { return std::set_symmetric_difference(xs...); }));
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& vertex_set) {
    std::vector<int> a(vertex_set);
    std::sort(a.begin(), a.end());
    auto vs = set_inter(g.vertices(), a);
    std::vector<char> in(g.universe(), 0);
    for (int v : vs) in[v] = 1;
    std::vector<Edge> es;
    for (const auto& e : g.edges())
        if (in[e.first] && in[e.second]) es.push_back(e);
    return Graph::with_vertices(g.universe(), std::move(vs), std::move(es));
}

Graph delete_edges_within(const Graph& g, const std::vector<int>& vertex_set) {
    std::vector<char> in(g.universe(), 0);
    for (int v : vertex_set) in[v] = 1;
    std::vector<Edge> es;
    for (const auto& e : g.edges())
        if (!(in[e.first] && in[e.second])) es.push_back(e);
    return Graph::with_vertices(g.universe(), g.vertices(), std::move(es));
}

bool is_subgraph(const Graph& h, const Graph& s) {
    if (h.universe() != s.universe()) return false;
    return std::includes(s.vertices().begin(), s.vertices().end(), h.vertices().begin(),
                         h.vertices().end()) &&
           std::includes(s.edges().begin(), s.edges().end(), h.edges().begin(), h.edges().end());
}

bool ltimes(const Graph& h, const Graph& s) {
    check_universe(h, s);
    if (!is_subgraph(h, s)) return false;
    auto is = isolated(s);
    auto ih = isolated(h);
    return std::includes(ih.begin(), ih.end(), is.begin(), is.end());
}

std::vector<std::vector<int>> components(const Graph& g) {
    auto adj = g.adjacency();
    std::vector<char> seen(g.universe(), 0);
    std::vector<std::vector<int>> out;
    for (int s : g.vertices()) {
        if (seen[s]) continue;
        std::vector<int> comp{s};
        seen[s] = 1;
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (int w : adj[comp[i]])
                if (!seen[w]) {
                    seen[w] = 1;
                    comp.push_back(w);
                }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

bool is_forest(const Graph& g) {
    return g.num_edges() == g.num_vertices() - static_cast<int>(components(g).size());
}

bool is_connected(const Graph& g) { return components(g).size() <= 1; }

std::vector<std::vector<int>> cycle_sequences(const Graph& g, int max_len) {
    if (max_len < 3) throw std::invalid_argument("cycle length bound below 3");
    auto adj = g.adjacency();
    std::vector<std::vector<int>> out;
    std::vector<int> path;
    std::vector<char> on(g.universe(), 0);
    std::function<void(int, int)> dfs = [&](int start, int v) {
        for (int w : adj[v]) {
            if (w == start && path.size() >= 3 && path[1] < path.back()) {
                out.push_back(path);
            } else if (w > start && !on[w] && static_cast<int>(path.size()) < max_len) {
                on[w] = 1;
                path.push_back(w);
                dfs(start, w);
                path.pop_back();
                on[w] = 0;
            }
        }
    };
    for (int s : g.vertices()) {
        path = {s};
        on[s] = 1;
        dfs(s, s);
        on[s] = 0;
    }
    return out;
}

std::vector<long long> count_cycles(const Graph& g, int max_len) {
    if (max_len < 3) throw std::invalid_argument("cycle length bound below 3");
    auto adj = g.adjacency();
    std::vector<long long> counts(max_len + 1, 0);
    std::vector<int> path;
    std::vector<char> on(g.universe(), 0);
    std::function<void(int, int)> dfs = [&](int start, int v) {
        for (int w : adj[v]) {
            if (w == start && path.size() >= 3 && path[1] < path.back()) {
                ++counts[path.size()];
            } else if (w > start && !on[w] && static_cast<int>(path.size()) < max_len) {
                on[w] = 1;
                path.push_back(w);
                dfs(start, w);
                path.pop_back();
                on[w] = 0;
            }
        }
    };
    // Only vertices on the 2-core can lie on cycles.
    Graph core = two_core(g);
    for (int s : core.vertices()) {
        path = {s};
        on[s] = 1;
        dfs(s, s);
        on[s] = 0;
    }
    return counts;
}

namespace {

Graph cycle_graph(int n, const std::vector<int>& seq) {
    std::vector<Edge> es;
    for (std::size_t i = 0; i < seq.size(); ++i)
        es.push_back(make_edge(seq[i], seq[(i + 1) % seq.size()]));
    return Graph::edge_induced(n, std::move(es));
}

}  // namespace

std::vector<Graph> cycles_up_to(const Graph& g, int max_len) {
    std::vector<Graph> out;
    for (const auto& seq : cycle_sequences(g, max_len)) out.push_back(cycle_graph(g.universe(), seq));
    return out;
}

bool is_independent_cycle(const Graph& g, const Graph& cycle) {
    std::vector<char> in(g.universe(), 0);
    for (int v : cycle.vertices()) in[v] = 1;
    for (const auto& e : g.edges()) {
        if (!(in[e.first] || in[e.second])) continue;
        if (!cycle.has_edge(e.first, e.second)) return false;
    }
    return true;
}

std::vector<Graph> independent_cycles(const Graph& g, int m) {
    if (m < 3) throw std::invalid_argument("cycle length below 3");
    std::vector<Graph> out;
    for (const auto& seq : cycle_sequences(g, m)) {
        if (static_cast<int>(seq.size()) != m) continue;
        Graph c = cycle_graph(g.universe(), seq);
        if (is_independent_cycle(g, c)) out.push_back(std::move(c));
    }
    return out;
}

Graph two_core(const Graph& g) {
    auto deg = g.degrees();
    auto adj = g.adjacency();
    std::vector<char> removed(g.universe(), 0);
    std::vector<int> stack;
    for (int v : g.vertices())
        if (deg[v] <= 1) stack.push_back(v);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (removed[v]) continue;
        removed[v] = 1;
        for (int w : adj[v])
            if (!removed[w] && --deg[w] <= 1) stack.push_back(w);
    }
    std::vector<Edge> es;
    for (const auto& e : g.edges())
        if (!removed[e.first] && !removed[e.second]) es.push_back(e);
    return Graph::edge_induced(g.universe(), std::move(es));
}

// Isomorphism machinery: color refinement, individualization, and
// orbit pruning through explicit automorphism search.
namespace {

struct Dense {
    int v = 0;
    std::vector<std::vector<char>> adj;
    std::vector<std::vector<int>> nbr;
};

Dense to_dense(const Graph& g) {
    if (g.num_vertices() > kIsoVertexLimit)
        throw std::length_error("graph exceeds isomorphism vertex limit");
    Dense d;
    d.v = g.num_vertices();
    std::vector<int> idx(g.universe(), -1);
    for (int i = 0; i < d.v; ++i) idx[g.vertices()[i]] = i;
    d.adj.assign(d.v, std::vector<char>(d.v, 0));
    d.nbr.assign(d.v, {});
    for (const auto& [u, w] : g.edges()) {
        int a = idx[u], b = idx[w];
        d.adj[a][b] = d.adj[b][a] = 1;
        d.nbr[a].push_back(b);
        d.nbr[b].push_back(a);
    }
    return d;
}

// Equitable refinement of an ordered coloring. Colors stay ordered by an
// isomorphism-invariant signature so that the result is label-free.
std::vector<int> refine(const Dense& d, std::vector<int> color) {
    while (true) {
        std::vector<std::pair<std::vector<int>, int>> sig(d.v);
        for (int i = 0; i < d.v; ++i) {
            std::vector<int> s{color[i]};
            std::vector<int> nc;
            for (int w : d.nbr[i]) nc.push_back(color[w]);
            std::sort(nc.begin(), nc.end());
            s.insert(s.end(), nc.begin(), nc.end());
            sig[i] = {std::move(s), i};
        }
        std::vector<std::vector<int>> keys;
        for (auto& p : sig) keys.push_back(p.first);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        std::vector<int> next(d.v);
        for (int i = 0; i < d.v; ++i)
            next[i] = static_cast<int>(std::lower_bound(keys.begin(), keys.end(), sig[i].first) -
                                       keys.begin());
        std::vector<int> old(color);
        std::sort(old.begin(), old.end());
        auto before = std::unique(old.begin(), old.end()) - old.begin();
        auto after = static_cast<long>(keys.size());
        color = std::move(next);
        if (after == before) return color;
    }
}

std::vector<int> individualize(const std::vector<int>& color, int v) {
    std::vector<int> c(color.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = 2 * color[i] + 1;
    c[v] = 2 * color[v];
    return c;
}

bool discrete(const std::vector<int>& color) {
    std::vector<int> c(color);
    std::sort(c.begin(), c.end());
    return std::adjacent_find(c.begin(), c.end()) == c.end();
}

// First non-singleton cell in color order.
std::vector<int> target_cell(const std::vector<int>& color) {
    std::map<int, std::vector<int>> cells;
    for (std::size_t i = 0; i < color.size(); ++i) cells[color[i]].push_back(static_cast<int>(i));
    for (auto& [c, members] : cells)
        if (members.size() > 1) return members;
    return {};
}

// Is there an automorphism mapping vertex i to f[i] for every i with
// f[i] >= 0? Colors of the two sides (c1 for the source, c2 for the image)
// must correspond.
bool extend_iso(const Dense& d, std::vector<int>& f, std::vector<char>& used,
                const std::vector<int>& c1, const std::vector<int>& c2) {
    int next = -1;
    for (int i = 0; i < d.v; ++i)
        if (f[i] < 0) {
            next = i;
            break;
        }
    if (next < 0) return true;
    for (int w = 0; w < d.v; ++w) {
        if (used[w] || c2[w] != c1[next]) continue;
        bool ok = true;
        for (int i = 0; i < d.v && ok; ++i)
            if (f[i] >= 0 && d.adj[next][i] != d.adj[w][f[i]]) ok = false;
        if (!ok) continue;
        f[next] = w;
        used[w] = 1;
        if (extend_iso(d, f, used, c1, c2)) return true;
        f[next] = -1;
        used[w] = 0;
    }
    return false;
}

// Exists an automorphism fixing `fixed` pointwise and mapping a to b.
bool exists_automorphism(const Dense& d, const std::vector<int>& fixed, int a, int b) {
    std::vector<int> base(d.v, 0);
    for (std::size_t t = 0; t < fixed.size(); ++t) base = individualize(base, fixed[t]);
    base = refine(d, base);
    auto c1 = refine(d, individualize(base, a));
    auto c2 = refine(d, individualize(base, b));
    auto s1 = c1, s2 = c2;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    if (s1 != s2) return false;
    std::vector<int> f(d.v, -1);
    std::vector<char> used(d.v, 0);
    for (int x : fixed) {
        f[x] = x;
        used[x] = 1;
    }
    f[a] = b;
    if (used[b] && b != a) return false;
    used[b] = 1;
    return extend_iso(d, f, used, c1, c2);
}

// Orbit representatives of `cell` under the pointwise stabilizer of `fixed`.
std::vector<int> orbit_reps(const Dense& d, const std::vector<int>& fixed,
                            const std::vector<int>& cell) {
    std::vector<int> reps;
    for (int v : cell) {
        bool found = false;
        for (int r : reps)
            if (exists_automorphism(d, fixed, r, v)) {
                found = true;
                break;
            }
        if (!found) reps.push_back(v);
    }
    return reps;
}

std::string code_of(const Dense& d, const std::vector<int>& order) {
    std::string s = std::to_string(d.v) + ":";
    for (int i = 0; i < d.v; ++i)
        for (int j = i + 1; j < d.v; ++j) s.push_back(d.adj[order[i]][order[j]] ? '1' : '0');
    return s;
}

void search(const Dense& d, std::vector<int>& fixed, const std::vector<int>& color,
            std::string& best, std::vector<int>& best_order) {
    if (discrete(color)) {
        std::vector<int> order(d.v);
        for (int i = 0; i < d.v; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return color[a] < color[b]; });
        auto code = code_of(d, order);
        if (best.empty() || code < best) {
            best = code;
            best_order = order;
        }
        return;
    }
    auto cell = target_cell(color);
    for (int v : orbit_reps(d, fixed, cell)) {
        fixed.push_back(v);
        search(d, fixed, refine(d, individualize(color, v)), best, best_order);
        fixed.pop_back();
    }
}

}  // namespace

std::vector<int> canonical_order(const Graph& g) {
    Dense d = to_dense(g);
    if (d.v == 0) return {};
    std::vector<int> fixed;
    std::string best;
    std::vector<int> order;
    search(d, fixed, refine(d, std::vector<int>(d.v, 0)), best, order);
    std::vector<int> out;
    for (int i : order) out.push_back(g.vertices()[i]);
    return out;
}

std::string canonical_form(const Graph& g) {
    Dense d = to_dense(g);
    if (d.v == 0) return "0:";
    std::vector<int> fixed;
    std::string best;
    std::vector<int> order;
    search(d, fixed, refine(d, std::vector<int>(d.v, 0)), best, order);
    return best;
}

std::uint64_t automorphism_count(const Graph& g) {
    Dense d = to_dense(g);
    // Orbit-stabilizer along the chain of pointwise stabilizers.
    std::uint64_t total = 1;
    std::vector<int> fixed;
    for (int v = 0; v < d.v; ++v) {
        std::uint64_t orbit = 0;
        for (int w = 0; w < d.v; ++w)
            if (std::find(fixed.begin(), fixed.end(), w) == fixed.end() &&
                exists_automorphism(d, fixed, v, w))
                ++orbit;
        total *= orbit;
        fixed.push_back(v);
    }
    return total;
}

bool isomorphic(const Graph& a, const Graph& b) {
    return a.num_vertices() == b.num_vertices() && a.num_edges() == b.num_edges() &&
           canonical_form(a) == canonical_form(b);
}

Graph apply_permutation(const Graph& g, const Permutation& p) {
    if (p.size() != g.universe()) throw std::invalid_argument("permutation size mismatch");
    std::vector<int> vs;
    vs.reserve(g.num_vertices());
    for (int v : g.vertices()) vs.push_back(p(v));
    std::vector<Edge> es;
    es.reserve(g.num_edges());
    for (const auto& [u, v] : g.edges()) es.push_back(make_edge(p(u), p(v)));
    return Graph::with_vertices(g.universe(), std::move(vs), std::move(es));
}

// Text format: "n=<int>; u-v,u-v,..." with an optional "; V=a,b,..." suffix
// when the vertex set is not the whole universe.
std::string to_text(const Graph& g) {
    std::ostringstream os;
    os << "n=" << g.universe() << ";";
    bool first = true;
    for (const auto& [u, v] : g.edges()) {
        os << (first ? " " : ",") << u << "-" << v;
        first = false;
    }
    if (!g.full_vertex_set()) {
        os << "; V=";
        for (std::size_t i = 0; i < g.vertices().size(); ++i)
            os << (i ? "," : "") << g.vertices()[i];
    }
    return os.str();
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

int parse_int(const std::string& s) {
    std::size_t pos = 0;
    int x = std::stoi(trim(s), &pos);
    if (pos != trim(s).size()) throw std::invalid_argument("bad integer: " + s);
    return x;
}

}  // namespace

Graph from_text(const std::string& s) {
    auto parts = split(s, ';');
    if (parts.empty()) throw std::invalid_argument("empty graph text");
    auto head = trim(parts[0]);
    if (head.rfind("n=", 0) != 0) throw std::invalid_argument("graph text must start with n=");
    int n = parse_int(head.substr(2));
    std::vector<Edge> es;
    std::vector<int> vs;
    bool explicit_v = false;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        auto p = trim(parts[i]);
        if (p.rfind("V=", 0) == 0) {
            explicit_v = true;
            for (const auto& t : split(p.substr(2), ','))
                if (!trim(t).empty()) vs.push_back(parse_int(t));
            continue;
        }
        for (const auto& t : split(p, ',')) {
            auto tok = trim(t);
            if (tok.empty()) continue;
            auto dash = tok.find('-');
            if (dash == std::string::npos) throw std::invalid_argument("bad edge token: " + tok);
            es.push_back(make_edge(parse_int(tok.substr(0, dash)), parse_int(tok.substr(dash + 1))));
        }
    }
    if (explicit_v) return Graph::with_vertices(n, std::move(vs), std::move(es));
    return Graph(n, std::move(es));
}

nlohmann::json to_json(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.universe();
    auto es = nlohmann::json::array();
    for (const auto& [u, v] : g.edges()) es.push_back({u, v});
    j["edges"] = es;
    if (!g.full_vertex_set()) j["vertices"] = g.vertices();
    return j;
}

Graph from_json(const nlohmann::json& j) {
    int n = j.at("n").get<int>();
    std::vector<Edge> es;
    for (const auto& e : j.at("edges")) es.push_back(make_edge(e.at(0).get<int>(), e.at(1).get<int>()));
    if (j.contains("vertices"))
        return Graph::with_vertices(n, j.at("vertices").get<std::vector<int>>(), std::move(es));
    return Graph(n, std::move(es));
}

}  // namespace cbm
