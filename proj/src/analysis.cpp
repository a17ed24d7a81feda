#include "cbm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/push_relabel_max_flow.hpp>

namespace cbm {

namespace {
constexpr double kTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void DensityParams::validate() const {
    if (!(n >= 3.0)) throw std::invalid_argument("density n must be at least 3");
    if (D < 100) throw std::invalid_argument("D must be at least 100");
    if (!(lambda_tilde >= 1.0)) throw std::invalid_argument("lambda_tilde must be max(lambda, 1)");
    if (k < 2) throw std::invalid_argument("k must be at least 2");
}

double DensityParams::log_vertex_base() const {
    return std::log(2.0) + 2.0 * std::log(lambda_tilde) + 2.0 * std::log(static_cast<double>(k)) +
           std::log(n) - 50.0 * std::log(static_cast<double>(D));
}

double DensityParams::log_edge_base() const {
    return std::log(1000.0) + 20.0 * std::log(lambda_tilde) + 20.0 * std::log(static_cast<double>(k)) +
           50.0 * std::log(static_cast<double>(D)) - std::log(n);
}

double DensityParams::bad_threshold() const { return -std::log(std::log(n)); }

double phi_log(const Graph& h, const DensityParams& p) {
    return h.num_vertices() * p.log_vertex_base() + h.num_edges() * p.log_edge_base();
}

bool is_bad(const Graph& h, const DensityParams& p) { return phi_log(h, p) < p.bad_threshold(); }

namespace {

struct ComponentMin {
    double all = 0.0;
    double proper = kInf;
};

// Exhaustive scan over vertex subsets W of one component. For fixed W the
// extremal edge count is all of E(h_W) or none, depending on the sign of
// the edge coefficient.
ComponentMin component_min(const Graph& h, const std::vector<int>& comp, double lv, double le) {
    int m = static_cast<int>(comp.size());
    if (m > kSubgraphVertexLimit) throw std::length_error("component too large for subgraph search");
    std::map<int, int> idx;
    for (int i = 0; i < m; ++i) idx[comp[i]] = i;
    std::vector<std::uint32_t> adj(m, 0);
    for (const auto& [u, v] : h.edges()) {
        auto iu = idx.find(u);
        if (iu == idx.end()) continue;
        int a = iu->second, b = idx.at(v);
        adj[a] |= 1u << b;
        adj[b] |= 1u << a;
    }
    ComponentMin r;
    r.all = 0.0;
    r.proper = 0.0;  // empty subgraph
    std::uint32_t full = (1u << m) - 1;
    std::function<void(int, std::uint32_t, int, int)> rec = [&](int i, std::uint32_t mask, int nv,
                                                                int ne) {
        if (i == m) {
            if (nv == 0) return;
            double val = nv * lv + (le < 0 ? ne * le : 0.0);
            r.all = std::min(r.all, val);
            if (mask != full) {
                r.proper = std::min(r.proper, val);
            } else if (ne >= 1) {
                double alt = le < 0 ? nv * lv + (ne - 1) * le : nv * lv;
                r.proper = std::min(r.proper, alt);
            }
            return;
        }
        rec(i + 1, mask, nv, ne);
        rec(i + 1, mask | (1u << i), nv + 1, ne + __builtin_popcount(adj[i] & mask));
    };
    rec(0, 0, 0, 0);
    return r;
}

}  // namespace

double min_proper_subgraph_phi_log(const Graph& h, const DensityParams& p) {
    double lv = p.log_vertex_base(), le = p.log_edge_base();
    auto comps = components(h);
    if (comps.empty()) return kInf;
    std::vector<ComponentMin> mins;
    double sum_all = 0.0;
    for (const auto& c : comps) {
        mins.push_back(component_min(h, c, lv, le));
        sum_all += mins.back().all;
    }
    double best = kInf;
    for (const auto& m : mins) best = std::min(best, sum_all - m.all + m.proper);
    return best;
}

DensestResult max_density_excess(const Graph& g, double rho) {
    using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
    using FlowGraph = boost::adjacency_list<
        boost::vecS, boost::vecS, boost::directedS, boost::no_property,
        boost::property<boost::edge_capacity_t, double,
                        boost::property<boost::edge_residual_capacity_t, double,
                                        boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;
    DensestResult out;
    if (g.num_edges() == 0 || rho < 0) {
        if (rho < 0) {
            out.value = g.num_edges() - rho * g.num_vertices();
            out.vertices = g.vertices();
        }
        return out;
    }
    int nv = g.num_vertices(), ne = g.num_edges();
    std::vector<int> idx(g.universe(), -1);
    for (int i = 0; i < nv; ++i) idx[g.vertices()[i]] = i;
    // Nodes: 0 source, 1 sink, 2.. edge nodes, then vertex nodes.
    FlowGraph fg(2 + ne + nv);
    auto cap = boost::get(boost::edge_capacity, fg);
    auto rev = boost::get(boost::edge_reverse, fg);
    auto res = boost::get(boost::edge_residual_capacity, fg);
    auto arc = [&](int u, int v, double c) {
        auto e = boost::add_edge(u, v, fg).first;
        auto r = boost::add_edge(v, u, fg).first;
        cap[e] = c;
        cap[r] = 0.0;
        rev[e] = r;
        rev[r] = e;
    };
    const double big = static_cast<double>(ne) + 1.0;
    for (int i = 0; i < ne; ++i) {
        const auto& [u, v] = g.edges()[i];
        arc(0, 2 + i, 1.0);
        arc(2 + i, 2 + ne + idx[u], big);
        arc(2 + i, 2 + ne + idx[v], big);
    }
    for (int i = 0; i < nv; ++i) arc(2 + ne + i, 1, rho);
    double flow = boost::push_relabel_max_flow(fg, 0, 1);
    out.value = ne - flow;
    if (out.value < kTol) {
        out.value = 0.0;
        return out;
    }
    std::vector<char> seen(2 + ne + nv, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (auto [it, end] = boost::out_edges(u, fg); it != end; ++it) {
            int w = static_cast<int>(boost::target(*it, fg));
            if (!seen[w] && res[*it] > kTol) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    for (int i = 0; i < nv; ++i)
        if (seen[2 + ne + i]) out.vertices.push_back(g.vertices()[i]);
    return out;
}

double min_subgraph_phi_log(const Graph& h, const DensityParams& p) {
    double lv = p.log_vertex_base(), le = p.log_edge_base();
    if (le >= 0) return std::min(0.0, h.num_vertices() * lv);
    if (lv <= 0) return h.num_vertices() * lv + h.num_edges() * le;
    // log Phi(K) = -|le| (|E(K)| - rho |V(K)|) with rho = lv / |le|.
    return le * max_density_excess(h, lv / -le).value;
}

bool has_bad_subgraph(const Graph& h, const DensityParams& p) {
    return min_subgraph_phi_log(h, p) < p.bad_threshold();
}

bool is_self_bad(const Graph& h, const DensityParams& p) {
    if (!is_bad(h, p)) return false;
    return phi_log(h, p) < min_proper_subgraph_phi_log(h, p) - kTol;
}

bool is_admissible(const Graph& h, const DensityParams& p, int N) {
    if (N >= 3 && !cycle_sequences(h, N).empty()) return false;
    return !has_bad_subgraph(h, p);
}

SelfBadSearch find_self_bad_subgraphs(const Graph& g, const DensityParams& p, int vertex_cap,
                                      int edge_cap) {
    SelfBadSearch out;
    if (!has_bad_subgraph(g, p)) return out;
    double lv = p.log_vertex_base(), le = p.log_edge_base();
    if (!(lv > 0 && lv + le > 0))
        throw std::domain_error("self-bad search needs the sparse regime of the density functional");
    // Self-bad graphs are leafless without isolated vertices here, so they
    // live inside the 2-core.
    Graph core = two_core(g);
    for (const auto& comp : components(core)) {
        Graph c = induced_subgraph(core, comp);
        if (!has_bad_subgraph(c, p)) continue;
        if (c.num_vertices() > vertex_cap || c.num_edges() > edge_cap) {
            ++out.skipped;
            continue;
        }
        int m = c.num_edges();
        for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
            std::vector<Edge> es;
            for (int i = 0; i < m; ++i)
                if (mask >> i & 1u) es.push_back(c.edges()[i]);
            Graph k = Graph::edge_induced(g.universe(), std::move(es));
            if (!leaves(k).empty() || !is_bad(k, p)) continue;
            if (is_self_bad(k, p)) out.found.push_back(std::move(k));
        }
    }
    return out;
}

int choose_N(double delta, double eps, int k) {
    if (!(delta > 0 && delta < 0.1)) throw std::invalid_argument("delta outside (0, 0.1)");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps outside (0, 1)");
    const double sa = std::sqrt(kOtterAlpha);
    for (int N = static_cast<int>(std::ceil(2.0 / delta));; ++N) {
        double a = std::pow(1.0 - delta / 2.0, N);
        bool c1 = (sa - delta) * (1.0 + std::pow(eps, N) * k) <= sa - delta / 2.0;
        bool c2 = 10.0 * k * std::pow(1.0 - delta, N) <= a;
        bool c3 = (sa - delta / 4.0) * (1.0 + a) * (1.0 + a) <= sa - delta / 8.0;
        bool c4 = a * (N + 1.0) <= 1.0;
        if (c1 && c2 && c3 && c4) return N;
        if (N > 1000000) throw std::runtime_error("choose_N scan did not terminate");
    }
}

std::vector<int> Path::endpoints() const {
    if (walk.empty()) return {};
    if (closed()) return {walk.front()};
    std::vector<int> e{walk.front(), walk.back()};
    std::sort(e.begin(), e.end());
    return e;
}

std::vector<int> Path::interior() const {
    if (walk.size() < 3) return {};
    return std::vector<int>(walk.begin() + 1, walk.end() - 1);
}

std::vector<Edge> Path::edges() const {
    std::vector<Edge> es;
    for (std::size_t i = 0; i + 1 < walk.size(); ++i) es.push_back(make_edge(walk[i], walk[i + 1]));
    return es;
}

std::vector<Graph> Decomposition::cycle_graphs(int n) const {
    std::vector<Graph> out;
    for (const auto& c : cycles) {
        std::vector<Edge> es;
        for (std::size_t i = 0; i < c.size(); ++i) es.push_back(make_edge(c[i], c[(i + 1) % c.size()]));
        out.push_back(Graph::edge_induced(n, std::move(es)));
    }
    return out;
}

int path_budget(const Graph& h, const Graph& s) {
    int outside = 0;
    for (int v : leaves(s))
        if (!h.has_vertex(v)) ++outside;
    return outside + excess(s) - excess(h);
}

namespace {

struct Residual {
    std::vector<Edge> edges;
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, edge id)
    std::vector<char> used;
};

Residual residual_edges(const Graph& h, const Graph& s) {
    Residual r;
    std::set_difference(s.edges().begin(), s.edges().end(), h.edges().begin(), h.edges().end(),
                        std::back_inserter(r.edges));
    r.adj.assign(s.universe(), {});
    for (int i = 0; i < static_cast<int>(r.edges.size()); ++i) {
        r.adj[r.edges[i].first].push_back({r.edges[i].second, i});
        r.adj[r.edges[i].second].push_back({r.edges[i].first, i});
    }
    for (auto& a : r.adj) std::sort(a.begin(), a.end());
    r.used.assign(r.edges.size(), 0);
    return r;
}

// A cycle among vertices with occ == 0 using unused edges, or empty.
std::vector<int> find_free_cycle(const Graph& s, const Residual& r, const std::vector<char>& occ) {
    int n = s.universe();
    std::vector<char> state(n, 0);  // 0 new, 1 on stack, 2 done
    std::vector<int> stack;
    std::vector<int> found;
    std::function<bool(int, int)> dfs = [&](int v, int parent_edge) {
        state[v] = 1;
        stack.push_back(v);
        for (const auto& [w, id] : r.adj[v]) {
            if (id == parent_edge || r.used[id] || occ[w]) continue;
            if (state[w] == 1) {
                auto it = std::find(stack.begin(), stack.end(), w);
                found.assign(it, stack.end());
                return true;
            }
            if (state[w] == 0 && dfs(w, id)) return true;
        }
        stack.pop_back();
        state[v] = 2;
        return false;
    };
    for (int v : s.vertices()) {
        if (occ[v] || state[v]) continue;
        if (dfs(v, -1)) return found;
    }
    return {};
}

int edge_id(const Residual& r, int u, int v) {
    for (const auto& [w, id] : r.adj[u])
        if (w == v) return id;
    return -1;
}

}  // namespace

Decomposition decompose_plain(const Graph& h, const Graph& s) {
    if (!is_subgraph(h, s)) throw std::invalid_argument("decomposition requires h to be a subgraph of s");
    Decomposition d;
    std::vector<char> occ(s.universe(), 0);
    for (int v : h.vertices()) occ[v] = 1;
    for (int v : leaves(s)) occ[v] = 1;  // H_leaf
    Residual r = residual_edges(h, s);

    // Step (a): greedy vertex-disjoint cycles away from H.
    while (true) {
        auto cyc = find_free_cycle(s, r, occ);
        if (cyc.empty()) break;
        for (std::size_t i = 0; i < cyc.size(); ++i)
            r.used[edge_id(r, cyc[i], cyc[(i + 1) % cyc.size()])] = 1;
        for (int v : cyc) occ[v] = 1;
        d.cycles.push_back(std::move(cyc));
    }

    // Step (b): maximal path growth from the lowest unused edge.
    std::vector<char> in_path(s.universe(), 0);
    for (int start = 0; start < static_cast<int>(r.edges.size()); ++start) {
        if (r.used[start]) continue;
        r.used[start] = 1;
        std::deque<int> walk{r.edges[start].first, r.edges[start].second};
        in_path[walk.front()] = in_path[walk.back()] = 1;
        bool closed = false;
        bool progress = true;
        while (progress && !closed) {
            progress = false;
            for (int side = 0; side < 2 && !progress; ++side) {
                int x = side == 0 ? walk.back() : walk.front();
                int other = side == 0 ? walk.front() : walk.back();
                if (occ[x]) continue;
                for (const auto& [y, id] : r.adj[x]) {
                    if (r.used[id]) continue;
                    bool closing = y == other && walk.size() >= 3;
                    if (in_path[y] && !closing) continue;
                    r.used[id] = 1;
                    if (side == 0) walk.push_back(y);
                    else walk.push_front(y);
                    in_path[y] = 1;
                    closed = closing;
                    progress = true;
                    break;
                }
            }
        }
        for (int v : walk) {
            occ[v] = 1;
            in_path[v] = 0;
        }
        d.paths.push_back(Path{std::vector<int>(walk.begin(), walk.end())});
    }
    return d;
}

namespace {

std::vector<std::vector<int>> split_at(const std::vector<int>& walk, const std::vector<char>& cut) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur{walk.front()};
    for (std::size_t i = 1; i < walk.size(); ++i) {
        cur.push_back(walk[i]);
        if (i + 1 < walk.size() && cut[walk[i]]) {
            out.push_back(cur);
            cur = {walk[i]};
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Decomposition decompose_revised(const Graph& h, const Graph& s) {
    Decomposition plain = decompose_plain(h, s);
    int n = s.universe();
    std::vector<char> hv(n, 0);
    for (int v : h.vertices()) hv[v] = 1;
    for (int v : leaves(s)) hv[v] = 1;
    std::vector<char> is_end(n, 0);
    for (const auto& p : plain.paths)
        for (int v : p.endpoints()) is_end[v] = 1;

    Decomposition out;
    std::vector<std::vector<int>> walks;
    auto graphs = plain.cycle_graphs(n);
    for (std::size_t c = 0; c < plain.cycles.size(); ++c) {
        const auto& cyc = plain.cycles[c];
        if (is_independent_cycle(s, graphs[c])) {
            out.cycles.push_back(cyc);
            continue;
        }
        // Break at path endpoints lying on the cycle.
        auto it = std::find_if(cyc.begin(), cyc.end(), [&](int v) { return is_end[v]; });
        if (it == cyc.end()) throw std::logic_error("non-independent cycle without path endpoints");
        std::vector<int> rot(it, cyc.end());
        rot.insert(rot.end(), cyc.begin(), it);
        rot.push_back(rot.front());
        for (auto& piece : split_at(rot, is_end)) walks.push_back(std::move(piece));
    }
    for (const auto& p : plain.paths)
        for (auto& piece : split_at(p.walk, is_end)) walks.push_back(std::move(piece));

    // Merge two paths meeting at a vertex outside H_leaf that no other
    // path uses as an endpoint.
    bool merged = true;
    while (merged) {
        merged = false;
        std::map<int, std::vector<std::pair<int, int>>> ends;  // vertex -> (walk, side)
        for (int i = 0; i < static_cast<int>(walks.size()); ++i) {
            ends[walks[i].front()].push_back({i, 0});
            ends[walks[i].back()].push_back({i, 1});
        }
        for (const auto& [u, list] : ends) {
            if (hv[u] || list.size() != 2 || list[0].first == list[1].first) continue;
            auto a = walks[list[0].first];
            auto b = walks[list[1].first];
            if (list[0].second == 0) std::reverse(a.begin(), a.end());
            if (list[1].second == 1) std::reverse(b.begin(), b.end());
            a.insert(a.end(), b.begin() + 1, b.end());
            int i = list[0].first, j = list[1].first;
            walks[i] = std::move(a);
            walks.erase(walks.begin() + j);
            merged = true;
            break;
        }
    }
    for (auto& w : walks) out.paths.push_back(Path{std::move(w)});
    return out;
}

}  // namespace cbm
