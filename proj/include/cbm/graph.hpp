#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace cbm {

// Undirected edge stored with first < second.
using Edge = std::pair<int, int>;

Edge make_edge(int u, int v);

// Labeled simple graph on a universe {0,...,n-1}. The vertex set is an
// explicit subset of the universe, so pattern graphs may carry isolated
// vertices or omit unused labels.
class Graph {
public:
    Graph() = default;
    // Full vertex set {0,...,n-1}.
    explicit Graph(int n);
    Graph(int n, std::vector<Edge> edges);

    static Graph with_vertices(int n, std::vector<int> vertices, std::vector<Edge> edges);
    // Vertex set is exactly the set of edge endpoints.
    static Graph edge_induced(int n, std::vector<Edge> edges);

    int universe() const { return n_; }
    const std::vector<int>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    bool empty() const { return vertices_.empty(); }

    bool has_vertex(int v) const;
    bool has_edge(int u, int v) const;
    bool full_vertex_set() const { return num_vertices() == n_; }

    // Neighbor lists indexed by universe label.
    std::vector<std::vector<int>> adjacency() const;
    std::vector<int> degrees() const;

    bool operator==(const Graph& o) const = default;

private:
    void normalize();

    int n_ = 0;
    std::vector<int> vertices_;
    std::vector<Edge> edges_;
};

class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> image);
    static Permutation identity(int n);

    int size() const { return static_cast<int>(image_.size()); }
    int operator()(int i) const { return image_[i]; }
    const std::vector<int>& image() const { return image_; }
    Permutation inverse() const;

    bool operator==(const Permutation& o) const = default;

private:
    std::vector<int> image_;
};

// (p o q)(i) = p(q(i)).
Permutation compose(const Permutation& p, const Permutation& q);

int excess(const Graph& g);
std::vector<int> leaves(const Graph& g);
std::vector<int> isolated(const Graph& g);

Graph graph_union(const Graph& a, const Graph& b);
// Vertex and edge intersection (S cap T).
Graph graph_intersection(const Graph& a, const Graph& b);
// Edge-induced graph on E(a) cap E(b).
Graph edge_intersection(const Graph& a, const Graph& b);
// Edge-induced graph on E(a) \ E(b).
Graph edge_difference(const Graph& a, const Graph& b);
// Edge-induced graph on the symmetric difference of the edge sets.
Graph symmetric_difference(const Graph& a, const Graph& b);
// H_A: vertices A cap V(g), edges of g inside A.
Graph induced_subgraph(const Graph& g, const std::vector<int>& vertex_set);
// H_{\A}: same vertex set, edges with both ends in A removed.
Graph delete_edges_within(const Graph& g, const std::vector<int>& vertex_set);

bool is_subgraph(const Graph& h, const Graph& s);
// H ltimes S: H subgraph of S and every isolated vertex of S is isolated in H.
// Requires identical universes.
bool ltimes(const Graph& h, const Graph& s);

// Vertex sets of connected components (isolated vertices are singletons).
std::vector<std::vector<int>> components(const Graph& g);
bool is_forest(const Graph& g);
bool is_connected(const Graph& g);

// Cycle subgraphs with 3 <= length <= max_len, each reported once.
std::vector<Graph> cycles_up_to(const Graph& g, int max_len);
// counts[j] = number of j-cycles for j <= max_len; no subgraphs are built.
std::vector<long long> count_cycles(const Graph& g, int max_len);
// Cycles as vertex sequences (start at the smallest vertex, second < last).
std::vector<std::vector<int>> cycle_sequences(const Graph& g, int max_len);
// m-cycles with no other edge of g incident to their vertices.
std::vector<Graph> independent_cycles(const Graph& g, int m);
bool is_independent_cycle(const Graph& g, const Graph& cycle);

Graph two_core(const Graph& g);

constexpr int kIsoVertexLimit = 16;

// Isomorphism-invariant code of the graph on its own vertex set.
std::string canonical_form(const Graph& g);
std::uint64_t automorphism_count(const Graph& g);
bool isomorphic(const Graph& a, const Graph& b);
// Vertex order realizing the canonical code.
std::vector<int> canonical_order(const Graph& g);

Graph apply_permutation(const Graph& g, const Permutation& p);

std::string to_text(const Graph& g);
Graph from_text(const std::string& s);
nlohmann::json to_json(const Graph& g);
Graph from_json(const nlohmann::json& j);

}  // namespace cbm
