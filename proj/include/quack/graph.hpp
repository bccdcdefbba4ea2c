#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quack/types.hpp"

namespace quack {

/// Undirected, connected, simple graph over agents 1..m. Constructors
/// reject self-loops and disconnected inputs; edges are stored once and
/// queried symmetrically.
class Graph {
  public:
    static Graph cycle(int m);
    static Graph grid(int m);   // m must be a perfect square
    static Graph star(int m);   // centre is agent 1
    static Graph complete(int m);
    static Graph custom(int m, const std::vector<std::pair<int, int>>& edges);

    /// Text edge-list format: first line `m`, then one `v w` pair per line,
    /// 1-indexed. Duplicate and reversed edges are deduplicated.
    static Graph from_edge_list_file(const std::string& path);

    int num_agents() const { return m_; }
    int num_edges() const { return num_edges_; }
    const std::vector<int>& neighbours(AgentId v) const;
    bool has_edge(AgentId v, AgentId w) const;
    int max_degree() const;
    std::vector<std::pair<int, int>> edges() const;  // v < w, sorted

  private:
    Graph(int m, std::vector<std::vector<int>> adjacency);

    int m_ = 0;
    int num_edges_ = 0;
    std::vector<std::vector<int>> adj_;  // sorted neighbour lists, index = id-1
};

enum class TopologyKind { cycle, grid, star, complete, custom };

TopologyKind topology_from_string(const std::string& name);
std::string to_string(TopologyKind kind);

Graph make_topology(TopologyKind kind, int m,
                    const std::vector<std::pair<int, int>>* custom_edges = nullptr);

/// BFS tree rooted at an agent: hop distances, parents toward the root and
/// the matching children sets.
struct ShortestPathTree {
    AgentId root = 1;
    std::vector<int> parent;                 // per agent; 0 = none (the root)
    std::vector<std::vector<int>> children;  // per agent, ascending ids
    std::vector<int> dist;                   // hop count from the root
};

/// Exact hop distances by plain BFS; the centralized oracle the distributed
/// protocol is checked against.
std::vector<int> bfs_distances(const Graph& g, AgentId source);

/// Synchronous distributed Bellman-Ford. Runs exactly m-1 rounds in which
/// every agent reads only its neighbours' previous-round distances, then one
/// identifier exchange to assemble children sets. Parent ties break to the
/// smallest neighbour id.
ShortestPathTree distributed_bellman_ford(const Graph& g, AgentId source);

/// Structural validity of a shortest-path tree against its graph.
bool validate_tree(const Graph& g, const ShortestPathTree& tree, std::string* why = nullptr);

/// Synchronous flooding election: every agent repeatedly adopts the smallest
/// (score, id) pair seen among itself and its neighbours; after m rounds the
/// unique agent whose own initial pair survived is the leader.
AgentId elect_leader(const Graph& g, const std::vector<double>& score);

struct BestLeader {
    AgentId leader = 1;
    long long distance_sum = 0;
};

/// Runs distributed Bellman-Ford from every source, convergecasts distances
/// up each tree so every agent learns its sum of shortest paths, then elects
/// the minimiser (ties to the smallest id).
BestLeader best_leader(const Graph& g);

int diameter(const Graph& g);

/// Doubly stochastic gossip matrix P = I - (D - M) / (1 + max degree),
/// where D is the degree matrix and M the adjacency matrix.
struct CommunicationMatrix {
    int m = 0;
    std::vector<double> entries;  // row-major m*m

    double at(AgentId v, AgentId w) const { return entries[(v - 1) * m + (w - 1)]; }
};

CommunicationMatrix communication_matrix(const Graph& g);

/// |lambda_2|: second-largest eigenvalue magnitude of a symmetric doubly
/// stochastic matrix, by dense symmetric eigendecomposition. Throws on
/// numerical failure rather than returning NaN.
double second_eigenvalue_magnitude(const CommunicationMatrix& P);

/// One synchronous gossip averaging step: values <- P * values.
void consensus_apply(const Graph& g, std::vector<double>& values);

}  // namespace quack
