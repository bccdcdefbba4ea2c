#include "quack/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace quack {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

Graph::Graph(int m, std::vector<std::vector<int>> adjacency) : m_(m), adj_(std::move(adjacency)) {
    require(m_ >= 1, "graph: need at least one agent");
    for (int v = 1; v <= m_; ++v) {
        auto& nb = adj_[v - 1];
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        for (int w : nb) {
            require(w >= 1 && w <= m_, "graph: neighbour id out of range");
            require(w != v, "graph: self-loops are not allowed");
        }
        num_edges_ += static_cast<int>(nb.size());
    }
    num_edges_ /= 2;
    // connectivity (finite diameter) is required by the protocols
    const auto dist = bfs_distances(*this, 1);
    for (int v = 1; v <= m_; ++v) {
        require(dist[v - 1] >= 0, "graph: must be connected");
    }
}

const std::vector<int>& Graph::neighbours(AgentId v) const {
    if (v < 1 || v > m_) throw std::invalid_argument("graph: agent id out of range");
    return adj_[v - 1];
}

bool Graph::has_edge(AgentId v, AgentId w) const {
    const auto& nb = neighbours(v);
    return std::binary_search(nb.begin(), nb.end(), w);
}

int Graph::max_degree() const {
    int d = 0;
    for (const auto& nb : adj_) d = std::max(d, static_cast<int>(nb.size()));
    return d;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(num_edges_);
    for (int v = 1; v <= m_; ++v) {
        for (int w : adj_[v - 1]) {
            if (v < w) out.emplace_back(v, w);
        }
    }
    return out;
}

Graph Graph::cycle(int m) {
    require(m >= 1, "cycle: m must be >= 1");
    std::vector<std::vector<int>> adj(m);
    if (m >= 2) {
        for (int i = 1; i <= m; ++i) {
            const int next = i % m + 1;
            if (next != i) {
                adj[i - 1].push_back(next);
                adj[next - 1].push_back(i);
            }
        }
    }
    return Graph(m, std::move(adj));
}

Graph Graph::grid(int m) {
    require(m >= 1, "grid: m must be >= 1");
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
    require(side * side == m, "grid: m must be a perfect square");
    std::vector<std::vector<int>> adj(m);
    auto id = [side](int r, int c) { return (r - 1) * side + c; };
    for (int r = 1; r <= side; ++r) {
        for (int c = 1; c <= side; ++c) {
            if (c < side) {
                adj[id(r, c) - 1].push_back(id(r, c + 1));
                adj[id(r, c + 1) - 1].push_back(id(r, c));
            }
            if (r < side) {
                adj[id(r, c) - 1].push_back(id(r + 1, c));
                adj[id(r + 1, c) - 1].push_back(id(r, c));
            }
        }
    }
    return Graph(m, std::move(adj));
}

Graph Graph::star(int m) {
    require(m >= 1, "star: m must be >= 1");
    std::vector<std::vector<int>> adj(m);
    for (int leaf = 2; leaf <= m; ++leaf) {
        adj[0].push_back(leaf);
        adj[leaf - 1].push_back(1);
    }
    return Graph(m, std::move(adj));
}

Graph Graph::complete(int m) {
    require(m >= 1, "complete: m must be >= 1");
    std::vector<std::vector<int>> adj(m);
    for (int v = 1; v <= m; ++v) {
        for (int w = v + 1; w <= m; ++w) {
            adj[v - 1].push_back(w);
            adj[w - 1].push_back(v);
        }
    }
    return Graph(m, std::move(adj));
}

Graph Graph::custom(int m, const std::vector<std::pair<int, int>>& edges) {
    require(m >= 1, "custom: m must be >= 1");
    std::set<std::pair<int, int>> dedup;
    for (auto [v, w] : edges) {
        require(v >= 1 && v <= m && w >= 1 && w <= m, "custom: edge endpoint out of range");
        require(v != w, "custom: self-loops are not allowed");
        dedup.emplace(std::min(v, w), std::max(v, w));
    }
    std::vector<std::vector<int>> adj(m);
    for (auto [v, w] : dedup) {
        adj[v - 1].push_back(w);
        adj[w - 1].push_back(v);
    }
    return Graph(m, std::move(adj));
}

Graph Graph::from_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list file: " + path);
    int m = 0;
    if (!(in >> m)) throw std::runtime_error("edge list file: missing agent count: " + path);
    std::vector<std::pair<int, int>> edges;
    int v = 0, w = 0;
    while (in >> v >> w) edges.emplace_back(v, w);
    if (!in.eof()) throw std::runtime_error("edge list file: malformed pair: " + path);
    return custom(m, edges);
}

TopologyKind topology_from_string(const std::string& name) {
    if (name == "cycle") return TopologyKind::cycle;
    if (name == "grid") return TopologyKind::grid;
    if (name == "star") return TopologyKind::star;
    if (name == "complete") return TopologyKind::complete;
    if (name == "custom") return TopologyKind::custom;
    throw std::invalid_argument("unknown topology: " + name);
}

std::string to_string(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::cycle: return "cycle";
        case TopologyKind::grid: return "grid";
        case TopologyKind::star: return "star";
        case TopologyKind::complete: return "complete";
        case TopologyKind::custom: return "custom";
    }
    return "?";
}

Graph make_topology(TopologyKind kind, int m,
                    const std::vector<std::pair<int, int>>* custom_edges) {
    switch (kind) {
        case TopologyKind::cycle: return Graph::cycle(m);
        case TopologyKind::grid: return Graph::grid(m);
        case TopologyKind::star: return Graph::star(m);
        case TopologyKind::complete: return Graph::complete(m);
        case TopologyKind::custom:
            require(custom_edges != nullptr, "custom topology needs an edge list");
            return Graph::custom(m, *custom_edges);
    }
    throw std::invalid_argument("unknown topology kind");
}

std::vector<int> bfs_distances(const Graph& g, AgentId source) {
    const int m = g.num_agents();
    if (source < 1 || source > m) throw std::invalid_argument("bfs: source out of range");
    std::vector<int> dist(m, -1);
    std::deque<int> frontier{source};
    dist[source - 1] = 0;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop_front();
        for (int w : g.neighbours(v)) {
            if (dist[w - 1] < 0) {
                dist[w - 1] = dist[v - 1] + 1;
                frontier.push_back(w);
            }
        }
    }
    return dist;
}

ShortestPathTree distributed_bellman_ford(const Graph& g, AgentId source) {
    const int m = g.num_agents();
    if (source < 1 || source > m) throw std::invalid_argument("bellman-ford: source out of range");
    const int inf = std::numeric_limits<int>::max() / 2;

    std::vector<int> dist(m, inf);
    std::vector<int> parent(m, 0);
    dist[source - 1] = 0;

    for (int round = 1; round <= m - 1; ++round) {
        const std::vector<int> inbox = dist;  // neighbours' previous-round values
        for (int w = 1; w <= m; ++w) {
            int best = inbox[w - 1];
            int best_parent = 0;
            for (int z : g.neighbours(w)) {  // ascending, so ties keep the smallest id
                if (inbox[z - 1] + 1 < best) {
                    best = inbox[z - 1] + 1;
                    best_parent = z;
                }
            }
            if (best < dist[w - 1]) {
                dist[w - 1] = best;
                parent[w - 1] = best_parent;
            }
        }
    }

    // identifier exchange: every agent reports itself to its parent
    std::vector<std::vector<int>> children(m);
    for (int w = 1; w <= m; ++w) {
        if (parent[w - 1] != 0) children[parent[w - 1] - 1].push_back(w);
    }
    return ShortestPathTree{source, std::move(parent), std::move(children), std::move(dist)};
}

bool validate_tree(const Graph& g, const ShortestPathTree& tree, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why != nullptr) *why = msg;
        return false;
    };
    const int m = g.num_agents();
    if (tree.root < 1 || tree.root > m) return fail("root out of range");
    if (tree.dist[tree.root - 1] != 0) return fail("root distance not zero");
    if (tree.parent[tree.root - 1] != 0) return fail("root has a parent");
    const auto oracle = bfs_distances(g, tree.root);
    for (int w = 1; w <= m; ++w) {
        if (tree.dist[w - 1] != oracle[w - 1]) return fail("dist differs from BFS at agent " + std::to_string(w));
        if (w == tree.root) continue;
        const int p = tree.parent[w - 1];
        if (p < 1 || p > m) return fail("missing parent at agent " + std::to_string(w));
        if (!g.has_edge(w, p)) return fail("parent edge not in graph at agent " + std::to_string(w));
        if (tree.dist[w - 1] != tree.dist[p - 1] + 1) return fail("parent not one hop closer at agent " + std::to_string(w));
        const auto& siblings = tree.children[p - 1];
        if (std::find(siblings.begin(), siblings.end(), w) == siblings.end())
            return fail("child sets inconsistent at agent " + std::to_string(w));
    }
    int child_entries = 0;
    for (int z = 1; z <= m; ++z) {
        for (int c : tree.children[z - 1]) {
            if (tree.parent[c - 1] != z) return fail("child without matching parent at agent " + std::to_string(z));
            ++child_entries;
        }
    }
    if (child_entries != m - 1) return fail("children do not cover all non-root agents");
    return true;
}

AgentId elect_leader(const Graph& g, const std::vector<double>& score) {
    const int m = g.num_agents();
    if (static_cast<int>(score.size()) != m)
        throw std::invalid_argument("elect_leader: one score per agent required");

    struct State {
        double f;
        int id;
    };
    auto better = [](const State& a, const State& b) {
        return a.f < b.f || (a.f == b.f && a.id < b.id);
    };

    std::vector<State> state(m);
    for (int v = 1; v <= m; ++v) state[v - 1] = State{score[v - 1], v};
    const std::vector<State> initial = state;

    for (int round = 1; round <= m; ++round) {
        const std::vector<State> inbox = state;
        for (int v = 1; v <= m; ++v) {
            State best = inbox[v - 1];
            for (int w : g.neighbours(v)) {
                if (better(inbox[w - 1], best)) best = inbox[w - 1];
            }
            state[v - 1] = best;
        }
    }

    AgentId leader = 0;
    int claims = 0;
    for (int v = 1; v <= m; ++v) {
        if (state[v - 1].id == initial[v - 1].id && state[v - 1].f == initial[v - 1].f) {
            leader = v;
            ++claims;
        }
    }
    if (claims != 1) throw std::logic_error("elect_leader: expected exactly one self-identified leader");
    return leader;
}

BestLeader best_leader(const Graph& g) {
    const int m = g.num_agents();
    std::vector<double> score(m, 0.0);

    for (int source = 1; source <= m; ++source) {
        const auto tree = distributed_bellman_ford(g, source);
        // convergecast: every agent starts with its own (id, distance) record
        // and repeatedly absorbs its children's previous-round bundles.
        std::vector<std::vector<std::pair<int, int>>> bundle(m);
        for (int w = 1; w <= m; ++w) bundle[w - 1] = {{w, tree.dist[w - 1]}};
        for (int round = 1; round <= m; ++round) {
            const auto inbox = bundle;
            for (int w = 1; w <= m; ++w) {
                std::set<std::pair<int, int>> merged(inbox[w - 1].begin(), inbox[w - 1].end());
                for (int z : tree.children[w - 1]) merged.insert(inbox[z - 1].begin(), inbox[z - 1].end());
                bundle[w - 1].assign(merged.begin(), merged.end());
            }
        }
        const auto& at_root = bundle[source - 1];
        if (static_cast<int>(at_root.size()) != m)
            throw std::logic_error("best_leader: convergecast did not reach the root");
        long long sum = 0;
        for (auto [id, d] : at_root) sum += d;
        score[source - 1] = static_cast<double>(sum);
    }

    const AgentId leader = elect_leader(g, score);
    return BestLeader{leader, static_cast<long long>(score[leader - 1])};
}

int diameter(const Graph& g) {
    int d = 0;
    for (int v = 1; v <= g.num_agents(); ++v) {
        for (int x : bfs_distances(g, v)) d = std::max(d, x);
    }
    return d;
}

CommunicationMatrix communication_matrix(const Graph& g) {
    const int m = g.num_agents();
    const double step = 1.0 / (1.0 + static_cast<double>(g.max_degree()));
    CommunicationMatrix P;
    P.m = m;
    P.entries.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int v = 1; v <= m; ++v) {
        const auto& nb = g.neighbours(v);
        P.entries[(v - 1) * static_cast<std::size_t>(m) + (v - 1)] =
            1.0 - step * static_cast<double>(nb.size());
        for (int w : nb) P.entries[(v - 1) * static_cast<std::size_t>(m) + (w - 1)] = step;
    }
    return P;
}

double second_eigenvalue_magnitude(const CommunicationMatrix& P) {
    if (P.m <= 1) return 0.0;
    Eigen::Map<const Eigen::MatrixXd> A(P.entries.data(), P.m, P.m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.compute(A, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("second_eigenvalue_magnitude: eigendecomposition failed");
    std::vector<double> mags(P.m);
    for (int i = 0; i < P.m; ++i) {
        mags[i] = std::abs(solver.eigenvalues()[i]);
        if (!std::isfinite(mags[i]))
            throw std::runtime_error("second_eigenvalue_magnitude: non-finite eigenvalue");
    }
    std::sort(mags.begin(), mags.end(), std::greater<>());
    return mags[1];
}

void consensus_apply(const Graph& g, std::vector<double>& values) {
    const int m = g.num_agents();
    if (static_cast<int>(values.size()) != m)
        throw std::invalid_argument("consensus_apply: one value per agent required");
    const double step = 1.0 / (1.0 + static_cast<double>(g.max_degree()));
    std::vector<double> next(values);
    for (int v = 1; v <= m; ++v) {
        double acc = 0.0;
        for (int w : g.neighbours(v)) acc += values[w - 1] - values[v - 1];
        next[v - 1] = values[v - 1] + step * acc;
    }
    values = std::move(next);
}

}  // namespace quack
