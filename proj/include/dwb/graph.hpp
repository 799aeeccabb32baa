#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dwb {

enum class TopologyKind { complete, cycle, star, erdos_renyi };

// Connected undirected graph on m nodes, no self-loops, edges stored as
// normalized (i < j) pairs in ascending order.
struct Topology {
  int m = 0;
  std::vector<std::pair<int, int>> edges;
};

// Validates and normalizes the edge set; throws std::invalid_argument on
// self-loops, duplicates, out-of-range indices, or a disconnected graph.
Topology make_topology(int m, std::vector<std::pair<int, int>> edges);

// Standard families. erdos_renyi samples each pair with probability
// edge_prob and resamples with an incremented seed until connected.
Topology build_topology(TopologyKind kind, int m, double edge_prob = 0.0,
                        uint64_t seed = 0);

TopologyKind topology_kind_from_string(const std::string& s);
std::string to_string(TopologyKind kind);

// Graph Laplacian: degree on the diagonal, -1 on edges. Built in integer
// arithmetic, so rows sum to zero exactly.
struct Laplacian {
  Eigen::MatrixXd entries;
  int m() const { return static_cast<int>(entries.rows()); }
};

Laplacian laplacian(const Topology& t);

// Largest eigenvalue: dense symmetric solve up to m = 2000, power iteration
// beyond. Throws std::runtime_error if the iteration does not converge.
double lambda_max(const Laplacian& lap);
double lambda_max_power(const Eigen::MatrixXd& sym, double rel_tol = 1e-12,
                        int max_iters = 200000);

// sqrt(p^T (Wbar ⊗ I_n) p) for a stacked vector of m equal-length blocks,
// evaluated as the edge sum of squared block differences; sqrt(W) is never
// materialized. Zero iff all blocks are equal.
double consensus_norm(const Laplacian& lap, const Eigen::VectorXd& stacked);

// Sorted neighbor list of node i; throws on out-of-range index.
std::vector<int> neighbors(const Topology& t, int i);

// Edge-list text format: first line `m`, then one `i j` pair per line.
std::string to_edge_list(const Topology& t);
Topology parse_edge_list(const std::string& text);

}  // namespace dwb
