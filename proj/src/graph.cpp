#include "dwb/graph.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dwb/rng.hpp"

namespace dwb {
namespace {

bool connected(int m, const std::vector<std::pair<int, int>>& edges) {
  if (m <= 1) return true;
  std::vector<std::vector<int>> adj(m);
  for (const auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<char> seen(m, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
    }
  }
  return count == m;
}

Topology erdos_renyi(int m, double p, uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("erdos_renyi: edge probability must be in (0, 1]");
  constexpr int kRetryBudget = 1000;
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    RngStream rng = rng_stream(seed + static_cast<uint64_t>(attempt), kTopologyStream, 0);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (rng.next_double() < p) edges.emplace_back(i, j);
    if (connected(m, edges)) return make_topology(m, std::move(edges));
  }
  throw std::runtime_error("erdos_renyi: no connected graph within retry budget");
}

}  // namespace

Topology make_topology(int m, std::vector<std::pair<int, int>> edges) {
  if (m < 1) throw std::invalid_argument("topology: m must be >= 1");
  std::set<std::pair<int, int>> unique;
  for (auto& [i, j] : edges) {
    if (i == j) throw std::invalid_argument("topology: self-loop");
    if (i < 0 || j < 0 || i >= m || j >= m)
      throw std::invalid_argument("topology: node index out of range");
    if (i > j) std::swap(i, j);
    if (!unique.emplace(i, j).second)
      throw std::invalid_argument("topology: duplicate edge");
  }
  std::vector<std::pair<int, int>> sorted(unique.begin(), unique.end());
  if (!connected(m, sorted)) throw std::invalid_argument("topology: graph is not connected");
  return Topology{m, std::move(sorted)};
}

Topology build_topology(TopologyKind kind, int m, double edge_prob, uint64_t seed) {
  if (m < 2) throw std::invalid_argument("build_topology: m must be >= 2");
  std::vector<std::pair<int, int>> edges;
  switch (kind) {
    case TopologyKind::complete:
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) edges.emplace_back(i, j);
      break;
    case TopologyKind::cycle:
      // m = 2 degenerates to the single edge.
      for (int i = 0; i + 1 < m; ++i) edges.emplace_back(i, i + 1);
      if (m > 2) edges.emplace_back(0, m - 1);
      break;
    case TopologyKind::star:
      for (int j = 1; j < m; ++j) edges.emplace_back(0, j);
      break;
    case TopologyKind::erdos_renyi: {
      const double p = edge_prob > 0.0 ? edge_prob : 2.0 * std::log(m) / m;
      return erdos_renyi(m, std::min(p, 1.0), seed);
    }
  }
  return make_topology(m, std::move(edges));
}

TopologyKind topology_kind_from_string(const std::string& s) {
  if (s == "complete") return TopologyKind::complete;
  if (s == "cycle") return TopologyKind::cycle;
  if (s == "star") return TopologyKind::star;
  if (s == "erdos_renyi") return TopologyKind::erdos_renyi;
  throw std::invalid_argument("unknown topology kind: " + s);
}

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::complete: return "complete";
    case TopologyKind::cycle: return "cycle";
    case TopologyKind::star: return "star";
    case TopologyKind::erdos_renyi: return "erdos_renyi";
  }
  return "?";
}

Laplacian laplacian(const Topology& t) {
  Eigen::MatrixXi entries = Eigen::MatrixXi::Zero(t.m, t.m);
  for (const auto& [i, j] : t.edges) {
    entries(i, j) = -1;
    entries(j, i) = -1;
    entries(i, i) += 1;
    entries(j, j) += 1;
  }
  return Laplacian{entries.cast<double>()};
}

double lambda_max(const Laplacian& lap) {
  const int m = lap.m();
  if (m == 1) return 0.0;
  if (m <= 2000) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.entries,
                                                          Eigen::EigenvaluesOnly);
    return solver.eigenvalues().maxCoeff();
  }
  return lambda_max_power(lap.entries);
}

double lambda_max_power(const Eigen::MatrixXd& sym, double rel_tol, int max_iters) {
  const int m = static_cast<int>(sym.rows());
  RngStream rng = rng_stream(0x9E3779B97F4A7C15ull, 0, 0);
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) v[i] = rng.next_double() + 0.5;
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd w = sym * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double next = v.dot(sym * v);
    if (std::abs(next - lambda) <= rel_tol * std::max(std::abs(next), 1.0)) return next;
    lambda = next;
  }
  throw std::runtime_error("lambda_max_power: no convergence within iteration budget");
}

double consensus_norm(const Laplacian& lap, const Eigen::VectorXd& stacked) {
  const int m = lap.m();
  if (m == 0 || stacked.size() % m != 0)
    throw std::invalid_argument("consensus_norm: block length mismatch");
  const Eigen::Index n = stacked.size() / m;
  double sum = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (lap.entries(i, j) < -0.5)
        sum += (stacked.segment(i * n, n) - stacked.segment(j * n, n)).squaredNorm();
  return std::sqrt(sum);
}

std::vector<int> neighbors(const Topology& t, int i) {
  if (i < 0 || i >= t.m) throw std::invalid_argument("neighbors: index out of range");
  std::vector<int> out;
  for (const auto& [a, b] : t.edges) {
    if (a == i) out.push_back(b);
    if (b == i) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_edge_list(const Topology& t) {
  std::ostringstream os;
  os << t.m << "\n";
  for (const auto& [i, j] : t.edges) os << i << " " << j << "\n";
  return os.str();
}

Topology parse_edge_list(const std::string& text) {
  std::istringstream is(text);
  int m = 0;
  if (!(is >> m)) throw std::invalid_argument("edge list: missing node count");
  std::vector<std::pair<int, int>> edges;
  int i = 0, j = 0;
  while (is >> i >> j) edges.emplace_back(i, j);
  return make_topology(m, std::move(edges));
}

}  // namespace dwb
