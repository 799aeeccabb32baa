#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dwb/agents.hpp"
#include "dwb/config.hpp"
#include "dwb/graph.hpp"

namespace dwb {

struct TraceRow {
  long round = 0;
  double dual_value = 0.0;
  double consensus = 0.0;
  long batch = 0;    // samples per agent used in this round (0 for exact mode)
  long wall_ms = 0;  // informational; 0 unless output.wall_time is set
};

struct Trace {
  std::vector<TraceRow> rows;
};

struct RunResult {
  Trace trace;
  std::vector<AgentState> agents;
  Eigen::VectorXd mean_p;  // across-agent mean of the local barycenters
  double lambda_max = 0.0;
  double lipschitz = 0.0;
  int rounds = 0;
  std::vector<std::string> warnings;
};

// Executes the configured scenario for N synchronous rounds: share, route
// along edges, apply, record. Deterministic for a fixed (config, seed) under
// any worker count. Writes trace/barycenter/config files when output.dir is
// set.
RunResult run(const RunConfig& cfg);

// Metric helpers; pure functions of the recorded state, reused by the trace
// writer and by tests that recompute rows from snapshots.
double metric_consensus(const Laplacian& lap, const std::vector<AgentState>& agents);
// Sum over agents of the conjugate value at lam_bar: exact per discrete
// measure, otherwise Monte Carlo with eval_batch draws from the dedicated
// metrics stream of this round.
double metric_dual_value(const TransportProblem& tp, const std::vector<AgentState>& agents,
                         uint64_t master_seed, long round, int eval_batch = 1000);

std::string trace_to_csv(const Trace& trace);
std::string barycenter_to_csv(const std::vector<AgentState>& agents,
                              const Eigen::VectorXd& mean_p);

// Builds the support grid described by the config.
SupportGrid grid_from_config(const RunConfig& cfg);

}  // namespace dwb
