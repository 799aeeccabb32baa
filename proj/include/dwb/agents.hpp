#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "dwb/apdsgd.hpp"
#include "dwb/entropic_dual.hpp"
#include "dwb/measures.hpp"
#include "dwb/rng.hpp"

namespace dwb {

enum class Algorithm { nonaccel, accel };

Algorithm algorithm_from_string(const std::string& s);
std::string to_string(Algorithm a);

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The gradient an agent broadcasts to its neighbors for one round; always a
// simplex vector (an average of transport softmaxes).
struct RoundMessage {
  int sender = 0;
  Eigen::VectorXd grad;
};

// Messages delivered to one agent for the current round, sorted by sender.
using Inbox = std::vector<RoundMessage>;

struct RunParams {
  double gamma = 0.1;
  double epsilon = 0.01;
  double lipschitz = 1.0;   // lambda_max(W) / gamma
  int batch_cap = 10000;
  int fixed_batch = 0;      // > 0 overrides the schedule-driven batch
  double dual_radius = 0.0; // R; used only to derive the round count
  bool exact = false;       // exact conjugate gradients (discrete measures)
};

struct AgentState {
  int id = 0;
  MeasureOracle measure;
  std::vector<int> neighbors;  // ascending; the only peers this agent reads
  Eigen::VectorXd lam_bar, zeta_bar, eta_bar;  // transformed dual blocks
  Eigen::VectorXd p_hat;                       // local primal average
  Eigen::VectorXd last_grad;                   // the most recently shared gradient
  BasePoint round_sample;                      // this round's primal sample (M = 1 path)
  RngStream rng;                               // reset per round by the runtime
};

AgentState init_agent(int id, MeasureOracle measure, std::vector<int> neighbors, int n);

// M_{k+1} = max{1, ceil(m gamma C_{k+1} / (alpha_{k+1} epsilon))}, clamped
// above by cap; *clamped reports whether the cap bound was hit.
int batch_size(int k, StepSchedule& schedule, int m, double gamma, double epsilon,
               int cap, bool* clamped = nullptr);

// ceil(sqrt(32 lambda_max R^2 / (epsilon gamma))), the round count implied by
// a known dual-norm bound R.
int derived_rounds(double lambda_max, double radius, double epsilon, double gamma);

// deg(i) * own - sum of neighbor gradients, accumulated in ascending sender
// order with the own term merged at its sorted position. Both the
// message-passing rounds and the dense reference use this exact kernel.
Eigen::VectorXd laplacian_combine(int self, const Eigen::VectorXd& own, const Inbox& inbox);

// Non-accelerated round, local phase: draw one sample (or use the exact
// gradient), stash it, and emit the gradient at the current lam_bar.
RoundMessage nonaccel_share(AgentState& agent, const TransportProblem& tp, bool exact);

// Non-accelerated round, update phase after message delivery:
//   lam_bar -= (1/L) * laplacian_combine(...)
//   p_hat   += (1/total_rounds) * softmax at the new lam_bar and this
//              round's sample (exact gradient when exact).
void nonaccel_apply(AgentState& agent, const Inbox& inbox, const TransportProblem& tp,
                    double lipschitz, int total_rounds, bool exact);

// Accelerated round, local phase: extrapolate lam_bar from (zeta_bar,
// eta_bar), evaluate the batch gradient there, emit it.
RoundMessage accel_share(AgentState& agent, const TransportProblem& tp,
                         const StepSchedule& schedule, int k, int batch, bool exact);

// Accelerated round, update phase: zeta_bar step with the combined
// gradients, eta_bar running average, p_hat running average of the batch
// mean (= last_grad).
void accel_apply(AgentState& agent, const Inbox& inbox, const StepSchedule& schedule,
                 int k);

}  // namespace dwb
