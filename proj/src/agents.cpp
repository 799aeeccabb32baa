#include "dwb/agents.hpp"

#include <algorithm>
#include <cmath>

namespace dwb {

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "nonaccel") return Algorithm::nonaccel;
  if (s == "accel") return Algorithm::accel;
  throw std::invalid_argument("unknown algorithm: " + s);
}

std::string to_string(Algorithm a) {
  return a == Algorithm::nonaccel ? "nonaccel" : "accel";
}

AgentState init_agent(int id, MeasureOracle measure, std::vector<int> neighbors, int n) {
  AgentState st;
  st.id = id;
  st.measure = std::move(measure);
  st.neighbors = std::move(neighbors);
  std::sort(st.neighbors.begin(), st.neighbors.end());
  st.lam_bar = Eigen::VectorXd::Zero(n);
  st.zeta_bar = Eigen::VectorXd::Zero(n);
  st.eta_bar = Eigen::VectorXd::Zero(n);
  st.p_hat = Eigen::VectorXd::Zero(n);
  st.last_grad = Eigen::VectorXd::Zero(n);
  return st;
}

int batch_size(int k, StepSchedule& schedule, int m, double gamma, double epsilon,
               int cap, bool* clamped) {
  if (clamped) *clamped = false;
  schedule.ensure(k + 1);
  const double value =
      m * gamma * schedule.C(k + 1) / (schedule.alpha(k + 1) * epsilon);
  long batch = std::max(1l, static_cast<long>(std::ceil(value)));
  if (batch > cap) {
    batch = cap;
    if (clamped) *clamped = true;
  }
  return static_cast<int>(batch);
}

int derived_rounds(double lambda_max, double radius, double epsilon, double gamma) {
  if (!(lambda_max > 0.0 && radius > 0.0 && epsilon > 0.0 && gamma > 0.0))
    throw std::invalid_argument("derived_rounds: all inputs must be positive");
  return static_cast<int>(
      std::ceil(std::sqrt(32.0 * lambda_max * radius * radius / (epsilon * gamma))));
}

namespace {

void check_inbox(const AgentState& agent, const Inbox& inbox) {
  if (inbox.size() != agent.neighbors.size())
    throw ProtocolError("agent " + std::to_string(agent.id) +
                        ": expected one message per neighbor");
  for (size_t s = 0; s < inbox.size(); ++s) {
    if (inbox[s].sender != agent.neighbors[s])
      throw ProtocolError("agent " + std::to_string(agent.id) +
                          ": message from non-neighbor or out of order");
    if (inbox[s].grad.size() != agent.lam_bar.size())
      throw ProtocolError("agent " + std::to_string(agent.id) +
                          ": gradient block length mismatch");
  }
}

Eigen::VectorXd local_gradient(AgentState& agent, const TransportProblem& tp, int batch,
                               bool exact) {
  if (exact) return dual_gradient_exact(tp, as_discrete(agent.measure), agent.lam_bar);
  if (batch == 1) {
    agent.round_sample = sample(agent.measure, agent.rng);
    return softmax_transport(tp, agent.lam_bar, agent.round_sample);
  }
  return dual_gradient_sampled(tp, agent.measure, agent.lam_bar, batch, agent.rng);
}

}  // namespace

Eigen::VectorXd laplacian_combine(int self, const Eigen::VectorXd& own, const Inbox& inbox) {
  const double degree = static_cast<double>(inbox.size());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(own.size());
  bool own_added = false;
  for (const RoundMessage& msg : inbox) {
    if (!own_added && self < msg.sender) {
      acc += degree * own;
      own_added = true;
    }
    acc -= msg.grad;
  }
  if (!own_added) acc += degree * own;
  return acc;
}

RoundMessage nonaccel_share(AgentState& agent, const TransportProblem& tp, bool exact) {
  agent.last_grad = local_gradient(agent, tp, 1, exact);
  return RoundMessage{agent.id, agent.last_grad};
}

void nonaccel_apply(AgentState& agent, const Inbox& inbox, const TransportProblem& tp,
                    double lipschitz, int total_rounds, bool exact) {
  check_inbox(agent, inbox);
  agent.lam_bar -= laplacian_combine(agent.id, agent.last_grad, inbox) / lipschitz;
  const Eigen::VectorXd response =
      exact ? dual_gradient_exact(tp, as_discrete(agent.measure), agent.lam_bar)
            : softmax_transport(tp, agent.lam_bar, agent.round_sample);
  agent.p_hat += response / static_cast<double>(total_rounds);
}

RoundMessage accel_share(AgentState& agent, const TransportProblem& tp,
                         const StepSchedule& schedule, int k, int batch, bool exact) {
  const double a = schedule.alpha(k + 1);
  const double Ck = schedule.C(k);
  const double Ck1 = schedule.C(k + 1);
  agent.lam_bar = (a * agent.zeta_bar + Ck * agent.eta_bar) / Ck1;
  agent.last_grad = local_gradient(agent, tp, batch, exact);
  return RoundMessage{agent.id, agent.last_grad};
}

void accel_apply(AgentState& agent, const Inbox& inbox, const StepSchedule& schedule,
                 int k) {
  check_inbox(agent, inbox);
  const double a = schedule.alpha(k + 1);
  const double Ck = schedule.C(k);
  const double Ck1 = schedule.C(k + 1);
  agent.zeta_bar -= a * laplacian_combine(agent.id, agent.last_grad, inbox);
  agent.eta_bar = (a * agent.zeta_bar + Ck * agent.eta_bar) / Ck1;
  // Batch-mean primal estimator: the shared gradient is exactly the mean of
  // this round's transport softmaxes.
  agent.p_hat = (a * agent.last_grad + Ck * agent.p_hat) / Ck1;
}

}  // namespace dwb
