#include "dwb/apdsgd.hpp"

#include <cmath>
#include <stdexcept>

namespace dwb {

StepSchedule::StepSchedule(double lipschitz) : lipschitz_(lipschitz) {
  if (!(lipschitz > 0.0)) throw std::invalid_argument("schedule: L must be > 0");
}

double StepSchedule::next_alpha(double C_k, double lipschitz) {
  if (!(lipschitz > 0.0)) throw std::invalid_argument("next_alpha: L must be > 0");
  if (C_k < 0.0) throw std::invalid_argument("next_alpha: C_k must be >= 0");
  return (1.0 + std::sqrt(1.0 + 8.0 * lipschitz * C_k)) / (4.0 * lipschitz);
}

void StepSchedule::ensure(int k) {
  while (grown() < k) {
    const double a = next_alpha(Cs_.back(), lipschitz_);
    Cs_.push_back(Cs_.back() + a);
    alphas_.push_back(a);
  }
}

double StepSchedule::alpha(int k) const {
  if (k < 0 || k > grown()) throw std::out_of_range("schedule: alpha index not grown");
  return alphas_[static_cast<size_t>(k)];
}

double StepSchedule::C(int k) const {
  if (k < 0 || k > grown()) throw std::out_of_range("schedule: C index not grown");
  return Cs_[static_cast<size_t>(k)];
}

bool oracle_consistent(const StochasticDualOracle& oracle, const Eigen::VectorXd& lam,
                       double tol) {
  if (!oracle.sample || !oracle.apply_constraint)
    throw std::invalid_argument("oracle_consistent: needs sample and apply_constraint");
  const OracleSample s = oracle.sample(lam);
  Eigen::VectorXd expected = -oracle.apply_constraint(s.primal);
  if (oracle.rhs.size() > 0) expected += oracle.rhs;
  return (s.grad - expected).norm() <= tol * std::max(1.0, expected.norm());
}

SolverState init_solver(const Eigen::VectorXd& lambda0, Eigen::Index primal_dim) {
  SolverState st;
  st.lambda = lambda0;
  st.zeta = lambda0;
  st.eta = lambda0;
  st.x_hat = Eigen::VectorXd::Zero(primal_dim);
  return st;
}

namespace {

// Shared dual update; returns the oracle sample taken at the new lambda.
OracleSample dual_update(SolverState& state, const StochasticDualOracle& oracle,
                         StepSchedule& schedule) {
  const int k = state.k;
  schedule.ensure(k + 1);
  const double a = schedule.alpha(k + 1);
  const double Ck = schedule.C(k);
  const double Ck1 = schedule.C(k + 1);
  state.lambda = (a * state.zeta + Ck * state.eta) / Ck1;
  OracleSample s = oracle.sample(state.lambda);
  if (s.grad.size() != state.lambda.size())
    throw std::invalid_argument("solver step: gradient dimension mismatch");
  state.zeta -= a * s.grad;
  state.eta = (a * state.zeta + Ck * state.eta) / Ck1;
  return s;
}

}  // namespace

void asgd_step(SolverState& state, const StochasticDualOracle& oracle,
               StepSchedule& schedule) {
  dual_update(state, oracle, schedule);
  ++state.k;
}

void apdsgd_step(SolverState& state, const StochasticDualOracle& oracle,
                 StepSchedule& schedule) {
  const int k = state.k;
  const OracleSample s = dual_update(state, oracle, schedule);
  if (s.primal.size() != state.x_hat.size())
    throw std::invalid_argument("solver step: primal dimension mismatch");
  const double a = schedule.alpha(k + 1);
  const double Ck = schedule.C(k);
  const double Ck1 = schedule.C(k + 1);
  state.x_hat = (a * s.primal + Ck * state.x_hat) / Ck1;
  ++state.k;
}

}  // namespace dwb
