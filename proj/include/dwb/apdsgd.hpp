#pragma once

#include <Eigen/Dense>
#include <functional>

namespace dwb {

// Step coefficients shared by the accelerated methods: alpha_0 = C_0 = 0 and
// C_{k+1} = C_k + alpha_{k+1} = 2 L alpha_{k+1}^2 with alpha_{k+1} the larger
// root. Grows lazily; reads past the grown range throw.
class StepSchedule {
 public:
  explicit StepSchedule(double lipschitz);

  double lipschitz() const { return lipschitz_; }
  void ensure(int k);
  double alpha(int k) const;
  double C(int k) const;
  int grown() const { return static_cast<int>(alphas_.size()) - 1; }

  // Larger root of 2 L a^2 - a - C_k = 0, in closed form.
  static double next_alpha(double C_k, double lipschitz);

 private:
  double lipschitz_;
  std::vector<double> alphas_{0.0};
  std::vector<double> Cs_{0.0};
};

// One stochastic oracle query: the dual gradient b - A x(-A^T lam, xi) and
// the primal response x(-A^T lam, xi) it was built from (primal may be empty
// for pure dual solves).
struct OracleSample {
  Eigen::VectorXd grad;
  Eigen::VectorXd primal;
};

struct StochasticDualOracle {
  // Fresh xi on every call.
  std::function<OracleSample(const Eigen::VectorXd& lam)> sample;
  // Optional dual value Phi(lam, xi).
  std::function<double(const Eigen::VectorXd& lam)> value;
  // Optional pieces for the on-demand consistency check grad = b - A x.
  std::function<Eigen::VectorXd(const Eigen::VectorXd& x)> apply_constraint;
  Eigen::VectorXd rhs;  // b; empty means zero
};

// Verifies grad = b - A * primal on one query; requires apply_constraint.
bool oracle_consistent(const StochasticDualOracle& oracle, const Eigen::VectorXd& lam,
                       double tol = 1e-10);

struct SolverState {
  Eigen::VectorXd lambda, zeta, eta;  // dual triple
  Eigen::VectorXd x_hat;              // alpha-weighted primal average
  int k = 0;
};

SolverState init_solver(const Eigen::VectorXd& lambda0, Eigen::Index primal_dim = 0);

// Accelerated dual iteration with the Euclidean prox setup:
//   lambda_{k+1} = (a_{k+1} zeta_k + C_k eta_k) / C_{k+1}
//   zeta_{k+1}   = zeta_k - a_{k+1} grad(lambda_{k+1})
//   eta_{k+1}    = (a_{k+1} zeta_{k+1} + C_k eta_k) / C_{k+1}
void asgd_step(SolverState& state, const StochasticDualOracle& oracle,
               StepSchedule& schedule);

// Same dual updates plus the primal running average
//   x_hat_{k+1} = (a_{k+1} x(-A^T lambda_{k+1}, xi) + C_k x_hat_k) / C_{k+1}.
void apdsgd_step(SolverState& state, const StochasticDualOracle& oracle,
                 StepSchedule& schedule);

}  // namespace dwb
