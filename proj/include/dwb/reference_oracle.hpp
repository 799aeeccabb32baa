#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dwb/agents.hpp"
#include "dwb/entropic_dual.hpp"

namespace dwb {

// Desk-scale centralized mirror of the decentralized state: one block per
// agent, updated with an explicitly materialized Laplacian.
struct DenseState {
  std::vector<Eigen::VectorXd> lam, zeta, eta, p_hat, grads;
  std::vector<BasePoint> samples;
};

DenseState init_dense_state(int m, int n);

// One full round of Algorithm selection `alg` computed centrally from the
// dense Laplacian row structure; arithmetically identical to the
// message-passing round (same streams, same accumulation order). m <= 50.
void dense_decentralized_step(DenseState& state, const Eigen::MatrixXd& Wbar,
                              Algorithm alg, const TransportProblem& tp,
                              const std::vector<MeasureOracle>& measures,
                              StepSchedule& schedule, int k, double lipschitz,
                              int total_rounds, uint64_t master_seed, bool exact);

// Semi-discrete regularized transport value W(p) for a discrete measure,
// evaluated through the conjugate pair max_lam { <p, lam> - W*(lam) } with an
// accelerated inner ascent. Reported up to the measure's additive constant.
// p must be strictly positive. warm (optional) seeds and receives the inner
// maximizer.
double transport_value(const TransportProblem& tp, const DiscreteMeasure& d,
                       const Eigen::VectorXd& p, double tol = 1e-9,
                       Eigen::VectorXd* warm = nullptr);

double barycenter_objective(const TransportProblem& tp,
                            const std::vector<DiscreteMeasure>& measures,
                            const Eigen::VectorXd& p);

// Projected-gradient certificate p - proj_simplex(p - grad).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

// Minimizes sum_i W_i(p) over the simplex by mirror (entropic) descent with
// exact conjugate gradients; converged when the projected-gradient norm is
// <= tol. Throws std::runtime_error when the iteration budget runs out.
Eigen::VectorXd centralized_barycenter(const TransportProblem& tp,
                                       const std::vector<DiscreteMeasure>& measures,
                                       double tol, int max_iters = 20000,
                                       double* objective_out = nullptr);

}  // namespace dwb
