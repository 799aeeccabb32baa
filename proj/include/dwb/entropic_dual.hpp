#pragma once

#include <Eigen/Dense>

#include "dwb/measures.hpp"
#include "dwb/rng.hpp"

namespace dwb {

// Shared semi-discrete transport setup: fixed support, cost, and entropic
// regularization gamma > 0. Costs are multiplied by cost_scale (image
// scenarios normalize the maximum cost to 1).
struct TransportProblem {
  SupportGrid grid;
  CostKind cost = CostKind::squared_euclidean;
  double cost_scale = 1.0;
  double gamma = 0.1;
};

TransportProblem make_transport_problem(SupportGrid grid, CostKind cost, double gamma,
                                        double cost_scale = 1.0);

Eigen::VectorXd cost_vector(const TransportProblem& tp, const BasePoint& y);

// Softmax of (lam - costs)/gamma with max subtraction; always a simplex
// vector, safe for arbitrarily large inputs.
Eigen::VectorXd softmax_transport(const Eigen::VectorXd& lam, const Eigen::VectorXd& costs,
                                  double gamma);
Eigen::VectorXd softmax_transport(const TransportProblem& tp, const Eigen::VectorXd& lam,
                                  const BasePoint& y);

// gamma * log sum_l exp((lam_l - c_l(y))/gamma), stabilized.
double dual_value_at(const TransportProblem& tp, const Eigen::VectorXd& lam,
                     const BasePoint& y);

// Exact conjugate gradient for a discrete measure: the weighted sum of
// transport softmaxes over the atoms. Lies in the simplex.
Eigen::VectorXd dual_gradient_exact(const TransportProblem& tp, const DiscreteMeasure& d,
                                    const Eigen::VectorXd& lam);

// Mini-batch estimator: mean of batch softmaxes at i.i.d. samples, consumed
// sequentially from the caller's stream. Unbiased for the exact gradient.
Eigen::VectorXd dual_gradient_sampled(const TransportProblem& tp, const MeasureOracle& o,
                                      const Eigen::VectorXd& lam, int batch, RngStream& rng);

// Conjugate value up to the lam-independent additive constant. Exact finite
// sum for discrete measures (batch ignored); Monte Carlo otherwise.
double dual_value(const TransportProblem& tp, const MeasureOracle& o,
                  const Eigen::VectorXd& lam, int batch, RngStream* rng);

}  // namespace dwb
