#include "dwb/entropic_dual.hpp"

#include <cmath>
#include <stdexcept>

namespace dwb {

TransportProblem make_transport_problem(SupportGrid grid, CostKind cost, double gamma,
                                        double cost_scale) {
  if (!(gamma > 0.0)) throw std::invalid_argument("transport problem: gamma must be > 0");
  if (!(cost_scale > 0.0))
    throw std::invalid_argument("transport problem: cost_scale must be > 0");
  return TransportProblem{std::move(grid), cost, cost_scale, gamma};
}

Eigen::VectorXd cost_vector(const TransportProblem& tp, const BasePoint& y) {
  return cost_vector(tp.cost, tp.grid, y, tp.cost_scale);
}

Eigen::VectorXd softmax_transport(const Eigen::VectorXd& lam, const Eigen::VectorXd& costs,
                                  double gamma) {
  const Eigen::ArrayXd u = (lam.array() - costs.array()) / gamma;
  const Eigen::ArrayXd e = (u - u.maxCoeff()).exp();
  return (e / e.sum()).matrix();
}

Eigen::VectorXd softmax_transport(const TransportProblem& tp, const Eigen::VectorXd& lam,
                                  const BasePoint& y) {
  return softmax_transport(lam, cost_vector(tp, y), tp.gamma);
}

double dual_value_at(const TransportProblem& tp, const Eigen::VectorXd& lam,
                     const BasePoint& y) {
  const Eigen::ArrayXd u = (lam.array() - cost_vector(tp, y).array()) / tp.gamma;
  const double mx = u.maxCoeff();
  return tp.gamma * (mx + std::log((u - mx).exp().sum()));
}

Eigen::VectorXd dual_gradient_exact(const TransportProblem& tp, const DiscreteMeasure& d,
                                    const Eigen::VectorXd& lam) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(lam.size());
  for (size_t a = 0; a < d.atoms.size(); ++a)
    acc += d.weights[static_cast<Eigen::Index>(a)] * softmax_transport(tp, lam, d.atoms[a]);
  return acc;
}

Eigen::VectorXd dual_gradient_sampled(const TransportProblem& tp, const MeasureOracle& o,
                                      const Eigen::VectorXd& lam, int batch, RngStream& rng) {
  if (batch < 1) throw std::invalid_argument("dual_gradient_sampled: batch must be >= 1");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(lam.size());
  for (int r = 0; r < batch; ++r) acc += softmax_transport(tp, lam, sample(o, rng));
  return acc / static_cast<double>(batch);
}

double dual_value(const TransportProblem& tp, const MeasureOracle& o,
                  const Eigen::VectorXd& lam, int batch, RngStream* rng) {
  if (const auto* d = std::get_if<DiscreteMeasure>(&o)) {
    double acc = 0.0;
    for (size_t a = 0; a < d->atoms.size(); ++a)
      acc += d->weights[static_cast<Eigen::Index>(a)] * dual_value_at(tp, lam, d->atoms[a]);
    return acc;
  }
  if (batch < 1) throw std::invalid_argument("dual_value: batch must be >= 1");
  if (rng == nullptr) throw std::invalid_argument("dual_value: sampling requires a stream");
  double acc = 0.0;
  for (int r = 0; r < batch; ++r) acc += dual_value_at(tp, lam, sample(o, *rng));
  return acc / static_cast<double>(batch);
}

}  // namespace dwb
