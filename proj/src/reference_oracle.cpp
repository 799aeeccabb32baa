#include "dwb/reference_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dwb {

DenseState init_dense_state(int m, int n) {
  DenseState st;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  st.lam.assign(m, zero);
  st.zeta.assign(m, zero);
  st.eta.assign(m, zero);
  st.p_hat.assign(m, zero);
  st.grads.assign(m, zero);
  st.samples.assign(m, BasePoint{});
  return st;
}

namespace {

// Same accumulation as agents::laplacian_combine, with the adjacency read
// off the materialized Laplacian row.
Eigen::VectorXd dense_row_combine(const Eigen::MatrixXd& Wbar, int i,
                                  const std::vector<Eigen::VectorXd>& grads) {
  const int m = static_cast<int>(Wbar.rows());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(grads[0].size());
  for (int j = 0; j < m; ++j) {
    const double w = Wbar(i, j);
    if (w == 0.0) continue;
    if (j == i)
      acc += w * grads[static_cast<size_t>(j)];
    else
      acc -= grads[static_cast<size_t>(j)];
  }
  return acc;
}

}  // namespace

void dense_decentralized_step(DenseState& state, const Eigen::MatrixXd& Wbar,
                              Algorithm alg, const TransportProblem& tp,
                              const std::vector<MeasureOracle>& measures,
                              StepSchedule& schedule, int k, double lipschitz,
                              int total_rounds, uint64_t master_seed, bool exact) {
  const int m = static_cast<int>(Wbar.rows());
  if (m > 50) throw std::invalid_argument("dense_decentralized_step: m > 50");
  if (static_cast<int>(measures.size()) != m)
    throw std::invalid_argument("dense_decentralized_step: measure count mismatch");

  double a = 0.0, Ck = 0.0, Ck1 = 0.0;
  int batch = 1;
  if (alg == Algorithm::accel) {
    schedule.ensure(k + 1);
    a = schedule.alpha(k + 1);
    Ck = schedule.C(k);
    Ck1 = schedule.C(k + 1);
  }

  for (int i = 0; i < m; ++i) {
    const size_t si = static_cast<size_t>(i);
    if (alg == Algorithm::accel)
      state.lam[si] = (a * state.zeta[si] + Ck * state.eta[si]) / Ck1;
    RngStream rng = rng_stream(master_seed, static_cast<uint32_t>(i),
                               static_cast<uint32_t>(k));
    if (exact) {
      state.grads[si] = dual_gradient_exact(tp, as_discrete(measures[si]), state.lam[si]);
    } else if (batch == 1) {
      state.samples[si] = sample(measures[si], rng);
      state.grads[si] = softmax_transport(tp, state.lam[si], state.samples[si]);
    } else {
      state.grads[si] = dual_gradient_sampled(tp, measures[si], state.lam[si], batch, rng);
    }
  }

  for (int i = 0; i < m; ++i) {
    const size_t si = static_cast<size_t>(i);
    const Eigen::VectorXd combined = dense_row_combine(Wbar, i, state.grads);
    if (alg == Algorithm::nonaccel) {
      state.lam[si] -= combined / lipschitz;
      const Eigen::VectorXd response =
          exact ? dual_gradient_exact(tp, as_discrete(measures[si]), state.lam[si])
                : softmax_transport(tp, state.lam[si], state.samples[si]);
      state.p_hat[si] += response / static_cast<double>(total_rounds);
    } else {
      state.zeta[si] -= a * combined;
      state.eta[si] = (a * state.zeta[si] + Ck * state.eta[si]) / Ck1;
      state.p_hat[si] = (a * state.grads[si] + Ck * state.p_hat[si]) / Ck1;
    }
  }
}

namespace {

// Inner ascent on h(lam) = <p, lam> - W*(lam): concave with 1/gamma-smooth
// gradient p - grad(W*), solved by Nesterov's method with step gamma. The
// iterate is re-centered every step to pin the constant-shift direction.
struct InnerSolve {
  Eigen::VectorXd lam;
  double value = 0.0;
  bool converged = false;
};

InnerSolve conjugate_max(const TransportProblem& tp, const DiscreteMeasure& d,
                         const Eigen::VectorXd& p, double tol, int budget,
                         const Eigen::VectorXd* warm) {
  const Eigen::Index n = p.size();
  Eigen::VectorXd lam =
      (warm && warm->size() == n) ? *warm : Eigen::VectorXd::Zero(n);
  Eigen::VectorXd prev = lam;
  double t_prev = 1.0;
  InnerSolve out;
  for (int it = 0; it < budget; ++it) {
    const Eigen::VectorXd grad = p - dual_gradient_exact(tp, d, lam);
    if (grad.lpNorm<Eigen::Infinity>() <= tol) {
      out.converged = true;
      break;
    }
    Eigen::VectorXd next = lam + tp.gamma * grad;
    next.array() -= next.mean();
    const double t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_prev * t_prev));
    Eigen::VectorXd accel = next + ((t_prev - 1.0) / t) * (next - prev);
    accel.array() -= accel.mean();
    prev = next;
    lam = accel;
    t_prev = t;
  }
  if (!out.converged) {
    // Fall back to the last plain-ascent iterate.
    lam = prev;
  }
  out.lam = lam;
  out.value = p.dot(lam) - dual_value(tp, MeasureOracle{d}, lam, 1, nullptr);
  return out;
}

}  // namespace

double transport_value(const TransportProblem& tp, const DiscreteMeasure& d,
                       const Eigen::VectorXd& p, double tol, Eigen::VectorXd* warm) {
  if (p.minCoeff() <= 0.0)
    throw std::invalid_argument("transport_value: p must be strictly positive");
  const InnerSolve inner = conjugate_max(tp, d, p, tol, 200000, warm);
  if (!inner.converged)
    throw std::runtime_error("transport_value: inner ascent did not converge");
  if (warm) *warm = inner.lam;
  return inner.value;
}

double barycenter_objective(const TransportProblem& tp,
                            const std::vector<DiscreteMeasure>& measures,
                            const Eigen::VectorXd& p) {
  double total = 0.0;
  for (const auto& d : measures) total += transport_value(tp, d, p);
  return total;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0, theta = 0.0;
  int rho = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumsum += u[static_cast<size_t>(i)];
    const double candidate = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<size_t>(i)] > candidate) {
      rho = static_cast<int>(i + 1);
      theta = candidate;
    }
  }
  (void)rho;
  return (v.array() - theta).max(0.0).matrix();
}

Eigen::VectorXd centralized_barycenter(const TransportProblem& tp,
                                       const std::vector<DiscreteMeasure>& measures,
                                       double tol, int max_iters, double* objective_out) {
  if (measures.empty()) throw std::invalid_argument("centralized_barycenter: no measures");
  const Eigen::Index n = tp.grid.n();
  size_t atom_total = 0;
  for (const auto& d : measures) atom_total += d.atoms.size();
  if (static_cast<size_t>(n) * atom_total > 100000)
    throw std::invalid_argument("centralized_barycenter: instance too large");

  const size_t m = measures.size();
  Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  std::vector<Eigen::VectorXd> warm(m);
  const double inner_tol = std::min(tol * 1e-2, 1e-8);

  auto evaluate = [&](const Eigen::VectorXd& q, Eigen::VectorXd* grad) {
    double value = 0.0;
    if (grad) grad->setZero(n);
    for (size_t i = 0; i < m; ++i) {
      const InnerSolve inner = conjugate_max(tp, measures[i], q, inner_tol, 200000,
                                             warm[i].size() == n ? &warm[i] : nullptr);
      if (!inner.converged)
        throw std::runtime_error("centralized_barycenter: inner ascent stalled");
      warm[i] = inner.lam;
      value += inner.value;
      if (grad) *grad += inner.lam;  // envelope: d W_i / d p = inner maximizer
    }
    return value;
  };

  Eigen::VectorXd grad(n);
  double value = evaluate(p, &grad);
  double step = tp.gamma;
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd pg = p - project_simplex(p - grad);
    if (pg.norm() <= tol) {
      if (objective_out) *objective_out = value;
      return p;
    }
    // Entropic (multiplicative) trial steps keep p strictly interior.
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      Eigen::ArrayXd logq = p.array().log() - step * grad.array();
      logq -= logq.maxCoeff();
      Eigen::VectorXd q = logq.exp().matrix();
      q /= q.sum();
      Eigen::VectorXd qgrad(n);
      const double qvalue = evaluate(q, &qgrad);
      if (qvalue <= value - 1e-14 * std::abs(value)) {
        p = q;
        value = qvalue;
        grad = qgrad;
        step = std::min(step * 2.0, 1e6);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (pg.norm() <= tol * 10.0) {
        if (objective_out) *objective_out = value;
        return p;
      }
      throw std::runtime_error("centralized_barycenter: line search stalled");
    }
  }
  throw std::runtime_error("centralized_barycenter: iteration budget exhausted");
}

}  // namespace dwb
