#include <doctest.h>

#include <cmath>
#include <vector>

#include "dwb/apdsgd.hpp"
#include "dwb/rng.hpp"

using namespace dwb;

namespace {

// Two simplex blocks with linear-plus-entropy objectives coupled by an
// agreement constraint A = sqrt(Wbar) ⊗ I for the single-edge graph, i.e.
// A x = (x1 - x2, x2 - x1) / sqrt(2). The conjugate responses are softmaxes,
// so phi has 2-Lipschitz gradient.
struct AgreementInstance {
  Eigen::VectorXd c1, c2;

  Eigen::VectorXd block_response(const Eigen::VectorXd& y, const Eigen::VectorXd& c) const {
    const Eigen::ArrayXd u = y.array() - c.array();
    const Eigen::ArrayXd e = (u - u.maxCoeff()).exp();
    return (e / e.sum()).matrix();
  }

  // x(-A^T lam): block i sees y_i = -(A^T lam)_i.
  Eigen::VectorXd primal(const Eigen::VectorXd& lam) const {
    const auto d = c1.size();
    const Eigen::VectorXd diff = (lam.segment(0, d) - lam.segment(d, d)) / std::sqrt(2.0);
    Eigen::VectorXd x(2 * d);
    x.segment(0, d) = block_response(-diff, c1);
    x.segment(d, d) = block_response(diff, c2);
    return x;
  }

  Eigen::VectorXd apply_A(const Eigen::VectorXd& x) const {
    const auto d = c1.size();
    const Eigen::VectorXd diff = (x.segment(0, d) - x.segment(d, d)) / std::sqrt(2.0);
    Eigen::VectorXd out(2 * d);
    out.segment(0, d) = diff;
    out.segment(d, d) = -diff;
    return out;
  }

  StochasticDualOracle oracle() const {
    StochasticDualOracle o;
    o.sample = [this](const Eigen::VectorXd& lam) {
      const Eigen::VectorXd x = primal(lam);
      return OracleSample{-apply_A(x), x};
    };
    o.apply_constraint = [this](const Eigen::VectorXd& x) { return apply_A(x); };
    return o;
  }
};

}  // namespace

TEST_CASE("next_alpha closed form") {
  CHECK(StepSchedule::next_alpha(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(StepSchedule::next_alpha(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(StepSchedule::next_alpha(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(StepSchedule::next_alpha(0.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(StepSchedule::next_alpha(-1.0, 1.0), std::invalid_argument);

  RngStream rng = rng_stream(31, 0, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const double C = rng.next_double() * 100.0;
    const double L = 0.01 + rng.next_double() * 50.0;
    const double a = StepSchedule::next_alpha(C, L);
    // Defining equation 2 L a^2 - a - C = 0.
    CHECK(std::abs(2.0 * L * a * a - a - C) <= 1e-12 * std::max(1.0, 2.0 * L * a * a));
  }
}

TEST_CASE("schedule growth bounds") {
  // C_1 = 1/(2L), then C_{k+1} = C_k + alpha_{k+1} = 2 L alpha_{k+1}^2 with
  // C_k >= (k+1)^2 / (8L) and alpha_{k+1} >= (k+2) / (4L).
  for (const double L : {0.1, 1.0, 40.0}) {
    StepSchedule sched(L);
    sched.ensure(10000);
    CHECK(sched.alpha(0) == 0.0);
    CHECK(sched.C(0) == 0.0);
    CHECK(sched.C(1) == doctest::Approx(1.0 / (2.0 * L)).epsilon(1e-14));
    for (int k = 0; k < 10000; ++k) {
      const double a = sched.alpha(k + 1);
      const double C = sched.C(k + 1);
      CHECK(std::abs(C - (sched.C(k) + a)) == 0.0);
      CHECK(std::abs(2.0 * L * a * a - C) <= 1e-10 * C);
      CHECK(C >= (k + 2.0) * (k + 2.0) / (8.0 * L) * (1.0 - 1e-12));
      CHECK(a >= (k + 2.0) / (4.0 * L) * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("asgd fixed points and first step") {
  Eigen::VectorXd lam0(2);
  lam0 << 1.0, -2.0;
  StepSchedule sched(1.0);

  // Zero gradient: everything stays put forever.
  StochasticDualOracle zero;
  zero.sample = [](const Eigen::VectorXd& lam) {
    return OracleSample{Eigen::VectorXd::Zero(lam.size()), {}};
  };
  SolverState st = init_solver(lam0);
  for (int k = 0; k < 5; ++k) {
    asgd_step(st, zero, sched);
    CHECK(st.lambda == lam0);
    CHECK(st.zeta == lam0);
    CHECK(st.eta == lam0);
  }

  // k = 0 evaluates the gradient at lambda_1 = lambda_0 (C_0 = 0).
  Eigen::VectorXd seen;
  StochasticDualOracle spy;
  spy.sample = [&seen](const Eigen::VectorXd& lam) {
    seen = lam;
    return OracleSample{Eigen::VectorXd::Zero(lam.size()), {}};
  };
  SolverState st2 = init_solver(lam0);
  asgd_step(st2, spy, sched);
  CHECK(seen == lam0);
}

TEST_CASE("asgd on a quadratic meets the two-over-C rate") {
  // phi(lam) = lam^2 / 2, minimum 0, L = 1, starting at lambda_0 = 1 = R.
  StochasticDualOracle quad;
  quad.sample = [](const Eigen::VectorXd& lam) { return OracleSample{lam, {}}; };
  StepSchedule sched(1.0);
  SolverState st = init_solver(Eigen::VectorXd::Ones(1));
  double prev_phi = 0.5;
  for (int k = 0; k < 50; ++k) {
    asgd_step(st, quad, sched);
    const double phi = 0.5 * st.eta.squaredNorm();
    if (k == 0) CHECK(phi <= prev_phi);  // first step already descends
  }
  const double phi50 = 0.5 * st.eta.squaredNorm();
  CHECK(phi50 <= 2.0 / sched.C(50));

  // Better-than-1/N decay of the gap.
  SolverState a = init_solver(Eigen::VectorXd::Ones(1));
  StepSchedule sa(1.0);
  for (int k = 0; k < 50; ++k) asgd_step(a, quad, sa);
  const double gap50 = 0.5 * a.eta.squaredNorm();
  for (int k = 50; k < 100; ++k) asgd_step(a, quad, sa);
  const double gap100 = 0.5 * a.eta.squaredNorm();
  CHECK(gap100 / gap50 <= 0.6);
}

TEST_CASE("apdsgd primal average identities") {
  // Constant primal response: x_hat is pinned at it from the first step.
  Eigen::VectorXd xstar(3);
  xstar << 0.2, 0.3, 0.5;
  StochasticDualOracle constant;
  constant.sample = [&xstar](const Eigen::VectorXd& lam) {
    return OracleSample{Eigen::VectorXd::Zero(lam.size()), xstar};
  };
  StepSchedule sched(2.0);
  SolverState st = init_solver(Eigen::VectorXd::Zero(3), 3);
  for (int k = 0; k < 7; ++k) {
    apdsgd_step(st, constant, sched);
    CHECK((st.x_hat - xstar).lpNorm<Eigen::Infinity>() <= 1e-14);
  }

  // C_N x_hat_N reconstructs the alpha-weighted sum of logged responses.
  RngStream rng = rng_stream(32, 0, 0);
  std::vector<Eigen::VectorXd> log;
  StochasticDualOracle noisy;
  noisy.sample = [&rng, &log](const Eigen::VectorXd& lam) {
    Eigen::VectorXd g(lam.size()), x(2);
    for (int i = 0; i < g.size(); ++i) g[i] = rng.next_double() - 0.5;
    x << rng.next_double(), rng.next_double();
    log.push_back(x);
    return OracleSample{g, x};
  };
  StepSchedule sched2(1.0);
  SolverState st2 = init_solver(Eigen::VectorXd::Zero(2), 2);
  const int N = 40;
  for (int k = 0; k < N; ++k) apdsgd_step(st2, noisy, sched2);
  Eigen::VectorXd weighted = Eigen::VectorXd::Zero(2);
  for (int k = 0; k < N; ++k) weighted += sched2.alpha(k + 1) * log[static_cast<size_t>(k)];
  CHECK((sched2.C(N) * st2.x_hat - weighted).norm() <=
        1e-10 * std::max(1.0, weighted.norm()));

  // x_hat stays in the convex hull of the responses (1-D projection).
  double lo = 1e300, hi = -1e300;
  for (const auto& x : log) {
    lo = std::min(lo, x[0]);
    hi = std::max(hi, x[0]);
  }
  CHECK(st2.x_hat[0] >= lo - 1e-12);
  CHECK(st2.x_hat[0] <= hi + 1e-12);
}

TEST_CASE("oracle consistency check") {
  AgreementInstance inst;
  inst.c1 = Eigen::Vector3d(0.2, 1.0, 0.5);
  inst.c2 = Eigen::Vector3d(0.9, 0.1, 0.4);
  const StochasticDualOracle o = inst.oracle();
  Eigen::VectorXd lam = Eigen::VectorXd::LinSpaced(6, -1.0, 1.0);
  CHECK(oracle_consistent(o, lam));
}

TEST_CASE("apdsgd feasibility error decays faster than one over N") {
  AgreementInstance inst;
  inst.c1 = Eigen::Vector3d(0.2, 1.0, 0.5);
  inst.c2 = Eigen::Vector3d(0.9, 0.1, 0.4);
  const StochasticDualOracle o = inst.oracle();

  auto feasibility = [&inst, &o](int N) {
    StepSchedule sched(2.0);  // lambda_max of the single-edge laplacian
    SolverState st = init_solver(Eigen::VectorXd::Zero(6), 6);
    for (int k = 0; k < N; ++k) apdsgd_step(st, o, sched);
    return o.apply_constraint(st.x_hat).norm();
  };

  for (const int N : {50, 100, 200}) {
    const double e1 = feasibility(N);
    const double e2 = feasibility(2 * N);
    CHECK(e2 / e1 <= 0.6);
  }
}
