#include "dwb/sim_runtime.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

namespace dwb {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Chunked fan-out over agents; every task writes only its own slots, so the
// result is identical for any worker count.
void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  const int used = std::min(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(used));
  for (int w = 0; w < used; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < count; i += used) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

SupportGrid grid_from_config(const RunConfig& cfg) {
  switch (cfg.space) {
    case SpaceKind::line:
      return line_grid(cfg.support_size, cfg.support_min, cfg.support_max);
    case SpaceKind::circle:
      return circle_grid(cfg.support_size);
    case SpaceKind::grid2d:
      return pixel_grid(cfg.rows, cfg.cols);
  }
  throw std::invalid_argument("support.space: unknown");
}

double metric_consensus(const Laplacian& lap, const std::vector<AgentState>& agents) {
  const Eigen::Index n = agents.front().p_hat.size();
  Eigen::VectorXd stacked(static_cast<Eigen::Index>(agents.size()) * n);
  for (size_t i = 0; i < agents.size(); ++i)
    stacked.segment(static_cast<Eigen::Index>(i) * n, n) = agents[i].p_hat;
  return consensus_norm(lap, stacked);
}

double metric_dual_value(const TransportProblem& tp, const std::vector<AgentState>& agents,
                         uint64_t master_seed, long round, int eval_batch) {
  RngStream rng = rng_stream(master_seed, kMetricsStream, static_cast<uint32_t>(round));
  double total = 0.0;
  for (const AgentState& agent : agents)
    total += dual_value(tp, agent.measure, agent.lam_bar, eval_batch, &rng);
  return total;
}

std::string trace_to_csv(const Trace& trace) {
  std::string out = "round,dual_value,consensus,batch,wall_ms\n";
  for (const TraceRow& row : trace.rows) {
    out += std::to_string(row.round);
    out += ",";
    out += fmt(row.dual_value);
    out += ",";
    out += fmt(row.consensus);
    out += ",";
    out += std::to_string(row.batch);
    out += ",";
    out += std::to_string(row.wall_ms);
    out += "\n";
  }
  return out;
}

std::string barycenter_to_csv(const std::vector<AgentState>& agents,
                              const Eigen::VectorXd& mean_p) {
  std::string out;
  for (const AgentState& agent : agents) {
    for (Eigen::Index l = 0; l < agent.p_hat.size(); ++l) {
      if (l) out += ",";
      out += fmt(agent.p_hat[l]);
    }
    out += "\n";
  }
  for (Eigen::Index l = 0; l < mean_p.size(); ++l) {
    if (l) out += ",";
    out += fmt(mean_p[l]);
  }
  out += "\n";
  return out;
}

RunResult run(const RunConfig& cfg) {
  validate_config(cfg);

  const Topology topo = cfg.agents == 1
                            ? make_topology(1, {})
                            : build_topology(cfg.topology, cfg.agents, cfg.edge_prob,
                                             cfg.seed);
  const Laplacian lap = laplacian(topo);
  const int m = cfg.agents;

  RunResult result;
  result.lambda_max = m == 1 ? 0.0 : lambda_max(lap);
  // The one-agent graph has an all-zero Laplacian; any positive constant
  // keeps the schedule finite and every update is zero regardless.
  result.lipschitz = (m == 1 ? 1.0 : result.lambda_max) / cfg.gamma;
  const int total_rounds =
      cfg.rounds >= 0 ? cfg.rounds
                      : derived_rounds(result.lambda_max, cfg.radius, cfg.epsilon,
                                       cfg.gamma);
  result.rounds = total_rounds;

  SupportGrid grid = grid_from_config(cfg);
  const int n = grid.n();
  TransportProblem tp =
      make_transport_problem(std::move(grid), cfg.cost, cfg.gamma, cfg.cost_scale);

  std::vector<AgentState> agents;
  agents.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    MeasureOracle oracle = resolve_measure(cfg, i, tp.grid);
    if (cfg.exact && !is_discrete(oracle))
      throw std::invalid_argument("solver.exact: agent " + std::to_string(i) +
                                  " holds a non-discrete measure");
    agents.push_back(init_agent(i, std::move(oracle), neighbors(topo, i), n));
  }

  StepSchedule schedule(result.lipschitz);
  if (cfg.algorithm == Algorithm::accel) schedule.ensure(total_rounds);

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&]() {
    return cfg.record_wall_time
               ? std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count()
               : 0l;
  };

  Trace trace;
  auto record = [&](long round, long batch) {
    TraceRow row;
    row.round = round;
    row.dual_value = metric_dual_value(tp, agents, cfg.seed, round);
    row.consensus = metric_consensus(lap, agents);
    row.batch = batch;
    row.wall_ms = elapsed_ms();
    trace.rows.push_back(row);
  };
  record(0, 0);

  std::vector<RoundMessage> msgs(static_cast<size_t>(m));
  std::vector<Inbox> inboxes(static_cast<size_t>(m));
  bool cap_warned = false;

  for (int k = 0; k < total_rounds; ++k) {
    long batch_used = 0;
    int batch = 1;
    if (cfg.algorithm == Algorithm::accel && !cfg.exact) {
      if (cfg.fixed_batch > 0) {
        batch = cfg.fixed_batch;
      } else {
        bool clamped = false;
        batch = batch_size(k, schedule, m, cfg.gamma, cfg.epsilon, cfg.batch_cap,
                           &clamped);
        if (clamped && !cap_warned) {
          result.warnings.push_back("batch schedule clamped to cap " +
                                    std::to_string(cfg.batch_cap) + " from round " +
                                    std::to_string(k + 1));
          std::cerr << result.warnings.back() << "\n";
          cap_warned = true;
        }
      }
      batch_used = batch;
    } else if (!cfg.exact) {
      batch_used = 1;  // the non-accelerated method samples once per round
    }

    parallel_for(m, cfg.workers, [&](int i) {
      AgentState& agent = agents[static_cast<size_t>(i)];
      agent.rng = rng_stream(cfg.seed, static_cast<uint32_t>(i), static_cast<uint32_t>(k));
      msgs[static_cast<size_t>(i)] =
          cfg.algorithm == Algorithm::accel
              ? accel_share(agent, tp, schedule, k, batch, cfg.exact)
              : nonaccel_share(agent, tp, cfg.exact);
    });

    for (auto& inbox : inboxes) inbox.clear();
    for (const auto& [i, j] : topo.edges) {
      inboxes[static_cast<size_t>(i)].push_back(msgs[static_cast<size_t>(j)]);
      inboxes[static_cast<size_t>(j)].push_back(msgs[static_cast<size_t>(i)]);
    }
    for (auto& inbox : inboxes)
      std::sort(inbox.begin(), inbox.end(),
                [](const RoundMessage& a, const RoundMessage& b) { return a.sender < b.sender; });

    parallel_for(m, cfg.workers, [&](int i) {
      AgentState& agent = agents[static_cast<size_t>(i)];
      if (cfg.algorithm == Algorithm::accel)
        accel_apply(agent, inboxes[static_cast<size_t>(i)], schedule, k);
      else
        nonaccel_apply(agent, inboxes[static_cast<size_t>(i)], tp, result.lipschitz,
                       total_rounds, cfg.exact);
    });

    const long round = k + 1;
    if (round % cfg.record_every == 0 || round == total_rounds) record(round, batch_used);
  }

  result.mean_p = Eigen::VectorXd::Zero(n);
  for (const AgentState& agent : agents) result.mean_p += agent.p_hat;
  result.mean_p /= static_cast<double>(m);
  result.trace = std::move(trace);
  result.agents = std::move(agents);

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path dir(cfg.out_dir);
    write_file((dir / "trace.csv").string(), trace_to_csv(result.trace));
    write_file((dir / "barycenter.csv").string(),
               barycenter_to_csv(result.agents, result.mean_p));
    write_file((dir / "config.ini").string(), serialize_config(cfg));
    if (cfg.render_pgm) {
      for (const AgentState& agent : result.agents) {
        char name[32];
        std::snprintf(name, sizeof(name), "agent_%03d.pgm", agent.id);
        write_pgm((dir / name).string(), cfg.rows, cfg.cols, agent.p_hat);
      }
      write_pgm((dir / "mean.pgm").string(), cfg.rows, cfg.cols, result.mean_p);
    }
  }
  return result;
}

}  // namespace dwb
