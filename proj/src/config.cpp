#include "dwb/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace dwb {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_doubles(const std::string& s, size_t expect,
                                  const std::string& what) {
  std::istringstream is(s);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  if (out.size() != expect)
    throw std::invalid_argument(what + ": expected " + std::to_string(expect) +
                                " numeric parameters");
  return out;
}

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw std::invalid_argument(field + ": " + why);
}

}  // namespace

void validate_config(const RunConfig& cfg) {
  if (cfg.agents < 1) bad_field("graph.m", "must be >= 1");
  if (cfg.topology == TopologyKind::erdos_renyi && cfg.edge_prob != 0.0 &&
      !(cfg.edge_prob > 0.0 && cfg.edge_prob <= 1.0))
    bad_field("graph.edge_prob", "must be in (0, 1]");
  if (cfg.space == SpaceKind::grid2d) {
    if (cfg.rows < 1 || cfg.cols < 1) bad_field("support.rows", "grid2d needs rows, cols >= 1");
    if (cfg.support_size != cfg.rows * cfg.cols)
      bad_field("support.n", "must equal rows * cols for grid2d");
  } else if (cfg.support_size < 1) {
    bad_field("support.n", "must be >= 1");
  }
  if (cfg.space == SpaceKind::line && !(cfg.support_min < cfg.support_max))
    bad_field("support.min", "must be < support.max");
  if (cfg.cost == CostKind::squared_angular && cfg.space != SpaceKind::circle)
    bad_field("support.cost", "squared_angular requires the circle space");
  if (cfg.cost == CostKind::squared_euclidean && cfg.space == SpaceKind::circle)
    bad_field("support.cost", "squared_euclidean not defined on the circle space");
  if (!(cfg.cost_scale > 0.0)) bad_field("support.cost_scale", "must be > 0");
  if (cfg.generator.empty()) {
    if (static_cast<int>(cfg.measure_specs.size()) != cfg.agents)
      bad_field("measures.agent", "need exactly one spec per agent (or a generator)");
  } else if (!cfg.measure_specs.empty()) {
    bad_field("measures.all", "generator and per-agent specs are mutually exclusive");
  }
  if (!(cfg.gamma > 0.0)) bad_field("solver.gamma", "must be > 0");
  if (!(cfg.epsilon > 0.0)) bad_field("solver.epsilon", "must be > 0");
  if (cfg.rounds < 0 && !(cfg.radius > 0.0))
    bad_field("solver.rounds", "set rounds >= 0 or a positive solver.radius");
  if (cfg.fixed_batch < 0) bad_field("solver.fixed_batch", "must be >= 0");
  if (cfg.batch_cap < 1) bad_field("solver.batch_cap", "must be >= 1");
  if (cfg.workers < 1) bad_field("solver.workers", "must be >= 1");
  if (cfg.record_every < 1) bad_field("output.record_every", "must be >= 1");
  if (cfg.render_pgm && cfg.space != SpaceKind::grid2d)
    bad_field("output.render_pgm", "only available for grid2d supports");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  cfg.measure_specs.clear();
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string field = section + "." + key;
    try {
      if (field == "graph.topology") cfg.topology = topology_kind_from_string(value);
      else if (field == "graph.m") cfg.agents = std::stoi(value);
      else if (field == "graph.edge_prob") cfg.edge_prob = std::stod(value);
      else if (field == "support.space") cfg.space = space_kind_from_string(value);
      else if (field == "support.n") cfg.support_size = std::stoi(value);
      else if (field == "support.min") cfg.support_min = std::stod(value);
      else if (field == "support.max") cfg.support_max = std::stod(value);
      else if (field == "support.rows") cfg.rows = std::stoi(value);
      else if (field == "support.cols") cfg.cols = std::stoi(value);
      else if (field == "support.cost") cfg.cost = cost_kind_from_string(value);
      else if (field == "support.cost_scale") cfg.cost_scale = std::stod(value);
      else if (field == "measures.agent") cfg.measure_specs.push_back(value);
      else if (field == "measures.all") cfg.generator = value;
      else if (field == "solver.algorithm") cfg.algorithm = algorithm_from_string(value);
      else if (field == "solver.gamma") cfg.gamma = std::stod(value);
      else if (field == "solver.epsilon") cfg.epsilon = std::stod(value);
      else if (field == "solver.rounds") cfg.rounds = std::stoi(value);
      else if (field == "solver.radius") cfg.radius = std::stod(value);
      else if (field == "solver.seed") cfg.seed = std::stoull(value);
      else if (field == "solver.fixed_batch") cfg.fixed_batch = std::stoi(value);
      else if (field == "solver.batch_cap") cfg.batch_cap = std::stoi(value);
      else if (field == "solver.exact") cfg.exact = (value == "true" || value == "1");
      else if (field == "solver.workers") cfg.workers = std::stoi(value);
      else if (field == "output.dir") cfg.out_dir = value;
      else if (field == "output.record_every") cfg.record_every = std::stoi(value);
      else if (field == "output.render_pgm") cfg.render_pgm = (value == "true" || value == "1");
      else if (field == "output.wall_time") cfg.record_wall_time = (value == "true" || value == "1");
      else throw std::invalid_argument(field + ": unknown config key");
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument(field + ": malformed value '" + value + "'");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "[graph]\n";
  os << "topology = " << to_string(cfg.topology) << "\n";
  os << "m = " << cfg.agents << "\n";
  os << "edge_prob = " << fmt(cfg.edge_prob) << "\n";
  os << "\n[support]\n";
  os << "space = " << to_string(cfg.space) << "\n";
  os << "n = " << cfg.support_size << "\n";
  os << "min = " << fmt(cfg.support_min) << "\n";
  os << "max = " << fmt(cfg.support_max) << "\n";
  os << "rows = " << cfg.rows << "\n";
  os << "cols = " << cfg.cols << "\n";
  os << "cost = " << to_string(cfg.cost) << "\n";
  os << "cost_scale = " << fmt(cfg.cost_scale) << "\n";
  os << "\n[measures]\n";
  if (!cfg.generator.empty()) os << "all = " << cfg.generator << "\n";
  for (const auto& spec : cfg.measure_specs) os << "agent = " << spec << "\n";
  os << "\n[solver]\n";
  os << "algorithm = " << to_string(cfg.algorithm) << "\n";
  os << "gamma = " << fmt(cfg.gamma) << "\n";
  os << "epsilon = " << fmt(cfg.epsilon) << "\n";
  os << "rounds = " << cfg.rounds << "\n";
  os << "radius = " << fmt(cfg.radius) << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "fixed_batch = " << cfg.fixed_batch << "\n";
  os << "batch_cap = " << cfg.batch_cap << "\n";
  os << "exact = " << (cfg.exact ? "true" : "false") << "\n";
  os << "workers = " << cfg.workers << "\n";
  os << "\n[output]\n";
  os << "dir = " << cfg.out_dir << "\n";
  os << "record_every = " << cfg.record_every << "\n";
  os << "render_pgm = " << (cfg.render_pgm ? "true" : "false") << "\n";
  os << "wall_time = " << (cfg.record_wall_time ? "true" : "false") << "\n";
  return os.str();
}

RunConfig preset(const std::string& name, const std::string& image_dir) {
  RunConfig cfg;
  if (name == "gauss1d") {
    cfg.topology = TopologyKind::erdos_renyi;
    cfg.agents = 10;
    cfg.space = SpaceKind::line;
    cfg.support_size = 100;
    cfg.support_min = -5.0;
    cfg.support_max = 5.0;
    cfg.cost = CostKind::squared_euclidean;
    cfg.generator = "gaussian_range -4 4 0.1 0.6";
    cfg.algorithm = Algorithm::accel;
    cfg.gamma = 0.1;
    cfg.epsilon = 0.01;
    cfg.rounds = 1000;
    cfg.fixed_batch = 100;
    cfg.record_every = 10;
    return cfg;
  }
  if (name == "vonmises") {
    cfg.topology = TopologyKind::erdos_renyi;
    cfg.agents = 10;
    cfg.space = SpaceKind::circle;
    cfg.support_size = 100;
    cfg.support_min = 0.0;
    cfg.support_max = 0.0;
    cfg.cost = CostKind::squared_angular;
    cfg.generator = "vonmises_range 0 6.2831853071795862 1 4";
    cfg.algorithm = Algorithm::accel;
    cfg.gamma = 0.1;
    cfg.epsilon = 0.01;
    cfg.rounds = 1000;
    cfg.fixed_batch = 100;
    cfg.record_every = 10;
    return cfg;
  }
  if (name == "image_dir") {
    if (image_dir.empty())
      throw std::invalid_argument("preset image_dir: image directory required");
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(image_dir)) {
      if (!entry.is_regular_file()) continue;
      const auto ext = entry.path().extension().string();
      if (ext == ".pgm" || ext == ".txt") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
      throw std::invalid_argument("preset image_dir: no .pgm/.txt images in " + image_dir);
    int rows = 0, cols = 0;
    for (const auto& f : files) {
      const ImageData img = load_image(f);
      if (rows == 0) {
        rows = img.rows;
        cols = img.cols;
      } else if (img.rows != rows || img.cols != cols) {
        throw std::invalid_argument("preset image_dir: image size mismatch at " + f);
      }
    }
    cfg.topology = TopologyKind::erdos_renyi;
    cfg.agents = static_cast<int>(files.size());
    cfg.space = SpaceKind::grid2d;
    cfg.rows = rows;
    cfg.cols = cols;
    cfg.support_size = rows * cols;
    cfg.cost = CostKind::squared_euclidean;
    const double max_sq = static_cast<double>(rows - 1) * (rows - 1) +
                          static_cast<double>(cols - 1) * (cols - 1);
    cfg.cost_scale = max_sq > 0.0 ? 1.0 / max_sq : 1.0;
    for (const auto& f : files) cfg.measure_specs.push_back("image " + f);
    cfg.algorithm = Algorithm::accel;
    cfg.gamma = 0.1;
    cfg.epsilon = 0.01;
    cfg.rounds = 1000;
    cfg.exact = true;
    cfg.fixed_batch = 0;
    cfg.record_every = 10;
    cfg.render_pgm = true;
    if (cfg.support_size > 4096)
      std::cerr << "image_dir preset: n = " << cfg.support_size
                << "; exact mode is required and batch sampling is disabled "
                   "above the size guard, rounds will be expensive\n";
    return cfg;
  }
  throw std::invalid_argument("unknown preset: " + name);
}

MeasureOracle resolve_measure(const RunConfig& cfg, int id, const SupportGrid& grid) {
  std::string spec;
  if (!cfg.generator.empty()) {
    std::istringstream is(cfg.generator);
    std::string kind;
    is >> kind;
    std::string rest;
    std::getline(is, rest);
    RngStream rng = rng_stream(cfg.seed, kMeasureGenStream, static_cast<uint32_t>(id));
    if (kind == "gaussian_range") {
      const auto p = parse_doubles(rest, 4, "measures.all gaussian_range");
      const double mean = p[0] + (p[1] - p[0]) * rng.next_double();
      const double stddev = p[2] + (p[3] - p[2]) * rng.next_double();
      return make_gaussian(mean, stddev);
    }
    if (kind == "vonmises_range") {
      const auto p = parse_doubles(rest, 4, "measures.all vonmises_range");
      const double loc = p[0] + (p[1] - p[0]) * rng.next_double();
      const double kappa = p[2] + (p[3] - p[2]) * rng.next_double();
      return make_von_mises(loc, kappa);
    }
    throw std::invalid_argument("measures.all: unknown generator '" + kind + "'");
  }
  spec = cfg.measure_specs.at(static_cast<size_t>(id));
  std::istringstream is(spec);
  std::string kind;
  is >> kind;
  std::string rest;
  std::getline(is, rest);
  if (kind == "gaussian") {
    const auto p = parse_doubles(rest, 2, "measures.agent gaussian");
    return make_gaussian(p[0], p[1]);
  }
  if (kind == "vonmises") {
    const auto p = parse_doubles(rest, 2, "measures.agent vonmises");
    return make_von_mises(p[0], p[1]);
  }
  if (kind == "discrete") {
    const std::string path = trim(rest);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("measures.agent: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return discrete_from_csv(buf.str());
  }
  if (kind == "image") {
    const std::string path = trim(rest);
    return image_to_measure(load_image(path), grid);
  }
  throw std::invalid_argument("measures.agent: unknown measure kind '" + kind + "'");
}

}  // namespace dwb
