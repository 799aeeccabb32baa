#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dwb/agents.hpp"
#include "dwb/graph.hpp"
#include "dwb/measures.hpp"

namespace dwb {

// Full experiment description. Serialized as sectioned key-value text; see
// README for the grammar. parse/serialize round-trip exactly.
struct RunConfig {
  // [graph]
  TopologyKind topology = TopologyKind::complete;
  int agents = 2;
  double edge_prob = 0.0;  // erdos_renyi; 0 selects 2 ln(m)/m

  // [support]
  SpaceKind space = SpaceKind::line;
  int support_size = 100;  // n (line/circle); rows*cols for grid2d
  double support_min = -5.0;
  double support_max = 5.0;
  int rows = 0;
  int cols = 0;
  CostKind cost = CostKind::squared_euclidean;
  double cost_scale = 1.0;

  // [measures] one spec per agent, or a single generator applied to all
  std::vector<std::string> measure_specs;
  std::string generator;

  // [solver]
  Algorithm algorithm = Algorithm::accel;
  double gamma = 0.1;
  double epsilon = 0.01;
  int rounds = -1;          // -1: derive from radius
  double radius = 0.0;      // dual-norm bound R
  uint64_t seed = 0;
  int fixed_batch = 0;      // 0: schedule-driven
  int batch_cap = 10000;
  bool exact = false;
  int workers = 1;

  // [output]
  std::string out_dir;
  int record_every = 1;
  bool render_pgm = false;
  bool record_wall_time = false;

  bool operator==(const RunConfig&) const = default;
};

// Throws std::invalid_argument naming `section.key` on the first bad field.
void validate_config(const RunConfig& cfg);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

// Scenario presets: gauss1d, vonmises, image_dir (the latter needs the
// directory of equal-sized grayscale images, one per agent).
RunConfig preset(const std::string& name, const std::string& image_dir = "");

// Resolves one measure spec string ("gaussian <mean> <std>",
// "vonmises <loc> <kappa>", "discrete <csv>", "image <pgm|txt>") or applies
// the generator ("gaussian_range a b c d", "vonmises_range a b c d") for
// agent `id`.
MeasureOracle resolve_measure(const RunConfig& cfg, int id, const SupportGrid& grid);

}  // namespace dwb
