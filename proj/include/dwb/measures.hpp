#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "dwb/rng.hpp"

namespace dwb {

enum class SpaceKind { line, circle, grid2d };

struct BasePoint {
  double x = 0.0;
  double y = 0.0;
};

// Fixed barycenter support: n distinct points of the base space. Coordinate
// arrays are cached for vectorized cost evaluation.
struct SupportGrid {
  SpaceKind space = SpaceKind::line;
  std::vector<BasePoint> points;
  Eigen::ArrayXd xs, ys;

  int n() const { return static_cast<int>(points.size()); }
};

SupportGrid make_grid(SpaceKind space, std::vector<BasePoint> points);
SupportGrid line_grid(int n, double lo, double hi);
SupportGrid circle_grid(int n);                 // angles 2*pi*l/n
SupportGrid pixel_grid(int rows, int cols);     // pixel centers, row-major

enum class CostKind { squared_euclidean, squared_angular };

CostKind cost_kind_from_string(const std::string& s);
std::string to_string(CostKind kind);
SpaceKind space_kind_from_string(const std::string& s);
std::string to_string(SpaceKind kind);

// Transport cost c(z, y) >= 0 with c(z, z) = 0. squared_angular measures the
// shorter arc between angles, squared.
double transport_cost(CostKind kind, const BasePoint& z, const BasePoint& y);

// Component l equals scale * c(z_l, y). Throws on a cost/space mismatch.
Eigen::VectorXd cost_vector(CostKind kind, const SupportGrid& grid, const BasePoint& y,
                            double scale = 1.0);

struct GaussianMeasure {
  double mean = 0.0;
  double stddev = 1.0;
};

struct VonMisesMeasure {
  double loc = 0.0;
  double kappa = 1.0;
};

struct DiscreteMeasure {
  std::vector<BasePoint> atoms;
  Eigen::VectorXd weights;          // simplex, zero-weight atoms dropped
  std::vector<double> cumulative;   // for inverse-CDF sampling
};

using MeasureOracle = std::variant<GaussianMeasure, VonMisesMeasure, DiscreteMeasure>;

MeasureOracle make_gaussian(double mean, double stddev);
MeasureOracle make_von_mises(double loc, double kappa);
// Normalizes the weights; rejects negative weights and all-zero mass.
MeasureOracle make_discrete(std::vector<BasePoint> atoms, std::vector<double> weights);

bool is_discrete(const MeasureOracle& o);
const DiscreteMeasure& as_discrete(const MeasureOracle& o);

// One i.i.d. draw, deterministic given the stream state.
BasePoint sample(const MeasureOracle& o, RngStream& rng);

// Stream-deterministic samplers (Box-Muller; Best-Fisher rejection).
double sample_gaussian(RngStream& rng, double mean, double stddev);
double sample_von_mises(RngStream& rng, double loc, double kappa);  // in [0, 2*pi)

// Row-major grayscale image.
struct ImageData {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
};

// Binary PGM (P5, 8-bit) or plain whitespace-separated matrix text.
ImageData load_image(const std::string& path);
void write_pgm(const std::string& path, int rows, int cols, const Eigen::VectorXd& values);

// Atoms at the grid's pixel-center points, weights proportional to pixel
// values. Requires a grid2d support of matching size and at least one
// positive pixel.
MeasureOracle image_to_measure(const ImageData& image, const SupportGrid& grid);

// CSV rows `weight,coord...` (1 or 2 coordinates per atom).
std::string discrete_to_csv(const DiscreteMeasure& d);
MeasureOracle discrete_from_csv(const std::string& text);

}  // namespace dwb
