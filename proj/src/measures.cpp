#include "dwb/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dwb {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

double angular_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

}  // namespace

SupportGrid make_grid(SpaceKind space, std::vector<BasePoint> points) {
  if (points.empty()) throw std::invalid_argument("support grid: needs at least one point");
  for (size_t a = 0; a < points.size(); ++a)
    for (size_t b = a + 1; b < points.size(); ++b)
      if (points[a].x == points[b].x && points[a].y == points[b].y)
        throw std::invalid_argument("support grid: points must be distinct");
  SupportGrid g;
  g.space = space;
  g.points = std::move(points);
  const int n = g.n();
  g.xs.resize(n);
  g.ys.resize(n);
  for (int l = 0; l < n; ++l) {
    g.xs[l] = g.points[l].x;
    g.ys[l] = g.points[l].y;
  }
  return g;
}

SupportGrid line_grid(int n, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("line_grid: n must be >= 1");
  std::vector<BasePoint> pts(n);
  for (int l = 0; l < n; ++l)
    pts[l].x = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(l) / (n - 1);
  return make_grid(SpaceKind::line, std::move(pts));
}

SupportGrid circle_grid(int n) {
  if (n < 1) throw std::invalid_argument("circle_grid: n must be >= 1");
  std::vector<BasePoint> pts(n);
  for (int l = 0; l < n; ++l) pts[l].x = kTwoPi * static_cast<double>(l) / n;
  return make_grid(SpaceKind::circle, std::move(pts));
}

SupportGrid pixel_grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("pixel_grid: empty image");
  std::vector<BasePoint> pts;
  pts.reserve(static_cast<size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) pts.push_back({c + 0.5, r + 0.5});
  return make_grid(SpaceKind::grid2d, std::move(pts));
}

CostKind cost_kind_from_string(const std::string& s) {
  if (s == "squared_euclidean") return CostKind::squared_euclidean;
  if (s == "squared_angular") return CostKind::squared_angular;
  throw std::invalid_argument("unknown cost kind: " + s);
}

std::string to_string(CostKind kind) {
  return kind == CostKind::squared_euclidean ? "squared_euclidean" : "squared_angular";
}

SpaceKind space_kind_from_string(const std::string& s) {
  if (s == "line") return SpaceKind::line;
  if (s == "circle") return SpaceKind::circle;
  if (s == "grid2d") return SpaceKind::grid2d;
  throw std::invalid_argument("unknown space kind: " + s);
}

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::line: return "line";
    case SpaceKind::circle: return "circle";
    case SpaceKind::grid2d: return "grid2d";
  }
  return "?";
}

double transport_cost(CostKind kind, const BasePoint& z, const BasePoint& y) {
  if (kind == CostKind::squared_euclidean) {
    const double dx = z.x - y.x;
    const double dy = z.y - y.y;
    return dx * dx + dy * dy;
  }
  const double d = angular_distance(z.x, y.x);
  return d * d;
}

Eigen::VectorXd cost_vector(CostKind kind, const SupportGrid& grid, const BasePoint& y,
                            double scale) {
  if (kind == CostKind::squared_angular && grid.space != SpaceKind::circle)
    throw std::invalid_argument("cost_vector: squared_angular requires a circle grid");
  if (kind == CostKind::squared_euclidean && grid.space == SpaceKind::circle)
    throw std::invalid_argument("cost_vector: squared_euclidean on a circle grid");
  const int n = grid.n();
  Eigen::VectorXd out(n);
  if (kind == CostKind::squared_euclidean) {
    out = (scale * ((grid.xs - y.x).square() + (grid.ys - y.y).square())).matrix();
  } else {
    for (int l = 0; l < n; ++l) {
      const double d = angular_distance(grid.xs[l], y.x);
      out[l] = scale * d * d;
    }
  }
  return out;
}

MeasureOracle make_gaussian(double mean, double stddev) {
  if (!(stddev > 0.0)) throw std::invalid_argument("gaussian: stddev must be > 0");
  return GaussianMeasure{mean, stddev};
}

MeasureOracle make_von_mises(double loc, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("von mises: kappa must be > 0");
  return VonMisesMeasure{wrap_angle(loc), kappa};
}

MeasureOracle make_discrete(std::vector<BasePoint> atoms, std::vector<double> weights) {
  if (atoms.size() != weights.size())
    throw std::invalid_argument("discrete: atoms/weights size mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("discrete: negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("discrete: total mass must be positive");

  DiscreteMeasure d;
  for (size_t a = 0; a < atoms.size(); ++a) {
    if (weights[a] == 0.0) continue;  // keeps log paths finite downstream
    d.atoms.push_back(atoms[a]);
    d.cumulative.push_back(weights[a]);
  }
  const size_t n = d.atoms.size();
  d.weights.resize(static_cast<Eigen::Index>(n));
  double running = 0.0;
  for (size_t a = 0; a < n; ++a) {
    d.weights[static_cast<Eigen::Index>(a)] = d.cumulative[a] / total;
    running += d.cumulative[a] / total;
    d.cumulative[a] = running;
  }
  d.cumulative.back() = 1.0;
  return d;
}

bool is_discrete(const MeasureOracle& o) {
  return std::holds_alternative<DiscreteMeasure>(o);
}

const DiscreteMeasure& as_discrete(const MeasureOracle& o) {
  if (!is_discrete(o)) throw std::invalid_argument("expected a discrete measure");
  return std::get<DiscreteMeasure>(o);
}

double sample_gaussian(RngStream& rng, double mean, double stddev) {
  // Box-Muller, cosine branch only; two uniforms per draw keeps the stream
  // consumption fixed.
  const double u1 = rng.next_open();
  const double u2 = rng.next_double();
  return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double sample_von_mises(RngStream& rng, double loc, double kappa) {
  // Best & Fisher (1979) rejection with a wrapped-Cauchy envelope.
  const double a = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double b = (a - std::sqrt(2.0 * a)) / (2.0 * kappa);
  const double r = (1.0 + b * b) / (2.0 * b);
  for (;;) {
    const double z = std::cos(std::numbers::pi * rng.next_double());
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    const double u2 = rng.next_open();
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double sign = rng.next_double() < 0.5 ? -1.0 : 1.0;
      return wrap_angle(loc + sign * std::acos(std::clamp(f, -1.0, 1.0)));
    }
  }
}

BasePoint sample(const MeasureOracle& o, RngStream& rng) {
  if (const auto* g = std::get_if<GaussianMeasure>(&o))
    return {sample_gaussian(rng, g->mean, g->stddev), 0.0};
  if (const auto* v = std::get_if<VonMisesMeasure>(&o))
    return {sample_von_mises(rng, v->loc, v->kappa), 0.0};
  const auto& d = std::get<DiscreteMeasure>(o);
  const double u = rng.next_double();
  const auto it = std::upper_bound(d.cumulative.begin(), d.cumulative.end(), u);
  size_t idx = static_cast<size_t>(it - d.cumulative.begin());
  if (idx >= d.atoms.size()) idx = d.atoms.size() - 1;
  return d.atoms[idx];
}

ImageData load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image: " + path);
  std::string magic;
  in >> magic;
  ImageData img;
  if (magic == "P5") {
    auto next_token = [&in, &path]() {
      std::string tok;
      for (;;) {
        if (!(in >> tok)) throw std::runtime_error("truncated PGM header: " + path);
        if (tok[0] == '#') {
          std::string rest;
          std::getline(in, rest);
          continue;
        }
        return tok;
      }
    };
    img.cols = std::stoi(next_token());
    img.rows = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (maxval <= 0 || maxval > 255)
      throw std::runtime_error("PGM: only 8-bit images supported: " + path);
    in.get();  // single whitespace after maxval
    const size_t count = static_cast<size_t>(img.rows) * img.cols;
    std::vector<unsigned char> raw(count);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
    if (static_cast<size_t>(in.gcount()) != count)
      throw std::runtime_error("PGM: truncated pixel data: " + path);
    img.values.assign(raw.begin(), raw.end());
    return img;
  }

  // Plain text matrix: one row per line, whitespace-separated values.
  in.clear();
  in.seekg(0);
  std::string line;
  int cols = -1;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (row.empty()) continue;
    if (cols < 0) cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != cols)
      throw std::runtime_error("text image: ragged rows in " + path);
    img.values.insert(img.values.end(), row.begin(), row.end());
    ++img.rows;
  }
  if (img.rows == 0) throw std::runtime_error("text image: no data in " + path);
  img.cols = cols;
  return img;
}

void write_pgm(const std::string& path, int rows, int cols, const Eigen::VectorXd& values) {
  if (values.size() != static_cast<Eigen::Index>(rows) * cols)
    throw std::invalid_argument("write_pgm: size mismatch");
  const double mx = values.maxCoeff();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image: " + path);
  out << "P5\n" << cols << " " << rows << "\n255\n";
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double scaled = mx > 0.0 ? values[i] / mx * 255.0 : 0.0;
    out.put(static_cast<char>(static_cast<unsigned char>(
        std::clamp(std::lround(scaled), 0l, 255l))));
  }
}

MeasureOracle image_to_measure(const ImageData& image, const SupportGrid& grid) {
  if (grid.space != SpaceKind::grid2d)
    throw std::invalid_argument("image_to_measure: requires a grid2d support");
  const size_t count = static_cast<size_t>(image.rows) * image.cols;
  if (image.values.size() != count || grid.points.size() != count)
    throw std::invalid_argument("image_to_measure: image/grid size mismatch");
  for (double v : image.values)
    if (v < 0.0) throw std::invalid_argument("image_to_measure: negative pixel");
  std::vector<BasePoint> atoms(grid.points);
  return make_discrete(std::move(atoms), image.values);  // throws on all-zero mass
}

std::string discrete_to_csv(const DiscreteMeasure& d) {
  std::ostringstream os;
  char buf[64];
  for (size_t a = 0; a < d.atoms.size(); ++a) {
    std::snprintf(buf, sizeof(buf), "%.17g", d.weights[static_cast<Eigen::Index>(a)]);
    os << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", d.atoms[a].x);
    os << "," << buf;
    if (d.atoms[a].y != 0.0) {
      std::snprintf(buf, sizeof(buf), "%.17g", d.atoms[a].y);
      os << "," << buf;
    }
    os << "\n";
  }
  return os.str();
}

MeasureOracle discrete_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<BasePoint> atoms;
  std::vector<double> weights;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<double> fields;
    std::string cell;
    while (std::getline(ls, cell, ',')) fields.push_back(std::stod(cell));
    if (fields.size() < 2 || fields.size() > 3)
      throw std::invalid_argument("discrete csv: expected `weight,x[,y]` rows");
    weights.push_back(fields[0]);
    atoms.push_back({fields[1], fields.size() == 3 ? fields[2] : 0.0});
  }
  return make_discrete(std::move(atoms), std::move(weights));
}

}  // namespace dwb
