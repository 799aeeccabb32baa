#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "dwb/measures.hpp"
#include "dwb/rng.hpp"

using namespace dwb;

namespace {

constexpr double kPi = std::numbers::pi;

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("grids validate and cache coordinates") {
  const SupportGrid g = line_grid(3, -1.0, 1.0);
  CHECK(g.n() == 3);
  CHECK(g.points[0].x == -1.0);
  CHECK(g.points[1].x == 0.0);
  CHECK(g.points[2].x == 1.0);
  CHECK_THROWS_AS(make_grid(SpaceKind::line, {{0, 0}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(line_grid(0, 0, 1), std::invalid_argument);
  const SupportGrid c = circle_grid(4);
  CHECK(c.points[1].x == doctest::Approx(kPi / 2));
  const SupportGrid px = pixel_grid(2, 3);
  CHECK(px.n() == 6);
  CHECK(px.points[4].x == 1.5);  // row 1, col 1
  CHECK(px.points[4].y == 1.5);
}

TEST_CASE("cost vectors on the three worked cases") {
  const SupportGrid line = line_grid(3, -1.0, 1.0);
  const Eigen::VectorXd ce = cost_vector(CostKind::squared_euclidean, line, {0.0, 0.0});
  CHECK(ce[0] == 1.0);
  CHECK(ce[1] == 0.0);
  CHECK(ce[2] == 1.0);

  const SupportGrid two = make_grid(SpaceKind::circle, {{0.0, 0.0}, {kPi, 0.0}});
  const Eigen::VectorXd ca = cost_vector(CostKind::squared_angular, two, {0.0, 0.0});
  CHECK(ca[0] == 0.0);
  CHECK(ca[1] == doctest::Approx(kPi * kPi).epsilon(1e-14));

  const SupportGrid one = make_grid(SpaceKind::circle, {{0.0, 0.0}});
  const Eigen::VectorXd cw = cost_vector(CostKind::squared_angular, one, {3 * kPi / 2, 0.0});
  CHECK(cw[0] == doctest::Approx(kPi * kPi / 4).epsilon(1e-14));

  CHECK_THROWS_AS(cost_vector(CostKind::squared_angular, line, {0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cost_vector(CostKind::squared_euclidean, two, {0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("line costs are translation consistent") {
  RngStream rng = rng_stream(5, 0, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const double z = rng.next_double() * 10 - 5;
    const double y = rng.next_double() * 10 - 5;
    const double t = rng.next_double() * 10 - 5;
    CHECK(transport_cost(CostKind::squared_euclidean, {z + t, 0}, {y + t, 0}) ==
          doctest::Approx(transport_cost(CostKind::squared_euclidean, {z, 0}, {y, 0}))
              .epsilon(1e-12));
  }
}

TEST_CASE("measure constructors enforce invariants") {
  CHECK_THROWS_AS(make_gaussian(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_von_mises(0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_discrete({{0, 0}}, {-0.2}), std::invalid_argument);
  CHECK_THROWS_AS(make_discrete({{0, 0}}, {0.0}), std::invalid_argument);

  const auto& d = as_discrete(make_discrete({{0, 0}, {1, 0}, {2, 0}}, {2.0, 0.0, 6.0}));
  CHECK(d.atoms.size() == 2);  // zero-weight atom dropped
  CHECK(d.weights[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(d.weights.sum() - 1.0) <= 1e-12);
}

TEST_CASE("point-mass sampling is the atom") {
  const MeasureOracle o = make_discrete({{3.25, 0}}, {0.7});
  RngStream rng = rng_stream(9, 0, 0);
  for (int i = 0; i < 10; ++i) CHECK(sample(o, rng).x == 3.25);
}

TEST_CASE("gaussian sampling matches its moments") {
  RngStream rng = rng_stream(11, 0, 0);
  const int draws = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = sample_gaussian(rng, 0.0, 1.0);
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / draws;
  CHECK(std::abs(mean) < 0.005);  // 3 sigma band is 0.003
  CHECK(sumsq / draws - mean * mean == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("von mises sampling matches circular statistics") {
  RngStream rng = rng_stream(12, 0, 0);
  const double loc = kPi, kappa = 4.0;
  const int draws = 1000000;
  double s = 0.0, c = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double a = sample_von_mises(rng, loc, kappa);
    CHECK(a >= 0.0);
    CHECK(a < 2 * kPi);
    s += std::sin(a);
    c += std::cos(a);
  }
  const double circular_mean = std::atan2(s / draws, c / draws);
  CHECK(std::abs(circular_mean - loc) < 0.01);
  // Mean resultant length equals the Bessel ratio I1(kappa)/I0(kappa).
  const double resultant = std::hypot(s / draws, c / draws);
  const double bessel_ratio = std::cyl_bessel_i(1.0, kappa) / std::cyl_bessel_i(0.0, kappa);
  CHECK(resultant == doctest::Approx(bessel_ratio).epsilon(2e-3));
}

TEST_CASE("discrete sampling reproduces atom frequencies") {
  const std::vector<double> weights = {0.5, 0.3, 0.15, 0.05};
  const MeasureOracle o =
      make_discrete({{0, 0}, {1, 0}, {2, 0}, {3, 0}}, weights);
  RngStream rng = rng_stream(13, 0, 0);
  const int draws = 100000;
  std::vector<int> hits(4, 0);
  for (int i = 0; i < draws; ++i) ++hits[static_cast<size_t>(sample(o, rng).x)];
  for (size_t a = 0; a < weights.size(); ++a) {
    const double w = weights[a];
    const double tol = 3.0 * std::sqrt(w * (1.0 - w) / draws);
    CHECK(std::abs(static_cast<double>(hits[a]) / draws - w) <= tol);
  }
}

TEST_CASE("image to measure") {
  const SupportGrid g12 = pixel_grid(1, 2);
  const auto& even = as_discrete(image_to_measure({1, 2, {2.0, 2.0}}, g12));
  CHECK(even.atoms.size() == 2);
  CHECK(even.weights[0] == 0.5);
  CHECK(even.weights[1] == 0.5);
  CHECK(even.atoms[0].x == 0.5);
  CHECK(even.atoms[1].x == 1.5);

  const SupportGrid g21 = pixel_grid(2, 1);
  const auto& single = as_discrete(image_to_measure({2, 1, {0.0, 5.0}}, g21));
  CHECK(single.atoms.size() == 1);
  CHECK(single.weights[0] == 1.0);
  CHECK(single.atoms[0].y == 1.5);

  const SupportGrid g22 = pixel_grid(2, 2);
  const auto& quarters = as_discrete(image_to_measure({2, 2, {1, 1, 1, 1}}, g22));
  CHECK(quarters.atoms.size() == 4);
  for (int a = 0; a < 4; ++a) CHECK(quarters.weights[a] == 0.25);

  CHECK_THROWS(image_to_measure({2, 2, {0, 0, 0, 0}}, g22));
  CHECK_THROWS(image_to_measure({2, 2, {1, 1, 1}}, g22));
}

TEST_CASE("pgm and text image io") {
  const std::string pgm = temp_path("dwb_test_img.pgm");
  Eigen::VectorXd values(6);
  values << 0, 51, 102, 153, 204, 255;
  write_pgm(pgm, 2, 3, values);
  const ImageData img = load_image(pgm);
  CHECK(img.rows == 2);
  CHECK(img.cols == 3);
  CHECK(img.values[0] == 0.0);
  CHECK(img.values[5] == 255.0);

  const std::string txt = temp_path("dwb_test_img.txt");
  std::ofstream(txt) << "1 2 3\n4 5 6\n";
  const ImageData timg = load_image(txt);
  CHECK(timg.rows == 2);
  CHECK(timg.cols == 3);
  CHECK(timg.values[4] == 5.0);

  std::ofstream(txt) << "1 2\n3\n";
  CHECK_THROWS(load_image(txt));
  CHECK_THROWS(load_image(temp_path("does_not_exist.pgm")));
}

TEST_CASE("discrete csv round trip") {
  const auto& d = as_discrete(make_discrete({{0.5, 1.5}, {-2.0, 0.0}}, {0.75, 0.25}));
  const auto& back = as_discrete(discrete_from_csv(discrete_to_csv(d)));
  REQUIRE(back.atoms.size() == d.atoms.size());
  for (size_t a = 0; a < d.atoms.size(); ++a) {
    CHECK(back.atoms[a].x == d.atoms[a].x);
    CHECK(back.atoms[a].y == d.atoms[a].y);
    CHECK(back.weights[static_cast<Eigen::Index>(a)] ==
          d.weights[static_cast<Eigen::Index>(a)]);
  }
  CHECK_THROWS(discrete_from_csv("0.5\n"));
}
