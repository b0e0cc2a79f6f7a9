#include "wassest/fixtures.hpp"

#include <cmath>

#include "wassest/dual_solver.hpp"

namespace wassest::fixtures {

Instance two_point_line() {
  return Instance(BoxDensity(1, {{Hyperrectangle({-1.0}, {1.0}), 0.5}}), SampleSet(std::vector<Point>{{-1.0}, {1.0}}));
}

Instance single_sample() {
  return Instance(BoxDensity(1, {{Hyperrectangle({0.0}, {1.0}), 1.0}}), SampleSet(std::vector<Point>{{0.5}}));
}

Instance skewed_demands() {
  return Instance(BoxDensity(1, {{Hyperrectangle({0.0}, {1.0}), 1.0}}),
                  SampleSet(std::vector<Point>{{0.0}, {1.0}}, {0.75, 0.25}));
}

Instance square_two_point() {
  return Instance(BoxDensity(2, {{Hyperrectangle({-1.0, -1.0}, {1.0, 1.0}), 0.25}}),
                  SampleSet(std::vector<Point>{{-1.0, 0.0}, {1.0, 0.0}}));
}

Instance close_samples(double m) {
  return Instance(BoxDensity(1, {{Hyperrectangle({-1.0}, {1.0}), 0.5}}),
                  SampleSet(std::vector<Point>{{-1.0 / m}, {1.0 / m}}));
}

Instance thin_box(double m) {
  return Instance(BoxDensity(2, {{Hyperrectangle({-1.0 / m, 0.0}, {0.0, m}), 1.0}}),
                  SampleSet(std::vector<Point>{{-1.0, 0.0}, {1.0, 0.0}}));
}

double gradient_lipschitz_ratio(const Instance& instance, std::span<const double> g,
                                std::span<const double> h) {
  const auto a = gradient_exact(instance, g);
  const auto b = gradient_exact(instance, h);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    num += (a[j] - b[j]) * (a[j] - b[j]);
    den += (g[j] - h[j]) * (g[j] - h[j]);
  }
  return std::sqrt(num / den);
}

double family_ratio(const Instance& instance, double m) {
  const double g[2] = {0.0, 0.0};
  const double h[2] = {0.0, 1.0 / m};
  return gradient_lipschitz_ratio(instance, g, h);
}

Instance random_instance(Rng& rng, const RandomSpec& spec) {
  const std::size_t l = spec.dimension;
  const std::size_t k = spec.boxes;
  std::vector<WeightedBox> boxes;
  double mass = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    Point lo(l), hi(l);
    const double slot = 2.0 * static_cast<double>(i) - static_cast<double>(k);
    for (std::size_t d = 0; d < l; ++d) {
      const double base = d == 0 ? slot : -1.0;
      const double a = base + rng.uniform(0.0, 0.8);
      lo[d] = a;
      hi[d] = a + rng.uniform(0.2, base + 1.8 - a);
    }
    Hyperrectangle box(lo, hi);
    const double w = rng.uniform(0.5, 2.0);
    mass += w * box.volume();
    boxes.push_back({std::move(box), w});
  }
  for (auto& wb : boxes) wb.weight /= mass;

  std::vector<Point> points;
  while (points.size() < spec.samples) {
    Point p(l);
    for (double& x : p) x = rng.uniform(-2.5, 2.5);
    bool ok = true;
    for (const auto& q : points) ok = ok && squared_distance(p, q) >= 0.05 * 0.05;
    if (ok) points.push_back(std::move(p));
  }
  if (spec.uniform_demands) return Instance(BoxDensity(l, std::move(boxes)), SampleSet(std::move(points)));
  std::vector<double> b(spec.samples);
  double total = 0.0;
  for (double& v : b) total += (v = rng.uniform(0.2, 1.0));
  for (double& v : b) v /= total;
  return Instance(BoxDensity(l, std::move(boxes)), SampleSet(std::move(points), std::move(b)));
}

}  // namespace wassest::fixtures
