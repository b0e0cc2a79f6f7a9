#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wassest {

using Point = std::vector<double>;
using PointView = std::span<const double>;

/// Rejected input: bad shapes, overlapping boxes, broken normalization.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The exact clipping backend only handles l <= 3.
class UnsupportedDimension : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Closed axis-aligned box [lo_0, hi_0] x ... x [lo_{l-1}, hi_{l-1}].
struct Hyperrectangle {
  Point lo;
  Point hi;

  Hyperrectangle() = default;
  Hyperrectangle(Point lo_, Point hi_);

  std::size_t dimension() const { return lo.size(); }
  double width(std::size_t d) const { return hi[d] - lo[d]; }
  double min_width() const;
  double volume() const;
  bool contains(PointView x) const;
  /// All 2^l corners, bit d of the index selects hi[d].
  std::vector<Point> corners() const;
};

struct WeightedBox {
  Hyperrectangle box;
  double weight = 0.0;  // density value gamma_i on the box
};

/// Probability density that is constant on finitely many disjoint boxes.
class BoxDensity {
 public:
  static constexpr double kMassTolerance = 1e-9;

  BoxDensity() = default;
  /// Validates dimensions, positive widths and weights, pairwise disjointness
  /// and unit mass. Throws InvalidInput naming the offending boxes.
  BoxDensity(std::size_t dimension, std::vector<WeightedBox> boxes);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return boxes_.size(); }
  const std::vector<WeightedBox>& boxes() const { return boxes_; }
  const WeightedBox& operator[](std::size_t i) const { return boxes_[i]; }
  double total_mass() const;

 private:
  std::size_t dimension_ = 0;
  std::vector<WeightedBox> boxes_;
};

/// Discrete sinks y_j with demands b_j.
class SampleSet {
 public:
  static constexpr double kMassTolerance = 1e-9;

  SampleSet() = default;
  /// Uniform demands 1/n.
  explicit SampleSet(std::vector<Point> points);
  SampleSet(std::vector<Point> points, std::vector<double> demands);

  std::size_t size() const { return points_.size(); }
  std::size_t dimension() const { return points_.empty() ? 0 : points_.front().size(); }
  const std::vector<Point>& points() const { return points_; }
  const Point& operator[](std::size_t j) const { return points_[j]; }
  const std::vector<double>& demands() const { return demands_; }
  bool uniform_demands() const;

 private:
  void validate() const;

  std::vector<Point> points_;
  std::vector<double> demands_;
};

/// Source density plus sinks; the semidiscrete transport instance.
struct Instance {
  BoxDensity density;
  SampleSet samples;

  Instance() = default;
  Instance(BoxDensity density_, SampleSet samples_);

  std::size_t dimension() const { return density.dimension(); }
  std::size_t num_samples() const { return samples.size(); }
  std::size_t num_boxes() const { return density.size(); }
};

/// Constants that drive the step size, budgets and bounds of the solver.
struct InstanceStats {
  double total_mass = 0.0;   // N
  double max_norm = 0.0;     // D, max norm over samples and box corners
  double min_scale = 0.0;    // s, min of pairwise sample distance and box width
  double smoothness = 0.0;   // L = 2 n l k / s^2
  std::size_t reference_set_size = 0;
};

InstanceStats compute_stats(const Instance& instance);

double dot(PointView a, PointView b);
double squared_distance(PointView a, PointView b);
double squared_norm(PointView a);
double norm(PointView a);

}  // namespace wassest
