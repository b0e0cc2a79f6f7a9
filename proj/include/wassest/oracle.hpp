#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wassest/types.hpp"

namespace wassest {

struct WeightedPoints {
  std::vector<Point> points;
  std::vector<double> masses;
};

inline constexpr double kMaxDiscretizationCells = 1e7;

/// Splits every box into resolution^l equal cells and puts the cell mass at the
/// cell center. Throws InvalidInput when resolution^l * k exceeds 1e7.
WeightedPoints discretize_source(const BoxDensity& density, std::size_t resolution);

/// Largest cell half-diagonal of discretize_source at this resolution.
double discretization_radius(const BoxDensity& density, std::size_t resolution);

/// Sources may sit anywhere; flows is m x n row-major.
struct DiscretePlan {
  WeightedPoints sources;
  std::size_t num_sinks = 0;
  std::vector<double> flows;
  double cost = 0.0;

  double flow(std::size_t i, std::size_t j) const { return flows[i * num_sinks + j]; }
};

/// Exact min-cost transportation for an arbitrary m x n cost matrix (row-major)
/// by successive shortest augmenting paths. Supplies and demands must balance
/// within 1e-9. Returns the m x n flow matrix.
std::vector<double> solve_transportation(std::span<const double> supplies,
                                         std::span<const double> demands,
                                         std::span<const double> costs);

/// Squared-Euclidean transport from weighted points to the samples.
DiscretePlan solve_discrete_ot_exact(const WeightedPoints& sources, const SampleSet& samples);

struct DiscreteOracleResult {
  DiscretePlan plan;
  double cost = 0.0;
  double error_bound = 0.0;  // |cost - p*| <= error_bound
  std::size_t resolution = 0;
};

/// Discretize at the given resolution and solve; the error bound is 4 D δ with δ
/// the largest cell half-diagonal.
DiscreteOracleResult discrete_transport_cost(const Instance& instance, std::size_t resolution);

struct Semidiscrete1d {
  double cost = 0.0;        // p*
  double cross_term = 0.0;  // ∫ Σ x y_j dπ
  std::vector<double> breakpoints;  // n - 1 interior quantile cuts, ascending
  std::vector<std::size_t> order;   // sample indices in ascending position
};

/// Monotone (quantile-matching) transport for l = 1, in closed form.
Semidiscrete1d semidiscrete_1d_exact(const Instance& instance);

/// Central differences of the exact energy, one coordinate at a time.
std::vector<double> finite_difference_gradient(const Instance& instance, std::span<const double> g,
                                               double h);

}  // namespace wassest
