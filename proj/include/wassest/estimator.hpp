#pragma once

#include <string>
#include <vector>

#include "wassest/dual_solver.hpp"
#include "wassest/geometry.hpp"
#include "wassest/types.hpp"

namespace wassest {

struct ShapeParameters {
  double sigma = 0.0;
  Point mu;
  double denominator = 0.0;  // N ∫||x||^2 dα - ||∫x dα||^2
};

/// Optimal shrinkage and translation given the plan cross-term ∫Σ x^T y_j dπ.
/// Throws InvalidInput when the denominator is not positive.
ShapeParameters closed_form_from_plan(const Moments& moments, PointView weighted_sample_sum,
                                      double cross_term);

/// p* = ∫||x||^2 dα + Σ b_j ||y_j||^2 - 2 cross_term.
double primal_cost_identity(const Moments& moments, double weighted_sample_sq_norm,
                            double cross_term);

/// Inverse of primal_cost_identity: the cross-term implied by a transport cost.
double cross_term_from_energy(const Moments& moments, double weighted_sample_sq_norm,
                              double energy);

/// Σ b_j y_j
Point weighted_sample_sum(const SampleSet& samples);
/// Σ b_j ||y_j||^2
double weighted_sample_sq_norm(const SampleSet& samples);

struct EstimationResult {
  double sigma_hat = 0.0;
  Point mu_hat;
  double rho = 0.0;
  double dual_energy = 0.0;
  double denominator = 0.0;
  double epsilon = 0.0;
  double eta = 0.0;
  bool guarantee_holds = false;
  std::uint64_t iterations = 0;
  DualWeights weights;
  SolverTrace trace;
  std::vector<std::string> warnings;
};

/// Moments, dual solve at cost ||x - y_j||^2, then the closed form with
/// ρ = ½[∫||x||^2 dα + Σ b_j ||y_j||^2 - E(g)] standing in for the cross-term.
/// Guarantees |σ̂ - σ*| <= ε and ||μ̂ - μ*|| <= ε D when guarantee_holds.
EstimationResult estimate_parameters(const Instance& instance, const SolverConfig& config);

}  // namespace wassest
