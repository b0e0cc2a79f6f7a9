#include "wassest/estimator.hpp"

#include <cmath>
#include <sstream>

namespace wassest {

ShapeParameters closed_form_from_plan(const Moments& moments, PointView weighted_sample_sum,
                                      double cross_term) {
  const std::size_t l = moments.first.size();
  if (weighted_sample_sum.size() != l) throw InvalidInput("closed form: dimension mismatch");
  ShapeParameters p;
  p.denominator = moments.mass * moments.second - squared_norm(moments.first);
  if (!(p.denominator > 0.0)) {
    std::ostringstream msg;
    msg << "closed form: denominator " << p.denominator << " is not positive";
    throw InvalidInput(msg.str());
  }
  p.sigma = (moments.mass * cross_term - dot(weighted_sample_sum, moments.first)) / p.denominator;
  p.mu.resize(l);
  for (std::size_t d = 0; d < l; ++d) {
    p.mu[d] = (p.sigma * moments.first[d] - weighted_sample_sum[d]) / moments.mass;
  }
  return p;
}

double primal_cost_identity(const Moments& moments, double weighted_sample_sq_norm,
                            double cross_term) {
  return moments.second + weighted_sample_sq_norm - 2.0 * cross_term;
}

double cross_term_from_energy(const Moments& moments, double weighted_sample_sq_norm,
                              double energy) {
  return 0.5 * (moments.second + weighted_sample_sq_norm - energy);
}

Point weighted_sample_sum(const SampleSet& samples) {
  Point s(samples.dimension(), 0.0);
  for (std::size_t j = 0; j < samples.size(); ++j) {
    for (std::size_t d = 0; d < s.size(); ++d) s[d] += samples.demands()[j] * samples[j][d];
  }
  return s;
}

double weighted_sample_sq_norm(const SampleSet& samples) {
  double s = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) s += samples.demands()[j] * squared_norm(samples[j]);
  return s;
}

EstimationResult estimate_parameters(const Instance& instance, const SolverConfig& config) {
  const Moments moments = box_moments(instance.density);
  const Point by = weighted_sample_sum(instance.samples);
  const double byy = weighted_sample_sq_norm(instance.samples);

  DualSolution sol = solve_dual(instance, config);

  EstimationResult r;
  r.dual_energy = sol.energy;
  r.rho = cross_term_from_energy(moments, byy, sol.energy);
  const ShapeParameters p = closed_form_from_plan(moments, by, r.rho);
  r.sigma_hat = p.sigma;
  r.mu_hat = p.mu;
  r.denominator = p.denominator;
  r.epsilon = config.epsilon;
  r.eta = config.eta;
  r.iterations = sol.trace.stop_step;
  r.guarantee_holds = sol.trace.guarantee_holds;
  r.warnings = sol.trace.warnings;
  if (!instance.samples.uniform_demands()) {
    r.warnings.emplace_back("accuracy guarantee assumes uniform demands 1/n");
    r.guarantee_holds = false;
  }
  if (!(r.sigma_hat > 0.0)) {
    std::ostringstream msg;
    msg << "degenerate shrinkage estimate sigma_hat = " << r.sigma_hat;
    r.warnings.push_back(msg.str());
  }
  r.weights = std::move(sol.weights);
  r.trace = std::move(sol.trace);
  return r;
}

}  // namespace wassest
