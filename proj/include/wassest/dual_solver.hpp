#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wassest/geometry.hpp"
#include "wassest/types.hpp"

namespace wassest {

/// Kantorovich potentials on the sinks.
class DualWeights {
 public:
  static constexpr double kCenterTolerance = 1e-9;

  DualWeights() = default;
  explicit DualWeights(std::size_t n) : values_(n, 0.0) {}
  explicit DualWeights(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }

  /// Σ g_j = 0 within tolerance (the zero-sum subspace G_0).
  bool centered() const;
  /// Projection onto G_0; leaves E(g) unchanged.
  DualWeights centered_copy() const;
  double sup_norm() const;
  double max_pairwise_gap() const;

 private:
  std::vector<double> values_;
};

/// Subtracts the mean so the vector lies in G_0.
void project_zero_sum(std::span<double> v);

enum class VolumeBackend { Auto, MonteCarlo, Exact };

const char* to_string(VolumeBackend backend);
VolumeBackend parse_backend(const std::string& name);
/// Auto picks Exact for l <= 3 and MonteCarlo otherwise.
VolumeBackend resolve_backend(VolumeBackend backend, std::size_t dimension);

/// E(g) = Σ_j ∫_{L_j(g)} (||x - y_j||^2 - g_j) dα + <g, b>, by exact clipping (l <= 3).
double energy_exact(const Instance& instance, std::span<const double> g);

struct EnergyEstimate {
  double value = 0.0;
  std::uint64_t draws_per_box = 0;
  bool within_budget = true;  // false when max_draws capped the Hoeffding count
};

/// Monte-Carlo E(g) with additive error <= accuracy w.p. >= 1 - eta, using the
/// integrand range 4D^2 + 2||g||_inf. max_draws = 0 means uncapped.
EnergyEstimate energy_mc(const Instance& instance, std::span<const double> g, double accuracy,
                         double eta, std::uint64_t seed, std::uint64_t max_draws = 0,
                         unsigned threads = 1);

/// Exact ∇E(g)_j = b_j - Σ_ℓ γ_ℓ vol(L_j(g) ∩ H_ℓ), projected onto G_0.
std::vector<double> gradient_exact(const Instance& instance, std::span<const double> g);

struct GradientEstimate {
  std::vector<double> value;  // projected onto G_0
  double raw_sum = 0.0;       // Σ_j of the estimate before projection
  std::uint64_t draws_per_box = 0;
  bool within_budget = true;
};

/// Noisy ∇E(g) with ||estimate - ∇E(g)|| <= eps_bar w.p. >= 1 - k * eta_prime:
/// every box is sampled at per-cell accuracy eps_bar / sqrt(n) from substream
/// (seed, box index).
GradientEstimate gradient_mc(const Instance& instance, std::span<const double> g, double eps_bar,
                             double eta_prime, std::uint64_t seed, std::uint64_t max_draws = 0,
                             unsigned threads = 1);

/// L = 2 n l k / s^2. Throws InvalidInput when s is zero.
double smoothness_constant(const Instance& instance);

/// ε' = 2ε [N ∫||x||^2 dα - ||∫x dα||^2] / [N + ||∫x dα|| / D]; checked
/// against its lower bound ε s^2 / 12.
double epsilon_prime(const Instance& instance, double epsilon);

/// M = (4 / ε') 4800 n^2 D^4 L rounded up, saturating at kIterationCapLimit.
inline constexpr std::uint64_t kIterationCapLimit = std::uint64_t{1} << 62;
std::uint64_t iteration_budget(const Instance& instance, double eps_prime);

struct SolverConfig {
  double epsilon = 0.05;
  double eta = 0.01;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> max_iters;  // practical override of M
  VolumeBackend backend = VolumeBackend::Auto;
  std::uint64_t max_draws_per_box = 0;     // 0 = no cap on Monte-Carlo draws
  unsigned threads = 1;
  bool trace_energy = false;               // evaluate E at every iterate

  void validate() const;
};

struct TraceRow {
  std::uint64_t t = 0;
  double grad_norm = 0.0;
  double energy_estimate = std::numeric_limits<double>::quiet_NaN();
  double step_size = 0.0;
  double sup_norm = 0.0;
  double wallclock_ms = 0.0;
};

enum class StopReason { GradientThreshold, IterationBudget, IterationOverride };

const char* to_string(StopReason reason);

struct SolverTrace {
  std::vector<TraceRow> iterates;
  std::uint64_t iteration_cap = 0;  // M
  std::uint64_t stop_step = 0;      // M̄
  double epsilon_prime = 0.0;       // ε' from the accuracy target
  double solver_epsilon_prime = 0.0;  // share of ε' given to the descent
  double noise_budget = 0.0;        // ε'/(360 n D^2)
  double grad_threshold = 0.0;      // ε'/(45 n D^2)
  double smoothness = 0.0;
  double max_norm = 0.0;
  double min_scale = 0.0;
  VolumeBackend backend = VolumeBackend::Exact;
  StopReason stop_reason = StopReason::GradientThreshold;
  bool guarantee_holds = true;
  std::uint64_t sup_norm_violations = 0;     // iterates with ||g_t||_inf > 20 n D^2
  bool final_gap_violation = false;          // centered final max |g_i - g_j| > 16 n D^2
  std::vector<std::string> warnings;
};

struct DualSolution {
  DualWeights weights;
  double energy = 0.0;
  SolverTrace trace;
};

/// Numerical abort; carries the trace up to the failing iterate.
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, SolverTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const SolverTrace& trace() const { return trace_; }

 private:
  SolverTrace trace_;
};

/// Inexact gradient ascent on E from g = 0 with step 1/L. Stops at the first
/// iterate whose noisy gradient norm is <= ε'/(45 n D^2), or at M.
DualSolution solve_dual(const Instance& instance, const SolverConfig& config);

/// ĝ_j = g_j + 2 μ^T y_j + ||μ||^2 (cost ||x - y_j - μ||^2).
std::vector<double> transform_dual_for_shift(std::span<const double> g, const SampleSet& samples,
                                             PointView mu);

/// ĝ_j = (1 - σ) ||y_j||^2 + σ g_j (cost ||σ x - y_j||^2). Throws for σ <= 0.
std::vector<double> transform_dual_for_scale(std::span<const double> g, const SampleSet& samples,
                                             double sigma);

struct Classification {
  std::size_t index = 0;
  double margin = 0.0;  // second-best minus best value; 0 on ties
};

/// argmin_j cost(j) - g_j with smallest-index ties and the winning margin.
template <class Cost>
Classification classify_by_cost(std::span<const double> g, Cost&& cost) {
  Classification c;
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double v = cost(j) - g[j];
    if (v < best) {
      second = best;
      best = v;
      c.index = j;
    } else if (v < second) {
      second = v;
    }
  }
  c.margin = second - best;
  return c;
}

}  // namespace wassest
