#include "wassest/dual_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "parallel.hpp"
#include "wassest/rng.hpp"

namespace wassest {
namespace {

// Stream tags keep gradient and energy draws independent under one seed.
constexpr std::uint64_t kEnergyStream = 0x454E455247590000ULL;

void check_size(const Instance& instance, std::span<const double> g) {
  if (g.size() != instance.num_samples()) {
    std::ostringstream msg;
    msg << "dual weights: got " << g.size() << " entries for " << instance.num_samples()
        << " samples";
    throw InvalidInput(msg.str());
  }
  for (double v : g) {
    if (!std::isfinite(v)) throw InvalidInput("dual weights: non-finite entry");
  }
}

double inner(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double l2(std::span<const double> v) { return std::sqrt(inner(v, v)); }

double sup(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::uint64_t capped(std::uint64_t want, std::uint64_t cap, bool& within) {
  if (cap != 0 && want > cap) {
    within = false;
    return cap;
  }
  return want;
}

}  // namespace

DualWeights::DualWeights(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("dual weights: non-finite entry");
  }
}

bool DualWeights::centered() const {
  return std::abs(std::accumulate(values_.begin(), values_.end(), 0.0)) <= kCenterTolerance;
}

DualWeights DualWeights::centered_copy() const {
  DualWeights out(values_);
  project_zero_sum(out.values_);
  return out;
}

double DualWeights::sup_norm() const { return sup(values_); }

double DualWeights::max_pairwise_gap() const {
  if (values_.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  return *hi - *lo;
}

void project_zero_sum(std::span<double> v) {
  if (v.empty()) return;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

const char* to_string(VolumeBackend backend) {
  switch (backend) {
    case VolumeBackend::Auto:
      return "auto";
    case VolumeBackend::MonteCarlo:
      return "mc";
    case VolumeBackend::Exact:
      return "exact";
  }
  return "?";
}

VolumeBackend parse_backend(const std::string& name) {
  if (name == "auto") return VolumeBackend::Auto;
  if (name == "mc") return VolumeBackend::MonteCarlo;
  if (name == "exact") return VolumeBackend::Exact;
  throw InvalidInput("unknown volume backend '" + name + "' (expected auto, mc or exact)");
}

VolumeBackend resolve_backend(VolumeBackend backend, std::size_t dimension) {
  if (backend == VolumeBackend::Auto) {
    return dimension <= 3 ? VolumeBackend::Exact : VolumeBackend::MonteCarlo;
  }
  if (backend == VolumeBackend::Exact && dimension > 3) {
    std::ostringstream msg;
    msg << "exact backend supports dimension <= 3, got " << dimension;
    throw UnsupportedDimension(msg.str());
  }
  return backend;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::GradientThreshold:
      return "gradient_threshold";
    case StopReason::IterationBudget:
      return "iteration_budget";
    case StopReason::IterationOverride:
      return "iteration_override";
  }
  return "?";
}

double energy_exact(const Instance& instance, std::span<const double> g) {
  check_size(instance, g);
  const auto& b = instance.samples.demands();
  double e = inner(g, b);
  for (const auto& wb : instance.density.boxes()) {
    const auto cells = cell_box_integrals_exact(instance.samples, g, wb.box);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      e += wb.weight * (cells[j].cost - g[j] * cells[j].volume);
    }
  }
  return e;
}

EnergyEstimate energy_mc(const Instance& instance, std::span<const double> g, double accuracy,
                         double eta, std::uint64_t seed, std::uint64_t max_draws,
                         unsigned threads) {
  check_size(instance, g);
  if (!(accuracy > 0.0)) throw InvalidInput("energy: accuracy must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidInput("energy: failure probability must lie in (0,1)");
  const std::size_t k = instance.num_boxes();
  const std::size_t l = instance.dimension();
  const double d = compute_stats(instance).max_norm;
  const double range = 4.0 * d * d + 2.0 * sup(g);

  // Hoeffding per box at failure eta/k; the box errors add up to at most
  // accuracy because Σ γ_ℓ vol(H_ℓ) = 1.
  const double want = std::ceil(range * range * std::log(2.0 * static_cast<double>(k) / eta) /
                                (2.0 * accuracy * accuracy));
  EnergyEstimate est;
  est.draws_per_box = capped(static_cast<std::uint64_t>(std::clamp(want, 1.0, 9.0e18)), max_draws,
                             est.within_budget);

  std::vector<double> box_terms(k, 0.0);
  detail::parallel_for(k, threads, [&](std::size_t i) {
    const auto& wb = instance.density[i];
    Rng rng(substream_seed(seed ^ kEnergyStream, i));
    Point x(l);
    double acc = 0.0;
    for (std::uint64_t t = 0; t < est.draws_per_box; ++t) {
      for (std::size_t c = 0; c < l; ++c) x[c] = rng.uniform(wb.box.lo[c], wb.box.hi[c]);
      const std::size_t j = classify_point(instance.samples, g, x);
      acc += squared_distance(x, instance.samples[j]) - g[j];
    }
    box_terms[i] = wb.weight * wb.box.volume() * acc / static_cast<double>(est.draws_per_box);
  });
  est.value = inner(g, instance.samples.demands()) +
              std::accumulate(box_terms.begin(), box_terms.end(), 0.0);
  return est;
}

std::vector<double> gradient_exact(const Instance& instance, std::span<const double> g) {
  check_size(instance, g);
  std::vector<double> grad(instance.samples.demands());
  for (const auto& wb : instance.density.boxes()) {
    const auto cells = cell_box_integrals_exact(instance.samples, g, wb.box);
    for (std::size_t j = 0; j < cells.size(); ++j) grad[j] -= wb.weight * cells[j].volume;
  }
  project_zero_sum(grad);
  return grad;
}

GradientEstimate gradient_mc(const Instance& instance, std::span<const double> g, double eps_bar,
                             double eta_prime, std::uint64_t seed, std::uint64_t max_draws,
                             unsigned threads) {
  check_size(instance, g);
  const std::size_t n = instance.num_samples();
  const std::size_t k = instance.num_boxes();
  GradientEstimate est;
  const double per_cell = std::min(eps_bar / std::sqrt(static_cast<double>(n)), 0.5);
  est.draws_per_box = capped(hoeffding_sample_count(n, per_cell, eta_prime), max_draws,
                             est.within_budget);

  std::vector<std::vector<double>> vols(k);
  detail::parallel_for(k, threads, [&](std::size_t i) {
    vols[i] = cell_box_volumes_mc_count(instance.samples, g, instance.density[i].box,
                                        est.draws_per_box, seed, i);
  });
  est.value = instance.samples.demands();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) est.value[j] -= instance.density[i].weight * vols[i][j];
  }
  est.raw_sum = std::accumulate(est.value.begin(), est.value.end(), 0.0);
  project_zero_sum(est.value);
  return est;
}

double smoothness_constant(const Instance& instance) {
  const InstanceStats st = compute_stats(instance);
  if (!(st.min_scale > 0.0) || !std::isfinite(st.min_scale)) {
    throw InvalidInput("smoothness constant: minimum scale s is zero (duplicate samples or flat box)");
  }
  return st.smoothness;
}

double epsilon_prime(const Instance& instance, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  const InstanceStats st = compute_stats(instance);
  const Moments m = box_moments(instance.density);
  const double first2 = squared_norm(m.first);
  const double numerator = m.mass * m.second - first2;
  const double denominator = m.mass + std::sqrt(first2) / st.max_norm;
  const double value = 2.0 * epsilon * numerator / denominator;
  const double floor = epsilon * st.min_scale * st.min_scale / 12.0;
  if (!(value >= floor * (1.0 - 1e-12))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "epsilon_prime " << value << " fell below its lower bound " << floor;
    throw std::logic_error(msg.str());
  }
  return value;
}

std::uint64_t iteration_budget(const Instance& instance, double eps_prime) {
  if (!(eps_prime > 0.0)) throw InvalidInput("iteration budget: eps_prime must be positive");
  const InstanceStats st = compute_stats(instance);
  const double n = static_cast<double>(instance.num_samples());
  const double d2 = st.max_norm * st.max_norm;
  const double m = 4.0 * 4800.0 * n * n * d2 * d2 * st.smoothness / eps_prime;
  if (!(m < static_cast<double>(kIterationCapLimit))) return kIterationCapLimit;
  // Shave rounding noise before ceil so exact integers stay exact.
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(m * (1.0 - 1e-12))));
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("solver: epsilon must lie in (0,1)");
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidInput("solver: eta must lie in (0,1)");
  if (max_iters && *max_iters == 0) throw InvalidInput("solver: max_iters must be positive");
}

DualSolution solve_dual(const Instance& instance, const SolverConfig& config) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();

  const std::size_t n = instance.num_samples();
  const std::size_t k = instance.num_boxes();
  const InstanceStats st = compute_stats(instance);
  const double L = smoothness_constant(instance);
  const double d2 = st.max_norm * st.max_norm;
  const VolumeBackend backend = resolve_backend(config.backend, instance.dimension());
  const bool exact = backend == VolumeBackend::Exact;
  const bool uniform = instance.samples.uniform_demands();

  SolverTrace trace;
  trace.backend = backend;
  trace.smoothness = L;
  trace.max_norm = st.max_norm;
  trace.min_scale = st.min_scale;
  trace.epsilon_prime = epsilon_prime(instance, config.epsilon);
  // With Monte-Carlo energies a quarter of ε' pays for the final energy estimate.
  trace.solver_epsilon_prime = exact ? trace.epsilon_prime : 0.75 * trace.epsilon_prime;
  const double nd2 = static_cast<double>(n) * d2;
  trace.noise_budget = trace.solver_epsilon_prime / (360.0 * nd2);
  trace.grad_threshold = trace.solver_epsilon_prime / (45.0 * nd2);
  trace.iteration_cap = iteration_budget(instance, trace.solver_epsilon_prime);
  if (!uniform) {
    trace.warnings.emplace_back(
        "non-uniform demands: the 20nD^2 iterate bound is not asserted for this instance");
  }

  const std::uint64_t cap =
      config.max_iters ? std::min(*config.max_iters, trace.iteration_cap) : trace.iteration_cap;
  // Gradients share half of eta across k boxes and M iterations; the final
  // energy estimate gets the other half.
  const double eta_grad = 0.5 * config.eta;
  const double eta_prime = eta_grad / (static_cast<double>(k) * static_cast<double>(trace.iteration_cap));
  const double energy_accuracy = 0.25 * trace.epsilon_prime;
  const double sup_bound = 20.0 * nd2;

  auto evaluate_energy = [&](std::span<const double> g, std::uint64_t stream) {
    if (exact) return energy_exact(instance, g);
    const auto e = energy_mc(instance, g, energy_accuracy, 0.5 * config.eta,
                             substream_seed(config.seed, stream), config.max_draws_per_box,
                             config.threads);
    if (!e.within_budget) trace.guarantee_holds = false;
    return e.value;
  };

  std::vector<double> g(n, 0.0);
  bool mc_capped_warned = false;
  for (std::uint64_t t = 1;; ++t) {
    std::vector<double> grad;
    if (exact) {
      grad = gradient_exact(instance, g);
    } else {
      auto est = gradient_mc(instance, g, trace.noise_budget, eta_prime,
                             substream_seed(config.seed, t), config.max_draws_per_box,
                             config.threads);
      if (!est.within_budget) {
        trace.guarantee_holds = false;
        if (!mc_capped_warned) {
          trace.warnings.emplace_back("monte carlo draws capped below the Hoeffding count");
          mc_capped_warned = true;
        }
      }
      grad = std::move(est.value);
    }

    TraceRow row;
    row.t = t;
    row.grad_norm = l2(grad);
    row.step_size = 1.0 / L;
    row.sup_norm = sup(g);
    if (config.trace_energy) row.energy_estimate = evaluate_energy(g, ~t);
    row.wallclock_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    trace.iterates.push_back(row);

    if (uniform && row.sup_norm > sup_bound) ++trace.sup_norm_violations;
    if (!std::isfinite(row.grad_norm) || !std::isfinite(row.sup_norm)) {
      trace.stop_step = t;
      throw SolverAbort("solver: non-finite gradient or iterate", std::move(trace));
    }

    if (row.grad_norm <= trace.grad_threshold) {
      trace.stop_reason = StopReason::GradientThreshold;
      trace.stop_step = t;
      break;
    }
    if (t >= cap) {
      trace.stop_step = t;
      trace.stop_reason = cap < trace.iteration_cap ? StopReason::IterationOverride
                                                    : StopReason::IterationBudget;
      break;
    }
    // Ascent on E is descent on f = -E with ∇f = -∇E.
    for (std::size_t j = 0; j < n; ++j) g[j] += grad[j] / L;
  }

  if (trace.stop_reason == StopReason::IterationOverride) {
    trace.guarantee_holds = false;
    trace.warnings.emplace_back("iteration override below M voids the accuracy guarantee");
  }

  DualSolution sol;
  sol.weights = DualWeights(g).centered_copy();
  if (uniform && sol.weights.max_pairwise_gap() > 16.0 * nd2) trace.final_gap_violation = true;
  sol.energy = evaluate_energy(sol.weights.values(), 0);
  if (!std::isfinite(sol.energy)) {
    throw SolverAbort("solver: non-finite energy", std::move(trace));
  }
  sol.trace = std::move(trace);
  return sol;
}

std::vector<double> transform_dual_for_shift(std::span<const double> g, const SampleSet& samples,
                                             PointView mu) {
  if (g.size() != samples.size()) throw InvalidInput("shift transform: size mismatch");
  if (mu.size() != samples.dimension()) throw InvalidInput("shift transform: dimension mismatch");
  const double mu2 = squared_norm(mu);
  std::vector<double> out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = g[j] + 2.0 * dot(mu, samples[j]) + mu2;
  return out;
}

std::vector<double> transform_dual_for_scale(std::span<const double> g, const SampleSet& samples,
                                             double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("scale transform: sigma must be positive");
  if (g.size() != samples.size()) throw InvalidInput("scale transform: size mismatch");
  std::vector<double> out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    out[j] = (1.0 - sigma) * squared_norm(samples[j]) + sigma * g[j];
  }
  return out;
}

}  // namespace wassest
