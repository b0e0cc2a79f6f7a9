#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "wassest/rng.hpp"
#include "wassest/types.hpp"

namespace wassest::fixtures {

/// Box [-1,1] with γ = ½; samples -1 and 1.
Instance two_point_line();
/// Box [0,1] with γ = 1; one sample at ½.
Instance single_sample();
/// Box [0,1] with γ = 1; samples 0 and 1 with demands ¾ and ¼.
Instance skewed_demands();
/// Box [-1,1]² with γ = ¼; samples (-1,0) and (1,0).
Instance square_two_point();

/// Box [-1,1] with γ = ½, samples ±1/m.
Instance close_samples(double m);
/// Box [-1/m, 0] x [0, m] with γ = 1, samples (±1, 0).
Instance thin_box(double m);

/// ‖∇E(g) - ∇E(h)‖ / ‖g - h‖ with exact gradients.
double gradient_lipschitz_ratio(const Instance& instance, std::span<const double> g,
                                std::span<const double> h);

/// The two dual points compared in the necessity families: g = 0, g' = (0, 1/m).
double family_ratio(const Instance& instance, double m);

struct RandomSpec {
  std::size_t dimension = 1;
  std::size_t boxes = 1;
  std::size_t samples = 2;
  bool uniform_demands = true;
};

/// Disjoint boxes laid out along the first axis (slot i covers [2i - k, 2i - k + 1.8]),
/// random widths and weights, unit mass; samples uniform in [-2.5, 2.5]^l and
/// at least 0.05 apart.
Instance random_instance(Rng& rng, const RandomSpec& spec);

}  // namespace wassest::fixtures
