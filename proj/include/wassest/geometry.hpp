#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wassest/types.hpp"

namespace wassest {

/// The half-space boundary a^T z = beta. A separating plane has a^T x > beta
/// for the query point and a^T z <= beta on the whole convex body.
struct Hyperplane {
  Point normal;
  double offset = 0.0;
};

/// std::nullopt means the point is inside.
using Separation = std::optional<Hyperplane>;

/// O(l): reports the first violated face, lower faces before upper faces per axis.
Separation box_separation_oracle(const Hyperrectangle& box, PointView x);

/// Separation oracle for the Laguerre cell L_j(g). Scans j' in increasing
/// order and returns the plane of the first one that beats j; O(nl).
Separation laguerre_separation_oracle(const SampleSet& samples, std::span<const double> g,
                                      std::size_t j, PointView x);

/// argmin_j ||x - y_j||^2 - g_j, ties to the smallest index.
std::size_t classify_point(const SampleSet& samples, std::span<const double> g, PointView x);

/// Hoeffding count ceil(ln(2n/eta)/(2 eps^2)) that bounds all n cell fractions
/// within eps simultaneously with probability >= 1 - eta.
std::uint64_t hoeffding_sample_count(std::size_t cells, double eps, double eta);

/// Rejection-sampling estimate of vol(L_j(g) ∩ box) for every j, drawing from
/// substream_seed(seed, stream). Guarantees |v_j - vol_j| <= eps_bar * vol(box)
/// for all j at once with probability >= 1 - eta_prime.
std::vector<double> cell_box_volumes_mc(const SampleSet& samples, std::span<const double> g,
                                        const Hyperrectangle& box, double eps_bar,
                                        double eta_prime, std::uint64_t seed,
                                        std::uint64_t stream = 0);

/// Same sampler with an explicit number of draws.
std::vector<double> cell_box_volumes_mc_count(const SampleSet& samples, std::span<const double> g,
                                              const Hyperrectangle& box, std::uint64_t draws,
                                              std::uint64_t seed, std::uint64_t stream = 0);

/// Volume and transport-cost integral of one clipped cell.
struct CellIntegral {
  double volume = 0.0;
  double cost = 0.0;  // ∫_{L_j ∩ box} ||x - y_j||^2 dx
};

/// Exact vol(L_j(g) ∩ box) by half-space clipping; l <= 3 only.
double cell_box_volume_exact(const SampleSet& samples, std::span<const double> g, std::size_t j,
                             const Hyperrectangle& box);

/// Exact volumes and cost integrals of every cell; l <= 3 only.
std::vector<CellIntegral> cell_box_integrals_exact(const SampleSet& samples,
                                                   std::span<const double> g,
                                                   const Hyperrectangle& box);

struct Moments {
  double mass = 0.0;        // N = Σ γ_i vol(H_i)
  Point first;              // ∫ x dα
  double second = 0.0;      // ∫ ||x||^2 dα
};

Moments box_moments(const BoxDensity& density);

/// A regular grid of non-negative density samples: values are stored row-major
/// with the last axis fastest, cell (i_0,...,i_{l-1}) spans
/// origin[d] + i_d * widths[d] .. origin[d] + (i_d + 1) * widths[d].
struct DensityGrid {
  std::vector<std::size_t> shape;
  Point origin;
  Point cell_widths;
  std::vector<double> values;
};

/// One box per positive cell with weight proportional to the sampled value,
/// rescaled to unit mass. With `compact`, runs of equal values along the last
/// axis are merged into a single box.
BoxDensity approximate_density(const DensityGrid& grid, bool compact = false);

}  // namespace wassest
