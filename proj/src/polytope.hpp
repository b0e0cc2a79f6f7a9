#pragma once

#include <vector>

#include "wassest/types.hpp"

namespace wassest::detail {

/// a^T x <= beta
struct HalfSpace {
  Point normal;
  double offset = 0.0;
};

struct ClippedIntegral {
  double volume = 0.0;
  double quadratic = 0.0;  // ∫ ||x - center||^2 over the clipped region
};

/// Clips `box` by every half-space and integrates 1 and ||x - center||^2 over
/// what remains. Exact up to rounding for l <= 3; throws UnsupportedDimension
/// otherwise.
ClippedIntegral clip_and_integrate(const Hyperrectangle& box, const std::vector<HalfSpace>& cuts,
                                   PointView center);

}  // namespace wassest::detail
