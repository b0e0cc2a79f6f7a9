#pragma once

#include <cmath>
#include <vector>

#include "wassest/geometry.hpp"
#include "wassest/types.hpp"

namespace testsupport {

// Cell volumes by classifying the centers of a res^l grid over the box.
inline std::vector<double> grid_cell_volumes(const wassest::SampleSet& samples,
                                             const std::vector<double>& g,
                                             const wassest::Hyperrectangle& box, std::size_t res) {
  const std::size_t l = box.dimension();
  std::size_t cells = 1;
  for (std::size_t d = 0; d < l; ++d) cells *= res;
  std::vector<double> vol(samples.size(), 0.0);
  std::vector<std::size_t> idx(l, 0);
  wassest::Point x(l);
  const double cell_volume = box.volume() / static_cast<double>(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t d = 0; d < l; ++d) {
      x[d] = box.lo[d] + (static_cast<double>(idx[d]) + 0.5) * box.width(d) / static_cast<double>(res);
    }
    vol[wassest::classify_point(samples, g, x)] += cell_volume;
    for (std::size_t d = l; d-- > 0;) {
      if (++idx[d] < res) break;
      idx[d] = 0;
    }
  }
  return vol;
}

inline double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace testsupport
