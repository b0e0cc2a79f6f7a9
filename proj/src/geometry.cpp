#include "wassest/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "polytope.hpp"
#include "wassest/rng.hpp"

namespace wassest {
namespace {

void check_point(std::size_t dim, PointView x, const char* what) {
  if (x.size() != dim) {
    std::ostringstream msg;
    msg << what << ": point has dimension " << x.size() << ", expected " << dim;
    throw InvalidInput(msg.str());
  }
}

void check_weights(const SampleSet& samples, std::span<const double> g) {
  if (g.size() != samples.size()) {
    std::ostringstream msg;
    msg << "dual weights: got " << g.size() << " entries for " << samples.size() << " samples";
    throw InvalidInput(msg.str());
  }
  for (double v : g) {
    if (!std::isfinite(v)) throw InvalidInput("dual weights: non-finite entry");
  }
}

// Half-spaces whose intersection is L_j(g): for every j' != j,
// 2 (y_j' - y_j)^T x <= g_j - g_j' + ||y_j'||^2 - ||y_j||^2.
std::vector<detail::HalfSpace> laguerre_cuts(const SampleSet& samples, std::span<const double> g,
                                             std::size_t j) {
  const std::size_t l = samples.dimension();
  const Point& yj = samples[j];
  const double nj = squared_norm(yj);
  std::vector<detail::HalfSpace> cuts;
  cuts.reserve(samples.size() - 1);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (k == j) continue;
    const Point& yk = samples[k];
    detail::HalfSpace h;
    h.normal.resize(l);
    for (std::size_t d = 0; d < l; ++d) h.normal[d] = 2.0 * (yk[d] - yj[d]);
    h.offset = g[j] - g[k] + squared_norm(yk) - nj;
    cuts.push_back(std::move(h));
  }
  return cuts;
}

}  // namespace

Separation box_separation_oracle(const Hyperrectangle& box, PointView x) {
  const std::size_t l = box.dimension();
  check_point(l, x, "box separation oracle");
  for (std::size_t d = 0; d < l; ++d) {
    if (x[d] < box.lo[d]) {
      Hyperplane h{Point(l, 0.0), -box.lo[d]};
      h.normal[d] = -1.0;
      return h;
    }
    if (x[d] > box.hi[d]) {
      Hyperplane h{Point(l, 0.0), box.hi[d]};
      h.normal[d] = 1.0;
      return h;
    }
  }
  return std::nullopt;
}

Separation laguerre_separation_oracle(const SampleSet& samples, std::span<const double> g,
                                      std::size_t j, PointView x) {
  if (j >= samples.size()) {
    std::ostringstream msg;
    msg << "laguerre separation oracle: cell index " << j << " out of range [0, " << samples.size()
        << ")";
    throw InvalidInput(msg.str());
  }
  check_weights(samples, g);
  check_point(samples.dimension(), x, "laguerre separation oracle");
  const double own = squared_distance(x, samples[j]) - g[j];
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (k == j) continue;
    if (squared_distance(x, samples[k]) - g[k] < own) {
      const std::size_t l = samples.dimension();
      Hyperplane h{Point(l), 0.0};
      for (std::size_t d = 0; d < l; ++d) h.normal[d] = 2.0 * (samples[k][d] - samples[j][d]);
      h.offset = g[j] - g[k] + squared_norm(samples[k]) - squared_norm(samples[j]);
      return h;
    }
  }
  return std::nullopt;
}

std::size_t classify_point(const SampleSet& samples, std::span<const double> g, PointView x) {
  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double v = squared_distance(x, samples[j]) - g[j];
    if (v < best_val) {
      best_val = v;
      best = j;
    }
  }
  return best;
}

std::uint64_t hoeffding_sample_count(std::size_t cells, double eps, double eta) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("monte carlo: tolerance must lie in (0,1)");
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidInput("monte carlo: failure probability must lie in (0,1)");
  const double m = std::ceil(std::log(2.0 * static_cast<double>(cells) / eta) / (2.0 * eps * eps));
  if (!(m < 9.0e18)) throw InvalidInput("monte carlo: sample count overflows");
  return static_cast<std::uint64_t>(std::max(1.0, m));
}

std::vector<double> cell_box_volumes_mc(const SampleSet& samples, std::span<const double> g,
                                        const Hyperrectangle& box, double eps_bar,
                                        double eta_prime, std::uint64_t seed, std::uint64_t stream) {
  check_weights(samples, g);
  return cell_box_volumes_mc_count(samples, g, box,
                                   hoeffding_sample_count(samples.size(), eps_bar, eta_prime), seed,
                                   stream);
}

std::vector<double> cell_box_volumes_mc_count(const SampleSet& samples, std::span<const double> g,
                                              const Hyperrectangle& box, std::uint64_t draws,
                                              std::uint64_t seed, std::uint64_t stream) {
  check_weights(samples, g);
  const std::size_t n = samples.size();
  const double vol = box.volume();
  if (n == 1) return {vol};
  const std::size_t l = box.dimension();
  if (draws == 0) throw InvalidInput("monte carlo: need at least one draw");

  Rng rng(substream_seed(seed, stream));
  std::vector<std::uint64_t> hits(n, 0);
  Point x(l);
  for (std::uint64_t t = 0; t < draws; ++t) {
    for (std::size_t d = 0; d < l; ++d) x[d] = rng.uniform(box.lo[d], box.hi[d]);
    ++hits[classify_point(samples, g, x)];
  }
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = vol * static_cast<double>(hits[j]) / static_cast<double>(draws);
  }
  return out;
}

double cell_box_volume_exact(const SampleSet& samples, std::span<const double> g, std::size_t j,
                             const Hyperrectangle& box) {
  if (j >= samples.size()) {
    std::ostringstream msg;
    msg << "exact cell volume: cell index " << j << " out of range";
    throw InvalidInput(msg.str());
  }
  check_weights(samples, g);
  return detail::clip_and_integrate(box, laguerre_cuts(samples, g, j), samples[j]).volume;
}

std::vector<CellIntegral> cell_box_integrals_exact(const SampleSet& samples,
                                                   std::span<const double> g,
                                                   const Hyperrectangle& box) {
  check_weights(samples, g);
  std::vector<CellIntegral> out(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const auto r = detail::clip_and_integrate(box, laguerre_cuts(samples, g, j), samples[j]);
    out[j] = {r.volume, r.quadratic};
  }
  return out;
}

Moments box_moments(const BoxDensity& density) {
  const std::size_t l = density.dimension();
  Moments m;
  m.first.assign(l, 0.0);
  for (const auto& wb : density.boxes()) {
    const auto& b = wb.box;
    const double vol = b.volume();
    m.mass += wb.weight * vol;
    for (std::size_t d = 0; d < l; ++d) {
      const double others = vol / b.width(d);
      const double lo = b.lo[d];
      const double hi = b.hi[d];
      m.first[d] += wb.weight * 0.5 * (hi * hi - lo * lo) * others;
      m.second += wb.weight * (hi * hi * hi - lo * lo * lo) / 3.0 * others;
    }
  }
  return m;
}

BoxDensity approximate_density(const DensityGrid& grid, bool compact) {
  const std::size_t l = grid.shape.size();
  if (l == 0 || grid.origin.size() != l || grid.cell_widths.size() != l) {
    throw InvalidInput("density grid: shape, origin and widths must share a positive dimension");
  }
  std::size_t total = 1;
  for (std::size_t d = 0; d < l; ++d) {
    if (grid.shape[d] == 0) throw InvalidInput("density grid: zero cells along an axis");
    if (!(grid.cell_widths[d] > 0.0)) throw InvalidInput("density grid: cell widths must be positive");
    total *= grid.shape[d];
  }
  if (grid.values.size() != total) throw InvalidInput("density grid: value count does not match shape");

  double cell_vol = 1.0;
  for (double w : grid.cell_widths) cell_vol *= w;

  double mass = 0.0;
  for (double v : grid.values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("density grid: values must be finite and >= 0");
    mass += v * cell_vol;
  }
  if (!(mass > 0.0)) throw InvalidInput("density grid: all values are zero");

  const std::size_t row = grid.shape[l - 1];
  std::vector<WeightedBox> boxes;
  std::vector<std::size_t> idx(l, 0);
  for (std::size_t start = 0; start < total; start += row) {
    // idx holds the multi-index of the row's first cell.
    std::size_t rem = start;
    for (std::size_t d = l; d-- > 0;) {
      idx[d] = rem % grid.shape[d];
      rem /= grid.shape[d];
    }
    std::size_t c = 0;
    while (c < row) {
      const double v = grid.values[start + c];
      std::size_t end = c + 1;
      if (compact) {
        while (end < row && grid.values[start + end] == v) ++end;
      }
      if (v > 0.0) {
        Point lo(l), hi(l);
        for (std::size_t d = 0; d + 1 < l; ++d) {
          lo[d] = grid.origin[d] + static_cast<double>(idx[d]) * grid.cell_widths[d];
          hi[d] = lo[d] + grid.cell_widths[d];
        }
        lo[l - 1] = grid.origin[l - 1] + static_cast<double>(c) * grid.cell_widths[l - 1];
        hi[l - 1] = grid.origin[l - 1] + static_cast<double>(end) * grid.cell_widths[l - 1];
        boxes.push_back({Hyperrectangle(std::move(lo), std::move(hi)), v / mass});
      }
      c = end;
    }
  }
  return BoxDensity(l, std::move(boxes));
}

}  // namespace wassest
