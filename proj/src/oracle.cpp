#include "wassest/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "wassest/dual_solver.hpp"

namespace wassest {

WeightedPoints discretize_source(const BoxDensity& density, std::size_t resolution) {
  if (resolution == 0) throw InvalidInput("discretize: resolution must be at least 1");
  const std::size_t l = density.dimension();
  const double cells_per_box = std::pow(static_cast<double>(resolution), static_cast<double>(l));
  if (cells_per_box * static_cast<double>(density.size()) > kMaxDiscretizationCells) {
    std::ostringstream msg;
    msg << "discretize: " << resolution << "^" << l << " cells x " << density.size()
        << " boxes exceeds the limit of " << kMaxDiscretizationCells;
    throw InvalidInput(msg.str());
  }
  const auto per_box = static_cast<std::size_t>(cells_per_box);
  WeightedPoints out;
  out.points.reserve(per_box * density.size());
  out.masses.reserve(per_box * density.size());
  std::vector<std::size_t> idx(l);
  for (const auto& wb : density.boxes()) {
    const double mass = wb.weight * wb.box.volume() / static_cast<double>(per_box);
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t c = 0; c < per_box; ++c) {
      Point p(l);
      for (std::size_t d = 0; d < l; ++d) {
        const double h = wb.box.width(d) / static_cast<double>(resolution);
        p[d] = wb.box.lo[d] + (static_cast<double>(idx[d]) + 0.5) * h;
      }
      out.points.push_back(std::move(p));
      out.masses.push_back(mass);
      for (std::size_t d = l; d-- > 0;) {
        if (++idx[d] < resolution) break;
        idx[d] = 0;
      }
    }
  }
  return out;
}

double discretization_radius(const BoxDensity& density, std::size_t resolution) {
  double r = 0.0;
  for (const auto& wb : density.boxes()) {
    double s = 0.0;
    for (std::size_t d = 0; d < density.dimension(); ++d) {
      const double h = 0.5 * wb.box.width(d) / static_cast<double>(resolution);
      s += h * h;
    }
    r = std::max(r, std::sqrt(s));
  }
  return r;
}

namespace {

struct HeapEntry {
  double key;
  std::size_t source;
  bool operator>(const HeapEntry& o) const {
    return key > o.key || (key == o.key && source > o.source);
  }
};

using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

}  // namespace

// Sources are inserted one at a time. Between sinks a and b the residual graph
// offers "reroute some source s from a to b" at price c_sb - c_sa; only the
// cheapest such s matters, kept in a lazily cleaned heap per ordered pair.
std::vector<double> solve_transportation(std::span<const double> supplies,
                                         std::span<const double> demands,
                                         std::span<const double> costs) {
  const std::size_t m = supplies.size();
  const std::size_t n = demands.size();
  if (n == 0 || m == 0) throw InvalidInput("transportation: empty side");
  if (costs.size() != m * n) throw InvalidInput("transportation: cost matrix has the wrong size");
  double supply = 0.0, demand = 0.0;
  for (double a : supplies) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidInput("transportation: negative supply");
    supply += a;
  }
  for (double b : demands) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw InvalidInput("transportation: negative demand");
    demand += b;
  }
  if (std::abs(supply - demand) > 1e-9) {
    std::ostringstream msg;
    msg << "transportation: supply " << supply << " does not balance demand " << demand;
    throw InvalidInput(msg.str());
  }
  for (double c : costs) {
    if (!std::isfinite(c)) throw InvalidInput("transportation: non-finite cost");
  }

  const double tol = 1e-15 * std::max(supply, 1.0);
  double cost_scale = 0.0;
  for (double c : costs) cost_scale = std::max(cost_scale, std::abs(c));
  const double relax_tol = 1e-14 * std::max(cost_scale, 1.0);

  std::vector<double> flows(m * n, 0.0);
  std::vector<double> room(demands.begin(), demands.end());
  std::vector<MinHeap> heaps(n * n);
  auto c = [&](std::size_t s, std::size_t j) { return costs[s * n + j]; };

  auto activate = [&](std::size_t s, std::size_t a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (b != a) heaps[a * n + b].push({c(s, b) - c(s, a), s});
    }
  };
  // Cheapest live reroute a -> b, or none.
  auto best = [&](std::size_t a, std::size_t b) -> const HeapEntry* {
    auto& h = heaps[a * n + b];
    while (!h.empty() && !(flows[h.top().source * n + a] > 0.0)) h.pop();
    return h.empty() ? nullptr : &h.top();
  };

  std::vector<double> dist(n);
  std::vector<std::size_t> pred(n);
  std::vector<std::size_t> via(n);
  const std::size_t none = std::numeric_limits<std::size_t>::max();

  for (std::size_t s = 0; s < m; ++s) {
    double left = supplies[s];
    // The last sliver of a source is dropped once below rounding level; the
    // marginals then still hold to far better than 1e-9.
    while (left > tol) {
      for (std::size_t j = 0; j < n; ++j) {
        dist[j] = c(s, j);
        pred[j] = none;
      }
      for (std::size_t round = 0; round + 1 < n; ++round) {
        bool changed = false;
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            const HeapEntry* e = best(a, b);
            if (e == nullptr) continue;
            const double cand = dist[a] + e->key;
            if (cand < dist[b] - relax_tol) {
              dist[b] = cand;
              pred[b] = a;
              via[b] = e->source;
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      std::size_t target = none;
      for (std::size_t j = 0; j < n; ++j) {
        if (room[j] > tol && (target == none || dist[j] < dist[target])) target = j;
      }
      if (target == none) break;

      // Walk back to the entry sink, collecting the bottleneck.
      double delta = std::min(left, room[target]);
      std::vector<std::size_t> path{target};
      for (std::size_t j = target; pred[j] != none;) {
        delta = std::min(delta, flows[via[j] * n + pred[j]]);
        j = pred[j];
        path.push_back(j);
        if (path.size() > n) throw std::logic_error("transportation: cyclic predecessor chain");
      }
      std::reverse(path.begin(), path.end());

      flows[s * n + path.front()] += delta;
      activate(s, path.front());
      for (std::size_t i = 1; i < path.size(); ++i) {
        const std::size_t a = path[i - 1], b = path[i];
        const std::size_t r = via[b];
        double& fa = flows[r * n + a];
        fa = (fa - delta <= tol) ? 0.0 : fa - delta;
        const bool was_zero = !(flows[r * n + b] > 0.0);
        flows[r * n + b] += delta;
        if (was_zero) activate(r, b);
      }
      room[target] -= delta;
      left -= delta;
    }
  }
  return flows;
}

DiscretePlan solve_discrete_ot_exact(const WeightedPoints& sources, const SampleSet& samples) {
  const std::size_t m = sources.points.size();
  const std::size_t n = samples.size();
  if (sources.masses.size() != m) throw InvalidInput("discrete ot: masses and points differ in count");
  std::vector<double> costs(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    if (sources.points[i].size() != samples.dimension()) {
      throw InvalidInput("discrete ot: source dimension does not match the samples");
    }
    for (std::size_t j = 0; j < n; ++j) costs[i * n + j] = squared_distance(sources.points[i], samples[j]);
  }
  DiscretePlan plan;
  plan.sources = sources;
  plan.num_sinks = n;
  plan.flows = solve_transportation(sources.masses, samples.demands(), costs);
  for (std::size_t k = 0; k < costs.size(); ++k) plan.cost += plan.flows[k] * costs[k];
  return plan;
}

DiscreteOracleResult discrete_transport_cost(const Instance& instance, std::size_t resolution) {
  DiscreteOracleResult r;
  r.resolution = resolution;
  r.plan = solve_discrete_ot_exact(discretize_source(instance.density, resolution), instance.samples);
  r.cost = r.plan.cost;
  r.error_bound =
      4.0 * compute_stats(instance).max_norm * discretization_radius(instance.density, resolution);
  return r;
}

Semidiscrete1d semidiscrete_1d_exact(const Instance& instance) {
  if (instance.dimension() != 1) throw InvalidInput("1d oracle: instance must be one-dimensional");
  const auto& samples = instance.samples;
  const std::size_t n = samples.size();

  std::vector<const WeightedBox*> boxes;
  for (const auto& wb : instance.density.boxes()) boxes.push_back(&wb);
  std::sort(boxes.begin(), boxes.end(),
            [](const WeightedBox* a, const WeightedBox* b) { return a->box.lo[0] < b->box.lo[0]; });

  // Smallest x with F(x) = q.
  auto quantile = [&](double q) {
    double cum = 0.0;
    for (const WeightedBox* wb : boxes) {
      const double mass = wb->weight * wb->box.width(0);
      if (q <= cum + mass) return wb->box.lo[0] + std::max(q - cum, 0.0) / wb->weight;
      cum += mass;
    }
    return boxes.back()->box.hi[0];
  };
  // ∫_a^b γ(x) (x - y)^2 dx and ∫_a^b γ(x) x dx.
  auto integrate = [&](double a, double b, double y, double& cost, double& first) {
    for (const WeightedBox* wb : boxes) {
      const double lo = std::max(a, wb->box.lo[0]);
      const double hi = std::min(b, wb->box.hi[0]);
      if (!(hi > lo)) continue;
      cost += wb->weight * (std::pow(hi - y, 3) - std::pow(lo - y, 3)) / 3.0;
      first += wb->weight * 0.5 * (hi * hi - lo * lo);
    }
  };

  Semidiscrete1d out;
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return samples[a][0] < samples[b][0]; });

  double cum = 0.0;
  double left = boxes.front()->box.lo[0];
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t j = out.order[r];
    cum += samples.demands()[j];
    const double right = (r + 1 == n) ? boxes.back()->box.hi[0] : quantile(cum);
    if (r + 1 < n) out.breakpoints.push_back(right);
    double cost = 0.0, first = 0.0;
    integrate(left, right, samples[j][0], cost, first);
    out.cost += cost;
    out.cross_term += samples[j][0] * first;
    left = right;
  }
  return out;
}

std::vector<double> finite_difference_gradient(const Instance& instance, std::span<const double> g,
                                               double h) {
  if (!(h > 0.0)) throw InvalidInput("finite differences: step must be positive");
  std::vector<double> probe(g.begin(), g.end());
  std::vector<double> grad(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    probe[j] = g[j] + h;
    const double up = energy_exact(instance, probe);
    probe[j] = g[j] - h;
    const double down = energy_exact(instance, probe);
    probe[j] = g[j];
    grad[j] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace wassest
