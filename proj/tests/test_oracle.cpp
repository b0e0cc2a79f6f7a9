#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "wassest/fixtures.hpp"
#include "wassest/oracle.hpp"

using namespace wassest;

namespace {

// Optimality certificate: with every sink full, a plan is optimal iff moving
// flow around any cycle of sinks cannot pay, i.e. Floyd-Warshall on the
// cheapest per-pair reroute price finds no negative cycle.
bool has_negative_cycle(const DiscretePlan& plan, const SampleSet& samples) {
  const std::size_t n = plan.num_sinks;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> w(n * n, inf);
  double scale = 1.0;
  for (std::size_t i = 0; i < plan.sources.points.size(); ++i) {
    for (std::size_t a = 0; a < n; ++a) {
      if (!(plan.flow(i, a) > 1e-13)) continue;
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        const double price = squared_distance(plan.sources.points[i], samples[b]) -
                             squared_distance(plan.sources.points[i], samples[a]);
        scale = std::max(scale, std::abs(price));
        w[a * n + b] = std::min(w[a * n + b], price);
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) w[a * n + a] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) w[a * n + b] = std::min(w[a * n + b], w[a * n + k] + w[k * n + b]);
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (w[a * n + a] < -1e-12 * scale) return true;
  }
  return false;
}

void check_marginals(const DiscretePlan& plan, const SampleSet& samples) {
  const std::size_t m = plan.sources.points.size();
  std::vector<double> cols(plan.num_sinks, 0.0);
  double cost = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < plan.num_sinks; ++j) {
      CHECK(plan.flow(i, j) >= 0.0);
      row += plan.flow(i, j);
      cols[j] += plan.flow(i, j);
      cost += plan.flow(i, j) * squared_distance(plan.sources.points[i], samples[j]);
    }
    CHECK(std::abs(row - plan.sources.masses[i]) <= 1e-9);
  }
  for (std::size_t j = 0; j < plan.num_sinks; ++j) CHECK(std::abs(cols[j] - samples.demands()[j]) <= 1e-9);
  CHECK(plan.cost == doctest::Approx(cost).epsilon(1e-12));
}

// Exhaustive optimum for tiny transportation problems with unit-mass sources
// assigned whole (integral vertices of the polytope).
double brute_force_assignment(const std::vector<double>& costs, std::size_t m, std::size_t n,
                              const std::vector<int>& capacity) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> choice(m, 0);
  while (true) {
    std::vector<int> used(n, 0);
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      ++used[choice[i]];
      c += costs[i * n + choice[i]];
    }
    if (used == capacity) best = std::min(best, c);
    std::size_t i = 0;
    while (i < m && ++choice[i] == n) choice[i++] = 0;
    if (i == m) break;
  }
  return best;
}

}  // namespace

TEST_CASE("midpoint discretization") {
  auto w = discretize_source(BoxDensity(1, {{Hyperrectangle({0.0}, {1.0}), 1.0}}), 2);
  REQUIRE(w.points.size() == 2);
  CHECK(w.points[0][0] == doctest::Approx(0.25));
  CHECK(w.points[1][0] == doctest::Approx(0.75));
  CHECK(w.masses[0] == doctest::Approx(0.5));
  w = discretize_source(fixtures::two_point_line().density, 1);
  CHECK(w.points[0][0] == doctest::Approx(0.0));
  CHECK(w.masses[0] == doctest::Approx(1.0));
  w = discretize_source(BoxDensity(2, {{Hyperrectangle({0.0, 0.0}, {1.0, 1.0}), 1.0}}), 2);
  std::set<std::vector<double>> pts(w.points.begin(), w.points.end());
  CHECK(pts == std::set<std::vector<double>>{{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}, {0.75, 0.75}});
  for (double m : w.masses) CHECK(m == doctest::Approx(0.25));
  CHECK_THROWS_AS(discretize_source(fixtures::two_point_line().density, 0), InvalidInput);
  CHECK_THROWS_AS(discretize_source(fixtures::square_two_point().density, 5000), InvalidInput);
}

TEST_CASE("discrete transport examples") {
  const SampleSet three(std::vector<Point>{{0.0}, {1.0}, {2.0}});
  WeightedPoints same{three.points(), three.demands()};
  auto plan = solve_discrete_ot_exact(same, three);
  CHECK(plan.cost == doctest::Approx(0.0));
  for (std::size_t i = 0; i < 3; ++i) CHECK(plan.flow(i, i) == doctest::Approx(1.0 / 3.0));

  WeightedPoints two{{{0.25}, {0.75}}, {0.5, 0.5}};
  plan = solve_discrete_ot_exact(two, SampleSet(std::vector<Point>{{0.5}}));
  CHECK(plan.cost == doctest::Approx(0.0625));

  const auto a = discrete_transport_cost(fixtures::two_point_line(), 200);
  CHECK(std::abs(a.cost - 1.0 / 3.0) <= 0.01);
  CHECK(std::abs(a.cost - 1.0 / 3.0) <= a.error_bound);

  CHECK_THROWS_AS(solve_discrete_ot_exact(WeightedPoints{{{0.0}}, {0.5}}, SampleSet(std::vector<Point>{{1.0}})),
                  InvalidInput);
}

TEST_CASE("transportation matches exhaustive search on small integral problems") {
  Rng rng(271);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + t % 3;
    const std::size_t m = n + t % 3;
    std::vector<int> cap(n, 1);
    for (std::size_t extra = n; extra < m; ++extra) ++cap[rng.below(n)];
    std::vector<double> costs(m * n), supplies(m, 1.0), demands(n);
    for (double& c : costs) c = std::floor(rng.uniform(0, 10));  // many ties
    for (std::size_t j = 0; j < n; ++j) demands[j] = cap[j];
    const auto flows = solve_transportation(supplies, demands, costs);
    double cost = 0.0;
    for (std::size_t k = 0; k < costs.size(); ++k) cost += flows[k] * costs[k];
    CHECK(cost == doctest::Approx(brute_force_assignment(costs, m, n, cap)));
  }
}

TEST_CASE("discrete plans have exact marginals and certify optimality") {
  Rng rng(88);
  for (int t = 0; t < 20; ++t) {
    const Instance inst = fixtures::random_instance(
        rng, {1 + static_cast<std::size_t>(t) % 2, 1 + static_cast<std::size_t>(t) % 2, 2 + static_cast<std::size_t>(t) % 4, t % 3 != 0});
    const auto res = discrete_transport_cost(inst, inst.dimension() == 1 ? 300 : 30);
    check_marginals(res.plan, inst.samples);
    CHECK_FALSE(has_negative_cycle(res.plan, inst.samples));
  }
}

TEST_CASE("plan support is invariant under shift and scale of the cost") {
  Rng rng(1234);
  for (int t = 0; t < 10; ++t) {
    const Instance inst = fixtures::random_instance(rng, {2, 1, 3, true});
    const auto src = discretize_source(inst.density, 12);
    const std::size_t m = src.points.size(), n = inst.num_samples();
    const Point mu{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double sigma = t % 2 ? 0.5 : 2.0;
    std::vector<double> base(m * n), shifted(m * n), scaled(m * n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto& x = src.points[i];
        const auto& y = inst.samples[j];
        base[i * n + j] = squared_distance(x, y);
        shifted[i * n + j] = std::pow(x[0] - y[0] - mu[0], 2) + std::pow(x[1] - y[1] - mu[1], 2);
        scaled[i * n + j] = std::pow(sigma * x[0] - y[0], 2) + std::pow(sigma * x[1] - y[1], 2);
      }
    }
    auto support = [&](const std::vector<double>& costs) {
      const auto f = solve_transportation(src.masses, inst.samples.demands(), costs);
      std::vector<bool> s(f.size());
      for (std::size_t k = 0; k < f.size(); ++k) s[k] = f[k] > 1e-12;
      return s;
    };
    const auto s0 = support(base);
    CHECK(support(shifted) == s0);
    CHECK(support(scaled) == s0);
  }
}

TEST_CASE("1d quantile oracle") {
  auto a = semidiscrete_1d_exact(fixtures::two_point_line());
  CHECK(a.cost == doctest::Approx(1.0 / 3.0));
  CHECK(a.cross_term == doctest::Approx(0.5));
  REQUIRE(a.breakpoints.size() == 1);
  CHECK(a.breakpoints[0] == doctest::Approx(0.0));

  auto b = semidiscrete_1d_exact(fixtures::single_sample());
  CHECK(b.cost == doctest::Approx(1.0 / 12.0));
  CHECK(b.cross_term == doctest::Approx(0.25));

  // [0, ¾] goes to 0 and [¾, 1] to 1: ∫_0^¾ x² + ∫_¾^1 (x - 1)², cross = ∫_¾^1 x.
  auto c = semidiscrete_1d_exact(fixtures::skewed_demands());
  CHECK(c.breakpoints[0] == doctest::Approx(0.75));
  CHECK(c.cost == doctest::Approx(std::pow(0.75, 3) / 3.0 + std::pow(0.25, 3) / 3.0));
  CHECK(c.cross_term == doctest::Approx(0.5 * (1.0 - 0.5625)));

  CHECK_THROWS_AS(semidiscrete_1d_exact(fixtures::square_two_point()), InvalidInput);
}

TEST_CASE("1d oracle handles gaps between boxes and unsorted samples") {
  const Instance inst(BoxDensity(1, {{Hyperrectangle({2.0}, {3.0}), 0.5}, {Hyperrectangle({0.0}, {1.0}), 0.5}}),
                      SampleSet(std::vector<Point>{{2.5}, {0.5}}));
  const auto r = semidiscrete_1d_exact(inst);
  CHECK(r.order == std::vector<std::size_t>{1, 0});
  CHECK(r.cost == doctest::Approx(2.0 * 0.5 / 12.0));
  const auto d = discrete_transport_cost(inst, 400);
  CHECK(std::abs(d.cost - r.cost) <= d.error_bound);
}

TEST_CASE("discrete cost converges to the 1d optimum under refinement") {
  for (const Instance& inst : {fixtures::skewed_demands(), fixtures::close_samples(3.0)}) {
    const double exact = semidiscrete_1d_exact(inst).cost;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t r : {10, 40, 160}) {
      const auto d = discrete_transport_cost(inst, r);
      const double err = std::abs(d.cost - exact);
      CHECK(err <= d.error_bound);
      CHECK(err * 2.0 <= prev);
      prev = err;
    }
  }
}

TEST_CASE("finite difference gradient examples") {
  const Instance a = fixtures::two_point_line();
  auto fd = finite_difference_gradient(a, std::vector<double>{0, 0}, 1e-5);
  CHECK(std::abs(fd[0]) <= 1e-6);
  fd = finite_difference_gradient(a, std::vector<double>{0.5, -0.5}, 1e-5);
  CHECK(fd[0] == doctest::Approx(-0.125));
  CHECK(fd[1] == doctest::Approx(0.125));
  CHECK_THROWS_AS(finite_difference_gradient(a, std::vector<double>{0, 0}, 0.0), InvalidInput);
}
