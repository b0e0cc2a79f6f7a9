#include <doctest.h>

#include <sstream>

#include "wassest/sat_reduction.hpp"

using namespace wassest;

namespace {

Clause clause(int a, int b, int c) {
  auto lit = [](int v) { return Literal{static_cast<std::size_t>(std::abs(v)) - 1, v > 0}; };
  return {lit(a), lit(b), lit(c)};
}

std::vector<Clause> all_sign_patterns() {
  std::vector<Clause> out;
  for (int mask = 0; mask < 8; ++mask) {
    out.push_back(clause(mask & 1 ? -1 : 1, mask & 2 ? -2 : 2, mask & 4 ? -3 : 3));
  }
  return out;
}

// Point-in-box test over every box, written independently of the library.
bool covered(const ReductionOutput& red, const Point& theta) {
  for (std::size_t s = 0; s < red.samples.size(); ++s) {
    bool hit = false;
    for (const auto& wb : red.density.boxes()) {
      bool in = true;
      for (std::size_t d = 0; d < theta.size(); ++d) {
        const double x = red.samples[s][d] - theta[d];
        in = in && wb.box.lo[d] <= x && x <= wb.box.hi[d];
      }
      hit = hit || in;
    }
    if (!hit) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("cnf validation") {
  CHECK_THROWS_AS(CnfFormula(3, {clause(1, -1, 2)}), InvalidInput);
  CHECK_THROWS_AS(CnfFormula(3, {clause(1, 2, 4)}), InvalidInput);
  CHECK_THROWS_AS(CnfFormula(4, {clause(1, 2, 3)}), InvalidInput);
  CHECK_NOTHROW(CnfFormula(3, {clause(1, -2, 3)}));
}

TEST_CASE("dimacs parsing") {
  std::istringstream ok("c comment\np cnf 4 2\n1 2 3 0\n-1 2\n4 0\n%\n0\n");
  const auto cnf = parse_dimacs(ok);
  CHECK(cnf.num_vars() == 4);
  REQUIRE(cnf.num_clauses() == 2);
  CHECK(cnf.clauses()[1][0] == Literal{0, false});
  CHECK(cnf.clauses()[1][2] == Literal{3, true});
  std::istringstream round(to_dimacs(cnf));
  CHECK(parse_dimacs(round).clauses() == cnf.clauses());

  for (const char* bad : {"1 2 3 0\n", "p cnf 3 1\n1 2 0\n", "p cnf 3 1\n1 -1 2 0\n", "p cnf 3 2\n1 2 3 0\n",
                          "p cnf 3 1\n1 2 x 0\n", "p cnf 3 1\n1 2 3\n", "p cnf 3 1\n1 2 5 0\n", "p dnf 3 1\n1 2 3 0\n"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(parse_dimacs(in), InvalidInput);
  }
}

TEST_CASE("single clause gadget") {
  const auto red = reduce_3sat(CnfFormula(3, {clause(1, 2, 3)}));
  CHECK(red.samples[0] == Point{1, 1, 1});
  CHECK(red.density.size() == 7);
  CHECK(red.gamma == doctest::Approx(64000.0 / 7.0));
  CHECK(red.density.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  // First row in truth-table order is (F,F,T); the falsifying (F,F,F) is absent.
  const auto& first = red.density[0].box;
  CHECK(first.lo[0] == doctest::Approx(1 - 1.0 / 80));
  CHECK(first.lo[2] == doctest::Approx(1.5 - 1.0 / 80));
  const auto& last = red.density[6].box;
  for (std::size_t d = 0; d < 3; ++d) CHECK(last.hi[d] == doctest::Approx(1.5 + 1.0 / 80));

  CHECK(likelihood_positive(red, std::vector<double>{-0.5, -0.5, -0.5}));
  CHECK_FALSE(likelihood_positive(red, std::vector<double>{10, 10, 10}));
  CHECK_FALSE(likelihood_positive(red, std::vector<double>{0, 0, 0}));
  CHECK_THROWS_AS(likelihood_positive(red, std::vector<double>{0, 0}), InvalidInput);
}

TEST_CASE("occurrence pattern of the samples") {
  const auto red = reduce_3sat(CnfFormula(4, {clause(1, 2, 3), clause(-1, 2, 4)}));
  CHECK(red.samples[0] == Point{1, 1, 1, 0});
  CHECK(red.samples[1] == Point{2, 2, 0, 2});
  CHECK(red.density.size() == 14);
  CHECK(red.box_clause[7] == 1);
  // Off-clause coordinates span [0, ½].
  CHECK(red.density[0].box.lo[3] == 0.0);
  CHECK(red.density[0].box.hi[3] == 0.5);
}

TEST_CASE("assignment to theta") {
  CHECK(assignment_to_theta({true, true, true}) == Point{-0.5, -0.5, -0.5});
  CHECK(assignment_to_theta({false, false, false}) == Point{0, 0, 0});
  CHECK(assignment_to_theta({true, false, true}) == Point{-0.5, 0, -0.5});
}

TEST_CASE("decision examples") {
  const CnfFormula one(3, {clause(1, 2, 3)});
  const CnfFormula all8(3, all_sign_patterns());
  const CnfFormula pair(3, {clause(1, 2, 3), clause(-1, -2, -3)});
  CHECK(decide_positive_likelihood(one));
  CHECK(brute_force_sat(one));
  CHECK_FALSE(decide_positive_likelihood(all8));
  CHECK_FALSE(brute_force_sat(all8));
  CHECK(decide_positive_likelihood(pair));
  CHECK(brute_force_sat(pair));
  CHECK(reduce_3sat(all8).density.size() == 56);
}

TEST_CASE("every satisfying assignment is feasible and nothing else is") {
  for (int subset = 1; subset < 256; ++subset) {
    std::vector<Clause> cls;
    const auto pats = all_sign_patterns();
    for (int b = 0; b < 8; ++b) {
      if (subset & (1 << b)) cls.push_back(pats[b]);
    }
    const CnfFormula cnf(3, cls);
    const auto red = reduce_3sat(cnf);
    for (int mask = 0; mask < 8; ++mask) {
      const std::vector<bool> a{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0};
      const auto theta = assignment_to_theta(a);
      CHECK(likelihood_positive(red, theta) == cnf.satisfied_by(a));
      CHECK(covered(red, theta) == cnf.satisfied_by(a));
    }
  }
}

TEST_CASE("random formulas use every variable and are reproducible") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t l = 3 + seed % 4;
    const std::size_t n = (l + 2) / 3 + seed % 5;
    const auto a = random_cnf(l, n, seed);
    const auto b = random_cnf(l, n, seed);
    CHECK(a.num_vars() == l);
    CHECK(a.num_clauses() == n);
    CHECK(a.clauses() == b.clauses());
    CHECK(decide_positive_likelihood(a) == brute_force_sat(a));
  }
  CHECK_THROWS_AS(random_cnf(7, 2, 1), InvalidInput);
  CHECK_THROWS_AS(random_cnf(2, 2, 1), InvalidInput);
}

TEST_CASE("enumeration guard") {
  std::vector<Clause> cls;
  for (int v = 1; v + 2 <= 21; v += 3) cls.push_back(clause(v, v + 1, v + 2));
  const CnfFormula wide(21, cls);
  CHECK_THROWS_AS(brute_force_sat(wide), InvalidInput);
  CHECK_THROWS_AS(decide_positive_likelihood(wide), InvalidInput);
}
