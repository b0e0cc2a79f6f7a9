#include <doctest.h>

#include <set>

#include "wassest/fixtures.hpp"
#include "wassest/rng.hpp"
#include "wassest/types.hpp"

using namespace wassest;

TEST_CASE("hyperrectangle rejects empty or mismatched extents") {
  CHECK_THROWS_AS(Hyperrectangle({0.0}, {0.0}), InvalidInput);
  CHECK_THROWS_AS(Hyperrectangle({1.0}, {0.0}), InvalidInput);
  CHECK_THROWS_AS(Hyperrectangle({0.0, 0.0}, {1.0}), InvalidInput);
  CHECK_THROWS_AS(Hyperrectangle({}, {}), InvalidInput);
}

TEST_CASE("hyperrectangle volume, closed membership and corners") {
  const Hyperrectangle box({0.0, -1.0, 2.0}, {1.0, 1.0, 2.5});
  CHECK(box.volume() == doctest::Approx(1.0));
  CHECK(box.min_width() == doctest::Approx(0.5));
  CHECK(box.contains(std::vector<double>{1.0, -1.0, 2.5}));
  CHECK_FALSE(box.contains(std::vector<double>{1.0 + 1e-12, 0.0, 2.2}));
  const auto corners = box.corners();
  REQUIRE(corners.size() == 8);
  std::set<std::vector<double>> unique(corners.begin(), corners.end());
  CHECK(unique.size() == 8);
  CHECK(corners[0] == box.lo);
  CHECK(corners[7] == box.hi);
}

TEST_CASE("box density validation") {
  SUBCASE("touching faces are fine") {
    CHECK_NOTHROW(BoxDensity(1, {{Hyperrectangle({0.0}, {1.0}), 0.5}, {Hyperrectangle({1.0}, {2.0}), 0.5}}));
  }
  SUBCASE("overlap names the pair") {
    try {
      BoxDensity(2, {{Hyperrectangle({0.0, 0.0}, {1.0, 1.0}), 0.25},
                     {Hyperrectangle({5.0, 5.0}, {6.0, 6.0}), 0.25},
                     {Hyperrectangle({0.5, 0.5}, {1.5, 2.5}), 0.25}});
      FAIL("expected an overlap error");
    } catch (const InvalidInput& e) {
      CHECK(std::string(e.what()).find("0 and 2") != std::string::npos);
    }
  }
  SUBCASE("mass must be one") {
    CHECK_THROWS_AS(BoxDensity(1, {{Hyperrectangle({0.0}, {1.0}), 0.9}}), InvalidInput);
    CHECK_NOTHROW(BoxDensity(1, {{Hyperrectangle({0.0}, {1.0}), 1.0 + 5e-10}}));
  }
  SUBCASE("weights positive, dimension consistent") {
    CHECK_THROWS_AS(BoxDensity(1, {{Hyperrectangle({0.0}, {1.0}), 0.0}}), InvalidInput);
    CHECK_THROWS_AS(BoxDensity(2, {{Hyperrectangle({0.0}, {1.0}), 1.0}}), InvalidInput);
    CHECK_THROWS_AS(BoxDensity(1, {}), InvalidInput);
  }
}

TEST_CASE("sample set validation") {
  CHECK_THROWS_AS(SampleSet(std::vector<Point>{{0.0}, {0.0}}), InvalidInput);
  CHECK_THROWS_AS(SampleSet(std::vector<Point>{{0.0}, {1.0}}, {0.5, 0.6}), InvalidInput);
  CHECK_THROWS_AS(SampleSet(std::vector<Point>{{0.0}, {1.0}}, {-0.5, 1.5}), InvalidInput);
  CHECK_THROWS_AS(SampleSet(std::vector<Point>{{0.0}, {1.0, 2.0}}), InvalidInput);
  const SampleSet uniform(std::vector<Point>{{0.0}, {1.0}, {2.0}});
  CHECK(uniform.uniform_demands());
  CHECK(uniform.demands()[2] == doctest::Approx(1.0 / 3.0));
  CHECK_FALSE(SampleSet(std::vector<Point>{{0.0}, {1.0}}, {0.75, 0.25}).uniform_demands());
}

TEST_CASE("instance statistics") {
  SUBCASE("two-point line") {
    const auto st = compute_stats(fixtures::two_point_line());
    CHECK(st.total_mass == doctest::Approx(1.0));
    CHECK(st.max_norm == doctest::Approx(1.0));
    CHECK(st.min_scale == doctest::Approx(2.0));
    CHECK(st.smoothness == doctest::Approx(1.0));
    CHECK(st.reference_set_size == 4);
  }
  SUBCASE("box width sets the scale") {
    // n = 3, l = 2, k = 2, s = 0.5: L = 2*3*2*2/0.25.
    const Instance inst(BoxDensity(2, {{Hyperrectangle({0.0, 0.0}, {0.5, 1.0}), 2.0 / 3.0},
                                       {Hyperrectangle({1.0, 0.0}, {2.0, 1.0}), 2.0 / 3.0}}),
                        SampleSet(std::vector<Point>{{5.0, 5.0}, {6.0, 5.0}, {5.0, 6.0}}));
    const auto st = compute_stats(inst);
    CHECK(st.min_scale == doctest::Approx(0.5));
    CHECK(st.smoothness == doctest::Approx(96.0));
    CHECK(st.max_norm == doctest::Approx(std::sqrt(61.0)));
  }
  SUBCASE("single sample, unit box") {
    const auto st = compute_stats(fixtures::single_sample());
    CHECK(st.min_scale == doctest::Approx(1.0));
    CHECK(st.smoothness == doctest::Approx(2.0));
  }
  SUBCASE("far corner per axis") {
    const Instance inst(BoxDensity(2, {{Hyperrectangle({-3.0, 1.0}, {1.0, 2.0}), 0.25}}),
                        SampleSet(std::vector<Point>{{0.0, 0.0}}));
    CHECK(compute_stats(inst).max_norm == doctest::Approx(std::sqrt(13.0)));
  }
}

TEST_CASE("rng substreams are deterministic and distinct") {
  Rng a(substream_seed(42, 3)), b(substream_seed(42, 3)), c(substream_seed(42, 4));
  bool differs = false;
  for (int i = 0; i < 16; ++i) {
    const double x = a.uniform01();
    CHECK(x == b.uniform01());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differs = differs || x != c.uniform01();
  }
  CHECK(differs);
}

TEST_CASE("random instances are valid and reproducible") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng r1(seed), r2(seed);
    const fixtures::RandomSpec spec{1 + seed % 3, 1 + seed % 3, 1 + seed % 4, seed % 2 == 0};
    const Instance a = fixtures::random_instance(r1, spec);
    const Instance b = fixtures::random_instance(r2, spec);
    CHECK(a.num_boxes() == spec.boxes);
    CHECK(a.num_samples() == spec.samples);
    CHECK(a.density.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.samples.points() == b.samples.points());
  }
}
