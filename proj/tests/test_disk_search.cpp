#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "projhull/disk_search.hpp"

using namespace projhull;

namespace {

const SampledCurve& gamma0() {
  static const SampledCurve c = build_curve(PoleSeriesParams{}, 1024);
  return c;
}

DiskSearchOptions small_budget() {
  DiskSearchOptions o;
  o.max_poles = 3;
  o.restarts = 2;
  o.max_evals = 60;
  o.seed = 7;
  return o;
}

const std::vector<cplx> origin{0.0, 0.0};

}  // namespace

TEST(DiskLowerBound, CircleUsesThePoleFreeDisk) {
  const std::vector<cplx> z0{0.0};
  const auto r = disk_lower_bound(z0, circle_curve(256), 0.01);
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.best.value, 0.0);
  EXPECT_TRUE(r.best.a.empty());
  EXPECT_EQ(r.value_by_count.size(), 1u);
}

TEST(DiskLowerBound, Gamma0AtTheCentralPoint) {
  const auto r = disk_lower_bound(origin, gamma0(), 0.05, small_budget());
  ASSERT_TRUE(r.feasible);
  EXPECT_GE(r.best.value, -1.243);
  EXPECT_LE(r.best.value, 0.0);
  EXPECT_LT(r.best.boundary_distance, 0.05);
  // The pole-free disk misses the tube, so the bound comes from poles.
  EXPECT_EQ(r.value_by_count[0], kNegInf);
  for (std::size_t k = 1; k < r.value_by_count.size(); ++k) EXPECT_GE(r.value_by_count[k], r.value_by_count[k - 1]);

  // The reported disk satisfies the four conditions on an independent check.
  const auto f = pole_family_map(origin, r.best.a, r.best.c);
  const auto rep = check_conditions(f, gamma0(), 0.05, origin, -r.best.value + 1e-12, 256);
  EXPECT_TRUE(rep.all_hold());
  EXPECT_NEAR(disk_functional(f), r.best.value, 1e-12);
}

TEST(DiskLowerBound, MonotoneInRadiusAndRestarts) {
  const auto wide = disk_lower_bound(origin, gamma0(), 0.05, small_budget());
  const auto narrow = disk_lower_bound(origin, gamma0(), 0.01, small_budget());
  EXPECT_GE(wide.best.value, narrow.best.value);

  auto more = small_budget();
  more.restarts = 3;
  auto fewer = small_budget();
  fewer.restarts = 1;
  EXPECT_GE(disk_lower_bound(origin, gamma0(), 0.05, more).best.value,
            disk_lower_bound(origin, gamma0(), 0.05, fewer).best.value);
}

TEST(DiskLowerBound, DeterministicForASeed) {
  const auto a = disk_lower_bound(origin, gamma0(), 0.05, small_budget());
  const auto b = disk_lower_bound(origin, gamma0(), 0.05, small_budget());
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(DiskLowerBound, InfeasibleAndInvalidInput) {
  auto none = small_budget();
  none.max_poles = 0;
  try {
    disk_lower_bound(origin, gamma0(), 0.05, none);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_GT(e.best_penalty(), 0.5);
  }
  EXPECT_THROW(disk_lower_bound(origin, gamma0(), 0.0), DomainError);
  auto coarse = small_budget();
  coarse.m_bdy = 128;
  EXPECT_THROW(disk_lower_bound(origin, gamma0(), 0.05, coarse), DomainError);
  const std::vector<cplx> wrong{0.0};
  EXPECT_THROW(disk_lower_bound(wrong, gamma0(), 0.05), DimensionError);
}
