#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "projhull/diskmaps.hpp"
#include "projhull/theorem3.hpp"

using namespace projhull;

namespace {

const ComplexPolynomial z_var = ComplexPolynomial::variable(2, 0);
const ComplexPolynomial w_var = ComplexPolynomial::variable(2, 1);

// f(zeta) = (zeta, 0.25/(zeta - 0.5)); chi for P = w, d = 1 is log 0.25 - log|1 - 0.5 zeta|.
RationalDiskMap single_pole_map() {
  std::vector<DiskComponent> comps(2);
  comps[0].poly = {0.0, 1.0};
  comps[1].poles = {{0.5, 0.25, 1}};
  return RationalDiskMap(2, std::move(comps));
}

const SampledCurve& gamma0() {
  static const SampledCurve c = build_curve(PoleSeriesParams{}, 2048);
  return c;
}

BlaschkeProduct random_blaschke(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(0, 20);
  std::uniform_real_distribution<double> rad(0.0, 0.999), ang(0.0, 2 * std::numbers::pi);
  std::vector<cplx> zs(count(rng));
  for (auto& z : zs) z = std::polar(rad(rng), ang(rng));
  return BlaschkeProduct(std::move(zs));
}

double chi_closed_form(cplx zeta) { return std::log(0.25) - std::log(std::abs(1.0 - 0.5 * zeta)); }

}  // namespace

TEST(Blaschke, Examples) {
  EXPECT_EQ(blaschke_eval(BlaschkeProduct{}, cplx(0.3, 0.2)), cplx(1.0));
  EXPECT_EQ(blaschke_eval(BlaschkeProduct({0.5}), 0.0), cplx(-0.5));
  const BlaschkeProduct b({0.5, cplx(0.0, 0.3)});
  EXPECT_NEAR(std::abs(b(std::polar(1.0, std::numbers::pi / 3))), 1.0, 1e-12);
  EXPECT_THROW(BlaschkeProduct({1.0}), DomainError);
  EXPECT_THROW(b(1.1), DomainError);
}

TEST(Blaschke, LogCenterExamples) {
  EXPECT_EQ(blaschke_log_center(BlaschkeProduct{}), 0.0);
  EXPECT_NEAR(blaschke_log_center(BlaschkeProduct({0.5, 0.75, 0.875})), -1.1143606, 1e-7);
  std::vector<cplx> zs;
  oracle::ld sum = 0.0L;
  for (std::size_t j = 1; j <= 30; ++j) {
    zs.push_back(static_cast<double>(oracle::a(j)));
    sum += std::log(oracle::a(j));
  }
  const double v = blaschke_log_center(BlaschkeProduct(zs));
  EXPECT_NEAR(v, static_cast<double>(sum), 1e-13);
  EXPECT_NEAR(v, -1.2420620, 1e-6);
  EXPECT_EQ(blaschke_log_center(BlaschkeProduct({0.0, 0.5})), -std::numeric_limits<double>::infinity());
}

TEST(Blaschke, BoundaryUnitModulusOnRandomProducts) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto b = random_blaschke(rng);
    for (cplx zeta : boundary_samples(256)) EXPECT_LE(std::abs(std::abs(b(zeta)) - 1.0), 1e-10);
  }
}

TEST(Blaschke, CenterIdentityAndClaim) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const auto b = random_blaschke(rng);
    const double center = blaschke_log_center(b);
    EXPECT_NEAR(std::log(std::abs(b(0.0))), center, 1e-12);
    // Any M with sum log|zero| >= -M bounds |B(0)| from below by e^{-M}.
    const double M = -center;
    EXPECT_GE(std::abs(b(0.0)), std::exp(-M) * (1 - 1e-12));
  }
}

TEST(Blaschke, DeflatedValueMatchesDifferenceQuotient) {
  const BlaschkeProduct b({0.5, cplx(0.1, -0.4), cplx(-0.6, 0.2)});
  for (std::size_t j = 0; j < 3; ++j) {
    const cplx p = b.zeros()[j];
    const cplx h(1e-7, 0.0);
    EXPECT_LE(std::abs(b(p + h) / h - b.deflated_at(j)), 1e-6);
  }
}

TEST(EvalDisk, FamilyExamples) {
  const PoleSeriesParams p;
  const auto f1 = example1_map(p, 1);
  const auto at0 = f1(0.0);
  EXPECT_FALSE(at0.at_infinity);
  EXPECT_EQ(at0.affine[0], cplx(0.0));
  EXPECT_NEAR(std::abs(at0.affine[1]), 0.0, 1e-16);
  const auto atm1 = f1(-1.0);
  EXPECT_EQ(atm1.affine[0], cplx(-1.0));
  EXPECT_NEAR(atm1.affine[1].real(), 1.0 / 3.0, 1e-15);
  const auto pole = f1(0.5);
  ASSERT_TRUE(pole.at_infinity);
  EXPECT_EQ(pole.direction, (std::vector<cplx>{0.0, 1.0}));
}

TEST(EvalDisk, FamilyMatchesOmegaPartial) {
  const PoleSeriesParams p;
  const auto f = example1_map(p, 7);
  for (cplx zeta : {cplx(-1.0), cplx(0.3, 0.4), cplx(0.0, 1.0), cplx(0.9)}) {
    const auto v = f.affine(zeta);
    EXPECT_EQ(v[0], zeta);
    EXPECT_LE(std::abs(v[1] - oracle::to_d(oracle::omega_partial(7, zeta))), 1e-14);
  }
}

TEST(EvalDisk, HigherOrderPoleIsUnsupported) {
  std::vector<DiskComponent> comps(2);
  comps[0].poly = {0.0, 1.0};
  comps[1].poles = {{0.5, 1.0, 2}};
  const RationalDiskMap f(2, std::move(comps));
  EXPECT_FALSE(f.pole_list()[0].simple);
  EXPECT_THROW(f(0.5), UnsupportedPoleError);
  EXPECT_NEAR(std::abs(f.affine(0.0)[1] - 4.0), 0.0, 1e-15);
}

TEST(RationalDiskMap, MergesAndDeduplicatesPoles) {
  std::vector<DiskComponent> comps(2);
  comps[0].poles = {{0.5, 1.0, 1}};
  comps[1].poles = {{0.5, 2.0, 1}, {0.5, 1.0, 1}, {0.2, 0.0, 1}};
  const RationalDiskMap f(2, std::move(comps));
  ASSERT_EQ(f.pole_list().size(), 1u);
  EXPECT_EQ(f.pole_list()[0].residue, (std::vector<cplx>{1.0, 3.0}));
  EXPECT_THROW(RationalDiskMap(1, std::vector<DiskComponent>(2)), DimensionError);
  std::vector<DiskComponent> outside(1);
  outside[0].poles = {{1.0, 1.0, 1}};
  EXPECT_THROW(RationalDiskMap(1, std::move(outside)), DomainError);
}

TEST(CheckConditions, ThirdFamilyMember) {
  const PoleSeriesParams p;
  const std::vector<cplx> z0{0.0, 0.0};
  const auto rep = check_conditions(example1_map(p, 3), gamma0(), 0.1, z0, 1.25);
  EXPECT_TRUE(rep.cond_i.holds);
  EXPECT_TRUE(rep.cond_ii.holds);
  EXPECT_LE(rep.cond_ii.deviation, kCenterTolerance);
  EXPECT_TRUE(rep.cond_iii.holds);
  EXPECT_NEAR(rep.cond_iii.pole_log_sum, -1.1143606, 1e-7);
  EXPECT_TRUE(rep.cond_iv.holds);
  EXPECT_TRUE(rep.all_hold());
}

TEST(CheckConditions, ConstantMapMissesTheTube) {
  std::vector<DiskComponent> comps(2);
  comps[0].poly = {0.0};
  comps[1].poly = {0.0};
  const RationalDiskMap f(2, std::move(comps));
  const std::vector<cplx> z0{0.0, 0.0};
  const auto rep = check_conditions(f, gamma0(), 0.01, z0, 1.0);
  EXPECT_FALSE(rep.cond_i.holds);
  // The first coordinate of every curve point has modulus one.
  EXPECT_GE(rep.cond_i.max_boundary_distance, 1.0 - 1e-9);
  EXPECT_TRUE(rep.cond_ii.holds);
}

TEST(CheckConditions, TwentiethMemberWithinTailRadius) {
  const PoleSeriesParams p;
  const std::vector<cplx> z0{0.0, 0.0};
  // The boundary image lies within |omega - omega_20| <= 2 tail(20) of the curve.
  const double r = p.boundary_tail_bound(20) + 1e-12;
  const auto rep = check_conditions(example1_map(p, 20), gamma0(), r, z0, 1.25);
  EXPECT_TRUE(rep.cond_i.holds) << rep.cond_i.max_boundary_distance << " vs " << r;
  EXPECT_TRUE(rep.all_hold());
}

TEST(CheckConditions, CertifiedHalvesTheRadiusAndDegenerateCases) {
  const PoleSeriesParams p;
  const std::vector<cplx> z0{0.0, 0.0};
  const auto f = example1_map(p, 3);
  const double bd = max_boundary_distance(f, gamma0(), 1024);
  const double r = 1.5 * bd;
  EXPECT_TRUE(check_conditions(f, gamma0(), r, z0, 2.0).cond_i.holds);
  EXPECT_FALSE(check_conditions(f, gamma0(), r, z0, 2.0, 1024, true).cond_i.holds);
  EXPECT_FALSE(check_conditions(f, gamma0(), r, z0, 1.0).cond_iii.holds);
  EXPECT_THROW(check_conditions(f, gamma0(), r, z0, 2.0, 128), DomainError);

  std::vector<DiskComponent> comps(2);
  comps[0].poly = {0.0, 1.0};
  comps[1].poles = {{0.0, 0.01, 1}, {0.5, 0.1, 2}};
  const auto rep = check_conditions(RationalDiskMap(2, std::move(comps)), gamma0(), 0.1, z0, 1.0);
  EXPECT_FALSE(rep.cond_ii.holds);
  EXPECT_TRUE(std::isinf(rep.cond_ii.deviation));
  EXPECT_FALSE(rep.cond_iv.holds);
  EXPECT_EQ(rep.cond_iv.offending_poles, (std::vector<cplx>{0.5}));
}

TEST(ChiEval, ClosedFormExamples) {
  const auto f = single_pole_map();
  const BlaschkeProduct b({0.5});
  EXPECT_NEAR(chi_eval(w_var, 1, f, b, 0.0).value, -1.3862944, 1e-7);
  EXPECT_NEAR(chi_eval(w_var, 1, f, b, 1.0).value, -0.6931472, 1e-7);
  EXPECT_NEAR(chi_eval(w_var, 1, f, b, 0.5).value, -1.0986123, 1e-7);
  for (cplx zeta : {cplx(0.2, 0.7), cplx(-0.9), cplx(0.5, 1e-3)})
    EXPECT_NEAR(chi_eval(w_var, 1, f, b, zeta).value, chi_closed_form(zeta), 1e-13);
}

TEST(ChiEval, MinusInfinityIsFlagged) {
  const auto f = single_pole_map();
  const BlaschkeProduct b({0.5});
  const auto v = chi_eval(z_var, 1, f, b, 0.0);
  EXPECT_TRUE(v.minus_infinity);
  // P = z has pole order 0 < d at the pole, so the limit is -inf there.
  EXPECT_TRUE(chi_eval(z_var, 1, f, b, 0.5).minus_infinity);
  EXPECT_THROW(chi_eval(z_var * z_var, 1, f, b, 0.2), DegreeError);
  EXPECT_THROW(chi_eval(w_var, 1, f, BlaschkeProduct({0.4}), 0.2), DomainError);
}

TEST(ChiEval, ExtensionAtPolesMatchesCircleMean) {
  const PoleSeriesParams p;
  const auto f = example1_map(p, 3);
  const auto b = f.blaschke();
  const std::vector<std::pair<ComplexPolynomial, unsigned>> corpus{
      {w_var, 1}, {w_var * w_var, 2}, {w_var * w_var + z_var * w_var, 2}, {w_var + z_var * 3.0, 1}};
  for (const auto& [poly, d] : corpus) {
    for (const auto& pole : f.pole_list()) {
      const auto at = chi_eval(poly, d, f, b, pole.pole);
      ASSERT_FALSE(at.minus_infinity);
      // chi is harmonic near a pole, so its circle mean equals the center value.
      double mean = 0.0;
      const std::size_t k = 64;
      for (std::size_t j = 0; j < k; ++j) mean += chi_eval(poly, d, f, b, pole.pole + 1e-4 * unit_root(j, k)).value;
      mean /= static_cast<double>(k);
      EXPECT_NEAR(mean, at.value, 1e-6);
    }
  }
}

TEST(MaxPrinciple, Corpus) {
  const PoleSeriesParams p;
  const auto f1 = single_pole_map();
  const BlaschkeProduct b1({0.5});
  const auto r1 = max_principle_check(w_var, 1, f1, b1, {}, 1024);
  EXPECT_TRUE(r1.pass);
  EXPECT_NEAR(r1.boundary_max, -0.6931472, 1e-7);
  EXPECT_LT(r1.interior_max, r1.boundary_max);

  const auto c = ComplexPolynomial::constant(2, 3.0);
  const auto rc = max_principle_check(c, 2, f1, b1, {}, 256);
  EXPECT_TRUE(rc.pass);
  EXPECT_NEAR(rc.boundary_max, std::log(3.0), 1e-12);

  const auto f5 = example1_map(p, 5);
  EXPECT_TRUE(max_principle_check(z_var, 1, f5, f5.blaschke(), {}, 512).pass);
  EXPECT_TRUE(max_principle_check(w_var * w_var - z_var, 2, f5, f5.blaschke(), {}, 512).pass);
  EXPECT_THROW(max_principle_check(w_var, 1, f1, b1, {32, 64}, 256), DomainError);
}

TEST(MembershipBound, Examples) {
  const PoleSeriesParams p;
  const auto f1 = example1_map(p, 1);
  const auto m = membership_bound_check(z_var, 1, f1, f1.blaschke(), 0.9, 2.0);
  EXPECT_NEAR(m.lhs, 0.9, 1e-15);
  EXPECT_NEAR(m.rhs, 2.75, 1e-12);
  EXPECT_TRUE(m.holds);
  EXPECT_TRUE(membership_bound_check(w_var - w_var, 1, f1, f1.blaschke(), 0.3, 2.0).holds);
  EXPECT_THROW(membership_bound_check(z_var, 1, f1, f1.blaschke(), 0.5, 2.0), DomainError);

  const auto p2 = expand_pn(p, 2);
  double sup = 0.0;
  for (std::size_t k = 0; k < gamma0().size(); ++k) sup = std::max(sup, std::abs(p2(gamma0().point(k))));
  const auto f10 = example1_map(p, 10);
  EXPECT_TRUE(membership_bound_check(p2 * (1.0 / sup), 3, f10, f10.blaschke(), 0.0, 2.0).holds);
}

TEST(GProduct, Examples) {
  const PoleSeriesParams p;
  const auto f1 = example1_map(p, 1);
  const auto g1 = g_product_bound(f1, f1.blaschke(), 512);
  ASSERT_EQ(g1.pole_values.size(), 1u);
  EXPECT_NEAR(std::abs(g1.pole_values[0][0]), 0.0, 1e-16);
  EXPECT_NEAR(g1.pole_values[0][1].real(), 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(g1.max_principle_holds);

  const std::vector<cplx> origin{0.0, 0.0};
  const auto lin = pole_family_map(origin, {}, {});
  const auto gl = g_product_bound(lin, BlaschkeProduct{}, 256);
  EXPECT_NEAR(gl.boundary_sup, 1.0, 1e-15);

  const auto f3 = example1_map(p, 3);
  const auto g3 = g_product_bound(f3, f3.blaschke(), 1024);
  double curve_max = 0.0;
  for (std::size_t k = 0; k < gamma0().size(); ++k)
    curve_max = std::max(curve_max, SampledCurve::distance(gamma0().point(k), origin));
  EXPECT_LE(g3.boundary_sup, curve_max + 0.1);
  EXPECT_TRUE(g3.max_principle_holds);
}

TEST(DiskFunctional, Examples) {
  const std::vector<cplx> z0{0.0};
  EXPECT_EQ(disk_functional(pole_family_map(z0, {}, {})), 0.0);
  const auto f3 = example1_map(PoleSeriesParams{}, 3);
  EXPECT_NEAR(disk_functional(f3), -1.1143606, 1e-7);
  EXPECT_EQ(disk_functional(f3), blaschke_log_center(f3.blaschke()));
}

TEST(DiskMapJson, RoundTrip) {
  const auto f = example1_map(PoleSeriesParams{}, 6);
  const auto j = disk_map_to_json(f);
  EXPECT_EQ(j.at("n"), 2);
  const auto g = disk_map_from_json(j);
  ASSERT_EQ(g.pole_list().size(), 6u);
  for (cplx zeta : {cplx(0.1, 0.2), cplx(-1.0), cplx(0.0, 1.0)}) EXPECT_EQ(f.affine(zeta), g.affine(zeta));
  EXPECT_EQ(disk_map_to_json(g), j);
}
