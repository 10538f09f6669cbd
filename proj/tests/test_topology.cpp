#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fvinf/topology.hpp"
#include "support.hpp"

using namespace fvinf;
using testing_support::Gen;

namespace {

constexpr double pi = std::numbers::pi;

// Closed-form BPS kink of the cosine well.
double kink_exact(double x, double center, double scale) {
  return 4.0 * std::atan(std::exp(scale * (x - center) / std::numbers::sqrt2));
}

ModelParams unit_params() {
  ModelParams p;
  p.M_p = 1.0;
  return p;
}

}  // namespace

TEST(Topology, BogomolnyiBoundQuadrature) {
  EXPECT_NEAR(bogomolnyi_bound(1.0), 4.0 * std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(bogomolnyi_bound(2.5), 2.5 * 4.0 * std::numbers::sqrt2, 1e-11);
}

TEST(Topology, KinkCenterIsPi) {
  const auto g = LatticeGrid::spanning(-20.0, 20.0, 0.01);
  const auto k = kink_profile(g, 0.0, 1.0, +1);
  EXPECT_NEAR(k.values[2000], pi, 1e-9);
  EXPECT_NEAR(k.x(2000), 0.0, 1e-12);
}

TEST(Topology, KinkMatchesClosedForm) {
  Gen gen;
  for (int i = 0; i < 10; ++i) {
    const double scale = gen.uniform(0.5, 2.0);
    const double center = gen.uniform(-3.0, 3.0);
    const auto g = LatticeGrid::spanning(-15.0, 15.0, 0.01);
    const auto k = kink_profile(g, center, scale, +1);
    double worst = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) worst = std::max(worst, std::abs(k.values[j] - kink_exact(k.x(j), center, scale)));
    EXPECT_LT(worst, 1e-9);
  }
}

TEST(Topology, KinkBoundariesSettleExponentially) {
  for (double half : {10.0, 15.0, 20.0}) {
    const auto g = LatticeGrid::spanning(-half, half, 0.01);
    const auto k = kink_profile(g, 0.0, 1.0, +1);
    // Tail of 4 atan(exp(x / sqrt 2)) at distance half.
    const double tail = 4.0 * std::exp(-half / std::numbers::sqrt2);
    EXPECT_LE(std::abs(k.values.front()), tail * (1.0 + 1e-6));
    EXPECT_LE(std::abs(k.values.back() - 2.0 * pi), tail * (1.0 + 1e-6));
    EXPECT_NEAR(k.values.front(), kink_exact(-half, 0.0, 1.0), 1e-12);
  }
}

TEST(Topology, AntikinkIsReflection) {
  const auto g = LatticeGrid::spanning(-20.0, 20.0, 0.01);
  const auto k = kink_profile(g, 0.37, 1.3, +1);
  const auto a = kink_profile(g, 0.37, 1.3, -1);
  for (std::size_t j = 0; j < k.size(); ++j) EXPECT_NEAR(a.values[j], 2.0 * pi - k.values[j], 1e-9);
  EXPECT_NEAR(topological_charge(a), -1.0, 1e-6);
}

TEST(Topology, KinkCharge) {
  const auto g = LatticeGrid::spanning(-30.0, 30.0, 0.01);
  EXPECT_NEAR(topological_charge(kink_profile(g, 0.0, 1.0, +1)), 1.0, 1e-6);
  const auto g20 = LatticeGrid::spanning(-20.0, 20.0, 0.01);
  EXPECT_NEAR(topological_charge(kink_profile(g20, 0.0, 1.0, +1)), 1.0, 1e-6);
}

TEST(Topology, ConstantFieldHasNoChargeOrEnergy) {
  LatticeField f{-5.0, 0.1, std::vector<double>(101, 0.0)};
  EXPECT_EQ(topological_charge(f), 0.0);
  EXPECT_EQ(field_energy(f, unit_params()), 0.0);
  f.values.assign(101, 2.0 * pi);
  EXPECT_EQ(topological_charge(f), 0.0);
  EXPECT_NEAR(field_energy(f, unit_params()), 0.0, 1e-25);
}

TEST(Topology, PairBoundariesAndCharge) {
  const auto g = LatticeGrid::spanning(-40.0, 40.0, 0.01);
  const auto p = pair_config(g, 20.0, 1.0);
  EXPECT_NEAR(p.values.front(), 0.0, 1e-6);
  EXPECT_NEAR(p.values.back(), 0.0, 1e-6);
  EXPECT_NEAR(topological_charge(p), 0.0, 1e-6);
  const auto k = kink_profile(g, -10.0, 1.0, +1);
  const auto a = kink_profile(g, 10.0, 1.0, -1);
  EXPECT_NEAR(topological_charge(p), topological_charge(k) + topological_charge(a), 1e-12);
}

TEST(Topology, WellSeparatedPairCostsTwoKinks) {
  const auto g = LatticeGrid::spanning(-40.0, 40.0, 0.01);
  const double single = field_energy(kink_profile(g, 0.0, 1.0, +1), unit_params());
  const double pair = field_energy(pair_config(g, 20.0, 1.0), unit_params());
  EXPECT_NEAR(pair / (2.0 * single), 1.0, 0.01);
}

TEST(Topology, KinkEnergyNearBound) {
  const auto g = LatticeGrid::spanning(-20.0, 20.0, 0.01);
  const double e = field_energy(kink_profile(g, 0.0, 1.0, +1), unit_params());
  const double bound = bogomolnyi_bound(1.0);
  EXPECT_LT(std::abs(e - bound) / bound, 0.005);
}

TEST(Topology, InvalidInputsRejected) {
  EXPECT_THROW(kink_profile({0.0, 0.01, 1}, 0.0, 1.0, 1), ValidationError);
  EXPECT_THROW(kink_profile({0.0, 0.0, 10}, 0.0, 1.0, 1), ValidationError);
  EXPECT_THROW(kink_profile({0.0, 0.01, 10}, 0.0, 0.0, 1), ValidationError);
  EXPECT_THROW(pair_config({0.0, 0.01, 10}, 0.0, 1.0), ValidationError);
  EXPECT_THROW(topological_charge(LatticeField{0.0, 0.1, {1.0}}), ValidationError);
  EXPECT_THROW(field_energy(LatticeField{0.0, 0.1, {1.0, NAN}}, unit_params()), ValidationError);
}

namespace {

// Boundary-settled configurations: kinks and antikinks of random width,
// pairs, stacked kinks and kinks with smooth localized bumps.
std::vector<LatticeField> generated_configs(Gen& gen, double dx) {
  std::vector<LatticeField> out;
  const auto g = LatticeGrid::spanning(-60.0, 60.0, dx);
  for (int i = 0; i < 6; ++i) {
    const double scale = gen.uniform(1.0, 2.5);
    out.push_back(kink_profile(g, gen.uniform(-5.0, 5.0), scale, gen.integer(0, 1) ? 1 : -1));
    out.push_back(pair_config(g, gen.uniform(0.5, 20.0), gen.uniform(0.5, 2.0)));

    auto stacked = kink_profile(g, gen.uniform(-15.0, -5.0), gen.uniform(0.7, 1.5), +1);
    const auto second = kink_profile(g, gen.uniform(5.0, 15.0), gen.uniform(0.7, 1.5), +1);
    for (std::size_t j = 0; j < stacked.size(); ++j) stacked.values[j] += second.values[j];
    out.push_back(stacked);

    auto bumped = kink_profile(g, 0.0, 1.0, +1);
    const double amp = gen.uniform(-1.0, 1.0), pos = gen.uniform(-8.0, 8.0), width = gen.uniform(0.3, 3.0);
    for (std::size_t j = 0; j < bumped.size(); ++j) {
      const double u = (bumped.x(j) - pos) / width;
      bumped.values[j] += amp * std::exp(-u * u);
    }
    out.push_back(bumped);
  }
  return out;
}

double worst_deficit(double dx) {
  Gen gen;
  const double bound = bogomolnyi_bound(1.0);
  double deficit = 0.0;
  for (const auto& f : generated_configs(gen, dx)) {
    const double q = topological_charge(f);
    EXPECT_NEAR(q, std::round(q), 1e-6);
    deficit = std::max(deficit, bound * std::abs(q) - field_energy(f, unit_params()));
  }
  return deficit;
}

}  // namespace

TEST(Topology, BogomolnyiBoundHoldsForGeneratedConfigs) {
  const double coarse = worst_deficit(0.1);
  const double fine = worst_deficit(0.01);
  EXPECT_LT(fine, 1e-2);
  EXPECT_LT(coarse, 1e-2);
  EXPECT_LE(fine, std::max(coarse, 0.0) + 1e-12);
}

TEST(Topology, BpsKinkDiscretizationShrinksWithSpacing) {
  const double bound = bogomolnyi_bound(1.0);
  auto err = [&](double dx) {
    const auto g = LatticeGrid::spanning(-60.0, 60.0, dx);
    return std::abs(field_energy(kink_profile(g, 0.0, 1.0, +1), unit_params()) - bound);
  };
  EXPECT_LT(err(0.01), err(0.1));
  EXPECT_LT(err(0.01), 1e-3);
}

TEST(Topology, EnergyTranslationInvariant) {
  const auto g = LatticeGrid::spanning(-30.0, 30.0, 0.01);
  const double e0 = field_energy(kink_profile(g, 0.0, 1.0, +1), unit_params());
  Gen gen;
  for (int i = 0; i < 10; ++i) {
    const double shift = 0.01 * gen.integer(-300, 300);
    EXPECT_NEAR(field_energy(kink_profile(g, shift, 1.0, +1), unit_params()), e0, 1e-9) << shift;
  }
}
