#include <gtest/gtest.h>

#include <cmath>

#include "brute_force.hpp"
#include "percolab/errors.hpp"
#include "percolab/estimators.hpp"
#include "percolab/exact.hpp"

using namespace percolab;

namespace {

constexpr std::uint64_t kReps = 20000;

void expect_within(const Estimate& e, double exact, double z = 4.0) {
  EXPECT_LE(std::abs(e.mean - exact), z * e.std_error + 1e-12)
      << "estimate " << e.mean << " +- " << e.std_error << " vs exact " << exact;
}

}  // namespace

TEST(Estimators, DegenerateP) {
  const Graph g = Graph::hypercube(4);
  const Estimate c0 = estimate_chi(g, 0.0, 10, 1);
  EXPECT_EQ(c0.mean, 1.0);
  EXPECT_EQ(c0.std_error, 0.0);
  EXPECT_EQ(estimate_chi(g, 1.0, 10, 1).mean, 16.0);
  EXPECT_EQ(estimate_cmax(g, 0.0, 10, 1).mean.mean, 1.0);
  EXPECT_EQ(estimate_cmax(g, 1.0, 10, 1).mean.mean, 16.0);
  const std::vector<std::uint64_t> ks{1, 16};
  const TailTable t0 = estimate_tail(g, 0.0, ks, 10, 1);
  EXPECT_EQ(t0.estimates[0].mean, 1.0);
  EXPECT_EQ(t0.estimates[1].mean, 0.0);
  EXPECT_EQ(estimate_tail(g, 1.0, ks, 10, 1).estimates[1].mean, 1.0);
  EXPECT_EQ(estimate_magnetization(g, 0.3, 0.0, 10, 1).M.mean, 0.0);
  EXPECT_EQ(estimate_magnetization(g, 0.3, 1.0, 10, 1).M.mean, 1.0);
  EXPECT_EQ(estimate_var_z(g, 0.0, 2, 10, 1).mean, 0.0);
  EXPECT_EQ(estimate_var_z(g, 1.0, 1, 10, 1).mean, 0.0);
  EXPECT_EQ(estimate_EZg2(g, 0.3, 0.0, 10, 1).mean, 0.0);
  EXPECT_EQ(estimate_EZg2(g, 0.3, 1.0, 10, 1).mean, 256.0);
  EXPECT_THROW(estimate_chi(g, 0.5, 1, 1), InvalidParameter);
}

TEST(Estimators, AgreeWithExactOnQ3) {
  const Graph g = Graph::hypercube(3);
  const ExactEnumerator e(g);
  const double p = 0.5;
  const ExactStats s = e.stats(p);
  expect_within(estimate_chi(g, p, kReps, 3), s.chi);
  const std::vector<std::uint64_t> ks{1, 2, 3, 4, 5, 6, 7, 8};
  const TailTable t = estimate_tail(g, p, ks, kReps, 4);
  for (std::size_t i = 0; i < ks.size(); ++i) expect_within(t.estimates[i], s.P_geq[ks[i]]);
  expect_within(estimate_var_z(g, p, 3, kReps, 5), s.Var_Z_geq[3]);
  for (double gamma : {0.1, 0.5, 0.9}) {
    const ExactMagnetization m = e.magnetization(p, gamma);
    const MagnetizationEstimate est = estimate_magnetization(g, p, gamma, kReps, 6);
    expect_within(est.M, m.M);
    expect_within(est.chi_gamma, m.chi_gamma);
    expect_within(est.chi_perp, m.chi_perp);
    expect_within(estimate_EZg2(g, p, gamma, kReps, 7), m.E_Zg2);
  }
}

TEST(Estimators, CmaxOnK4) {
  const Graph g = Graph::complete(4);
  const CmaxEstimate c = estimate_cmax(g, 0.3, kReps, 8);
  expect_within(c.mean, percolab::testing::brute_force(g, 0.3).E_cmax);
  EXPECT_LE(c.q05, c.q50);
  EXPECT_LE(c.q50, c.q95);
}

TEST(Estimators, SingleEdgeMagnetization) {
  // M(p, gamma) = 1 - (1-p)(1-gamma) - p(1-gamma)^2 on K_2.
  const Graph g = Graph::complete(2);
  const MagnetizationEstimate m = estimate_magnetization(g, 0.5, 0.5, kReps, 9);
  expect_within(m.M, 0.625);
}

TEST(Estimators, ReplicaMatrixCombinationAndQuantile) {
  ReplicaMatrix m(4, 2, 0);
  const double a[4] = {1, 2, 3, 4}, b[4] = {2, 2, 2, 6};
  for (int r = 0; r < 4; ++r) {
    m.at(r, 0) = a[r];
    m.at(r, 1) = b[r];
  }
  EXPECT_DOUBLE_EQ(m.mean(0).mean, 2.5);
  const std::vector<double> w{1.0, -1.0};
  EXPECT_DOUBLE_EQ(m.combination(w).mean, -0.5);
  EXPECT_DOUBLE_EQ(m.variance(1).mean, 4.0);
  EXPECT_DOUBLE_EQ(m.quantile(0, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(m.quantile(0, 1.0), 4.0);
  ReplicaMatrix more(1, 2, 0);
  more.at(0, 0) = 5;
  m.append(more);
  EXPECT_EQ(m.rows(), 5u);
  EXPECT_DOUBLE_EQ(m.mean(0).mean, 3.0);
}

TEST(Estimators, ParseObservable) {
  EXPECT_EQ(parse_observable("chi").kind, Observable::kChi);
  const ObservableSpec t = parse_observable("P_geq:16");
  EXPECT_EQ(t.kind, Observable::kTail);
  EXPECT_EQ(t.param, 16.0);
  EXPECT_EQ(parse_observable("M:0.01").param, 0.01);
  EXPECT_THROW(parse_observable("chi:3"), InvalidParameter);
  EXPECT_THROW(parse_observable("M"), InvalidParameter);
  EXPECT_THROW(parse_observable("M:abc"), InvalidParameter);
  EXPECT_THROW(parse_observable("nope"), InvalidParameter);
}

TEST(NAlpha, Examples) {
  EXPECT_EQ(n_alpha(0.1, 0.5, 1000000), 317u);
  EXPECT_EQ(n_alpha(0.1, 0.0, 1000000), 100u);
  // eps V^{1/3} = 1 makes alpha irrelevant.
  EXPECT_EQ(n_alpha(0.5, 0.0, 8), 4u);
  EXPECT_EQ(n_alpha(0.5, 0.7, 8), 4u);
  EXPECT_THROW(n_alpha(0.01, 0.5, 1000), DegenerateCutoff);
  EXPECT_THROW(n_alpha(0.1, 1.0, 1000), InvalidParameter);
}

TEST(K0, ClosedFormTables) {
  const Graph g = Graph::hypercube(10);
  const double V = 1024.0;
  TailTable flat;
  for (std::uint64_t k = 1; k <= 1024; k *= 2) {
    flat.ks.push_back(k);
    flat.estimates.push_back({1.0, 0.0, 1, 0});
  }
  EXPECT_DOUBLE_EQ(estimate_k0(g, flat), V);

  const double c = 0.7;
  TailTable power;
  for (std::uint64_t k = 1; k <= 1024; k *= 2) {
    power.ks.push_back(k);
    power.estimates.push_back({c / std::sqrt(double(k)), 0.0, 1, 0});
  }
  EXPECT_NEAR(estimate_k0(g, power), std::pow(c * V, 2.0 / 3.0), 1e-9);

  TailTable empty;
  EXPECT_THROW(estimate_k0(g, empty), BracketError);
}
