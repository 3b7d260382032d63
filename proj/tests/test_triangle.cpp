#include <gtest/gtest.h>

#include <cmath>

#include "percolab/errors.hpp"
#include "percolab/exact.hpp"
#include "percolab/triangle.hpp"

using namespace percolab;

namespace {

TriangleReport synthetic(double chi, std::uint32_t Omega, std::uint64_t V, double K1, double K2) {
  TriangleReport r;
  r.chi = chi;
  r.V = V;
  r.Omega = Omega;
  r.nabla_off_max = K1 / Omega + K2 * chi * chi * chi / static_cast<double>(V);
  return r;
}

}  // namespace

TEST(Triangle, ConvolutionMatchesMatrixCubeOnTorus) {
  const Graph g = Graph::torus_nn(3, 2);
  const ExactEnumerator e(g);
  const ExactStats s = e.stats(0.3);
  const TwoPointTable t = exact_two_point(g, s);
  EXPECT_NEAR(t.total(), s.chi, 1e-12);
  const TriangleReport conv = triangle_from_two_point(t, g);
  const TriangleReport mat = triangle_from_matrix(s.tau, g, 0.3);
  EXPECT_NEAR(conv.nabla_diag, mat.nabla_diag, 1e-12);
  EXPECT_NEAR(conv.nabla_off_max, mat.nabla_off_max, 1e-12);
  EXPECT_NEAR(conv.nabla_bar, mat.nabla_bar, 1e-12);
  EXPECT_NEAR(conv.chi_cubed_over_V, s.chi * s.chi * s.chi / 9.0, 1e-12);
  // Row sums of tau^3 are chi^3.
  const auto row = triangle_row(t, g, ConvolutionMethod::kDirect);
  double sum = 0.0;
  for (double v : row) sum += v;
  EXPECT_NEAR(sum, s.chi * s.chi * s.chi, 1e-10);
}

TEST(Triangle, FftMatchesDirect) {
  const Graph g = Graph::hypercube(7);
  const TwoPointTable t = estimate_two_point(g, 0.15, 200, 3);
  const auto direct = triangle_row(t, g, ConvolutionMethod::kDirect);
  const auto fft = triangle_row(t, g, ConvolutionMethod::kFft);
  ASSERT_EQ(direct.size(), fft.size());
  for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_NEAR(direct[i], fft[i], 1e-9 * (1.0 + direct[i]));
  const Graph torus = Graph::torus_nn(5, 2);
  const TwoPointTable tt = estimate_two_point(torus, 0.3, 200, 4);
  const auto d2 = triangle_row(tt, torus, ConvolutionMethod::kDirect);
  const auto f2 = triangle_row(tt, torus, ConvolutionMethod::kFft);
  for (std::size_t i = 0; i < d2.size(); ++i) EXPECT_NEAR(d2[i], f2[i], 1e-9 * (1.0 + d2[i]));
}

TEST(Triangle, EmptyConfigurationGivesDelta) {
  const Graph g = Graph::hypercube(5);
  const TwoPointTable t = estimate_two_point(g, 0.0, 4, 1);
  EXPECT_EQ(t.tau[0], 1.0);
  for (std::size_t d = 1; d < t.tau.size(); ++d) EXPECT_EQ(t.tau[d], 0.0);
  const TriangleReport r = triangle_from_two_point(t, g);
  EXPECT_DOUBLE_EQ(r.nabla_diag, 1.0);
  EXPECT_DOUBLE_EQ(r.nabla_off_max, 0.0);
  EXPECT_DOUBLE_EQ(r.a0_witness, 0.0);
  EXPECT_TRUE(check_triangle_condition(r, 0.0).holds);
}

TEST(Triangle, LatticeTwoPointAgreesWithExact) {
  const Graph g = Graph::hypercube(3);
  const ExactStats s = ExactEnumerator(g).stats(0.4);
  const TwoPointTable t = estimate_two_point(g, 0.4, 20000, 9);
  for (Vertex d = 0; d < g.V(); ++d) {
    EXPECT_LE(std::abs(t.tau[d] - s.tau_at(0, d)), 4.0 * t.std_error[d] + 1e-12) << d;
  }
}

TEST(Triangle, CompleteClosedFormMatchesMatrix) {
  for (std::uint32_t n : {4u, 6u}) {
    const Graph g = Graph::complete(n);
    for (double p : {0.2, 0.6}) {
      const ExactStats s = ExactEnumerator(g).stats(p);
      const TriangleReport closed = triangle_from_two_point(complete_exact_two_point(n, p), g);
      const TriangleReport mat = triangle_from_matrix(s.tau, g, p);
      EXPECT_NEAR(closed.nabla_diag, mat.nabla_diag, 1e-12);
      EXPECT_NEAR(closed.nabla_off_max, mat.nabla_off_max, 1e-12);
      EXPECT_NEAR(closed.chi, s.chi, 1e-12);
    }
  }
}

TEST(Triangle, CompleteMonteCarloOffDiagonal) {
  const std::uint32_t n = 200;
  const double p = 0.5 / n;
  const TwoPointTable t = estimate_two_point(Graph::complete(n), p, 4000, 2);
  ASSERT_EQ(t.kind, TwoPointTable::Kind::kComplete);
  const double expected = (complete_chi(n, p) - 1.0) / (n - 1.0);
  EXPECT_LE(std::abs(t.tau[1] - expected), 4.0 * t.std_error[1]);
}

TEST(Triangle, SharpenedFitRecoversConstants) {
  const std::uint32_t Omega = 14;
  const std::uint64_t V = 16384;
  std::vector<TriangleReport> reports;
  for (double chi : {2.0, 5.0, 10.0, 20.0}) reports.push_back(synthetic(chi, Omega, V, 2.0, 3.0));
  const SharpenedFit fit = check_sharpened_condition(reports, Omega, V);
  EXPECT_NEAR(fit.K1, 2.0, 1e-9);
  EXPECT_NEAR(fit.K2, 3.0, 1e-9);
  EXPECT_LT(fit.max_residual, 1e-12);
}

TEST(Triangle, SharpenedFitRejectsDegenerateInput) {
  const Graph g = Graph::hypercube(5);
  const TriangleReport r = triangle_from_two_point(estimate_two_point(g, 0.0, 4, 1), g);
  const std::vector<TriangleReport> all_p0(4, r);
  EXPECT_THROW(check_sharpened_condition(all_p0, 5, 32), FitError);
  EXPECT_THROW(check_sharpened_condition(std::span(all_p0).first(2), 5, 32), FitError);
}

TEST(Triangle, ConditionVerdict) {
  TriangleReport r;
  r.nabla_diag = 1.2;
  r.nabla_off_max = 0.1;
  EXPECT_TRUE(check_triangle_condition(r, 0.2).holds);
  const TriangleVerdict v = check_triangle_condition(r, 0.15);
  EXPECT_FALSE(v.holds);
  EXPECT_NEAR(v.diag_margin, -0.05, 1e-12);
}

TEST(Triangle, RejectsUnsupported) {
  const Graph k = Graph::complete(10);
  EXPECT_THROW(triangle_row(complete_exact_two_point(10, 0.1), k), UnsupportedFamily);
}
