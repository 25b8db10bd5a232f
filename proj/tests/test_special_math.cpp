#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>
#include <numbers>

#include "bussgang/special_math.hpp"
#include "test_support.hpp"

using namespace bussgang;
using testsupport::close_rel;
using testsupport::erf_taylor;
using testsupport::linspace;

TEST_CASE("erf matches the series oracle to 1e-14") {
  CHECK(bussgang::erf(0.0) == 0.0);
  CHECK(std::fabs(bussgang::erf(1.0) - 0.8427007929497149) < 1e-15);
  CHECK(std::fabs(bussgang::erf(1.0) - erf_taylor(1.0)) < 1e-15);
  for (double x : linspace(-3.5, 3.5, 141)) CHECK(std::fabs(bussgang::erf(x) - erf_taylor(x)) < 1e-14);
}

TEST_CASE("erf limits and bounds") {
  CHECK(bussgang::erf(6.0) > 1.0 - 1e-15);
  CHECK(bussgang::erf(-6.0) < -1.0 + 1e-15);
  CHECK(bussgang::erf(40.0) == 1.0);
  for (double x : linspace(-5.0, 5.0, 201)) {
    CHECK(std::fabs(bussgang::erf(x)) <= 1.0);
    if (x != 0.0) CHECK(bussgang::erf(x) * x > 0.0);  // sign follows the argument
  }
}

TEST_CASE("erf odd symmetry is bit-exact") {
  for (double x : linspace(1e-6, 5.0, 500))
    CHECK(std::bit_cast<std::uint64_t>(bussgang::erf(-x)) == std::bit_cast<std::uint64_t>(-bussgang::erf(x)));
}

TEST_CASE("erf is strictly increasing") {
  const auto grid = linspace(-5.0, 5.0, 400);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) CHECK(bussgang::erf(grid[i]) < bussgang::erf(grid[i + 1]));
}

TEST_CASE("erfc complements erf") {
  for (double x : linspace(-4.0, 4.0, 81)) CHECK(std::fabs(bussgang::erf(x) + bussgang::erfc(x) - 1.0) < 1e-14);
  CHECK(std::fabs(bussgang::erfc(1.0) - (1.0 - 0.8427007929497149)) < 1e-15);
  CHECK(bussgang::erfc(30.0) == 0.0);
}

TEST_CASE("normal_pdf values and symmetry") {
  CHECK(std::fabs(normal_pdf(0.0, 1.0) - 1.0 / std::sqrt(2.0 * std::numbers::pi)) < 1e-16);
  for (double x : linspace(0.0, 6.0, 25))
    CHECK(normal_pdf(x, 1.3) == normal_pdf(-x, 1.3));  // x enters squared
  CHECK_THROWS_AS(normal_pdf(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(normal_pdf(0.0, -1.0), DomainError);
}

TEST_CASE("quadrature spec validation") {
  CHECK_THROWS_AS(([] {
                    QuadratureSpec s;
                    s.relative_tolerance = 0.0;
                    s.validate();
                  })(),
                  DomainError);
  CHECK_THROWS_AS(([] {
                    QuadratureSpec s;
                    s.max_subdivisions = 0;
                    s.validate();
                  })(),
                  DomainError);
  CHECK_THROWS_AS(([] {
                    QuadratureSpec s;
                    s.integration_halfwidth_sigmas = 3.0;
                    s.validate();
                  })(),
                  DomainError);
}

TEST_CASE("gaussian expectation: normalization, moments, polynomials") {
  QuadratureSpec tight;
  tight.relative_tolerance = 1e-13;
  auto one = [](double) { return 1.0; };
  CHECK(std::fabs(integrate_gaussian_expectation(one, 0.0, 1.0, tight) - 1.0) < 1e-12);
  CHECK(std::fabs(integrate_gaussian_expectation(one, -3.0, 0.25, tight) - 1.0) < 1e-12);

  const QuadratureSpec spec;

  struct Case {
    double mean, sigma;
  };
  for (const auto& [mu, sg] : {Case{0.0, 1.0}, Case{2.0, 0.5}, Case{-1.0, 2.0}}) {
    auto x1 = integrate_gaussian_expectation([](double x) { return x; }, mu, sg, spec);
    auto x2 = integrate_gaussian_expectation([](double x) { return x * x; }, mu, sg, spec);
    auto x3 = integrate_gaussian_expectation([](double x) { return x * x * x; }, mu, sg, spec);
    auto x4 =
        integrate_gaussian_expectation([](double x) { return x * x * x * x; }, mu, sg, spec);
    const double v = sg * sg;
    // zero-valued moments are held to the absolute tolerance the relative
    // request implies, v^(k/2) * 1e-9 in order of magnitude
    CHECK(close_rel(x1, mu, 1e-9, 5e-9 * sg));
    CHECK(close_rel(x2, mu * mu + v, 1e-9));
    CHECK(close_rel(x3, mu * mu * mu + 3.0 * mu * v, 1e-9, 5e-9 * sg * sg * sg));
    CHECK(close_rel(x4, mu * mu * mu * mu + 6.0 * mu * mu * v + 3.0 * v * v, 1e-9));
  }

  // variance example: g(x) = x^2, mean 0, sigma 2
  CHECK(close_rel(integrate_gaussian_expectation([](double x) { return x * x; }, 0.0, 2.0, spec),
                  4.0, 1e-9));
}

TEST_CASE("gaussian expectation: forced breakpoints handle jumps") {
  const QuadratureSpec spec;
  const double brk[] = {0.0};
  // E[sign(x)] for N(mu, sigma) is erf(mu / (sigma sqrt 2))
  for (double mu : {0.3, -0.7, 0.0}) {
    auto v = integrate_gaussian_expectation([](double x) { return x > 0.0 ? 1.0 : -1.0; }, mu,
                                            1.0, spec, brk);
    CHECK(close_rel(v, bussgang::erf(mu / std::numbers::sqrt2), 1e-9, 1e-10));
  }
}

TEST_CASE("quadrature reports non-convergence with its best estimate") {
  QuadratureSpec spec;
  spec.relative_tolerance = 1e-13;
  spec.max_subdivisions = 3;  // far too few for a jump with no breakpoint hint
  try {
    integrate_gaussian_expectation([](double x) { return x > 0.37 ? 1.0 : 0.0; }, 0.0, 1.0, spec);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(std::isfinite(e.best_estimate()));
    CHECK(e.error_bound() > 0.0);
    CHECK(e.best_estimate() > 0.2);  // still a usable estimate
    CHECK(e.best_estimate() < 0.5);
  }
}

TEST_CASE("sample streams are deterministic and substreams differ") {
  const RngStream a{1234, 0};
  const auto s1 = sample_normal(a, 1.0, 1000);
  const auto s2 = sample_normal(a, 1.0, 1000);
  CHECK(s1 == s2);

  const auto s3 = sample_normal({1234, 1}, 1.0, 1000);
  CHECK(s1 != s3);
  const auto s4 = sample_normal({99, 0}, 1.0, 1000);
  CHECK(s1 != s4);
}

TEST_CASE("sample_normal degenerate and domain cases") {
  const auto zeros = sample_normal({7, 0}, 0.0, 64);
  for (double v : zeros) CHECK(v == 0.0);
  CHECK_THROWS_AS(sample_normal({7, 0}, -1.0, 8), DomainError);
  CHECK_THROWS_AS(sample_normal({7, 0}, 1.0, 0), DomainError);
}

TEST_CASE("sample_normal moments at one million draws") {
  const std::size_t n = 1'000'000;
  const auto xs = sample_normal({20250809, 3}, 1.0, n);
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= static_cast<double>(n);
  CHECK(std::fabs(mean) < 4.0 / 1000.0);  // 4 sigma / sqrt(n)

  double var = 0.0;
  for (double v : xs) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  CHECK(std::fabs(var - 1.0) < 0.006);
}

TEST_CASE("uniforms stay in [0, 1)") {
  SampleStream s({5, 5});
  for (int i = 0; i < 10000; ++i) {
    const double u = s.next_uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
