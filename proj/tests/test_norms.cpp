#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pfb/norms.hpp"

using namespace pfb;

TEST_CASE("periodic_ls_norm on cos") {
  CHECK(periodic_ls_norm([](double t) { return std::cos(t); }, NormOrder::finite(1.0)) ==
        Catch::Approx(4.0).epsilon(1e-10));
  CHECK(periodic_ls_norm([](double t) { return std::cos(t); }, NormOrder::finite(2.0)) ==
        Catch::Approx(std::sqrt(pi)).epsilon(1e-11));
  CHECK(periodic_ls_norm([](double t) { return std::cos(t); }, NormOrder::infinity()) ==
        Catch::Approx(1.0).epsilon(1e-10));
  CHECK(periodic_ls_norm([](double t) { return std::cos(3.0 * t - 0.4); },
                         NormOrder::finite(1.5)) ==
        Catch::Approx(periodic_ls_norm([](double t) { return std::cos(t); },
                                       NormOrder::finite(1.5))).epsilon(1e-10));
}

TEST_CASE("zero function and convergence failure paths") {
  CHECK(periodic_ls_norm([](double) { return 0.0; }, NormOrder::finite(1.0)) == 0.0);
  QuadratureConfig tight;
  tight.rel_tol = 1e-14;
  tight.max_refinements = 1;
  CHECK_THROWS_AS(periodic_ls_norm([](double t) { return std::cos(t); },
                                   NormOrder::finite(1.0), tight),
                  non_convergence_error);
  QuadratureConfig bad;
  bad.sup_grid = 100;  // not a power of two
  CHECK_THROWS_AS(periodic_ls_norm([](double t) { return std::cos(t); },
                                   NormOrder::finite(2.0), bad),
                  std::domain_error);
}

TEST_CASE("kernel tail norm: Parseval at s = 2") {
  // || P^(n) ||_2^2 = pi * sum_{k>=n} e^{-2 alpha k^r}
  for (double alpha : {0.5, 1.0, 2.0})
    for (double r : {0.3, 0.5, 0.8})
      for (std::uint64_t n : {4, 32, 128}) {
        const KernelParams p{alpha, r, 0.7};
        KernelTail kt(p, n);
        const ScaledValue nrm = kernel_tail_ls_norm(kt, NormOrder::finite(2.0));
        const double lhs = nrm.value * nrm.value / pi;
        const double rhs = tail_sum(p, n, 2.0).value;
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-9));
      }
}

TEST_CASE("kernel tail norm matches the generic function engine") {
  const KernelParams p{1.0, 0.5, 0.3};
  KernelTail kt(p, 16);
  for (double s : {1.0, 1.5, 2.0}) {
    const ScaledValue fast = kernel_tail_ls_norm(kt, NormOrder::finite(s));
    const double generic = periodic_ls_norm([&](double t) { return kt.point(t); },
                                            NormOrder::finite(s), {}, 512);
    CHECK(fast.value == Catch::Approx(generic).epsilon(1e-8));
  }
}

TEST_CASE("kernel tail sup norm against a dense grid") {
  const KernelParams p{1.0, 0.5, 1.2};
  KernelTail kt(p, 16);
  const ScaledValue sup = kernel_tail_ls_norm(kt, NormOrder::infinity());
  std::vector<double> q;
  kt.grid_samples(std::uint64_t(1) << 17, q, nullptr);
  double dense = 0.0;
  for (double v : q) dense = std::max(dense, std::fabs(v));
  CHECK(sup.value >= dense - 1e-12);
  CHECK(sup.value == Catch::Approx(dense).epsilon(1e-6));
}

TEST_CASE("normalized norm monotonicity in s") {
  auto f = [](double t) { return std::cos(t) + 0.3 * std::sin(2.0 * t); };
  double prev = 0.0;
  for (double s : {1.0, 2.0, 4.0}) {
    const double v = std::pow(2.0 * pi, -1.0 / s) *
                     periodic_ls_norm(f, NormOrder::finite(s));
    CHECK(v >= prev * (1.0 - 1e-12));
    prev = v;
  }
}

TEST_CASE("j_s closed forms") {
  CHECK(j_s(7.7, NormOrder::infinity()) == 1.0);
  CHECK(j_s(1.0, NormOrder::finite(1.0)) ==
        Catch::Approx(std::log(1.0 + std::sqrt(2.0))).epsilon(1e-11));
  CHECK(j_s(1.0, NormOrder::finite(2.0)) ==
        Catch::Approx(std::sqrt(pi / 4.0)).epsilon(1e-11));
  CHECK_THROWS_AS(j_s(0.0, NormOrder::finite(2.0)), std::domain_error);
}

TEST_CASE("j_s_limit Gauss-theorem values") {
  CHECK(j_s_limit(NormOrder::finite(2.0)) ==
        Catch::Approx(std::sqrt(pi / 2.0)).epsilon(1e-11));
  CHECK(j_s_limit(NormOrder::finite(3.0)) == Catch::Approx(1.0).epsilon(1e-11));
  CHECK(j_s_limit(NormOrder::finite(4.0)) ==
        Catch::Approx(std::pow(pi / 4.0, 0.25)).epsilon(1e-11));
  CHECK_THROWS_AS(j_s_limit(NormOrder::finite(1.0)), std::domain_error);
  CHECK_THROWS_AS(j_s_limit(NormOrder::infinity()), std::domain_error);
}

TEST_CASE("j_s increases to its limit") {
  const NormOrder s = NormOrder::finite(2.5);
  const double lim = j_s_limit(s);
  double prev = 0.0;
  for (double v : {0.5, 2.0, 8.0, 64.0, 1024.0}) {
    const double cur = j_s(v, s);
    CHECK(cur > prev);
    CHECK(cur < lim);
    prev = cur;
  }
}

TEST_CASE("tail integral residual stays in (-2, 2)") {
  CHECK(std::fabs(tail_integral_residual(1.0, 0.5, 2.0, 100)) < 2.0);
  CHECK(std::fabs(tail_integral_residual(2.0, 0.25, 1.5, 50)) < 2.0);

  // cross-check against the direct two-quadrature route at moderate v
  {
    const double alpha = 2.0, r = 0.25, s = 1.5;
    const std::uint64_t n = 50;
    const double v = pi * std::pow(static_cast<double>(n), 1.0 - r) / (alpha * r);
    const double direct = (j_s(v, NormOrder::finite(s)) - j_s_limit(NormOrder::finite(s))) *
                          (s - 1.0) * std::pow(v, s - 1.0);
    CHECK(tail_integral_residual(alpha, r, s, n) == Catch::Approx(direct).epsilon(1e-6));
  }

  // the correction term itself vanishes as n grows
  double prev = 1e9;
  for (std::uint64_t n : {10, 100, 1000}) {
    const double r = 0.5, alpha = 1.0, s = 3.0;
    const double v = pi * std::pow(static_cast<double>(n), 1.0 - r) / (alpha * r);
    const double theta = tail_integral_residual(alpha, r, s, n);
    const double correction = std::fabs(theta) / ((s - 1.0) * std::pow(v, s - 1.0));
    CHECK(correction < prev);
    prev = correction;
  }

  CHECK_THROWS_AS(tail_integral_residual(1.0, 0.5, 1.0, 10), std::domain_error);
  CHECK_THROWS_AS(tail_integral_residual(1.0, 1.5, 2.0, 10), std::domain_error);
}

TEST_CASE("slow-decay kernel norm stays Parseval-consistent") {
  // alpha*r small enough that the binned Euler-Maclaurin completion carries
  // real mass, yet the spectrum is still resolvable
  const KernelParams p{0.5, 0.3, 0.0};
  KernelTail kt(p, 8);
  const ScaledValue nrm = kernel_tail_ls_norm(kt, NormOrder::finite(2.0));
  CHECK(nrm.value * nrm.value / pi ==
        Catch::Approx(tail_sum(p, 8, 2.0).value).epsilon(1e-9));
}
