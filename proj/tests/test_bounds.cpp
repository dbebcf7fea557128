#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <future>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "pfb/bounds.hpp"

using namespace pfb;

namespace {

// rectangle rule over a fixed 2^20-node grid, each node evaluated by direct
// summation; independent of the FFT/bin sampling inside the library
double brute_grid_ls_norm(const KernelTail& kt, double s) {
  const std::uint64_t n_nodes = std::uint64_t(1) << 20;
  auto chunk = [&](std::uint64_t j0, std::uint64_t j1) {
    long double acc = 0.0L;
    for (std::uint64_t j = j0; j < j1; ++j) {
      const double t = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n_nodes);
      acc += std::pow(std::fabs(kt.point(t)), static_cast<long double>(s));
    }
    return static_cast<double>(acc);
  };
  auto f1 = std::async(std::launch::async, chunk, 0, n_nodes / 2);
  const double hi = chunk(n_nodes / 2, n_nodes);
  const double total = f1.get() + hi;
  return std::pow(total * 2.0 * pi / static_cast<double>(n_nodes), 1.0 / s);
}

double test_shift_max(const std::vector<double>& q, std::uint64_t l) {
  const std::uint64_t n = q.size();
  double m = 0.0;
  for (std::uint64_t j = 0; j < n; ++j)
    m = std::max(m, std::fabs(q[j] - q[(j + l) % n]));
  return m;
}

}  // namespace

TEST_CASE("upper bound at s = 2 is Parseval-exact") {
  // geometric case: alpha = ln 2, r = 1, n = 1 -> (1/3) inside the sum
  const ScaledValue u = upper_bound({std::log(2.0), 1.0, 0.4}, 1, NormOrder::finite(2.0));
  CHECK(u.raw() == Catch::Approx(1.0 / std::sqrt(3.0 * pi)).epsilon(1e-10));

  for (double alpha : {0.5, 2.0})
    for (std::uint64_t n : {4, 64}) {
      const KernelParams p{alpha, 0.5, 1.3};
      const ScaledValue ub = upper_bound(p, n, NormOrder::finite(2.0));
      const double exact = std::sqrt(tail_sum(p, n, 2.0).value / pi);
      CHECK(ub.value == Catch::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("upper bound at s = 2 decreases in n") {
  const KernelParams p{1.0, 0.5, 0.0};
  double prev = upper_bound(p, 2, NormOrder::finite(2.0)).raw();
  for (std::uint64_t n : {4, 8, 16}) {
    const double cur = upper_bound(p, n, NormOrder::finite(2.0)).raw();
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("upper bound at s = 1 against the brute-force grid") {
  const KernelParams p{1.0, 0.5, 0.3};
  KernelTail kt(p, 32);
  const ScaledValue ub = upper_bound(kt, NormOrder::finite(1.0));
  const double brute = brute_grid_ls_norm(kt, 1.0) / pi;
  CHECK(ub.value == Catch::Approx(brute).epsilon(1e-8));
}

TEST_CASE("lower bound: ordering and Parseval cross-check at s = 2") {
  const KernelParams p{1.0, 0.5, 0.7};
  KernelTail kt(p, 16);
  const ScaledValue ub = upper_bound(kt, NormOrder::finite(2.0));
  const LowerBoundResult lb = lower_bound(kt, NormOrder::finite(2.0));
  CHECK(lb.value.value <= ub.value * (1.0 + 1e-9));

  // || Q(.) - Q(.+h) ||_2^2 = 2 pi sum c_k^2 (1 - cos kh)
  const std::vector<double>& c = kt.cached_coeffs();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = static_cast<double>(kt.n() + i);
    acc += static_cast<long double>(c[i]) * c[i] * (1.0L - std::cos(k * lb.h_star));
  }
  const double parseval =
      std::sqrt(2.0 * pi * static_cast<double>(acc)) / (2.0 * pi);
  CHECK(lb.value.value == Catch::Approx(parseval).epsilon(1e-9));
}

TEST_CASE("lower bound h-grid sup is stable under grid doubling") {
  const KernelParams p{1.0, 0.5, 0.0};
  KernelTail kt(p, 64);
  std::vector<double> q;
  const std::uint64_t n_grid = 4096;
  kt.grid_samples(n_grid, q, nullptr);
  double best_coarse = 0.0, best_fine = 0.0;
  for (std::uint64_t i = 1; i < 512; ++i)
    best_coarse = std::max(best_coarse, test_shift_max(q, (i * n_grid) / 512));
  for (std::uint64_t i = 1; i < 1024; ++i)
    best_fine = std::max(best_fine, test_shift_max(q, (i * n_grid) / 1024));
  CHECK(best_fine >= best_coarse);

  const LowerBoundResult lb = lower_bound(kt, NormOrder::infinity());
  CHECK(lb.value.value >= best_fine / (2.0 * pi) * (1.0 - 1e-6));
  const ScaledValue ub = upper_bound(kt, NormOrder::infinity());
  CHECK(lb.value.value <= ub.value * (1.0 + 1e-9));
}

TEST_CASE("best constant deviation") {
  const KernelParams p{1.0, 0.5, 0.9};
  KernelTail kt(p, 16);

  // s = 2: zero mean makes lambda* = 0 and the deviation equals the upper bound
  const BestConstantResult bc2 = best_constant_deviation(kt, NormOrder::finite(2.0));
  const ScaledValue ub2 = upper_bound(kt, NormOrder::finite(2.0));
  CHECK(std::fabs(bc2.lambda_star) < 1e-7 * kt.coeff_sum());
  CHECK(bc2.value.value == Catch::Approx(ub2.value).epsilon(1e-9));

  for (double s : {1.0, 1.5}) {
    const BestConstantResult bc = best_constant_deviation(kt, NormOrder::finite(s));
    const ScaledValue ub = upper_bound(kt, NormOrder::finite(s));
    CHECK(bc.value.value <= ub.value * (1.0 + 1e-9));
  }
}

TEST_CASE("best constant vs lambda grid scan at s = 1") {
  const KernelParams p{1.0, 0.5, 0.3};
  KernelTail kt(p, 32);
  const NormOrder s1 = NormOrder::finite(1.0);
  const BestConstantResult bc = best_constant_deviation(kt, s1);

  // discrete objective over a 10^4-point lambda grid (test-local evaluator)
  std::vector<double> q;
  const std::uint64_t n_grid = 4096;
  kt.grid_samples(n_grid, q, nullptr);
  auto objective = [&](double lam) {
    double acc = 0.0;
    for (double v : q) acc += std::fabs(v - lam);
    return acc * 2.0 * pi / static_cast<double>(n_grid);
  };
  const double m_lambda = kt.coeff_sum();
  double best_scan = 1e300, lam_scan = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double lam = -m_lambda + 2.0 * m_lambda * i / 10000.0;
    const double v = objective(lam);
    if (v < best_scan) {
      best_scan = v;
      lam_scan = lam;
    }
  }
  CHECK(objective(bc.lambda_star) <= best_scan + 1e-8 * best_scan);
  CHECK(std::fabs(bc.lambda_star - lam_scan) <= 2.0 * (2.0 * m_lambda / 10000.0));
}

TEST_CASE("empirical class member stays under the upper bound and approaches the lower") {
  const KernelParams p{1.0, 0.5, 0.0};
  const std::uint64_t n = 16;
  const NormOrder s2 = NormOrder::finite(2.0);
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-7;

  KernelTail kt(p, n);
  const ScaledValue ub = upper_bound(kt, s2, cfg);
  const LowerBoundResult lb = lower_bound(kt, s2, cfg);

  double prev = 0.0;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const ScaledValue emp =
        empirical_class_lower_bound(p, n, s2, eps, 0.0, lb.h_star, cfg);
    CHECK(emp.value <= ub.value + 1e-8);
    CHECK(emp.value >= prev * (1.0 - 1e-9));
    if (eps == 1e-3)
      CHECK(emp.value == Catch::Approx(lb.value.value).epsilon(0.01));
    prev = emp.value;
  }
  CHECK(prev <= lb.value.value * (1.0 + 1e-6));

  // phi vanishes identically when the two bump centers coincide
  const ScaledValue zero =
      empirical_class_lower_bound(p, n, s2, 1e-3, 0.5, 0.5, cfg);
  CHECK(zero.value == 0.0);
  CHECK_THROWS_AS(empirical_class_lower_bound(p, n, s2, 0.0, 0.0, 1.0, cfg),
                  std::domain_error);
}

TEST_CASE("sandwich ordering on random small cases") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> ua(0.4, 2.5), ur(0.35, 0.8), ubta(0.0, 4.0);
  std::uniform_int_distribution<int> un(2, 48), us(0, 4);
  const double s_choices[4] = {1.0, 1.5, 2.0, 4.0};
  for (int i = 0; i < 10; ++i) {
    const KernelParams p{ua(rng), ur(rng), ubta(rng)};
    const std::uint64_t n = static_cast<std::uint64_t>(un(rng));
    const int si = us(rng);
    const NormOrder s = si == 4 ? NormOrder::infinity() : NormOrder::finite(s_choices[si]);
    const SandwichBounds sb = sandwich(p, n, s);
    INFO("alpha=" << p.alpha << " r=" << p.r << " beta=" << p.beta << " n=" << n
                  << " s=" << s.str());
    CHECK(sb.lower <= sb.upper * (1.0 + 1e-9));
    CHECK(sb.best_constant <= sb.upper * (1.0 + 1e-9));
  }
}
