#include <doctest.h>

#include <cmath>
#include <random>

#include "tpa/error.hpp"
#include "tpa/models.hpp"

using namespace tpa;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::invalid_parameter;
}

// Every structural property an exact pair model must satisfy.
void check_pair(const PairModel& m) {
  CAPTURE(m.name);
  CHECK(verify_exchangeability(m) <= 1e-12);
  CHECK(support_violation(m) == 0.0);
  CHECK(marginal_discrepancy(m) <= 1e-12);
  CHECK(verify_regression(m) <= 1e-12);
  const D1Identity d = verify_d1_identity(m);
  CHECK(d.gap <= 1e-12);
  CHECK(d.exchange_gap <= 1e-12);
  double total = 0.0;
  for (long w = m.joint.offset(); w <= m.joint.last(); ++w) {
    for (long w2 = m.joint.offset(); w2 <= m.joint.last(); ++w2) total += m.joint(w, w2);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

}  // namespace

TEST_CASE("two fair coins") {
  const PairModel m = build_poisson_binomial({{0.5, 0.5}});
  CHECK(m.w_pmf(0) == doctest::Approx(0.25));
  CHECK(m.w_pmf(1) == doctest::Approx(0.5));
  CHECK(m.w_pmf(2) == doctest::Approx(0.25));
  CHECK(m.lambda == doctest::Approx(0.5));
  CHECK(m.s_at(0) == doctest::Approx(0.5));
  check_pair(m);
}

TEST_CASE("equal-p binomial Var S") {
  const PairModel m = build_poisson_binomial({std::vector<double>(10, 0.5)});
  CHECK(var_s(m) == doctest::Approx(0.00625).epsilon(1e-12));
  CHECK(verify_d1_identity(m).up_mass == doctest::Approx(0.25).epsilon(1e-12));
  for (double p : {0.1, 0.37, 0.9}) {
    for (long n : {1L, 4L, 30L}) {
      const PairModel b = build_poisson_binomial({std::vector<double>(static_cast<std::size_t>(n), p)});
      CHECK(var_s(b) == doctest::Approx(p * p * p * (1 - p) / static_cast<double>(n)).epsilon(1e-10));
    }
  }
}

TEST_CASE("Poisson-binomial regression with distinct p") {
  const PairModel m = build_poisson_binomial({{0.2, 0.7, 0.4}});
  CHECK(verify_regression(m) <= 1e-12);
  check_pair(m);
}

TEST_CASE("Poisson-binomial size limits") {
  CHECK(kind_of([] { build_poisson_binomial({std::vector<double>(201, 0.5)}); }) == ErrorKind::size_limit);
  ExactLimits wide;
  wide.joint = 300;
  CHECK_NOTHROW(build_poisson_binomial({std::vector<double>(201, 0.5)}, wide));
  CHECK(kind_of([] { build_poisson_binomial({{0.5, 1.2}}); }) == ErrorKind::invalid_parameter);
}

TEST_CASE("hypergeometric N=4, m=2, n=2") {
  const PairModel m = build_hypergeometric({4, 2, 2});
  CHECK(m.w_pmf(0) == doctest::Approx(1.0 / 6.0));
  CHECK(m.w_pmf(1) == doctest::Approx(4.0 / 6.0));
  CHECK(m.w_pmf(2) == doctest::Approx(1.0 / 6.0));
  CHECK(m.lambda == doctest::Approx(2.0 / 3.0));
  CHECK(m.s_at(0) == doctest::Approx(2.0 / 3.0));
  check_pair(m);
  REQUIRE(m.lipschitz_s);
  CHECK(var_s(m) <= lipschitz_variance_bound(*m.lipschitz_s, 2.0 / 6.0) + 1e-15);
  CHECK(kind_of([] { build_hypergeometric({4, 4, 2}); }) == ErrorKind::precondition);
}

TEST_CASE("hypergeometric N=20, m=10, n=10 Var S") {
  const PairModel m = build_hypergeometric({20, 10, 10});
  CHECK(var_s(m) == doctest::Approx(0.011146992163775609).epsilon(1e-12));
}

TEST_CASE("parity model") {
  const PairModel two = build_parity({2});
  CHECK(two.w_pmf(0) == doctest::Approx(0.25));
  CHECK(two.w_pmf(1) == doctest::Approx(0.75));
  // Top of the support: no up-step is possible.
  CHECK(two.s_at(1) == 0.0);
  CHECK(var_s(two) == doctest::Approx(3.0 / 16.0).epsilon(1e-12));
  check_pair(two);

  const PairModel ten = build_parity({10});
  double mean = 0.0, var = 0.0;
  for (long w = ten.w_pmf.offset(); w <= ten.w_pmf.last(); ++w) mean += static_cast<double>(w) * ten.w_pmf(w);
  for (long w = ten.w_pmf.offset(); w <= ten.w_pmf.last(); ++w) {
    var += (static_cast<double>(w) - mean) * (static_cast<double>(w) - mean) * ten.w_pmf(w);
  }
  CHECK(mean == doctest::Approx(11.0 / 4.0).epsilon(1e-14));
  CHECK(var == doctest::Approx(11.0 / 16.0).epsilon(1e-14));
  CHECK(var_s(ten) == doctest::Approx(21.0 / 880.0).epsilon(1e-12));
  CHECK(verify_d1_identity(ten).up_mass == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(kind_of([] { build_parity({1}); }) == ErrorKind::precondition);
  for (long n : {4L, 6L, 25L}) check_pair(build_parity({n}));
}

TEST_CASE("w-function identity") {
  for (const PairModel& m : {build_hypergeometric({6, 3, 3}), build_parity({6}), build_parity({11})}) {
    CAPTURE(m.name);
    CHECK(verify_w_function(m, m.w_pmf.offset() - 2, m.w_pmf.last() + 2) <= 1e-12);
  }
  CHECK(kind_of([] {
          PairModel m = build_parity({4});
          m.r_values.assign(m.r_values.size(), 0.1);
          verify_w_function(m, 0, 2);
        }) == ErrorKind::precondition);
}

TEST_CASE("hand-built asymmetric joint") {
  PairModel m;
  m.name = "asymmetric";
  m.w_pmf = IntegerPmf(0, {0.5, 0.5});
  m.joint = JointLaw(0, 2);
  m.joint.set(0, 0, 0.2);
  m.joint.set(0, 1, 0.3);
  m.joint.set(1, 0, 0.1);
  m.joint.set(1, 1, 0.4);
  CHECK(verify_exchangeability(m) == doctest::Approx(0.2));
}

TEST_CASE("point mass W") {
  const PairModel m = assemble_pair_model("point", std::monostate{}, IntegerPmf::point_mass(3), 0.7, {0.0}, {0.0},
                                          {0.0}, std::nullopt);
  CHECK(verify_exchangeability(m) == 0.0);
  CHECK(var_s(m) == 0.0);
  CHECK(verify_d1_identity(m).up_mass == 0.0);
}

TEST_CASE("Lipschitz variance bound") {
  CHECK(lipschitz_variance_bound(0.0, 123.0) == 0.0);
  const PairModel p = build_parity({10});
  const double l = (4.0 * 10 - 2.0) / (10.0 * 11.0);
  CHECK(var_s(p) <= lipschitz_variance_bound(l, 11.0 / 16.0));
}

TEST_CASE("property: random Poisson-binomial pairs") {
  Rng rng = make_rng(314);
  std::uniform_int_distribution<long> size(1, 80);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  for (int t = 0; t < 60; ++t) {
    std::vector<double> p(static_cast<std::size_t>(size(rng)));
    for (double& x : p) x = prob(rng);
    const PairModel m = build_poisson_binomial({p});
    check_pair(m);
    double var = 0.0, third = 0.0;
    for (double x : p) {
      var += x * (1 - x);
      third += x * x * x * (1 - x);
    }
    // Var S* from the per-coordinate construction dominates Var S = Var E[S*|W].
    CHECK(var_s(m) <= third / static_cast<double>(p.size() * p.size()) + 1e-15);
    const auto [lo, hi] = s_range(m);
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
  }
}

TEST_CASE("property: hypergeometric grid") {
  for (long N = 2; N <= 14; ++N) {
    for (long m = 1; m < N; ++m) {
      for (long n = 1; n <= N; ++n) check_pair(build_hypergeometric({N, m, n}));
    }
  }
}
