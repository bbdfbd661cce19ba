#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "tpa/dist.hpp"
#include "tpa/error.hpp"

using namespace tpa;

namespace {

IntegerPmf random_pmf(Rng& rng, long max_offset = 10, std::size_t max_size = 12) {
  std::uniform_int_distribution<long> off(-max_offset, max_offset);
  std::uniform_int_distribution<std::size_t> len(1, max_size);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(len(rng));
  for (double& x : p) x = u(rng);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  double check = std::accumulate(p.begin(), p.end(), 0.0);
  p.back() += 1.0 - check;
  if (p.back() < 0.0) p.back() = 0.0;
  return IntegerPmf(off(rng), p);
}

}  // namespace

TEST_CASE("make_tp shift and fractional part") {
  const TpParams a = make_tp(5.3, 4.1);
  CHECK(a.shift == 1);
  CHECK(a.gamma == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(a.poisson_rate() == doctest::Approx(4.3).epsilon(1e-12));

  const TpParams b = make_tp(4.0, 4.0);
  CHECK(b.shift == 0);
  CHECK(b.gamma == 0.0);

  const TpParams c = make_tp(0.0, 2.5);
  CHECK(c.shift == -3);
  CHECK(c.gamma == doctest::Approx(0.5));

  CHECK_THROWS_AS(make_tp(1.0, 0.0), Error);
  CHECK_THROWS_AS(make_tp(1.0, -1.0), Error);
  CHECK_THROWS_AS(make_tp(NAN, 1.0), Error);
}

TEST_CASE("tp_pmf against high-precision values") {
  CHECK(tp_pmf(make_tp(4, 4), 4) == doctest::Approx(0.1953668148131645898).epsilon(1e-14));
  CHECK(tp_pmf(make_tp(50, 25), 25) == doctest::Approx(1.3887943864964020595e-11).epsilon(1e-13));
  CHECK(tp_pmf(make_tp(5.3, 4.1), 0) == 0.0);
  CHECK(tp_pmf(make_tp(5.3, 4.1), 1) > 0.0);
}

TEST_CASE("TP(mu, mu) is Poisson(mu)") {
  for (double mu : {1.0, 4.0, 25.0}) {
    const TpParams p = make_tp(mu, mu);
    for (long k = 0; k < 80; ++k) CHECK(std::abs(tp_pmf(p, k) - poisson_pmf(mu, k)) <= 1e-15);
  }
}

TEST_CASE("Poisson tails complement the pmf") {
  for (double rate : {0.3, 2.0, 17.5, 300.0}) {
    for (long k : {0L, 1L, 5L, 20L, 310L}) {
      const double total = poisson_lower_tail(rate, k) + poisson_pmf(rate, k) + poisson_upper_tail(rate, k);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  CHECK(poisson_lower_tail(3.0, 0) == 0.0);
  CHECK_THROWS_AS(poisson_pmf(0.0, 1), Error);
}

TEST_CASE("tp_window") {
  const TpParams p = make_tp(50, 25);
  const IntegerPmf w = tp_window(p);
  CHECK(w.offset() <= 50);
  CHECK(w.last() >= 50);
  CHECK(w.tail_mass() <= 1e-12);
  CHECK(w.window_mass() + w.tail_mass() == doctest::Approx(1.0).epsilon(1e-12));
  for (long k = w.offset(); k <= w.last(); ++k) CHECK(std::abs(w(k) - tp_pmf(p, k)) <= 1e-15);

  const IntegerPmf loose = tp_window(make_tp(4, 4), 1.0);
  CHECK(loose.tail_mass() <= 1.0);
  CHECK_THROWS_AS(tp_window(p, 0.0), Error);
  CHECK_THROWS_AS(tp_window(p, 1.5), Error);
}

TEST_CASE("tp_sample respects the shift, mean and seed") {
  Rng rng = make_rng(11);
  const TpParams shifted = make_tp(5.3, 4.1);
  for (int i = 0; i < 10000; ++i) CHECK(tp_sample(shifted, rng) >= 1);

  Rng r1 = make_rng(3);
  const TpParams p = make_tp(4, 4);
  double sum = 0.0;
  const int draws = 1'000'000;
  for (int i = 0; i < draws; ++i) sum += static_cast<double>(tp_sample(p, r1));
  CHECK(std::abs(sum / draws - 4.0) < 0.02);

  Rng a = make_rng(99), b = make_rng(99);
  for (int i = 0; i < 100; ++i) CHECK(tp_sample(p, a) == tp_sample(p, b));
}

TEST_CASE("IntegerPmf validation") {
  CHECK_THROWS_AS(IntegerPmf(0, {0.5, 0.4}), Error);
  CHECK_THROWS_AS(IntegerPmf(0, {1.2, -0.2}), Error);
  CHECK_THROWS_AS(IntegerPmf(0, {0.5}, 0.6), Error);
  const IntegerPmf pm = IntegerPmf::point_mass(7);
  CHECK(pm(7) == 1.0);
  CHECK(pm(6) == 0.0);
  CHECK(pm.is_exact());
}

TEST_CASE("distance examples") {
  const IntegerPmf b(0, {0.25, 0.5, 0.25});
  const IntegerPmf shifted(1, {0.25, 0.5, 0.25});
  CHECK(d_tv(b, b).value == 0.0);
  CHECK(d_tv(IntegerPmf::point_mass(0), IntegerPmf::point_mass(1)).value == 1.0);
  CHECK(d_tv(b, shifted).value == doctest::Approx(0.5));
  CHECK(d_tv(b, shifted).bracket == 0.0);
  CHECK(d_loc(b, shifted).value == doctest::Approx(0.25));
}

TEST_CASE("binomial(100, 1/2) against TP(50, 25)") {
  const IntegerPmf bin = binomial_pmf(100, 0.5);
  const IntegerPmf tp = tp_window(make_tp(50, 25));
  const Distance tv = d_tv(bin, tp);
  const Distance loc = d_loc(bin, tp);
  CHECK(tv.lower() <= 0.025225800208106146571 + 1e-14);
  CHECK(tv.value >= 0.025225800208106146571 - 1e-14);
  CHECK(tv.value == doctest::Approx(0.025225800208106146571).epsilon(1e-10));
  CHECK(loc.value == doctest::Approx(0.0038481121079063142687).epsilon(1e-10));
  CHECK(tv.bracket <= 1e-12);
}

TEST_CASE("moments") {
  const Moments pm = moments(IntegerPmf::point_mass(7));
  CHECK(pm.mean == 7.0);
  CHECK(pm.variance == 0.0);
  CHECK(pm.q_max == 1.0);

  const Moments b = moments(IntegerPmf(0, {0.25, 0.5, 0.25}));
  CHECK(b.mean == doctest::Approx(1.0));
  CHECK(b.variance == doctest::Approx(0.5));
  CHECK(b.q_max == 0.5);
  CHECK(b.abs_central_3 == doctest::Approx(0.5));

  CHECK(moments(IntegerPmf(0, {0.25, 0.75})).variance == doctest::Approx(3.0 / 16.0));

  try {
    moments(tp_window(make_tp(4, 4)));
    FAIL("expected unsupported_input");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported_input);
  }
}

TEST_CASE("Poisson-binomial pmf") {
  const IntegerPmf two = poisson_binomial_pmf(std::vector<double>{0.5, 0.5});
  CHECK(two(0) == doctest::Approx(0.25));
  CHECK(two(1) == doctest::Approx(0.5));
  CHECK(two(2) == doctest::Approx(0.25));
  const std::vector<double> p{0.2, 0.7, 0.4};
  const Moments m = moments(poisson_binomial_pmf(p));
  CHECK(m.mean == doctest::Approx(1.3));
  CHECK(m.variance == doctest::Approx(0.16 + 0.21 + 0.24));
  CHECK_THROWS_AS(poisson_binomial_pmf(std::vector<double>{1.5}), Error);
  CHECK_THROWS_AS(binomial_pmf(-1, 0.5), Error);
}

TEST_CASE("property: metric axioms on random laws") {
  Rng rng = make_rng(2024);
  for (int t = 0; t < 500; ++t) {
    const IntegerPmf p = random_pmf(rng), q = random_pmf(rng), r = random_pmf(rng);
    const double pq = d_tv(p, q).value;
    CHECK(pq >= 0.0);
    CHECK(pq <= 1.0 + 1e-15);
    CHECK(std::abs(pq - d_tv(q, p).value) <= 1e-15);
    CHECK(d_tv(p, r).value <= pq + d_tv(q, r).value + 1e-14);
    CHECK(d_loc(p, q).value <= pq + 1e-15);
    CHECK(d_loc(p, q).value <= 2.0 * pq + 1e-15);
    CHECK(d_tv(p, p).value == 0.0);
  }
}

TEST_CASE("property: TP mean and variance") {
  Rng rng = make_rng(5);
  std::uniform_real_distribution<double> mu(-20.0, 200.0), s2(0.2, 150.0);
  for (int t = 0; t < 200; ++t) {
    const double m = mu(rng), v = s2(rng);
    const TpParams p = make_tp(m, v);
    CHECK(p.gamma >= 0.0);
    CHECK(p.gamma < 1.0);
    const IntegerPmf w = tp_window(p);
    double mean = 0.0, var = 0.0;
    for (long k = w.offset(); k <= w.last(); ++k) mean += static_cast<double>(k) * w(k);
    for (long k = w.offset(); k <= w.last(); ++k) var += (static_cast<double>(k) - mean) * (static_cast<double>(k) - mean) * w(k);
    CHECK(mean == doctest::Approx(m).epsilon(1e-9).scale(1.0));
    CHECK(var == doctest::Approx(v + p.gamma).epsilon(1e-8));
  }
}
