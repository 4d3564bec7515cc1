#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "finsler/jet.hpp"

using finsler::Jet;
using finsler::MultiIndex;
using finsler::make_index;

TEST_CASE("seeded variable has identity Taylor data") {
  Jet x = Jet::variable(0, 3.0, 1, 2);
  CHECK(x.value() == 3.0);
  CHECK(x.coeff({1}) == 1.0);
  CHECK(x.coeff({2}) == 0.0);

  Jet y = Jet::variable(1, 0.0, 2, 1);
  CHECK(y.value() == 0.0);
  CHECK(y.coeff({0, 1}) == 1.0);
  CHECK(y.coeff({1, 0}) == 0.0);

  // derivative of a coordinate with respect to itself is 1 at any base value
  for (double v : {-2.0, 0.0, 17.5}) {
    Jet z = Jet::variable(2, v, 4, 3);
    CHECK(z.partial({0, 0, 1, 0}) == 1.0);
  }
  CHECK_THROWS(Jet::variable(3, 0.0, 2, 1));
}

TEST_CASE("products differentiate by Leibniz convolution") {
  Jet x = Jet::variable(0, 3.0, 1, 2);
  CHECK((x * x).partial({2}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK((x * x).value() == 9.0);

  Jet u = Jet::variable(0, 1.7, 2, 2);
  Jet v = Jet::variable(1, -0.4, 2, 2);
  CHECK((u * v).partial({1, 1}) == 1.0);

  // first-order Leibniz rule holds exactly as computed
  Jet a = 2.5 + u * u + 3.0 * v;
  Jet b = u * v - 0.25 * u;
  Jet ab = a * b;
  MultiIndex e0 = make_index({1, 0});
  CHECK(ab.partial(e0) == a.partial(e0) * b.value() + a.value() * b.partial(e0));
}

TEST_CASE("reciprocal jet reproduces 1/(1-s) derivatives") {
  Jet s = Jet::variable(0, 0.2, 1, 1);
  Jet f = 1.0 / (1.0 - s);
  CHECK(f.value() == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(f.partial({1}) == doctest::Approx(1.0 / 0.64).epsilon(1e-13));

  Jet zero = Jet::constant(0.0, 1, 1);
  CHECK_THROWS_AS((void)zero.recip(), std::domain_error);
}

TEST_CASE("square root, exp, log compositions") {
  Jet four = Jet::constant(4.0, 2, 3);
  CHECK(sqrt(four).value() == 2.0);
  CHECK(sqrt(four).coeff({1, 0}) == 0.0);

  Jet x = Jet::variable(0, 4.0, 1, 2);
  Jet r = sqrt(x);
  CHECK(r.value() == 2.0);
  CHECK(r.partial({1}) == doctest::Approx(0.25).epsilon(1e-14));

  // exp(log(a)) = a for positive jets, coefficient by coefficient
  Jet u = Jet::variable(0, 0.7, 2, 3);
  Jet w = Jet::variable(1, 1.3, 2, 3);
  Jet a = 2.0 + u * w + 0.3 * w * w * u;
  Jet round_trip = exp(log(a));
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; i + j <= 3; ++j)
      CHECK(round_trip.coeff({i, j}) == doctest::Approx(a.coeff({i, j})).epsilon(1e-12));

  CHECK_THROWS_AS((void)sqrt(Jet::constant(-1.0, 1, 1)), std::domain_error);
  CHECK_THROWS_AS((void)log(Jet::constant(0.0, 1, 1)), std::domain_error);
}

TEST_CASE("second derivative of sin(x^2) matches finite differences") {
  auto f = [](double t) { return std::sin(t * t); };
  const double x0 = 1.0, h = 1e-4;
  const double fd = (f(x0 + h) - 2.0 * f(x0) + f(x0 - h)) / (h * h);

  Jet x = Jet::variable(0, x0, 1, 2);
  const double jet_val = sin(x * x).partial({2});

  CHECK(jet_val == doctest::Approx(fd).epsilon(1e-5));
  // closed form d^2/dx^2 sin(x^2) = 2cos(x^2) - 4x^2 sin(x^2)
  CHECK(jet_val == doctest::Approx(2.0 * std::cos(1.0) - 4.0 * std::sin(1.0)).epsilon(1e-12));
}

TEST_CASE("polynomial inputs are differentiated exactly") {
  // p(u,v) = sum of monomials up to degree 6; compare order-<=5 partials
  // against analytically computed values.
  std::mt19937_64 rng(12345);
  auto rnd = [&] { return -10.0 + 20.0 * double(rng() >> 11) * 0x1.0p-53; };
  const int deg = 6;
  double coef[7][7] = {};
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j) coef[i][j] = rnd();

  const double u0 = 0.37, v0 = -0.81;
  Jet u = Jet::variable(0, u0, 2, 5);
  Jet v = Jet::variable(1, v0, 2, 5);
  Jet p = Jet::constant(0.0, 2, 5);
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j) p += coef[i][j] * u.pow_int(i) * v.pow_int(j);

  auto falling = [](int m, int k) {
    double f = 1.0;
    for (int t = 0; t < k; ++t) f *= (m - t);
    return f;
  };
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b) {
      double want = 0.0;
      for (int i = a; i <= deg; ++i)
        for (int j = b; i + j <= deg; ++j)
          want += coef[i][j] * falling(i, a) * falling(j, b) * std::pow(u0, i - a) * std::pow(v0, j - b);
      const double got = p.partial(make_index({a, b}));
      CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("derive is consistent with partial extraction") {
  Jet u = Jet::variable(0, 0.9, 3, 4);
  Jet w = Jet::variable(2, -1.1, 3, 4);
  Jet f = exp(0.3 * u * w) + u * u * w;
  Jet fu = f.derive(0);
  CHECK(fu.K() == 3);
  CHECK(fu.value() == doctest::Approx(f.partial({1, 0, 0})).epsilon(1e-14));
  CHECK(fu.partial({1, 0, 1}) == doctest::Approx(f.partial({2, 0, 1})).epsilon(1e-12));
}

TEST_CASE("division, powers, truncation") {
  Jet u = Jet::variable(0, 0.6, 2, 4);
  Jet v = Jet::variable(1, 2.0, 2, 4);
  Jet a = 1.0 + u * v;
  Jet b = 3.0 - u;
  Jet q = a / b;
  Jet back = q * b;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j)
      CHECK(back.coeff({i, j}) == doctest::Approx(a.coeff({i, j})).epsilon(1e-12));

  Jet inv2 = b.pow_int(-2);
  CHECK(inv2.value() == doctest::Approx(1.0 / (2.4 * 2.4)).epsilon(1e-13));
  CHECK(pow_rational(b, 3, 2).value() == doctest::Approx(std::pow(2.4, 1.5)).epsilon(1e-12));

  Jet t = a.truncate(2);
  CHECK(t.K() == 2);
  CHECK(t.coeff({1, 1}) == a.coeff({1, 1}));
}

TEST_CASE("operations are pure and deterministic") {
  Jet u = Jet::variable(0, 0.25, 2, 5);
  Jet v = Jet::variable(1, -0.5, 2, 5);
  Jet f1 = sqrt(2.0 + u * u + v * v) / (1.0 - 0.3 * u);
  Jet f2 = sqrt(2.0 + u * u + v * v) / (1.0 - 0.3 * u);
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; i + j <= 5; ++j) CHECK(f1.coeff({i, j}) == f2.coeff({i, j}));
}

TEST_CASE("shape mismatch is rejected") {
  Jet a = Jet::variable(0, 1.0, 2, 2);
  Jet b = Jet::variable(0, 1.0, 2, 3);
  CHECK_THROWS_AS((void)(a + b), std::invalid_argument);
  CHECK_THROWS(a.partial({3, 0}));
}
