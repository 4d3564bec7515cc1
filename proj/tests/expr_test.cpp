#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "finsler/catalog.hpp"
#include "finsler/expr.hpp"
#include "finsler/fields.hpp"
#include "finsler/sampling.hpp"

using namespace finsler;

TEST_CASE("parse builds the expected tree for x1^2 + sin(x2)") {
  auto e = parse_expr("x1^2 + sin(x2)", 2);
  REQUIRE(e->kind == FieldExpr::Kind::add);
  CHECK(e->a->kind == FieldExpr::Kind::pow);
  CHECK(e->a->a->kind == FieldExpr::Kind::coordinate);
  CHECK(e->a->a->index == 0);
  CHECK(e->a->exponent == 2);
  CHECK(e->b->kind == FieldExpr::Kind::call);
  CHECK(e->b->fn == ExprFn::sin);
  CHECK(e->b->a->index == 1);
}

TEST_CASE("coordinate out of range is a parse error with a byte offset") {
  CHECK_THROWS_AS(parse_expr("x3", 2), ParseError);
  try {
    parse_expr("x1 + x3*2", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.offset == 5);
  }
  try {
    parse_expr("1 + ", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.offset == 4);
  }
  CHECK_THROWS_AS(parse_expr("foo(x1)", 2), ParseError);
  CHECK_THROWS_AS(parse_expr("sin x1", 2), ParseError);
  CHECK_THROWS_AS(parse_expr("x1 x2", 2), ParseError);
}

TEST_CASE("evaluation matches hand values") {
  auto e = parse_expr("1/(1 - x1)", 1);
  CHECK(eval_expr(e, std::vector<double>{0.5}) == doctest::Approx(2.0).epsilon(1e-15));

  auto p = parse_expr("x1*x2", 2);
  Jet j = eval_field(p, {2.0, 3.0}, 2);
  CHECK(j.coeff({0, 0}) == doctest::Approx(6.0));
  CHECK(j.partial({1, 1}) == doctest::Approx(1.0));
  CHECK(j.partial({1, 0}) == doctest::Approx(3.0));
  CHECK(j.partial({0, 1}) == doctest::Approx(2.0));

  auto q = parse_expr("sqrt(x1)", 1);
  Jet s = eval_field(q, {4.0}, 2);
  CHECK(s.coeff({0}) == doctest::Approx(2.0));
  CHECK(s.partial({1}) == doctest::Approx(0.25));

  auto r = parse_expr("-x1^2 + 2", 1);  // unary minus binds to the factor
  CHECK(eval_expr(r, std::vector<double>{3.0}) == doctest::Approx(-7.0));

  auto d = parse_expr("0.25 + 1/4", 1);
  CHECK(eval_expr(d, std::vector<double>{0.0}) == doctest::Approx(0.5).epsilon(1e-16));
}

TEST_CASE("print/parse round trip is structurally stable") {
  const char* cases[] = {
      "x1^2 + sin(x2)",
      "1/(1 - x1)",
      "(x1 + x2)*(x1 - x2)",
      "-x1*exp(x2) + 3/7",
      "sqrt(1 + x1^2)/(2 + cos(x2))",
      "1/(1 + 1/4*(x1^2 + x2^2))^2",
      "0.125*x1 - x2^3",
  };
  for (const char* text : cases) {
    CAPTURE(text);
    auto e1 = parse_expr(text, 2);
    std::string printed = print_expr(e1);
    auto e2 = parse_expr(printed, 2);
    CHECK(expr_equal(e1, e2));
    CHECK(print_expr(e2) == printed);
    // and the printed form evaluates identically
    std::mt19937_64 rng(99);
    for (int t = 0; t < 5; ++t) {
      std::vector<double> x = {0.1 + 0.05 * static_cast<double>(rng() % 7),
                               -0.2 + 0.05 * static_cast<double>(rng() % 7)};
      CHECK(eval_expr(e1, x) == doctest::Approx(eval_expr(e2, x)).epsilon(1e-15));
    }
  }
}

TEST_CASE("jet evaluation of fields matches central finite differences") {
  auto e = parse_expr("exp(x1*x2)/(2 + sin(x3)) + sqrt(1 + x1^2)", 3);
  const std::vector<double> x0 = {0.2, -0.1, 0.3};
  Jet j = eval_field(e, x0, 2);
  auto f = [&](const std::vector<double>& x) { return eval_expr(e, x); };
  const double h = 1e-5;
  for (int i = 0; i < 3; ++i) {
    std::vector<double> xp = x0, xm = x0;
    xp[static_cast<std::size_t>(i)] += h;
    xm[static_cast<std::size_t>(i)] -= h;
    const double fd = (f(xp) - f(xm)) / (2 * h);
    std::array<int, 3> m = {0, 0, 0};
    m[static_cast<std::size_t>(i)] = 1;
    CHECK(j.partial({m[0], m[1], m[2]}) == doctest::Approx(fd).epsilon(1e-5));
  }
  // one mixed second derivative
  auto fpp = [&](double h1, double h2) {
    std::vector<double> x = x0;
    x[0] += h1;
    x[1] += h2;
    return f(x);
  };
  const double fd12 = (fpp(h, h) - fpp(h, -h) - fpp(-h, h) + fpp(-h, -h)) / (4 * h * h);
  CHECK(j.partial({1, 1, 0}) == doctest::Approx(fd12).epsilon(1e-4));
}

TEST_CASE("catalog fields are well formed") {
  auto ents = catalog_entries();
  CHECK(ents.size() == 7);

  auto sf = space_form_metric(3, Frac(1));
  check_metric_symmetry(sf, {0.1, -0.2, 0.05});
  check_positive_definite(sf.values({0.1, -0.2, 0.05}));
  // diagonal value is 1/(1+|x|^2/4)^2
  const double xs = 0.01 + 0.04 + 0.0025;
  CHECK(sf.values({0.1, -0.2, 0.05})[0][0] ==
        doctest::Approx(1.0 / std::pow(1.0 + xs / 4.0, 2)).epsilon(1e-14));

  auto pm = perturbed_metric(3, 101, Frac(1, 10));
  check_metric_symmetry(pm, {0.25, 0.3, -0.3});
  check_positive_definite(pm.values({0.25, 0.3, -0.3}));

  // same seed, same field; different seed, different field
  auto pm2 = perturbed_metric(3, 101, Frac(1, 10));
  CHECK(pm.source == pm2.source);
  auto pm3 = perturbed_metric(3, 102, Frac(1, 10));
  CHECK(pm.source != pm3.source);

  auto hopf = hopf_oneform(Frac(1, 2));
  auto round = space_form_metric(3, Frac(4));
  // |b|^2 = lambda^2/4 = 1/16 at several points
  Sampler s(7);
  for (int t = 0; t < 10; ++t) {
    auto x = s.box_point(3, 0.3);
    auto a = round.values(x);
    auto b = hopf.values(x);
    // metric is conformal to the identity: a^ij = delta_ij / a00inv
    const double conf = a[0][0];
    double B = 0.0;
    for (int i = 0; i < 3; ++i) B += b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)] / conf;
    CHECK(B == doctest::Approx(1.0 / 16.0).epsilon(1e-13));
  }
}

TEST_CASE("sampler is deterministic and respects the domain margin") {
  auto metric = euclidean_metric(3);
  auto oneform = constant_oneform(3, {Frac(2, 5), Frac(0), Frac(0)});
  SampleOptions opt;
  opt.samples = 25;
  opt.seed = 42;
  auto s1 = draw_samples(metric, oneform, opt);
  auto s2 = draw_samples(metric, oneform, opt);
  REQUIRE(s1.size() == 25);
  for (std::size_t k = 0; k < s1.size(); ++k) {
    CHECK(s1[k].x == s2[k].x);
    CHECK(s1[k].y == s2[k].y);
    double norm2 = 0.0, beta = 0.0;
    for (int i = 0; i < 3; ++i) {
      norm2 += s1[k].y[static_cast<std::size_t>(i)] * s1[k].y[static_cast<std::size_t>(i)];
      CHECK(std::fabs(s1[k].x[static_cast<std::size_t>(i)]) <= 0.3);
    }
    beta = 0.4 * s1[k].y[0];
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(1.0 - beta > 0.05);  // alpha = 1 on the unit sphere
  }
}
