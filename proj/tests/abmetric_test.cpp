#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/abmetric.hpp"
#include "finsler/catalog.hpp"
#include "finsler/sampling.hpp"

using namespace finsler;

namespace {

void check_qtp_close(const QTP<double>& a, const QTP<double>& b, double tol) {
  CHECK(a.Q == doctest::Approx(b.Q).epsilon(tol));
  CHECK(a.Qs == doctest::Approx(b.Qs).epsilon(tol));
  CHECK(a.Qss == doctest::Approx(b.Qss).epsilon(tol));
  CHECK(a.Qsss == doctest::Approx(b.Qsss).epsilon(tol));
  CHECK(a.psi == doctest::Approx(b.psi).epsilon(tol));
  CHECK(a.psis == doctest::Approx(b.psis).epsilon(tol));
  CHECK(a.psiss == doctest::Approx(b.psiss).epsilon(tol));
  CHECK(a.psisss == doctest::Approx(b.psisss).epsilon(tol));
  CHECK(a.psiB == doctest::Approx(b.psiB).epsilon(tol));
  CHECK(a.psisB == doctest::Approx(b.psisB).epsilon(tol));
  CHECK(a.psissB == doctest::Approx(b.psissB).epsilon(tol));
  CHECK(a.Theta == doctest::Approx(b.Theta).epsilon(tol));
  CHECK(a.Thetas == doctest::Approx(b.Thetas).epsilon(tol));
  CHECK(a.v == doctest::Approx(b.v).epsilon(tol));
  CHECK(a.vs == doctest::Approx(b.vs).epsilon(tol));
  CHECK(a.vss == doctest::Approx(b.vss).epsilon(tol));
  CHECK(a.vB == doctest::Approx(b.vB).epsilon(tol));
  CHECK(a.vsB == doctest::Approx(b.vsB).epsilon(tol));
  CHECK(a.Delta == doctest::Approx(b.Delta).epsilon(tol));
}

}  // namespace

TEST_CASE("closed-form scaling invariants match jet differentiation of phi") {
  const double pts[][2] = {{0.1, 0.04}, {-0.15, 0.09}, {0.2, 0.16}, {0.0, 0.01}, {0.05, 0.2}};
  for (auto& p : pts) {
    CAPTURE(p[0]);
    CAPTURE(p[1]);
    check_qtp_close(qtp_matsumoto<double>(p[0], p[1]),
                    qtp_generic(PhiFunction::matsumoto(), p[0], p[1]), 1e-12);
    check_qtp_close(qtp_matsumoto<double>(p[0], p[1]),
                    qtp_generic(PhiFunction::custom_expr("1/(1 - x1)"), p[0], p[1]), 1e-12);
    check_qtp_close(qtp_randers<double>(p[0], p[1]),
                    qtp_generic(PhiFunction::randers(), p[0], p[1]), 1e-12);
  }
}

TEST_CASE("matsumoto convexity factor has its closed form") {
  for (double s : {-0.3, -0.1, 0.0, 0.12, 0.28}) {
    for (double B : {0.01, 0.09, 0.2}) {
      auto q = qtp_matsumoto<double>(s, B);
      const double expect = (1.0 - 3.0 * s + 2.0 * B) / std::pow(1.0 - s, 3);
      CHECK(q.Delta == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("strong convexity thresholds") {
  SUBCASE("matsumoto is a Finsler metric exactly for |b| < 1/2") {
    CHECK(strong_convexity_check(PhiFunction::matsumoto(), 0.04).ok);
    CHECK(strong_convexity_check(PhiFunction::matsumoto(), 0.2401).ok);  // b = 0.49
    auto bad = strong_convexity_check(PhiFunction::matsumoto(), 0.36);   // b = 0.6
    CHECK_FALSE(bad.ok);
    CHECK(bad.min_delta < 0.0);
    CHECK(bad.worst_s == doctest::Approx(0.6).epsilon(1e-2));
  }
  SUBCASE("randers is a Finsler metric exactly for |b| < 1") {
    CHECK(strong_convexity_check(PhiFunction::randers(), 0.81).ok);
    auto bad = strong_convexity_check(PhiFunction::randers(), 1.21);  // b = 1.1
    CHECK_FALSE(bad.ok);
    CHECK(bad.min_phi < 0.0);
  }
  SUBCASE("a custom quadratic scaling function passes for small b") {
    CHECK(strong_convexity_check(PhiFunction::custom_expr("1 + x1 + 1/2*x1^2"), 0.09).ok);
  }
}

TEST_CASE("closed-form spray equals the energy-derived spray") {
  const SampleOptions opt{20, 7, 0.3, 0.05};
  struct Case {
    FinslerMetric fm;
    const char* label;
  };
  std::vector<Case> cases;
  cases.push_back({{perturbed_metric(3, 101, Frac(1, 10)), perturbed_oneform(3, 202, Frac(1, 20)),
                    PhiFunction::matsumoto()},
                   "matsumoto generic"});
  cases.push_back({{space_form_metric(3, Frac(1)), constant_oneform(3, {Frac(1, 5), Frac(0), Frac(0)}),
                    PhiFunction::randers()},
                   "randers space form"});
  cases.push_back({{perturbed_metric(3, 55, Frac(1, 10)), perturbed_oneform(3, 66, Frac(1, 20)),
                    PhiFunction::custom_expr("1 + x1 + 1/2*x1^2")},
                   "custom quadratic"});
  for (auto& c : cases) {
    CAPTURE(c.label);
    auto samples = draw_samples(c.fm.metric, c.fm.oneform, opt);
    for (const auto& p : samples) {
      auto direct = spray_direct(c.fm, p.x, p.y);
      auto closed = spray_closed_form(c.fm, p.x, p.y);
      for (int i = 0; i < 3; ++i) {
        const double scale = std::max({1.0, std::fabs(direct[0]), std::fabs(direct[1]),
                                       std::fabs(direct[2])});
        CHECK(std::fabs(closed[static_cast<std::size_t>(i)] - direct[static_cast<std::size_t>(i)]) /
                  scale <
              1e-9);
      }
    }
  }
}

TEST_CASE("projective split reassembles the spray") {
  FinslerMetric fm{perturbed_metric(3, 101, Frac(1, 10)), perturbed_oneform(3, 202, Frac(1, 20)),
                   PhiFunction::matsumoto()};
  const std::vector<double> x = {0.08, -0.1, 0.15};
  const std::vector<double> y = {0.6, 0.5, -0.4};
  auto split = projective_split(fm, x, y);
  auto direct = spray_direct(fm, x, y);
  auto aG = alpha_spray(fm.metric, x, y);
  for (int i = 0; i < 3; ++i) {
    CHECK(split.alpha_part[static_cast<std::size_t>(i)] ==
          doctest::Approx(aG[static_cast<std::size_t>(i)]).epsilon(1e-11));
    const double reassembled = split.alpha_part[static_cast<std::size_t>(i)] +
                               split.transverse[static_cast<std::size_t>(i)] +
                               split.P * y[static_cast<std::size_t>(i)];
    CHECK(reassembled == doctest::Approx(direct[static_cast<std::size_t>(i)]).epsilon(1e-9));
  }
}

TEST_CASE("jet-level closed spray matches the energy-derived spray jets") {
  FinslerMetric fm{space_form_metric(3, Frac(1)), constant_oneform(3, {Frac(1, 5), Frac(0), Frac(0)}),
                   PhiFunction::matsumoto()};
  const std::vector<double> x = {0.1, -0.05, 0.12};
  const std::vector<double> y = {0.7, 0.2, -0.5};
  auto parts = spray_parts(fm, x, y, 3);
  auto direct = spray_jets(fm, x, y, 3);
  // values and first derivatives agree
  for (int i = 0; i < 3; ++i) {
    CHECK(value_of(parts.full[static_cast<std::size_t>(i)]) ==
          doctest::Approx(value_of(direct[static_cast<std::size_t>(i)])).epsilon(1e-9));
    for (int v = 0; v < 6; ++v) {
      const double a = value_of(parts.full[static_cast<std::size_t>(i)].derive(v));
      const double b = value_of(direct[static_cast<std::size_t>(i)].derive(v));
      CHECK(a == doctest::Approx(b).epsilon(1e-8));
    }
  }
  // the projective companion Gbar has the same Weyl curvature as the full spray
  auto w_full = projective_curvature(riemann_from_spray(parts.full, y), y);
  auto w_bar = projective_curvature(riemann_from_spray(parts.bar, y), y);
  double scale = 1.0;
  for (auto& row : w_full.R)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      CHECK(std::fabs(w_full.W[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] -
                      w_bar.W[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) /
                scale <
            1e-9);
}
