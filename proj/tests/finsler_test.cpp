#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/catalog.hpp"
#include "finsler/finsler.hpp"

using namespace finsler;

namespace {

FinslerMetric riemannian(MetricField m) {
  const int n = m.n;
  return FinslerMetric{std::move(m), OneFormField::zero(n), PhiFunction::custom_expr("1")};
}

double max_abs(const std::vector<std::vector<double>>& m) {
  double v = 0.0;
  for (const auto& row : m)
    for (double e : row) v = std::max(v, std::fabs(e));
  return v;
}

}  // namespace

TEST_CASE("flat metric has zero spray and zero curvature") {
  auto fm = riemannian(euclidean_metric(3));
  auto rep = curvature_report(fm, {0.1, -0.2, 0.15}, {0.4, 0.3, -0.5});
  for (double g : rep.G) CHECK(std::fabs(g) < 1e-14);
  CHECK(max_abs(rep.R) < 1e-12);
  CHECK(max_abs(rep.W) < 1e-12);
}

TEST_CASE("energy-derived spray matches the Christoffel spray for a Riemannian metric") {
  auto m = perturbed_metric(3, 101, Frac(1, 10));
  auto fm = riemannian(m);
  const std::vector<double> x = {0.12, -0.07, 0.2};
  const std::vector<double> y = {0.6, -0.2, 0.4};
  auto G1 = spray_direct(fm, x, y);
  auto G2 = alpha_spray(m, x, y);
  for (int i = 0; i < 3; ++i)
    CHECK(G1[static_cast<std::size_t>(i)] ==
          doctest::Approx(G2[static_cast<std::size_t>(i)]).epsilon(1e-11));
}

TEST_CASE("energy-derived curvature matches the curvature tensor for a Riemannian metric") {
  auto m = perturbed_metric(3, 44, Frac(1, 10));
  auto fm = riemannian(m);
  const std::vector<double> x = {0.05, 0.18, -0.12};
  const std::vector<double> y = {0.3, 0.9, -0.2};
  auto rep = curvature_report(fm, x, y);
  auto hd = horizontal_derivatives(m, OneFormField::zero(3), x);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      double expect = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
          expect += hd.curv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] *
                    y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(l)];
      CHECK(rep.R[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] ==
            doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("space form has isotropic curvature, unit flag curvature, vanishing Weyl") {
  auto fm = riemannian(space_form_metric(3, Frac(1)));
  const std::vector<double> x = {0.2, -0.1, 0.05};
  const std::vector<double> y = {0.7, 0.1, -0.4};
  auto rep = curvature_report(fm, x, y);
  auto a = fm.metric.values(x);
  double alpha2 = 0.0;
  std::vector<double> ylow(3, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      alpha2 += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(i)] *
                y[static_cast<std::size_t>(j)];
      ylow[static_cast<std::size_t>(i)] += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                                           y[static_cast<std::size_t>(j)];
    }
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const double expect = (i == k ? alpha2 : 0.0) - y[static_cast<std::size_t>(i)] * ylow[static_cast<std::size_t>(k)];
      CHECK(rep.R[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] ==
            doctest::Approx(expect).epsilon(1e-10));
    }
  CHECK(rep.flag_curvature == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.flag_residual < 1e-10);
  CHECK(rep.weyl_norm < 1e-9);
}

TEST_CASE("spray is positively 2-homogeneous and curvature annihilates y") {
  FinslerMetric fm{space_form_metric(3, Frac(1)),
                   constant_oneform(3, {Frac(1, 5), Frac(0), Frac(0)}),
                   PhiFunction::matsumoto()};
  const std::vector<double> x = {0.1, 0.15, -0.2};
  const std::vector<double> y = {0.8, -0.3, 0.5};
  auto G = spray_direct(fm, x, y);
  const double lam = 1.7;
  std::vector<double> ys;
  for (double v : y) ys.push_back(lam * v);
  auto Gs = spray_direct(fm, x, ys);
  for (int i = 0; i < 3; ++i)
    CHECK(Gs[static_cast<std::size_t>(i)] ==
          doctest::Approx(lam * lam * G[static_cast<std::size_t>(i)]).epsilon(1e-8));
  auto rep = curvature_report(fm, x, y);
  CHECK(rep.ry_residual < 1e-8);
}

TEST_CASE("fundamental tensor: symmetry, Euler identity, finite differences") {
  FinslerMetric fm{perturbed_metric(3, 101, Frac(1, 10)),
                   perturbed_oneform(3, 202, Frac(1, 20)), PhiFunction::matsumoto()};
  const std::vector<double> x = {0.1, -0.12, 0.08};
  const std::vector<double> y = {0.9, 0.2, -0.35};
  auto g = fundamental_tensor(fm, x, y);
  Jet F2 = energy_jet(fm, x, y, 0);
  const double F2v = value_of(F2);
  double yy = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
            doctest::Approx(g[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]).epsilon(1e-12));
      yy += g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(i)] *
            y[static_cast<std::size_t>(j)];
    }
  CHECK(yy == doctest::Approx(F2v).epsilon(1e-11));
  // finite differences of F^2 in y
  auto F2_at = [&](const std::vector<double>& yy2) {
    return value_of(energy_jet(fm, x, yy2, 0));
  };
  const double h = 1e-5;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j) {
      std::vector<double> ypp = y, ypm = y, ymp = y, ymm = y;
      ypp[static_cast<std::size_t>(i)] += h; ypp[static_cast<std::size_t>(j)] += h;
      ypm[static_cast<std::size_t>(i)] += h; ypm[static_cast<std::size_t>(j)] -= h;
      ymp[static_cast<std::size_t>(i)] -= h; ymp[static_cast<std::size_t>(j)] += h;
      ymm[static_cast<std::size_t>(i)] -= h; ymm[static_cast<std::size_t>(j)] -= h;
      const double fd = (F2_at(ypp) - F2_at(ypm) - F2_at(ymp) + F2_at(ymm)) / (4 * h * h);
      CHECK(g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
            doctest::Approx(0.5 * fd).epsilon(2e-5));
    }
}

TEST_CASE("Randers fundamental tensor matches its closed form") {
  FinslerMetric fm{space_form_metric(3, Frac(1)),
                   constant_oneform(3, {Frac(1, 4), Frac(0), Frac(0)}),
                   PhiFunction::randers()};
  const std::vector<double> x = {0.1, 0.05, -0.1};
  const std::vector<double> y = {0.6, -0.2, 0.7};
  auto g = fundamental_tensor(fm, x, y);
  auto a = fm.metric.values(x);
  auto b = fm.oneform.values(x);
  double a2 = 0.0, beta = 0.0;
  std::vector<double> yl(3, 0.0);
  for (int i = 0; i < 3; ++i) {
    beta += b[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    for (int j = 0; j < 3; ++j) {
      a2 += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(i)] *
            y[static_cast<std::size_t>(j)];
      yl[static_cast<std::size_t>(i)] += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                                         y[static_cast<std::size_t>(j)];
    }
  }
  const double alpha = std::sqrt(a2);
  const double F = alpha + beta;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double li = yl[static_cast<std::size_t>(i)] / alpha + b[static_cast<std::size_t>(i)];
      const double lj = yl[static_cast<std::size_t>(j)] / alpha + b[static_cast<std::size_t>(j)];
      const double expect = (F / alpha) * (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                           yl[static_cast<std::size_t>(i)] * yl[static_cast<std::size_t>(j)] / a2) +
                            li * lj;
      CHECK(g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
            doctest::Approx(expect).epsilon(1e-11));
    }
}

TEST_CASE("projective shift leaves the Weyl curvature invariant") {
  FinslerMetric fm{space_form_metric(3, Frac(1)),
                   constant_oneform(3, {Frac(1, 5), Frac(0), Frac(0)}),
                   PhiFunction::matsumoto()};
  const std::vector<double> x = {0.12, -0.06, 0.1};
  const std::vector<double> y = {0.5, 0.45, -0.6};
  auto G = spray_jets(fm, x, y, 3);
  auto base = projective_curvature(riemann_from_spray(G, y), y);

  Jet alpha = sqrt(alpha2_jet(fm.metric, x, y, 3));
  Jet beta = beta_jet(fm.oneform, x, y, 3);
  double scale = std::max(1.0, max_abs(base.R));
  for (const Jet& P : {alpha, beta, alpha + 2.0 * beta}) {
    auto shifted = projective_shift(G, P, y);
    auto proj = projective_curvature(riemann_from_spray(shifted, y), y);
    // R changes, W does not
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        CHECK(std::fabs(proj.W[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] -
                        base.W[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) /
                  scale <
              1e-9);
  }
}

TEST_CASE("scalar flag residual separates isotropic from generic metrics") {
  auto iso = riemannian(space_form_metric(3, Frac(1)));
  CHECK(scalar_flag_residual(iso, {0.1, 0.2, -0.1}, {0.5, -0.5, 0.6}) < 1e-10);
  FinslerMetric generic{perturbed_metric(3, 101, Frac(1, 10)),
                        perturbed_oneform(3, 202, Frac(1, 20)), PhiFunction::matsumoto()};
  CHECK(scalar_flag_residual(generic, {0.1, 0.2, -0.1}, {0.5, -0.5, 0.6}) > 1e-3);
}
