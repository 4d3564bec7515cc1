#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/catalog.hpp"
#include "finsler/riemann.hpp"

using namespace finsler;

namespace {

// Closed form for a_ij = delta_ij / W^2 with W = 1 + (mu/4)|x|^2:
// Gamma^k_ij = -(delta_ki f_j + delta_kj f_i - delta_ij f_k), f = log W.
std::vector<double> space_form_dlogW(double mu, const std::vector<double>& x) {
  double xs = 0.0;
  for (double v : x) xs += v * v;
  const double W = 1.0 + 0.25 * mu * xs;
  std::vector<double> f;
  for (double v : x) f.push_back(0.5 * mu * v / W);
  return f;
}

}  // namespace

TEST_CASE("christoffel vanishes on the flat metric") {
  auto m = euclidean_metric(3);
  auto g = christoffel(m, {0.1, -0.2, 0.3});
  for (auto& a : g)
    for (auto& b : a)
      for (double v : b) CHECK(v == 0.0);
}

TEST_CASE("christoffel matches the conformal closed form on the space form") {
  const double mu = 1.0;
  auto m = space_form_metric(3, Frac(1));
  const std::vector<double> x = {0.15, -0.1, 0.2};
  auto g = christoffel(m, x);
  auto f = space_form_dlogW(mu, x);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double expect = -((k == i ? f[static_cast<std::size_t>(j)] : 0.0) +
                                (k == j ? f[static_cast<std::size_t>(i)] : 0.0) -
                                (i == j ? f[static_cast<std::size_t>(k)] : 0.0));
        CHECK(g[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
              doctest::Approx(expect).epsilon(1e-12));
      }
}

TEST_CASE("christoffel is symmetric and metric-compatible on a generic metric") {
  auto m = perturbed_metric(3, 101, Frac(1, 10));
  const std::vector<double> x = {0.12, -0.22, 0.07};
  auto fr = jet_frame(m, OneFormField::zero(3), coordinate_jets(x, 2), 0);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < i; ++j)
        CHECK(value_of(fr.gamma[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) ==
              doctest::Approx(value_of(fr.gamma[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]))
                  .epsilon(1e-14));
  // nabla a = 0: d_k a_ij = Gamma^l_ik a_lj + Gamma^l_jk a_il
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = value_of(fr.da[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        for (int l = 0; l < 3; ++l)
          v -= value_of(fr.gamma[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) *
                   value_of(fr.a[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]) +
               value_of(fr.gamma[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]) *
                   value_of(fr.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)]);
        CHECK(std::fabs(v) < 1e-13);
      }
}

TEST_CASE("covariant derivative of b matches a finite-difference oracle") {
  auto m = perturbed_metric(3, 101, Frac(1, 10));
  auto f = perturbed_oneform(3, 202, Frac(1, 20));
  const std::vector<double> x = {0.05, 0.18, -0.14};
  auto inv = beta_invariants(m, f, x);
  auto g = christoffel(m, x);
  const double h = 1e-5;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      std::vector<double> xp = x, xm = x;
      xp[static_cast<std::size_t>(j)] += h;
      xm[static_cast<std::size_t>(j)] -= h;
      double fd = (f.values(xp)[static_cast<std::size_t>(i)] - f.values(xm)[static_cast<std::size_t>(i)]) / (2 * h);
      for (int k = 0; k < 3; ++k)
        fd -= inv.b[static_cast<std::size_t>(k)] *
              g[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      CHECK(inv.nabla_b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
            doctest::Approx(fd).epsilon(1e-6));
      // split consistency
      CHECK(inv.r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                inv.s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
            doctest::Approx(inv.nabla_b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]).epsilon(1e-13));
    }
}

TEST_CASE("curvature of the space form is constant sectional curvature") {
  const double mu = 1.0;
  auto m = space_form_metric(3, Frac(1));
  const std::vector<double> x = {0.2, 0.1, -0.15};
  auto hd = horizontal_derivatives(m, OneFormField::zero(3), x);
  auto a = m.values(x);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double expect = mu * ((i == k ? a[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] : 0.0) -
                                      (i == l ? a[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] : 0.0));
          CHECK(hd.curv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] ==
                doctest::Approx(expect).epsilon(1e-10));
        }
}

TEST_CASE("curvature tensor symmetries on a generic metric") {
  auto m = perturbed_metric(3, 44, Frac(1, 10));
  const std::vector<double> x = {-0.08, 0.21, 0.13};
  auto hd = horizontal_derivatives(m, OneFormField::zero(3), x);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          CHECK(hd.curv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] ==
                doctest::Approx(-hd.curv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(l)][static_cast<std::size_t>(k)])
                    .epsilon(1e-12));
          const double bianchi =
              hd.curv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] +
              hd.curv[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)][static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] +
              hd.curv[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
          CHECK(std::fabs(bianchi) < 1e-12);
        }
}

TEST_CASE("horizontal derivatives match a finite-difference oracle") {
  auto m = perturbed_metric(3, 101, Frac(1, 10));
  auto f = perturbed_oneform(3, 202, Frac(1, 20));
  const std::vector<double> x = {0.1, -0.05, 0.2};
  auto hd = horizontal_derivatives(m, f, x);
  auto g = christoffel(m, x);
  const double h = 1e-5;
  auto r_at = [&](const std::vector<double>& p) { return beta_invariants(m, f, p).r; };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        std::vector<double> xp = x, xm = x;
        xp[static_cast<std::size_t>(k)] += h;
        xm[static_cast<std::size_t>(k)] -= h;
        double fd = (r_at(xp)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                     r_at(xm)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) /
                    (2 * h);
        auto r0 = beta_invariants(m, f, x).r;
        for (int l = 0; l < 3; ++l)
          fd -= g[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                    r0[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] +
                g[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
                    r0[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
        CHECK(hd.r_cov[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] ==
              doctest::Approx(fd).epsilon(2e-6));
      }
}

TEST_CASE("killing classifier identifies the catalog families") {
  SUBCASE("constant form on the flat metric is parallel") {
    auto rep = killing_classifier(euclidean_metric(3), constant_oneform(3, {Frac(1, 5), Frac(0), Frac(0)}));
    CHECK(rep.parallel);
    CHECK(rep.killing);
    CHECK(rep.closed);
    CHECK(rep.constant_length);
  }
  SUBCASE("antisymmetric linear form on the flat metric is Killing but not constant length") {
    auto f = linear_oneform(3, {{Frac(0), Frac(1, 2), Frac(0)},
                                {Frac(-1, 2), Frac(0), Frac(0)},
                                {Frac(0), Frac(0), Frac(0)}});
    auto rep = killing_classifier(euclidean_metric(3), f);
    CHECK(rep.killing);
    CHECK_FALSE(rep.parallel);
    CHECK_FALSE(rep.closed);
    CHECK_FALSE(rep.constant_length);
  }
  SUBCASE("symmetric linear form is closed but not Killing") {
    auto f = linear_oneform(3, {{Frac(1, 2), Frac(0), Frac(0)},
                                {Frac(0), Frac(0), Frac(0)},
                                {Frac(0), Frac(0), Frac(0)}});
    auto rep = killing_classifier(euclidean_metric(3), f);
    CHECK(rep.closed);
    CHECK_FALSE(rep.killing);
  }
  SUBCASE("the Hopf form is Killing of constant length but neither parallel nor closed") {
    auto rep = killing_classifier(space_form_metric(3, Frac(4)), hopf_oneform(Frac(1, 2)));
    CHECK(rep.killing);
    CHECK(rep.constant_length);
    CHECK_FALSE(rep.parallel);
    CHECK_FALSE(rep.closed);
    CHECK(rep.max_r < 1e-12);
    CHECK(rep.max_dlen < 1e-12);
  }
}

TEST_CASE("alpha spray matches the conformal geodesic closed form") {
  auto m = space_form_metric(3, Frac(1));
  const std::vector<double> x = {0.1, 0.2, -0.1};
  const std::vector<double> y = {0.5, -0.3, 0.8};
  auto G = alpha_spray(m, x, y);
  auto f = space_form_dlogW(1.0, x);
  double fy = 0.0, yy = 0.0;
  for (int i = 0; i < 3; ++i) {
    fy += f[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    yy += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < 3; ++i)
    CHECK(G[static_cast<std::size_t>(i)] ==
          doctest::Approx(-fy * y[static_cast<std::size_t>(i)] + 0.5 * yy * f[static_cast<std::size_t>(i)])
              .epsilon(1e-12));
}
