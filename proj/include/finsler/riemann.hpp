#pragma once
// Levi-Civita data of the Riemannian base metric a_ij and first/second
// covariant derivatives of the 1-form b_i: Christoffel symbols, the
// symmetric/antisymmetric split r_ij / s_ij of b_{i|j}, their contractions
// with b, horizontal (covariant) derivatives, curvature of a, and a
// classifier for special 1-forms (parallel / Killing / closed / constant
// length).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "finsler/fields.hpp"
#include "finsler/jet.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

// Gauss-Jordan inverse over the jet ring; pivots on the largest constant term.
inline std::vector<std::vector<Jet>> invert_matrix(std::vector<std::vector<Jet>> m) {
  const int n = static_cast<int>(m.size());
  std::vector<std::vector<Jet>> inv(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      inv[static_cast<std::size_t>(i)].push_back(
          m[0][0] * 0.0 + (i == j ? 1.0 : 0.0));
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::fabs(value_of(m[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)]));
    for (int row = col + 1; row < n; ++row) {
      const double v = std::fabs(value_of(m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]));
      if (v > best) { best = v; piv = row; }
    }
    if (best == 0.0) throw std::domain_error("singular matrix in jet inversion");
    std::swap(m[static_cast<std::size_t>(col)], m[static_cast<std::size_t>(piv)]);
    std::swap(inv[static_cast<std::size_t>(col)], inv[static_cast<std::size_t>(piv)]);
    const Jet scale = m[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)].recip();
    for (int j = 0; j < n; ++j) {
      m[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] *= scale;
      inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] *= scale;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const Jet f = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
      if (value_of(f) == 0.0 && f.max_norm() == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        m[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] -=
            f * m[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
        inv[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] -=
            f * inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
      }
    }
  }
  return inv;
}

// All first-level alpha/beta data as jets about a base point. The coordinate
// jets xvars may live in a larger variable space (e.g. a combined (x, y)
// space); xbase gives the variable index of coordinate 0 for differentiation.
// Entries derived through one x-derivative (gamma, nabla_b, r, s, ...) carry
// one order less than xvars.
struct JetFrame {
  int n = 0;
  std::vector<std::vector<Jet>> a, ainv;                // order K
  std::vector<Jet> b, b_up;                             // order K
  Jet B;                                                // b^i b_i, order K
  std::vector<std::vector<std::vector<Jet>>> da;        // da[k][i][j] = d a_ij / d x^k, order K-1
  std::vector<std::vector<std::vector<Jet>>> gamma;     // gamma[k][i][j], order K-1
  std::vector<std::vector<Jet>> nabla_b;                // b_{i|j}, order K-1
  std::vector<std::vector<Jet>> r, s;                   // r_ij, s_ij, order K-1
  std::vector<std::vector<Jet>> r_mixed, s_mixed;       // r^i_j, s^i_j
  std::vector<Jet> r_form, s_form;                      // r_j = b^i r_ij, s_j = b^i s_ij
  std::vector<Jet> r_vec, s_vec;                        // r^j, s^j
};

inline JetFrame jet_frame(const MetricField& metric, const OneFormField& oneform,
                          const std::vector<Jet>& xvars, int xbase) {
  const int n = metric.n;
  if (oneform.n != n) throw std::invalid_argument("metric/1-form dimension mismatch");
  JetFrame fr;
  fr.n = n;
  auto idx = [](int i) { return static_cast<std::size_t>(i); };

  fr.a.resize(idx(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      fr.a[idx(i)].push_back(eval_expr(metric.comp[idx(i)][idx(j)], xvars));
  fr.ainv = invert_matrix(fr.a);
  for (int i = 0; i < n; ++i) fr.b.push_back(eval_expr(oneform.comp[idx(i)], xvars));
  for (int i = 0; i < n; ++i) {
    Jet v = fr.b[0] * 0.0;
    for (int j = 0; j < n; ++j) v += fr.ainv[idx(i)][idx(j)] * fr.b[idx(j)];
    fr.b_up.push_back(v);
  }
  fr.B = fr.b[0] * 0.0;
  for (int i = 0; i < n; ++i) fr.B += fr.b_up[idx(i)] * fr.b[idx(i)];

  // one x-derivative: drop to order K-1
  const int K1 = fr.a[0][0].K() - 1;
  if (K1 < 0) throw std::invalid_argument("jet_frame needs order >= 1 coordinates");
  fr.da.resize(idx(n));
  for (int k = 0; k < n; ++k) {
    fr.da[idx(k)].resize(idx(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        fr.da[idx(k)][idx(i)].push_back(fr.a[idx(i)][idx(j)].derive(xbase + k));
  }
  auto ainv1 = fr.ainv;
  for (auto& row : ainv1)
    for (auto& e : row) e = e.truncate(K1);
  fr.gamma.resize(idx(n));
  for (int k = 0; k < n; ++k) {
    fr.gamma[idx(k)].resize(idx(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Jet sum = ainv1[0][0] * 0.0;
        for (int l = 0; l < n; ++l)
          sum += ainv1[idx(k)][idx(l)] *
                 (fr.da[idx(i)][idx(l)][idx(j)] + fr.da[idx(j)][idx(l)][idx(i)] -
                  fr.da[idx(l)][idx(i)][idx(j)]);
        fr.gamma[idx(k)][idx(i)].push_back(sum * 0.5);
      }
  }
  std::vector<Jet> b1;
  for (int i = 0; i < n; ++i) b1.push_back(fr.b[idx(i)].truncate(K1));
  std::vector<Jet> bu1;
  for (int i = 0; i < n; ++i) bu1.push_back(fr.b_up[idx(i)].truncate(K1));

  fr.nabla_b.resize(idx(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet v = fr.b[idx(i)].derive(xbase + j);
      for (int k = 0; k < n; ++k) v -= b1[idx(k)] * fr.gamma[idx(k)][idx(i)][idx(j)];
      fr.nabla_b[idx(i)].push_back(v);
    }
  fr.r.resize(idx(n));
  fr.s.resize(idx(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      fr.r[idx(i)].push_back((fr.nabla_b[idx(i)][idx(j)] + fr.nabla_b[idx(j)][idx(i)]) * 0.5);
      fr.s[idx(i)].push_back((fr.nabla_b[idx(i)][idx(j)] - fr.nabla_b[idx(j)][idx(i)]) * 0.5);
    }
  fr.r_mixed.resize(idx(n));
  fr.s_mixed.resize(idx(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet rv = ainv1[0][0] * 0.0, sv = rv;
      for (int k = 0; k < n; ++k) {
        rv += ainv1[idx(i)][idx(k)] * fr.r[idx(k)][idx(j)];
        sv += ainv1[idx(i)][idx(k)] * fr.s[idx(k)][idx(j)];
      }
      fr.r_mixed[idx(i)].push_back(rv);
      fr.s_mixed[idx(i)].push_back(sv);
    }
  for (int j = 0; j < n; ++j) {
    Jet rf = ainv1[0][0] * 0.0, sf = rf;
    for (int i = 0; i < n; ++i) {
      rf += bu1[idx(i)] * fr.r[idx(i)][idx(j)];
      sf += bu1[idx(i)] * fr.s[idx(i)][idx(j)];
    }
    fr.r_form.push_back(rf);
    fr.s_form.push_back(sf);
  }
  for (int i = 0; i < n; ++i) {
    Jet rv = ainv1[0][0] * 0.0, sv = rv;
    for (int j = 0; j < n; ++j) {
      rv += ainv1[idx(i)][idx(j)] * fr.r_form[idx(j)];
      sv += ainv1[idx(i)][idx(j)] * fr.s_form[idx(j)];
    }
    fr.r_vec.push_back(rv);
    fr.s_vec.push_back(sv);
  }
  return fr;
}

inline std::vector<Jet> coordinate_jets(const std::vector<double>& x, int order) {
  std::vector<Jet> vars;
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) vars.push_back(Jet::variable(i, x[static_cast<std::size_t>(i)], n, order));
  return vars;
}

// --- value-level conveniences ------------------------------------------------

inline std::vector<std::vector<std::vector<double>>> christoffel(const MetricField& metric,
                                                                 const std::vector<double>& x) {
  auto fr = jet_frame(metric, OneFormField::zero(metric.n), coordinate_jets(x, 1), 0);
  const int n = metric.n;
  std::vector<std::vector<std::vector<double>>> g(
      static_cast<std::size_t>(n),
      std::vector<std::vector<double>>(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n))));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        g[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            value_of(fr.gamma[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  return g;
}

// Geodesic spray coefficients of the base metric: G^i = (1/2) Gamma^i_jk y^j y^k.
inline std::vector<double> alpha_spray(const MetricField& metric, const std::vector<double>& x,
                                       const std::vector<double>& y) {
  auto g = christoffel(metric, x);
  const int n = metric.n;
  std::vector<double> G(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        G[static_cast<std::size_t>(i)] += 0.5 *
                                          g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
                                          y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(k)];
  return G;
}

struct BetaInvariants {
  int n = 0;
  double B = 0.0;                                  // |b|^2
  std::vector<std::vector<double>> a, a_inv;       // a_ij, a^ij
  std::vector<double> b, b_up;                     // b_i, b^i
  std::vector<std::vector<double>> nabla_b;        // b_{i|j}
  std::vector<std::vector<double>> r, s;           // r_ij, s_ij
  std::vector<std::vector<double>> r_mixed, s_mixed;  // r^i_j, s^i_j
  std::vector<double> r_form, s_form;              // r_j, s_j
  std::vector<double> r_vec, s_vec;                // r^j, s^j
};

inline BetaInvariants beta_invariants(const MetricField& metric, const OneFormField& oneform,
                                      const std::vector<double>& x) {
  auto fr = jet_frame(metric, oneform, coordinate_jets(x, 1), 0);
  const int n = metric.n;
  BetaInvariants out;
  out.n = n;
  out.B = value_of(fr.B);
  auto idx = [](int i) { return static_cast<std::size_t>(i); };
  out.b.resize(idx(n));
  out.b_up.resize(idx(n));
  out.r_form.resize(idx(n));
  out.s_form.resize(idx(n));
  out.r_vec.resize(idx(n));
  out.s_vec.resize(idx(n));
  out.nabla_b.assign(idx(n), std::vector<double>(idx(n)));
  out.a = out.nabla_b;
  out.a_inv = out.nabla_b;
  out.r = out.nabla_b;
  out.s = out.nabla_b;
  out.r_mixed = out.nabla_b;
  out.s_mixed = out.nabla_b;
  for (int i = 0; i < n; ++i) {
    out.b[idx(i)] = value_of(fr.b[idx(i)]);
    out.b_up[idx(i)] = value_of(fr.b_up[idx(i)]);
    out.r_form[idx(i)] = value_of(fr.r_form[idx(i)]);
    out.s_form[idx(i)] = value_of(fr.s_form[idx(i)]);
    out.r_vec[idx(i)] = value_of(fr.r_vec[idx(i)]);
    out.s_vec[idx(i)] = value_of(fr.s_vec[idx(i)]);
    for (int j = 0; j < n; ++j) {
      out.a[idx(i)][idx(j)] = value_of(fr.a[idx(i)][idx(j)]);
      out.a_inv[idx(i)][idx(j)] = value_of(fr.ainv[idx(i)][idx(j)]);
      out.nabla_b[idx(i)][idx(j)] = value_of(fr.nabla_b[idx(i)][idx(j)]);
      out.r[idx(i)][idx(j)] = value_of(fr.r[idx(i)][idx(j)]);
      out.s[idx(i)][idx(j)] = value_of(fr.s[idx(i)][idx(j)]);
      out.r_mixed[idx(i)][idx(j)] = value_of(fr.r_mixed[idx(i)][idx(j)]);
      out.s_mixed[idx(i)][idx(j)] = value_of(fr.s_mixed[idx(i)][idx(j)]);
    }
  }
  return out;
}

// Covariant derivatives of the beta-data and the curvature tensor of a,
// all as values at the base point.
struct HorizontalDerivatives {
  int n = 0;
  std::vector<std::vector<std::vector<double>>> r_cov;       // r_{ij|k}
  std::vector<std::vector<std::vector<double>>> s_cov;       // s_{ij|k}
  std::vector<std::vector<std::vector<double>>> s_mixed_cov; // s^i_{j|k}
  std::vector<std::vector<double>> r_form_cov;               // r_{j|k}
  std::vector<std::vector<double>> s_form_cov;               // s_{j|k}
  std::vector<std::vector<std::vector<std::vector<double>>>> curv;  // R^i_{jkl}
};

inline HorizontalDerivatives horizontal_derivatives(const MetricField& metric,
                                                    const OneFormField& oneform,
                                                    const std::vector<double>& x) {
  auto fr = jet_frame(metric, oneform, coordinate_jets(x, 2), 0);
  const int n = metric.n;
  auto idx = [](int i) { return static_cast<std::size_t>(i); };
  auto gval = [&](int k, int i, int j) { return value_of(fr.gamma[idx(k)][idx(i)][idx(j)]); };

  HorizontalDerivatives out;
  out.n = n;
  auto cov2 = [&](const std::vector<std::vector<Jet>>& t) {
    // covariant derivative of a (0,2)-tensor given as order-1 jets
    std::vector<std::vector<std::vector<double>>> d(
        idx(n), std::vector<std::vector<double>>(idx(n), std::vector<double>(idx(n))));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = value_of(t[idx(i)][idx(j)].derive(k));
          for (int l = 0; l < n; ++l)
            v -= gval(l, i, k) * value_of(t[idx(l)][idx(j)]) +
                 gval(l, j, k) * value_of(t[idx(i)][idx(l)]);
          d[idx(i)][idx(j)][idx(k)] = v;
        }
    return d;
  };
  out.r_cov = cov2(fr.r);
  out.s_cov = cov2(fr.s);
  // mixed (1,1)-tensor s^i_j
  out.s_mixed_cov.assign(idx(n), std::vector<std::vector<double>>(idx(n), std::vector<double>(idx(n))));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = value_of(fr.s_mixed[idx(i)][idx(j)].derive(k));
        for (int l = 0; l < n; ++l)
          v += gval(i, l, k) * value_of(fr.s_mixed[idx(l)][idx(j)]) -
               gval(l, j, k) * value_of(fr.s_mixed[idx(i)][idx(l)]);
        out.s_mixed_cov[idx(i)][idx(j)][idx(k)] = v;
      }
  auto cov1 = [&](const std::vector<Jet>& t) {
    std::vector<std::vector<double>> d(idx(n), std::vector<double>(idx(n)));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = value_of(t[idx(j)].derive(k));
        for (int l = 0; l < n; ++l) v -= gval(l, j, k) * value_of(t[idx(l)]);
        d[idx(j)][idx(k)] = v;
      }
    return d;
  };
  out.r_form_cov = cov1(fr.r_form);
  out.s_form_cov = cov1(fr.s_form);

  // R^i_{jkl} = d_k Gamma^i_jl - d_l Gamma^i_jk + Gamma^i_km Gamma^m_jl - Gamma^i_lm Gamma^m_jk
  out.curv.assign(idx(n), std::vector<std::vector<std::vector<double>>>(
                              idx(n), std::vector<std::vector<double>>(idx(n), std::vector<double>(idx(n)))));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = value_of(fr.gamma[idx(i)][idx(j)][idx(l)].derive(k)) -
                     value_of(fr.gamma[idx(i)][idx(j)][idx(k)].derive(l));
          for (int m = 0; m < n; ++m)
            v += gval(i, k, m) * gval(m, j, l) - gval(i, l, m) * gval(m, j, k);
          out.curv[idx(i)][idx(j)][idx(k)][idx(l)] = v;
        }
  return out;
}

// --- special 1-form classifier ----------------------------------------------

struct KillingReport {
  bool parallel = false;        // b_{i|j} = 0
  bool killing = false;         // r_ij = 0
  bool closed = false;          // s_ij = 0
  bool constant_length = false; // r_j + s_j = 0  (d|b|^2 = 0)
  double max_nabla = 0.0;
  double max_r = 0.0;
  double max_s = 0.0;
  double max_dlen = 0.0;
};

inline KillingReport killing_classifier(const MetricField& metric, const OneFormField& oneform,
                                        int samples = 20, std::uint64_t seed = 42,
                                        double box = 0.3, double tol = 1e-9) {
  Sampler sampler(seed);
  KillingReport rep;
  for (int t = 0; t < samples; ++t) {
    auto x = sampler.box_point(metric.n, box);
    auto inv = beta_invariants(metric, oneform, x);
    for (int i = 0; i < metric.n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      rep.max_dlen = std::max(rep.max_dlen, std::fabs(inv.r_form[ii] + inv.s_form[ii]));
      for (int j = 0; j < metric.n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        rep.max_nabla = std::max(rep.max_nabla, std::fabs(inv.nabla_b[ii][jj]));
        rep.max_r = std::max(rep.max_r, std::fabs(inv.r[ii][jj]));
        rep.max_s = std::max(rep.max_s, std::fabs(inv.s[ii][jj]));
      }
    }
  }
  rep.parallel = rep.max_nabla < tol;
  rep.killing = rep.max_r < tol;
  rep.closed = rep.max_s < tol;
  rep.constant_length = rep.max_dlen < tol;
  return rep;
}

}  // namespace finsler
