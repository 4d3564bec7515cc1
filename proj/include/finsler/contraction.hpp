#pragma once
// Assembled curvature contractions for (alpha, beta)-metrics.
//
// The quantities handled here are contractions of the curvature of the
// bar-spray (the spray with the projective factor removed) with the defining
// 1-form b: the vector (bar)R^i_j b^j, its trace, the vertical (flag-direction)
// derivative of the trace contracted with b, the specializations valid for
// Killing 1-forms of constant length, and the double contraction
// b_i W^i_j b^j of the projective Weyl-type tensor, which is the scalar
// obstruction to scalar flag curvature tested by the verification suites.
//
// All assembled closed forms are cross-checked against the direct
// jet-differentiation curvature pipeline.  Where the transcribed display of
// the vertical trace disagrees with the value the direct oracle requires, the
// discrepancy is reported as a structured term-level record (term, transcribed
// coefficient, computed coefficient) instead of being silently patched; the
// corrected assembly is what downstream consumers use.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "finsler/abmetric.hpp"
#include "finsler/finsler.hpp"
#include "finsler/riemann.hpp"

namespace finsler {

// --- pointwise data of the pair (alpha, beta) --------------------------------

// Scalar and vector data at a fixed base point, as jets in the flag direction
// y (order K >= 1 so vertical derivatives survive); quantities independent of
// y are plain doubles.  Naming: a trailing "0" marks a slot contracted with y,
// "b" a slot contracted with the 1-form, "_h" a horizontal (covariant)
// derivative slot, upper/lower index placement follows the definitions below.
struct DataScalars {
  int n = 0;
  double B = 0.0;             // |b|^2
  Jet a2;                     // a_ij y^i y^j
  Jet alpha;                  // sqrt(a2)
  Jet beta;                   // b_i y^i
  Jet s;                      // beta / alpha
  Jet r00;                    // r_ij y^i y^j
  Jet r0, s0;                 // r_j y^j, s_j y^j
  double r = 0.0;             // b^i r_i
  double rmm = 0.0;           // r^m_m
  Jet r00_h0;                 // r_{ij|k} y^i y^j y^k
  Jet s0_h0;                  // s_{i|j} y^i y^j
  Jet br00_hj;                // r_{ij|k} y^i y^j b^k
  Jet br_j0_h0;               // r_{ji|k} b^j y^i y^k
  Jet bs0_hj;                 // s_{i|j} y^i b^j
  Jet bs_j_h0;                // s_{j|k} b^j y^k
  Jet sk_r0k;                 // s^k r_{kj} y^j
  Jet rk_sk0;                 // r^k s_{kj} y^j
  Jet rk0_sk0;                // (r_{ki} y^i)(s^k_j y^j)
  Jet s0k_sk0;                // (s_{ik} y^i)(s^k_j y^j)
  Jet sk_sk0;                 // s_k s^k_j y^j
  double sk_sk = 0.0;         // s_k s^k
  double sk_rk = 0.0;         // s^k r_k
  double sbb = 0.0;           // s_{i|m} b^i b^m
  Jet r0m_rm0;                // (r_{im} y^i)(r^m_j y^j)
  Jet rm_rm0;                 // r_m r^m_j y^j
  double sim_smi = 0.0;       // s^i_m s^m_i
  Jet smk_0m;                 // s^m_{i|m} y^i
  double bsm_km = 0.0;        // s^m_{k|m} b^k
  Jet bbr_0km;                // r_{ik|m} y^i b^k b^m
  Jet bbr_mk0;                // r_{mk|i} b^m b^k y^i
  std::vector<Jet> bvec;      // b^i           (constant in y)
  std::vector<Jet> svecu;     // s^i           (constant in y)
  std::vector<Jet> rvecu;     // r^i           (constant in y)
  std::vector<Jet> s_i0;      // s^i_j y^j
  std::vector<Jet> r_i0;      // r^i_j y^j
  std::vector<Jet> siksk0;    // s^i_k s^k_j y^j
  std::vector<Jet> bs_i0_hj;  // s^i_{k|j} y^k b^j
  std::vector<Jet> bs_ij_h0;  // s^i_{j|k} b^j y^k
  std::vector<Jet> s_i0_h0;   // s^i_{k|j} y^k y^j
  std::vector<Jet> sik_sk;    // s^i_k s^k     (constant in y)
};

inline DataScalars data_scalars(const BetaInvariants& inv, const HorizontalDerivatives& hd,
                                const std::vector<double>& y, int K = 1) {
  const int n = inv.n;
  if (static_cast<int>(y.size()) != n) throw std::invalid_argument("data_scalars: y size mismatch");
  auto idx = [](int i) { return static_cast<std::size_t>(i); };

  DataScalars d;
  d.n = n;
  d.B = inv.B;

  std::vector<Jet> yj;
  for (int i = 0; i < n; ++i) yj.push_back(Jet::variable(i, y[idx(i)], n, K));
  const Jet zero = Jet::constant(0.0, n, K);

  d.a2 = zero;
  d.beta = zero;
  d.r00 = zero;
  d.r0 = zero;
  d.s0 = zero;
  for (int i = 0; i < n; ++i) {
    d.beta += inv.b[idx(i)] * yj[idx(i)];
    d.r0 += inv.r_form[idx(i)] * yj[idx(i)];
    d.s0 += inv.s_form[idx(i)] * yj[idx(i)];
    for (int j = 0; j < n; ++j) {
      d.a2 += inv.a[idx(i)][idx(j)] * yj[idx(i)] * yj[idx(j)];
      d.r00 += inv.r[idx(i)][idx(j)] * yj[idx(i)] * yj[idx(j)];
    }
  }
  d.alpha = sqrt(d.a2);
  d.s = d.beta / d.alpha;

  d.r = 0.0;
  d.rmm = 0.0;
  d.sk_sk = 0.0;
  d.sk_rk = 0.0;
  d.sim_smi = 0.0;
  for (int i = 0; i < n; ++i) {
    d.r += inv.b_up[idx(i)] * inv.r_form[idx(i)];
    d.rmm += inv.r_mixed[idx(i)][idx(i)];
    d.sk_sk += inv.s_form[idx(i)] * inv.s_vec[idx(i)];
    d.sk_rk += inv.s_vec[idx(i)] * inv.r_form[idx(i)];
    for (int m = 0; m < n; ++m)
      d.sim_smi += inv.s_mixed[idx(i)][idx(m)] * inv.s_mixed[idx(m)][idx(i)];
  }

  d.r00_h0 = zero;
  d.br00_hj = zero;
  d.br_j0_h0 = zero;
  d.bbr_0km = zero;
  d.bbr_mk0 = zero;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double rc = hd.r_cov[idx(i)][idx(j)][idx(k)];
        d.r00_h0 += rc * yj[idx(i)] * yj[idx(j)] * yj[idx(k)];
        d.br00_hj += rc * yj[idx(i)] * yj[idx(j)] * inv.b_up[idx(k)];
        d.br_j0_h0 += hd.r_cov[idx(j)][idx(i)][idx(k)] * inv.b_up[idx(j)] * yj[idx(i)] * yj[idx(k)];
        d.bbr_0km += rc * yj[idx(i)] * inv.b_up[idx(j)] * inv.b_up[idx(k)];
        d.bbr_mk0 += hd.r_cov[idx(i)][idx(j)][idx(k)] * inv.b_up[idx(i)] * inv.b_up[idx(j)] * yj[idx(k)];
      }

  d.s0_h0 = zero;
  d.bs0_hj = zero;
  d.bs_j_h0 = zero;
  d.sbb = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double sc = hd.s_form_cov[idx(i)][idx(j)];
      d.s0_h0 += sc * yj[idx(i)] * yj[idx(j)];
      d.bs0_hj += sc * yj[idx(i)] * inv.b_up[idx(j)];
      d.bs_j_h0 += sc * inv.b_up[idx(i)] * yj[idx(j)];
      d.sbb += sc * inv.b_up[idx(i)] * inv.b_up[idx(j)];
    }

  d.sk_r0k = zero;
  d.rk_sk0 = zero;
  d.rk0_sk0 = zero;
  d.s0k_sk0 = zero;
  d.sk_sk0 = zero;
  d.r0m_rm0 = zero;
  d.rm_rm0 = zero;
  for (int k = 0; k < n; ++k) {
    Jet r_k0 = zero;   // r_{kj} y^j
    Jet s_k0 = zero;   // s_{kj} y^j
    Jet smx_k0 = zero; // s^k_j y^j
    Jet rmx_k0 = zero; // r^k_j y^j
    Jet s_0k = zero;   // s_{ik} y^i
    Jet r_0k = zero;   // r_{ik} y^i
    for (int j = 0; j < n; ++j) {
      r_k0 += inv.r[idx(k)][idx(j)] * yj[idx(j)];
      s_k0 += inv.s[idx(k)][idx(j)] * yj[idx(j)];
      smx_k0 += inv.s_mixed[idx(k)][idx(j)] * yj[idx(j)];
      rmx_k0 += inv.r_mixed[idx(k)][idx(j)] * yj[idx(j)];
      s_0k += inv.s[idx(j)][idx(k)] * yj[idx(j)];
      r_0k += inv.r[idx(j)][idx(k)] * yj[idx(j)];
    }
    d.sk_r0k += inv.s_vec[idx(k)] * r_k0;
    d.rk_sk0 += inv.r_vec[idx(k)] * s_k0;
    d.rk0_sk0 += r_k0 * smx_k0;
    d.s0k_sk0 += s_0k * smx_k0;
    d.sk_sk0 += inv.s_form[idx(k)] * smx_k0;
    d.r0m_rm0 += r_0k * rmx_k0;
    d.rm_rm0 += inv.r_form[idx(k)] * rmx_k0;
  }

  d.smk_0m = zero;
  d.bsm_km = 0.0;
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i) {
      d.smk_0m += hd.s_mixed_cov[idx(m)][idx(i)][idx(m)] * yj[idx(i)];
      d.bsm_km += hd.s_mixed_cov[idx(m)][idx(i)][idx(m)] * inv.b_up[idx(i)];
    }

  for (int i = 0; i < n; ++i) {
    d.bvec.push_back(Jet::constant(inv.b_up[idx(i)], n, K));
    d.svecu.push_back(Jet::constant(inv.s_vec[idx(i)], n, K));
    d.rvecu.push_back(Jet::constant(inv.r_vec[idx(i)], n, K));
    Jet si0 = zero, ri0 = zero, sik0 = zero, bshj = zero, bsh0 = zero, sh0 = zero;
    double siksk = 0.0;
    for (int j = 0; j < n; ++j) {
      si0 += inv.s_mixed[idx(i)][idx(j)] * yj[idx(j)];
      ri0 += inv.r_mixed[idx(i)][idx(j)] * yj[idx(j)];
      siksk += inv.s_mixed[idx(i)][idx(j)] * inv.s_vec[idx(j)];
      for (int k = 0; k < n; ++k) {
        sik0 += inv.s_mixed[idx(i)][idx(j)] * inv.s_mixed[idx(j)][idx(k)] * yj[idx(k)];
        bshj += hd.s_mixed_cov[idx(i)][idx(j)][idx(k)] * yj[idx(j)] * inv.b_up[idx(k)];
        bsh0 += hd.s_mixed_cov[idx(i)][idx(j)][idx(k)] * inv.b_up[idx(j)] * yj[idx(k)];
        sh0 += hd.s_mixed_cov[idx(i)][idx(j)][idx(k)] * yj[idx(j)] * yj[idx(k)];
      }
    }
    d.s_i0.push_back(si0);
    d.r_i0.push_back(ri0);
    d.siksk0.push_back(sik0);
    d.bs_i0_hj.push_back(bshj);
    d.bs_ij_h0.push_back(bsh0);
    d.s_i0_h0.push_back(sh0);
    d.sik_sk.push_back(Jet::constant(siksk, n, K));
  }
  return d;
}

// --- curvature of alpha contracted with b, as flag-direction jets ------------

struct AlphaCurvature {
  std::vector<Jet> Rb;       // R^i_j b^j of alpha, R^i_j(y) = R^i_{kjl} y^k y^l
  Jet ric;                   // R^m_m(y)
  double ric_vert_b = 0.0;   // b^i d(R^m_m)/dy^i
};

inline AlphaCurvature alpha_curvature(const BetaInvariants& inv, const HorizontalDerivatives& hd,
                                      const std::vector<double>& y, int K = 1) {
  const int n = inv.n;
  auto idx = [](int i) { return static_cast<std::size_t>(i); };
  std::vector<Jet> yj;
  for (int i = 0; i < n; ++i) yj.push_back(Jet::variable(i, y[idx(i)], n, K));
  const Jet zero = Jet::constant(0.0, n, K);

  AlphaCurvature out;
  out.ric = zero;
  out.Rb.assign(idx(n), zero);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Jet Rik = zero;
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          Rik += hd.curv[idx(i)][idx(j)][idx(k)][idx(l)] * yj[idx(j)] * yj[idx(l)];
      out.Rb[idx(i)] += Rik * inv.b_up[idx(k)];
      if (i == k) out.ric += Rik;
    }
  out.ric_vert_b = 0.0;
  for (int i = 0; i < n; ++i)
    out.ric_vert_b += inv.b_up[idx(i)] * value_of(out.ric.derive(i));
  return out;
}

// --- scaling invariants on jets -----------------------------------------------

// QTP evaluated with s carried as a jet in the flag direction (B is constant
// in y).  Custom scaling functions are value-level only; the jet-level
// assembly needs closed derivative chains.
inline QTP<Jet> qtp_flag_jets(const PhiFunction& phi, const Jet& s_jet, double B) {
  const Jet Bj = Jet::constant(B, s_jet.n(), s_jet.K());
  switch (phi.kind) {
    case PhiFunction::Kind::matsumoto:
      return qtp_matsumoto<Jet>(s_jet, Bj);
    case PhiFunction::Kind::randers:
      return qtp_randers<Jet>(s_jet, Bj);
    default:
      throw std::invalid_argument(
          "jet-level contraction assembly supports only the built-in scaling functions");
  }
}

// QTP as first-order jets in s with B held fixed, for differentiating the
// trace coefficient table.  Exact for every scaling function: the built-in
// kinds use their closed forms, custom ones lift the value table by one order
// (only the entries the trace table reads carry variation, which is all of
// the entries whose s-derivative the lift needs).
inline QTP<Jet> qtp_svariation(const PhiFunction& phi, double s, double B) {
  if (phi.kind == PhiFunction::Kind::matsumoto || phi.kind == PhiFunction::Kind::randers) {
    const Jet sj = Jet::variable(0, s, 1, 1);
    const Jet Bj = Jet::constant(B, 1, 1);
    return phi.kind == PhiFunction::Kind::matsumoto ? qtp_matsumoto<Jet>(sj, Bj)
                                                    : qtp_randers<Jet>(sj, Bj);
  }
  const QTP<double> q0 = qtp_generic(phi, s, B);
  const Jet ds = Jet::variable(0, 0.0, 1, 1);
  auto lift = [&](double v, double dv) { return Jet::constant(v, 1, 1) + dv * ds; };
  QTP<Jet> q;
  q.Q = lift(q0.Q, q0.Qs);
  q.Qs = lift(q0.Qs, q0.Qss);
  q.Qss = lift(q0.Qss, q0.Qsss);
  q.Qsss = lift(q0.Qsss, 0.0);
  q.psi = lift(q0.psi, q0.psis);
  q.psis = lift(q0.psis, q0.psiss);
  q.psiss = lift(q0.psiss, q0.psisss);
  q.psisss = lift(q0.psisss, 0.0);
  q.psiB = lift(q0.psiB, q0.psisB);
  q.psisB = lift(q0.psisB, q0.psissB);
  q.psissB = lift(q0.psissB, 0.0);
  q.Theta = lift(q0.Theta, q0.Thetas);
  q.Thetas = lift(q0.Thetas, 0.0);
  q.v = lift(q0.v, q0.vs);
  q.vs = lift(q0.vs, q0.vss);
  q.vss = lift(q0.vss, 0.0);
  q.vB = lift(q0.vB, q0.vsB);
  q.vsB = lift(q0.vsB, 0.0);
  q.Delta = lift(q0.Delta, 0.0);
  return q;
}

// --- coefficient blocks of the b-contraction ----------------------------------

// Coefficients multiplying each tensor monomial in the assembled expression
// for (bar)R^i_j b^j.  All are flag-direction jets through their dependence
// on s, alpha and the data scalars.
struct BigC {
  Jet C21, C22, C23, C24, C230, C240;
  Jet C31, C32, C310, C320, C331;
  Jet C4, C410, C420, C332, C333, C311;
};

inline BigC big_c_coeffs(const QTP<Jet>& q, const DataScalars& d) {
  const Jet& a = d.alpha;
  const Jet& s = d.s;
  const Jet bs2 = d.B - s * s;
  const Jet &Q = q.Q, &Qs = q.Qs, &Qss = q.Qss;
  const Jet &psi = q.psi, &psis = q.psis, &psiss = q.psiss;
  const Jet &psiB = q.psiB, &psisB = q.psisB;
  const Jet &v = q.v, &vs = q.vs, &vss = q.vss, &vB = q.vB, &vsB = q.vsB;
  const Jet &r00 = d.r00, &r0 = d.r0, &s0 = d.s0;

  BigC C;
  C.C21 = (r00 * r00 / (a * a)) *
              ((s * psis * psis - 2.0 * s * psi * psiss - 2.0 * psi * psis) * bs2 + s * psiss +
               psis + 4.0 * s * s * psi * psis) +
          (r00 * s0 / a) *
              ((2.0 * s * psis * vs - 3.0 * v * psis - 2.0 * s * v * psiss - 2.0 * s * psi * vss) * bs2 +
               s * vss + 2.0 * s * psisB - 2.0 * s * Q * psiss + 5.0 * s * s * v * psis +
               s * Qs * psis + 2.0 * s * s * vs * psi - 2.0 * s * v * psi - 3.0 * Q * psis) +
          (2.0 * r00 * r0 / a) * (-s * psi * psis + s * psisB) +
          s0 * s0 *
              ((s * vs * vs - 2.0 * s * v * vss - v * vs) * bs2 + 3.0 * s * s * v * vs -
               2.0 * s * Q * vss - 3.0 * s * v * v - Q * vs - 2.0 * vB + s * Qs * vs + 2.0 * s * vsB) +
          2.0 * s0 * r0 * (s * vsB - psi * v + s * psi * vs - 2.0 * s * v * psis - vB) +
          (d.r00_h0 / a) * s * psis +
          2.0 * d.rk0_sk0 * (-Q * psi + s * psi * Qs - 2.0 * s * Q * psis) +
          d.s0_h0 * (s * vs - v) + a * d.sk_sk0 * (s * Qs * v + Q * v - 2.0 * s * Q * vs);
  C.C22 = (r00 * r00 / (a * a)) * ((2.0 * psi * psiss - psis * psis) * bs2 - psiss - 4.0 * s * psi * psis) +
          (r00 * s0 / a) *
              (2.0 * (v * psiss + psi * vss - psis * vs) * bs2 - 2.0 * psisB - vss + 2.0 * v * psi -
               2.0 * s * psi * vs - 5.0 * s * v * psis + 2.0 * Q * psiss - Qs * psis) +
          (2.0 * r00 * r0 / a) * (-psisB + psi * psis) +
          2.0 * s0 * r0 * (-psi * vs + 2.0 * psis * v - vsB) +
          s0 * s0 *
              ((2.0 * v * vss - vs * vs) * bs2 - Qs * vs - 2.0 * vsB + 2.0 * v * v + 2.0 * Q * vss -
               3.0 * s * v * vs) -
          (d.r00_h0 / a) * psis - d.s0_h0 * vs + a * d.sk_sk0 * (2.0 * Q * vs - Qs * v) +
          2.0 * d.rk0_sk0 * (2.0 * Q * psis - Qs * psi);
  C.C23 = r00 * ((-v * psis + 2.0 * psi * vs) * bs2 + 4.0 * psiB - Q * psis - vs + 2.0 * s * v * psi) +
          a * s0 * (v * vs * bs2 + 2.0 * vB + Q * vs + s * v * v) - 2.0 * a * r0 * (psi * v + vB);
  C.C24 = 4.0 * r00 * (psi * psi + psiB) + 4.0 * a * s0 * (vB + psi * v);
  C.C230 = (3.0 * r00 / a) * (1.0 + s * Q) * psis + 3.0 * s0 * (vs - (v - s * vs) * Q);
  C.C240 = (r00 / a) * (2.0 * psi * psis * bs2 - psis) - 4.0 * r0 * (psi * psi + psiB) +
           s0 * ((4.0 * v * psis - 2.0 * psi * vs) * bs2 + vs - 2.0 * s * v * psi + 4.0 * Q * psis -
                 4.0 * psiB);
  C.C31 = r00 * (-2.0 * Q * psi + 2.0 * s * Qs * psi - s * Q * psis) -
          a * s0 * (v * Q + s * Q * vs - 2.0 * s * Qs * v);
  C.C32 = r00 * (-2.0 * Qs * psi + Q * psis) - a * s0 * (2.0 * Qs * v - Q * vs);
  C.C310 = (r00 / a) * ((s * Qs * psis - 2.0 * s * psi * Qss) * bs2 + 2.0 * s * s * Qs * psi -
                        2.0 * s * Q * psi + s * s * Q * psis + s * Qss + s * psis) +
           s0 * ((s * Qs * vs - Qs * v - 2.0 * s * Qss * v) * bs2 + s * s * Q * vs - Q * Qs +
                 s * Qs * Qs - 3.0 * s * Q * v - v + s * vs - 2.0 * s * Q * Qss + 2.0 * s * s * Qs * v);
  C.C320 = (r00 / a) * ((2.0 * Qss * psi - Qs * psis) * bs2 + 2.0 * Q * psi - 2.0 * s * psi * Qs -
                        s * Q * psis - Qss - psis) +
           s0 * ((2.0 * Qss * v - Qs * vs) * bs2 - vs - Qs * Qs + 2.0 * Q * v - 2.0 * s * Qs * v +
                 2.0 * Q * Qss - s * Q * vs);
  C.C331 = -3.0 * Q * Q + 3.0 * s * Q * Qs + 3.0 * Qs;
  C.C4 = 2.0 * psi * r00 + 2.0 * v * a * s0;
  C.C410 = (r00 / a) * s * psis + s0 * (s * vs - v);
  C.C420 = -(r00 / a) * psis - s0 * vs;
  C.C332 = a * (Q - s * Qs) * Q;
  C.C333 = a * Q * Qs;
  C.C311 = s * Qs - Q;
  return C;
}

// Assembled (bar)R^i_j b^j: the alpha-curvature contraction plus the closed
// beta-correction blocks.
inline std::vector<Jet> bar_curv_contract_b(const QTP<Jet>& q, const DataScalars& d,
                                            const std::vector<Jet>& aRb) {
  const Jet& a = d.alpha;
  const Jet& s = d.s;
  const double B = d.B;
  const BigC C = big_c_coeffs(q, d);
  const Jet bracket = s * C.C21 + B * C.C22 + d.r * C.C24 - C.C230 * d.s0 + C.C240 * d.r0 -
                      q.v * a * d.bs_j_h0 + 2.0 * q.v * a * d.bs0_hj + q.v * q.Q * a * a * d.sk_sk +
                      2.0 * q.psi * d.br00_hj - 2.0 * q.psi * d.br_j0_h0 +
                      2.0 * q.Q * q.psi * a * d.sk_r0k + 4.0 * q.Q * q.psi * a * d.rk_sk0;
  std::vector<Jet> out;
  for (int i = 0; i < d.n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    Jet t = aRb[ii] + d.bvec[ii] * bracket +
            d.svecu[ii] * (s * C.C31 + B * C.C32 + 2.0 * q.Q * q.psi * a * d.r0) +
            d.s_i0[ii] * (s * C.C310 + B * C.C320 - C.C331 * d.s0) + d.rvecu[ii] * C.C4 +
            d.r_i0[ii] * (s * C.C410 + B * C.C420 - 2.0 * q.psi * d.r0) +
            d.siksk0[ii] * (s * C.C332 + B * C.C333) + d.sik_sk[ii] * (q.Q * q.Q * a * a) +
            2.0 * d.bs_i0_hj[ii] * q.Q * a - d.bs_ij_h0[ii] * q.Q * a +
            d.s_i0_h0[ii] * (s * C.C311 - B * q.Qs);
    out.push_back(t);
  }
  return out;
}

// --- trace coefficient table ---------------------------------------------------

// Coefficients of the tensor monomials in the assembled trace of (bar)R.
template <class T>
struct TraceTable {
  T c2, c4, c6, c8, c10, c11, c13, c14, c16, c18, c19, c20, c22, c23, c24, c25, c26;
};

template <class T>
TraceTable<T> trace_table(const QTP<T>& q, const T& s, double B) {
  const T bs2 = B - s * s;
  const T &Q = q.Q, &Qs = q.Qs, &Qss = q.Qss;
  const T &psi = q.psi, &psis = q.psis, &psiss = q.psiss;
  const T &psiB = q.psiB, &psisB = q.psisB;
  TraceTable<T> c;
  c.c2 = (2.0 * psi * psiss - psis * psis) * bs2 * bs2 - (6.0 * s * psi * psis + psiss) * bs2 +
         2.0 * s * psis;
  c.c4 = (-4.0 * psi * (2.0 * Q * psiss + Qs * psis + Qss * psi) + 4.0 * Q * psis * psis) * bs2 * bs2 +
         (-4.0 * psi * psi * (Q - s * Qs) + 2.0 * (2.0 * Qss * psi + Qs * psis + 2.0 * Q * psiss) -
          2.0 * psisB + 20.0 * s * Q * psi * psis) *
             bs2 +
         2.0 * psi * (Q - s * Qs) - 4.0 * psis - Qss - 10.0 * s * Q * psis;
  c.c6 = 2.0 * (2.0 * psi * psis - psisB) * bs2 - 2.0 * psis;
  c.c8 = -psis * bs2;
  c.c10 = (4.0 * psi * psi * (2.0 * Q * Qss - Qs * Qs) + 8.0 * Q * psi * (Q * psiss + Qs * psis) -
           4.0 * Q * Q * psis * psis) *
              bs2 * bs2 +
          (-16.0 * s * Q * psi * (Q * psis + Qs * psi) - 4.0 * psi * (2.0 * Q * Qss - Qs * Qs) -
           4.0 * Q * (Q * psiss + Qs * psis) + 4.0 * (Q * psisB + Qs * psiB) + 8.0 * Q * Q * psi * psi) *
              bs2 -
          4.0 * s * s * Q * Q * psi * psi + 4.0 * (2.0 + 3.0 * s * Q) * (Q * psis + Qs * psi) -
          8.0 * Q * Q * psi + 2.0 * Q * Qss - Qs * Qs + 4.0 * s * Q * psiB;
  c.c11 = 4.0 * psi * psi + 4.0 * psiB;
  c.c13 = (8.0 * psi * (Qs * psi - Q * psis) + 4.0 * (Q * psisB + Qs * psiB)) * bs2 +
          8.0 * s * Q * psi * psi + 4.0 * Q * psis - 4.0 * (1.0 - s * Q) * psiB;
  c.c14 = 2.0 * psi;
  c.c16 = -4.0 * (Qs * psi - Q * psis) * bs2 + 2.0 * Qs - 2.0 * (1.0 + 2.0 * s * Q) * psi;
  c.c18 = 2.0 * (Qs * psi + Q * psis) * bs2 - Qs + 2.0 * s * Q * psi;
  c.c19 = -2.0 * Q * Q + 2.0 * (1.0 + s * Q) * Qs;
  c.c20 = -8.0 * Q * (psi * psi + psiB);
  c.c22 = -4.0 * Q * Q * psis * bs2 + 2.0 * Q * psi;
  c.c23 = 2.0 * Q * psi;
  c.c24 = 2.0 * Q;
  c.c25 = -4.0 * Q * Q * psi;
  c.c26 = -Q * Q;
  return c;
}

// Value-and-s-derivative table of the trace coefficients at a point (s, B).
struct TraceCoeffs {
  TraceTable<double> value;
  TraceTable<double> ds;  // d/ds of each coefficient at fixed B
};

inline TraceCoeffs trace_coeffs(const PhiFunction& phi, double s, double B) {
  const QTP<Jet> q = qtp_svariation(phi, s, B);
  const Jet sj = Jet::variable(0, s, 1, 1);
  const TraceTable<Jet> t = trace_table<Jet>(q, sj, B);
  TraceCoeffs out;
  auto unpack = [](const Jet& j, double& v, double& dv) {
    v = value_of(j);
    dv = j.partial({1});
  };
  unpack(t.c2, out.value.c2, out.ds.c2);
  unpack(t.c4, out.value.c4, out.ds.c4);
  unpack(t.c6, out.value.c6, out.ds.c6);
  unpack(t.c8, out.value.c8, out.ds.c8);
  unpack(t.c10, out.value.c10, out.ds.c10);
  unpack(t.c11, out.value.c11, out.ds.c11);
  unpack(t.c13, out.value.c13, out.ds.c13);
  unpack(t.c14, out.value.c14, out.ds.c14);
  unpack(t.c16, out.value.c16, out.ds.c16);
  unpack(t.c18, out.value.c18, out.ds.c18);
  unpack(t.c19, out.value.c19, out.ds.c19);
  unpack(t.c20, out.value.c20, out.ds.c20);
  unpack(t.c22, out.value.c22, out.ds.c22);
  unpack(t.c23, out.value.c23, out.ds.c23);
  unpack(t.c24, out.value.c24, out.ds.c24);
  unpack(t.c25, out.value.c25, out.ds.c25);
  unpack(t.c26, out.value.c26, out.ds.c26);
  return out;
}

// Assembled trace of (bar)R from the alpha Ricci contraction plus corrections.
inline Jet bar_curv_trace(const QTP<Jet>& q, const DataScalars& d, const Jet& aRtr) {
  const Jet& a = d.alpha;
  const TraceTable<Jet> c = trace_table<Jet>(q, d.s, d.B);
  return aRtr + (d.r00 * d.r00 / (a * a)) * c.c2 +
         (d.r00 * d.s0 * c.c4 + d.r00 * d.r0 * c.c6 + d.r00_h0 * c.c8) / a + d.s0 * d.s0 * c.c10 +
         (d.r * d.r00 - d.r0 * d.r0) * c.c11 + d.r0 * d.s0 * c.c13 +
         (d.r00 * d.rmm - d.r0m_rm0 + d.br00_hj - d.br_j0_h0) * c.c14 + d.rk0_sk0 * c.c16 +
         d.s0_h0 * c.c18 + d.s0k_sk0 * c.c19 +
         a * (d.r * d.s0 * c.c20 + d.sk_sk0 * c.c22 +
              (3.0 * d.sk_r0k - 2.0 * d.s0 * d.rmm + 2.0 * d.rk_sk0 - 2.0 * d.bs0_hj + d.bs_j_h0) *
                  c.c23 +
              d.smk_0m * c.c24) +
         a * a * (d.sk_sk * c.c25 + d.sim_smi * c.c26);
}

// --- vertical trace display with term-level corrections ------------------------

// One term-level coefficient discrepancy between the transcribed display of
// the vertical trace and the value the direct curvature oracle requires.
struct TermDiff {
  std::string term;        // tensor monomial the coefficient multiplies
  double printed = 0.0;    // coefficient as transcribed
  double computed = 0.0;   // coefficient confirmed by the direct oracle
};

// b^i d/dy^i of the assembled trace, written out display-style in the data
// scalars.  `printed` evaluates the transcription as-is, `corrected` applies
// the adjudicated coefficient fixes, `diffs` records each fix.
struct VerticalTrace {
  double printed = 0.0;
  double corrected = 0.0;
  std::vector<TermDiff> diffs;
};

inline VerticalTrace vertical_trace_terms(const PhiFunction& phi, const DataScalars& d,
                                          double ric_vert_b) {
  const double s = value_of(d.s);
  const double B = d.B;
  const double a = value_of(d.alpha);
  const double bs2 = B - s * s;
  const TraceCoeffs tc = trace_coeffs(phi, s, B);
  const TraceTable<double>& cv = tc.value;
  const TraceTable<double>& cs = tc.ds;
  const double r00 = value_of(d.r00), r0 = value_of(d.r0), s0 = value_of(d.s0), r = d.r;

  auto assemble = [&](bool corrected) {
    const double e1 = corrected ? 4.0 * cv.c2 : 2.0 * cv.c2;
    const double e2 = corrected ? value_of(d.r0m_rm0) * (-bs2 * cs.c14) +
                                      value_of(d.rk0_sk0) * (bs2 * cs.c16)
                                : value_of(d.rk0_sk0) * (-bs2 * cs.c14 + cs.c16);
    const double f3 = corrected ? bs2 : 1.0;
    const double e4 = corrected ? a * (2.0 * d.sk_rk - d.sk_sk) * cv.c23 : 0.0;
    return ric_vert_b + (r00 * r00 / (a * a * a)) * (bs2 * cs.c2 - 2.0 * s * cv.c2) +
           (1.0 / (a * a)) *
               (r00 * s0 * (bs2 * cs.c4 - s * cv.c4) + r00 * r0 * (bs2 * cs.c6 - s * cv.c6 + e1) +
                value_of(d.r00_h0) * (bs2 * cs.c8 - s * cv.c8)) +
           (1.0 / a) *
               (s0 * s0 * bs2 * cs.c10 + r * r00 * (bs2 * cs.c11 + cv.c6) +
                r0 * r0 * (-bs2 * cs.c11 + 2.0 * cv.c6) + r0 * s0 * (bs2 * cs.c13 + 2.0 * cv.c4) +
                r00 * d.rmm * bs2 * cs.c14 + e2 + value_of(d.br00_hj) * (bs2 * cs.c14 + cv.c8) +
                value_of(d.br_j0_h0) * (-bs2 * cs.c14 + 2.0 * cv.c8) +
                value_of(d.s0_h0) * f3 * cs.c18 + value_of(d.s0k_sk0) * f3 * cs.c19) +
           r * s0 * (bs2 * cs.c20 + s * cv.c20 + cv.c13) +
           value_of(d.sk_sk0) * (bs2 * cs.c22 + s * cv.c22 + 2.0 * cv.c19) +
           value_of(d.sk_r0k) * (3.0 * bs2 * cs.c23 + 3.0 * s * cv.c23 - cv.c16) -
           s0 * d.rmm * (2.0 * bs2 * cs.c23 + 2.0 * s * cv.c23) +
           value_of(d.rk_sk0) * (2.0 * bs2 * cs.c23 + 2.0 * s * cv.c23 + cv.c16) -
           value_of(d.bs0_hj) * (2.0 * bs2 * cs.c23 + 2.0 * s * cv.c23 - cv.c18) +
           value_of(d.bs_j_h0) * (bs2 * cs.c23 + s * cv.c23 + cv.c18) +
           value_of(d.smk_0m) * (bs2 * cs.c24 + s * cv.c24) +
           (2.0 * r0 * d.rmm - 2.0 * value_of(d.rm_rm0) + value_of(d.bbr_0km) -
            value_of(d.bbr_mk0)) *
               cv.c14 +
           e4 +
           a * (d.sk_sk * (bs2 * cs.c25 + 2.0 * s * cv.c25 - cv.c22) +
                d.sim_smi * (bs2 * cs.c26 + 2.0 * s * cv.c26) + d.bsm_km * cv.c24);
  };

  VerticalTrace out;
  out.printed = assemble(false);
  out.corrected = assemble(true);
  out.diffs = {
      {"r00*r0/alpha^2 carry coefficient", 2.0 * cv.c2, 4.0 * cv.c2},
      {"r0m_rm0 coefficient", 0.0, -bs2 * cs.c14},
      {"rk0_sk0 derivative coefficient", -bs2 * cs.c14 + cs.c16, bs2 * cs.c16},
      {"s0_h0 derivative coefficient", cs.c18, bs2 * cs.c18},
      {"s0k_sk0 derivative coefficient", cs.c19, bs2 * cs.c19},
      {"alpha*(2*sk_rk - sk_sk) coefficient", 0.0, cv.c23},
  };
  return out;
}

// --- full assembled-vs-direct report at one flag ------------------------------

// Every contraction the assembly produces at one (x, y), next to the direct
// jet-curvature value of the same quantity.  weyl_bb is the double
// contraction b_i W^i_j b^j of the projective Weyl-type tensor:
//   weyl_bb = Rbb - B * trace/(n-1) - beta/(n+1) * (rb_vdiv - trace_vert/(n-1)).
struct ContractionReport {
  int n = 0;
  std::vector<double> rb_assembled, rb_direct;  // (bar)R^i_j b^j
  double rbb_assembled = 0.0, rbb_direct = 0.0;
  double trace_assembled = 0.0, trace_direct = 0.0;
  double rb_vdiv_assembled = 0.0, rb_vdiv_direct = 0.0;      // d/dy^i of rb^i
  double trace_vert_assembled = 0.0, trace_vert_direct = 0.0;  // b^i d(trace)/dy^i
  VerticalTrace vertical;  // display-style vertical trace with corrections
  double weyl_bb_assembled = 0.0, weyl_bb_direct = 0.0;
  double scale = 1.0;      // max(1, |(bar)R| entries), for relative tolerances
};

inline ContractionReport contraction_report(const FinslerMetric& fm, const std::vector<double>& x,
                                            const std::vector<double>& y) {
  const int n = fm.n();
  if (n < 3) throw std::invalid_argument("contraction_report requires dimension >= 3");
  auto idx = [](int i) { return static_cast<std::size_t>(i); };

  ContractionReport rep;
  rep.n = n;

  // assembled side
  const auto inv = beta_invariants(fm.metric, fm.oneform, x);
  const auto hd = horizontal_derivatives(fm.metric, fm.oneform, x);
  const auto d = data_scalars(inv, hd, y, 1);
  const auto ac = alpha_curvature(inv, hd, y, 1);
  const QTP<Jet> q = qtp_flag_jets(fm.phi, d.s, d.B);
  const auto V = bar_curv_contract_b(q, d, ac.Rb);
  const Jet T = bar_curv_trace(q, d, ac.ric);

  rep.trace_assembled = value_of(T);
  for (int i = 0; i < n; ++i) {
    rep.rb_assembled.push_back(value_of(V[idx(i)]));
    rep.rbb_assembled += value_of(V[idx(i)]) * inv.b[idx(i)];
    rep.rb_vdiv_assembled += value_of(V[idx(i)].derive(i));
    rep.trace_vert_assembled += inv.b_up[idx(i)] * value_of(T.derive(i));
  }
  rep.vertical = vertical_trace_terms(fm.phi, d, ac.ric_vert_b);

  // direct side: curvature of the bar-spray via jet differentiation
  const auto parts = spray_parts(fm, x, y, 3);
  const auto Rbar = riemann_from_spray(parts.bar, y);  // combined jets, order 1
  const Jet zero = Jet::constant(0.0, 2 * n, 1);
  Jet tr = zero;
  std::vector<Jet> Rb(idx(n), zero);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Rb[idx(i)] += Rbar[idx(i)][idx(j)] * inv.b_up[idx(j)];
      rep.scale = std::max(rep.scale, std::fabs(value_of(Rbar[idx(i)][idx(j)])));
    }
    tr += Rbar[idx(i)][idx(i)];
  }
  rep.trace_direct = value_of(tr);
  for (int i = 0; i < n; ++i) {
    rep.rb_direct.push_back(value_of(Rb[idx(i)]));
    rep.rbb_direct += value_of(Rb[idx(i)]) * inv.b[idx(i)];
    rep.rb_vdiv_direct += value_of(Rb[idx(i)].derive(n + i));
    rep.trace_vert_direct += inv.b_up[idx(i)] * value_of(tr.derive(n + i));
  }

  const double beta = value_of(d.beta);
  auto weyl_bb = [&](double rbb, double trc, double vdiv, double vert) {
    return rbb - d.B * trc / (n - 1) - (beta / (n + 1)) * (vdiv - vert / (n - 1));
  };
  rep.weyl_bb_assembled = weyl_bb(rep.rbb_assembled, rep.trace_assembled, rep.rb_vdiv_assembled,
                                  rep.trace_vert_assembled);
  rep.weyl_bb_direct =
      weyl_bb(rep.rbb_direct, rep.trace_direct, rep.rb_vdiv_direct, rep.trace_vert_direct);
  return rep;
}

// --- Killing / constant-length specialization ----------------------------------

// Contractions specialized to a Killing 1-form of constant length: every
// r-type and horizontal-derivative term drops and only the s0k_sk0-type data
// survive.  vert_leading is the closed-form leading term of the vertical
// trace; vert_leading_derived rebuilds it from the surviving coefficient
// block, and the two must agree.
struct KillingContractions {
  int n = 0;
  std::vector<double> rb;      // (bar)R^i_j b^j
  double rbb = 0.0;            // b_i (bar)R^i_j b^j
  double trace = 0.0;          // (bar)R^m_m
  double rb_vdiv = 0.0;        // d(rb^i)/dy^i
  double trace_vert = 0.0;     // b^i d(trace)/dy^i
  double vert_leading = 0.0;
  double vert_leading_derived = 0.0;
};

inline KillingContractions killing_specialization(const FinslerMetric& fm,
                                                  const std::vector<double>& x,
                                                  const std::vector<double>& y,
                                                  bool check_preconditions = true) {
  if (check_preconditions) {
    const KillingReport kr = killing_classifier(fm.metric, fm.oneform);
    if (!kr.killing || !kr.constant_length)
      throw std::domain_error(
          "killing_specialization requires a Killing 1-form of constant length");
  }
  const int n = fm.n();
  auto idx = [](int i) { return static_cast<std::size_t>(i); };
  const auto inv = beta_invariants(fm.metric, fm.oneform, x);
  const auto hd = horizontal_derivatives(fm.metric, fm.oneform, x);
  const auto d = data_scalars(inv, hd, y, 1);
  const auto ac = alpha_curvature(inv, hd, y, 1);
  const double s = value_of(d.s), B = d.B, a = value_of(d.alpha);
  const double bs2 = B - s * s;
  const QTP<double> q = qtp(fm.phi, s, B);
  const double S2 = value_of(d.s0k_sk0);
  const double smm = value_of(d.smk_0m);
  const double simsmi = d.sim_smi;

  KillingContractions out;
  out.n = n;
  double aRb_vdiv = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = value_of(ac.Rb[idx(i)]) +
                     a * (bs2 * q.Q * q.Qs + s * q.Q * q.Q + q.Q) * value_of(d.siksk0[idx(i)]) +
                     2.0 * a * q.Q * value_of(d.bs_i0_hj[idx(i)]) -
                     (bs2 * q.Qs + s * q.Q) * value_of(d.s_i0_h0[idx(i)]);
    out.rb.push_back(t);
    out.rbb += value_of(ac.Rb[idx(i)]) * inv.b[idx(i)];
    aRb_vdiv += value_of(ac.Rb[idx(i)].derive(i));
  }
  out.rbb -= (bs2 * q.Qs + s * q.Q) * S2;
  out.trace = value_of(ac.ric) + 2.0 * (-q.Q * q.Q + s * q.Q * q.Qs + q.Qs) * S2 +
              2.0 * a * q.Q * smm - a * a * q.Q * q.Q * simsmi;
  out.rb_vdiv = aRb_vdiv +
                (1.0 / a) * bs2 * (q.Q * q.Qs - s * q.Qs * q.Qs - s * q.Q * q.Qss - q.Qss) * S2 -
                (bs2 * q.Qs + s * q.Q) * smm +
                a * (bs2 * q.Q * q.Qs + s * q.Q * q.Q + q.Q) * simsmi;
  out.trace_vert = ac.ric_vert_b +
                   (2.0 / a) * bs2 * (-q.Q * q.Qs + s * q.Qs * q.Qs + s * q.Q * q.Qss + q.Qss) * S2 +
                   2.0 * (bs2 * q.Qs + s * q.Q) * smm -
                   2.0 * a * (bs2 * q.Q * q.Qs + s * q.Q * q.Q + q.Q) * simsmi;

  const double vterm = (1.0 / a) * bs2 * (s * q.Qs * q.Qs + s * q.Q * q.Qss) * S2;
  out.vert_leading_derived = s * a * vterm / (n - 1);
  if (fm.phi.kind == PhiFunction::Kind::matsumoto) {
    const double A1 = 1.0 - 2.0 * s;
    out.vert_leading = 12.0 * s * s * bs2 / ((n - 1) * A1 * A1 * A1 * A1) * S2;
  } else {
    out.vert_leading = out.vert_leading_derived;
  }
  return out;
}

// --- conformality measure of r --------------------------------------------------

// Per-point conformal factor sigma = (a^{ij} r_ij)/n and the worst deviation
// of r_ij from sigma * a_ij over the given points.  r is conformal to a
// (r_ij = sigma a_ij) iff the residual vanishes.
struct ConformalReport {
  std::vector<double> sigma;
  double residual = 0.0;
};

inline ConformalReport conformal_test(const MetricField& metric, const OneFormField& oneform,
                                      const std::vector<std::vector<double>>& points) {
  auto idx = [](int i) { return static_cast<std::size_t>(i); };
  ConformalReport out;
  for (const auto& x : points) {
    const auto inv = beta_invariants(metric, oneform, x);
    double tr = 0.0;
    for (int i = 0; i < inv.n; ++i)
      for (int j = 0; j < inv.n; ++j) tr += inv.a_inv[idx(i)][idx(j)] * inv.r[idx(i)][idx(j)];
    const double sg = tr / inv.n;
    out.sigma.push_back(sg);
    for (int i = 0; i < inv.n; ++i)
      for (int j = 0; j < inv.n; ++j)
        out.residual =
            std::max(out.residual, std::fabs(inv.r[idx(i)][idx(j)] - sg * inv.a[idx(i)][idx(j)]));
  }
  return out;
}

}  // namespace finsler
