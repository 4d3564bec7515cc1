#pragma once
// Closed-form layer for (alpha, beta)-metrics F = alpha * phi(beta/alpha):
// the scaling invariants Q, Theta, psi (with their s- and B-derivatives),
// the strong-convexity test, the closed-form spray
//   G^i = aG^i + alpha Q s^i_0 + Theta (r00 - 2 alpha Q s_0) y^i / alpha
//         + psi (r00 - 2 alpha Q s_0) b^i
// and its projective split. The closed forms are cross-checked elsewhere
// against the jet-differentiation pipeline in finsler.hpp.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "finsler/finsler.hpp"
#include "finsler/riemann.hpp"

namespace finsler {

// Scaling invariants of phi at (s, B) with enough derivatives for every
// assembled formula in the library. T is double or a jet type.
template <class T>
struct QTP {
  T Q, Qs, Qss, Qsss;
  T psi, psis, psiss, psisss, psiB, psisB, psissB;
  T Theta, Thetas;
  T v, vs, vss, vB, vsB;  // v = -2 psi Q
  T Delta;                // phi - s phi' + (B - s^2) phi''
};

// Matsumoto phi(s) = 1/(1-s): everything is rational in A1 = 1-2s and
// A2 = 1 + 2B - 3s.
template <class T>
QTP<T> qtp_matsumoto(const T& s, const T& B) {
  const T A1 = 1.0 - 2.0 * s;
  const T A2 = 1.0 + 2.0 * B - 3.0 * s;
  const T iA1 = 1.0 / A1, iA2 = 1.0 / A2;
  const T iA1_2 = iA1 * iA1, iA1_3 = iA1_2 * iA1, iA1_4 = iA1_3 * iA1;
  const T iA2_2 = iA2 * iA2, iA2_3 = iA2_2 * iA2, iA2_4 = iA2_3 * iA2;
  QTP<T> q;
  q.Q = iA1;
  q.Qs = 2.0 * iA1_2;
  q.Qss = 8.0 * iA1_3;
  q.Qsss = 48.0 * iA1_4;
  q.psi = iA2;
  q.psis = 3.0 * iA2_2;
  q.psiss = 18.0 * iA2_3;
  q.psisss = 162.0 * iA2_4;
  q.psiB = -2.0 * iA2_2;
  q.psisB = -12.0 * iA2_3;
  q.psissB = -108.0 * iA2_4;
  q.Theta = (1.0 - 4.0 * s) * iA2 * 0.5;
  q.Thetas = -(1.0 + 8.0 * B) * iA2_2 * 0.5;
  q.v = -2.0 * iA1 * iA2;
  q.vs = -4.0 * iA1_2 * iA2 - 6.0 * iA1 * iA2_2;
  q.vss = -16.0 * iA1_3 * iA2 - 24.0 * iA1_2 * iA2_2 - 36.0 * iA1 * iA2_3;
  q.vB = 4.0 * iA1 * iA2_2;
  q.vsB = 8.0 * iA1_2 * iA2_2 + 24.0 * iA1 * iA2_3;
  const T oms = 1.0 - s;
  q.Delta = (1.0 - 3.0 * s + 2.0 * B) / (oms * oms * oms);
  return q;
}

// Randers phi(s) = 1 + s: psi = 0 identically, Q = 1.
template <class T>
QTP<T> qtp_randers(const T& s, const T& B) {
  const T zero = s * 0.0;
  const T one = zero + 1.0;
  QTP<T> q;
  q.Q = one;
  q.Qs = zero; q.Qss = zero; q.Qsss = zero;
  q.psi = zero; q.psis = zero; q.psiss = zero; q.psisss = zero;
  q.psiB = zero; q.psisB = zero; q.psissB = zero;
  q.Theta = 0.5 / (1.0 + s);
  q.Thetas = -0.5 / ((1.0 + s) * (1.0 + s));
  q.v = zero; q.vs = zero; q.vss = zero; q.vB = zero; q.vsB = zero;
  q.Delta = one + B * 0.0;
  return q;
}

// Generic phi: build the invariants by jet differentiation in (s, B).
// Definitions:  Q = phi' / (phi - s phi'),
//               Delta = phi - s phi' + (B - s^2) phi'',
//               psi = phi'' / (2 Delta),
//               Theta = phi'(phi - s phi') / (2 phi Delta) - s psi,
//               v = -2 psi Q.
inline QTP<double> qtp_generic(const PhiFunction& phi, double s, double B) {
  const int ord = 3;
  Jet sj = Jet::variable(0, s, 2, ord + 2);
  Jet Bj0 = Jet::variable(1, B, 2, ord + 2);
  Jet ph = phi_eval(phi, sj);
  Jet ph1 = ph.derive(0);                 // order ord+2
  Jet ph2 = ph1.derive(0);                // order ord+1
  Jet st = sj.truncate(ord), Bt = Bj0.truncate(ord);
  Jet p = ph.truncate(ord), p1 = ph1.truncate(ord), p2 = ph2.truncate(ord);
  Jet denomQ = p - st * p1;
  Jet Q = p1 / denomQ;
  Jet Delta = denomQ + (Bt - st * st) * p2;
  Jet psi = p2 / (2.0 * Delta);
  Jet Theta = p1 * denomQ / (2.0 * p * Delta) - st * psi;
  Jet v = -2.0 * psi * Q;
  QTP<double> q;
  q.Q = value_of(Q);
  q.Qs = Q.partial({1, 0});
  q.Qss = Q.partial({2, 0});
  q.Qsss = Q.partial({3, 0});
  q.psi = value_of(psi);
  q.psis = psi.partial({1, 0});
  q.psiss = psi.partial({2, 0});
  q.psisss = psi.partial({3, 0});
  q.psiB = psi.partial({0, 1});
  q.psisB = psi.partial({1, 1});
  q.psissB = psi.partial({2, 1});
  q.Theta = value_of(Theta);
  q.Thetas = Theta.partial({1, 0});
  q.v = value_of(v);
  q.vs = v.partial({1, 0});
  q.vss = v.partial({2, 0});
  q.vB = v.partial({0, 1});
  q.vsB = v.partial({1, 1});
  q.Delta = value_of(Delta);
  return q;
}

inline QTP<double> qtp(const PhiFunction& phi, double s, double B) {
  switch (phi.kind) {
    case PhiFunction::Kind::matsumoto: return qtp_matsumoto<double>(s, B);
    case PhiFunction::Kind::randers: return qtp_randers<double>(s, B);
    default: return qtp_generic(phi, s, B);
  }
}

// --- strong convexity ---------------------------------------------------------

// F = alpha phi(s) is a positive, strongly convex Finsler metric for |b| = sqrt(B)
// iff phi > 0 and Delta = phi - s phi' + (B - s^2) phi'' > 0 on |s| <= sqrt(B).
struct ConvexityReport {
  bool ok = false;
  bool domain_error = false;  // phi undefined somewhere on the interval
  double min_phi = 0.0;
  double min_delta = 0.0;
  double worst_s = 0.0;
};

inline ConvexityReport strong_convexity_check(const PhiFunction& phi, double B,
                                              double step = 1e-3) {
  ConvexityReport rep;
  const double b = std::sqrt(std::max(0.0, B));
  bool first = true;
  for (double sv = -b;; sv += step) {
    if (sv > b) sv = b;
    try {
      Jet sj = Jet::variable(0, sv, 1, 2);
      Jet ph = phi_eval(phi, sj);
      const double p = value_of(ph);
      const double p1 = ph.partial({1});
      const double p2 = ph.partial({2});
      const double delta = p - sv * p1 + (B - sv * sv) * p2;
      if (first || p < rep.min_phi) rep.min_phi = p;
      if (first || delta < rep.min_delta) {
        rep.min_delta = delta;
        rep.worst_s = sv;
      }
      first = false;
    } catch (const std::exception&) {
      rep.domain_error = true;
      rep.worst_s = sv;
      break;
    }
    if (sv >= b) break;
  }
  rep.ok = !rep.domain_error && !first && rep.min_phi > 0.0 && rep.min_delta > 0.0;
  return rep;
}

// --- closed-form spray ---------------------------------------------------------

// All spray-level objects as combined (x, y) jets of the requested order:
//   alpha_part  aG^i,
//   bar         Gbar^i = aG^i + alpha Q s^i_0 + psi (r00 - 2 alpha Q s_0) b^i,
//   full        G^i    = Gbar^i + P y^i,
//   P           Theta (r00 - 2 alpha Q s_0) / alpha.
// `bar` and `full` are projectively equivalent by construction.
struct SprayParts {
  int n = 0;
  std::vector<Jet> alpha_part, bar, full;
  Jet P;
};

inline SprayParts spray_parts(const FinslerMetric& fm, const std::vector<double>& x,
                              const std::vector<double>& y, int order) {
  const int n = fm.n();
  auto idx = [](int i) { return static_cast<std::size_t>(i); };
  auto fr = jet_frame(fm.metric, fm.oneform, combined_x_jets(x, order + 1), 0);
  auto ys = combined_y_jets(y, order);

  SprayParts parts;
  parts.n = n;
  Jet zero = Jet::constant(0.0, 2 * n, order);
  std::vector<std::vector<Jet>> a(idx(n));
  std::vector<Jet> b;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[idx(i)].push_back(fr.a[idx(i)][idx(j)].truncate(order));
    b.push_back(fr.b[idx(i)].truncate(order));
  }
  for (int i = 0; i < n; ++i) {
    Jet acc = zero;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        acc += fr.gamma[idx(i)][idx(j)][idx(k)] * ys[idx(j)] * ys[idx(k)];
    parts.alpha_part.push_back(acc * 0.5);
  }
  Jet a2 = zero;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a2 += a[idx(i)][idx(j)] * ys[idx(i)] * ys[idx(j)];
  Jet alpha = sqrt(a2);
  Jet beta = zero;
  for (int i = 0; i < n; ++i) beta += b[idx(i)] * ys[idx(i)];
  Jet sj = beta / alpha;
  Jet Bj = fr.B.truncate(order);

  Jet Q = zero, Theta = zero, psi = zero;
  switch (fm.phi.kind) {
    case PhiFunction::Kind::matsumoto: {
      auto q = qtp_matsumoto<Jet>(sj, Bj);
      Q = q.Q; Theta = q.Theta; psi = q.psi;
      break;
    }
    case PhiFunction::Kind::randers: {
      auto q = qtp_randers<Jet>(sj, Bj);
      Q = q.Q; Theta = q.Theta; psi = q.psi;
      break;
    }
    default: {
      if (order > 0)
        throw std::invalid_argument(
            "jet-level closed-form spray supports only the built-in scaling functions");
      auto q = qtp_generic(fm.phi, value_of(sj), value_of(Bj));
      Q = zero + q.Q; Theta = zero + q.Theta; psi = zero + q.psi;
      break;
    }
  }

  Jet r00 = zero, s0 = zero;
  for (int i = 0; i < n; ++i) {
    s0 += fr.s_form[idx(i)] * ys[idx(i)];
    for (int j = 0; j < n; ++j) r00 += fr.r[idx(i)][idx(j)] * ys[idx(i)] * ys[idx(j)];
  }
  std::vector<Jet> si0;
  for (int i = 0; i < n; ++i) {
    Jet acc = zero;
    for (int j = 0; j < n; ++j) acc += fr.s_mixed[idx(i)][idx(j)] * ys[idx(j)];
    si0.push_back(acc);
  }
  Jet core = r00 - 2.0 * alpha * Q * s0;
  parts.P = Theta * core / alpha;
  for (int i = 0; i < n; ++i) {
    Jet qi = alpha * Q * si0[idx(i)] + psi * core * fr.b_up[idx(i)].truncate(order);
    parts.bar.push_back(parts.alpha_part[idx(i)] + qi);
    parts.full.push_back(parts.bar[idx(i)] + parts.P * ys[idx(i)]);
  }
  return parts;
}

inline std::vector<double> spray_closed_form(const FinslerMetric& fm, const std::vector<double>& x,
                                             const std::vector<double>& y) {
  auto parts = spray_parts(fm, x, y, 0);
  std::vector<double> out;
  for (const Jet& j : parts.full) out.push_back(value_of(j));
  return out;
}

// Value-level projective split G = aG + Q^i + P y^i.
struct ProjectiveSplit {
  std::vector<double> alpha_part;  // aG^i
  std::vector<double> transverse;  // Q^i = alpha Q s^i_0 + psi (r00 - 2 alpha Q s_0) b^i
  double P = 0.0;
};

inline ProjectiveSplit projective_split(const FinslerMetric& fm, const std::vector<double>& x,
                                        const std::vector<double>& y) {
  auto parts = spray_parts(fm, x, y, 0);
  ProjectiveSplit out;
  out.P = value_of(parts.P);
  for (int i = 0; i < parts.n; ++i) {
    out.alpha_part.push_back(value_of(parts.alpha_part[static_cast<std::size_t>(i)]));
    out.transverse.push_back(value_of(parts.bar[static_cast<std::size_t>(i)]) -
                             out.alpha_part[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace finsler
