#pragma once
// Finsler curvature pipeline. Everything is derived from the energy function
// F^2(x, y) by jet differentiation in a single combined (x, y) variable space:
//   fundamental tensor  g_ij = (1/2) d^2 F^2 / dy^i dy^j
//   spray               G^i = (1/4) g^il ( d^2F^2/dx^k dy^l y^k - dF^2/dx^l )
//   curvature           R^i_k = 2 dG^i/dx^k - y^j d^2G^i/dx^j dy^k
//                               + 2 G^j d^2G^i/dy^j dy^k - dG^i/dy^j dG^j/dy^k
//   Ricci               Ric = R^m_m
//   projective (Weyl)   A^i_k = R^i_k - Ric delta^i_k/(n-1),
//                       W^i_k = A^i_k - y^i (dA^m_k/dy^m)/(n+1)
// This chain is the ground-truth oracle against which all closed-form
// assemblies elsewhere in the library are checked.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/fields.hpp"
#include "finsler/jet.hpp"
#include "finsler/riemann.hpp"

namespace finsler {

// The scaling function phi(s) of an (alpha, beta)-metric F = alpha * phi(beta/alpha).
struct PhiFunction {
  enum class Kind { matsumoto, randers, custom };
  Kind kind = Kind::matsumoto;
  ExprPtr custom;      // expression in x1 = s (only for Kind::custom)
  std::string source;  // verbatim text for custom

  static PhiFunction matsumoto() { return PhiFunction{Kind::matsumoto, nullptr, ""}; }
  static PhiFunction randers() { return PhiFunction{Kind::randers, nullptr, ""}; }
  static PhiFunction custom_expr(const std::string& text) {
    PhiFunction p;
    p.kind = Kind::custom;
    p.custom = parse_expr(text, 1);
    p.source = text;
    return p;
  }
  std::string name() const {
    switch (kind) {
      case Kind::matsumoto: return "matsumoto";
      case Kind::randers: return "randers";
      default: return "custom:" + source;
    }
  }
};

template <class T>
T phi_eval(const PhiFunction& phi, const T& s) {
  switch (phi.kind) {
    case PhiFunction::Kind::matsumoto: return 1.0 / (1.0 - s);
    case PhiFunction::Kind::randers: return 1.0 + s;
    default: return eval_expr(phi.custom, std::vector<T>{s});
  }
}

struct FinslerMetric {
  MetricField metric;
  OneFormField oneform;
  PhiFunction phi = PhiFunction::matsumoto();
  int n() const { return metric.n; }
};

// --- combined (x, y) jets ----------------------------------------------------
// Variables 0..n-1 are the base coordinates x, variables n..2n-1 the fiber
// coordinates y.

inline std::vector<Jet> combined_x_jets(const std::vector<double>& x, int order) {
  const int n = static_cast<int>(x.size());
  std::vector<Jet> v;
  for (int i = 0; i < n; ++i) v.push_back(Jet::variable(i, x[static_cast<std::size_t>(i)], 2 * n, order));
  return v;
}

inline std::vector<Jet> combined_y_jets(const std::vector<double>& y, int order) {
  const int n = static_cast<int>(y.size());
  std::vector<Jet> v;
  for (int i = 0; i < n; ++i)
    v.push_back(Jet::variable(n + i, y[static_cast<std::size_t>(i)], 2 * n, order));
  return v;
}

// alpha^2 = a_ij(x) y^i y^j as a combined jet.
inline Jet alpha2_jet(const MetricField& metric, const std::vector<double>& x,
                      const std::vector<double>& y, int order) {
  const int n = metric.n;
  auto xv = combined_x_jets(x, order);
  auto yv = combined_y_jets(y, order);
  Jet a2 = Jet::constant(0.0, 2 * n, order);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a2 += eval_expr(metric.comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], xv) *
            yv[static_cast<std::size_t>(i)] * yv[static_cast<std::size_t>(j)];
  return a2;
}

inline Jet beta_jet(const OneFormField& oneform, const std::vector<double>& x,
                    const std::vector<double>& y, int order) {
  const int n = oneform.n;
  auto xv = combined_x_jets(x, order);
  auto yv = combined_y_jets(y, order);
  Jet b = Jet::constant(0.0, 2 * n, order);
  for (int i = 0; i < n; ++i)
    b += eval_expr(oneform.comp[static_cast<std::size_t>(i)], xv) * yv[static_cast<std::size_t>(i)];
  return b;
}

inline Jet energy_jet(const FinslerMetric& fm, const std::vector<double>& x,
                      const std::vector<double>& y, int order) {
  Jet a2 = alpha2_jet(fm.metric, x, y, order);
  Jet alpha = sqrt(a2);
  Jet s = beta_jet(fm.oneform, x, y, order) / alpha;
  Jet phi = phi_eval(fm.phi, s);
  return a2 * phi * phi;
}

// --- curvature from an arbitrary spray ---------------------------------------

// Spray coefficients G^i as combined jets (order >= 2) -> R^i_k as combined
// jets of order K-2.
inline std::vector<std::vector<Jet>> riemann_from_spray(const std::vector<Jet>& G,
                                                        const std::vector<double>& y) {
  const int n = static_cast<int>(G.size());
  const int K = G[0].K();
  if (K < 2) throw std::invalid_argument("riemann_from_spray needs spray jets of order >= 2");
  const int Kr = K - 2;
  auto yv = combined_y_jets(y, Kr);
  std::vector<std::vector<Jet>> R(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<Jet> dGx, dGy;  // dG^i/dx^j (order K-1), dG^i/dy^j (order K-1)
    for (int j = 0; j < n; ++j) {
      dGx.push_back(G[static_cast<std::size_t>(i)].derive(j));
      dGy.push_back(G[static_cast<std::size_t>(i)].derive(n + j));
    }
    for (int k = 0; k < n; ++k) {
      Jet acc = 2.0 * dGx[static_cast<std::size_t>(k)].truncate(Kr);
      for (int j = 0; j < n; ++j) {
        acc -= yv[static_cast<std::size_t>(j)] * dGx[static_cast<std::size_t>(j)].derive(n + k);
        acc += 2.0 * G[static_cast<std::size_t>(j)].truncate(Kr) *
               dGy[static_cast<std::size_t>(j)].derive(n + k);
        acc -= dGy[static_cast<std::size_t>(j)].truncate(Kr) *
               G[static_cast<std::size_t>(j)].derive(n + k).truncate(Kr);
      }
      R[static_cast<std::size_t>(i)].push_back(acc);
    }
  }
  return R;
}

struct ProjectiveCurvature {
  int n = 0;
  std::vector<std::vector<double>> R;  // R^i_k
  double ric = 0.0;
  std::vector<std::vector<double>> A;  // traceless part
  std::vector<std::vector<double>> W;  // projective (Weyl-type) curvature
};

// Needs R jets of order >= 1 (one more y-derivative feeds the trace term).
inline ProjectiveCurvature projective_curvature(const std::vector<std::vector<Jet>>& Rjets,
                                                const std::vector<double>& y) {
  const int n = static_cast<int>(Rjets.size());
  if (n < 3) throw std::invalid_argument("projective curvature needs dimension >= 3");
  if (Rjets[0][0].K() < 1)
    throw std::invalid_argument("projective curvature needs curvature jets of order >= 1");
  ProjectiveCurvature out;
  out.n = n;
  auto idx = [](int i) { return static_cast<std::size_t>(i); };
  out.R.assign(idx(n), std::vector<double>(idx(n)));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) out.R[idx(i)][idx(k)] = value_of(Rjets[idx(i)][idx(k)]);
  out.ric = 0.0;
  for (int m = 0; m < n; ++m) out.ric += out.R[idx(m)][idx(m)];

  // A^i_k jets, then the y-trace of its fiber derivative
  Jet ric_jet = Rjets[0][0] * 0.0;
  for (int m = 0; m < n; ++m) ric_jet += Rjets[idx(m)][idx(m)];
  out.A.assign(idx(n), std::vector<double>(idx(n)));
  out.W.assign(idx(n), std::vector<double>(idx(n)));
  std::vector<double> traceA(idx(n), 0.0);  // dA^m_k/dy^m
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) {
      Jet Amk = Rjets[idx(m)][idx(k)];
      if (m == k) Amk -= ric_jet * (1.0 / (n - 1));
      traceA[idx(k)] += value_of(Amk.derive(n + m));
    }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      out.A[idx(i)][idx(k)] = out.R[idx(i)][idx(k)] - (i == k ? out.ric / (n - 1) : 0.0);
      out.W[idx(i)][idx(k)] =
          out.A[idx(i)][idx(k)] - traceA[idx(k)] * y[idx(i)] / (n + 1);
    }
  return out;
}

// --- spray from the energy function ------------------------------------------

// G^i as combined jets of order K-2 from an energy jet of order K.
inline std::vector<Jet> spray_from_energy(const Jet& F2, const std::vector<double>& y) {
  const int n2 = F2.n();
  const int n = n2 / 2;
  const int K = F2.K();
  if (K < 2) throw std::invalid_argument("spray_from_energy needs an energy jet of order >= 2");
  const int Kg = K - 2;
  auto idx = [](int i) { return static_cast<std::size_t>(i); };
  std::vector<std::vector<Jet>> g(idx(n));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      g[idx(i)].push_back(F2.derive(n + i).derive(n + l) * 0.5);
  auto ginv = invert_matrix(g);
  auto yv = combined_y_jets(y, Kg);
  std::vector<Jet> term(idx(n), Jet::constant(0.0, n2, Kg));
  for (int l = 0; l < n; ++l) {
    Jet t = -F2.derive(l).truncate(Kg);
    for (int k = 0; k < n; ++k) t += yv[idx(k)] * F2.derive(k).derive(n + l);
    term[idx(l)] = t;
  }
  std::vector<Jet> G(idx(n), Jet::constant(0.0, n2, Kg));
  for (int i = 0; i < n; ++i) {
    Jet acc = Jet::constant(0.0, n2, Kg);
    for (int l = 0; l < n; ++l) acc += ginv[idx(i)][idx(l)] * term[idx(l)];
    G[idx(i)] = acc * 0.25;
  }
  return G;
}

inline std::vector<Jet> spray_jets(const FinslerMetric& fm, const std::vector<double>& x,
                                   const std::vector<double>& y, int order) {
  return spray_from_energy(energy_jet(fm, x, y, order + 2), y);
}

inline std::vector<double> spray_direct(const FinslerMetric& fm, const std::vector<double>& x,
                                        const std::vector<double>& y) {
  auto G = spray_jets(fm, x, y, 0);
  std::vector<double> out;
  for (const Jet& j : G) out.push_back(value_of(j));
  return out;
}

// Projective change G -> G + P y as combined jets (P of matching order).
inline std::vector<Jet> projective_shift(const std::vector<Jet>& G, const Jet& P,
                                         const std::vector<double>& y) {
  const int n = static_cast<int>(G.size());
  auto yv = combined_y_jets(y, G[0].K());
  std::vector<Jet> out;
  for (int i = 0; i < n; ++i)
    out.push_back(G[static_cast<std::size_t>(i)] +
                  P.truncate(G[0].K()) * yv[static_cast<std::size_t>(i)]);
  return out;
}

// --- value-level API ----------------------------------------------------------

inline std::vector<std::vector<double>> fundamental_tensor(const FinslerMetric& fm,
                                                           const std::vector<double>& x,
                                                           const std::vector<double>& y) {
  Jet F2 = energy_jet(fm, x, y, 2);
  const int n = fm.n();
  std::vector<std::vector<double>> g(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          0.5 * value_of(F2.derive(n + i).derive(n + j));
  return g;
}

struct CurvatureReport {
  int n = 0;
  double F2 = 0.0;                      // energy value
  std::vector<double> dF2_dy;           // fiber gradient of F^2
  std::vector<double> G;                // spray values
  std::vector<std::vector<double>> g;   // fundamental tensor
  std::vector<std::vector<double>> R;   // curvature values
  double ric = 0.0;
  std::vector<std::vector<double>> A;
  std::vector<std::vector<double>> W;
  double flag_curvature = 0.0;          // Ric / ((n-1) F^2)
  double flag_residual = 0.0;           // relative deviation from scalar flag curvature
  double ry_residual = 0.0;             // max |R^i_k y^k| / scale (identically 0 in theory)
  double weyl_norm = 0.0;               // max |W^i_k| / scale
  double curvature_scale = 1.0;         // max(1, max |R^i_k|)
};

inline CurvatureReport curvature_report(const FinslerMetric& fm, const std::vector<double>& x,
                                        const std::vector<double>& y) {
  const int n = fm.n();
  auto idx = [](int i) { return static_cast<std::size_t>(i); };
  Jet F2 = energy_jet(fm, x, y, 5);
  auto G = spray_from_energy(F2, y);          // order 3
  auto Rjets = riemann_from_spray(G, y);      // order 1
  auto proj = projective_curvature(Rjets, y);

  CurvatureReport rep;
  rep.n = n;
  rep.F2 = value_of(F2);
  for (int k = 0; k < n; ++k) rep.dF2_dy.push_back(value_of(F2.derive(n + k)));
  for (int i = 0; i < n; ++i) rep.G.push_back(value_of(G[idx(i)]));
  rep.g.assign(idx(n), std::vector<double>(idx(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      rep.g[idx(i)][idx(j)] = 0.5 * value_of(F2.derive(n + i).derive(n + j));
  rep.R = proj.R;
  rep.ric = proj.ric;
  rep.A = proj.A;
  rep.W = proj.W;

  double rmax = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) rmax = std::max(rmax, std::fabs(rep.R[idx(i)][idx(k)]));
  rep.curvature_scale = std::max(1.0, rmax);

  rep.flag_curvature = rep.ric / ((n - 1) * rep.F2);
  double fres = 0.0, wmax = 0.0, rymax = 0.0;
  for (int i = 0; i < n; ++i) {
    double ry = 0.0;
    for (int k = 0; k < n; ++k) {
      ry += rep.R[idx(i)][idx(k)] * y[idx(k)];
      const double model = rep.flag_curvature *
                           (rep.F2 * (i == k ? 1.0 : 0.0) - 0.5 * rep.dF2_dy[idx(k)] * y[idx(i)]);
      fres = std::max(fres, std::fabs(rep.R[idx(i)][idx(k)] - model));
      wmax = std::max(wmax, std::fabs(rep.W[idx(i)][idx(k)]));
    }
    rymax = std::max(rymax, std::fabs(ry));
  }
  rep.flag_residual = fres / rep.curvature_scale;
  rep.ry_residual = rymax / rep.curvature_scale;
  rep.weyl_norm = wmax / rep.curvature_scale;
  return rep;
}

// Scalar-flag-curvature diagnosis: residual of the best isotropic model.
inline double scalar_flag_residual(const FinslerMetric& fm, const std::vector<double>& x,
                                   const std::vector<double>& y) {
  return curvature_report(fm, x, y).flag_residual;
}

}  // namespace finsler
