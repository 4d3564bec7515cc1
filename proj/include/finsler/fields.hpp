#pragma once
// Expression-defined Riemannian metric a_ij(x) and 1-form b_i(x) on a single
// coordinate chart, plus point evaluation into jets.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/jet.hpp"

namespace finsler {

struct MetricField {
  int n = 0;
  std::vector<std::vector<std::string>> source;  // expression strings, kept verbatim
  std::vector<std::vector<ExprPtr>> comp;

  static MetricField from_strings(int n, std::vector<std::vector<std::string>> rows) {
    if (static_cast<int>(rows.size()) != n) throw std::invalid_argument("metric row count != n");
    MetricField m;
    m.n = n;
    m.source = std::move(rows);
    m.comp.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(m.source[static_cast<std::size_t>(i)].size()) != n)
        throw std::invalid_argument("metric column count != n");
      for (int j = 0; j < n; ++j)
        m.comp[static_cast<std::size_t>(i)].push_back(
            parse_expr(m.source[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], n));
    }
    return m;
  }

  // a_ij as jets of order K about x.
  std::vector<std::vector<Jet>> jets(const std::vector<double>& x, int K) const {
    std::vector<Jet> vars;
    for (int i = 0; i < n; ++i) vars.push_back(Jet::variable(i, x[static_cast<std::size_t>(i)], n, K));
    std::vector<std::vector<Jet>> a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a[static_cast<std::size_t>(i)].push_back(
            eval_expr(comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], vars));
    return a;
  }

  std::vector<std::vector<double>> values(const std::vector<double>& x) const {
    std::vector<std::vector<double>> a(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            eval_expr(comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], x);
    return a;
  }
};

struct OneFormField {
  int n = 0;
  std::vector<std::string> source;
  std::vector<ExprPtr> comp;

  static OneFormField from_strings(int n, std::vector<std::string> entries) {
    if (static_cast<int>(entries.size()) != n) throw std::invalid_argument("1-form size != n");
    OneFormField f;
    f.n = n;
    f.source = std::move(entries);
    for (int i = 0; i < n; ++i)
      f.comp.push_back(parse_expr(f.source[static_cast<std::size_t>(i)], n));
    return f;
  }

  static OneFormField zero(int n) {
    return from_strings(n, std::vector<std::string>(static_cast<std::size_t>(n), "0"));
  }

  std::vector<Jet> jets(const std::vector<double>& x, int K) const {
    std::vector<Jet> vars;
    for (int i = 0; i < n; ++i) vars.push_back(Jet::variable(i, x[static_cast<std::size_t>(i)], n, K));
    std::vector<Jet> b;
    for (int i = 0; i < n; ++i) b.push_back(eval_expr(comp[static_cast<std::size_t>(i)], vars));
    return b;
  }

  std::vector<double> values(const std::vector<double>& x) const {
    std::vector<double> b;
    for (int i = 0; i < n; ++i) b.push_back(eval_expr(comp[static_cast<std::size_t>(i)], x));
    return b;
  }
};

// Symmetric positive-definite check by Cholesky; throws on violation so a
// bad metric cannot silently poison downstream curvature.
inline void check_positive_definite(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i][j];
      for (std::size_t k = 0; k < j; ++k) sum -= L[i][k] * L[j][k];
      if (i == j) {
        if (sum <= 0.0) throw std::domain_error("metric is not positive definite at probe point");
        L[i][i] = std::sqrt(sum);
      } else {
        L[i][j] = sum / L[j][j];
      }
    }
  }
}

inline void check_metric_symmetry(const MetricField& m, const std::vector<double>& x,
                                  double tol = 1e-12) {
  auto a = m.values(x);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < i; ++j) {
      const double d = std::fabs(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                 a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
      if (d > tol) throw std::domain_error("metric is not symmetric at probe point");
    }
}

}  // namespace finsler
