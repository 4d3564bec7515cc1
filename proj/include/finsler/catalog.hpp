#pragma once
// Built-in metric/1-form families used by the test corpus and the CLI.
// Every component is generated as an expression string with exact rational
// literals so evaluation stays reproducible across platforms.

#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "finsler/fields.hpp"

namespace finsler {

// Small exact fraction used only for formatting catalog parameters.
struct Frac {
  long long num = 0;
  long long den = 1;
  Frac() = default;
  Frac(long long n, long long d = 1) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("fraction with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }
  bool zero() const { return num == 0; }
  std::string str() const {
    std::ostringstream os;
    if (den == 1) {
      if (num < 0) os << "(0 - " << -num << ")";
      else os << num;
    } else {
      if (num < 0) os << "(0 - " << -num << "/" << den << ")";
      else os << num << "/" << den;
    }
    return os.str();
  }
};

namespace detail {

inline std::string sum_of_squares(int n) {
  std::ostringstream os;
  for (int i = 1; i <= n; ++i) {
    if (i > 1) os << " + ";
    os << "x" << i << "^2";
  }
  return os.str();
}

}  // namespace detail

// Flat metric: a_ij = delta_ij.
inline MetricField euclidean_metric(int n) {
  std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(n),
                                             std::vector<std::string>(static_cast<std::size_t>(n), "0"));
  for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = "1";
  return MetricField::from_strings(n, rows);
}

// Constant sectional curvature mu in projective coordinates:
// a_ij = delta_ij / (1 + (mu/4) |x|^2)^2.
inline MetricField space_form_metric(int n, Frac mu) {
  if (mu.zero()) return euclidean_metric(n);
  const Frac q(mu.num, mu.den * 4);
  std::ostringstream diag;
  diag << "1/(1 + " << q.str() << "*(" << detail::sum_of_squares(n) << "))^2";
  std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(n),
                                             std::vector<std::string>(static_cast<std::size_t>(n), "0"));
  for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = diag.str();
  return MetricField::from_strings(n, rows);
}

// b_i = c_i (constants).
inline OneFormField constant_oneform(int n, const std::vector<Frac>& c) {
  std::vector<std::string> entries;
  for (int i = 0; i < n; ++i) entries.push_back(c[static_cast<std::size_t>(i)].str());
  return OneFormField::from_strings(n, entries);
}

// b_i = sum_j M_ij x_j (linear coefficients M).
inline OneFormField linear_oneform(int n, const std::vector<std::vector<Frac>>& M) {
  std::vector<std::string> entries;
  for (int i = 0; i < n; ++i) {
    std::ostringstream os;
    bool first = true;
    for (int j = 0; j < n; ++j) {
      const Frac& m = M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (m.zero()) continue;
      if (!first) os << " + ";
      os << m.str() << "*x" << (j + 1);
      first = false;
    }
    entries.push_back(first ? std::string("0") : os.str());
  }
  return OneFormField::from_strings(n, entries);
}

namespace detail {

// Random degree-2 polynomial with coefficients k/8, k integer in [-8, 8].
inline std::string random_quadratic(int n, std::mt19937_64& rng) {
  auto coeff = [&rng]() -> Frac {
    const auto r = rng() % 17ULL;  // 0..16
    return Frac(static_cast<long long>(r) - 8, 8);
  };
  std::ostringstream os;
  os << coeff().str();
  for (int k = 1; k <= n; ++k) {
    const Frac c = coeff();
    if (c.zero()) continue;
    os << " + " << c.str() << "*x" << k;
  }
  for (int k = 1; k <= n; ++k)
    for (int l = k; l <= n; ++l) {
      const Frac c = coeff();
      if (c.zero()) continue;
      os << " + " << c.str() << "*x" << k << "*x" << l;
    }
  return os.str();
}

}  // namespace detail

// a_ij = delta_ij + eps * P_ij(x) with random symmetric quadratic P.
inline MetricField perturbed_metric(int n, std::uint64_t seed, Frac eps) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(n),
                                             std::vector<std::string>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::ostringstream os;
      if (i == j) os << "1 + ";
      os << eps.str() << "*(" << detail::random_quadratic(n, rng) << ")";
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = os.str();
      rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  return MetricField::from_strings(n, rows);
}

// b_i = eps * P_i(x) with random quadratic P_i.
inline OneFormField perturbed_oneform(int n, std::uint64_t seed, Frac eps) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> entries;
  for (int i = 0; i < n; ++i) {
    std::ostringstream os;
    os << eps.str() << "*(" << detail::random_quadratic(n, rng) << ")";
    entries.push_back(os.str());
  }
  return OneFormField::from_strings(n, entries);
}

// Constant-length Killing 1-form on the round 3-sphere patch space_form(3, 4):
// scaled dual of a Hopf vector field. Satisfies r_ij = 0, s_i = 0 and
// |b|^2 = lambda^2/4 identically.
inline OneFormField hopf_oneform(Frac lambda) {
  const std::string w = "(1 + x1^2 + x2^2 + x3^2)^2";
  const Frac half(lambda.num, lambda.den * 2);
  std::vector<std::string> entries;
  entries.push_back(lambda.str() + "*(0 - x2 - x1*x3)/" + w);
  entries.push_back(lambda.str() + "*(x1 - x2*x3)/" + w);
  entries.push_back(half.str() + "*(x1^2 + x2^2 - x3^2 - 1)/" + w);
  return OneFormField::from_strings(3, entries);
}

// --- registry for the CLI ---------------------------------------------------

struct CatalogEntry {
  std::string name;
  std::string signature;
  std::string description;
  std::vector<std::string> sample;  // formatted components of a default instantiation
};

inline std::vector<CatalogEntry> catalog_entries() {
  std::vector<CatalogEntry> out;
  auto metric_sample = [](const MetricField& m) {
    std::vector<std::string> s;
    for (int i = 0; i < m.n; ++i) {
      std::string row = "[";
      for (int j = 0; j < m.n; ++j) {
        if (j) row += ", ";
        row += m.source[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
      row += "]";
      s.push_back(row);
    }
    return s;
  };
  auto oneform_sample = [](const OneFormField& f) { return f.source; };

  out.push_back({"euclidean", "euclidean(n)", "flat metric delta_ij",
                 metric_sample(euclidean_metric(3))});
  out.push_back({"space_form", "space_form(n, mu)",
                 "constant sectional curvature mu, a_ij = delta_ij/(1 + (mu/4)|x|^2)^2",
                 metric_sample(space_form_metric(3, Frac(1)))});
  out.push_back({"perturbed_metric", "perturbed_metric(n, seed, eps)",
                 "delta_ij + eps * random symmetric quadratic polynomial",
                 metric_sample(perturbed_metric(2, 7, Frac(1, 10)))});
  out.push_back({"constant_oneform", "constant_oneform(n, c_1..c_n)", "b_i = c_i",
                 oneform_sample(constant_oneform(3, {Frac(1, 5), Frac(0), Frac(0)}))});
  out.push_back({"linear_oneform", "linear_oneform(n, M)", "b_i = M_ij x_j",
                 oneform_sample(linear_oneform(
                     3, {{Frac(0), Frac(1, 2), Frac(0)},
                         {Frac(-1, 2), Frac(0), Frac(0)},
                         {Frac(0), Frac(0), Frac(0)}}))});
  out.push_back({"perturbed_oneform", "perturbed_oneform(n, seed, eps)",
                 "b_i = eps * random quadratic polynomial",
                 oneform_sample(perturbed_oneform(3, 202, Frac(1, 20)))});
  out.push_back({"hopf_oneform", "hopf_oneform(lambda)",
                 "constant-length Killing form on space_form(3, 4); |b|^2 = lambda^2/4",
                 oneform_sample(hopf_oneform(Frac(1, 2)))});
  return out;
}

}  // namespace finsler
