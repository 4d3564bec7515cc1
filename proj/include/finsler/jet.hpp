#pragma once
// Truncated multivariate Taylor ("jet") arithmetic. A Jet stores the Taylor
// coefficients of a scalar function about a base point, truncated at total
// degree K, over n variables. All derivative extraction throughout the
// library funnels through this type, so curvature code never hand-codes a
// difference quotient.
//
// Storage is dense over the full degree-<=K simplex in graded
// (degree-major, lexicographic within degree) order; index 0 is the zero
// multi-index, so c[0] is the value of the represented function.

#include <array>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace finsler {

inline constexpr int kMaxVars = 8;
inline constexpr int kMaxOrder = 5;

// Exponent vector; entries past the active dimension stay zero.
using MultiIndex = std::array<std::uint8_t, kMaxVars>;

inline MultiIndex make_index(std::initializer_list<int> exps) {
  MultiIndex m{};
  int i = 0;
  for (int e : exps) {
    if (i >= kMaxVars) throw std::invalid_argument("multi-index too long");
    if (e < 0 || e > 255) throw std::invalid_argument("bad exponent");
    m[static_cast<std::size_t>(i++)] = static_cast<std::uint8_t>(e);
  }
  return m;
}

namespace detail {
inline std::uint64_t pack_index(const MultiIndex& m) {
  std::uint64_t k = 0;
  for (int i = 0; i < kMaxVars; ++i) k |= std::uint64_t(m[static_cast<std::size_t>(i)]) << (8 * i);
  return k;
}
}  // namespace detail

// Basis of all multi-indices with |m| <= K in n variables, plus the
// multiplication table used by the Leibniz convolution. Instances are
// interned per (n, K) and immutable once built, so Jets share a pointer.
class SimplexBasis {
 public:
  struct ConvPair {
    std::int32_t other;   // right-hand basis index
    std::int32_t target;  // basis index of the exponent sum
  };

  static const SimplexBasis& get(int n, int K) {
    if (n < 1 || n > kMaxVars) throw std::invalid_argument("jet dimension out of range");
    if (K < 0 || K > kMaxOrder) throw std::invalid_argument("jet order out of range");
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<SimplexBasis>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = registry[{n, K}];
    if (!slot) slot.reset(new SimplexBasis(n, K));
    return *slot;
  }

  int n() const { return n_; }
  int K() const { return K_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const MultiIndex& exponents(int i) const { return exps_[static_cast<std::size_t>(i)]; }
  int degree(int i) const { return deg_[static_cast<std::size_t>(i)]; }

  // Index of a multi-index, or -1 when it lies outside the truncation.
  int index_of(const MultiIndex& m) const {
    auto it = lookup_.find(detail::pack_index(m));
    return it == lookup_.end() ? -1 : it->second;
  }

  // All (j, i+j) with deg(i) + deg(j) <= K, for a fixed left factor i.
  const std::vector<ConvPair>& conv(int i) const { return conv_[static_cast<std::size_t>(i)]; }

 private:
  SimplexBasis(int n, int K) : n_(n), K_(K) {
    MultiIndex m{};
    emit_by_degree(m, 0);
    conv_.resize(exps_.size());
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      const int di = deg_[i];
      for (std::size_t j = 0; j < exps_.size(); ++j) {
        if (di + deg_[j] > K_) continue;
        MultiIndex sum{};
        for (int v = 0; v < n_; ++v)
          sum[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(
              exps_[i][static_cast<std::size_t>(v)] + exps_[j][static_cast<std::size_t>(v)]);
        conv_[i].push_back({static_cast<std::int32_t>(j),
                            static_cast<std::int32_t>(index_of(sum))});
      }
    }
  }

  void emit_by_degree(MultiIndex& m, int /*unused*/) {
    for (int d = 0; d <= K_; ++d) emit_degree(m, 0, d);
  }
  void emit_degree(MultiIndex& m, int pos, int remaining) {
    if (pos == n_ - 1) {
      m[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(remaining);
      lookup_[detail::pack_index(m)] = static_cast<int>(exps_.size());
      exps_.push_back(m);
      int d = 0;
      for (int v = 0; v < n_; ++v) d += m[static_cast<std::size_t>(v)];
      deg_.push_back(d);
      m[static_cast<std::size_t>(pos)] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      m[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(e);
      emit_degree(m, pos + 1, remaining - e);
    }
    m[static_cast<std::size_t>(pos)] = 0;
  }

  int n_, K_;
  std::vector<MultiIndex> exps_;
  std::vector<int> deg_;
  std::vector<std::vector<ConvPair>> conv_;
  std::map<std::uint64_t, int> lookup_;
};

class Jet {
 public:
  Jet() : basis_(nullptr) {}

  static Jet constant(double v, int n, int K) {
    Jet j(&SimplexBasis::get(n, K));
    j.c_[0] = v;
    return j;
  }

  // Jet of the i-th coordinate function about the point where it equals
  // `value`: constant term `value`, unit linear term, nothing else.
  static Jet variable(int i, double value, int n, int K) {
    if (i < 0 || i >= n) throw std::out_of_range("seed index out of range");
    Jet j(&SimplexBasis::get(n, K));
    j.c_[0] = value;
    if (K >= 1) {
      MultiIndex e{};
      e[static_cast<std::size_t>(i)] = 1;
      j.c_[static_cast<std::size_t>(j.basis_->index_of(e))] = 1.0;
    }
    return j;
  }

  bool valid() const { return basis_ != nullptr; }
  int n() const { return basis_->n(); }
  int K() const { return basis_->K(); }
  double value() const { return c_[0]; }

  // Largest absolute Taylor coefficient (a cheap whole-jet magnitude).
  double max_norm() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::fabs(v));
    return m;
  }

  // Raw Taylor coefficient at m (0 when outside the truncation's support).
  double coeff(const MultiIndex& m) const {
    const int i = basis_->index_of(m);
    return i < 0 ? 0.0 : c_[static_cast<std::size_t>(i)];
  }
  double coeff(std::initializer_list<int> exps) const { return coeff(make_index(exps)); }

  // Mixed partial derivative: Taylor coefficient times the factorial weight.
  double partial(const MultiIndex& m) const {
    const int i = basis_->index_of(m);
    if (i < 0) throw std::out_of_range("partial order exceeds jet order");
    double f = 1.0;
    for (int v = 0; v < basis_->n(); ++v)
      for (int k = 2; k <= m[static_cast<std::size_t>(v)]; ++k) f *= k;
    return c_[static_cast<std::size_t>(i)] * f;
  }
  double partial(std::initializer_list<int> exps) const { return partial(make_index(exps)); }

  // Jet (order K-1) of the partial derivative with respect to variable i.
  Jet derive(int i) const {
    if (i < 0 || i >= basis_->n()) throw std::out_of_range("derive index out of range");
    if (basis_->K() == 0) throw std::logic_error("cannot derive an order-0 jet");
    Jet out(&SimplexBasis::get(basis_->n(), basis_->K() - 1));
    const auto& ob = *out.basis_;
    for (int t = 0; t < ob.size(); ++t) {
      MultiIndex m = ob.exponents(t);
      m[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(m[static_cast<std::size_t>(i)] + 1);
      const int src = basis_->index_of(m);
      out.c_[static_cast<std::size_t>(t)] =
          c_[static_cast<std::size_t>(src)] * double(m[static_cast<std::size_t>(i)]);
    }
    return out;
  }

  Jet truncate(int K2) const {
    if (K2 >= basis_->K()) return *this;
    Jet out(&SimplexBasis::get(basis_->n(), K2));
    const auto& ob = *out.basis_;
    for (int t = 0; t < ob.size(); ++t)
      out.c_[static_cast<std::size_t>(t)] =
          c_[static_cast<std::size_t>(basis_->index_of(ob.exponents(t)))];
    return out;
  }

  Jet operator-() const {
    Jet out = *this;
    for (double& v : out.c_) v = -v;
    return out;
  }

  Jet& operator+=(const Jet& o) {
    check_shape(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_shape(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator+=(double v) {
    c_[0] += v;
    return *this;
  }
  Jet& operator-=(double v) {
    c_[0] -= v;
    return *this;
  }
  Jet& operator*=(double v) {
    for (double& x : c_) x *= v;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b) { return (-b) += a; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a *= (1.0 / b); }
  friend Jet operator/(double a, const Jet& b) { return b.recip() *= a; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_shape(b);
    Jet out(a.basis_);
    const auto& basis = *a.basis_;
    for (int i = 0; i < basis.size(); ++i) {
      const double ai = a.c_[static_cast<std::size_t>(i)];
      if (ai == 0.0) continue;
      for (const auto& p : basis.conv(i))
        out.c_[static_cast<std::size_t>(p.target)] += ai * b.c_[static_cast<std::size_t>(p.other)];
    }
    return out;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.recip(); }

  // Composition with a univariate power series about this jet's value:
  // result = sum_k series[k] * (this - value)^k, truncated at K (Horner).
  Jet compose(const std::vector<double>& series) const {
    Jet d = *this;
    d.c_[0] = 0.0;
    Jet acc = Jet::constant(series.empty() ? 0.0 : series.back(), n(), K());
    for (int k = static_cast<int>(series.size()) - 2; k >= 0; --k) {
      acc = acc * d;
      acc.c_[0] += series[static_cast<std::size_t>(k)];
    }
    return acc;
  }

  Jet recip() const {
    const double a0 = c_[0];
    if (a0 == 0.0) throw std::domain_error("reciprocal of a jet with zero value");
    std::vector<double> s(static_cast<std::size_t>(K()) + 1);
    double p = 1.0 / a0;
    for (int k = 0; k <= K(); ++k) {
      s[static_cast<std::size_t>(k)] = p;
      p *= -1.0 / a0;
    }
    return compose(s);
  }

  Jet pow_int(int e) const {
    if (e < 0) return recip().pow_int(-e);
    Jet acc = Jet::constant(1.0, n(), K());
    Jet base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  friend Jet sqrt(const Jet& a) {
    const double a0 = a.c_[0];
    if (a0 <= 0.0) throw std::domain_error("sqrt of a jet with non-positive value");
    std::vector<double> s(static_cast<std::size_t>(a.K()) + 1);
    // binom(1/2, k) * a0^(1/2 - k)
    double coef = std::sqrt(a0);
    s[0] = coef;
    for (int k = 1; k <= a.K(); ++k) {
      coef *= (0.5 - (k - 1)) / (double(k) * a0);
      s[static_cast<std::size_t>(k)] = coef;
    }
    return a.compose(s);
  }

  friend Jet exp(const Jet& a) {
    std::vector<double> s(static_cast<std::size_t>(a.K()) + 1);
    double coef = std::exp(a.c_[0]);
    for (int k = 0; k <= a.K(); ++k) {
      s[static_cast<std::size_t>(k)] = coef;
      coef /= double(k + 1);
    }
    return a.compose(s);
  }

  friend Jet log(const Jet& a) {
    const double a0 = a.c_[0];
    if (a0 <= 0.0) throw std::domain_error("log of a jet with non-positive value");
    std::vector<double> s(static_cast<std::size_t>(a.K()) + 1);
    s[0] = std::log(a0);
    double p = 1.0 / a0;
    for (int k = 1; k <= a.K(); ++k) {
      s[static_cast<std::size_t>(k)] = ((k % 2) ? p : -p) / double(k);
      p /= a0;
    }
    return a.compose(s);
  }

  friend Jet sin(const Jet& a) { return a.trig(true); }
  friend Jet cos(const Jet& a) { return a.trig(false); }

  // a^(p/q) for rational exponents via exp(log), integer fast path.
  friend Jet pow_rational(const Jet& a, long long p, long long q) {
    if (q == 0) throw std::invalid_argument("zero exponent denominator");
    if (q < 0) { p = -p; q = -q; }
    if (p % q == 0) return a.pow_int(static_cast<int>(p / q));
    return exp(log(a) * (double(p) / double(q)));
  }

 private:
  explicit Jet(const SimplexBasis* b) : basis_(b), c_(static_cast<std::size_t>(b->size()), 0.0) {}

  void check_shape(const Jet& o) const {
    if (basis_ != o.basis_) throw std::invalid_argument("jet shape mismatch");
  }

  Jet trig(bool is_sin) const {
    const double s0 = std::sin(c_[0]), c0 = std::cos(c_[0]);
    std::vector<double> s(static_cast<std::size_t>(K()) + 1);
    double fact = 1.0;
    for (int k = 0; k <= K(); ++k) {
      if (k > 0) fact *= k;
      const double cycle[4] = {s0, c0, -s0, -c0};
      s[static_cast<std::size_t>(k)] = cycle[(k + (is_sin ? 0 : 1)) % 4] / fact;
    }
    return compose(s);
  }

  const SimplexBasis* basis_;
  std::vector<double> c_;
};

// Convenience overloads so generic field formulas can be instantiated with
// T = double as well as T = Jet.
inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace finsler
