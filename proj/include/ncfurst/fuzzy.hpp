#pragma once

#include "ncfurst/phase.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ncf {

/// Rational clock-and-shift parameters: omega = e(p/q), gamma ~ s/q.
struct FuzzyParams {
  int q = 2;
  int p = 1;
  int s = 1;

  int gcd_pq() const { return std::gcd(p, q); }
  bool simple() const { return gcd_pq() == 1; }
};

inline FuzzyParams make_fuzzy_params(int q, int p, int s) {
  if (q < 2) throw std::invalid_argument("fuzzy dimension q must be at least 2");
  if (p < 0 || p >= q) throw std::invalid_argument("twist numerator p must lie in [0, q)");
  if (s < 0 || s >= q) throw std::invalid_argument("rotation numerator s must lie in [0, q)");
  return {q, p, s};
}

/// e(k / q) computed from the reduced residue, so equal residues give equal bits.
inline complex root_of_unity(long long k, int q) {
  long long r = k % q;
  if (r < 0) r += q;
  if (r == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / q);
}

/// Sum_k D_k V^k on C^q, with V e_j = e_{j-1} and D_k diagonal.
///
/// Entry (i, i+k) of the matrix is D_k[i]. Shift degrees live in [0, q).
class FuzzyOperator {
public:
  explicit FuzzyOperator(int q) : q_(q) {
    if (q < 1) throw std::invalid_argument("operator dimension must be positive");
  }

  static FuzzyOperator identity(int q) { return diagonal(std::vector<complex>(q, 1.0)); }

  static FuzzyOperator diagonal(std::vector<complex> d) {
    FuzzyOperator a(static_cast<int>(d.size()));
    a.terms_[0] = std::move(d);
    return a;
  }

  static FuzzyOperator diagonal(const std::vector<double>& d) {
    return diagonal(std::vector<complex>(d.begin(), d.end()));
  }

  /// V^k.
  static FuzzyOperator shift(int q, long long k) {
    FuzzyOperator a(q);
    a.terms_[a.wrap(k)] = std::vector<complex>(q, 1.0);
    return a;
  }

  int dim() const { return q_; }
  const std::map<int, std::vector<complex>>& terms() const { return terms_; }

  /// Diagonal coefficient of V^k, created as zero if absent.
  std::vector<complex>& coeff(long long k) {
    auto [it, fresh] = terms_.try_emplace(wrap(k));
    if (fresh) it->second.assign(q_, 0.0);
    return it->second;
  }

  std::vector<complex> coeff_or_zero(long long k) const {
    auto it = terms_.find(wrap(k));
    return it == terms_.end() ? std::vector<complex>(q_, 0.0) : it->second;
  }

  FuzzyOperator& operator+=(const FuzzyOperator& b) {
    check_dim(b);
    for (auto& [k, d] : b.terms_) {
      auto& c = coeff(k);
      for (int i = 0; i < q_; ++i) c[i] += d[i];
    }
    return *this;
  }
  FuzzyOperator& operator-=(const FuzzyOperator& b) { return *this += b * complex(-1.0); }
  friend FuzzyOperator operator+(FuzzyOperator a, const FuzzyOperator& b) { return a += b; }
  friend FuzzyOperator operator-(FuzzyOperator a, const FuzzyOperator& b) { return a -= b; }

  friend FuzzyOperator operator*(FuzzyOperator a, complex z) {
    for (auto& [k, d] : a.terms_)
      for (auto& x : d) x *= z;
    return a;
  }
  friend FuzzyOperator operator*(complex z, FuzzyOperator a) { return std::move(a) * z; }

  // (D_a V^a)(D_b V^b) = D_a (V^a D_b V^-a) V^(a+b), and V^a diag(x) V^-a = diag(x_{i+a}).
  friend FuzzyOperator operator*(const FuzzyOperator& a, const FuzzyOperator& b) {
    a.check_dim(b);
    const int q = a.q_;
    FuzzyOperator out(q);
    for (auto& [ka, da] : a.terms_) {
      for (auto& [kb, db] : b.terms_) {
        auto& c = out.coeff(ka + kb);
        for (int i = 0; i < q; ++i) {
          int j = i + ka;
          if (j >= q) j -= q;
          c[i] += da[i] * db[j];
        }
      }
    }
    return out;
  }

  FuzzyOperator adjoint() const {
    FuzzyOperator out(q_);
    for (auto& [k, d] : terms_) {
      auto& c = out.coeff(-k);
      for (int i = 0; i < q_; ++i) c[i] += std::conj(d[wrap(static_cast<long long>(i) - k)]);
    }
    return out;
  }

  /// Normalized trace: mean of the degree-0 diagonal.
  complex trace() const {
    auto it = terms_.find(0);
    if (it == terms_.end()) return 0.0;
    complex s = 0.0;
    for (auto& x : it->second) s += x;
    return s / static_cast<double>(q_);
  }

  /// tau(a* a)^{1/2} = ((1/q) sum_k |D_k|^2)^{1/2}.
  double norm2() const {
    double s = 0.0;
    for (auto& [k, d] : terms_)
      for (auto& x : d) s += std::norm(x);
    return std::sqrt(s / q_);
  }

  /// sum_k max_i |D_k[i]|, an upper bound for the operator norm.
  double l1_bound() const {
    double s = 0.0;
    for (auto& [k, d] : terms_) {
      double m = 0.0;
      for (auto& x : d) m = std::max(m, std::abs(x));
      s += m;
    }
    return s;
  }

  /// Drops shift degrees whose diagonal is identically zero.
  FuzzyOperator& prune() {
    std::erase_if(terms_, [](const auto& kv) {
      return std::all_of(kv.second.begin(), kv.second.end(), [](complex x) { return x == 0.0; });
    });
    return *this;
  }

  Eigen::MatrixXcd dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(q_, q_);
    for (auto& [k, d] : terms_)
      for (int i = 0; i < q_; ++i) m(i, wrap(static_cast<long long>(i) + k)) += d[i];
    return m;
  }

private:
  int wrap(long long k) const {
    long long r = k % q_;
    return static_cast<int>(r < 0 ? r + q_ : r);
  }
  void check_dim(const FuzzyOperator& b) const {
    if (b.q_ != q_) throw std::invalid_argument("operator dimensions differ");
  }

  int q_;
  std::map<int, std::vector<complex>> terms_;
};

struct ClockShift {
  FuzzyOperator U;
  FuzzyOperator V;
};

/// U = diag(omega^j), V the cyclic shift; V U = omega U V.
inline ClockShift clock_shift(const FuzzyParams& fp) {
  std::vector<complex> u(fp.q);
  for (int j = 0; j < fp.q; ++j) u[j] = root_of_unity(static_cast<long long>(fp.p) * j, fp.q);
  return {FuzzyOperator::diagonal(std::move(u)), FuzzyOperator::shift(fp.q, 1)};
}

/// h(U) for h sampled at the q-th roots: samples[m] = h(e(m/q)).
inline FuzzyOperator function_of_u(const FuzzyParams& fp, const std::vector<complex>& samples) {
  if (static_cast<int>(samples.size()) != fp.q)
    throw std::invalid_argument("need one sample per q-th root of unity");
  std::vector<complex> d(fp.q);
  for (int j = 0; j < fp.q; ++j) d[j] = samples[(static_cast<long long>(fp.p) * j) % fp.q];
  return FuzzyOperator::diagonal(std::move(d));
}

/// W a W*; W is assumed unitary.
inline FuzzyOperator adjoint_action(const FuzzyOperator& w, const FuzzyOperator& a) {
  return w * a * w.adjoint();
}

struct ImplementReport {
  double holonomy_angle = 0.0;   // |arg c| at most pi
  double correction_sup = 0.0;   // sup |ghat - g|
  double defect_u = 0.0;         // ||W U W* - omega^s U||_2
  double defect_v = 0.0;         // ||W V W* - ghat(U) U^d V||_2
  std::vector<complex> g;        // g(omega^i), by diagonal index i
  std::vector<complex> ghat;
};

struct Implementation {
  FuzzyOperator W;
  ImplementReport report;
};

/// W = h(U) V^s with h(z) h(omega z)^{-1} = ghat(z) z^d, where g = exp(2 pi i f)
/// and ghat = g c^{-1/q} removes the holonomy c = prod_k g(omega^k) omega^{kd}.
/// f_samples[m] = f(e(m/q)).
inline Implementation implement_auto(const FuzzyParams& fp, int d, const std::vector<double>& f_samples) {
  const int q = fp.q;
  if (static_cast<int>(f_samples.size()) != q)
    throw std::invalid_argument("need one f sample per q-th root of unity");
  // Work with angles in turns; long double keeps the running sums tight.
  std::vector<long double> phi(q); // g(omega^i) omega^{id} = e(phi_i)
  std::vector<complex> g(q);
  long double total = 0.0L;
  for (int i = 0; i < q; ++i) {
    long double fi = f_samples[(static_cast<long long>(fp.p) * i) % q];
    fi -= std::floor(fi);
    long long tw = (static_cast<long long>(fp.p) * i % q) * (((d % q) + q) % q) % q;
    long double a = fi + static_cast<long double>(tw) / q;
    a -= std::floor(a);
    phi[i] = a;
    total += a;
    g[i] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(fi));
  }
  long double c_turns = total - std::floor(total);
  if (c_turns > 0.5L) c_turns -= 1.0L; // principal argument in (-1/2, 1/2]
  const long double corr = -c_turns / q;

  std::vector<complex> ghat(q);
  const complex corr_unit = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(corr));
  for (int i = 0; i < q; ++i) ghat[i] = g[i] * corr_unit;

  // h_{i+1} = h_i / (ghat_i omega^{id}), h_0 = 1.
  std::vector<complex> h(q);
  long double acc = 0.0L;
  for (int i = 0; i < q; ++i) {
    h[i] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(acc));
    acc -= phi[i] + corr;
    acc -= std::floor(acc);
  }

  FuzzyOperator w = FuzzyOperator::diagonal(h) * FuzzyOperator::shift(q, fp.s);
  Implementation out{w, {}};
  auto& r = out.report;
  r.holonomy_angle = std::abs(2.0 * std::numbers::pi * static_cast<double>(c_turns));
  r.correction_sup = 2.0 * std::sin(r.holonomy_angle / (2.0 * q));
  auto [U, V] = clock_shift(fp);
  r.defect_u = (adjoint_action(w, U) - root_of_unity(static_cast<long long>(fp.p) * fp.s, q) * U).norm2();
  std::vector<complex> udiag(q);
  for (int i = 0; i < q; ++i) udiag[i] = root_of_unity(static_cast<long long>(fp.p) * i * d, q);
  FuzzyOperator expected = FuzzyOperator::diagonal(ghat) * FuzzyOperator::diagonal(udiag) * V;
  r.defect_v = (adjoint_action(w, V) - expected).norm2();
  r.g = std::move(g);
  r.ghat = std::move(ghat);
  return out;
}

} // namespace ncf
