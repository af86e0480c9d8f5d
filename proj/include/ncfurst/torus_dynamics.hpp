#pragma once

#include "ncfurst/phase.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ncf {

/// Additive coordinates of (e(t1), e(t2)), reduced into [0, 1).
struct TorusPoint {
  double t1 = 0.0;
  double t2 = 0.0;
};

inline double mod1(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

/// h(t1, t2) = (t1 + gamma, t2 + f(t1) + d t1). f is given by samples at j / M
/// with linear interpolation; no samples means f = 0.
struct SkewProduct {
  double gamma = 0.0;
  int d = 0;
  std::vector<double> f;

  double f_at(double t) const {
    if (f.empty()) return 0.0;
    const std::size_t m = f.size();
    double x = mod1(t) * static_cast<double>(m);
    auto j = static_cast<std::size_t>(x);
    if (j >= m) j = m - 1;
    double w = x - static_cast<double>(j);
    return f[j] * (1.0 - w) + f[(j + 1) % m] * w;
  }
  double cocycle(double t1) const { return f_at(t1) + d * t1; }
};

inline TorusPoint step(const SkewProduct& h, TorusPoint p) {
  return {mod1(p.t1 + h.gamma), mod1(p.t2 + h.cocycle(p.t1))};
}

inline TorusPoint inverse_step(const SkewProduct& h, TorusPoint p) {
  double t1 = mod1(p.t1 - h.gamma);
  return {t1, mod1(p.t2 - h.cocycle(t1))};
}

namespace detail {

/// Orbit walker: t1 is recomputed from the start to avoid drift, t2 is a
/// compensated running sum reduced mod 1.
class OrbitWalker {
public:
  OrbitWalker(const SkewProduct& h, TorusPoint start, bool backward)
      : h_(h), t10_(start.t1), s_(start.t2), back_(backward) {}

  TorusPoint point() const { return {t1_at(k_), mod1(static_cast<double>(s_))}; }

  void advance() {
    long double inc;
    if (back_) inc = -static_cast<long double>(h_.cocycle(t1_at(k_ + 1)));
    else inc = h_.cocycle(t1_at(k_));
    long double y = inc - c_;
    long double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t - std::floor(t);
    ++k_;
  }

private:
  double t1_at(long long k) const {
    long double g = static_cast<long double>(h_.gamma) * static_cast<long double>(back_ ? -k : k);
    long double t = t10_ + (g - std::floor(g));
    return static_cast<double>(t - std::floor(t));
  }

  const SkewProduct& h_;
  long double t10_;
  long double s_;
  long double c_ = 0.0L;
  long long k_ = 0;
  bool back_;
};

} // namespace detail

/// (1/N) sum_{k<N} e(m t1(k) + n t2(k)) along the orbit of h (or of h^{-1}).
inline complex birkhoff_character_avg(const SkewProduct& h, int m, int n, TorusPoint start, long long count,
                                      bool backward = false) {
  if (count < 1) throw std::invalid_argument("need N >= 1");
  if (m == 0 && n == 0) return 1.0;
  detail::OrbitWalker w(h, start, backward);
  long double re = 0.0L, im = 0.0L;
  for (long long k = 0; k < count; ++k) {
    TorusPoint p = w.point();
    double a = mod1(static_cast<double>(m) * p.t1 + static_cast<double>(n) * p.t2);
    re += std::cos(2.0 * std::numbers::pi * a);
    im += std::sin(2.0 * std::numbers::pi * a);
    if (k + 1 < count) w.advance();
  }
  return {static_cast<double>(re / count), static_cast<double>(im / count)};
}

/// h^count(start) using the same compensated walk as the averages.
inline TorusPoint iterate(const SkewProduct& h, TorusPoint start, long long count) {
  detail::OrbitWalker w(h, start, count < 0);
  for (long long k = 0; k < std::llabs(count); ++k) w.advance();
  return w.point();
}

/// Fraction of the g x g grid cells visited by the first N orbit points.
inline double minimality_probe(const SkewProduct& h, TorusPoint start, long long count, int g) {
  if (g < 1) throw std::invalid_argument("grid size must be positive");
  if (count <= 0) return 0.0;
  std::vector<char> seen(static_cast<std::size_t>(g) * g, 0);
  long long hit = 0;
  detail::OrbitWalker w(h, start, false);
  for (long long k = 0; k < count; ++k) {
    TorusPoint p = w.point();
    int i = std::min(g - 1, static_cast<int>(p.t1 * g));
    int j = std::min(g - 1, static_cast<int>(p.t2 * g));
    char& c = seen[static_cast<std::size_t>(i) * g + j];
    if (!c) c = 1, ++hit;
    if (hit == static_cast<long long>(g) * g) break;
    if (k + 1 < count) w.advance();
  }
  return static_cast<double>(hit) / (static_cast<double>(g) * g);
}

struct CoboundaryReport {
  int K = 0;
  complex mean_obstruction = 0.0;   // phi_hat(0)
  bool obstructed = false;          // |phi_hat(0)| above tolerance
  std::vector<complex> psi_hat;     // index k + K; psi_hat(0) = 0
  double min_divisor = 0.0;         // min |e(k theta) - 1| over 0 < |k| <= K
  std::vector<int> small_divisors;  // k with |divisor| < 1e-12; psi_hat(k) left at 0
  std::vector<double> partial_norms; // L2 norm of psi truncated to |k| <= j, j = 1..K

  complex psi(int k) const { return psi_hat.at(k + K); }
};

inline constexpr double kDivisorGuard = 1e-12;

/// Solves psi(t + theta) - psi(t) = phi(t) coefficientwise; phi_hat has 2K+1
/// entries indexed by k + K.
inline CoboundaryReport coboundary_solve(double theta, const std::vector<complex>& phi_hat, double tol = 1e-12) {
  if (phi_hat.size() % 2 == 0) throw std::invalid_argument("coefficient list must have odd length 2K+1");
  CoboundaryReport r;
  r.K = static_cast<int>(phi_hat.size() / 2);
  r.psi_hat.assign(phi_hat.size(), 0.0);
  r.mean_obstruction = phi_hat[r.K];
  r.obstructed = std::abs(r.mean_obstruction) > tol;
  r.min_divisor = r.K ? std::numeric_limits<double>::infinity() : 0.0;
  for (int k = -r.K; k <= r.K; ++k) {
    if (k == 0) continue;
    double a = mod1(static_cast<double>(static_cast<long double>(k) * theta));
    complex div = std::polar(1.0, 2.0 * std::numbers::pi * a) - 1.0;
    r.min_divisor = std::min(r.min_divisor, std::abs(div));
    if (std::abs(div) < kDivisorGuard) {
      r.small_divisors.push_back(k);
      continue;
    }
    r.psi_hat[k + r.K] = phi_hat[k + r.K] / div;
  }
  double acc = 0.0;
  for (int j = 1; j <= r.K; ++j) {
    acc += std::norm(r.psi_hat[j + r.K]) + std::norm(r.psi_hat[-j + r.K]);
    r.partial_norms.push_back(std::sqrt(acc));
  }
  return r;
}

} // namespace ncf
