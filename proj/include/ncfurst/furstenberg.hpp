#pragma once

#include "ncfurst/circle.hpp"
#include "ncfurst/element.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace ncf {

/// f constant, given exactly as an angle p + q theta + r gamma.
struct ConstantF {
  Phase rho;
};

/// f(t) sampled at t = j / G, G a power of two.
struct SampledF {
  std::vector<double> values;
};

using FurstenbergF = std::variant<ConstantF, SampledF>;

/// The automorphism of A_theta with u -> e^{2 pi i gamma} u and
/// v -> exp(2 pi i f(u)) u^d v.
///
/// gamma is an exact angle in the symbols theta and gamma of the ambient
/// algebra; `values` gives those symbols numerically and is required for
/// sampled f.
struct FurstenbergAuto {
  Phase gamma = Phase::gamma();
  int d = 0;
  FurstenbergF f = ConstantF{};
  std::optional<Numerics> values;

  bool is_constant() const { return std::holds_alternative<ConstantF>(f); }
  const Phase& rho() const { return std::get<ConstantF>(f).rho; }
  const std::vector<double>& samples() const { return std::get<SampledF>(f).values; }

  const Numerics& numerics() const {
    if (!values) throw std::domain_error("sampled Furstenberg map needs numeric theta and gamma");
    return *values;
  }
  double angle(const Phase& p) const { return p.angle(numerics()); }
};

inline FurstenbergAuto make_constant_auto(Phase gamma, int d, Phase rho,
                                          std::optional<Numerics> values = std::nullopt) {
  return {gamma, d, ConstantF{rho}, values};
}

inline FurstenbergAuto make_sampled_auto(Phase gamma, int d, std::vector<double> f, Numerics values) {
  if (!is_power_of_two(f.size())) throw std::invalid_argument("f grid size must be a power of two");
  return {gamma, d, SampledF{std::move(f)}, values};
}

/// Samples of a trigonometric polynomial sum_k a_k cos(2 pi k t) + b_k sin(2 pi k t), k >= 1.
inline std::vector<double> trig_samples(const std::vector<double>& cos_coef,
                                        const std::vector<double>& sin_coef, std::size_t grid,
                                        double constant = 0.0) {
  return sample_real(
      [&](double t) {
        double s = constant;
        for (std::size_t k = 0; k < cos_coef.size(); ++k)
          s += cos_coef[k] * std::cos(2 * std::numbers::pi * double(k + 1) * t);
        for (std::size_t k = 0; k < sin_coef.size(); ++k)
          s += sin_coef[k] * std::sin(2 * std::numbers::pi * double(k + 1) * t);
        return s;
      },
      grid);
}

namespace detail {

inline void require_rotation_algebra(const AlgebraHandle& alg) {
  if (alg->rank() != 2 || !(alg->table.pair_phase(1, 0) == Phase::theta()) || !alg->table.pure_phase())
    throw std::invalid_argument("Furstenberg maps act on a rotation algebra with v u = e(theta) u v");
}

/// f(t + shift) + add, sample-wise.
inline std::vector<double> shifted(const std::vector<double>& f, double shift, double add) {
  auto g = rotate_real(f, shift);
  for (auto& x : g) x += add;
  return g;
}

} // namespace detail

/// Image of the exact monomial u^m v^n under a constant-f map:
/// e(gamma m + rho n + theta d n(n-1)/2) u^{m+dn} v^n.
inline Monomial apply_monomial(const FurstenbergAuto& a, int m, int n) {
  const long long tri = static_cast<long long>(n) * (n - 1) / 2;
  Phase ph = a.gamma.pow(m) * a.rho().pow(n) * Phase::theta(Rational(tri * a.d));
  return {ph, {m + a.d * n, n}};
}

struct AppliedElement {
  Element element;
  double residual = 0.0; // l2 mass of dropped modes, sampled f only
};

/// alpha(a). Constant f acts termwise and keeps exact coefficients exact. For
/// sampled f each row sum_m c_{m,n} u^m v^n becomes
///   F_n(u) P_n(u) e(theta d n(n-1)/2) u^{dn} v^n,
/// with F_n(z) = sum_m c_{m,n} e(gamma m) z^m and P_n the product of the
/// rotated copies of exp(2 pi i f); the u-spectrum of F_n P_n is cut to
/// [-bandwidth, bandwidth].
inline AppliedElement apply_with_residual(const FurstenbergAuto& a, const Element& x, int bandwidth) {
  const AlgebraHandle& alg = x.algebra();
  detail::require_rotation_algebra(alg);
  const ScalarContext& ctx = alg->scalars;
  AppliedElement out{Element(alg), 0.0};

  if (a.is_constant()) {
    for (auto& [e, c] : x.terms()) {
      Monomial im = apply_monomial(a, e[0], e[1]);
      out.element.add_term(std::move(im.exps), mul(c, Scalar::exact(1, im.phase), ctx));
    }
    return out;
  }

  const auto& f = a.samples();
  const std::size_t grid = f.size();
  if (!is_power_of_two(grid)) throw std::invalid_argument("f grid size must be a power of two");
  if (bandwidth < 0 || 4 * static_cast<std::size_t>(bandwidth) > grid)
    throw std::invalid_argument("bandwidth must satisfy 0 <= 4 N <= grid size");
  const Numerics& nv = a.numerics();
  for (auto& [e, c] : x.terms())
    if (std::abs(e[0]) > bandwidth) throw std::invalid_argument("u-degree of the element exceeds the bandwidth");

  std::map<int, std::vector<complex>> rows; // n -> FFT-ordered coefficients of F_n
  const double gam = a.angle(a.gamma);
  for (auto& [e, c] : x.terms()) {
    auto& row = rows[e[1]];
    if (row.empty()) row.assign(grid, 0.0);
    double ang = gam * e[0];
    ang -= std::floor(ang);
    std::size_t slot = static_cast<std::size_t>((e[0] % long(grid) + long(grid)) % long(grid));
    row[slot] += c.value(ctx) * std::polar(1.0, 2 * std::numbers::pi * ang);
  }
  if (rows.empty()) return out;

  // S_n(t) = sum_{k<n} f(t + k theta) for n >= 0, -sum_{n<=k<0} f(t + k theta) for n < 0
  std::vector<complex> fx(f.begin(), f.end());
  const auto fhat = fourier_coefficients(fx);
  auto rotated = [&](int k) {
    std::vector<complex> c(grid);
    for (std::size_t j = 0; j < grid; ++j) {
      int freq = signed_frequency(j, grid);
      if (grid % 2 == 0 && j == grid / 2) {
        c[j] = fhat[j] * std::cos(2 * std::numbers::pi * freq * k * nv.theta);
        continue;
      }
      double ang = static_cast<double>(freq) * k * nv.theta;
      ang -= std::floor(ang);
      c[j] = fhat[j] * std::polar(1.0, 2 * std::numbers::pi * ang);
    }
    return c;
  };
  const int nmin = std::min(rows.begin()->first, 0);
  const int nmax = std::max(rows.rbegin()->first, 0);
  std::map<int, std::vector<complex>> partial; // Fourier coefficients of S_n
  partial[0].assign(grid, 0.0);
  for (int n = 1; n <= nmax; ++n) {
    auto r = rotated(n - 1);
    auto s = partial[n - 1];
    for (std::size_t j = 0; j < grid; ++j) s[j] += r[j];
    partial[n] = std::move(s);
  }
  for (int n = -1; n >= nmin; --n) {
    auto r = rotated(n);
    auto s = partial[n + 1];
    for (std::size_t j = 0; j < grid; ++j) s[j] -= r[j];
    partial[n] = std::move(s);
  }

  double dropped = 0.0;
  for (auto& [n, coeffs] : rows) {
    auto fn = synthesize(coeffs);
    auto sn = synthesize(partial[n]);
    for (std::size_t j = 0; j < grid; ++j) {
      double ang = sn[j].real();
      ang -= std::floor(ang);
      fn[j] *= std::polar(1.0, 2 * std::numbers::pi * ang);
    }
    auto h = fourier_coefficients(fn);
    const long long tri = static_cast<long long>(n) * (n - 1) / 2;
    complex twist = Phase::theta(Rational(tri * a.d)).value(nv);
    for (std::size_t j = 0; j < grid; ++j) {
      int k = signed_frequency(j, grid);
      if (std::abs(k) > bandwidth) {
        dropped += std::norm(h[j]);
        continue;
      }
      out.element.add_term({k + a.d * n, n}, Scalar::approx(h[j] * twist));
    }
  }
  out.residual = std::sqrt(dropped);
  return out;
}

inline Element apply(const FurstenbergAuto& a, const Element& x, int bandwidth = 256) {
  return apply_with_residual(a, x, bandwidth).element;
}

/// alpha_{theta, -gamma, -d, g} with g(z) = -f(e(-gamma) z) + d gamma.
inline FurstenbergAuto inverse(const FurstenbergAuto& a) {
  FurstenbergAuto r = a;
  r.gamma = a.gamma.inverse();
  r.d = -a.d;
  Phase dg = a.gamma.pow(a.d);
  if (a.is_constant()) {
    r.f = ConstantF{a.rho().inverse() * dg};
  } else {
    auto g = detail::shifted(a.samples(), -a.angle(a.gamma), 0.0);
    double c = a.angle(dg);
    for (auto& x : g) x = c - x;
    r.f = SampledF{std::move(g)};
  }
  return r;
}

/// Ad(u^k v^l) o alpha = alpha_{theta, gamma + l theta, d, g},
/// g(z) = f(e(l theta) z) + (l d - k) theta.
inline FurstenbergAuto conjugate_by_monomial(const FurstenbergAuto& a, int k, int l) {
  FurstenbergAuto r = a;
  r.gamma = a.gamma * Phase::theta(l);
  Phase add = Phase::theta(Rational(static_cast<long long>(l) * a.d - k));
  if (a.is_constant()) {
    r.f = ConstantF{a.rho() * add};
  } else {
    auto g = detail::shifted(a.samples(), l * a.numerics().theta, a.angle(add));
    r.f = SampledF{std::move(g)};
  }
  return r;
}

/// beta o alpha o beta^{-1} for beta(u) = e(r/d) u, beta(v) = v:
/// alpha_{theta, gamma, d, g} with g(z) = f(e(r/d) z) + r. r is read through its
/// Phase representative (rational part in [0, 1)); for |d| > 1 that choice matters.
inline FurstenbergAuto gauge_conjugate(const FurstenbergAuto& a, const Phase& r) {
  if (a.d == 0) throw std::invalid_argument("gauge conjugation needs d != 0");
  FurstenbergAuto out = a;
  if (a.is_constant()) {
    out.f = ConstantF{a.rho() * r};
  } else {
    double ang = a.angle(r);
    out.f = SampledF{detail::shifted(a.samples(), ang / a.d, ang)};
  }
  return out;
}

/// Numeric samples of f on a grid of the given size.
inline std::vector<double> f_samples(const FurstenbergAuto& a, std::size_t grid) {
  if (a.is_constant()) return std::vector<double>(grid, a.angle(a.rho()));
  const auto& f = a.samples();
  if (f.size() == grid) return f;
  // resample by zero-padding or truncating the spectrum
  std::vector<complex> fx(f.begin(), f.end());
  auto c = fourier_coefficients(fx);
  std::vector<complex> out(grid, 0.0);
  for (std::size_t j = 0; j < f.size(); ++j) {
    int k = signed_frequency(j, f.size());
    if (2 * static_cast<std::size_t>(std::abs(k)) >= grid) continue;
    out[static_cast<std::size_t>((k + long(grid)) % long(grid))] += c[j];
  }
  auto v = synthesize(out);
  std::vector<double> r(grid);
  for (std::size_t j = 0; j < grid; ++j) r[j] = v[j].real();
  return r;
}

struct Classification {
  Phase gamma;
  int d = 0;
  std::vector<double> f; // f(j / G), with f(0) in [0, 1)
  double unitarity_defect = 0.0;
};

/// Recover (gamma, d, f) from alpha(u) = e(gamma) u and alpha(v), by writing
/// alpha(v) v* = exp(2 pi i f(u)) u^d.
inline Classification classify(const Phase& image_u_phase, const Element& image_v,
                               std::size_t grid = 4096) {
  const AlgebraHandle& alg = image_v.algebra();
  detail::require_rotation_algebra(alg);
  if (!is_power_of_two(grid)) throw std::invalid_argument("classification grid must be a power of two");
  Element h = image_v * Element::generator(alg, 1, -1);
  std::vector<complex> coeff(grid, 0.0);
  for (auto& [e, c] : h.terms()) {
    if (e[1] != 0) throw std::invalid_argument("alpha(v) v* is not a function of u");
    if (2 * static_cast<std::size_t>(std::abs(e[0])) >= grid)
      throw std::invalid_argument("alpha(v) v* has degree beyond the classification grid");
    coeff[static_cast<std::size_t>((e[0] + long(grid)) % long(grid))] += c.value(alg->scalars);
  }
  auto g = synthesize(coeff);

  Classification out;
  out.gamma = image_u_phase;
  for (auto& z : g) out.unitarity_defect = std::max(out.unitarity_defect, std::abs(std::norm(z) - 1.0));
  if (out.unitarity_defect > 1e-6) throw std::invalid_argument("alpha(v) v* is not unitary");

  // Principal-value steps above pi/2 mean the grid is too coarse to follow arg g.
  constexpr double kMaxStep = std::numbers::pi / 2;
  std::vector<double> arg(grid + 1);
  arg[0] = std::arg(g[0]);
  for (std::size_t j = 1; j <= grid; ++j) {
    double step = std::arg(g[j % grid] / g[j - 1]);
    if (std::abs(step) > kMaxStep) throw std::runtime_error("phase unwrapping step too large; refine the grid");
    arg[j] = arg[j - 1] + step;
  }
  double winding = (arg[grid] - arg[0]) / (2 * std::numbers::pi);
  out.d = static_cast<int>(std::lround(winding));
  if (std::abs(winding - out.d) > 1e-6) throw std::runtime_error("winding number is not an integer");
  const double base = std::floor(arg[0] / (2 * std::numbers::pi));
  out.f.resize(grid);
  for (std::size_t j = 0; j < grid; ++j)
    out.f[j] = arg[j] / (2 * std::numbers::pi) - base - out.d * double(j) / double(grid);
  return out;
}

/// alpha^k as a callable; negative k goes through the inverse.
class FurstenbergPower {
public:
  FurstenbergPower(FurstenbergAuto a, int k, int bandwidth = 256)
      : step_(k >= 0 ? std::move(a) : inverse(a)), count_(std::abs(k)), bandwidth_(bandwidth) {}

  Element operator()(Element x) const {
    for (int i = 0; i < count_; ++i) x = apply(step_, x, bandwidth_);
    return x;
  }

private:
  FurstenbergAuto step_;
  int count_;
  int bandwidth_;
};

inline FurstenbergPower power(const FurstenbergAuto& a, int k, int bandwidth = 256) {
  return FurstenbergPower(a, k, bandwidth);
}

} // namespace ncf
