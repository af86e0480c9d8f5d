#pragma once

#include "ncfurst/element.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace ncf {

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Unnormalized DFT; sign = FFTW_FORWARD (e^{-2 pi i nj/M}) or FFTW_BACKWARD.
inline std::vector<complex> dft(std::span<const complex> in, int sign) {
  const int n = static_cast<int>(in.size());
  std::vector<complex> out(in.begin(), in.end());
  if (n == 0) return out;
  auto* buf = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

} // namespace detail

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Fourier coefficients c_n = (1/M) sum_j x_j e^{-2 pi i n j / M}, stored in
/// FFT order (index n mod M).
inline std::vector<complex> fourier_coefficients(std::span<const complex> samples) {
  auto c = detail::dft(samples, FFTW_FORWARD);
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (auto& z : c) z *= inv;
  return c;
}

/// Inverse of fourier_coefficients: values at e^{2 pi i j / M}.
inline std::vector<complex> synthesize(std::span<const complex> coeffs) {
  return detail::dft(coeffs, FFTW_BACKWARD);
}

/// Signed frequency of FFT slot j for length M.
inline int signed_frequency(std::size_t j, std::size_t m) {
  return j <= m / 2 ? static_cast<int>(j) : static_cast<int>(j) - static_cast<int>(m);
}

/// Samples of fn(t) at t = j / M.
inline std::vector<double> sample_real(const std::function<double(double)>& fn, std::size_t m) {
  std::vector<double> v(m);
  for (std::size_t j = 0; j < m; ++j) v[j] = fn(static_cast<double>(j) / static_cast<double>(m));
  return v;
}

/// Samples of t -> f(t + shift) by trigonometric interpolation; exact for
/// band-limited f.
inline std::vector<double> rotate_real(std::span<const double> f, double shift) {
  const std::size_t m = f.size();
  std::vector<complex> x(f.begin(), f.end());
  auto c = fourier_coefficients(x);
  for (std::size_t j = 0; j < m; ++j) {
    int n = signed_frequency(j, m);
    if (m % 2 == 0 && j == m / 2) {
      // Nyquist slot: keep the symmetric cosine interpolant
      c[j] *= std::cos(2.0 * std::numbers::pi * n * shift);
      continue;
    }
    double a = n * shift;
    a -= std::floor(a);
    c[j] *= std::polar(1.0, 2.0 * std::numbers::pi * a);
  }
  auto y = synthesize(c);
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = y[j].real();
  return out;
}

/// Pointwise exp(2 pi i f).
inline std::vector<complex> exp_2pi_i(std::span<const double> f) {
  std::vector<complex> g(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    double a = f[j] - std::floor(f[j]);
    g[j] = std::polar(1.0, 2.0 * std::numbers::pi * a);
  }
  return g;
}

struct CircleElement {
  Element element;
  double aliasing_residual = 0.0; // l2 mass of discarded Fourier modes
};

/// Element sum_{|n| <= N} c_n g_i^n whose coefficients are the discrete Fourier
/// coefficients of g sampled at the M-th roots of unity.
inline CircleElement circle_function_to_element(std::span<const complex> samples,
                                                const AlgebraHandle& alg, int generator_index,
                                                int bandwidth) {
  const std::size_t m = samples.size();
  if (!is_power_of_two(m)) throw std::invalid_argument("sample count must be a power of two");
  if (bandwidth < 0 || m < 4 * static_cast<std::size_t>(bandwidth))
    throw std::invalid_argument("sample count must be at least 4 * bandwidth");
  if (generator_index < 0 || generator_index >= alg->rank())
    throw std::out_of_range("generator index out of range");
  auto c = fourier_coefficients(samples);
  CircleElement out{Element(alg), 0.0};
  double outside = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    int n = signed_frequency(j, m);
    if (std::abs(n) <= bandwidth) {
      Exponents e(alg->rank(), 0);
      e[generator_index] = n;
      out.element.add_term(std::move(e), Scalar::approx(c[j]));
    } else {
      outside += std::norm(c[j]);
    }
  }
  out.aliasing_residual = std::sqrt(outside);
  return out;
}

} // namespace ncf
