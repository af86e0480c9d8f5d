#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ncf {

struct Convergent {
  long long s = 0;
  long long q = 1;
  friend bool operator==(const Convergent&, const Convergent&) = default;
};

/// Continued-fraction convergents of num/den, exact; stops when the expansion ends.
inline std::vector<Convergent> convergents(long long num, long long den, int count) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) num = -num, den = -den;
  std::vector<Convergent> out;
  // s_n = a_n s_{n-1} + s_{n-2} with s_{-1} = 1, s_{-2} = 0 (q: 0, 1)
  long long sm2 = 0, qm2 = 1, sm1 = 1, qm1 = 0;
  while (static_cast<int>(out.size()) < count) {
    long long a = num / den, r = num % den;
    if (r < 0) --a, r += den;
    long long s = a * sm1 + sm2, q = a * qm1 + qm2;
    out.push_back({s, q});
    sm2 = sm1, qm2 = qm1, sm1 = s, qm1 = q;
    if (r == 0) break;
    num = den;
    den = r;
  }
  return out;
}

/// Convergents of a real x. A remainder below 1e-9 ends the expansion; the loop
/// also stops before q leaves the exactly representable range.
inline std::vector<Convergent> convergents(double x, int count) {
  if (!std::isfinite(x)) throw std::invalid_argument("x must be finite");
  std::vector<Convergent> out;
  long double sm2 = 0, qm2 = 1, sm1 = 1, qm1 = 0;
  long double y = x;
  while (static_cast<int>(out.size()) < count) {
    long double a = std::floor(y);
    long double s = a * sm1 + sm2, q = a * qm1 + qm2;
    if (std::abs(s) > 9.0e15L || q > 9.0e15L) break;
    out.push_back({static_cast<long long>(s), static_cast<long long>(q)});
    sm2 = sm1, qm2 = qm1, sm1 = s, qm1 = q;
    long double frac = y - a;
    if (frac < 1e-9L) break;
    y = 1.0L / frac;
  }
  return out;
}

} // namespace ncf
