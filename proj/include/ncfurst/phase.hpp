#pragma once

#include "ncfurst/rational.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

namespace ncf {

using complex = std::complex<double>;

/// Numeric values attached to the symbols theta and gamma.
struct Numerics {
  double theta = 0.0;
  double gamma = 0.0;
};

/// Exact unit scalar exp(2 pi i (p + q theta + r gamma)).
///
/// p is kept in [0, 1); q and r are free rationals. The same triple doubles as
/// an exact real number modulo 1 (angles such as gamma or a constant f).
class Phase {
public:
  Phase() = default;
  Phase(Rational p, Rational q = 0, Rational r = 0) : p_(p.frac()), q_(q), r_(r) {} // NOLINT

  static Phase theta(Rational c = 1) { return {0, c, 0}; }
  static Phase gamma(Rational c = 1) { return {0, 0, c}; }

  const Rational& p() const { return p_; }
  const Rational& q() const { return q_; }
  const Rational& r() const { return r_; }

  bool is_identity() const { return p_.is_zero() && q_.is_zero() && r_.is_zero(); }

  friend Phase operator*(const Phase& a, const Phase& b) {
    return {a.p_ + b.p_, a.q_ + b.q_, a.r_ + b.r_};
  }
  Phase& operator*=(const Phase& o) { return *this = *this * o; }
  Phase inverse() const { return {-p_, -q_, -r_}; }
  Phase pow(Rational n) const { return {p_ * n, q_ * n, r_ * n}; }

  /// Real number p + q theta + r gamma (not reduced).
  double angle(const Numerics& x) const {
    return p_.to_double() + q_.to_double() * x.theta + r_.to_double() * x.gamma;
  }
  complex value(const Numerics& x) const {
    double a = angle(x);
    a -= std::floor(a);
    return std::polar(1.0, 2.0 * std::numbers::pi * a);
  }

  friend bool operator==(const Phase&, const Phase&) = default;
  friend auto operator<=>(const Phase& a, const Phase& b) {
    if (auto c = a.p_ <=> b.p_; c != 0) return c;
    if (auto c = a.q_ <=> b.q_; c != 0) return c;
    return a.r_ <=> b.r_;
  }

  std::string str() const { return "(" + p_.str() + "," + q_.str() + "," + r_.str() + ")"; }

private:
  Rational p_, q_, r_;
};

inline Phase phase_mul(const Phase& a, const Phase& b) { return a * b; }

/// How the symbols theta and gamma relate.
struct Independent {};
struct NumericMode {
  Numerics values;
  double tol = 1e-12;
};
/// gamma = a + b theta, theta irrational.
struct Related {
  Rational a, b;
};
using IndependenceMode = std::variant<Independent, NumericMode, Related>;

inline bool is_exact(const IndependenceMode& m) { return !std::holds_alternative<NumericMode>(m); }

/// Representative of the phase in the mode's canonical coordinates. Related
/// mode eliminates gamma; the other modes leave the triple alone.
inline Phase canonical(const Phase& a, const IndependenceMode& mode) {
  if (auto* rel = std::get_if<Related>(&mode))
    return {a.p() + a.r() * rel->a, a.q() + a.r() * rel->b, 0};
  return a;
}

inline bool phase_is_trivial(const Phase& a, const IndependenceMode& mode) {
  if (auto* num = std::get_if<NumericMode>(&mode))
    return std::abs(a.value(num->values) - 1.0) <= num->tol;
  return canonical(a, mode).is_identity();
}

inline bool phase_equal(const Phase& a, const Phase& b, const IndependenceMode& mode) {
  return phase_is_trivial(a * b.inverse(), mode);
}

} // namespace ncf
