#pragma once

#include "ncfurst/phase.hpp"

#include <optional>
#include <stdexcept>
#include <variant>

namespace ncf {

/// What a scalar operation needs to know about the ambient algebra.
struct ScalarContext {
  IndependenceMode mode = Independent{};
  std::optional<Numerics> values;

  const Numerics* numerics() const {
    if (auto* n = std::get_if<NumericMode>(&mode)) return &n->values;
    return values ? &*values : nullptr;
  }
};

/// Either an exact magnitude * phase or a floating complex number.
class Scalar {
public:
  struct Exact {
    Rational magnitude; // >= 0
    Phase phase;
  };

  Scalar() : v_(Exact{0, Phase{}}) {}

  static Scalar exact(Rational magnitude, Phase phase = {}) {
    if (magnitude < Rational(0)) {
      magnitude = -magnitude;
      phase *= Phase(Rational(1, 2));
    }
    if (magnitude.is_zero()) phase = Phase{};
    Scalar s;
    s.v_ = Exact{magnitude, phase};
    return s;
  }
  static Scalar approx(complex z) {
    Scalar s;
    s.v_ = z;
    return s;
  }
  static Scalar one() { return exact(1); }

  bool is_exact() const { return std::holds_alternative<Exact>(v_); }
  const Exact& as_exact() const { return std::get<Exact>(v_); }
  const complex& as_approx() const { return std::get<complex>(v_); }

  /// Exact zero, or an approximate value of modulus at most tol.
  bool is_zero(double tol = 0.0) const {
    if (is_exact()) return as_exact().magnitude.is_zero();
    return std::abs(as_approx()) <= tol;
  }

  double abs() const {
    return is_exact() ? as_exact().magnitude.to_double() : std::abs(as_approx());
  }

  complex value(const ScalarContext& ctx) const {
    if (!is_exact()) return as_approx();
    const Exact& e = as_exact();
    if (e.magnitude.is_zero()) return 0.0;
    if (e.phase.q().is_zero() && e.phase.r().is_zero())
      return e.magnitude.to_double() * e.phase.value(Numerics{});
    const Numerics* x = ctx.numerics();
    if (!x) throw std::domain_error("numeric value of an exact phase needs theta/gamma values");
    return e.magnitude.to_double() * e.phase.value(*x);
  }

  Scalar conj() const {
    if (is_exact()) return exact(as_exact().magnitude, as_exact().phase.inverse());
    return approx(std::conj(as_approx()));
  }

  friend Scalar mul(const Scalar& a, const Scalar& b, const ScalarContext& ctx) {
    if (a.is_exact() && b.is_exact()) {
      auto& x = a.as_exact();
      auto& y = b.as_exact();
      return exact(x.magnitude * y.magnitude, canonical(x.phase * y.phase, ctx.mode));
    }
    return approx(a.value(ctx) * b.value(ctx));
  }

  /// Exact sums stay exact when the phases agree up to sign; otherwise the
  /// result falls back to floating point if numeric values are known.
  friend Scalar add(const Scalar& a, const Scalar& b, const ScalarContext& ctx) {
    if (a.is_exact() && b.is_exact()) {
      auto& x = a.as_exact();
      auto& y = b.as_exact();
      if (x.magnitude.is_zero()) return b;
      if (y.magnitude.is_zero()) return a;
      if (ncf::is_exact(ctx.mode)) {
        if (phase_equal(x.phase, y.phase, ctx.mode)) return exact(x.magnitude + y.magnitude, x.phase);
        if (phase_equal(x.phase, y.phase * Phase(Rational(1, 2)), ctx.mode))
          return exact(x.magnitude - y.magnitude, x.phase);
      }
      if (!ctx.numerics())
        throw std::domain_error("exact sum of unrelated phases " + x.phase.str() + " and " +
                                y.phase.str() + " needs numeric values");
    }
    return approx(a.value(ctx) + b.value(ctx));
  }

  std::string str() const {
    if (is_exact()) return as_exact().magnitude.str() + "*e" + as_exact().phase.str();
    return "(" + std::to_string(as_approx().real()) + "," + std::to_string(as_approx().imag()) + ")";
  }

private:
  std::variant<Exact, complex> v_;
};

} // namespace ncf
