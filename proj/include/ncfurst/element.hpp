#pragma once

#include "ncfurst/scalar.hpp"
#include "ncfurst/twist_table.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncf {

/// A twisted monomial algebra: generator names, commutation table, how theta
/// and gamma relate, and optional numeric values for them.
struct Algebra {
  std::vector<std::string> names;
  TwistTable table;
  ScalarContext scalars;
  double drop_tol = 1e-14;

  int rank() const { return table.size(); }
};

using AlgebraHandle = std::shared_ptr<const Algebra>;

inline AlgebraHandle make_algebra(std::vector<std::string> names, TwistTable table,
                                  IndependenceMode mode = Independent{},
                                  std::optional<Numerics> values = std::nullopt,
                                  double drop_tol = 1e-14) {
  if (static_cast<int>(names.size()) != table.size())
    throw std::invalid_argument("generator names do not match table size");
  return std::make_shared<const Algebra>(
      Algebra{std::move(names), std::move(table), ScalarContext{std::move(mode), values}, drop_tol});
}

/// A_theta with generators u, v.
inline AlgebraHandle rotation_algebra(IndependenceMode mode = Independent{},
                                      std::optional<Numerics> values = std::nullopt,
                                      double drop_tol = 1e-14) {
  return make_algebra({"u", "v"}, rotation_table(), std::move(mode), values, drop_tol);
}

/// Finitely supported noncommutative Laurent polynomial in normal form.
class Element {
public:
  using Terms = std::map<Exponents, Scalar>;

  explicit Element(AlgebraHandle alg) : alg_(std::move(alg)) {
    if (!alg_) throw std::invalid_argument("null algebra handle");
  }

  static Element zero(AlgebraHandle alg) { return Element(std::move(alg)); }
  static Element one(AlgebraHandle alg) {
    Element e(std::move(alg));
    e.add_term(e.alg_->table.identity(), Scalar::one());
    return e;
  }
  static Element monomial(AlgebraHandle alg, Exponents exps, Scalar c = Scalar::one()) {
    Element e(std::move(alg));
    e.add_term(std::move(exps), c);
    return e;
  }
  /// g_i^power
  static Element generator(AlgebraHandle alg, int i, int power = 1) {
    Exponents x(alg->rank(), 0);
    x.at(i) = power;
    return monomial(std::move(alg), std::move(x));
  }

  const AlgebraHandle& algebra() const { return alg_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  bool is_exact() const {
    for (auto& [e, c] : terms_)
      if (!c.is_exact()) return false;
    return true;
  }

  /// Coefficient of a normal monomial (zero when absent).
  Scalar coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar{} : it->second;
  }

  void add_term(Exponents exps, const Scalar& c) {
    if (static_cast<int>(exps.size()) != alg_->rank())
      throw std::invalid_argument("exponent vector length mismatch");
    auto [it, fresh] = terms_.try_emplace(std::move(exps), c);
    if (!fresh) it->second = add(it->second, c, alg_->scalars);
    if (it->second.is_zero(alg_->drop_tol)) terms_.erase(it);
  }

  Element scaled(const Scalar& c) const {
    Element r(alg_);
    for (auto& [e, x] : terms_) r.add_term(e, mul(c, x, alg_->scalars));
    return r;
  }

  friend Element operator+(const Element& a, const Element& b) {
    a.check_same(b);
    Element r = a;
    for (auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend Element operator-(const Element& a, const Element& b) {
    return a + b.scaled(Scalar::exact(-1));
  }

  friend Element operator*(const Element& a, const Element& b) {
    a.check_same(b);
    const Algebra& alg = *a.alg_;
    Element r(a.alg_);
    const Numerics* x = alg.scalars.numerics();
    bool fast = alg.table.pure_phase() && x && !(a.is_exact() && b.is_exact());
    std::vector<double> pair_angle;
    int k = alg.rank();
    if (fast) {
      pair_angle.assign(static_cast<std::size_t>(k) * k, 0.0);
      for (int j = 0; j < k; ++j)
        for (int i = 0; i < j; ++i) pair_angle[j * k + i] = alg.table.pair_phase(j, i).angle(*x);
    }
    for (auto& [ea, ca] : a.terms_) {
      for (auto& [eb, cb] : b.terms_) {
        if (fast) {
          double ang = 0.0;
          for (int j = 0; j < k; ++j)
            for (int i = 0; i < j; ++i) ang += pair_angle[j * k + i] * double(ea[j]) * double(eb[i]);
          ang -= std::floor(ang);
          complex z = ca.value(alg.scalars) * cb.value(alg.scalars) *
                      std::polar(1.0, 2.0 * std::numbers::pi * ang);
          Exponents e(k);
          for (int m = 0; m < k; ++m) e[m] = ea[m] + eb[m];
          r.add_term(std::move(e), Scalar::approx(z));
        } else {
          Monomial m = alg.table.multiply(ea, eb);
          Scalar c = mul(mul(ca, cb, alg.scalars), Scalar::exact(1, m.phase), alg.scalars);
          r.add_term(std::move(m.exps), c);
        }
      }
    }
    return r;
  }

  Element adjoint() const {
    Element r(alg_);
    for (auto& [e, c] : terms_) {
      Monomial inv = alg_->table.inverse(e);
      r.add_term(std::move(inv.exps), mul(c.conj(), Scalar::exact(1, inv.phase), alg_->scalars));
    }
    return r;
  }

  /// Coefficient of the identity monomial.
  Scalar trace() const { return coefficient(alg_->table.identity()); }

  /// Square root of the sum of squared coefficient moduli.
  double l2_norm() const {
    double s = 0.0;
    for (auto& [e, c] : terms_) s += c.abs() * c.abs();
    return std::sqrt(s);
  }

  /// Sum of coefficient moduli; bounds the operator norm.
  double op_norm_bound() const {
    double s = 0.0;
    for (auto& [e, c] : terms_) s += c.abs();
    return s;
  }

  /// Largest absolute exponent over the support.
  int degree() const {
    int d = 0;
    for (auto& [e, c] : terms_)
      for (int x : e) d = std::max(d, std::abs(x));
    return d;
  }

  /// Copy with every coefficient converted to floating point.
  Element to_approx() const {
    Element r(alg_);
    for (auto& [e, c] : terms_) r.add_term(e, Scalar::approx(c.value(alg_->scalars)));
    return r;
  }

private:
  void check_same(const Element& o) const {
    if (alg_ != o.alg_) throw std::invalid_argument("elements belong to different algebras");
  }

  AlgebraHandle alg_;
  Terms terms_;
};

inline Element mul(const Element& a, const Element& b) { return a * b; }
inline Element adjoint(const Element& a) { return a.adjoint(); }
inline Scalar trace(const Element& a) { return a.trace(); }
inline double l2_norm(const Element& a) { return a.l2_norm(); }
inline double op_norm_bound(const Element& a) { return a.op_norm_bound(); }

} // namespace ncf
