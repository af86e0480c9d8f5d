#pragma once

#include "ncfurst/furstenberg.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>

namespace ncf {

struct IdentitySuiteConfig {
  int instances = 200;
  int max_abs_d = 3;
  int trig_degree = 6;
  int box = 5;
  int terms = 6;
  std::size_t grid = 4096;
  int bandwidth = 256;
  double amplitude = 0.05;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  Numerics values{0.41421356237309515, 0.6180339887498949}; // sqrt 2 - 1, golden conjugate
};

struct IdentitySuiteReport {
  int instances = 0;
  int exact_instances = 0;
  double max_inverse = 0.0; // ||alpha(alpha^{-1}(a)) - a||_2
  double max_conj = 0.0;    // ||Ad(u^k v^l)(alpha(a)) - conjugate_by_monomial(alpha, k, l)(a)||_2
  double max_conj2 = 0.0;   // ||beta alpha beta^{-1}(a) - gauge_conjugate(alpha, r)(a)||_2
  int exact_failures = 0;   // nonzero residue in exact mode
  std::optional<std::string> witness;

  bool ok(double tol) const {
    return exact_failures == 0 && max_inverse <= tol && max_conj <= tol && max_conj2 <= tol;
  }
};

namespace detail {

inline Element suite_monomial(const AlgebraHandle& a, int m, int n, Scalar c = Scalar::one()) {
  return Element::monomial(a, {m, n}, std::move(c));
}

inline Phase suite_phase(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 6);
  return {Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
}

inline double suite_dist(const Element& a, const Element& b) { return (a.to_approx() - b.to_approx()).l2_norm(); }

} // namespace detail

/// Random round trips through inverse, monomial conjugation and gauge
/// conjugation, in sampled (approximate) and constant (exact) mode.
inline IdentitySuiteReport run_identity_suite(const IdentitySuiteConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> dd(-cfg.max_abs_d, cfg.max_abs_d), deg(0, cfg.trig_degree),
      box(-cfg.box, cfg.box), kl(-2, 2), rden(2, 10);
  std::uniform_real_distribution<double> coef(-cfg.amplitude, cfg.amplitude);
  std::normal_distribution<double> g;

  auto approx_alg = rotation_algebra(NumericMode{cfg.values, 1e-12});
  auto exact_alg = rotation_algebra(Independent{}, cfg.values);
  IdentitySuiteReport rep;

  auto note = [&](int i, const std::string& what, double r) {
    if (r > cfg.tol && !rep.witness) {
      std::ostringstream os;
      os << "instance " << i << ": " << what << " residual " << r;
      rep.witness = os.str();
    }
  };

  for (int i = 0; i < cfg.instances; ++i) {
    // sampled mode
    const int d = dd(rng);
    std::vector<double> cs(deg(rng)), sn(cs.size());
    for (auto& x : cs) x = coef(rng);
    for (auto& x : sn) x = coef(rng);
    auto alpha = make_sampled_auto(Phase::gamma(), d, trig_samples(cs, sn, cfg.grid, coef(rng)), cfg.values);
    Element a(approx_alg);
    for (int t = 0; t < cfg.terms; ++t) a.add_term({box(rng), box(rng)}, Scalar::approx({g(rng), g(rng)}));

    double r_inv = detail::suite_dist(apply(alpha, apply(inverse(alpha), a, cfg.bandwidth), cfg.bandwidth), a);
    const int k = kl(rng), l = kl(rng);
    Element w = detail::suite_monomial(approx_alg, k, l).to_approx();
    double r_conj = detail::suite_dist(w * apply(alpha, a, cfg.bandwidth) * w.adjoint(),
                                       apply(conjugate_by_monomial(alpha, k, l), a, cfg.bandwidth));
    double r_conj2 = 0.0;
    // r in (0, 1): a Phase keeps only r mod 1, and beta depends on r itself when |d| > 1
    const int den = rden(rng);
    const Rational r(std::uniform_int_distribution<int>(1, den - 1)(rng), den);
    if (d != 0) {
      auto beta = make_constant_auto(Phase(r / Rational(d)), 0, Phase(), cfg.values);
      Element lhs = apply(beta, apply(alpha, apply(inverse(beta), a)), cfg.bandwidth);
      r_conj2 = detail::suite_dist(lhs, apply(gauge_conjugate(alpha, Phase(r)), a, cfg.bandwidth));
    }
    rep.max_inverse = std::max(rep.max_inverse, r_inv);
    rep.max_conj = std::max(rep.max_conj, r_conj);
    rep.max_conj2 = std::max(rep.max_conj2, r_conj2);
    note(i, "inverse", r_inv);
    note(i, "monomial conjugation", r_conj);
    note(i, "gauge conjugation", r_conj2);
    ++rep.instances;

    // exact mode: constant f, monomials in the box
    auto ca = make_constant_auto(detail::suite_phase(rng), d, detail::suite_phase(rng), cfg.values);
    Element x = detail::suite_monomial(exact_alg, box(rng), box(rng), Scalar::exact(1, detail::suite_phase(rng)));
    Element cw = detail::suite_monomial(exact_alg, k, l);
    bool ok = (apply(ca, apply(inverse(ca), x)) - x).is_zero() &&
              (cw * apply(ca, x) * cw.adjoint() - apply(conjugate_by_monomial(ca, k, l), x)).is_zero();
    if (d != 0) {
      auto beta = make_constant_auto(Phase(r / Rational(d)), 0, Phase(), cfg.values);
      ok = ok && (apply(beta, apply(ca, apply(inverse(beta), x))) - apply(gauge_conjugate(ca, Phase(r)), x)).is_zero();
    }
    ++rep.exact_instances;
    if (!ok) {
      ++rep.exact_failures;
      if (!rep.witness) rep.witness = "instance " + std::to_string(i) + ": exact identity has nonzero residue";
    }
  }
  return rep;
}

} // namespace ncf
