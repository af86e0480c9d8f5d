#pragma once

#include "ncfurst/element.hpp"

#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace ncf {

/// The equation w * x = y * w for monomials x, y with exact coefficients.
struct TwistedConstraint {
  Element x;
  Element y;
};

struct CentralizerReport {
  std::size_t dimension = 0;
  std::size_t unknowns = 0;
  std::size_t forced_zero = 0;   // coefficients forced to vanish directly
  std::size_t components = 0;    // chains linked by the recursions
  std::size_t inconsistent = 0;  // chains killed by a cycle condition
};

namespace detail {

inline std::pair<Exponents, Scalar> single_exact_term(const Element& e) {
  if (e.size() != 1) throw std::invalid_argument("centralizer constraint is not a monomial");
  auto& [exps, c] = *e.terms().begin();
  if (!c.is_exact()) throw std::invalid_argument("centralizer constraint needs an exact coefficient");
  return {exps, c};
}

inline Scalar exact_inverse(const Scalar& s) {
  auto& e = s.as_exact();
  return Scalar::exact(Rational(1) / e.magnitude, e.phase.inverse());
}

inline bool exact_equal(const Scalar& a, const Scalar& b, const IndependenceMode& mode) {
  auto& x = a.as_exact();
  auto& y = b.as_exact();
  if (x.magnitude != y.magnitude) return false;
  return x.magnitude.is_zero() || phase_equal(x.phase, y.phase, mode);
}

inline void box_points(int k, int box, std::vector<Exponents>& out) {
  Exponents e(k, -box);
  if (k == 0) {
    out.push_back(e);
    return;
  }
  while (true) {
    out.push_back(e);
    int m = k - 1;
    while (m >= 0 && e[m] == box) e[m--] = -box;
    if (m < 0) break;
    ++e[m];
  }
}

} // namespace detail

/// Dimension of the space of w supported in [-box, box]^k with w x = y w for
/// every constraint. Each constraint links at most two coefficients per
/// output monomial, so the solution space splits into chains along which the
/// coefficients are determined by one free value; a chain survives when no
/// link forces zero and every cycle closes with ratio exactly 1.
inline CentralizerReport centralizer(const std::vector<TwistedConstraint>& constraints, int box,
                                     const AlgebraHandle& alg) {
  const IndependenceMode& mode = alg->scalars.mode;
  if (!is_exact(mode)) throw std::invalid_argument("centralizer dimension needs an exact mode");
  if (box < 0) throw std::invalid_argument("negative box");
  const TwistTable& table = alg->table;
  const ScalarContext& ctx = alg->scalars;

  std::vector<Exponents> pts;
  detail::box_points(alg->rank(), box, pts);

  struct Edge {
    std::size_t to;
    Scalar ratio; // value(to) = ratio * value(from)
  };
  std::vector<std::vector<Edge>> adj(pts.size());
  std::vector<bool> zero(pts.size(), false);

  for (auto& con : constraints) {
    if (con.x.algebra() != alg || con.y.algebra() != alg)
      throw std::invalid_argument("constraint belongs to another algebra");
    auto [xe, xc] = detail::single_exact_term(con.x);
    auto [ye, yc] = detail::single_exact_term(con.y);
    // output monomial -> (box index, coefficient) for w x and y w
    std::map<Exponents, std::pair<std::size_t, Scalar>> left, right;
    for (std::size_t n = 0; n < pts.size(); ++n) {
      Monomial l = table.multiply(pts[n], xe);
      left.emplace(l.exps, std::pair{n, mul(xc, Scalar::exact(1, l.phase), ctx)});
      Monomial r = table.multiply(ye, pts[n]);
      right.emplace(r.exps, std::pair{n, mul(yc, Scalar::exact(1, r.phase), ctx)});
    }
    for (auto& [out, lhs] : left) {
      auto it = right.find(out);
      if (it == right.end()) {
        zero[lhs.first] = true;
        continue;
      }
      auto& rhs = it->second;
      if (lhs.first == rhs.first) {
        if (!detail::exact_equal(lhs.second, rhs.second, mode)) zero[lhs.first] = true;
        continue;
      }
      // lambda_l * A = lambda_r * B
      Scalar r_from_l = mul(lhs.second, detail::exact_inverse(rhs.second), ctx);
      adj[lhs.first].push_back({rhs.first, r_from_l});
      adj[rhs.first].push_back({lhs.first, detail::exact_inverse(r_from_l)});
    }
    for (auto& [out, rhs] : right)
      if (!left.contains(out)) zero[rhs.first] = true;
  }

  CentralizerReport rep;
  rep.unknowns = pts.size();
  for (bool z : zero) rep.forced_zero += z ? 1 : 0;
  std::vector<std::optional<Scalar>> val(pts.size());
  for (std::size_t s = 0; s < pts.size(); ++s) {
    if (val[s]) continue;
    ++rep.components;
    bool dead = false, cyc_bad = false;
    val[s] = Scalar::one();
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      std::size_t n = q.front();
      q.pop();
      dead = dead || zero[n];
      for (auto& e : adj[n]) {
        Scalar next = mul(e.ratio, *val[n], ctx);
        if (!val[e.to]) {
          val[e.to] = next;
          q.push(e.to);
        } else if (!detail::exact_equal(*val[e.to], next, mode)) {
          cyc_bad = true;
        }
      }
    }
    if (cyc_bad && !dead) ++rep.inconsistent;
    if (!dead && !cyc_bad) ++rep.dimension;
  }
  return rep;
}

inline std::size_t centralizer_dim(const std::vector<TwistedConstraint>& constraints, int box,
                                   const AlgebraHandle& alg) {
  return centralizer(constraints, box, alg).dimension;
}

} // namespace ncf
