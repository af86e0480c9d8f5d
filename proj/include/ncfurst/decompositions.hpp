#pragma once

#include "ncfurst/presentations.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ncf {

/// A presentation, a second one claimed isomorphic, and generator maps both ways.
struct Decomposition {
  Presentation source;
  Presentation target;
  GeneratorSubstitution forward;  // source generators -> target words
  GeneratorSubstitution backward; // target generators -> source words
};

struct DecompositionCheck {
  SubstitutionCheck forward;
  SubstitutionCheck backward;
  bool ok() const { return forward.ok && backward.ok; }
};

inline DecompositionCheck check_decomposition(const Decomposition& d) {
  return {check_substitution(d.source, d.target, d.forward), check_substitution(d.target, d.source, d.backward)};
}

inline Presentation a_theta_presentation(IndependenceMode mode = Independent{}) {
  return make_presentation("A_theta", {"u", "v"}, 2, {{1, 0, Phase::theta(), {}}}, std::move(mode));
}

/// Splits p as (subalgebra without generator g) x Z, with implementing unitary
/// z = g^sign and automorphism alpha(b) = z b z^{-1} read off from p's own
/// normal forms. `tweak` multiplies alpha(g_j) by a phase (used for broken variants).
inline Decomposition split_off_generator(const Presentation& p, int g, int sign, const std::string& z_name,
                                         const std::string& name, const std::vector<Phase>& tweak = {}) {
  if (g < 0 || g >= p.rank()) throw std::out_of_range("generator index out of range");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  std::vector<int> keep;
  for (int i = 0; i < p.rank(); ++i)
    if (i != g) keep.push_back(i);
  Presentation base = sub_presentation(p, keep, p.name + " without " + p.names()[g]);
  Word z = Word::letter(g, sign);
  std::vector<Monomial> alpha;
  for (std::size_t j = 0; j < keep.size(); ++j) {
    Monomial m = normal_form_monomial(z * Word::letter(keep[j]) * z.inverse(), p);
    if (m.exps[g] != 0)
      throw std::invalid_argument("conjugation by " + p.names()[g] + " leaves the subalgebra");
    Monomial img;
    img.phase = m.phase;
    if (j < tweak.size()) img.phase *= tweak[j];
    for (int i : keep) img.exps.push_back(m.exps[i]);
    alpha.push_back(img);
  }
  Presentation cp = crossed_by_automorphism(base, alpha, z_name, name);

  Decomposition d{p, cp, {}, {}};
  for (int i = 0; i < p.rank(); ++i)
    d.forward.images.push_back(i == g ? Word::letter(cp.index_of(z_name), sign) : Word::letter(cp.index_of(p.names()[i])));
  for (int i = 0; i < cp.rank(); ++i) {
    const std::string& n = cp.names()[i];
    d.backward.images.push_back(n == z_name ? z : Word::letter(p.index_of(n)));
  }
  return d;
}

/// A53 or A53param(r) as B x Z with B generated by u, v, x and the canonical
/// unitary sent to w*. `broken` inverts the phase of alpha(v).
inline Decomposition mw3_decomposition(MWName which = MWName::A53, MWParams r = {}, bool broken = false) {
  if (which == MWName::A56) throw std::invalid_argument("mw3_decomposition needs A53 or A53param");
  Presentation a = mw_presentation(which, r);
  std::vector<Phase> tweak;
  if (broken) {
    Monomial av = normal_form_monomial(Word::letter(2, -1) * Word::letter(1) * Word::letter(2), a);
    tweak = {Phase(), av.phase.inverse() * av.phase.inverse(), Phase()};
  }
  return split_off_generator(a, 2, -1, "z", broken ? "B3 x Z (broken)" : "B3 x Z", tweak);
}

/// A56 = B x Z with B generated by u, w, x and the canonical unitary sent to v.
inline Decomposition mw6_decomposition() {
  return split_off_generator(mw_presentation(MWName::A56), 1, 1, "z", "B6 x Z");
}

/// Exchanging v and w: crossed(theta, gamma, d, rho) -> crossed(gamma, theta, -d, -rho).
inline Decomposition change_of_variables(int d, Phase rho) {
  Presentation src = crossed_presentation(Phase::theta(), Phase::gamma(), d, rho);
  Presentation dst = crossed_presentation(Phase::gamma(), Phase::theta(), -d, rho.inverse());
  GeneratorSubstitution swap{{Word::letter(0), Word::letter(2), Word::letter(1)}};
  return {src, dst, swap, swap};
}

} // namespace ncf
