#pragma once

#include "ncfurst/element.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncf {

/// Ordered generators with a polycyclic commutation table.
struct Presentation {
  std::string name;
  AlgebraHandle algebra;

  const std::vector<std::string>& names() const { return algebra->names; }
  const TwistTable& table() const { return algebra->table; }
  const IndependenceMode& mode() const { return algebra->scalars.mode; }
  int rank() const { return algebra->rank(); }

  int index_of(const std::string& g) const {
    auto& n = names();
    auto it = std::find(n.begin(), n.end(), g);
    if (it == n.end()) throw std::invalid_argument("unknown generator '" + g + "' in " + name);
    return static_cast<int>(it - n.begin());
  }
};

inline Presentation make_presentation(std::string name, std::vector<std::string> names, int k,
                                      std::vector<TwistRule> rules, IndependenceMode mode = Independent{}) {
  return {std::move(name), make_algebra(std::move(names), TwistTable(k, std::move(rules)), std::move(mode))};
}

/// phase * g_{l_1}^{e_1} ... g_{l_n}^{e_n}
struct Word {
  Phase phase;
  std::vector<Letter> letters;

  Word() = default;
  Word(Phase ph, std::vector<Letter> ls) : phase(ph) {
    for (auto& l : ls) push(l);
  }

  /// Appends a letter, merging with the last one and dropping zero exponents.
  void push(Letter l) {
    if (l.exp == 0) return;
    if (!letters.empty() && letters.back().gen == l.gen) {
      letters.back().exp += l.exp;
      if (letters.back().exp == 0) letters.pop_back();
      return;
    }
    letters.push_back(l);
  }

  friend Word operator*(const Word& a, const Word& b) {
    Word r = a;
    r.phase *= b.phase;
    for (auto& l : b.letters) r.push(l);
    return r;
  }

  Word inverse() const {
    Word r;
    r.phase = phase.inverse();
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) r.push({it->gen, -it->exp});
    return r;
  }

  Word pow(int n) const {
    Word base = n < 0 ? inverse() : *this;
    Word r;
    for (int t = 0; t < std::abs(n); ++t) r = r * base;
    return r;
  }

  static Word letter(int gen, int exp = 1) { return Word({}, {{gen, exp}}); }
  static Word from_monomial(const Monomial& m) {
    Word w;
    w.phase = m.phase;
    for (int g = 0; g < static_cast<int>(m.exps.size()); ++g) w.push({g, m.exps[g]});
    return w;
  }
};

inline std::string format_phase(const Phase& p) {
  if (p.is_identity()) return "";
  return "e" + p.str() + " ";
}

inline std::string format_letters(const std::vector<Letter>& ls, const std::vector<std::string>& names) {
  std::string s;
  for (auto& l : ls) {
    if (!s.empty()) s += " ";
    s += names.at(l.gen);
    if (l.exp != 1) s += "^" + std::to_string(l.exp);
  }
  return s.empty() ? "1" : s;
}

inline std::string format_word(const Word& w, const std::vector<std::string>& names) {
  return format_phase(w.phase) + format_letters(w.letters, names);
}

inline std::string format_monomial(const Monomial& m, const std::vector<std::string>& names) {
  return format_word(Word::from_monomial(m), names);
}

/// Parses "v u w^-1 x^2" (tokens separated by spaces or '*'); "1" is the empty word.
inline Word parse_word(const std::string& text, const Presentation& p) {
  std::string s = text;
  std::replace(s.begin(), s.end(), '*', ' ');
  std::istringstream in(s);
  Word w;
  for (std::string tok; in >> tok;) {
    if (tok == "1") continue;
    int e = 1;
    std::string g = tok;
    if (auto c = tok.find('^'); c != std::string::npos) {
      g = tok.substr(0, c);
      try {
        std::size_t used = 0;
        e = std::stoi(tok.substr(c + 1), &used);
        if (used != tok.size() - c - 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw std::invalid_argument("bad exponent in '" + tok + "'");
      }
    }
    w.push({p.index_of(g), e});
  }
  return w;
}

/// Unique ordered scalar * monomial equal to the word.
inline Monomial normal_form_monomial(const Word& w, const Presentation& p) {
  Monomial m = p.table().collect(w.letters);
  m.phase = canonical(m.phase * w.phase, p.mode());
  return m;
}

inline Element normal_form(const Word& w, const Presentation& p) {
  Monomial m = normal_form_monomial(w, p);
  return Element::monomial(p.algebra, std::move(m.exps), Scalar::exact(1, m.phase));
}

inline bool is_identity(const Monomial& m, const IndependenceMode& mode) {
  return std::all_of(m.exps.begin(), m.exps.end(), [](int e) { return e == 0; }) &&
         phase_is_trivial(m.phase, mode);
}

/// Relation g_j g_i = rhs for every pair j > i; pairs without a rule commute.
struct Relation {
  int j, i;
  Word lhs, rhs;
};

inline std::vector<Relation> relations(const Presentation& p) {
  const TwistTable& t = p.table();
  const int k = p.rank();
  std::vector<Relation> out;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < j; ++i) {
      const TwistRule* rule = nullptr;
      for (auto& r : t.rules())
        if (r.j == j && r.i == i) rule = &r;
      Word lhs({}, {{j, 1}, {i, 1}});
      Word rhs;
      Word extra;
      if (rule && !rule->extra.empty()) extra = Word::from_monomial({Phase{}, rule->extra});
      if (t.direction() == Collection::Tail)
        rhs = Word({}, {{i, 1}, {j, 1}}) * extra;
      else
        rhs = extra * Word({}, {{i, 1}, {j, 1}});
      if (rule) rhs.phase = rule->phase;
      out.push_back({j, i, lhs, rhs});
    }
  return out;
}

inline std::string format_relation(const Relation& r, const std::vector<std::string>& names) {
  return format_word(r.lhs, names) + " = " + format_word(r.rhs, names);
}

/// v u = e(theta) u v, w u = e(gamma) u w, w v = e(rho) u^d v w over u < v < w.
/// theta and gamma are angles, so swapped roles are expressible.
inline Presentation crossed_presentation(Phase theta = Phase::theta(), Phase gamma = Phase::gamma(),
                                         int d = 0, Phase rho = {}, IndependenceMode mode = Independent{}) {
  std::vector<TwistRule> rules{{1, 0, theta, {}}, {2, 0, gamma, {}}};
  rules.push_back({2, 1, rho, d == 0 ? Exponents{} : Exponents{d, 0, 0}});
  return make_presentation("crossed", {"u", "v", "w"}, 3, std::move(rules), std::move(mode));
}

enum class MWName { A53, A56, A53Param };

inline MWName parse_mw_name(const std::string& s) {
  if (s == "A53") return MWName::A53;
  if (s == "A56") return MWName::A56;
  if (s == "A53param") return MWName::A53Param;
  throw std::invalid_argument("unknown Milnes-Walters algebra '" + s + "' (A53, A56, A53param)");
}

struct MWParams {
  int r1 = 1, r2 = 0, r3 = 1, r4 = 1, r5 = 0;
};

/// Reported conditions under which A53(r1..r5) is known to be simple.
struct MWSimplicity {
  std::vector<std::pair<std::string, bool>> conditions;
  bool all() const {
    return std::all_of(conditions.begin(), conditions.end(), [](auto& c) { return c.second; });
  }
};

inline MWSimplicity mw_simplicity(const MWParams& r) {
  int g34 = std::gcd(r.r3, r.r4);
  int g = std::gcd(std::gcd(r.r1, r.r3), r.r4);
  return {{{"r1 > 0", r.r1 > 0},
           {"r3 > 0", r.r3 > 0},
           {"r4 > 0", r.r4 > 0},
           {"0 <= r5 <= gcd(r3,r4)/2", r.r5 >= 0 && 2 * r.r5 <= g34},
           {"0 <= r2 <= gcd(r1,r3,r4)/2", r.r2 >= 0 && 2 * r.r2 <= g}}};
}

/// Milnes-Walters algebras over u < v < w < x with lambda = e(lambda_angle).
/// Every pair carries a rule (commuting pairs with trivial phase).
inline Presentation mw_presentation(MWName which, MWParams r = {}, Phase lambda = Phase::theta(),
                                    IndependenceMode mode = Independent{}) {
  auto lam = [&](long long e) { return lambda.pow(Rational(e)); };
  std::vector<TwistRule> rules;
  std::string name;
  switch (which) {
  case MWName::A53:
    r = MWParams{};
    [[fallthrough]];
  case MWName::A53Param:
    name = which == MWName::A53 ? "A53" : "A53param";
    // u v = lam^{r2} x^{r1} v u  ==>  v u = lam^{r1 r3 - r2} u v x^{-r1}
    rules = {{1, 0, lam(static_cast<long long>(r.r1) * r.r3 - r.r2), r.r1 ? Exponents{0, 0, 0, -r.r1} : Exponents{}},
             {2, 0, lam(-r.r5), {}},
             {3, 0, lam(-r.r3), {}},
             {2, 1, lam(-r.r4), {}},
             {3, 1, {}, {}},
             {3, 2, {}, {}}};
    break;
  case MWName::A56:
    name = "A56";
    // u v = w v u, u w = x w u  ==>  v u = u v w^{-1} x, w u = lam u w x^{-1}
    rules = {{1, 0, {}, {0, 0, -1, 1}},
             {2, 0, lam(1), {0, 0, 0, -1}},
             {3, 0, lam(-1), {}},
             {2, 1, lam(-1), {}},
             {3, 1, {}, {}},
             {3, 2, {}, {}}};
    break;
  }
  return make_presentation(name, {"u", "v", "w", "x"}, 4, std::move(rules), std::move(mode));
}

/// The subpresentation on the listed generators (kept in order), assuming the
/// rules among them only involve those generators.
inline Presentation sub_presentation(const Presentation& p, const std::vector<int>& keep, std::string name) {
  std::vector<int> pos(p.rank(), -1);
  for (std::size_t n = 0; n < keep.size(); ++n) {
    if (n > 0 && keep[n] <= keep[n - 1]) throw std::invalid_argument("sub_presentation needs increasing indices");
    pos.at(keep[n]) = static_cast<int>(n);
  }
  const int k = static_cast<int>(keep.size());
  std::vector<TwistRule> rules;
  std::vector<std::string> names;
  for (int g : keep) names.push_back(p.names()[g]);
  for (auto& r : p.table().rules()) {
    if (pos[r.j] < 0 || pos[r.i] < 0) continue;
    Exponents extra;
    if (!r.extra.empty()) {
      extra.assign(k, 0);
      for (int m = 0; m < p.rank(); ++m) {
        if (r.extra[m] == 0) continue;
        if (pos[m] < 0) throw std::invalid_argument("rule leaves the subpresentation");
        extra[pos[m]] = r.extra[m];
      }
    }
    rules.push_back({pos[r.j], pos[r.i], r.phase, extra});
  }
  return make_presentation(std::move(name), std::move(names), k, std::move(rules), p.mode());
}

/// Z-crossed product of a presentation by the automorphism with
/// alpha(g_m) = alpha_images[m], adding the implementing unitary z with
/// z b z^{-1} = alpha(b). z goes first for tail tables and last for head
/// tables; a pure-phase base follows the shape of the images.
inline Presentation crossed_by_automorphism(const Presentation& base, const std::vector<Monomial>& alpha_images,
                                            std::string z_name = "z", std::string name = "crossed_by_auto") {
  const TwistTable& t = base.table();
  const int k = base.rank();
  if (static_cast<int>(alpha_images.size()) != k) throw std::invalid_argument("need one image per generator");
  auto fits = [&](bool tail) {
    for (int j = 0; j < k; ++j)
      for (int m = 0; m < k; ++m) {
        int e = alpha_images[j].exps.at(m);
        if ((m == j && e != 1) || (m != j && e != 0 && (tail ? m < j : m > j))) return false;
      }
    return true;
  };
  bool tail = t.direction() == Collection::Tail;
  if (t.pure_phase()) tail = fits(true) || !fits(false);
  std::vector<std::string> names;
  std::vector<TwistRule> rules;
  if (tail) {
    // alpha^{-1}(g_j) = c_j^{-1} g_j alpha^{-1}(X_j)^{-1} when alpha(g_j) = c_j g_j X_j, top down
    std::vector<Monomial> inv(k);
    for (int j = k - 1; j >= 0; --j) {
      const Monomial& a = alpha_images[j];
      for (int m = 0; m < k; ++m)
        if ((m < j && a.exps[m] != 0) || (m == j && a.exps[m] != 1))
          throw std::invalid_argument("automorphism image of " + base.names()[j] + " is not c * g * (higher)");
      Monomial x_img{Phase{}, t.identity()};
      for (int m = j + 1; m < k; ++m)
        if (a.exps[m] != 0) x_img = t.multiply(x_img, t.power(inv[m], a.exps[m]));
      Exponents gj = t.identity();
      gj[j] = 1;
      inv[j] = t.multiply(Monomial{a.phase.inverse(), gj}, t.inverse(x_img));
    }
    names.push_back(z_name);
    for (auto& n : base.names()) names.push_back(n);
    for (auto& r : t.rules()) {
      Exponents extra;
      if (!r.extra.empty()) {
        extra.assign(k + 1, 0);
        std::copy(r.extra.begin(), r.extra.end(), extra.begin() + 1);
      }
      rules.push_back({r.j + 1, r.i + 1, r.phase, extra});
    }
    // g_j z = z alpha^{-1}(g_j)
    for (int j = 0; j < k; ++j) {
      Exponents extra(k + 1, 0);
      bool any = false;
      for (int m = j + 1; m < k; ++m) {
        extra[m + 1] = inv[j].exps[m];
        any = any || extra[m + 1] != 0;
      }
      rules.push_back({j + 1, 0, inv[j].phase, any ? extra : Exponents{}});
    }
  } else {
    names = base.names();
    names.push_back(z_name);
    for (auto& r : t.rules()) {
      Exponents extra = r.extra;
      if (!extra.empty()) extra.push_back(0);
      rules.push_back({r.j, r.i, r.phase, extra});
    }
    // z g_i = alpha(g_i) z, alpha(g_i) = c g^{lower} g_i
    for (int i = 0; i < k; ++i) {
      const Monomial& a = alpha_images[i];
      Exponents extra(k + 1, 0);
      bool any = false;
      for (int m = 0; m < k; ++m) {
        if ((m > i && a.exps[m] != 0) || (m == i && a.exps[m] != 1))
          throw std::invalid_argument("automorphism image of " + base.names()[i] + " is not c * (lower) * g");
        if (m < i) {
          extra[m] = a.exps[m];
          any = any || extra[m] != 0;
        }
      }
      rules.push_back({k, i, a.phase, any ? extra : Exponents{}});
    }
  }
  return make_presentation(std::move(name), std::move(names), k + 1, std::move(rules), base.mode());
}

/// Image of each source generator as a phase * word over the target.
struct GeneratorSubstitution {
  std::vector<Word> images;

  Word apply(const Word& w) const {
    Word r;
    r.phase = w.phase;
    for (auto& l : w.letters) r = r * images.at(l.gen).pow(l.exp);
    return r;
  }
};

struct SubstitutionCheck {
  bool ok = true;
  std::size_t relations_checked = 0;
  std::optional<std::string> witness;  // failing source relation
  std::optional<std::string> residue;  // normal form of sigma(L) sigma(R)^{-1}
};

/// Every source relation L = R must map to sigma(L) sigma(R)^{-1} = 1 in the target.
inline SubstitutionCheck check_substitution(const Presentation& src, const Presentation& dst,
                                            const GeneratorSubstitution& sigma) {
  if (static_cast<int>(sigma.images.size()) != src.rank())
    throw std::invalid_argument("substitution must give an image for every source generator");
  SubstitutionCheck out;
  for (auto& rel : relations(src)) {
    ++out.relations_checked;
    Word probe = sigma.apply(rel.lhs) * sigma.apply(rel.rhs).inverse();
    Monomial m = normal_form_monomial(probe, dst);
    if (!is_identity(m, dst.mode())) {
      out.ok = false;
      out.witness = format_relation(rel, src.names());
      out.residue = format_monomial(m, dst.names());
      return out;
    }
  }
  return out;
}

inline GeneratorSubstitution identity_substitution(const Presentation& p) {
  GeneratorSubstitution s;
  for (int g = 0; g < p.rank(); ++g) s.images.push_back(Word::letter(g));
  return s;
}

// ---------------------------------------------------------------------------
// Letter-level rewriting, used to probe that reduction order does not matter.

/// g_a^{sa} g_b^{sb} -> phase * rhs, letters of exponent +-1.
struct LetterRule {
  int a, sa, b, sb;
  Phase phase;
  std::vector<Letter> rhs;
};

struct RewriteSystem {
  int rank = 0;
  IndependenceMode mode = Independent{};
  std::vector<LetterRule> rules; // free cancellation is implicit
};

namespace detail {

inline void append_monomial_letters(std::vector<Letter>& out, const Exponents& e) {
  for (int g = 0; g < static_cast<int>(e.size()); ++g)
    for (int t = 0; t < std::abs(e[g]); ++t) out.push_back({g, e[g] > 0 ? 1 : -1});
}

} // namespace detail

/// One rule per out-of-order pair and sign combination.
inline RewriteSystem rewrite_system(const Presentation& p) {
  const TwistTable& t = p.table();
  RewriteSystem rs{p.rank(), p.mode(), {}};
  for (int j = 0; j < p.rank(); ++j)
    for (int i = 0; i < j; ++i)
      for (int s : {1, -1})
        for (int u : {1, -1}) {
          LetterRule r{j, s, i, u, {}, {}};
          if (t.pure_phase()) {
            r.phase = t.pair_phase(j, i).pow(Rational(s * u));
            r.rhs = {{i, u}, {j, s}};
          } else if (t.direction() == Collection::Tail) {
            // g_j^s g_i^u = g_i^u (g_i^{-u} g_j g_i^u)^s
            Monomial act = t.action(i, u, j);
            if (s < 0) act = t.inverse(act);
            r.phase = act.phase;
            r.rhs = {{i, u}};
            detail::append_monomial_letters(r.rhs, act.exps);
          } else {
            // g_j^s g_i^u = (g_j^s g_i g_j^{-s})^u g_j^s
            Monomial act = t.action(j, s, i);
            if (u < 0) act = t.inverse(act);
            r.phase = act.phase;
            detail::append_monomial_letters(r.rhs, act.exps);
            r.rhs.push_back({j, s});
          }
          rs.rules.push_back(std::move(r));
        }
  return rs;
}

enum class Strategy { LeftmostFirstRule, RightmostLastRule };

struct Reduction {
  Phase phase;
  std::vector<Letter> letters; // irreducible, exponents +-1
  std::size_t steps = 0;
  bool hit_limit = false;
};

inline Reduction reduce(const RewriteSystem& rs, const Word& w, Strategy strat, std::size_t step_limit = 200000) {
  // rules grouped by left-hand side, in declaration order
  const int k = rs.rank;
  auto slot = [k](int a, int sa, int b, int sb) {
    return ((static_cast<std::size_t>(a) * 2 + (sa > 0)) * k + b) * 2 + (sb > 0);
  };
  std::vector<std::vector<const LetterRule*>> index(static_cast<std::size_t>(4) * k * k);
  for (auto& r : rs.rules) index.at(slot(r.a, r.sa, r.b, r.sb)).push_back(&r);

  Reduction red;
  red.phase = w.phase;
  for (auto& l : w.letters)
    for (int t = 0; t < std::abs(l.exp); ++t) red.letters.push_back({l.gen, l.exp > 0 ? 1 : -1});
  auto& ls = red.letters;
  while (true) {
    std::optional<std::size_t> pos;
    const LetterRule* rule = nullptr;
    const std::size_t n = ls.size();
    for (std::size_t q = 0; q + 1 < n; ++q) {
      std::size_t p = strat == Strategy::LeftmostFirstRule ? q : n - 2 - q;
      const Letter& x = ls[p];
      const Letter& y = ls[p + 1];
      if (x.gen == y.gen && x.exp == -y.exp) {
        pos = p; // free cancellation
        break;
      }
      auto& cand = index[slot(x.gen, x.exp, y.gen, y.exp)];
      if (!cand.empty()) {
        pos = p;
        rule = strat == Strategy::LeftmostFirstRule ? cand.front() : cand.back();
        break;
      }
    }
    if (!pos) break;
    if (++red.steps > step_limit) {
      red.hit_limit = true;
      break;
    }
    auto at = ls.begin() + static_cast<std::ptrdiff_t>(*pos);
    at = ls.erase(at, at + 2);
    if (rule) {
      red.phase *= rule->phase;
      ls.insert(at, rule->rhs.begin(), rule->rhs.end());
    }
  }
  red.phase = canonical(red.phase, rs.mode);
  return red;
}

inline Word random_word(std::mt19937_64& rng, int rank, int max_len = 24, int max_exp = 3) {
  std::uniform_int_distribution<int> len(0, max_len), gen(0, rank - 1), ex(-max_exp, max_exp);
  Word w;
  int n = len(rng);
  for (int t = 0; t < n; ++t) {
    int e = 0;
    while (e == 0) e = ex(rng);
    w.letters.push_back({gen(rng), e}); // raw letters; adjacent repeats are fine for probing
  }
  return w;
}

struct ConfluenceReport {
  std::size_t trials = 0;
  std::size_t mismatches = 0;
  std::size_t collector_mismatches = 0; // against the table collector, when one is given
  std::size_t step_limit_hits = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> witness;
};

/// Reduces random words under both strategies and compares the results.
inline ConfluenceReport confluence_probe(const RewriteSystem& rs, std::size_t trials, std::uint64_t seed,
                                         const Presentation* collector = nullptr,
                                         const std::vector<std::string>* names = nullptr) {
  ConfluenceReport rep;
  rep.trials = trials;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  auto show = [&](const std::vector<Letter>& ls) {
    if (names) return format_letters(ls, *names);
    std::string s;
    for (auto& l : ls) s += "g" + std::to_string(l.gen) + "^" + std::to_string(l.exp) + " ";
    return s;
  };
  for (std::size_t n = 0; n < trials; ++n) {
    Word w = random_word(rng, rs.rank);
    Reduction a = reduce(rs, w, Strategy::LeftmostFirstRule);
    Reduction b = reduce(rs, w, Strategy::RightmostLastRule);
    if (a.hit_limit || b.hit_limit) {
      ++rep.step_limit_hits;
      continue;
    }
    bool same = a.letters == b.letters && phase_equal(a.phase, b.phase, rs.mode);
    if (!same) {
      ++rep.mismatches;
      if (!rep.witness)
        rep.witness = show(w.letters) + " -> " + format_phase(a.phase) + show(a.letters) + " vs " +
                      format_phase(b.phase) + show(b.letters);
    }
    if (collector) {
      Monomial m = normal_form_monomial(w, *collector);
      Word merged;
      for (auto& l : a.letters) merged.push(l);
      if (!(merged.letters == Word::from_monomial(m).letters && phase_equal(a.phase, m.phase, rs.mode)))
        ++rep.collector_mismatches;
    }
  }
  return rep;
}

inline ConfluenceReport confluence_probe(const Presentation& p, std::size_t trials, std::uint64_t seed) {
  return confluence_probe(rewrite_system(p), trials, seed, &p, &p.names());
}

} // namespace ncf
