#include "ncfurst/decompositions.hpp"
#include "ncfurst/presentation_io.hpp"
#include "ncfurst/presentations.hpp"
#include "test_support.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

using namespace ncf;
using namespace ncf::testing;

namespace {

Presentation a_theta() { return make_presentation("A_theta", {"u", "v"}, 2, {{1, 0, Phase::theta(), {}}}); }

Monomial nf(const std::string& w, const Presentation& p) { return normal_form_monomial(parse_word(w, p), p); }

bool equal_nf(const std::string& a, const std::string& b, const Presentation& p) {
  Monomial x = nf(a, p), y = nf(b, p);
  return x.exps == y.exps && phase_equal(x.phase, y.phase, p.mode());
}

Word w(const std::string& s, const Presentation& p) { return parse_word(s, p); }

// the relations as displayed for the Milnes-Walters algebras, lambda = e(theta)
void expect_mw_relations(const Presentation& p, const MWParams& r, bool a56) {
  auto holds = [&](const std::string& lhs, Phase ph, const std::string& rhs) {
    Word l = w(lhs, p), rr = w(rhs, p);
    rr.phase = ph;
    Monomial m = normal_form_monomial(l * rr.inverse(), p);
    EXPECT_TRUE(is_identity(m, p.mode())) << lhs << " = " << format_phase(ph) << rhs;
  };
  if (a56) {
    holds("u v", {}, "w v u");
    holds("u w", {}, "x w u");
    holds("u x", Phase::theta(), "x u");
    holds("v w", Phase::theta(), "w v");
  } else {
    holds("u v", Phase::theta(r.r2), "x^" + std::to_string(r.r1) + " v u");
    holds("u w", Phase::theta(r.r5), "w u");
    holds("u x", Phase::theta(r.r3), "x u");
    holds("v w", Phase::theta(r.r4), "w v");
  }
  holds("v x", {}, "x v");
  holds("w x", {}, "x w");
}

Presentation mw3_base() {
  return sub_presentation(mw_presentation(MWName::A53), {0, 1, 3}, "B3");
}
Presentation mw3_crossed(Phase v_phase = Phase::theta()) {
  Presentation b = mw3_base();
  // alpha(u) = u, alpha(v) = lambda v, alpha(x) = x
  std::vector<Monomial> alpha{{{}, {1, 0, 0}}, {v_phase, {0, 1, 0}}, {{}, {0, 0, 1}}};
  return crossed_by_automorphism(b, alpha, "z", "B3 x Z");
}
Presentation mw6_base() {
  return sub_presentation(mw_presentation(MWName::A56), {0, 2, 3}, "B6");
}
Presentation mw6_crossed() {
  Presentation b = mw6_base();
  // alpha(u) = w* u, alpha(w) = lambda w, alpha(x) = x, written in normal form
  Monomial au = normal_form_monomial(w("w^-1 u", b), b);
  std::vector<Monomial> alpha{au, {Phase::theta(), {0, 1, 0}}, {{}, {0, 0, 1}}};
  return crossed_by_automorphism(b, alpha, "z", "B6 x Z");
}

} // namespace

TEST(Presentations, NormalFormExamples) {
  auto at = a_theta();
  Monomial vu = nf("v u", at);
  EXPECT_EQ(vu.exps, (Exponents{1, 1}));
  EXPECT_EQ(vu.phase, Phase::theta());

  auto a53 = mw_presentation(MWName::A53);
  Monomial m = nf("v u", a53);
  EXPECT_EQ(m.exps, (Exponents{1, 1, 0, -1}));
  EXPECT_EQ(m.phase, Phase::theta());
  // the same answer from both letter-level reduction orders
  auto rs = rewrite_system(a53);
  for (auto s : {Strategy::LeftmostFirstRule, Strategy::RightmostLastRule}) {
    Reduction r = reduce(rs, w("v u", a53), s);
    Word merged;
    for (auto& l : r.letters) merged.push(l);
    EXPECT_EQ(merged.letters, Word::from_monomial(m).letters);
    EXPECT_EQ(r.phase, m.phase);
  }
  Monomial wxw = nf("w x w^-1", a53);
  EXPECT_EQ(wxw.exps, (Exponents{0, 0, 0, 1}));
  EXPECT_TRUE(wxw.phase.is_identity());
}

TEST(Presentations, NormalFormIsIdempotentAndInvertible) {
  std::mt19937_64 rng(41);
  for (auto p : {a_theta(), mw_presentation(MWName::A53), mw_presentation(MWName::A56),
                 crossed_presentation(Phase::theta(), Phase::gamma(), 2, Phase(Rational(1, 3))),
                 mw_presentation(MWName::A53Param, {2, 1, 3, 1, 1}), mw3_crossed(), mw6_crossed()}) {
    for (int t = 0; t < 200; ++t) {
      Word x = random_word(rng, p.rank());
      Monomial m = normal_form_monomial(x, p);
      Monomial again = normal_form_monomial(Word::from_monomial(m), p);
      EXPECT_EQ(again, m);
      EXPECT_TRUE(is_identity(normal_form_monomial(x * x.inverse(), p), p.mode()));
      EXPECT_TRUE(is_identity(normal_form_monomial(x.inverse() * x, p), p.mode()));
    }
  }
}

TEST(Presentations, CrossedPresentation) {
  auto plain = crossed_presentation(Phase::theta(), Phase::gamma(), 0, Phase());
  EXPECT_TRUE(plain.table().pure_phase());
  for (auto& rel : relations(plain))
    for (auto& l : rel.rhs.letters) EXPECT_TRUE(l.gen == rel.i || l.gen == rel.j);

  for (int d : {-3, 1, 2}) {
    Phase rho(Rational(2, 7), 1, -1);
    auto p = crossed_presentation(Phase::theta(), Phase::gamma(), d, rho);
    EXPECT_EQ(p.table().direction(), Collection::Head);
    Monomial m = nf("w v w^-1", p);
    EXPECT_EQ(m.exps, (Exponents{d, 1, 0}));
    EXPECT_EQ(m.phase, rho);
    Word target = w("u^" + std::to_string(d) + " v", p);
    target.phase = rho;
    EXPECT_TRUE(is_identity(normal_form_monomial(w("w v w^-1", p) * target.inverse(), p), p.mode()));
    Monomial wu = nf("w u w^-1", p);
    EXPECT_EQ(wu.exps, (Exponents{1, 0, 0}));
    EXPECT_EQ(wu.phase, Phase::gamma());
  }
}

TEST(Presentations, MilnesWaltersRelations) {
  auto a53 = mw_presentation(MWName::A53);
  EXPECT_EQ(a53.table().rules().size(), 6u);
  EXPECT_EQ(relations(a53).size(), 6u);
  expect_mw_relations(a53, {}, false);

  auto special = mw_presentation(MWName::A53Param, {1, 0, 1, 1, 0});
  ASSERT_EQ(special.table().rules().size(), a53.table().rules().size());
  for (std::size_t n = 0; n < 6; ++n) {
    auto& x = special.table().rules()[n];
    auto& y = a53.table().rules()[n];
    EXPECT_EQ(x.j, y.j);
    EXPECT_EQ(x.i, y.i);
    EXPECT_EQ(x.phase, y.phase);
    EXPECT_EQ(x.extra, y.extra);
  }
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> pr(0, 4);
  for (int t = 0; t < 30; ++t) {
    MWParams r{pr(rng), pr(rng), pr(rng), pr(rng), pr(rng)};
    expect_mw_relations(mw_presentation(MWName::A53Param, r), r, false);
  }

  auto a56 = mw_presentation(MWName::A56);
  expect_mw_relations(a56, {}, true);
  EXPECT_TRUE(equal_nf("u v", "w v u", a56));
  auto rs = rewrite_system(a56);
  Reduction l = reduce(rs, w("u v", a56), Strategy::LeftmostFirstRule);
  Reduction r = reduce(rs, w("u v", a56), Strategy::RightmostLastRule);
  EXPECT_EQ(l.letters, r.letters);
  EXPECT_EQ(l.phase, r.phase);
  EXPECT_THROW(parse_mw_name("A54"), std::invalid_argument);
}

TEST(Presentations, SimplicityConditionsAreReported) {
  EXPECT_TRUE(mw_simplicity({1, 0, 1, 1, 0}).all());
  EXPECT_TRUE(mw_simplicity({2, 1, 4, 2, 1}).all());
  auto bad = mw_simplicity({0, 0, 1, 1, 1});
  EXPECT_FALSE(bad.all());
  EXPECT_FALSE(bad.conditions[0].second);
  EXPECT_FALSE(bad.conditions[3].second);
  // still builds
  EXPECT_NO_THROW(mw_presentation(MWName::A53Param, {0, 0, 1, 1, 1}));
}

TEST(Presentations, ChangeOfVariables) {
  for (int d : {-2, 0, 1, 3})
    for (Phase rho : {Phase(), Phase(Rational(1, 4)), Phase(Rational(1, 5), 2, 1)}) {
      auto src = crossed_presentation(Phase::theta(), Phase::gamma(), d, rho);
      auto dst = crossed_presentation(Phase::gamma(), Phase::theta(), -d, rho.inverse());
      GeneratorSubstitution s{{Word::letter(0), Word::letter(2), Word::letter(1)}};
      auto res = check_substitution(src, dst, s);
      EXPECT_TRUE(res.ok) << (res.witness ? *res.witness + " -> " + *res.residue : "");
      EXPECT_EQ(res.relations_checked, 3u);
      // the inverse map goes back
      EXPECT_TRUE(check_substitution(dst, src, s).ok);
      // keeping d fails
      if (d != 0) {
        EXPECT_FALSE(check_substitution(src, crossed_presentation(Phase::gamma(), Phase::theta(), d, rho.inverse()), s).ok);
      }
    }
}

TEST(Presentations, MilnesWalters53Decomposition) {
  auto a53 = mw_presentation(MWName::A53);
  auto cp = mw3_crossed();
  ASSERT_EQ(cp.names(), (std::vector<std::string>{"z", "u", "v", "x"}));
  // A53 -> B x Z: u, v, x to themselves, w to z*
  GeneratorSubstitution to_cp{{Word::letter(1), Word::letter(2), Word::letter(0, -1), Word::letter(3)}};
  auto fwd = check_substitution(a53, cp, to_cp);
  EXPECT_TRUE(fwd.ok) << *fwd.witness;
  EXPECT_EQ(fwd.relations_checked, 6u);
  // B x Z -> A53: z to w*
  GeneratorSubstitution to_mw{{Word::letter(2, -1), Word::letter(0), Word::letter(1), Word::letter(3)}};
  EXPECT_TRUE(check_substitution(cp, a53, to_mw).ok);

  auto broken = mw3_crossed(Phase::theta(-1));
  auto res = check_substitution(a53, broken, to_cp);
  ASSERT_FALSE(res.ok);
  EXPECT_EQ(*res.witness, "w v = e(0,-1,0) v w");
  EXPECT_NE(res.residue->find("e(0,"), std::string::npos);
}

TEST(Presentations, MilnesWalters56Decomposition) {
  auto a56 = mw_presentation(MWName::A56);
  auto cp = mw6_crossed();
  ASSERT_EQ(cp.names(), (std::vector<std::string>{"z", "u", "w", "x"}));
  // canonical unitary to v
  GeneratorSubstitution to_cp{{Word::letter(1), Word::letter(0), Word::letter(2), Word::letter(3)}};
  auto fwd = check_substitution(a56, cp, to_cp);
  EXPECT_TRUE(fwd.ok) << *fwd.witness;
  GeneratorSubstitution to_mw{{Word::letter(1), Word::letter(0), Word::letter(2), Word::letter(3)}};
  EXPECT_TRUE(check_substitution(cp, a56, to_mw).ok);
  // crossed product relation z b z* = alpha(b) on the generators
  EXPECT_TRUE(equal_nf("z u z^-1", "w^-1 u", cp));
  Monomial zw = nf("z w z^-1", cp);
  EXPECT_EQ(zw.exps, (Exponents{0, 0, 1, 0}));
  EXPECT_EQ(zw.phase, Phase::theta());
}

TEST(Presentations, HeadBaseCrossedProduct) {
  // A_theta as a head table is the same thing; z last
  auto base = crossed_presentation(Phase::theta(), Phase::gamma(), 2, Phase(Rational(1, 3)));
  auto sub = sub_presentation(base, {0, 1}, "A");
  std::vector<Monomial> alpha{{Phase::gamma(), {1, 0}}, {Phase(Rational(1, 3)), {2, 1}}};
  auto cp = crossed_by_automorphism(sub, alpha, "w", "A x Z");
  EXPECT_TRUE(check_substitution(base, cp, identity_substitution(base)).ok);
  EXPECT_TRUE(check_substitution(cp, base, identity_substitution(cp)).ok);
}

TEST(Presentations, IdentitySubstitutions) {
  for (auto p : {a_theta(), mw_presentation(MWName::A53), mw_presentation(MWName::A56),
                 mw_presentation(MWName::A53Param, {3, 1, 2, 5, 1}),
                 crossed_presentation(Phase::theta(), Phase::gamma(), -1, Phase(Rational(1, 2))), mw3_crossed(),
                 mw6_crossed()})
    EXPECT_TRUE(check_substitution(p, p, identity_substitution(p)).ok) << p.name;
}

TEST(Presentations, ConfluenceProbe) {
  for (auto p : {a_theta(), mw_presentation(MWName::A56), mw_presentation(MWName::A53),
                 crossed_presentation(Phase::theta(), Phase::gamma(), 2, Phase(Rational(1, 3))), mw3_crossed()}) {
    auto rep = confluence_probe(p, 1000, 7);
    EXPECT_EQ(rep.trials, 1000u);
    EXPECT_EQ(rep.mismatches, 0u) << p.name << " " << rep.witness.value_or("");
    EXPECT_EQ(rep.collector_mismatches, 0u) << p.name;
    EXPECT_EQ(rep.step_limit_hits, 0u) << p.name;
  }
  // v u -> u v and v u -> -u v
  RewriteSystem bad{2, Independent{}, {{1, 1, 0, 1, {}, {{0, 1}, {1, 1}}}, {1, 1, 0, 1, Phase(Rational(1, 2)), {{0, 1}, {1, 1}}}}};
  auto rep = confluence_probe(bad, 200, 7);
  EXPECT_GT(rep.mismatches, 0u);
  EXPECT_TRUE(rep.witness.has_value());
}

TEST(Presentations, PhaseAgreesWithClockShiftMatrices) {
  // theta = p / q: u -> clock U, v -> shift V with V U = omega U V
  const int q = 101, pnum = 37;
  const double th = double(pnum) / q;
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(q, q), V = Eigen::MatrixXcd::Zero(q, q);
  for (int j = 0; j < q; ++j) {
    U(j, j) = std::polar(1.0, 2 * std::numbers::pi * pnum * j / double(q));
    V((j + q - 1) % q, j) = 1.0; // V e_j = e_{j-1}
  }
  ASSERT_LT((V * U - std::polar(1.0, 2 * std::numbers::pi * th) * U * V).norm(), 1e-10);
  // apply a matrix power to a vector
  auto act = [&](const Eigen::MatrixXcd& M, int n, Eigen::VectorXcd x) {
    for (int t = 0; t < std::abs(n); ++t) x = n > 0 ? Eigen::VectorXcd(M * x) : Eigen::VectorXcd(M.adjoint() * x);
    return x;
  };
  auto at = a_theta();
  std::mt19937_64 rng(47);
  for (int t = 0; t < 50; ++t) {
    Word x = random_word(rng, 2, 12);
    Eigen::VectorXcd probe = Eigen::VectorXcd::Random(q);
    Eigen::VectorXcd lhs = probe;
    for (auto it = x.letters.rbegin(); it != x.letters.rend(); ++it) lhs = act(it->gen == 0 ? U : V, it->exp, lhs);
    Monomial m = normal_form_monomial(x, at);
    Eigen::VectorXcd rhs = m.phase.value({th, 0.0}) * act(U, m.exps[0], act(V, m.exps[1], probe));
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Presentations, TextRoundTrip) {
  for (auto p : {mw_presentation(MWName::A53), mw_presentation(MWName::A56),
                 crossed_presentation(Phase::theta(), Phase::gamma(), 2, Phase(Rational(1, 3)), Related{0, 2})}) {
    std::stringstream ss;
    write_presentation(ss, p);
    auto back = read_presentation(ss);
    EXPECT_EQ(back.names(), p.names());
    EXPECT_EQ(back.table().rules().size(), p.table().rules().size());
    EXPECT_EQ(back.table().direction(), p.table().direction());
    std::mt19937_64 rng(53);
    for (int t = 0; t < 50; ++t) {
      Word x = random_word(rng, p.rank());
      EXPECT_EQ(normal_form_monomial(x, back), normal_form_monomial(x, p));
    }
  }
  std::stringstream named("generators: u v\nv u -> phase(0,1,0)\n");
  auto p = read_presentation(named);
  EXPECT_EQ(nf("v u", p).phase, Phase::theta());
  std::stringstream bad("generators: u v\n1 0 => phase(0,1,0)\n");
  EXPECT_THROW(read_presentation(bad), std::runtime_error);
}

TEST(Decompositions, AgreeWithHandWrittenAutomorphisms) {
  auto d3 = mw3_decomposition();
  EXPECT_TRUE(check_decomposition(d3).ok());
  ASSERT_EQ(d3.target.names(), mw3_crossed().names());
  EXPECT_TRUE(check_substitution(d3.target, mw3_crossed(), identity_substitution(d3.target)).ok);
  EXPECT_TRUE(check_substitution(mw3_crossed(), d3.target, identity_substitution(d3.target)).ok);

  auto d6 = mw6_decomposition();
  EXPECT_TRUE(check_decomposition(d6).ok());
  ASSERT_EQ(d6.target.names(), mw6_crossed().names());
  EXPECT_TRUE(check_substitution(d6.target, mw6_crossed(), identity_substitution(d6.target)).ok);
  EXPECT_TRUE(check_substitution(mw6_crossed(), d6.target, identity_substitution(d6.target)).ok);

  auto broken = check_decomposition(mw3_decomposition(MWName::A53, {}, true));
  ASSERT_FALSE(broken.forward.ok);
  EXPECT_EQ(*broken.forward.witness, "w v = e(0,-1,0) v w");
}

TEST(Decompositions, ParametrizedFamilyAndChangeOfVariables) {
  for (MWParams r : {MWParams{}, MWParams{2, 1, 3, 1, 1}, MWParams{3, 1, 2, 5, 1}, MWParams{1, 0, 2, 2, 1}}) {
    auto c = check_decomposition(mw3_decomposition(MWName::A53Param, r));
    EXPECT_TRUE(c.ok()) << r.r1 << r.r2 << r.r3 << r.r4 << r.r5 << " " << c.forward.witness.value_or("")
                        << c.backward.witness.value_or("");
  }
  for (int d : {-1, 0, 2})
    EXPECT_TRUE(check_decomposition(change_of_variables(d, Phase(Rational(1, 3)))).ok());
  EXPECT_THROW(mw3_decomposition(MWName::A56), std::invalid_argument);
}
