#pragma once

#include "ncfurst/calc_probe.hpp"
#include "ncfurst/centralizer.hpp"
#include "ncfurst/convergents.hpp"
#include "ncfurst/decompositions.hpp"
#include "ncfurst/furstenberg_io.hpp"
#include "ncfurst/identity_suite.hpp"
#include "ncfurst/ktheory.hpp"
#include "ncfurst/presentation_io.hpp"
#include "ncfurst/report.hpp"
#include "ncfurst/torus_dynamics.hpp"
#include "ncfurst/towers.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncf::cli {

/// Bad flags or parameter values; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const double kDefaultTheta = std::numbers::sqrt2 - 1.0;
inline const double kDefaultGamma = (std::sqrt(5.0) - 1.0) / 2.0;

struct RunConfig {
  std::string command;
  std::map<std::string, std::vector<std::string>> params; // flag name without dashes -> values
  Format format = Format::Json;
  std::uint64_t seed = 1;
  std::optional<double> tol;
};

struct CommandInfo {
  std::string name;
  std::string summary;
  std::string example;
  std::vector<std::string> keys; // accepted flags besides --format, --seed, --tol
};

inline const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> c{
      {"identity-check", "random inverse and conjugation round trips for Furstenberg automorphisms",
       "ncf identity-check --trials 50 --seed 7", {"trials", "d", "box", "theta", "gamma"}},
      {"ktheory", "K-groups of a crossed product by Z from its actions on K0 and K1",
       "ncf ktheory --d 3 --format csv", {"d", "a0", "a1"}},
      {"trace-range", "subgroup of Q + Q theta + Q gamma generated by rational triples",
       "ncf trace-range --gen 1,0,0 --gen 0,1,0 --gen 0,0,1", {"gen"}},
      {"centralizer", "dimension of twisted-centralizer solutions supported in a box",
       "ncf centralizer --case related --related 0,2 --box 6", {"case", "box", "d", "related", "f-const"}},
      {"presentation-nf", "normal form of a word in a presentation",
       "ncf presentation-nf --presentation A53 --word \"v u\"", {"presentation", "word", "d", "f-const", "params"}},
      {"presentation-check", "verify a presentation-level isomorphism by rewriting",
       "ncf presentation-check --which mw3", {"which", "broken", "d", "f-const", "params"}},
      {"confluence", "compare two reduction strategies on random words",
       "ncf confluence --presentation A56 --trials 1000", {"presentation", "trials", "d", "f-const", "params"}},
      {"fuzzy-implement", "implement a Furstenberg automorphism on the q x q clock-shift model",
       "ncf fuzzy-implement --q 101 --d 1 --f-const 0,0,0",
       {"q", "p", "s", "theta", "gamma", "d", "f-const", "f-samples"}},
      {"fuzzy-tower", "Kakutani-Rokhlin tower for rotation by s on Z/q",
       "ncf fuzzy-tower --q 10946 --s 6765 --height 5 --marker 105", {"q", "s", "height", "marker"}},
      {"fuzzy-verify", "trace-norm tower conditions under Ad(V^s)",
       "ncf fuzzy-verify --q 10946 --s 6765 --height 5 --marker 105 --tol 0.15",
       {"q", "s", "p", "theta", "height", "marker"}},
      {"dynamics-avg", "Birkhoff averages of torus characters along a skew-product orbit",
       "ncf dynamics-avg --d 1 --count 100000 --box 3", {"gamma", "d", "f-const", "f-samples", "count", "box", "start"}},
      {"dynamics-coverage", "fraction of grid cells visited by an orbit",
       "ncf dynamics-coverage --d 1 --count 1000000 --grid 50",
       {"gamma", "d", "f-const", "f-samples", "count", "grid", "start"}},
      {"coboundary", "solve psi(t + theta) - psi(t) = phi(t) on Fourier coefficients",
       "ncf coboundary --theta 0.6180339887498949 --K 64", {"theta", "K", "phi-file"}},
      {"convergents", "continued-fraction convergents of theta or p/q",
       "ncf convergents --theta 0.6180339887498949 --count 22", {"theta", "p", "q", "count"}},
  };
  return c;
}

inline std::string key_help(const std::string& k) {
  static const std::map<std::string, std::string> h{
      {"theta", "numeric theta"},
      {"gamma", "numeric gamma (rotation angle)"},
      {"d", "integer d"},
      {"f-const", "constant f as an exact angle p,q,r (p + q theta + r gamma)"},
      {"f-samples", "file of f samples on a uniform grid, one per line"},
      {"q", "dimension / denominator"},
      {"s", "rotation numerator"},
      {"p", "twist numerator / numerator"},
      {"height", "tower height H"},
      {"marker", "marker arc length c (0: round(sqrt q))"},
      {"box", "box half-width"},
      {"trials", "number of random trials"},
      {"count", "number of terms or iterates"},
      {"grid", "grid cells per axis"},
      {"a0", "action on K0, rows separated by ';'"},
      {"a1", "action on K1, rows separated by ';'"},
      {"gen", "rational triple p,q,r (repeatable)"},
      {"presentation", "A_theta, crossed, A53, A56, A53param or a presentation file"},
      {"word", "word such as \"v u w^-1\""},
      {"which", "change-of-var, mw3, mw6 or mw53param"},
      {"broken", "negate the phase of alpha(v)"},
      {"params", "r1,r2,r3,r4,r5 for A53param"},
      {"case", "independent, related or lin"},
      {"related", "gamma = a + b theta as a,b"},
      {"start", "orbit start t1,t2"},
      {"K", "Fourier cutoff"},
      {"phi-file", "file of lines \"k re im\""},
  };
  return h.at(k);
}

namespace detail {

inline const CommandInfo& find_command(const std::string& name) {
  for (auto& c : commands())
    if (c.name == name) return c;
  throw UsageError("unknown command '" + name + "'");
}

/// Typed view of the parameter map; every read records the value used.
class Params {
public:
  Params(const RunConfig& cfg, Report& rep) : cfg_(cfg), rep_(rep) {
    auto& info = find_command(cfg.command);
    for (auto& [k, v] : cfg.params)
      if (std::find(info.keys.begin(), info.keys.end(), k) == info.keys.end())
        throw UsageError(cfg.command + ": unknown parameter --" + k);
  }

  bool has(const std::string& k) const { return cfg_.params.contains(k); }

  std::string str(const std::string& k, const std::string& def) {
    std::string v = has(k) ? cfg_.params.at(k).back() : def;
    rep_.set(k, v);
    return v;
  }
  std::vector<std::string> list(const std::string& k) const {
    return has(k) ? cfg_.params.at(k) : std::vector<std::string>{};
  }
  long long integer(const std::string& k, long long def) {
    long long v = def;
    if (has(k)) v = convert<long long>(k, [](const std::string& s, std::size_t* n) { return std::stoll(s, n); });
    rep_.set(k, v);
    return v;
  }
  int int32(const std::string& k, int def) {
    long long v = integer(k, def);
    if (v < INT32_MIN || v > INT32_MAX) throw UsageError("--" + k + " out of range");
    return static_cast<int>(v);
  }
  double real(const std::string& k, double def) {
    double v = def;
    if (has(k)) v = convert<double>(k, [](const std::string& s, std::size_t* n) { return std::stod(s, n); });
    rep_.set(k, v);
    return v;
  }
  bool flag(const std::string& k) {
    bool v = has(k);
    rep_.set(k, v);
    return v;
  }

private:
  template <class T, class F>
  T convert(const std::string& k, F f) const {
    const std::string& s = cfg_.params.at(k).back();
    try {
      std::size_t n = 0;
      T v = f(s, &n);
      if (n == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("--" + k + ": cannot parse '" + s + "'");
  }

  const RunConfig& cfg_;
  Report& rep_;
};

inline Phase parse_triple_arg(const std::string& k, const std::string& s) {
  try {
    return ncf::detail::parse_triple(s);
  } catch (const std::exception& e) {
    throw UsageError("--" + k + ": " + e.what());
  }
}

inline std::vector<double> parse_doubles(const std::string& k, const std::string& s, std::size_t n) {
  std::vector<double> out;
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  for (double x; in >> x;) out.push_back(x);
  if (out.size() != n || !in.eof()) throw UsageError("--" + k + ": expected " + std::to_string(n) + " numbers");
  return out;
}

inline double tol_or(const RunConfig& cfg, Report& rep, double def) {
  double t = cfg.tol.value_or(def);
  rep.set("tol", t);
  return t;
}

/// f on the circle, sampled at m / n: a constant angle or a sample file read by linear interpolation.
inline std::vector<double> f_grid(Params& ps, const Numerics& values, std::size_t n) {
  if (ps.has("f-const") && ps.has("f-samples")) throw UsageError("give --f-const or --f-samples, not both");
  if (ps.has("f-samples")) {
    std::string path = ps.str("f-samples", "");
    SkewProduct lerp{0.0, 0, read_samples(path)};
    if (lerp.f.empty()) throw UsageError("--f-samples: no samples in " + path);
    std::vector<double> out(n);
    for (std::size_t m = 0; m < n; ++m) out[m] = lerp.f_at(static_cast<double>(m) / static_cast<double>(n));
    return out;
  }
  Phase c = parse_triple_arg("f-const", ps.str("f-const", "0,0,0"));
  return std::vector<double>(n, c.angle(values));
}

inline MWParams parse_mw_params(Params& ps) {
  auto v = parse_doubles("params", ps.str("params", "1,0,1,1,0"), 5);
  MWParams r;
  int* dst[5] = {&r.r1, &r.r2, &r.r3, &r.r4, &r.r5};
  for (int i = 0; i < 5; ++i) {
    if (v[i] != std::floor(v[i])) throw UsageError("--params: entries must be integers");
    *dst[i] = static_cast<int>(v[i]);
  }
  return r;
}

inline Presentation named_presentation(Params& ps) {
  std::string name = ps.str("presentation", "A_theta");
  if (name == "A_theta") return a_theta_presentation();
  if (name == "crossed")
    return crossed_presentation(Phase::theta(), Phase::gamma(), ps.int32("d", 1),
                                parse_triple_arg("f-const", ps.str("f-const", "0,0,0")));
  if (name == "A53") return mw_presentation(MWName::A53);
  if (name == "A56") return mw_presentation(MWName::A56);
  if (name == "A53param") return mw_presentation(MWName::A53Param, parse_mw_params(ps));
  std::ifstream in(name);
  if (!in) throw UsageError("--presentation: not a built-in name and no such file: " + name);
  return read_presentation(in);
}

inline std::string compact_row_label(int m, int n) { return std::to_string(m) + "," + std::to_string(n); }

// -- commands -------------------------------------------------------------

inline void cmd_identity_check(const RunConfig& cfg, Params& ps, Report& rep) {
  IdentitySuiteConfig sc;
  sc.instances = ps.int32("trials", sc.instances);
  sc.max_abs_d = ps.int32("d", sc.max_abs_d);
  sc.box = ps.int32("box", sc.box);
  sc.values = {ps.real("theta", kDefaultTheta), ps.real("gamma", sc.values.gamma)};
  sc.tol = tol_or(cfg, rep, sc.tol);
  sc.seed = cfg.seed;
  if (sc.instances < 0 || sc.max_abs_d < 0 || sc.box < 0) throw UsageError("counts must be non-negative");
  auto r = run_identity_suite(sc);
  rep.set("instances", r.instances)
      .set("exact_instances", r.exact_instances)
      .set("max_inverse", r.max_inverse)
      .set("max_conj", r.max_conj)
      .set("max_conj2", r.max_conj2)
      .set("exact_failures", r.exact_failures);
  if (!r.ok(sc.tol)) rep.fail(r.witness.value_or("residual above tolerance"));
}

inline void cmd_ktheory(const RunConfig&, Params& ps, Report& rep) {
  IntMatrix a0, a1;
  if (ps.has("a0") || ps.has("a1")) {
    if (ps.has("d")) throw UsageError("give --d or --a0/--a1, not both");
    try {
      a0 = IntMatrix::parse(ps.str("a0", "1"));
      a1 = IntMatrix::parse(ps.str("a1", "1"));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    rep.csv_keys = {"a0", "a1", "K0", "K1"};
  } else {
    long long d = ps.integer("d", 1);
    a0 = IntMatrix::identity(2);
    a1 = IntMatrix::identity(2);
    a1(0, 1) = d;
    rep.csv_keys = {"d", "K0", "K1"};
  }
  PVResult r;
  try {
    r = pv_kgroups(a0, a1);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  rep.set("K0", r.K0.str()).set("K1", r.K1.str());
}

inline void cmd_trace_range(const RunConfig&, Params& ps, Report& rep) {
  auto gens = ps.list("gen");
  if (gens.empty()) gens = {"1,0,0", "0,1,0", "0,0,1"};
  std::vector<std::array<Rational, 3>> triples;
  for (auto& g : gens) {
    std::string t = g;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream in(t);
    std::array<Rational, 3> x;
    std::string tok;
    int n = 0;
    try {
      for (; in >> tok; ++n)
        if (n < 3) x[n] = Rational::parse(tok);
    } catch (const std::exception& e) {
      throw UsageError("--gen '" + g + "': " + e.what());
    }
    if (n != 3) throw UsageError("--gen '" + g + "': expected three rationals p,q,r");
    triples.push_back(x);
  }
  rep.set("gen", gens);
  auto tr = trace_range(triples);
  rep.set("rank", tr.generators.size()).set("range", tr.str());
}

inline void cmd_centralizer(const RunConfig&, Params& ps, Report& rep) {
  std::string which = ps.str("case", "independent");
  int box = ps.int32("box", 6);
  if (box < 0) throw UsageError("--box must be non-negative");
  auto mono = [](const AlgebraHandle& a, int m, int n, Phase ph = {}) {
    return Element::monomial(a, {m, n}, Scalar::exact(1, ph));
  };
  AlgebraHandle alg;
  std::vector<TwistedConstraint> cons;
  if (which == "independent" || which == "related") {
    if (which == "related") {
      auto ab = parse_doubles("related", ps.str("related", "0,2"), 2);
      if (ab[0] != std::floor(ab[0]) || ab[1] != std::floor(ab[1]))
        throw UsageError("--related: a and b must be integers");
      alg = rotation_algebra(Related{static_cast<int>(ab[0]), static_cast<int>(ab[1])});
    } else {
      alg = rotation_algebra(Independent{});
    }
    // w u = e(gamma) u w
    cons = {{mono(alg, 1, 0), mono(alg, 1, 0, Phase::gamma())}};
  } else if (which == "lin") {
    // w commutes with u and w v = e(rho) u^d v w
    alg = rotation_algebra(Independent{});
    int d = ps.int32("d", 2);
    Phase rho = parse_triple_arg("f-const", ps.str("f-const", "0,0,0"));
    cons = {{mono(alg, 1, 0), mono(alg, 1, 0)}, {mono(alg, 0, 1), mono(alg, d, 1, rho)}};
  } else {
    throw UsageError("--case must be independent, related or lin");
  }
  auto r = centralizer(cons, box, alg);
  rep.set("dimension", r.dimension)
      .set("unknowns", r.unknowns)
      .set("forced_zero", r.forced_zero)
      .set("components", r.components)
      .set("inconsistent", r.inconsistent);
}

inline void cmd_presentation_nf(const RunConfig&, Params& ps, Report& rep) {
  Presentation p = named_presentation(ps);
  if (!ps.has("word")) throw UsageError("presentation-nf needs --word");
  std::string text = ps.str("word", "");
  Word w;
  try {
    w = parse_word(text, p);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--word: ") + e.what());
  }
  Monomial m = normal_form_monomial(w, p);
  rep.set("normal_form", format_monomial(m, p.names())).set("is_identity", is_identity(m, p.mode()));
}

inline void cmd_presentation_check(const RunConfig&, Params& ps, Report& rep) {
  std::string which = ps.str("which", "mw3");
  bool broken = ps.flag("broken");
  auto build = [&]() -> Decomposition {
    if (broken && which != "mw3" && which != "mw53param") throw UsageError("--broken applies to mw3 and mw53param");
    if (which == "change-of-var")
      return change_of_variables(ps.int32("d", 1), parse_triple_arg("f-const", ps.str("f-const", "0,0,0")));
    if (which == "mw3") return mw3_decomposition(MWName::A53, {}, broken);
    if (which == "mw6") return mw6_decomposition();
    if (which == "mw53param") {
      MWParams r = parse_mw_params(ps);
      rep.set("simplicity_conditions", mw_simplicity(r).all());
      return mw3_decomposition(MWName::A53Param, r, broken);
    }
    throw UsageError("--which must be change-of-var, mw3, mw6 or mw53param");
  };
  Decomposition dec = build();
  auto c = check_decomposition(dec);
  rep.set("source", dec.source.name)
      .set("target", dec.target.name)
      .set("relations_checked", c.forward.relations_checked + c.backward.relations_checked)
      .set("forward_ok", c.forward.ok)
      .set("backward_ok", c.backward.ok);
  for (auto* s : {&c.forward, &c.backward})
    if (!s->ok) {
      rep.fail(s->witness.value_or("?"));
      if (s->residue && !rep.record.contains("residue")) rep.set("residue", *s->residue);
    }
}

inline void cmd_confluence(const RunConfig& cfg, Params& ps, Report& rep) {
  Presentation p = named_presentation(ps);
  long long trials = ps.integer("trials", 1000);
  if (trials < 0) throw UsageError("--trials must be non-negative");
  auto r = confluence_probe(p, static_cast<std::size_t>(trials), cfg.seed);
  rep.set("mismatches", r.mismatches)
      .set("collector_mismatches", r.collector_mismatches)
      .set("step_limit_hits", r.step_limit_hits);
  if (r.mismatches || r.collector_mismatches)
    rep.fail(r.witness.value_or("strategy and collector normal forms differ"));
}

inline FuzzyParams fuzzy_params(Params& ps, int q_def, double theta, std::optional<double> gamma, int s_def = 0) {
  int q = ps.int32("q", q_def);
  if (q < 2) throw UsageError("--q must be at least 2");
  auto near = [q](double x) { return static_cast<int>(ncf::detail::mod(std::llround(x * q), q)); };
  int p = ps.int32("p", near(theta));
  int s = ps.int32("s", gamma ? near(*gamma) : s_def);
  try {
    return make_fuzzy_params(q, p, s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

inline void cmd_fuzzy_implement(const RunConfig& cfg, Params& ps, Report& rep) {
  Numerics v{ps.real("theta", kDefaultTheta), ps.real("gamma", kDefaultGamma)};
  FuzzyParams fp = fuzzy_params(ps, 1009, v.theta, v.gamma);
  int d = ps.int32("d", 1);
  double tol = tol_or(cfg, rep, 1e-10);
  auto im = implement_auto(fp, d, f_grid(ps, v, static_cast<std::size_t>(fp.q)));
  const double bound = 2.0 * std::numbers::pi / fp.q;
  rep.set("holonomy_angle", im.report.holonomy_angle)
      .set("correction_sup", im.report.correction_sup)
      .set("correction_bound", bound)
      .set("defect_u", im.report.defect_u)
      .set("defect_v", im.report.defect_v);
  if (im.report.defect_u > tol) rep.fail("Ad(W)(U) differs from omega^s U");
  if (im.report.defect_v > tol) rep.fail("Ad(W)(V) differs from ghat(U) U^d V");
  if (im.report.correction_sup > bound) rep.fail("holonomy correction exceeds 2 pi / q");
}

inline TowerSpec build_tower(Params& ps, int q, int s, int marker_def) {
  int h = ps.int32("height", 5);
  int c = ps.int32("marker", marker_def);
  if (h < 1) throw UsageError("--height must be positive");
  if (c < 0) throw UsageError("--marker must be non-negative");
  try {
    return kakutani_tower(q, s, h, c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

inline void cmd_fuzzy_tower(const RunConfig&, Params& ps, Report& rep) {
  int q = ps.int32("q", 10946), s = ps.int32("s", 6765);
  if (q < 2) throw UsageError("--q must be at least 2");
  TowerSpec tw = build_tower(ps, q, s, 0);
  rep.set("c", tw.marker)
      .set("levels", tw.levels.size())
      .set("covered", tw.covered())
      .set("residual", tw.residual())
      .set("residual_bound", static_cast<double>(tw.height - 1) * tw.marker / q);
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (auto& [t, n] : tw.return_histogram) hist[std::to_string(t)] = n;
  rep.set("return_histogram", hist);
  rep.columns = {"k", "size", "arcs"};
  for (std::size_t k = 0; k < tw.levels.size(); ++k)
    rep.rows.push_back({k, tw.level_size(k), tw.levels[k].size()});
}

inline void cmd_fuzzy_verify(const RunConfig& cfg, Params& ps, Report& rep) {
  double theta = ps.real("theta", kDefaultTheta);
  FuzzyParams fp = fuzzy_params(ps, 10946, theta, std::nullopt, 6765);
  TowerSpec tw = build_tower(ps, fp.q, fp.s, 105);
  double eps = tol_or(cfg, rep, 0.15);

  auto [U, V] = clock_shift(fp);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> g;
  FuzzyOperator poly = FuzzyOperator::identity(fp.q) * complex(g(rng), g(rng));
  FuzzyOperator up = FuzzyOperator::identity(fp.q);
  for (int k = 1; k <= 3; ++k) {
    up = up * U;
    poly = poly + up * complex(g(rng), g(rng)) + up.adjoint() * complex(g(rng), g(rng));
  }
  FuzzyOperator W = FuzzyOperator::shift(fp.q, fp.s);
  auto r = verify_tower(tw, W, {V, poly}, eps);
  rep.set("residual", r.residual)
      .set("cycling_defect", r.cycling_defect)
      .set("commutator_max", r.commutator_max[0])
      .set("commutator_poly", r.commutator_max[1])
      .set("q", fp.q)
      .set("s", fp.s)
      .set("H", tw.height)
      .set("c", tw.marker)
      .set("passed", r.passed());
  if (!r.cycling_ok) rep.fail("cycling defect not below epsilon");
  if (!r.residual_ok) rep.fail("residual trace not below epsilon");
  if (!r.commutator_ok) rep.fail("commutator with V or P(U) not below epsilon");
}

inline SkewProduct skew_product(Params& ps) {
  double gamma = ps.real("gamma", kDefaultGamma);
  int d = ps.int32("d", 1);
  std::vector<double> f;
  if (ps.has("f-samples")) f = f_grid(ps, {0.0, gamma}, 4096);
  else if (ps.has("f-const")) f = f_grid(ps, {0.0, gamma}, 1);
  return {gamma, d, std::move(f)};
}

inline TorusPoint start_point(Params& ps) {
  auto v = parse_doubles("start", ps.str("start", "0,0"), 2);
  return {mod1(v[0]), mod1(v[1])};
}

inline void cmd_dynamics_avg(const RunConfig& cfg, Params& ps, Report& rep) {
  SkewProduct h = skew_product(ps);
  long long n = ps.integer("count", 100000);
  int box = ps.int32("box", 3);
  TorusPoint x = start_point(ps);
  double tol = tol_or(cfg, rep, 0.05);
  if (n < 1) throw UsageError("--count must be positive");
  if (box < 0) throw UsageError("--box must be non-negative");
  rep.columns = {"m", "n", "re", "im", "modulus"};
  double worst = 0.0;
  std::string worst_at;
  for (int m = -box; m <= box; ++m)
    for (int k = -box; k <= box; ++k) {
      complex a = birkhoff_character_avg(h, m, k, x, n);
      rep.rows.push_back({m, k, a.real(), a.imag(), std::abs(a)});
      if (m == 0 && k == 0) {
        if (a != complex(1.0)) rep.fail("average of the trivial character is not 1");
      } else if (std::abs(a) > worst) {
        worst = std::abs(a);
        worst_at = compact_row_label(m, k);
      }
    }
  rep.set("max_modulus", worst);
  if (!worst_at.empty()) rep.set("max_at", worst_at);
  if (worst > tol) rep.fail("character " + worst_at + " has |average| " + std::to_string(worst));
}

inline void cmd_dynamics_coverage(const RunConfig& cfg, Params& ps, Report& rep) {
  SkewProduct h = skew_product(ps);
  long long n = ps.integer("count", 1000000);
  int g = ps.int32("grid", 50);
  TorusPoint x = start_point(ps);
  double tol = tol_or(cfg, rep, 0.0);
  if (g < 1) throw UsageError("--grid must be positive");
  double cov = minimality_probe(h, x, n, g);
  rep.set("coverage", cov).set("cells_hit", std::llround(cov * g * g));
  if (cov < 1.0 - tol) rep.fail("orbit misses grid cells");
}

inline std::vector<complex> read_phi(const std::string& path, int K) {
  std::ifstream in(path);
  if (!in) throw UsageError("--phi-file: cannot open " + path);
  std::vector<complex> phi(2 * static_cast<std::size_t>(K) + 1);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    long long k;
    double re, im = 0.0;
    if (!(ls >> k)) continue;
    if (!(ls >> re)) throw UsageError("--phi-file line " + std::to_string(lineno) + ": expected \"k re im\"");
    ls >> im;
    if (std::llabs(k) > K) continue;
    phi[static_cast<std::size_t>(k + K)] = {re, im};
  }
  return phi;
}

inline void cmd_coboundary(const RunConfig& cfg, Params& ps, Report& rep) {
  double theta = ps.real("theta", kDefaultGamma);
  int K = ps.int32("K", 64);
  if (K < 0) throw UsageError("--K must be non-negative");
  double tol = tol_or(cfg, rep, 1e-12);
  std::vector<complex> phi;
  if (ps.has("phi-file")) {
    phi = read_phi(ps.str("phi-file", ""), K);
  } else {
    // default phi(t) = sum_{k != 0} e(kt) / k^2
    phi.assign(2 * static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 1; k <= K; ++k) phi[K + k] = phi[K - k] = 1.0 / (static_cast<double>(k) * k);
  }
  auto r = coboundary_solve(theta, phi, tol);
  rep.set("mean_re", r.mean_obstruction.real())
      .set("mean_im", r.mean_obstruction.imag())
      .set("obstructed", r.obstructed)
      .set("min_divisor", r.min_divisor)
      .set("small_divisors", r.small_divisors.size())
      .set("psi_norm", r.partial_norms.empty() ? 0.0 : r.partial_norms.back());
  rep.columns = {"k", "re", "im", "modulus"};
  for (int k = -K; k <= K; ++k) {
    complex z = r.psi(k);
    rep.rows.push_back({k, z.real(), z.imag(), std::abs(z)});
  }
  if (r.obstructed) rep.fail("phi has nonzero mean, so it is not a coboundary");
}

inline void cmd_convergents(const RunConfig&, Params& ps, Report& rep) {
  int count = ps.int32("count", 20);
  if (count < 1) throw UsageError("--count must be positive");
  std::vector<Convergent> cs;
  double x;
  if (ps.has("p") || ps.has("q")) {
    if (ps.has("theta")) throw UsageError("give --theta or --p/--q, not both");
    long long p = ps.integer("p", 1), q = ps.integer("q", 1);
    if (q == 0) throw UsageError("--q must be nonzero");
    cs = convergents(p, q, count);
    x = static_cast<double>(p) / static_cast<double>(q);
  } else {
    x = ps.real("theta", kDefaultGamma);
    cs = convergents(x, count);
  }
  rep.set("found", cs.size());
  rep.columns = {"n", "s", "q", "q_error"};
  for (std::size_t i = 0; i < cs.size(); ++i)
    rep.rows.push_back({i, cs[i].s, cs[i].q,
                        static_cast<double>(std::abs(static_cast<long double>(cs[i].q) * x -
                                                     static_cast<long double>(cs[i].s)))});
}

} // namespace detail

/// Runs one command. Throws UsageError on bad parameters; a failed
/// mathematical check sets exit_code = 1 and a witness.
inline Report run(const RunConfig& cfg) {
  using Fn = void (*)(const RunConfig&, detail::Params&, Report&);
  static const std::map<std::string, Fn> table{
      {"identity-check", detail::cmd_identity_check}, {"ktheory", detail::cmd_ktheory},
      {"trace-range", detail::cmd_trace_range},       {"centralizer", detail::cmd_centralizer},
      {"presentation-nf", detail::cmd_presentation_nf}, {"presentation-check", detail::cmd_presentation_check},
      {"confluence", detail::cmd_confluence},         {"fuzzy-implement", detail::cmd_fuzzy_implement},
      {"fuzzy-tower", detail::cmd_fuzzy_tower},       {"fuzzy-verify", detail::cmd_fuzzy_verify},
      {"dynamics-avg", detail::cmd_dynamics_avg},     {"dynamics-coverage", detail::cmd_dynamics_coverage},
      {"coboundary", detail::cmd_coboundary},         {"convergents", detail::cmd_convergents},
  };
  auto it = table.find(cfg.command);
  if (it == table.end()) throw UsageError("unknown command '" + cfg.command + "'");
  Report rep;
  rep.set("command", cfg.command);
  detail::Params ps(cfg, rep);
  it->second(cfg, ps, rep);
  // seed goes last among the inputs so the record reads command, params, seed, results
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  out["command"] = cfg.command;
  out["seed"] = cfg.seed;
  for (auto& [k, v] : rep.record.items())
    if (k != "command") out[k] = v;
  rep.record = std::move(out);
  if (!rep.csv_keys.empty()) rep.csv_keys.erase(std::remove(rep.csv_keys.begin(), rep.csv_keys.end(), "seed"), rep.csv_keys.end());
  return rep;
}

/// argv front end: prints the report to `out`, diagnostics to `err`, returns the exit code.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ncf: computations around noncommutative Furstenberg transformations"};
  app.require_subcommand(1);
  app.footer("Run 'ncf <command> --help' for the flags of one command.");

  std::map<std::string, std::map<std::string, std::vector<std::string>>> store;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, std::string> format, tol, seed;
  for (auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.summary);
    sub->footer("Example:\n  " + c.example);
    for (auto& k : c.keys) {
      if (k == "broken") {
        sub->add_flag("--" + k, flags[c.name][k], key_help(k));
      } else if (k == "gen") {
        sub->add_option("--" + k, store[c.name][k], key_help(k))->allow_extra_args(false);
      } else {
        sub->add_option("--" + k, store[c.name][k], key_help(k))->expected(1);
      }
    }
    sub->add_option("--format", format[c.name], "json, csv or text")->default_str("json");
    sub->add_option("--seed", seed[c.name], "random seed (recorded in the output)")->default_str("1");
    sub->add_option("--tol", tol[c.name], "tolerance for the command's checks");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  RunConfig cfg;
  cfg.command = sub->get_name();
  try {
    for (auto& [k, v] : store[cfg.command])
      if (sub->count("--" + k)) cfg.params[k] = v;
    for (auto& [k, on] : flags[cfg.command])
      if (on) cfg.params[k] = {"1"};
    if (sub->count("--format")) cfg.format = parse_format(format[cfg.command]);
    if (sub->count("--seed")) {
      const std::string& s = seed[cfg.command];
      std::size_t n = 0;
      cfg.seed = std::stoull(s, &n);
      if (n != s.size() || s.front() == '-') throw UsageError("--seed: cannot parse '" + s + "'");
    }
    if (sub->count("--tol")) {
      const std::string& s = tol[cfg.command];
      std::size_t n = 0;
      cfg.tol = std::stod(s, &n);
      if (n != s.size() || !(*cfg.tol >= 0.0)) throw UsageError("--tol: cannot parse '" + s + "'");
    }
    Report rep = run(cfg);
    out << emit(rep, cfg.format);
    if (rep.exit_code != 0 && rep.record.contains("witness"))
      err << cfg.command << ": check failed: " << rep.record["witness"].get<std::string>() << '\n';
    return rep.exit_code;
  } catch (const UsageError& e) {
    err << cfg.command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << cfg.command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << cfg.command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) { // input files
    err << cfg.command << ": " << e.what() << '\n';
    return 2;
  }
}

} // namespace ncf::cli
