#pragma once

#include "ncfurst/presentations.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ncf {

/// Plain-text presentation:
///
///   name: A53
///   generators: u v w x
///   mode: independent            # or: related <a> <b>   (gamma = a + b theta)
///   1 0 -> phase(0,1,0) 0 0 0 -1
///   2 1 -> phase(0,-1,0)
///
/// Each rule line reads "j i -> phase(p,q,r) m1 ... mk"; j and i are indices or
/// generator names, and the optional monomial has one exponent per generator.
inline Presentation read_presentation(std::istream& is) {
  std::string name = "presentation";
  std::vector<std::string> names;
  IndependenceMode mode = Independent{};
  std::vector<TwistRule> rules;
  bool have_gens = false;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw std::runtime_error("presentation line " + std::to_string(lineno) + ": " + why);
  };
  auto gen_index = [&](const std::string& tok) {
    for (std::size_t n = 0; n < names.size(); ++n)
      if (names[n] == tok) return static_cast<int>(n);
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used == tok.size()) return v;
    } catch (const std::exception&) {
    }
    fail("unknown generator '" + tok + "'");
    return -1;
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "name:") {
      ls >> name;
    } else if (first == "generators:") {
      for (std::string g; ls >> g;) names.push_back(g);
      have_gens = true;
    } else if (first == "mode:") {
      std::string m;
      ls >> m;
      if (m == "independent") {
        mode = Independent{};
      } else if (m == "related") {
        std::string a, b;
        if (!(ls >> a >> b)) fail("related mode needs a and b");
        mode = Related{Rational::parse(a), Rational::parse(b)};
      } else {
        fail("mode must be independent or related");
      }
    } else {
      if (!have_gens) fail("rules before the generators line");
      std::string second, arrow, ph;
      if (!(ls >> second >> arrow >> ph) || arrow != "->") fail("expected 'j i -> phase(p,q,r) ...'");
      if (ph.rfind("phase(", 0) != 0 || ph.back() != ')') fail("expected phase(p,q,r)");
      std::string inner = ph.substr(6, ph.size() - 7);
      std::replace(inner.begin(), inner.end(), ',', ' ');
      std::istringstream ps(inner);
      std::string p, q, r;
      if (!(ps >> p >> q >> r)) fail("phase needs three entries");
      TwistRule rule{gen_index(first), gen_index(second),
                     Phase(Rational::parse(p), Rational::parse(q), Rational::parse(r)), {}};
      for (std::string e; ls >> e;) rule.extra.push_back(std::stoi(e));
      if (!rule.extra.empty() && rule.extra.size() != names.size())
        fail("monomial needs " + std::to_string(names.size()) + " exponents");
      if (std::all_of(rule.extra.begin(), rule.extra.end(), [](int e) { return e == 0; })) rule.extra.clear();
      rules.push_back(std::move(rule));
    }
  }
  if (!have_gens) throw std::runtime_error("presentation has no generators line");
  const int k = static_cast<int>(names.size());
  return make_presentation(name, std::move(names), k, std::move(rules), mode);
}

inline void write_presentation(std::ostream& os, const Presentation& p) {
  os << "name: " << p.name << "\n";
  os << "generators:";
  for (auto& n : p.names()) os << " " << n;
  os << "\n";
  if (auto* r = std::get_if<Related>(&p.mode()))
    os << "mode: related " << r->a << " " << r->b << "\n";
  else
    os << "mode: independent\n";
  for (auto& r : p.table().rules()) {
    os << r.j << " " << r.i << " -> phase(" << r.phase.p() << "," << r.phase.q() << "," << r.phase.r() << ")";
    for (int e : r.extra) os << " " << e;
    os << "\n";
  }
}

} // namespace ncf
