#pragma once

#include "ncfurst/element.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncf {

/// Text form, one term per line:
///   m1 ... mk  re im             (floating coefficient)
///   m1 ... mk  num/den  p q r    (exact magnitude times phase)
/// Blank lines and '#' comments are ignored.
inline void write_element(std::ostream& os, const Element& a) {
  os << std::setprecision(17);
  for (auto& [e, c] : a.terms()) {
    for (std::size_t m = 0; m < e.size(); ++m) os << (m ? " " : "") << e[m];
    if (c.is_exact()) {
      auto& x = c.as_exact();
      os << "  " << x.magnitude << "  " << x.phase.p() << " " << x.phase.q() << " " << x.phase.r();
    } else {
      os << "  " << c.as_approx().real() << " " << c.as_approx().imag();
    }
    os << "\n";
  }
}

inline Element read_element(std::istream& is, const AlgebraHandle& alg) {
  Element out(alg);
  std::set<Exponents> seen;
  std::string line;
  int lineno = 0;
  const int k = alg->rank();
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw std::runtime_error("element line " + std::to_string(lineno) + ": " + why);
    };
    const int n = static_cast<int>(tok.size());
    if (n != k + 2 && n != k + 4) fail("expected " + std::to_string(k + 2) + " or " + std::to_string(k + 4) + " fields");
    Exponents e(k);
    try {
      for (int m = 0; m < k; ++m) e[m] = std::stoi(tok[m]);
      if (!seen.insert(e).second) fail("duplicate exponent");
      if (n == k + 2) {
        out.add_term(e, Scalar::approx({std::stod(tok[k]), std::stod(tok[k + 1])}));
      } else {
        Phase ph(Rational::parse(tok[k + 1]), Rational::parse(tok[k + 2]), Rational::parse(tok[k + 3]));
        out.add_term(e, Scalar::exact(Rational::parse(tok[k]), ph));
      }
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception& ex) {
      fail(ex.what());
    }
  }
  return out;
}

} // namespace ncf
