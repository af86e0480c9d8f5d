#pragma once

#include "ncfurst/furstenberg.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ncf {

/// Key-value text form:
///
///   theta = 0.6180339887498949     # or: symbol
///   gamma = 0,0,1                   # exact angle p,q,r; or a real number
///   gamma_value = 0.41421356        # optional numeric value of the gamma symbol
///   d = 2
///   f = const:1/3,0,0               # or: samples:<path>, one value per line
///
/// A real `gamma` means the gamma symbol with that numeric value.
namespace detail {

inline std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline Phase parse_triple(std::string s) {
  s = trim(s);
  if (!s.empty() && s.front() == '<' && s.back() == '>') s = s.substr(1, s.size() - 2);
  if (!s.empty() && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, ',');) parts.push_back(trim(t));
  if (parts.size() != 3) throw std::invalid_argument("expected an angle p,q,r: '" + s + "'");
  return {Rational::parse(parts[0]), Rational::parse(parts[1]), Rational::parse(parts[2])};
}

inline std::optional<double> parse_real(const std::string& s) {
  if (s.find(',') != std::string::npos) return std::nullopt;
  std::size_t used = 0;
  try {
    double x = std::stod(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

} // namespace detail

inline std::vector<double> read_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open samples file " + path.string());
  std::vector<double> v;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    v.push_back(std::stod(line));
  }
  return v;
}

inline void write_samples(const std::filesystem::path& path, const std::vector<double>& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write samples file " + path.string());
  out << std::setprecision(17);
  for (double x : v) out << x << "\n";
}

/// Relative sample paths resolve against `base_dir`.
inline FurstenbergAuto read_auto(std::istream& is, const std::filesystem::path& base_dir = {}) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("auto line " + std::to_string(lineno) + ": missing '='");
    std::string key = detail::trim(line.substr(0, eq));
    if (!kv.emplace(key, detail::trim(line.substr(eq + 1))).second)
      throw std::runtime_error("auto line " + std::to_string(lineno) + ": duplicate key " + key);
  }
  for (auto& [k, v] : kv)
    if (k != "theta" && k != "gamma" && k != "gamma_value" && k != "d" && k != "f")
      throw std::runtime_error("unknown auto key " + k);
  for (const char* k : {"theta", "gamma", "d", "f"})
    if (!kv.contains(k)) throw std::runtime_error(std::string("missing auto key ") + k);

  FurstenbergAuto a;
  std::optional<double> theta;
  if (kv["theta"] != "symbol") {
    theta = detail::parse_real(kv["theta"]);
    if (!theta) throw std::runtime_error("theta must be a real number or 'symbol'");
  }
  std::optional<double> gamma_value;
  if (auto g = detail::parse_real(kv["gamma"])) {
    a.gamma = Phase::gamma();
    gamma_value = *g;
  } else {
    a.gamma = detail::parse_triple(kv["gamma"]);
  }
  if (kv.contains("gamma_value")) {
    if (gamma_value) throw std::runtime_error("gamma_value given twice");
    gamma_value = detail::parse_real(kv["gamma_value"]);
    if (!gamma_value) throw std::runtime_error("gamma_value must be a real number");
  }
  if (gamma_value && !theta) throw std::runtime_error("a numeric gamma needs a numeric theta");
  if (theta) a.values = Numerics{*theta, gamma_value.value_or(0.0)};
  if (theta && !gamma_value && !a.gamma.r().is_zero())
    throw std::runtime_error("gamma uses the gamma symbol but gamma_value is missing");

  a.d = std::stoi(kv["d"]);
  const std::string& f = kv["f"];
  if (f.rfind("const:", 0) == 0) {
    a.f = ConstantF{detail::parse_triple(f.substr(6))};
  } else if (f.rfind("samples:", 0) == 0) {
    std::filesystem::path p = detail::trim(f.substr(8));
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    if (!a.values) throw std::runtime_error("sampled f needs a numeric theta");
    a = make_sampled_auto(a.gamma, a.d, read_samples(p), *a.values);
  } else {
    throw std::runtime_error("f must be const:<p,q,r> or samples:<path>");
  }
  return a;
}

/// Sampled f is written to `samples_path`, which the text references.
inline void write_auto(std::ostream& os, const FurstenbergAuto& a,
                       const std::filesystem::path& samples_path = {}) {
  os << std::setprecision(17);
  if (a.values) {
    os << "theta = " << a.values->theta << "\n";
  } else {
    os << "theta = symbol\n";
  }
  auto& g = a.gamma;
  os << "gamma = " << g.p() << "," << g.q() << "," << g.r() << "\n";
  if (a.values && !g.r().is_zero()) os << "gamma_value = " << a.values->gamma << "\n";
  os << "d = " << a.d << "\n";
  if (a.is_constant()) {
    auto& r = a.rho();
    os << "f = const:" << r.p() << "," << r.q() << "," << r.r() << "\n";
  } else {
    if (samples_path.empty()) throw std::invalid_argument("sampled f needs a samples path");
    write_samples(samples_path, a.samples());
    os << "f = samples:" << samples_path.string() << "\n";
  }
}

} // namespace ncf
