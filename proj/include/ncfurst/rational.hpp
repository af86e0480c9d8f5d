#pragma once

#include <cctype>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ncf {

/// Small exact rational with 64-bit numerator and denominator.
///
/// Arithmetic is carried out in 128 bits and reduced; a result that does not
/// fit back into 64 bits throws std::overflow_error instead of wrapping.
/// Phases and exponent data stay tiny in practice, so this is enough there;
/// integer linear algebra uses arbitrary precision instead (see ktheory.hpp).
class Rational {
public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {} // NOLINT
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return double(num_) / double(den_); }

  /// Largest integer not exceeding the value.
  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  /// Value reduced into [0, 1).
  Rational frac() const { return *this - Rational(floor()); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(__int128(a.num_) * b.den_ + __int128(b.num_) * a.den_,
                __int128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(__int128(a.num_) * b.den_ - __int128(b.num_) * a.den_,
                __int128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(__int128(a.num_) * b.num_, __int128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return make(__int128(a.num_) * b.den_, __int128(a.den_) * b.num_);
  }
  Rational operator-() const { return make(-__int128(num_), den_); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend auto operator<=>(const Rational& a, const Rational& b) {
    return __int128(a.num_) * b.den_ <=> __int128(b.num_) * a.den_;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "n", "n/d" or a decimal such as "0.25".
  static Rational parse(std::string_view s) {
    auto trim = [](std::string_view v) {
      while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
      while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
      return v;
    };
    s = trim(s);
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto to_i64 = [](std::string_view v) {
      std::size_t used = 0;
      std::string tmp(v);
      long long x = std::stoll(tmp, &used);
      if (used != tmp.size()) throw std::invalid_argument("bad integer '" + tmp + "'");
      return static_cast<std::int64_t>(x);
    };
    if (auto slash = s.find('/'); slash != std::string_view::npos)
      return Rational(to_i64(trim(s.substr(0, slash))), to_i64(trim(s.substr(slash + 1))));
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      bool neg = s.front() == '-';
      std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
      if (neg || s.front() == '+') ip.remove_prefix(1);
      std::int64_t den = 1;
      for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
      std::int64_t whole = ip.empty() ? 0 : to_i64(ip);
      std::int64_t part = fp.empty() ? 0 : to_i64(fp);
      Rational r = Rational(whole) + Rational(part, den);
      return neg ? -r : r;
    }
    return Rational(to_i64(s));
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
  static Rational make(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }
  void assign(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

} // namespace ncf
