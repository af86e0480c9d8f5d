#pragma once

#include "ncfurst/phase.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncf {

using Exponents = std::vector<int>;

/// phase * g_0^{e_0} g_1^{e_1} ... g_{k-1}^{e_{k-1}}
struct Monomial {
  Phase phase;
  Exponents exps;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// g_gen^exp
struct Letter {
  int gen = 0;
  int exp = 1;

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Commutation rule for an out-of-order pair j > i:
///   head form  g_j g_i = phase * g^extra * g_i g_j   (extra supported below i)
///   tail form  g_j g_i = phase * g_i g_j * g^extra   (extra supported above j)
/// A rule with empty extra is a pure phase twist and fits either form.
struct TwistRule {
  int j = 1;
  int i = 0;
  Phase phase;
  Exponents extra; // empty or length k
};

enum class Collection { Head, Tail };

/// Polycyclic commutation table over k generators with a collection engine
/// producing ordered normal forms g_0^{a_0} ... g_{k-1}^{a_{k-1}}.
///
/// Head tables have <g_0..g_{m-1}> normal in <g_0..g_m>; letters are collected
/// from the right. Tail tables have <g_{m+1}..> normal in <g_m..>; letters are
/// collected from the left. Both terminate by induction on the generator index.
class TwistTable {
public:
  TwistTable() : TwistTable(0, {}) {}

  TwistTable(int k, std::vector<TwistRule> rules) : k_(k), rules_(std::move(rules)) {
    if (k < 0) throw std::invalid_argument("negative generator count");
    bool head_ok = true, tail_ok = true;
    std::map<std::pair<int, int>, int> seen;
    for (auto& r : rules_) {
      if (r.i < 0 || r.j >= k || r.i >= r.j)
        throw std::invalid_argument("twist rule needs 0 <= i < j < k");
      if (!seen.emplace(std::pair{r.j, r.i}, 0).second)
        throw std::invalid_argument("duplicate twist rule for pair (" + std::to_string(r.j) +
                                    "," + std::to_string(r.i) + ")");
      if (r.extra.empty()) continue;
      if (static_cast<int>(r.extra.size()) != k)
        throw std::invalid_argument("twist rule monomial has wrong length");
      for (int m = 0; m < k; ++m) {
        if (r.extra[m] == 0) continue;
        pure_ = false;
        if (m >= r.i) head_ok = false;
        if (m <= r.j) tail_ok = false;
      }
    }
    if (!head_ok && !tail_ok)
      throw std::invalid_argument(
          "twist rules are not polycyclic: each monomial must lie entirely below i or above j");
    dir_ = tail_ok ? Collection::Tail : Collection::Head;
    build_pair_phases();
    if (!pure_) build_actions();
  }

  int size() const { return k_; }
  Collection direction() const { return dir_; }
  bool pure_phase() const { return pure_; }
  const std::vector<TwistRule>& rules() const { return rules_; }

  Exponents identity() const { return Exponents(k_, 0); }

  /// Normal form of g^a * g^b.
  Monomial multiply(const Exponents& a, const Exponents& b) const {
    check_len(a);
    check_len(b);
    if (pure_) {
      Phase ph;
      for (int j = 0; j < k_; ++j) {
        if (a[j] == 0) continue;
        for (int i = 0; i < j; ++i) {
          if (b[i] == 0) continue;
          const Phase& c = pair_phase_[j * k_ + i];
          if (!c.is_identity()) ph *= c.pow(Rational(a[j]) * b[i]);
        }
      }
      Exponents e(k_);
      for (int m = 0; m < k_; ++m) e[m] = a[m] + b[m];
      return {ph, std::move(e)};
    }
    return dir_ == Collection::Tail ? tail_mul({Phase{}, a}, b) : head_mul(a, {Phase{}, b});
  }

  Monomial multiply(const Monomial& a, const Monomial& b) const {
    Monomial r = multiply(a.exps, b.exps);
    r.phase = r.phase * a.phase * b.phase;
    return r;
  }

  /// Normal form of (g^a)^{-1}.
  Monomial inverse(const Exponents& a) const {
    std::vector<Letter> w;
    for (int m = k_ - 1; m >= 0; --m)
      if (a[m] != 0) w.push_back({m, -a[m]});
    return collect(w);
  }
  Monomial inverse(const Monomial& a) const {
    Monomial r = inverse(a.exps);
    r.phase *= a.phase.inverse();
    return r;
  }

  Monomial power(const Monomial& a, int n) const {
    Monomial base = n < 0 ? inverse(a) : a;
    Monomial r{Phase{}, identity()};
    for (int t = 0; t < std::abs(n); ++t) r = multiply(r, base);
    return r;
  }

  /// Normal form of a word of letters.
  Monomial collect(std::span<const Letter> word) const {
    Monomial acc{Phase{}, identity()};
    for (auto& l : word) {
      if (l.gen < 0 || l.gen >= k_) throw std::out_of_range("letter generator out of range");
      Exponents e = identity();
      e[l.gen] = l.exp;
      acc = multiply(acc, Monomial{Phase{}, std::move(e)});
    }
    return acc;
  }

  /// Conjugation data used by the collector. For tail tables this is
  /// g_i^{-s} g_j g_i^{s} (j > i); for head tables g_j^{s} g_i g_j^{-s} (i < j).
  const Monomial& action(int outer, int sign, int inner) const {
    return act_.at(key(outer, sign, inner));
  }

  /// Phase of the rule for the pair (j, i), identity when the pair commutes.
  const Phase& pair_phase(int j, int i) const { return pair_phase_[j * k_ + i]; }

private:
  void check_len(const Exponents& e) const {
    if (static_cast<int>(e.size()) != k_) throw std::invalid_argument("exponent vector length mismatch");
  }

  std::size_t key(int outer, int sign, int inner) const {
    return (static_cast<std::size_t>(outer) * 2 + (sign > 0 ? 1 : 0)) * k_ + inner;
  }

  void build_pair_phases() {
    pair_phase_.assign(static_cast<std::size_t>(k_) * k_, Phase{});
    for (auto& r : rules_) pair_phase_[r.j * k_ + r.i] = r.phase;
  }

  const TwistRule* find_rule(int j, int i) const {
    for (auto& r : rules_)
      if (r.j == j && r.i == i) return &r;
    return nullptr;
  }

  Monomial unit(int m) const {
    Exponents e = identity();
    e[m] = 1;
    return {Phase{}, std::move(e)};
  }

  // Image of g^e under the action table of `outer` with `sign`.
  Monomial act_on(int outer, int sign, const Exponents& e, int lo, int hi) const {
    Monomial r{Phase{}, identity()};
    for (int m = lo; m < hi; ++m) {
      if (e[m] == 0) continue;
      r = multiply(r, power(action(outer, sign, m), e[m]));
    }
    return r;
  }

  void build_actions() {
    act_.assign(static_cast<std::size_t>(k_) * 2 * k_, Monomial{Phase{}, identity()});
    if (dir_ == Collection::Tail) {
      for (int i = k_ - 1; i >= 0; --i) {
        for (int j = i + 1; j < k_; ++j) {
          const TwistRule* r = find_rule(j, i);
          Monomial fwd = unit(j);
          if (r) {
            fwd.phase = r->phase;
            if (!r->extra.empty())
              for (int m = j + 1; m < k_; ++m) fwd.exps[m] = r->extra[m];
          }
          act_[key(i, +1, j)] = fwd;
        }
        // inverse action, triangular from the top
        for (int j = k_ - 1; j > i; --j) {
          const Monomial& fwd = act_[key(i, +1, j)];
          Exponents tail = fwd.exps;
          tail[j] = 0;
          Monomial img_tail = act_on(i, -1, tail, j + 1, k_);
          Monomial back = multiply(Monomial{fwd.phase.inverse(), unit(j).exps}, inverse(img_tail));
          act_[key(i, -1, j)] = back;
        }
      }
    } else {
      for (int j = 0; j < k_; ++j) {
        for (int i = 0; i < j; ++i) {
          const TwistRule* r = find_rule(j, i);
          Monomial fwd = unit(i);
          if (r) {
            fwd.phase = r->phase;
            if (!r->extra.empty())
              for (int m = 0; m < i; ++m) fwd.exps[m] = r->extra[m];
          }
          act_[key(j, +1, i)] = fwd;
        }
        for (int i = 0; i < j; ++i) {
          const Monomial& fwd = act_[key(j, +1, i)];
          Exponents head = fwd.exps;
          head[i] = 0;
          Monomial img_head = act_on(j, -1, head, 0, i);
          Monomial back = multiply(inverse(img_head), Monomial{fwd.phase.inverse(), unit(i).exps});
          act_[key(j, -1, i)] = back;
        }
      }
    }
  }

  // state * g^b, collecting letters left to right
  Monomial tail_mul(Monomial state, const Exponents& b) const {
    for (int i = 0; i < k_; ++i) {
      int n = b[i];
      int s = n > 0 ? 1 : -1;
      for (int t = 0; t < std::abs(n); ++t) {
        bool tail_trivial = true;
        for (int m = i + 1; m < k_; ++m) tail_trivial = tail_trivial && state.exps[m] == 0;
        if (!tail_trivial) {
          Monomial img = act_on(i, s, state.exps, i + 1, k_);
          state.phase *= img.phase;
          for (int m = i + 1; m < k_; ++m) state.exps[m] = img.exps[m];
        }
        state.exps[i] += s;
      }
    }
    return state;
  }

  // g^a * state, collecting letters right to left
  Monomial head_mul(const Exponents& a, Monomial state) const {
    for (int i = k_ - 1; i >= 0; --i) {
      int n = a[i];
      int s = n > 0 ? 1 : -1;
      for (int t = 0; t < std::abs(n); ++t) {
        bool head_trivial = true;
        for (int m = 0; m < i; ++m) head_trivial = head_trivial && state.exps[m] == 0;
        if (!head_trivial) {
          Monomial img = act_on(i, s, state.exps, 0, i);
          state.phase *= img.phase;
          for (int m = 0; m < i; ++m) state.exps[m] = img.exps[m];
        }
        state.exps[i] += s;
      }
    }
    return state;
  }

  int k_ = 0;
  std::vector<TwistRule> rules_;
  Collection dir_ = Collection::Tail;
  bool pure_ = true;
  std::vector<Phase> pair_phase_;
  std::vector<Monomial> act_;
};

/// Table for the rotation algebra: v u = e^{2 pi i theta} u v.
inline TwistTable rotation_table() { return TwistTable(2, {{1, 0, Phase::theta(), {}}}); }

} // namespace ncf
