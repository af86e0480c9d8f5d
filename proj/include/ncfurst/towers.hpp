#pragma once

#include "ncfurst/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncf {

/// Cyclic arc {start, start+1, ..., start+length-1} mod q.
struct Arc {
  int start = 0;
  int length = 0;
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Levels e_0..e_{H-1} of a Rokhlin tower in the clock-shift model, as subsets of Z/q.
struct TowerSpec {
  int q = 0;
  int s = 0;
  int height = 0;
  int marker = 0;                    // c; 0 for single-arc towers
  std::vector<std::vector<Arc>> levels;
  std::map<int, int> return_histogram; // return time -> number of marker points

  long long level_size(std::size_t k) const {
    long long n = 0;
    for (auto& a : levels.at(k)) n += a.length;
    return n;
  }
  long long covered() const {
    long long n = 0;
    for (std::size_t k = 0; k < levels.size(); ++k) n += level_size(k);
    return n;
  }
  long long uncovered() const { return q - covered(); }
  double residual() const { return static_cast<double>(uncovered()) / q; }

  std::vector<double> indicator(std::size_t k) const {
    std::vector<double> x(q, 0.0);
    for (auto& a : levels.at(k))
      for (int t = 0; t < a.length; ++t) x[(a.start + t) % q] = 1.0;
    return x;
  }
  FuzzyOperator projection(std::size_t k) const { return FuzzyOperator::diagonal(indicator(k)); }
};

namespace detail {

inline long long mod(long long a, long long q) {
  long long r = a % q;
  return r < 0 ? r + q : r;
}

/// Maximal cyclic runs of a point set in Z/q.
inline std::vector<Arc> arcs_from_points(std::vector<int> pts, int q) {
  std::vector<Arc> out;
  if (pts.empty()) return out;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (static_cast<int>(pts.size()) == q) return {{0, q}};
  for (int p : pts) {
    if (!out.empty() && out.back().start + out.back().length == p) ++out.back().length;
    else out.push_back({p, 1});
  }
  if (out.size() > 1 && out.front().start == 0 && out.back().start + out.back().length == q) {
    out.back().length += out.front().length;
    out.erase(out.begin());
  }
  return out;
}

inline void require_coprime(int q, int s) {
  if (q < 1) throw std::invalid_argument("q must be positive");
  if (std::gcd(q, s) != 1) throw std::invalid_argument("s and q must be coprime");
}

} // namespace detail

/// Sorted gaps between consecutive points of {-k s mod q : 0 <= k < N} on Z/q.
inline std::vector<int> three_distance_gaps(int q, int s, int n) {
  if (n < 1 || n > q) throw std::invalid_argument("need 1 <= N <= q");
  std::vector<int> pts(n);
  for (int k = 0; k < n; ++k) pts[k] = static_cast<int>(detail::mod(-static_cast<long long>(k) * s, q));
  std::sort(pts.begin(), pts.end());
  std::vector<int> gaps(n);
  for (int k = 0; k + 1 < n; ++k) gaps[k] = pts[k + 1] - pts[k];
  gaps[n - 1] = pts[0] + q - pts[n - 1];
  std::sort(gaps.begin(), gaps.end());
  return gaps;
}

/// Base arc [0, L) with L the smallest gap among the first H orbit points;
/// level k is the base translated by -k s.
inline TowerSpec single_arc_tower(int q, int s, int height) {
  detail::require_coprime(q, s);
  if (height < 1) throw std::invalid_argument("tower height must be positive");
  if (height > q) throw std::invalid_argument("tower height exceeds q");
  const int len = three_distance_gaps(q, s, height).front();
  TowerSpec t{q, s, height, 0, {}, {}};
  for (int k = 0; k < height; ++k)
    t.levels.push_back({{static_cast<int>(detail::mod(-static_cast<long long>(k) * s, q)), len}});
  return t;
}

/// Smallest t >= 1 with t s mod q in (-c, c).
inline int first_close_return(int q, int s, int c) {
  for (int t = 1; t <= q; ++t) {
    long long r = detail::mod(static_cast<long long>(t) * s, q);
    if (r < c || r > q - c) return t;
  }
  return q;
}

inline int default_marker(int q) { return static_cast<int>(std::lround(std::sqrt(static_cast<double>(q)))); }

/// Kakutani-Rokhlin castle over the marker arc [0, c) for j -> j - s, cut into
/// blocks of `height` consecutive levels. Each column drops (return time mod height)
/// top levels. marker <= 0 selects round(sqrt(q)).
inline TowerSpec kakutani_tower(int q, int s, int height, int marker = 0) {
  detail::require_coprime(q, s);
  if (height < 1) throw std::invalid_argument("tower height must be positive");
  const int c = marker > 0 ? marker : default_marker(q);
  if (c > q) throw std::invalid_argument("marker length exceeds q");
  const int tmin = first_close_return(q, s, c);
  if (tmin < height)
    throw std::invalid_argument("first close return " + std::to_string(tmin) + " < height " +
                                std::to_string(height) + ": decrease c or change convergent");

  // The orbit of 0 under j -> j - s visits every point once.
  std::vector<int> orbit(q);
  for (int t = 0; t < q; ++t) orbit[t] = static_cast<int>(detail::mod(-static_cast<long long>(t) * s, q));
  std::vector<int> visits;
  for (int t = 0; t < q; ++t)
    if (orbit[t] < c) visits.push_back(t);

  TowerSpec tw{q, s, height, c, {}, {}};
  std::vector<std::vector<int>> pts(height);
  for (std::size_t a = 0; a < visits.size(); ++a) {
    const int t0 = visits[a];
    const int ret = (a + 1 < visits.size() ? visits[a + 1] : visits[0] + q) - t0;
    ++tw.return_histogram[ret];
    for (int b = 0; b + height <= ret; b += height)
      for (int k = 0; k < height; ++k) pts[k].push_back(orbit[(t0 + b + k) % q]);
  }
  for (auto& p : pts) tw.levels.push_back(detail::arcs_from_points(std::move(p), q));
  return tw;
}

struct TowerReport {
  double residual = 0.0;        // 1 - sum_k tau(e_k)
  double cycling_defect = 0.0;  // max_k ||W e_k W* - e_{k+1}||_2
  std::vector<std::vector<double>> commutators; // [test element][level] ||[e_k, a]||_2
  std::vector<double> commutator_max;           // per test element
  std::vector<double> commutator_l1;            // per test element, max_k l1 bound of [e_k, a]
  std::vector<std::size_t> arcs_per_level;
  double epsilon = 0.0;
  bool cycling_ok = false;
  bool commutator_ok = false;
  bool residual_ok = false;

  double max_commutator() const {
    double m = 0.0;
    for (double x : commutator_max) m = std::max(m, x);
    return m;
  }
  bool passed() const { return cycling_ok && commutator_ok && residual_ok; }
};

/// All three trace-norm condition families for the tower under Ad(W).
inline TowerReport verify_tower(const TowerSpec& tower, const FuzzyOperator& w,
                                const std::vector<FuzzyOperator>& test_set, double eps) {
  for (auto& lvl : tower.levels)
    for (auto& a : lvl)
      if (a.start < 0 || a.start >= tower.q || a.length < 0 || a.length > tower.q)
        throw std::invalid_argument("tower level outside Z/q");
  if (w.dim() != tower.q) throw std::invalid_argument("W dimension differs from q");

  TowerReport r;
  r.epsilon = eps;
  const std::size_t h = tower.levels.size();
  std::vector<FuzzyOperator> e;
  double trace_sum = 0.0;
  for (std::size_t k = 0; k < h; ++k) {
    e.push_back(tower.projection(k));
    trace_sum += e.back().trace().real();
    r.arcs_per_level.push_back(tower.levels[k].size());
  }
  r.residual = std::max(0.0, 1.0 - trace_sum);
  for (std::size_t k = 0; k + 1 < h; ++k)
    r.cycling_defect = std::max(r.cycling_defect, (adjoint_action(w, e[k]) - e[k + 1]).norm2());
  for (auto& a : test_set) {
    if (a.dim() != tower.q) throw std::invalid_argument("test element dimension differs from q");
    std::vector<double> row;
    double m = 0.0, l1 = 0.0;
    for (auto& ek : e) {
      FuzzyOperator c = ek * a - a * ek;
      row.push_back(c.norm2());
      m = std::max(m, row.back());
      l1 = std::max(l1, c.l1_bound());
    }
    r.commutators.push_back(std::move(row));
    r.commutator_max.push_back(m);
    r.commutator_l1.push_back(l1);
  }
  r.cycling_ok = r.cycling_defect < eps;
  r.commutator_ok = r.max_commutator() < eps;
  r.residual_ok = r.residual < eps;
  return r;
}

} // namespace ncf
