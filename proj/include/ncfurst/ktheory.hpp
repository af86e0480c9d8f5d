#pragma once

#include "ncfurst/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncf {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Dense integer matrix, row-major.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    for (auto& row : rows) {
      if (row.size() != c_) throw std::invalid_argument("ragged matrix");
      for (long long x : row) a_.emplace_back(x);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool is_square() const { return r_ == c_; }

  BigInt& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.c_ != y.r_) throw std::invalid_argument("matrix dimension mismatch");
    IntMatrix z(x.r_, y.c_);
    for (std::size_t i = 0; i < x.r_; ++i)
      for (std::size_t k = 0; k < x.c_; ++k) {
        if (x(i, k) == 0) continue;
        for (std::size_t j = 0; j < y.c_; ++j) z(i, j) += x(i, k) * y(k, j);
      }
    return z;
  }
  friend IntMatrix operator-(const IntMatrix& x, const IntMatrix& y) {
    if (x.r_ != y.r_ || x.c_ != y.c_) throw std::invalid_argument("matrix dimension mismatch");
    IntMatrix z = x;
    for (std::size_t n = 0; n < z.a_.size(); ++n) z.a_[n] -= y.a_[n];
    return z;
  }
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < r_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < c_; ++j) os << (j ? ", " : "") << (*this)(i, j);
      os << "]";
    }
    os << "]";
    return os.str();
  }

  /// Rows separated by ';' (or "],["), entries by ',' or spaces; brackets are ignored.
  /// "1 2; 0 1", "[[1,2],[0,1]]" and "" (the 0x0 matrix) are accepted.
  static IntMatrix parse(const std::string& text) {
    std::string s = text;
    for (std::size_t p; (p = s.find("],")) != std::string::npos;) s.replace(p, 2, ";");
    for (auto& ch : s)
      if (ch == '[' || ch == ']' || ch == ',') ch = ' ';
    std::vector<std::vector<BigInt>> rows;
    std::stringstream ss(s);
    for (std::string row; std::getline(ss, row, ';');) {
      std::istringstream rs(row);
      std::vector<BigInt> r;
      for (std::string tok; rs >> tok;) {
        try {
          r.emplace_back(tok);
        } catch (const std::exception&) {
          throw std::invalid_argument("bad matrix entry '" + tok + "'");
        }
      }
      if (!r.empty()) rows.push_back(std::move(r));
    }
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.c_) throw std::invalid_argument("ragged matrix");
      for (std::size_t j = 0; j < m.c_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<BigInt> a_;
};

/// Fraction-free (Bareiss) determinant.
inline BigInt determinant(IntMatrix m) {
  if (!m.is_square()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// Exact inverse of a unimodular matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("inverse of a non-square matrix");
  BigInt det = determinant(m);
  if (det != 1 && det != -1) throw std::invalid_argument("matrix is not unimodular (det " + det.str() + ")");
  const std::size_t n = m.rows();
  std::vector<std::vector<BigRational>> a(n, std::vector<BigRational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = BigRational(m(i, j));
    a[i][n + i] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (a[p][k] == 0) ++p;
    std::swap(a[p], a[k]);
    BigRational piv = a[k][k];
    for (auto& x : a[k]) x /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k] == 0) continue;
      BigRational f = a[i][k];
      for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  IntMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = boost::multiprecision::numerator(a[i][n + j]);
  return inv;
}

struct SmithForm {
  IntMatrix U, D, V; // M = U D V

  /// Nonzero diagonal entries of D, in order.
  std::vector<BigInt> invariants() const {
    std::vector<BigInt> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
      if (D(i, i) != 0) d.push_back(D(i, i));
    return d;
  }
};

/// Smith normal form with transforms. The pivot is the nonzero entry of least
/// absolute value in the active block, ties broken in row-major order.
inline SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  SmithForm s{IntMatrix::identity(r), m, IntMatrix::identity(c)};
  IntMatrix& A = s.D;
  IntMatrix& U = s.U;
  IntMatrix& V = s.V;

  // Row op A <- E A needs U <- U E^{-1}; column op A <- A F needs V <- F^{-1} V.
  auto swap_rows = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < c; ++j) std::swap(A(a, j), A(b, j));
    for (std::size_t i = 0; i < r; ++i) std::swap(U(i, a), U(i, b));
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < r; ++i) std::swap(A(i, a), A(i, b));
    for (std::size_t j = 0; j < c; ++j) std::swap(V(a, j), V(b, j));
  };
  auto add_row = [&](std::size_t dst, std::size_t src, const BigInt& q) { // row dst += q row src
    for (std::size_t j = 0; j < c; ++j) A(dst, j) += q * A(src, j);
    for (std::size_t i = 0; i < r; ++i) U(i, src) -= q * U(i, dst);
  };
  auto add_col = [&](std::size_t dst, std::size_t src, const BigInt& q) { // col dst += q col src
    for (std::size_t i = 0; i < r; ++i) A(i, dst) += q * A(i, src);
    for (std::size_t j = 0; j < c; ++j) V(src, j) -= q * V(dst, j);
  };
  auto negate_row = [&](std::size_t a) {
    for (std::size_t j = 0; j < c; ++j) A(a, j) = -A(a, j);
    for (std::size_t i = 0; i < r; ++i) U(i, a) = -U(i, a);
  };

  for (std::size_t t = 0; t < std::min(r, c); ++t) {
    while (true) {
      std::optional<std::pair<std::size_t, std::size_t>> piv;
      BigInt best;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j) {
          if (A(i, j) == 0) continue;
          BigInt x = abs(A(i, j));
          if (!piv || x < best) {
            best = x;
            piv = {i, j};
          }
        }
      if (!piv) return s;
      swap_rows(t, piv->first);
      swap_cols(t, piv->second);
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (A(i, t) == 0) continue;
        add_row(i, t, -BigInt(A(i, t) / A(t, t)));
        clean = clean && A(i, t) == 0;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (A(t, j) == 0) continue;
        add_col(j, t, -BigInt(A(t, j) / A(t, t)));
        clean = clean && A(t, j) == 0;
      }
      if (!clean) continue;
      // divisibility: fold in a row whose entries the pivot does not divide
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < r && !bad; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (A(i, j) % A(t, t) != 0) {
            bad = i;
            break;
          }
      if (!bad) break;
      add_row(t, *bad, 1);
    }
    if (A(t, t) < 0) negate_row(t);
  }
  return s;
}

/// Z^rank (+) Z/d_1 (+) ... with d_1 | d_2 | ..., each d_i >= 2.
struct FGAbelianGroup {
  std::size_t rank = 0;
  std::vector<BigInt> torsion;

  /// Canonical form of Z^rank (+) (+)_i Z/orders_i; order 0 counts as Z, order 1 vanishes.
  static FGAbelianGroup from_orders(std::size_t rank, const std::vector<BigInt>& orders);

  friend FGAbelianGroup operator+(const FGAbelianGroup& a, const FGAbelianGroup& b) {
    std::vector<BigInt> t = a.torsion;
    t.insert(t.end(), b.torsion.begin(), b.torsion.end());
    return from_orders(a.rank + b.rank, t);
  }
  friend bool operator==(const FGAbelianGroup&, const FGAbelianGroup&) = default;

  bool is_zero() const { return rank == 0 && torsion.empty(); }

  /// "Z^3 (+) Z/3", "Z", "Z/2 (+) Z/4", "0".
  std::string str() const {
    std::vector<std::string> parts;
    if (rank == 1) parts.push_back("Z");
    if (rank > 1) parts.push_back("Z^" + std::to_string(rank));
    for (auto& d : torsion) parts.push_back("Z/" + d.str());
    if (parts.empty()) return "0";
    std::string s = parts[0];
    for (std::size_t n = 1; n < parts.size(); ++n) s += " (+) " + parts[n];
    return s;
  }
};

inline FGAbelianGroup FGAbelianGroup::from_orders(std::size_t rank, const std::vector<BigInt>& orders) {
  FGAbelianGroup g;
  g.rank = rank;
  std::vector<BigInt> finite;
  for (auto& o : orders) {
    BigInt x = abs(o);
    if (x == 0)
      ++g.rank;
    else if (x != 1)
      finite.push_back(x);
  }
  IntMatrix diag(finite.size(), finite.size());
  for (std::size_t n = 0; n < finite.size(); ++n) diag(n, n) = finite[n];
  for (auto& d : smith_normal_form(diag).invariants())
    if (d != 1) g.torsion.push_back(d);
  return g;
}

struct CokerKer {
  FGAbelianGroup coker;
  std::size_t kernel_rank = 0;
};

/// Cokernel and kernel rank of M : Z^cols -> Z^rows.
inline CokerKer coker_ker(const IntMatrix& m) {
  auto inv = smith_normal_form(m).invariants();
  CokerKer out;
  out.coker = FGAbelianGroup::from_orders(m.rows() - inv.size(), inv);
  out.kernel_rank = m.cols() - inv.size();
  return out;
}

struct PVResult {
  FGAbelianGroup K0, K1;
};

/// K-theory of A x_alpha Z from the actions A0 on K0(A) and A1 on K1(A), with
/// the six-term sequence split:
///   K0 = coker(I - A0^{-1}) (+) ker(I - A1^{-1}),
///   K1 = coker(I - A1^{-1}) (+) ker(I - A0^{-1}).
inline PVResult pv_kgroups(const IntMatrix& a0, const IntMatrix& a1) {
  if (!a0.is_square() || !a1.is_square()) throw std::invalid_argument("K-theory actions must be square");
  auto m0 = IntMatrix::identity(a0.rows()) - unimodular_inverse(a0);
  auto m1 = IntMatrix::identity(a1.rows()) - unimodular_inverse(a1);
  auto c0 = coker_ker(m0);
  auto c1 = coker_ker(m1);
  return {c0.coker + FGAbelianGroup{c1.kernel_rank, {}}, c1.coker + FGAbelianGroup{c0.kernel_rank, {}}};
}

/// Subgroup of Q + Q theta + Q gamma, each generator a coefficient triple over (1, theta, gamma).
struct TraceRange {
  std::vector<std::array<BigRational, 3>> generators; // Hermite-reduced, pivots in coordinate order

  friend bool operator==(const TraceRange&, const TraceRange&) = default;

  /// "Z + theta*Z + gamma*Z", "(1/2)*Z + theta*Z".
  std::string str() const {
    static const char* sym[3] = {"", "theta", "gamma"};
    if (generators.empty()) return "0";
    std::string out;
    for (auto& g : generators) {
      std::vector<std::string> terms;
      for (int k = 0; k < 3; ++k) {
        if (g[k] == 0) continue;
        std::string coef = g[k].str();
        if (k == 0)
          terms.push_back(coef);
        else if (g[k] == 1)
          terms.push_back(sym[k]);
        else if (g[k] == -1)
          terms.push_back(std::string("-") + sym[k]);
        else
          terms.push_back(coef + "*" + sym[k]);
      }
      std::string gen = terms[0];
      for (std::size_t n = 1; n < terms.size(); ++n) gen += (terms[n][0] == '-' ? " - " + terms[n].substr(1) : " + " + terms[n]);
      if (!out.empty()) out += " + ";
      if (gen == "1")
        out += "Z";
      else if (terms.size() == 1 && gen.find('/') == std::string::npos && gen.find('*') == std::string::npos)
        out += gen + "*Z";
      else
        out += "(" + gen + ")*Z";
    }
    return out;
  }
};

/// Row-style Hermite normal form of an integer lattice: positive pivots,
/// entries above each pivot reduced into [0, pivot), zero rows dropped.
inline std::vector<std::vector<BigInt>> hermite_rows(std::vector<std::vector<BigInt>> rows, std::size_t width) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < width && r < rows.size(); ++col) {
    // Euclid down the column until one nonzero entry remains at row r
    while (true) {
      std::optional<std::size_t> piv;
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (!piv || abs(rows[i][col]) < abs(rows[*piv][col]))) piv = i;
      if (!piv) break;
      std::swap(rows[r], rows[*piv]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        BigInt q = rows[i][col] / rows[r][col];
        for (std::size_t k = 0; k < width; ++k) rows[i][k] -= q * rows[r][k];
        done = done && rows[i][col] == 0;
      }
      if (done) break;
    }
    if (rows[r][col] == 0) continue;
    if (rows[r][col] < 0)
      for (auto& x : rows[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      BigInt q = rows[i][col] / rows[r][col];
      if (rows[i][col] - q * rows[r][col] < 0) q -= 1;
      for (std::size_t k = 0; k < width; ++k) rows[i][k] -= q * rows[r][k];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

inline TraceRange trace_range(const std::vector<std::array<Rational, 3>>& gens) {
  BigInt l = 1;
  for (auto& g : gens)
    for (auto& x : g) l = boost::multiprecision::lcm(l, BigInt(x.den()));
  std::vector<std::vector<BigInt>> rows;
  for (auto& g : gens) {
    std::vector<BigInt> row(3);
    for (int k = 0; k < 3; ++k) row[k] = BigInt(g[k].num()) * (l / BigInt(g[k].den()));
    rows.push_back(std::move(row));
  }
  TraceRange tr;
  for (auto& row : hermite_rows(std::move(rows), 3))
    tr.generators.push_back({BigRational(row[0], l), BigRational(row[1], l), BigRational(row[2], l)});
  return tr;
}

} // namespace ncf
