#include "ncfurst/torus_dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ncf;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

double circ(double a, double b) {
  double x = std::abs(a - b);
  x -= std::floor(x);
  return std::min(x, 1.0 - x);
}

double circ(TorusPoint a, TorusPoint b) { return std::max(circ(a.t1, b.t1), circ(a.t2, b.t2)); }

struct Trig {
  std::vector<double> a, b;
  double operator()(double t) const {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
      s += a[k] * std::cos(kTwoPi * k * t) + b[k] * std::sin(kTwoPi * k * t);
    return s;
  }
};

Trig random_trig(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> c(-0.3, 0.3);
  Trig f;
  for (int k = 0; k <= degree; ++k) f.a.push_back(c(rng)), f.b.push_back(c(rng));
  return f;
}

std::vector<double> grid_samples(const Trig& f, int m) {
  std::vector<double> v(m);
  for (int j = 0; j < m; ++j) v[j] = f(static_cast<double>(j) / m);
  return v;
}

} // namespace

TEST(Step, IdentityAndArithmeticSeries) {
  SkewProduct id;
  TorusPoint p{0.3, 0.7};
  EXPECT_EQ(step(id, p).t1, p.t1);
  EXPECT_EQ(step(id, p).t2, p.t2);

  SkewProduct h{kGolden, 1, {}};
  auto one = step(h, {0.0, 0.0});
  EXPECT_NEAR(one.t1, kGolden, 1e-15);
  EXPECT_EQ(one.t2, 0.0);
  TorusPoint x{0.0, 0.0};
  for (long long k = 1; k <= 2000; ++k) {
    x = step(h, x);
    long double expect = static_cast<long double>(k) * (k - 1) / 2 * kGolden;
    expect -= std::floor(expect);
    EXPECT_LE(circ(x.t2, static_cast<double>(expect)), 1e-9) << k;
  }
}

TEST(Step, MatchesComplexFormula) {
  std::mt19937_64 rng(151);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    Trig f = random_trig(rng, 4);
    int d = std::uniform_int_distribution<int>(-3, 3)(rng);
    SkewProduct h{u(rng), d, grid_samples(f, 4096)};
    TorusPoint p{u(rng), u(rng)};
    std::complex<double> z1 = std::polar(1.0, kTwoPi * p.t1), z2 = std::polar(1.0, kTwoPi * p.t2);
    std::complex<double> w1 = std::polar(1.0, kTwoPi * h.gamma) * z1;
    std::complex<double> w2 = std::exp(std::complex<double>(0.0, kTwoPi * f(p.t1))) * std::pow(z1, d) * z2;
    auto img = step(h, p);
    EXPECT_LE(std::abs(std::polar(1.0, kTwoPi * img.t1) - w1), 1e-12);
    EXPECT_LE(std::abs(std::polar(1.0, kTwoPi * img.t2) - w2), 1e-4); // linear interpolation error
  }
}

TEST(Step, InverseRoundTrip) {
  std::mt19937_64 rng(157);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SkewProduct h{kGolden, 2, grid_samples(random_trig(rng, 6), 4096)};
  for (int t = 0; t < 1000; ++t) {
    TorusPoint p{u(rng), u(rng)};
    EXPECT_LE(circ(inverse_step(h, step(h, p)), p), 1e-12);
    EXPECT_LE(circ(step(h, inverse_step(h, p)), p), 1e-12);
  }
}

TEST(Step, CompensatedWalkIsExactOnDyadics) {
  // gamma = n / 2^30: all orbit values are dyadic, so the walk must be exact.
  const long long n = 663608941; // ~ golden * 2^30
  const double gamma = static_cast<double>(n) / (1LL << 30);
  SkewProduct h{gamma, 1, {}};
  for (long long k : {10LL, 1000LL, 1000000LL}) {
    auto p = iterate(h, {0.0, 0.0}, k);
    __int128 e = static_cast<__int128>(k) * (k - 1) / 2 * n;
    long long r = static_cast<long long>(e % (static_cast<__int128>(1) << 30));
    EXPECT_LE(circ(p.t2, static_cast<double>(r) / (1LL << 30)), 1e-12) << k;
  }
  auto back = iterate(h, iterate(h, {0.25, 0.5}, 5000), -5000);
  EXPECT_LE(circ(back, TorusPoint{0.25, 0.5}), 1e-12);
}

TEST(Birkhoff, Examples) {
  SkewProduct fixed;
  EXPECT_EQ(birkhoff_character_avg(fixed, 0, 0, {0.1, 0.2}, 10), complex(1.0));
  EXPECT_NEAR(std::abs(birkhoff_character_avg(fixed, 0, 1, {0.1, 0.2}, 1000)), 1.0, 1e-12);
  SkewProduct h{kGolden, 1, {}};
  EXPECT_EQ(birkhoff_character_avg(h, 0, 0, {0.0, 0.0}, 100000), complex(1.0));
  EXPECT_LT(std::abs(birkhoff_character_avg(h, 0, 1, {0.0, 0.0}, 100000)), 0.05);
  EXPECT_THROW(birkhoff_character_avg(h, 1, 0, {0.0, 0.0}, 0), std::invalid_argument);
}

TEST(Birkhoff, MatchesDirectSummation) {
  // oracle: iterate step() directly and sum characters
  std::mt19937_64 rng(163);
  SkewProduct h{0.4142135623730951, -2, grid_samples(random_trig(rng, 3), 4096)};
  TorusPoint x{0.2, 0.9};
  complex s = 0.0;
  const int n = 3000;
  for (int k = 0; k < n; ++k) {
    s += std::polar(1.0, kTwoPi * (2 * x.t1 - 3 * x.t2));
    x = step(h, x);
  }
  EXPECT_LE(std::abs(birkhoff_character_avg(h, 2, -3, {0.2, 0.9}, n) - s / static_cast<double>(n)), 1e-9);
}

TEST(Birkhoff, ReversedOrbitSymmetry) {
  std::mt19937_64 rng(167);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    SkewProduct h{u(rng), std::uniform_int_distribution<int>(-2, 2)(rng), grid_samples(random_trig(rng, 3), 4096)};
    TorusPoint x{u(rng), u(rng)};
    const long long n = 5000;
    int m = std::uniform_int_distribution<int>(-3, 3)(rng), k = std::uniform_int_distribution<int>(1, 3)(rng);
    complex fwd = birkhoff_character_avg(h, m, k, x, n);
    complex bwd = birkhoff_character_avg(h, -m, -k, iterate(h, x, n), n, true);
    EXPECT_LE(std::abs(fwd - std::conj(bwd)), 2.0 / n);
  }
}

TEST(Birkhoff, QuadraticWeylDecay) {
  SkewProduct h{kGolden, 1, {}};
  for (int m = -3; m <= 3; ++m)
    for (int n = -3; n <= 3; ++n) {
      if (m == 0 && n == 0) continue;
      EXPECT_LE(std::abs(birkhoff_character_avg(h, m, n, {0.0, 0.0}, 100000)), 0.05) << m << " " << n;
    }
}

TEST(Dynamics, MeasurePreservationProxy) {
  std::mt19937_64 rng(173);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SkewProduct h{kGolden, 1, grid_samples(random_trig(rng, 4), 4096)};
  std::vector<int> hist(100, 0);
  for (int c = 0; c < 10000; ++c) {
    TorusPoint p{u(rng), u(rng)};
    for (int k = 0; k < 100; ++k) {
      p = step(h, p);
      ++hist[std::min(9, static_cast<int>(p.t1 * 10)) * 10 + std::min(9, static_cast<int>(p.t2 * 10))];
    }
  }
  for (int c : hist) EXPECT_LE(std::abs(c - 10000), 500);
}

TEST(Minimality, Coverage) {
  SkewProduct h{kGolden, 1, {}};
  EXPECT_EQ(minimality_probe(h, {0.0, 0.0}, 0, 50), 0.0);
  EXPECT_EQ(minimality_probe(h, {0.0, 0.0}, 1000000, 50), 1.0);
  SkewProduct half{0.5, 0, {}};
  EXPECT_LE(minimality_probe(half, {0.1, 0.3}, 100000, 50), 2.0 / 50);
}

TEST(Coboundary, RecoversKnownTransferFunction) {
  std::mt19937_64 rng(179);
  std::normal_distribution<double> n(0.0, 1.0);
  const int K = 32;
  const double theta = std::sqrt(2.0) - 1.0;
  std::vector<complex> psi(2 * K + 1), phi(2 * K + 1);
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    psi[k + K] = complex(n(rng), n(rng)) / static_cast<double>(k * k);
    phi[k + K] = psi[k + K] * (std::polar(1.0, kTwoPi * k * theta) - 1.0);
  }
  auto r = coboundary_solve(theta, phi);
  EXPECT_FALSE(r.obstructed);
  for (int k = -K; k <= K; ++k) EXPECT_LE(std::abs(r.psi(k) - psi[k + K]), 1e-10) << k;
  EXPECT_TRUE(r.small_divisors.empty());
  ASSERT_EQ(r.partial_norms.size(), static_cast<std::size_t>(K));

  phi[K] = 0.3;
  auto ob = coboundary_solve(theta, phi);
  EXPECT_TRUE(ob.obstructed);
  EXPECT_EQ(ob.mean_obstruction, complex(0.3));

  auto rat = coboundary_solve(0.5, phi);
  EXPECT_FALSE(rat.small_divisors.empty());
  EXPECT_EQ(rat.psi(2), complex(0.0));
}

TEST(Coboundary, GoldenDiophantineBound) {
  // k ||k theta|| >= 1/3 for the golden rotation, checked directly below, and
  // |e(x) - 1| >= 4 ||x||, so |psi_hat(k)| <= 3 / (4 |k|) and the tail past K is at most 9 / (8 K).
  for (int k = 1; k <= 4096; ++k) {
    double x = k * kGolden;
    EXPECT_GE(k * std::min(x - std::floor(x), std::ceil(x) - x), 1.0 / 3.0) << k;
  }
  const int K = 4096;
  std::vector<complex> phi(2 * K + 1);
  for (int k = 1; k <= K; ++k) phi[K + k] = phi[K - k] = 1.0 / (static_cast<double>(k) * k);
  auto r = coboundary_solve(kGolden, phi);
  for (int j : {64, 256, 1024}) {
    double a = r.partial_norms[j - 1], b = r.partial_norms[K - 1];
    EXPECT_LE(b * b - a * a, 9.0 / (8.0 * j)) << j;
  }
  EXPECT_GT(r.min_divisor, 0.0);
}
