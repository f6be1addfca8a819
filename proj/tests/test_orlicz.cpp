#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dualmp/orlicz.hpp"
#include "oracles.hpp"

using namespace dualmp;

namespace {

// Box whose node-volume rule has total weight exactly 1.
GridDomain unit_volume_box(int n) {
  return GridDomain::cube(3, n, (n + 1.0) / (2.0 * n));
}

/// Extremes of Ã(t) / (t^{(p+1)/p} ln(e+t)^{α/p}) on a dense probe grid.
std::pair<double, double> band_constants(const Nonlinearity& nl, double p, double alpha) {
  double lo = INFINITY, hi = 0.0;
  for (double t : oracle::log_grid(1e-10, 1e12, 40)) {
    const double r = nl.conjugate(t) / (std::pow(t, (p + 1.0) / p) * std::pow(log_e_plus(t), alpha / p));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  // Probe grid is discrete; a small margin covers the gaps between probes.
  return {lo * (1.0 - 1e-3), hi * (1.0 + 1e-3)};
}

GridField positive_field(const GridDomain& d, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  GridField f(d);
  for (double& v : f.values) v = scale * std::pow(U(rng), 3.0);
  return f;
}

}  // namespace

TEST(Modular, TrivialValues) {
  const GridDomain d = unit_volume_box(9);
  const NFunction sq = NFunction::power(2.0);
  EXPECT_EQ(modular(sq, GridField(d)), 0.0);
  EXPECT_NEAR(modular(sq, GridField(d, 1.0)), 1.0, 1e-14);
  EXPECT_NEAR(modular(sq, GridField(d, -3.0)), 9.0, 1e-13);
}

TEST(Modular, ConvexInTheField) {
  const SystemParams sp{3, 2.0, 2.0, 1.0, 1.0};
  const NFunction H = NFunction::tildeA(sp);
  std::mt19937_64 rng(1);
  const GridDomain d = GridDomain::cube(3, 9);
  for (int i = 0; i < 10; ++i) {
    const GridField f = oracle::random_field(d, rng, -5.0, 5.0);
    const GridField g = oracle::random_field(d, rng, -5.0, 5.0);
    const double mid = modular(H, 0.5 * f + 0.5 * g);
    EXPECT_LE(mid, 0.5 * modular(H, f) + 0.5 * modular(H, g) + 1e-12);
  }
}

TEST(Modular, OverflowIsRangeError) {
  const GridDomain d = GridDomain::cube(3, 9);
  EXPECT_THROW(modular(NFunction::power(4.0), GridField(d, 1e100)), RangeError);
}

TEST(Modular, EigenfunctionAgainstFineQuadrature) {
  // Reference: tensor Gauss-Legendre on the octant, panels graded geometrically
  // toward the faces where Ã(cos) loses smoothness.
  const SystemParams sp{3, 2.0, 2.0, 1.0, 1.0};
  const Nonlinearity nl(sp.sigma(Which::a));
  static const double gx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                               -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
  static const double gw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                               0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
  std::vector<double> c, w;  // c = sin(πs) at distance s from the face
  double hi = 0.5;
  for (int k = 0; k < 16; ++k) {
    const double lo = 0.5 * hi;
    const double h = (hi - lo) / 2;
    for (int j = 0; j < 2; ++j)
      for (int q = 0; q < 8; ++q) {
        c.push_back(std::sin(M_PI * (lo + j * h + 0.5 * h * (1.0 + gx[q]))));
        w.push_back(0.5 * h * gw[q]);
      }
    hi = lo;
  }
  double ref = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double cij = c[i] * c[j];
      double s = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k) s += w[k] * nl.conjugate(cij * c[k]);
      ref += w[i] * w[j] * s;
    }
  ref *= 8.0;
  const NFunction H = NFunction::tildeA(sp);
  const double m63 = modular(H, oracle::cosine_mode(GridDomain::cube(3, 63)));
  const double m127 = modular(H, oracle::cosine_mode(GridDomain::cube(3, 127)));
  EXPECT_NEAR(((4.0 * m127 - m63) / 3.0) / ref, 1.0, 1e-4);
  EXPECT_NEAR(m127 / ref, 1.0, 1e-3);
}

TEST(Luxemburg, PowerIsLpNorm) {
  std::mt19937_64 rng(2);
  const GridDomain d = GridDomain::cube(3, 11);
  for (double r : {1.0, 1.5, 2.0, 3.0, 6.0}) {
    const GridField f = oracle::random_field(d, rng, -2.0, 2.0);
    const double lp = lp_norm(f, r);
    EXPECT_NEAR(luxemburg_norm(NFunction::power(r), f, 1e-12), lp, 1e-8 * lp);
  }
}

TEST(Luxemburg, Homogeneity) {
  const SystemParams sp{3, 2.0, 3.0, 1.0, -1.0};
  std::mt19937_64 rng(3);
  const GridDomain d = GridDomain::cube(3, 9);
  for (const NFunction H : {NFunction::tildeA(sp), NFunction::A(sp), NFunction::tildeA(sp, Which::b)}) {
    const GridField f = oracle::random_field(d, rng);
    const double n1 = luxemburg_norm(H, f, 1e-12);
    for (double c : {-7.0, 0.01, 250.0}) {
      EXPECT_NEAR(luxemburg_norm(H, c * f, 1e-12), std::abs(c) * n1, 1e-9 * std::abs(c) * n1);
    }
  }
}

TEST(Luxemburg, ModularAtNormIsOne) {
  const SystemParams sp{3, 2.0, 2.0, 1.0, 1.0};
  const OrliczPair pair = make_orlicz_pair(NFunction::tildeA(sp));
  std::mt19937_64 rng(4);
  const GridDomain d = GridDomain::cube(3, 9);
  for (double scale : {1e-4, 1.0, 1e4}) {
    const GridField f = positive_field(d, rng, scale);
    const LuxemburgResult r = luxemburg_detailed(pair.H, f, 1e-10);
    EXPECT_NEAR(r.modular_at_norm, 1.0, 1e-10);
    EXPECT_NEAR(scaled_modular(pair.H, f, r.norm), 1.0, 1e-10);
  }
}

TEST(Luxemburg, MatchesDenseLambdaScan) {
  const SystemParams sp{3, 2.0, 2.0, 1.0, 1.0};
  const OrliczPair pair = make_orlicz_pair(NFunction::tildeA(sp));
  std::mt19937_64 rng(5);
  const GridDomain d = GridDomain::cube(3, 9);
  const GridField f = positive_field(d, rng, 3.0);
  const double lux = luxemburg_norm(pair.H, f, 1e-11);
  // Crossing located on a geometric scan of spacing 1e-7 in ln λ around the result.
  const double step = 1e-7;
  double lam = lux * std::exp(-200 * step);
  ASSERT_GT(scaled_modular(pair.H, f, lam), 1.0);
  int k = 0;
  while (scaled_modular(pair.H, f, lam) > 1.0 && k < 400) {
    lam *= std::exp(step);
    ++k;
  }
  ASSERT_LT(k, 400);
  EXPECT_NEAR(lux, lam, 2.0 * step * lam);
}

TEST(Luxemburg, ZeroFieldIsDomainError) {
  const GridDomain d = GridDomain::cube(3, 9);
  EXPECT_THROW(luxemburg_norm(NFunction::power(2.0), GridField(d)), std::domain_error);
  const SystemParams sp{3, 2.0, 2.0, 1.0, 1.0};
  EXPECT_THROW(holder_ratio(GridField(d), GridField(d, 1.0), NFunction::tildeA(sp)), std::domain_error);
}

TEST(Holder, SquareWithEqualFields) {
  // For H = c t² the conjugate is t²/(4c); the two Luxemburg norms multiply to
  // ‖f‖₂²/2 whatever c is, so f = g gives 2 and not 1.
  std::mt19937_64 rng(6);
  const GridDomain d = GridDomain::cube(3, 9);
  const GridField f = oracle::random_field(d, rng);
  for (double c : {1.0, 0.5, 3.0}) {
    EXPECT_NEAR(holder_ratio(f, f, NFunction::power(2.0, c), 1e-12), 2.0, 1e-9);
  }
}

TEST(Holder, RandomPairsStayBelowTwo) {
  const SystemParams sp{3, 2.0, 2.0, 1.0, 1.0};
  const OrliczPair pair = make_orlicz_pair(NFunction::tildeA(sp));
  std::mt19937_64 rng(7);
  const GridDomain d = GridDomain::cube(3, 9);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double sf = std::pow(10.0, i % 5 - 2), sg = std::pow(10.0, (i / 5) % 5 - 2);
    const GridField f = oracle::random_field(d, rng, -sf, sf);
    const GridField g = oracle::random_field(d, rng, -sg, sg);
    worst = std::max(worst, holder_ratio(f, g, pair));
  }
  EXPECT_LE(worst, 2.0);
  EXPECT_GT(worst, 0.0);
}

TEST(Holder, YoungEqualityPair) {
  std::mt19937_64 rng(8);
  const GridDomain d = GridDomain::cube(3, 9);
  for (const SystemParams sp : {SystemParams{3, 2.0, 2.0, 1.0, 1.0}, SystemParams{3, 4.0, 2.0, -1.0, 0.0},
                                SystemParams{3, 0.7, 2.0, 0.3, 0.0}}) {
    const OrliczPair pair = make_orlicz_pair(NFunction::tildeA(sp));
    for (double scale : {0.01, 1.0, 100.0}) {
      GridField f = positive_field(d, rng, scale);
      f *= 1.0 / luxemburg_norm(pair.H, f);
      const GridField g = f.map(pair.density);
      const double r = holder_ratio(f, g, pair);
      EXPECT_GE(r, 1.0 - 1e-8);
      EXPECT_LE(r, 2.0);
    }
  }
}

TEST(DualNorm, BracketAndWitness) {
  std::mt19937_64 rng(9);
  const GridDomain d = GridDomain::cube(3, 9);
  for (const SystemParams sp : {SystemParams{3, 2.0, 2.0, 1.0, 1.0}, SystemParams{3, 3.0, 2.0, -2.0, 0.0}}) {
    for (const NFunction H : {NFunction::tildeA(sp), NFunction::A(sp)}) {
      const OrliczPair pair = make_orlicz_pair(H);
      for (double scale : {0.1, 10.0}) {
        const GridField u = oracle::random_field(d, rng, -scale, scale);
        const DualNormBracket b = dual_norm_bracket(u, pair);
        EXPECT_NEAR(b.upper, 2.0 * b.lower, 1e-12 * b.upper);
        EXPECT_GE(b.witness, b.lower * (1.0 - 1e-8));
        EXPECT_LE(b.witness, b.upper);
      }
    }
  }
}

TEST(DualNorm, SampledUnitBallStaysInBracket) {
  // Random v normalised in the conjugate norm: ∫uv never exceeds 2‖u‖_(H).
  const SystemParams sp{3, 2.0, 2.0, 1.0, 1.0};
  const OrliczPair pair = make_orlicz_pair(NFunction::tildeA(sp));
  std::mt19937_64 rng(10);
  const GridDomain d = GridDomain::cube(3, 9);
  const GridField u = oracle::random_field(d, rng, -3.0, 3.0);
  const DualNormBracket b = dual_norm_bracket(u, pair);
  double best = b.witness;
  for (int i = 0; i < 50; ++i) {
    GridField v = oracle::random_field(d, rng);
    v *= 1.0 / luxemburg_norm(pair.conjugate, v);
    best = std::max(best, inner(u, v));
  }
  EXPECT_GE(best, b.lower * (1.0 - 1e-8));
  EXPECT_LE(best, b.upper);
}

class ModularNormInequalities : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(ModularNormInequalities, BoundsWithMeasuredBandConstants) {
  const auto [p, alpha] = GetParam();
  const SystemParams sp{3, p, 2.0, alpha, 0.0};
  const Nonlinearity nl(sp.sigma(Which::a));
  const auto [C1, C2] = band_constants(nl, p, alpha);
  const OrliczPair pair = make_orlicz_pair(NFunction::tildeA(sp));
  const double e = (p + 1.0) / p;
  std::mt19937_64 rng(static_cast<unsigned>(100 * p + 10 * alpha + 50));
  const GridDomain d = GridDomain::cube(3, 9);
  int above = 0, below = 0;
  for (int i = 0; i < 40; ++i) {
    const double scale = std::pow(10.0, -3.0 + 0.15 * i);  // norms from ~1e-3 to ~1e3
    const GridField f = positive_field(d, rng, scale);
    const double m = modular(pair.H, f);
    const double nrm = luxemburg_norm(pair.H, f);
    const double lp = lp_norm(f, e);
    const double tol = 1e-9 * m;
    if (alpha >= 0.0) {
      if (nrm >= 1.0) {
        EXPECT_GE(m + tol, C1 / C2 * std::pow(nrm, e));
        ++above;
      } else {
        EXPECT_LE(m - tol, C2 / C1 * std::pow(nrm, e));
        ++below;
      }
      EXPECT_GE(m + tol, C1 * std::pow(lp, e));
    } else {
      if (nrm >= 1.0) {
        EXPECT_LE(m - tol, C2 / C1 * std::pow(nrm, e));
        ++above;
      } else {
        EXPECT_GE(m + tol, C1 / C2 * std::pow(nrm, e));
        ++below;
      }
      EXPECT_LE(m - tol, C2 * std::pow(lp, e));
    }
  }
  EXPECT_GT(above, 5);
  EXPECT_GT(below, 5);
}

INSTANTIATE_TEST_SUITE_P(PowerLog, ModularNormInequalities,
                         ::testing::Values(std::pair{2.0, 1.0}, std::pair{3.0, 0.5}, std::pair{1.0, 0.0},
                                           std::pair{2.0, -1.0}, std::pair{5.0, -3.0},
                                           std::pair{0.8, -0.4}));

TEST(Embedding, ConjugateDominatesPowerForNonnegativeAlpha) {
  for (const auto& [p, alpha] : {std::pair{2.0, 1.0}, std::pair{3.0, 0.0}, std::pair{0.6, 0.5},
                                std::pair{5.0, 5.0}}) {
    const Nonlinearity nl(PowerLog{p, -alpha});
    for (double t : oracle::log_grid(1e-8, 1e12, 20)) {
      const double bound = p / (p + 1.0) * std::pow(t, (p + 1.0) / p);
      EXPECT_GE(nl.conjugate(t), bound * (1.0 - 1e-9)) << "p=" << p << " alpha=" << alpha << " t=" << t;
    }
  }
}

TEST(MeanConvergence, ModularAndNormVanishTogether) {
  const SystemParams sp{3, 2.0, 2.0, 1.0, 1.0};
  const OrliczPair pair = make_orlicz_pair(NFunction::tildeA(sp));
  const GridDomain d = GridDomain::cube(3, 17);
  const GridField u = oracle::cosine_mode(d);
  const std::size_t total = d.size();
  const double vol = d.cell_volume();

  // Perturbations e_k = u_k - u.
  auto uniform = [&](int k) { return (1.0 / k) * u; };
  auto thin = [&](int k) {
    GridField e(d);
    const std::size_t m = std::max<std::size_t>(1, total / k);
    for (std::size_t i = 0; i < m; ++i) e[i] = 1.0;
    return e;
  };
  auto tall = [&](int k) {
    GridField e(d);
    const std::size_t m = std::max<std::size_t>(1, total / k);
    for (std::size_t i = 0; i < m; ++i) e[i] = std::pow(static_cast<double>(k), 0.25);
    return e;
  };
  for (const auto& seq : {std::function<GridField(int)>(uniform), std::function<GridField(int)>(thin),
                          std::function<GridField(int)>(tall)}) {
    double prev_m = INFINITY, prev_n = INFINITY;
    double last_m = 0.0, last_n = 0.0;
    for (int k : {2, 8, 32, 128, 512}) {
      const GridField e = seq(k);
      last_m = modular(pair.H, e);
      last_n = luxemburg_norm(pair.H, e);
      EXPECT_LT(last_m, prev_m);
      EXPECT_LT(last_n, prev_n);
      prev_m = last_m;
      prev_n = last_n;
    }
    EXPECT_LT(last_m, 0.02);
    EXPECT_LT(last_n, 0.1);
  }

  // Counter-sequence: height Ã⁻¹(1/measure) keeps the modular at 1 and the norm at 1.
  for (int k : {8, 64, 512}) {
    GridField e(d);
    const std::size_t m = total / k;
    const double meas = m * vol;
    double lo = 0.0, hi = 1e8;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (pair.H(mid) * meas > 1.0 ? hi : lo) = mid;
    }
    for (std::size_t i = 0; i < m; ++i) e[i] = lo;
    EXPECT_NEAR(modular(pair.H, e), 1.0, 1e-8);
    EXPECT_NEAR(luxemburg_norm(pair.H, e), 1.0, 1e-6);
  }
}
