#include <gtest/gtest.h>

#include <cmath>

#include "kgnu/errors.hpp"
#include "kgnu/kg_core.hpp"
#include "kgnu/oracle.hpp"

using namespace kgnu;

namespace {

// Root of E^3 + 7E^2 + 16E + 8 in (-1, 1), frozen from an independent
// arbitrary-precision solve.
constexpr double kAnchor = -0.68540378772324802;

KGProblem anchor_problem() { return {1.0, PotentialParams{2.0, 0.0, 1.0, 1.0}}; }

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> xs;
  for (int i = 0; i <= n; ++i) xs.push_back(a + (b - a) * i / n);
  return xs;
}

BoundState first_physical(const std::vector<BoundState> &levels, int n) {
  for (const auto &s : levels) {
    if (s.n == n && s.physical) return s;
  }
  throw std::runtime_error("no physical level");
}

} // namespace

TEST(Effective, SignMatchesTransformedEquation) {
  const KGProblem p{1.0, PotentialParams{1.0, 0.0, 1.0, 1.0}};
  const auto eff = effective_problem(p, 0.0);
  EXPECT_NEAR(eff.v_eff(0.0), -2.0, 1e-15);  // 2(E+M) V(0), an attractive well
  EXPECT_EQ(eff.ebar2, -1.0);
  const auto edge = effective_problem(p, -1.0);
  EXPECT_EQ(edge.v_eff(0.3), 0.0);
  EXPECT_EQ(edge.ebar2, 0.0);
  const auto half = effective_problem(p, 0.5);
  EXPECT_NEAR(half.v_eff(0.0), -3.0, 1e-15);
  EXPECT_NEAR(half.ebar2, -0.75, 1e-15);
}

TEST(Reduced, FreeParticle) {
  const auto r = reduced_params({1.0, PotentialParams{0.0, 0.0, 2.0, 1.0}}, 0.5);
  EXPECT_EQ(r.eps2, 0.0);
  EXPECT_EQ(r.gam2, 0.0);
  EXPECT_NEAR(r.beta2, 0.75 / 4.0, 1e-15);
}

TEST(Reduced, AnchorAtZeroEnergy) {
  const auto r = reduced_params(anchor_problem(), 0.0);
  EXPECT_EQ(r.v1bar, 4.0);
  EXPECT_EQ(r.eps2, -4.0);
  EXPECT_EQ(r.beta2, 1.0);
}

TEST(Reduced, AnchorAtGroundState) {
  const auto r = reduced_params(anchor_problem(), kAnchor);
  EXPECT_NEAR(r.v1bar, 4.0 * (1.0 + kAnchor), 1e-15);
  EXPECT_NEAR(r.v1bar, 1.2584, 1e-4);
}

TEST(Reduced, RejectsQZero) {
  EXPECT_THROW(reduced_params({1.0, PotentialParams{1.0, 0.0, 1.0, 0.0}}, 0.1), InvalidArgument);
}

TEST(Residual, FreeCaseValue) {
  const KGProblem p{1.0, PotentialParams{0.0, 0.0, 1.0, 1.0}};
  EXPECT_NEAR(energy_residual(p, 1, 0.5), 0.25, 1e-15);
  EXPECT_THROW(energy_residual(p, 0, 0.5), DegenerateLevel);
}

TEST(Residual, NegativeDiscriminant) {
  const KGProblem p{1.0, PotentialParams{-2.0, 0.0, 1.0, 1.0}};
  EXPECT_THROW(energy_residual(p, 0, 0.5), DiscriminantNegative);
}

TEST(Residual, SmallAtAnchor) {
  EXPECT_LT(std::abs(energy_residual(anchor_problem(), 0, -0.6854)), 1e-3);
  EXPECT_LT(std::abs(energy_residual(anchor_problem(), 0, kAnchor)), 1e-14);
}

TEST(Levels, FreeParticleHasNone) {
  EXPECT_TRUE(energy_levels({1.0, PotentialParams{0.0, 0.0, 1.0, 1.0}}, 4).empty());
}

TEST(Levels, AnchorGroundState) {
  const auto levels = energy_levels(anchor_problem(), 3);
  const auto g = first_physical(levels, 0);
  EXPECT_NEAR(g.energy, kAnchor, 1e-10);
  EXPECT_TRUE(g.reasons.empty());
}

TEST(Levels, SortedAndInsideMassShell) {
  const KGProblem p{1.0, PotentialParams{1.0, -1.0 / 3.0, 1.0, 0.5}};
  const auto levels = energy_levels(p, 3);
  ASSERT_FALSE(levels.empty());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    EXPECT_GT(levels[i].energy, -1.0);
    EXPECT_LT(levels[i].energy, 1.0);
    if (i) {
      const auto &a = levels[i - 1], &b = levels[i];
      EXPECT_TRUE(a.n < b.n || (a.n == b.n && a.energy < b.energy));
    }
  }
}

TEST(Levels, FigureFamilyPointMatchesOracle) {
  const KGProblem p{1.0, PotentialParams{1.0, -1.0 / 3.0, 1.0, 1.0}};
  const auto g = first_physical(energy_levels(p, 2), 0);
  const auto o = oracle::kg_selfconsistent_level(p, 0, g.energy);
  EXPECT_NEAR(o.energy, g.energy, 1e-6);
  EXPECT_TRUE(o.accepted);
}

TEST(Levels, DeformationOnlyRescalesDepth) {
  // sech_q^2(y) = sech^2(y - ln(q)/2)/q, so (V1, q) and (V1/q, 1) share a spectrum.
  const auto a = energy_levels({1.0, PotentialParams{1.0, 0.0, 1.0, 0.5}}, 3);
  const auto b = energy_levels({1.0, PotentialParams{2.0, 0.0, 1.0, 1.0}}, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i].energy, b[i].energy, 1e-11);
}

TEST(Levels, HalfLineStatesAreFlagged) {
  const KGProblem p{1.0, PotentialParams{2.0, -2.0 / 3.0, 1.0, -1.0}};
  for (const auto &s : energy_levels(p, 2)) {
    EXPECT_FALSE(s.physical);
    EXPECT_NE(s.reasons_text().find(reason::kHalfLinePole), std::string::npos);
  }
}

TEST(Levels, NoBoundStatesPastAsymmetryThreshold) {
  // A level needs E < M - 2|V2|; with V2 = -V/3 that closes at V = 3M.
  for (double v : {3.0, 3.5, 5.0}) {
    for (const auto &s : energy_levels({1.0, PotentialParams{v, -v / 3.0, 1.0, 1.0}}, 3)) {
      EXPECT_FALSE(s.physical) << "V=" << v << " E=" << s.energy;
    }
  }
}

TEST(Levels, NuEngineAgreesAtEveryPhysicalRoot) {
  for (double q : {1.0, 0.5}) {
    for (double v1 : {0.5, 1.0, 2.0}) {
      for (double v2 : {0.0, -v1 / 3.0}) {
        const KGProblem p{1.0, PotentialParams{v1, v2, 1.0, q}};
        for (const auto &s : energy_levels(p, 3)) {
          if (!s.physical) continue;
          EXPECT_LE(std::abs(nu_quantization_gap(p, s.n, s.energy)), 1e-8);
        }
      }
    }
  }
}

TEST(Exponents, IdentitiesAtSolutions) {
  for (double q : {1.0, 0.5}) {
    for (double v1 : {0.5, 1.0, 2.0}) {
      for (double v2 : {0.0, -v1 / 3.0}) {
        const KGProblem p{1.0, PotentialParams{v1, v2, 1.0, q}};
        for (const auto &s : energy_levels(p, 3)) {
          if (!s.physical) continue;
          const auto r = reduced_params(p, s.energy);
          const double mu = s.exponents.mu, nu = s.exponents.nu;
          EXPECT_NEAR(mu * mu + nu * nu, r.beta2, 1e-10);
          EXPECT_NEAR(2.0 * mu * nu, r.gam2, 1e-10);
          EXPECT_NEAR((mu + nu) * (mu + nu), -(r.ebar2 + r.v2bar), 1e-10);
          EXPECT_NEAR((mu - nu) * (mu - nu), -(r.ebar2 - r.v2bar), 1e-10);
          EXPECT_GT(r.beta2 * r.beta2, r.gam2 * r.gam2);
          EXPECT_GT(mu, std::abs(nu));
        }
      }
    }
  }
}

TEST(Wavefunction, RejectsNonPhysical) {
  BoundState s;
  s.physical = false;
  EXPECT_THROW(wavefunction(anchor_problem(), s), NotPhysical);
}

TEST(Wavefunction, NormalizedNodelessAndEven) {
  const auto p = anchor_problem();
  const auto g = first_physical(energy_levels(p, 0), 0);
  const auto psi = wavefunction(p, g);
  const auto xs = grid(-20.0, 20.0, 8000);
  double sum = 0.0;
  std::vector<double> ys;
  for (double x : xs) ys.push_back(psi(x));
  for (std::size_t i = 1; i < xs.size(); ++i) {
    sum += 0.5 * (ys[i] * ys[i] + ys[i - 1] * ys[i - 1]) * (xs[i] - xs[i - 1]);
  }
  EXPECT_NEAR(sum, 1.0, 1e-8);
  EXPECT_EQ(oracle::count_nodes(ys), 0);
  for (double x : {0.3, 1.7, 4.2}) EXPECT_NEAR(psi(x), psi(-x), 1e-10);
}

TEST(Wavefunction, NodeCountEqualsQuantumNumber) {
  const KGProblem p{1.0, PotentialParams{2.0, 0.0, 1.0, 0.5}};
  const auto xs = grid(-20.0, 20.0, 8000);
  for (const auto &s : energy_levels(p, 3)) {
    if (!s.physical) continue;
    const auto psi = wavefunction(p, s);
    std::vector<double> ys;
    for (double x : xs) ys.push_back(psi(x));
    EXPECT_EQ(oracle::count_nodes(ys), s.n);
  }
}

TEST(Wavefunction, AsymptoticDecayRates) {
  const KGProblem p{1.0, PotentialParams{2.0, -2.0 / 3.0, 1.0, 1.0}};
  const auto g = first_physical(energy_levels(p, 0), 0);
  const auto psi = wavefunction(p, g);
  const double mu = g.exponents.mu, nu = g.exponents.nu;
  const double right = (std::log(std::abs(psi(12.0))) - std::log(std::abs(psi(8.0)))) / 4.0;
  const double left = (std::log(std::abs(psi(-8.0))) - std::log(std::abs(psi(-12.0)))) / 4.0;
  EXPECT_NEAR(right, -(mu + nu), 1e-3);
  EXPECT_NEAR(left, mu - nu, 1e-3);
}

TEST(Residual, OdeSatisfiedAndSensitive) {
  const auto p = anchor_problem();
  const auto g = first_physical(energy_levels(p, 0), 0);
  const auto xs = grid(-8.0, 8.0, 1600);
  EXPECT_LE(ode_residual(p, g, xs), 1e-8);
  const auto off = make_state(p, 0, g.energy + 1e-2);
  EXPECT_GT(ode_residual(p, off, xs), 1e-4);
}

TEST(Problem, DomainFollowsDeformation) {
  EXPECT_EQ((KGProblem{1.0, PotentialParams{1.0, 0.0, 1.0, 0.5}}.domain().kind),
            Domain::Kind::FullLine);
  const auto d = KGProblem{1.0, PotentialParams{1.0, 0.0, 2.0, -0.5}}.domain();
  EXPECT_EQ(d.kind, Domain::Kind::HalfLine);
  EXPECT_NEAR(d.x0, std::log(0.5) / 4.0, 1e-15);
  EXPECT_THROW((KGProblem{0.0, PotentialParams{}}.validate()), InvalidArgument);
  EXPECT_THROW((KGProblem{1.0, PotentialParams{1.0, 0.0, 1.0, 0.0}}.validate()), InvalidArgument);
}
