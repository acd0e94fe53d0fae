#include <gtest/gtest.h>

#include <cmath>

#include "kgnu/errors.hpp"
#include "kgnu/qhyper.hpp"

using namespace kgnu;
using namespace kgnu::qhyper;

TEST(QHyper, SinhAtZero) { EXPECT_DOUBLE_EQ(sinh_q(0.0, 0.5), 0.25); }

TEST(QHyper, TanhMinusOneIsCoth) {
  EXPECT_NEAR(tanh_q(1.0, -1.0), 1.3130352854993313, 1e-15);
}

TEST(QHyper, SechAtZero) { EXPECT_NEAR(sech_q(0.0, 0.5), 4.0 / 3.0, 1e-15); }

TEST(QHyper, CoshSquaredMinusSinhSquaredIsQ) {
  for (double q : {-1.0, -0.5, -0.1, 0.0, 0.25, 0.5, 1.0}) {
    for (double x = -6.0; x <= 6.0; x += 0.37) {
      const double c = cosh_q(x, q), s = sinh_q(x, q);
      const double scale = std::max(1.0, std::exp(2.0 * std::abs(x)));
      EXPECT_NEAR((c * c - s * s - q) / scale, 0.0, 1e-12) << "q=" << q << " x=" << x;
    }
  }
}

TEST(QHyper, TanhDerivativeIdentity) {
  const double h = 1e-5;
  for (double q : {0.3, 0.5, 1.0}) {
    for (double alpha : {0.7, 1.0, 2.0}) {
      for (double x = -3.0; x <= 3.0; x += 0.41) {
        const double fd = (tanh_q(alpha * (x + h), q) - tanh_q(alpha * (x - h), q)) / (2.0 * h);
        const double t = tanh_q(alpha * x, q);
        const double sech = sech_q(alpha * x, q);
        const double exact1 = alpha * (1.0 - t * t);
        const double exact2 = alpha * q * sech * sech;
        EXPECT_NEAR(fd / exact1, 1.0, 1e-6);
        EXPECT_NEAR(exact1 / exact2, 1.0, 1e-10);
      }
    }
  }
}

TEST(QHyper, UndeformedReduction) {
  for (double x = -8.0; x <= 8.0; x += 0.31) {
    EXPECT_NEAR(sinh_q(x, 1.0), std::sinh(x), 1e-14 * std::cosh(x));
    EXPECT_NEAR(cosh_q(x, 1.0), std::cosh(x), 1e-14 * std::cosh(x));
    EXPECT_NEAR(tanh_q(x, 1.0), std::tanh(x), 1e-14);
    EXPECT_NEAR(sech_q(x, 1.0), 1.0 / std::cosh(x), 1e-14);
  }
}

TEST(QHyper, QMinusOneSwapsRoles) {
  for (double x : {-3.0, -0.4, 0.2, 1.0, 2.5}) {
    EXPECT_NEAR(tanh_q(x, -1.0), 1.0 / std::tanh(x), 1e-13 / std::abs(std::tanh(x)));
    const double cosech = 1.0 / std::sinh(x);
    EXPECT_NEAR(sech_q(x, -1.0) * sech_q(x, -1.0), cosech * cosech, 1e-12 * cosech * cosech);
    EXPECT_NEAR(coth_q(x, -1.0), std::tanh(x), 1e-14);
  }
}

TEST(QHyper, CoordinateShift) {
  for (double q : {0.05, 0.25, 0.5, 0.9}) {
    for (double y = -5.0; y <= 5.0; y += 0.23) {
      EXPECT_NEAR(tanh_q(y, q), std::tanh(y - 0.5 * std::log(q)), 1e-12);
    }
  }
}

TEST(QHyper, ExponentialLimitAtQZero) {
  for (double x : {-3.0, 0.0, 2.0}) {
    EXPECT_EQ(tanh_q(x, 0.0), 1.0);
    EXPECT_NEAR(sech_q(x, 0.0), 2.0 * std::exp(-x), 1e-14 * std::exp(-x));
  }
}

TEST(QHyper, LargeArgumentsStayFinite) {
  for (double q : {-1.0, 0.5, 1.0}) {
    EXPECT_EQ(tanh_q(800.0, q), 1.0);
    EXPECT_EQ(sech_q(800.0, q), 0.0);
    EXPECT_EQ(sech_q(-800.0, q), 0.0);
  }
  EXPECT_EQ(tanh_q(-800.0, 0.5), -1.0);
  EXPECT_EQ(tanh_q(-800.0, -0.5), -1.0);
}

TEST(QHyper, PoleIsReportedWithLocation) {
  const double q = -0.25;
  const double x0 = 0.5 * std::log(0.25);
  ASSERT_TRUE(cosh_q_zero(q).has_value());
  EXPECT_NEAR(*cosh_q_zero(q), x0, 1e-15);
  try {
    tanh_q(x0, q);
    FAIL() << "expected PoleAtX";
  } catch (const PoleAtX &e) {
    EXPECT_NEAR(e.location(), x0, 1e-15);
  }
  EXPECT_THROW(sech_q(x0, q), PoleAtX);
  EXPECT_THROW(coth_q(0.0, 1.0), PoleAtX);
  EXPECT_FALSE(cosh_q_zero(0.5).has_value());
  EXPECT_FALSE(sinh_q_zero(-0.5).has_value());
}

TEST(QHyper, OneMinusTanhKeepsPrecision) {
  for (double q : {0.5, 1.0}) {
    for (double x : {5.0, 12.0, 18.0}) {
      const double om = one_minus_tanh_q(x, q);
      const double expect = 2.0 * q * std::exp(-2.0 * x) / (1.0 + q * std::exp(-2.0 * x));
      EXPECT_NEAR(om / expect, 1.0, 1e-14);
      const double e2 = std::exp(-2.0 * x);
      EXPECT_NEAR(one_plus_tanh_q(-x, q) / (2.0 * e2 / (e2 + q)), 1.0, 1e-14);
    }
  }
}

TEST(Deformation, SpectrumRange) {
  EXPECT_NO_THROW(DeformationQ::for_spectrum(1.0));
  EXPECT_NO_THROW(DeformationQ::for_spectrum(-1.0));
  EXPECT_NO_THROW(DeformationQ::for_spectrum(0.3));
  EXPECT_THROW(DeformationQ::for_spectrum(0.0), InvalidArgument);
  EXPECT_THROW(DeformationQ::for_spectrum(1.5), InvalidArgument);
  EXPECT_THROW(DeformationQ::for_spectrum(-1.01), InvalidArgument);
}

TEST(Potential, FigureOneOrigin) {
  const PotentialParams p{1.0, -1.0 / 3.0, 1.0, 1.0};
  EXPECT_EQ(potential_eval(p, 0.0), -1.0);
}

TEST(Potential, RightAsymptote) {
  const PotentialParams p{1.0, -1.0 / 3.0, 1.0, 1.0};
  EXPECT_NEAR(potential_eval(p, 40.0), 1.0 / 3.0, 1e-15);
}

TEST(Potential, DeformedOriginIncludesAsymmetryTerm) {
  // sech_q(0)^2 = 16/9 and tanh_q(0) = (1-q)/(1+q) = 1/3 at q = 0.5.
  const PotentialParams well{1.0, 0.0, 1.0, 0.5};
  EXPECT_NEAR(potential_eval(well, 0.0), -16.0 / 9.0, 1e-15);
  const PotentialParams fig{1.0, -1.0 / 3.0, 1.0, 0.5};
  EXPECT_NEAR(potential_eval(fig, 0.0), -16.0 / 9.0 + 1.0 / 9.0, 1e-15);
}

TEST(Potential, PoleRethrownInXCoordinate) {
  const PotentialParams p{1.0, 0.0, 2.0, -0.5};
  const double x0 = std::log(0.5) / 4.0;
  ASSERT_TRUE(potential_pole(p).has_value());
  EXPECT_NEAR(*potential_pole(p), x0, 1e-15);
  try {
    potential_eval(p, x0);
    FAIL() << "expected PoleAtX";
  } catch (const PoleAtX &e) {
    EXPECT_NEAR(e.location(), x0, 1e-15);
  }
}

TEST(Potential, ValidateRejectsBadAlpha) {
  EXPECT_THROW((PotentialParams{1.0, 0.0, 0.0, 1.0}.validate()), InvalidArgument);
  EXPECT_THROW((PotentialParams{NAN, 0.0, 1.0, 1.0}.validate()), InvalidArgument);
}

TEST(PotentialCurve, ElevenPoints) {
  const auto c = potential_curve({1.0, -1.0 / 3.0, 1.0, 1.0}, -5.0, 5.0, 11);
  ASSERT_EQ(c.size(), 11u);
  EXPECT_EQ(c[5].first, 0.0);
  EXPECT_EQ(c[5].second, -1.0);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c[i - 1].first, c[i].first);
}

TEST(PotentialCurve, TwoPointsAreEndpoints) {
  const auto c = potential_curve({2.0, 0.5, 1.3, 0.7}, -1.5, 2.5, 2);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].first, -1.5);
  EXPECT_EQ(c[1].first, 2.5);
}

TEST(PotentialCurve, IntervalContainingPole) {
  const PotentialParams p{1.0, -1.0 / 3.0, 1.0, -0.25};
  EXPECT_THROW(potential_curve(p, -2.0, 2.0, 101), DomainViolation);
  EXPECT_NO_THROW(potential_curve(p, 0.5 * std::log(0.25) + 0.01, 3.0, 101));
  EXPECT_THROW(potential_curve(p, 0.0, 1.0, 1), InvalidArgument);
}
