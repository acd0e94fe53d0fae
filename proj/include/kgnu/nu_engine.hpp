#pragma once

// Nikiforov-Uvarov reduction of
//
//   psi'' + (tau~/sigma) psi' + (sigma~/sigma^2) psi = 0
//
// to the hypergeometric form sigma y'' + tau y' + lambda y = 0 through
// psi = phi(s) y(s), with
//
//   pi(s)  = (sigma' - tau~)/2 +- sqrt(((sigma' - tau~)/2)^2 - sigma~ + kappa sigma)
//   tau    = tau~ + 2 pi,            tau' < 0
//   lambda = kappa + pi' = -n tau' - n(n-1)/2 sigma''
//
// kappa is fixed by requiring the radicand to be a perfect square in s.

#include <array>
#include <utility>
#include <vector>

namespace kgnu::nu {

/// Polynomial of degree <= 2, coefficients lowest degree first.
struct Poly {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  Poly() = default;
  Poly(double c0, double c1 = 0.0, double c2 = 0.0) : c{c0, c1, c2} {}

  double operator()(double s) const { return c[0] + s * (c[1] + s * c[2]); }
  Poly derivative() const { return Poly(c[1], 2.0 * c[2], 0.0); }
  /// Value of the first derivative (constant for degree <= 1 polynomials at s = 0).
  double slope() const { return c[1]; }
  int degree() const;
  bool is_zero() const { return degree() < 0; }

  friend Poly operator+(const Poly &a, const Poly &b) {
    return Poly(a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2]);
  }
  friend Poly operator-(const Poly &a, const Poly &b) {
    return Poly(a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2]);
  }
  friend Poly operator*(double k, const Poly &a) {
    return Poly(k * a.c[0], k * a.c[1], k * a.c[2]);
  }
};

/// The triple (tau~, sigma, sigma~).
struct NUProblem {
  Poly tau_tilde;
  Poly sigma;
  Poly sigma_tilde;

  /// Degree bounds and sigma != 0; InvalidArgument otherwise.
  void validate() const;
};

struct NUReduction {
  double kappa = 0.0;
  Poly pi;
  Poly tau;
  /// Index of kappa in ascending kappa_candidates order.
  int kappa_index = 0;
  /// Sign taken in front of the square root: +1 or -1.
  int sign = 1;
};

/// Real kappa for which ((sigma'-tau~)/2)^2 - sigma~ + kappa sigma is a
/// perfect square, ascending, double roots merged (tolerance 1e-12).
/// NoRealKappa when there are none, DegenerateSigma when every kappa works.
std::vector<double> kappa_candidates(const NUProblem &p);

/// Both pi(s) for one kappa, in the order {+sqrt, -sqrt}. NotPerfectSquare
/// when the radicand is not the square of a real linear polynomial.
std::vector<Poly> pi_branches(const NUProblem &p, double kappa);

/// Every (kappa, sign) pair with tau' < 0, ordered by kappa ascending and then
/// sign (-1 before +1). NoAdmissibleBranch when empty.
std::vector<NUReduction> select_admissible(const NUProblem &p);

/// The reduction with the smallest kappa and the negative root, which is the
/// normalizable one for the Rosen-Morse triple. NoAdmissibleBranch if that
/// pair is not admissible.
NUReduction select_lowest_kappa_negative(const NUProblem &p);

/// lambda_n = -n tau' - n(n-1)/2 sigma''.
double lambda_of_n(const NUReduction &r, const Poly &sigma, int n);

/// lambda = kappa + pi'.
double lambda_of_kappa(const NUReduction &r);

/// Residual of pi^2 + pi (tau~ - sigma') + (sigma~ - kappa sigma), coefficient-wise max.
double defining_identity_residual(const NUProblem &p, const NUReduction &r);

/// Exponents (a, b) of rho = (1-s)^a (1+s)^b solving (sigma rho)' = tau rho.
/// UnsupportedSigmaClass unless sigma = c (1 - s^2), c > 0.
std::pair<double, double> weight_exponents(const NUReduction &r, const Poly &sigma);

/// Exponents (a, b) of phi = (1-s)^a (1+s)^b solving phi'/phi = pi/sigma.
std::pair<double, double> phi_exponents(const NUReduction &r, const Poly &sigma);

} // namespace kgnu::nu
