#pragma once

// q-deformed hyperbolic functions and the Rosen-Morse type potential
//
//   sinh_q x = (e^x - q e^-x)/2     cosh_q x = (e^x + q e^-x)/2
//   tanh_q = sinh_q/cosh_q, coth_q = 1/tanh_q, sech_q = 1/cosh_q,
//   cosech_q = 1/sinh_q
//
// q = 1 gives the ordinary functions, q = -1 swaps the roles of sinh and
// cosh, and q = 0 collapses everything onto a single exponential.

#include <optional>
#include <utility>
#include <vector>

namespace kgnu {

/// Deformation parameter. Spectrum code requires q in [-1,0) U (0,1]; plain
/// function evaluation accepts any finite q, including 0.
struct DeformationQ {
  double value = 1.0;

  /// Throws InvalidArgument outside [-1,0) U (0,1].
  static DeformationQ for_spectrum(double q);
};

/// Coefficients of V(x) = -v1 sech_q^2(alpha x) - v2 tanh_q(alpha x).
struct PotentialParams {
  double v1 = 0.0;
  double v2 = 0.0;
  double alpha = 1.0;
  double q = 1.0;

  /// alpha > 0 and all fields finite, else InvalidArgument.
  void validate() const;
};

namespace qhyper {

double sinh_q(double x, double q);
double cosh_q(double x, double q);
/// PoleAtX where cosh_q vanishes (q < 0 only, at x = ln(-q)/2).
double tanh_q(double x, double q);
/// PoleAtX where sinh_q vanishes (q > 0 only, at x = ln(q)/2).
double coth_q(double x, double q);
double sech_q(double x, double q);
double cosech_q(double x, double q);

/// 1 - tanh_q(x) and 1 + tanh_q(x) without cancellation near s = +-1.
double one_minus_tanh_q(double x, double q);
double one_plus_tanh_q(double x, double q);

/// Zero of cosh_q(x) (q < 0), nullopt otherwise.
std::optional<double> cosh_q_zero(double q);
/// Zero of sinh_q(x) (q > 0), nullopt otherwise.
std::optional<double> sinh_q_zero(double q);

} // namespace qhyper

/// Location of the cosh_q(alpha x) pole of the potential, x0 = ln(-q)/(2 alpha).
std::optional<double> potential_pole(const PotentialParams &p);

/// -v1 sech_q^2(alpha x) - v2 tanh_q(alpha x). PoleAtX at the q < 0 singularity.
double potential_eval(const PotentialParams &p, double x);

/// n_points uniformly spaced samples on [x_min, x_max], both ends included.
/// DomainViolation when the closed interval contains the pole.
std::vector<std::pair<double, double>> potential_curve(const PotentialParams &p,
                                                       double x_min, double x_max,
                                                       int n_points);

} // namespace kgnu
