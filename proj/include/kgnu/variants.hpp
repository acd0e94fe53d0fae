#pragma once

// Named specializations of the Rosen-Morse type potential.
//
//   RosenMorseWell  q = 1,  V = -V1 sech^2 + V2 tanh
//   Eckart          q = -1, V = V1 sech_{-1}^2 - V2 tanh_{-1}   (cosech^2, coth form)
//   PTRosenMorse    q > 0,  V = -V1 sech_q^2 - i V2 tanh_q
//   PTEckart        Q = exp(2 i alpha theta),
//                   V = -V1 Q cosech_Q^2 - i V2 coth_Q

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "kgnu/kg_core.hpp"

namespace kgnu::variants {

enum class VariantKind { RosenMorseWell, Eckart, PTRosenMorse, PTEckart };

std::string to_string(VariantKind kind);

struct VariantSpec {
  VariantKind kind = VariantKind::RosenMorseWell;
  double v1 = 0.0;
  double v2 = 0.0;
  double alpha = 1.0;
  double q = 1.0;      // ignored by PTEckart
  double theta = 0.0;  // PTEckart only

  /// InvalidVariantParams when the kind's constraints do not hold.
  void validate() const;
};

using ComplexSampler = std::function<std::complex<double>(double)>;

/// Potential in general form. For the real kinds `params` is the exact
/// general-form quadruple; for PTRosenMorse params.v2 multiplies i tanh_q; for
/// PTEckart the deformation is the complex `deformation` and params.q is unused.
struct GeneralPotential {
  VariantKind kind = VariantKind::RosenMorseWell;
  PotentialParams params;
  std::complex<double> deformation{1.0, 0.0};
  ComplexSampler sampler;
};

GeneralPotential to_general(const VariantSpec &v);

/// max over xs of |conj(V(x)) - V(2 center - x)|.
double pt_symmetry_check(const ComplexSampler &sampler, const std::vector<double> &xs,
                         double reflection_center);

/// Right-hand side of the energy equation for the general form at a trial
/// energy: -V2bar^2/(alpha^2 Lambda^2) - alpha^2 Lambda^2/4.
double general_energy_rhs(const KGProblem &p, int n, double energy);

/// The same right-hand side written directly in Rosen-Morse well parameters,
/// with Lambda = 2n + 1 - sqrt(1 + 4 V1bar/alpha^2).
double rosen_morse_well_energy_rhs(const VariantSpec &v, double mass, int n, double energy);

/// The same right-hand side in Eckart parameters. Mapping V1 -> -V1 at
/// q = -1 gives Lambda = 2n + 1 - sqrt(1 + 4 V1bar/alpha^2).
double eckart_energy_rhs(const VariantSpec &v, double mass, int n, double energy);

/// F_n^PT(E) = E^2 - M^2 - V2bar^2/(alpha^2 Lambda^2) + alpha^2 Lambda^2/4,
/// the real residual of the PT-symmetric well.
double pt_energy_residual(const VariantSpec &v, double mass, int n, double energy,
                          double lambda_tol = SolverConfig{}.lambda_tol);

/// Real levels of the PT-symmetric well, n = 0..n_max, sorted by (n, E).
/// nu is purely imaginary there; its imaginary part is in exponents.nu_imag.
std::vector<BoundState> pt_rosen_morse_levels(const VariantSpec &v, double mass, int n_max,
                                              const SolverConfig &cfg = {});

/// Complex sampler of the PT-symmetric Eckart potential. The returned
/// callable throws PoleAtX where sinh_Q vanishes.
ComplexSampler pt_eckart_potential(const VariantSpec &v);

/// Building blocks of pt_eckart_potential, exposed for tests. Q must have unit modulus.
std::complex<double> cosech_sq_complex(double y, std::complex<double> deformation);
std::complex<double> coth_complex(double y, std::complex<double> deformation);

} // namespace kgnu::variants
