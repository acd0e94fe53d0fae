#pragma once

// Klein-Gordon bound states for equal scalar and vector Rosen-Morse type
// potentials, in natural units.
//
// With S = V the equation reduces to
//
//   psi'' + [Ebar2 + V1bar sech_q^2(alpha x) + V2bar tanh_q(alpha x)] psi = 0,
//
//   Ebar2 = E^2 - M^2,   V1bar = 2(E+M) V1,   V2bar = 2(E+M) V2,
//
// and the substitution s = tanh_q(alpha x) turns it into a Jacobi-class
// Nikiforov-Uvarov problem. The energy equation
//
//   Ebar2 = -V2bar^2 / (alpha^2 Lambda^2) - alpha^2 Lambda^2 / 4,
//   Lambda = 2n + 1 - sqrt(1 + 4 V1bar / (q alpha^2)),
//
// is implicit in E because the V-bars depend on E.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kgnu/nu_engine.hpp"
#include "kgnu/orthopoly.hpp"
#include "kgnu/qhyper.hpp"

namespace kgnu {

struct Domain {
  enum class Kind { FullLine, HalfLine };
  Kind kind = Kind::FullLine;
  /// Left end of the half line (the cosh_q pole); unused on the full line.
  double x0 = 0.0;
};

struct KGProblem {
  double mass = 1.0;
  PotentialParams potential;

  /// Full line for q > 0, half line (x0, inf) for q < 0.
  Domain domain() const;
  /// mass > 0, valid potential, q in [-1,0) U (0,1].
  void validate() const;
};

/// Tunables of the closed-form root search. Defaults are the frozen values
/// used by every CLI command unless overridden.
struct SolverConfig {
  double edge_delta = 1e-6;       // scan window is (-M + delta M, M - delta M)
  int scan_points = 2001;
  double bisect_tol = 1e-12;      // |dE| <= bisect_tol * M
  double lambda_tol = 1e-8;       // |Lambda| below this is a degenerate level
  double norm_half_width = 20.0;  // normalization interval half width, in 1/alpha
  int norm_intervals = 4000;
};

/// Energy-dependent symbols. eps2, gam2, beta2 are formal squares and may be
/// negative:
///   eps2 = -V1bar/(q alpha^2),  gam2 = -V2bar/alpha^2,  beta2 = -Ebar2/alpha^2.
struct ReducedParams {
  double ebar2 = 0.0;
  double v1bar = 0.0;
  double v2bar = 0.0;
  double eps2 = 0.0;
  double gam2 = 0.0;
  double beta2 = 0.0;
};

/// Wavefunction exponents at an energy: mu = -Lambda/2, nu = gam2/(2 mu), so
/// psi = (1-s)^{(mu+nu)/2} (1+s)^{(mu-nu)/2} P_n^{(mu+nu, mu-nu)}(s).
/// For the PT-symmetric well nu is purely imaginary and nu_imag holds Im(nu).
struct Exponents {
  double mu = 0.0;
  double nu = 0.0;
  double nu_imag = 0.0;
  double lam_n = 0.0;  // Lambda_n
  double d = 0.0;      // sqrt(1 + 4 V1bar/(q alpha^2))
};

/// Reason codes attached to non-physical roots.
namespace reason {
inline constexpr const char *kLambdaNonNegative = "D<=2n+1";
inline constexpr const char *kBetaGamma = "beta4<=gamma4";
inline constexpr const char *kMuNu = "mu<=|nu|";
inline constexpr const char *kMassEdge = "near_mass_edge";
inline constexpr const char *kHalfLinePole = "diverges_at_pole";
} // namespace reason

struct BoundState {
  int n = 0;
  double energy = 0.0;
  Exponents exponents;
  bool physical = false;
  std::vector<std::string> reasons;
  double norm_constant = 0.0;
  std::optional<double> oracle_energy;
  std::optional<double> oracle_gap;

  /// reasons joined with ';'.
  std::string reasons_text() const;
};

/// V_eff(x) = 2(E+M) V(x), the potential seen by -psi'' + V_eff psi = Ebar2 psi.
struct EffectiveProblem {
  std::function<double(double)> v_eff;
  double ebar2 = 0.0;
};

EffectiveProblem effective_problem(const KGProblem &p, double energy);

ReducedParams reduced_params(const KGProblem &p, double energy);

/// sqrt(1 + 4 V1bar/(q alpha^2)); DiscriminantNegative when the radicand is < 0.
double discriminant_root(const KGProblem &p, double energy);

/// F_n(E) = E^2 - M^2 + V2bar^2/(alpha^2 Lambda^2) + alpha^2 Lambda^2/4.
/// DiscriminantNegative, or DegenerateLevel when |Lambda| <= lambda_tol.
double energy_residual(const KGProblem &p, int n, double energy,
                       double lambda_tol = SolverConfig{}.lambda_tol);

/// Exponents and physicality of quantum number n at a trial energy. For an
/// energy that is not a root the flags describe the formal solution only.
BoundState make_state(const KGProblem &p, int n, double energy);

/// All roots of F_n for n = 0..n_max in (-M, M), each classified. Sorted by
/// (n, E).
std::vector<BoundState> energy_levels(const KGProblem &p, int n_max,
                                      const SolverConfig &cfg = {});

/// Same search for a caller-supplied residual. Shared with the PT variant.
std::vector<double> residual_roots(const std::function<double(double)> &residual,
                                   double mass, const SolverConfig &cfg);

/// Nikiforov-Uvarov triple of the transformed equation at a trial energy:
/// tau~ = -2s, sigma = 1 - s^2, sigma~ = alpha^-2 [Ebar2 + V1bar/q + V2bar s - (V1bar/q) s^2].
nu::NUProblem nu_problem(const KGProblem &p, double energy);

/// lambda - lambda_n on the lowest-kappa negative-root reduction.
double nu_quantization_gap(const KGProblem &p, int n, double energy);

/// Unnormalized closed-form solution (1-s)^a (1+s)^b P_n(s) and its
/// x-derivatives. On the half line the bases are replaced by their magnitudes.
class FormalWavefunction {
public:
  FormalWavefunction(const KGProblem &p, const BoundState &state);

  double value(double x) const;
  /// psi, dpsi/dx, d2psi/dx2 at x.
  struct Jet {
    double psi, dpsi, d2psi;
  };
  Jet jet(double x) const;

private:
  PotentialParams pot_;
  int n_;
  double a_half_;  // (mu+nu)/2
  double b_half_;  // (mu-nu)/2
  JacobiParams jp_;
};

/// Normalized wavefunction sampler.
class Wavefunction {
public:
  Wavefunction(FormalWavefunction f, double norm, double b, double e)
      : formal_(std::move(f)), norm_(norm), x_begin_(b), x_end_(e) {}

  double operator()(double x) const { return norm_ * formal_.value(x); }
  double norm_constant() const { return norm_; }
  /// Interval used for normalization.
  double x_begin() const { return x_begin_; }
  double x_end() const { return x_end_; }

private:
  FormalWavefunction formal_;
  double norm_;
  double x_begin_;
  double x_end_;
};

/// NotPhysical unless state.physical. Normalized so the integral of psi^2
/// over [-L, L], L = norm_half_width/alpha, is 1 (composite Simpson).
Wavefunction wavefunction(const KGProblem &p, const BoundState &state,
                          const SolverConfig &cfg = {});

/// max_x |psi'' + (Ebar2 + V1bar sech_q^2 + V2bar tanh_q) psi| / max_x |psi|,
/// with psi'' from the analytic derivative chain.
double ode_residual(const KGProblem &p, const BoundState &state,
                    const std::vector<double> &xs);

} // namespace kgnu
