#pragma once

// Finite-difference ground truth for the closed-form spectrum.
//
// -psi'' + U(x) psi = e psi is discretized with the three-point Laplacian
// under Dirichlet walls. The resulting symmetric tridiagonal matrix is
// diagonalized by Sturm-sequence bisection. For the Klein-Gordon problem
// U depends on the energy, U = 2(E+M) V, and a level is a root of
//
//   g_n(E) = e_n(E) - (E^2 - M^2).

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kgnu/kg_core.hpp"

namespace kgnu::oracle {

/// Uniform grid on [x_begin, x_end] with `intervals` cells; the
/// intervals - 1 interior nodes carry the unknowns.
struct GridSpec {
  double x_begin = -20.0;
  double x_end = 20.0;
  int intervals = 4000;

  double step() const { return (x_end - x_begin) / intervals; }
  int unknowns() const { return intervals - 1; }
  double node(int i) const { return x_begin + (i + 1) * step(); }

  /// [-L, L] with L = half_width/alpha.
  static GridSpec full_line(double alpha, double half_width = 20.0, int intervals = 4000);
  /// [x0 + eta, x0 + 2L] with eta = eta_scale/alpha.
  static GridSpec half_line(double x0, double alpha, double half_width = 20.0,
                            int intervals = 4000, double eta_scale = 1e-4);
  /// Grid suited to the problem's domain.
  static GridSpec for_problem(const KGProblem &p, double half_width = 20.0,
                              int intervals = 4000, double eta_scale = 1e-4);

  GridSpec refined() const { return GridSpec{x_begin, x_end, 2 * intervals}; }
};

struct OracleConfig {
  double half_width = 20.0;  // in units of 1/alpha
  int intervals = 4000;
  bool extrapolate = true;
  int scan_points = 512;
  double edge_delta = 1e-6;
  double root_tol = 1e-10;
  double eta_scale = 1e-4;  // half-line wall offset, in units of 1/alpha
  double leak_limit = 1e-6;
  /// Times the box may be doubled (at fixed spacing) while a root leaks.
  int max_widenings = 3;
};

struct OracleResult {
  int n = 0;
  double energy = 0.0;
  double ebar2 = 0.0;
  double boundary_leak = 0.0;  // edge_leak of the eigenvector
  GridSpec grid;
  bool extrapolated = false;
  /// boundary_leak within the configured limit.
  bool accepted = false;
};

/// Number of eigenvalues strictly below `shift`.
int sturm_count(std::span<const double> diag, std::span<const double> offdiag, double shift);

/// k lowest eigenvalues, ascending, each to relative 1e-12.
std::vector<double> tridiag_eigen_lowest(std::span<const double> diag,
                                         std::span<const double> offdiag, int k);

/// Eigenvector for an eigenvalue estimate by inverse iteration, unit 2-norm.
/// Runs at least `iterations` steps, then continues until the direction settles.
std::vector<double> tridiag_eigenvector(std::span<const double> diag,
                                        std::span<const double> offdiag, double eigenvalue,
                                        int iterations = 3);

/// Discretized -d^2/dx^2 + U on the grid.
struct Discretization {
  std::vector<double> diag;
  std::vector<double> offdiag;
};
Discretization discretize(const std::function<double(double)> &potential, const GridSpec &grid);

/// k lowest eigenvalues of -d^2/dx^2 + U. With `extrapolate`, the values on
/// (N, 2N) grids are combined as (4 e_2N - e_N)/3.
std::vector<double> schrodinger_levels(const std::function<double(double)> &potential,
                                       const GridSpec &grid, int k, bool extrapolate = false);

/// Eigenvector of level k on the grid, samples at the interior nodes.
std::vector<double> schrodinger_eigenvector(const std::function<double(double)> &potential,
                                            const GridSpec &grid, int k);

/// Every self-consistent root of g_n in (-M, M), ascending. NoRoot if none.
/// When a root's eigenvector leaks past leak_limit the box is widened and the
/// whole search repeated.
std::vector<OracleResult> kg_selfconsistent_levels(const KGProblem &p, int n,
                                                   const OracleConfig &cfg = {});

/// The root of g_n closest to `near`. NoRoot if none.
OracleResult kg_selfconsistent_level(const KGProblem &p, int n, double near,
                                     const OracleConfig &cfg = {});

/// max |v| over the outer 2.5% of nodes on each side, relative to max |v|.
double edge_leak(std::span<const double> v);

/// Strict sign changes, skipping samples with |v| <= 1e-12 max|v|.
int count_nodes(std::span<const double> values);

} // namespace kgnu::oracle
