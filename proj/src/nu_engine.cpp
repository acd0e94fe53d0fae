#include "kgnu/nu_engine.hpp"

#include <algorithm>
#include <cmath>

#include "kgnu/errors.hpp"

namespace kgnu::nu {

namespace {

constexpr double kMergeTol = 1e-12;
constexpr double kSquareTol = 1e-10;

double scale_of(const Poly &a) {
  return std::max({1.0, std::abs(a.c[0]), std::abs(a.c[1]), std::abs(a.c[2])});
}

Poly half_gap(const NUProblem &p) { return 0.5 * (p.sigma.derivative() - p.tau_tilde); }

// u(s; kappa) = h^2 - sigma~ + kappa sigma with h = (sigma' - tau~)/2.
Poly radicand(const NUProblem &p, double kappa) {
  const Poly h = half_gap(p);
  const Poly h2(h.c[0] * h.c[0], 2.0 * h.c[0] * h.c[1], h.c[1] * h.c[1]);
  return h2 - p.sigma_tilde + kappa * p.sigma;
}

double jacobi_scale(const Poly &sigma) {
  const double c = sigma.c[0];
  const double tol = 1e-12 * scale_of(sigma);
  if (!(c > 0.0) || std::abs(sigma.c[1]) > tol || std::abs(sigma.c[2] + c) > tol) {
    throw UnsupportedSigmaClass("sigma must be c(1 - s^2) with c > 0");
  }
  return c;
}

} // namespace

int Poly::degree() const {
  for (int k = 2; k >= 0; --k) {
    if (c[static_cast<std::size_t>(k)] != 0.0) return k;
  }
  return -1;
}

void NUProblem::validate() const {
  if (tau_tilde.degree() > 1) throw InvalidArgument("tau~ must have degree <= 1");
  if (sigma.is_zero()) throw InvalidArgument("sigma must not vanish identically");
}

std::vector<double> kappa_candidates(const NUProblem &p) {
  p.validate();
  // u = A s^2 + B s + C with A, B, C affine in kappa; the perfect-square
  // condition B^2 - 4AC = 0 is quadratic in kappa.
  const Poly u0 = radicand(p, 0.0);
  const double a0 = u0.c[2], b0 = u0.c[1], c0 = u0.c[0];
  const double s0 = p.sigma.c[0], s1 = p.sigma.c[1], s2 = p.sigma.c[2];

  const double qa = s1 * s1 - 4.0 * s2 * s0;
  const double qb = 2.0 * b0 * s1 - 4.0 * (a0 * s0 + c0 * s2);
  const double qc = b0 * b0 - 4.0 * a0 * c0;
  const double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc), 1e-300});

  std::vector<double> roots;
  if (std::abs(qa) <= 1e-14 * scale) {
    if (std::abs(qb) <= 1e-14 * scale) {
      if (std::abs(qc) <= 1e-14 * std::max(1.0, scale)) {
        throw DegenerateSigma("perfect-square condition holds for every kappa");
      }
      throw NoRealKappa("perfect-square condition has no solution in kappa");
    }
    roots.push_back(-qc / qb);
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < -kMergeTol * qb * qb) throw NoRealKappa("kappa quadratic has complex roots");
    const double sq = std::sqrt(std::max(disc, 0.0));
    // Numerically stable pair.
    const double t = -0.5 * (qb + std::copysign(sq, qb));
    if (t == 0.0) {
      roots.push_back(0.0);
    } else {
      roots.push_back(t / qa);
      roots.push_back(qc / t);
    }
    std::sort(roots.begin(), roots.end());
    if (roots.size() == 2 &&
        std::abs(roots[1] - roots[0]) <= kMergeTol * std::max(1.0, std::abs(roots[0]))) {
      roots.pop_back();
    }
  }
  return roots;
}

std::vector<Poly> pi_branches(const NUProblem &p, double kappa) {
  const Poly u = radicand(p, kappa);
  const double scale = scale_of(u);
  const double tol = kSquareTol * scale;
  const double disc = u.c[1] * u.c[1] - 4.0 * u.c[2] * u.c[0];
  if (std::abs(disc) > kSquareTol * scale * scale || u.c[2] < -tol || u.c[0] < -tol) {
    throw NotPerfectSquare("radicand is not the square of a real linear polynomial");
  }
  // w = lead s + cst with w^2 = u.
  double lead = 0.0, cst = 0.0;
  if (u.c[2] > tol) {
    lead = std::sqrt(u.c[2]);
    cst = u.c[0] > tol ? std::copysign(std::sqrt(u.c[0]), u.c[1]) : u.c[1] / (2.0 * lead);
  } else {
    if (std::abs(u.c[1]) > tol) {
      throw NotPerfectSquare("degree-one radicand with nonzero slope");
    }
    cst = std::sqrt(std::max(u.c[0], 0.0));
  }
  const Poly h = half_gap(p);
  const Poly w(cst, lead, 0.0);
  return {h + w, h - w};
}

std::vector<NUReduction> select_admissible(const NUProblem &p) {
  const auto kappas = kappa_candidates(p);
  std::vector<NUReduction> out;
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    std::vector<Poly> pis;
    try {
      pis = pi_branches(p, kappas[i]);
    } catch (const NotPerfectSquare &) {
      continue;
    }
    for (int sign : {-1, 1}) {
      const Poly &pi = sign > 0 ? pis[0] : pis[1];
      const Poly tau = p.tau_tilde + 2.0 * pi;
      if (tau.derivative()(0.0) < 0.0 && tau.c[2] == 0.0) {
        out.push_back(NUReduction{kappas[i], pi, tau, static_cast<int>(i), sign});
      }
    }
  }
  if (out.empty()) throw NoAdmissibleBranch("no (kappa, pi) pair gives tau' < 0");
  return out;
}

NUReduction select_lowest_kappa_negative(const NUProblem &p) {
  for (const auto &r : select_admissible(p)) {
    if (r.kappa_index == 0 && r.sign < 0) return r;
  }
  throw NoAdmissibleBranch("lowest-kappa negative branch is not admissible");
}

double lambda_of_n(const NUReduction &r, const Poly &sigma, int n) {
  const double tau1 = r.tau.slope();
  const double sigma2 = 2.0 * sigma.c[2];
  return -n * tau1 - 0.5 * n * (n - 1) * sigma2;
}

double lambda_of_kappa(const NUReduction &r) { return r.kappa + r.pi.slope(); }

double defining_identity_residual(const NUProblem &p, const NUReduction &r) {
  // pi^2 + pi (tau~ - sigma') + sigma~ - kappa sigma, all degree <= 2.
  const Poly &pi = r.pi;
  const Poly g = p.tau_tilde - p.sigma.derivative();
  const Poly pi2(pi.c[0] * pi.c[0], 2.0 * pi.c[0] * pi.c[1], pi.c[1] * pi.c[1]);
  const Poly cross(pi.c[0] * g.c[0], pi.c[0] * g.c[1] + pi.c[1] * g.c[0],
                   pi.c[1] * g.c[1]);
  const Poly res = pi2 + cross + p.sigma_tilde - r.kappa * p.sigma;
  return std::max({std::abs(res.c[0]), std::abs(res.c[1]), std::abs(res.c[2])});
}

std::pair<double, double> weight_exponents(const NUReduction &r, const Poly &sigma) {
  const double c = jacobi_scale(sigma);
  // rho'/rho = (tau - sigma')/sigma = ((b - a) - (a + b) s)/(1 - s^2)
  const Poly num = r.tau - sigma.derivative();
  const double diff = num.c[0] / c;   // b - a
  const double sum = -num.c[1] / c;   // a + b
  return {0.5 * (sum - diff), 0.5 * (sum + diff)};
}

std::pair<double, double> phi_exponents(const NUReduction &r, const Poly &sigma) {
  const double c = jacobi_scale(sigma);
  const double diff = r.pi.c[0] / c;
  const double sum = -r.pi.c[1] / c;
  return {0.5 * (sum - diff), 0.5 * (sum + diff)};
}

} // namespace kgnu::nu
