#include "kgnu/variants.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "kgnu/errors.hpp"

namespace kgnu::variants {

namespace {

// Minimal complex arithmetic on (re, im) pairs.
struct Cx {
  double re = 0.0;
  double im = 0.0;
};
Cx mul(Cx a, Cx b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
Cx div(Cx a, Cx b) {
  const double den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

// With z = e^{-2|y|}: for y >= 0
//   sinh_Q ~ 1 - Q z,   cosh_Q ~ 1 + Q z,   cosech_Q^2 = 4 z / (1 - Q z)^2
// and for y < 0 the roles of 1 and Q swap: sinh_Q ~ z - Q, cosh_Q ~ z + Q.
struct ScaledPair {
  Cx sinh;
  Cx cosh;
  double z;
};

ScaledPair scaled(double y, Cx q) {
  const double z = std::exp(-2.0 * std::abs(y));
  if (y >= 0.0) return {{1.0 - q.re * z, -q.im * z}, {1.0 + q.re * z, q.im * z}, z};
  return {{z - q.re, -q.im}, {z + q.re, q.im}, z};
}

void check_pole(const ScaledPair &sp, double y) {
  const double mag = std::hypot(sp.sinh.re, sp.sinh.im);
  if (mag <= 64.0 * std::numeric_limits<double>::epsilon()) {
    throw PoleAtX(y, "sinh_Q vanishes at y = " + std::to_string(y));
  }
}

void require(bool ok, const std::string &what) {
  if (!ok) throw InvalidVariantParams(what);
}

double lambda_of(double d, int n) { return 2.0 * n + 1.0 - d; }

} // namespace

std::string to_string(VariantKind kind) {
  switch (kind) {
  case VariantKind::RosenMorseWell: return "rosen-morse";
  case VariantKind::Eckart: return "eckart";
  case VariantKind::PTRosenMorse: return "pt-rosen-morse";
  case VariantKind::PTEckart: return "pt-eckart";
  }
  return "unknown";
}

void VariantSpec::validate() const {
  require(std::isfinite(v1) && std::isfinite(v2), "V1, V2 must be finite");
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
  switch (kind) {
  case VariantKind::RosenMorseWell:
    require(q == 1.0, "Rosen-Morse well requires q = 1");
    break;
  case VariantKind::Eckart:
    require(q == -1.0, "Eckart potential requires q = -1");
    break;
  case VariantKind::PTRosenMorse:
    require(q > 0.0 && q <= 1.0, "PT Rosen-Morse requires 0 < q <= 1");
    require(v1 > 0.0, "PT Rosen-Morse requires V1 > 0");
    break;
  case VariantKind::PTEckart: {
    const double quarter = 0.25 * std::numbers::pi;
    require(v1 > 0.0, "PT Eckart requires V1 > 0");
    require(theta != 0.0 && std::abs(theta) < quarter,
            "PT Eckart requires theta in (-pi/4, 0) U (0, pi/4)");
    break;
  }
  }
}

GeneralPotential to_general(const VariantSpec &v) {
  v.validate();
  GeneralPotential g;
  g.kind = v.kind;
  switch (v.kind) {
  case VariantKind::RosenMorseWell:
    g.params = PotentialParams{v.v1, -v.v2, v.alpha, 1.0};
    break;
  case VariantKind::Eckart:
    g.params = PotentialParams{-v.v1, v.v2, v.alpha, -1.0};
    break;
  case VariantKind::PTRosenMorse:
    g.params = PotentialParams{v.v1, v.v2, v.alpha, v.q};
    break;
  case VariantKind::PTEckart:
    g.params = PotentialParams{v.v1, v.v2, v.alpha, 0.0};
    g.deformation = std::polar(1.0, 2.0 * v.alpha * v.theta);
    g.sampler = pt_eckart_potential(v);
    return g;
  }
  if (v.kind == VariantKind::PTRosenMorse) {
    const PotentialParams p = g.params;
    g.sampler = [p](double x) {
      const double y = p.alpha * x;
      const double sech = qhyper::sech_q(y, p.q);
      return std::complex<double>(-p.v1 * sech * sech, -p.v2 * qhyper::tanh_q(y, p.q));
    };
  } else {
    const PotentialParams p = g.params;
    g.sampler = [p](double x) { return std::complex<double>(potential_eval(p, x), 0.0); };
  }
  return g;
}

double pt_symmetry_check(const ComplexSampler &sampler, const std::vector<double> &xs,
                         double reflection_center) {
  double worst = 0.0;
  for (double x : xs) {
    const auto lhs = std::conj(sampler(x));
    const auto rhs = sampler(2.0 * reflection_center - x);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double general_energy_rhs(const KGProblem &p, int n, double energy) {
  const auto r = reduced_params(p, energy);
  const double lam = lambda_of(discriminant_root(p, energy), n);
  const double a2 = p.potential.alpha * p.potential.alpha;
  return -r.v2bar * r.v2bar / (a2 * lam * lam) - 0.25 * a2 * lam * lam;
}

double rosen_morse_well_energy_rhs(const VariantSpec &v, double mass, int n, double energy) {
  const double a2 = v.alpha * v.alpha;
  const double v1bar = 2.0 * (energy + mass) * v.v1;
  const double v2bar = 2.0 * (energy + mass) * v.v2;
  const double arg = 1.0 + 4.0 * v1bar / a2;
  if (arg < 0.0) throw DiscriminantNegative("1 + 4 V1bar/alpha^2 < 0");
  const double lam = lambda_of(std::sqrt(arg), n);
  return -v2bar * v2bar / (a2 * lam * lam) - 0.25 * a2 * lam * lam;
}

double eckart_energy_rhs(const VariantSpec &v, double mass, int n, double energy) {
  const double a2 = v.alpha * v.alpha;
  const double v1bar = 2.0 * (energy + mass) * v.v1;
  const double v2bar = 2.0 * (energy + mass) * v.v2;
  const double arg = 1.0 + 4.0 * v1bar / a2;
  if (arg < 0.0) throw DiscriminantNegative("1 + 4 V1bar/alpha^2 < 0");
  const double lam = lambda_of(std::sqrt(arg), n);
  return -v2bar * v2bar / (a2 * lam * lam) - 0.25 * a2 * lam * lam;
}

double pt_energy_residual(const VariantSpec &v, double mass, int n, double energy,
                          double lambda_tol) {
  if (v.kind != VariantKind::PTRosenMorse) {
    throw InvalidVariantParams("PT residual needs a PTRosenMorse spec");
  }
  const KGProblem p{mass, PotentialParams{v.v1, v.v2, v.alpha, v.q}};
  const auto r = reduced_params(p, energy);
  const double lam = lambda_of(discriminant_root(p, energy), n);
  if (std::abs(lam) <= lambda_tol) {
    throw DegenerateLevel("Lambda_" + std::to_string(n) + " vanishes at this energy");
  }
  const double a2 = v.alpha * v.alpha;
  return r.ebar2 - r.v2bar * r.v2bar / (a2 * lam * lam) + 0.25 * a2 * lam * lam;
}

std::vector<BoundState> pt_rosen_morse_levels(const VariantSpec &v, double mass, int n_max,
                                              const SolverConfig &cfg) {
  v.validate();
  if (v.kind != VariantKind::PTRosenMorse) {
    throw InvalidVariantParams("PT levels need a PTRosenMorse spec");
  }
  if (!(mass > 0.0)) throw InvalidArgument("mass must be > 0");
  const KGProblem p{mass, PotentialParams{v.v1, v.v2, v.alpha, v.q}};
  std::vector<BoundState> out;
  for (int n = 0; n <= n_max; ++n) {
    const auto f = [&v, mass, n, &cfg](double e) {
      return pt_energy_residual(v, mass, n, e, cfg.lambda_tol);
    };
    for (double e : residual_roots(f, mass, cfg)) {
      BoundState st;
      st.n = n;
      st.energy = e;
      const auto r = reduced_params(p, e);
      auto &ex = st.exponents;
      ex.d = discriminant_root(p, e);
      ex.lam_n = lambda_of(ex.d, n);
      ex.mu = -0.5 * ex.lam_n;
      ex.nu = 0.0;
      // V2 -> i V2 makes gam2 = -i V2bar/alpha^2, so nu = gam2/(2 mu) is imaginary.
      ex.nu_imag = ex.mu != 0.0 ? r.gam2 / (2.0 * ex.mu) : 0.0;
      if (!(ex.lam_n < 0.0)) st.reasons.emplace_back(reason::kLambdaNonNegative);
      const double edge = cfg.edge_delta * mass;
      if (e <= -mass + edge || e >= mass - edge) st.reasons.emplace_back(reason::kMassEdge);
      st.physical = st.reasons.empty();
      out.push_back(st);
    }
  }
  return out;
}

std::complex<double> cosech_sq_complex(double y, std::complex<double> deformation) {
  const Cx q{deformation.real(), deformation.imag()};
  const auto sp = scaled(y, q);
  check_pole(sp, y);
  // cosech_Q^2 = 4 z / (scaled sinh)^2
  const Cx r = div(Cx{4.0 * sp.z, 0.0}, mul(sp.sinh, sp.sinh));
  return {r.re, r.im};
}

std::complex<double> coth_complex(double y, std::complex<double> deformation) {
  const Cx q{deformation.real(), deformation.imag()};
  const auto sp = scaled(y, q);
  check_pole(sp, y);
  const Cx r = div(sp.cosh, sp.sinh);
  return {r.re, r.im};
}

ComplexSampler pt_eckart_potential(const VariantSpec &v) {
  if (v.kind != VariantKind::PTEckart) {
    throw InvalidVariantParams("PT Eckart potential needs a PTEckart spec");
  }
  v.validate();
  const double v1 = v.v1, v2 = v.v2, alpha = v.alpha;
  const double phase = 2.0 * v.alpha * v.theta;
  const Cx q{std::cos(phase), std::sin(phase)};
  return [v1, v2, alpha, q](double x) {
    const double y = alpha * x;
    const auto cs = cosech_sq_complex(y, {q.re, q.im});
    const auto ct = coth_complex(y, {q.re, q.im});
    // -V1 Q cosech^2 - i V2 coth
    const Cx a = mul(q, Cx{cs.real(), cs.imag()});
    return std::complex<double>(-v1 * a.re + v2 * ct.imag(), -v1 * a.im - v2 * ct.real());
  };
}

} // namespace kgnu::variants
