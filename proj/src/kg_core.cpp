#include "kgnu/kg_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kgnu/errors.hpp"

namespace kgnu {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double lambda_n(int n, double d) { return 2.0 * n + 1.0 - d; }

double safe_eval(const std::function<double(double)> &f, double e) {
  try {
    return f(e);
  } catch (const Error &) {
    return kNaN;
  }
}

// Bisection on a bracket with f(lo) f(hi) < 0. Returns NaN if the interior
// turns out to be undefined.
double bisect(const std::function<double(double)> &f, double lo, double hi, double flo,
              double tol) {
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double fm = safe_eval(f, mid);
    if (std::isnan(fm)) {
      // A guard point (|Lambda| tiny) sits on the midpoint; step off it.
      mid = lo + 0.37 * (hi - lo);
      fm = safe_eval(f, mid);
      if (std::isnan(fm)) return kNaN;
    }
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace

std::string BoundState::reasons_text() const {
  std::string out;
  for (const auto &r : reasons) {
    if (!out.empty()) out += ';';
    out += r;
  }
  return out;
}

Domain KGProblem::domain() const {
  if (potential.q < 0.0) return Domain{Domain::Kind::HalfLine, *potential_pole(potential)};
  return Domain{};
}

void KGProblem::validate() const {
  if (!std::isfinite(mass) || mass <= 0.0) throw InvalidArgument("mass must be > 0");
  potential.validate();
  DeformationQ::for_spectrum(potential.q);
}

EffectiveProblem effective_problem(const KGProblem &p, double energy) {
  const double scale = 2.0 * (energy + p.mass);
  const PotentialParams pot = p.potential;
  return EffectiveProblem{[pot, scale](double x) { return scale * potential_eval(pot, x); },
                          energy * energy - p.mass * p.mass};
}

ReducedParams reduced_params(const KGProblem &p, double energy) {
  const auto &pot = p.potential;
  if (pot.q == 0.0) throw InvalidArgument("reduced parameters need q != 0");
  ReducedParams r;
  const double a2 = pot.alpha * pot.alpha;
  r.ebar2 = energy * energy - p.mass * p.mass;
  r.v1bar = 2.0 * (energy + p.mass) * pot.v1;
  r.v2bar = 2.0 * (energy + p.mass) * pot.v2;
  r.eps2 = -r.v1bar / (pot.q * a2);
  r.gam2 = -r.v2bar / a2;
  r.beta2 = -r.ebar2 / a2;
  return r;
}

double discriminant_root(const KGProblem &p, double energy) {
  const auto r = reduced_params(p, energy);
  const double arg = 1.0 - 4.0 * r.eps2;
  if (arg < 0.0) {
    throw DiscriminantNegative("1 + 4 V1bar/(q alpha^2) = " + std::to_string(arg) + " < 0");
  }
  return std::sqrt(arg);
}

double energy_residual(const KGProblem &p, int n, double energy, double lambda_tol) {
  if (n < 0) throw InvalidArgument("quantum number must be >= 0");
  const auto r = reduced_params(p, energy);
  const double lam = lambda_n(n, discriminant_root(p, energy));
  if (std::abs(lam) <= lambda_tol) {
    throw DegenerateLevel("Lambda_" + std::to_string(n) + " vanishes at this energy");
  }
  const double a2 = p.potential.alpha * p.potential.alpha;
  return r.ebar2 + r.v2bar * r.v2bar / (a2 * lam * lam) + 0.25 * a2 * lam * lam;
}

BoundState make_state(const KGProblem &p, int n, double energy) {
  BoundState st;
  st.n = n;
  st.energy = energy;
  const auto r = reduced_params(p, energy);
  const double arg = 1.0 - 4.0 * r.eps2;
  if (arg < 0.0) {
    st.exponents = Exponents{kNaN, kNaN, 0.0, kNaN, kNaN};
    st.reasons.emplace_back("discriminant_negative");
    return st;
  }
  Exponents &ex = st.exponents;
  ex.d = std::sqrt(arg);
  ex.lam_n = lambda_n(n, ex.d);
  ex.mu = -0.5 * ex.lam_n;
  ex.nu = ex.mu != 0.0 ? r.gam2 / (2.0 * ex.mu) : kNaN;

  if (!(ex.lam_n < 0.0)) st.reasons.emplace_back(reason::kLambdaNonNegative);
  if (!(r.beta2 * r.beta2 > r.gam2 * r.gam2)) st.reasons.emplace_back(reason::kBetaGamma);
  if (!(ex.mu > std::abs(ex.nu))) st.reasons.emplace_back(reason::kMuNu);
  const double edge = SolverConfig{}.edge_delta * p.mass;
  if (energy <= -p.mass + edge || energy >= p.mass - edge) {
    st.reasons.emplace_back(reason::kMassEdge);
  }
  // On the half line s runs over (1, inf) and the closed form grows like
  // s^(mu+n) at the pole, so it cannot meet the boundary condition there.
  if (p.potential.q < 0.0) st.reasons.emplace_back(reason::kHalfLinePole);
  st.physical = st.reasons.empty();
  return st;
}

std::vector<double> residual_roots(const std::function<double(double)> &residual,
                                   double mass, const SolverConfig &cfg) {
  if (cfg.scan_points < 2) throw InvalidArgument("scan_points must be >= 2");
  const double lo = -mass + cfg.edge_delta * mass;
  const double hi = mass - cfg.edge_delta * mass;
  const int g = cfg.scan_points;
  std::vector<double> es(static_cast<std::size_t>(g)), fs(es.size());
  for (int i = 0; i < g; ++i) {
    const double t = static_cast<double>(i) / (g - 1);
    es[i] = i == g - 1 ? hi : (1.0 - t) * lo + t * hi;
    fs[i] = safe_eval(residual, es[i]);
  }
  std::vector<double> roots;
  for (int i = 0; i < g; ++i) {
    if (fs[i] == 0.0) {
      // Exact zero on the grid: a root only if the sign actually changes.
      if (i > 0 && i + 1 < g && fs[i - 1] * fs[i + 1] < 0.0) roots.push_back(es[i]);
      continue;
    }
    if (i + 1 < g && std::isfinite(fs[i]) && std::isfinite(fs[i + 1]) &&
        fs[i] * fs[i + 1] < 0.0) {
      const double root = bisect(residual, es[i], es[i + 1], fs[i], cfg.bisect_tol * mass);
      if (std::isfinite(root)) roots.push_back(root);
    }
  }
  return roots;
}

std::vector<BoundState> energy_levels(const KGProblem &p, int n_max, const SolverConfig &cfg) {
  p.validate();
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  std::vector<BoundState> out;
  for (int n = 0; n <= n_max; ++n) {
    const auto f = [&p, n, &cfg](double e) { return energy_residual(p, n, e, cfg.lambda_tol); };
    for (double e : residual_roots(f, p.mass, cfg)) out.push_back(make_state(p, n, e));
  }
  std::stable_sort(out.begin(), out.end(), [](const BoundState &a, const BoundState &b) {
    return a.n != b.n ? a.n < b.n : a.energy < b.energy;
  });
  return out;
}

nu::NUProblem nu_problem(const KGProblem &p, double energy) {
  const auto r = reduced_params(p, energy);
  const double a2 = p.potential.alpha * p.potential.alpha;
  const double v1q = r.v1bar / p.potential.q;
  return nu::NUProblem{nu::Poly(0.0, -2.0, 0.0), nu::Poly(1.0, 0.0, -1.0),
                       nu::Poly((r.ebar2 + v1q) / a2, r.v2bar / a2, -v1q / a2)};
}

double nu_quantization_gap(const KGProblem &p, int n, double energy) {
  const auto prob = nu_problem(p, energy);
  const auto red = nu::select_lowest_kappa_negative(prob);
  return nu::lambda_of_kappa(red) - nu::lambda_of_n(red, prob.sigma, n);
}

FormalWavefunction::FormalWavefunction(const KGProblem &p, const BoundState &state)
    : pot_(p.potential), n_(state.n),
      a_half_(0.5 * (state.exponents.mu + state.exponents.nu)),
      b_half_(0.5 * (state.exponents.mu - state.exponents.nu)),
      jp_{state.exponents.mu + state.exponents.nu, state.exponents.mu - state.exponents.nu,
          state.n} {}

double FormalWavefunction::value(double x) const {
  const double y = pot_.alpha * x;
  const double om = qhyper::one_minus_tanh_q(y, pot_.q);
  const double op = qhyper::one_plus_tanh_q(y, pot_.q);
  const double s = qhyper::tanh_q(y, pot_.q);
  const double g = std::exp(a_half_ * std::log(std::abs(om)) + b_half_ * std::log(std::abs(op)));
  return g * orthopoly::jacobi_eval(jp_, s);
}

FormalWavefunction::Jet FormalWavefunction::jet(double x) const {
  const double al = pot_.alpha;
  const double y = al * x;
  const double om = qhyper::one_minus_tanh_q(y, pot_.q);
  const double op = qhyper::one_plus_tanh_q(y, pot_.q);
  const double s = qhyper::tanh_q(y, pot_.q);
  const double g = std::exp(a_half_ * std::log(std::abs(om)) + b_half_ * std::log(std::abs(op)));

  // s' = alpha (1-s)(1+s), s'' = -2 alpha s s'
  const double s1 = al * om * op;
  const double s2 = -2.0 * al * s * s1;
  // d/dx log G = alpha (-a op + b om), and its derivative -alpha s' (a + b).
  const double g1 = al * (-a_half_ * op + b_half_ * om);
  const double g1p = -al * s1 * (a_half_ + b_half_);

  const double p0 = orthopoly::jacobi_eval(jp_, s);
  const double p1 = orthopoly::jacobi_derivative(jp_, s);
  const double p2 = orthopoly::jacobi_second_derivative(jp_, s);

  Jet j;
  j.psi = g * p0;
  j.dpsi = g * (g1 * p0 + p1 * s1);
  j.d2psi = g * ((g1 * g1 + g1p) * p0 + 2.0 * g1 * p1 * s1 + p2 * s1 * s1 + p1 * s2);
  return j;
}

Wavefunction wavefunction(const KGProblem &p, const BoundState &state,
                          const SolverConfig &cfg) {
  if (!state.physical) {
    throw NotPhysical("state n = " + std::to_string(state.n) + " is not physical (" +
                      state.reasons_text() + ")");
  }
  FormalWavefunction f(p, state);
  const double half = cfg.norm_half_width / p.potential.alpha;
  const double xb = -half, xe = half;
  int m = cfg.norm_intervals;
  if (m % 2 != 0) ++m;
  const double h = (xe - xb) / m;
  double sum = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double v = f.value(xb + i * h);
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += w * v * v;
  }
  const double integral = sum * h / 3.0;
  return Wavefunction(std::move(f), 1.0 / std::sqrt(integral), xb, xe);
}

double ode_residual(const KGProblem &p, const BoundState &state, const std::vector<double> &xs) {
  const FormalWavefunction f(p, state);
  const auto r = reduced_params(p, state.energy);
  const auto &pot = p.potential;
  double worst = 0.0, peak = 0.0;
  for (double x : xs) {
    const double y = pot.alpha * x;
    const double sech = qhyper::sech_q(y, pot.q);
    const double coeff = r.ebar2 + r.v1bar * sech * sech + r.v2bar * qhyper::tanh_q(y, pot.q);
    const auto j = f.jet(x);
    worst = std::max(worst, std::abs(j.d2psi + coeff * j.psi));
    peak = std::max(peak, std::abs(j.psi));
  }
  return peak > 0.0 ? worst / peak : worst;
}

} // namespace kgnu
