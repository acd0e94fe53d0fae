#include "kgnu/qhyper.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "kgnu/errors.hpp"

namespace kgnu {

namespace {

constexpr double kPoleTol = 64.0 * std::numeric_limits<double>::epsilon();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// cosh_q(x) scaled so the dominant exponential is 1:
//   x >= 0: 2 e^-x cosh_q(x) = 1 + q e^-2x
//   x <  0: 2 e^x  cosh_q(x) = e^2x + q
double scaled_cosh(double x, double q) {
  return x >= 0.0 ? 1.0 + q * std::exp(-2.0 * x) : std::exp(2.0 * x) + q;
}
double scaled_sinh(double x, double q) {
  return x >= 0.0 ? 1.0 - q * std::exp(-2.0 * x) : std::exp(2.0 * x) - q;
}
// Reference magnitude of the two terms being combined.
double scaled_ref(double x, double q) {
  return x >= 0.0 ? 1.0 + std::abs(q) * std::exp(-2.0 * x)
                  : std::exp(2.0 * x) + std::abs(q);
}

void check_cosh_pole(double x, double q) {
  if (q < 0.0 && std::abs(scaled_cosh(x, q)) <= kPoleTol * scaled_ref(x, q)) {
    const double x0 = 0.5 * std::log(-q);
    throw PoleAtX(x0, "cosh_q vanishes at x0 = " + fmt(x0) + " (q = " + fmt(q) + ")");
  }
}

void check_sinh_pole(double x, double q) {
  if (q > 0.0 && std::abs(scaled_sinh(x, q)) <= kPoleTol * scaled_ref(x, q)) {
    const double x0 = 0.5 * std::log(q);
    throw PoleAtX(x0, "sinh_q vanishes at x0 = " + fmt(x0) + " (q = " + fmt(q) + ")");
  }
}

} // namespace

DeformationQ DeformationQ::for_spectrum(double q) {
  if (!std::isfinite(q) || q == 0.0 || q < -1.0 || q > 1.0) {
    throw InvalidArgument("deformation q = " + fmt(q) +
                          " outside [-1,0) U (0,1]; the energy equation is singular at q = 0");
  }
  return DeformationQ{q};
}

void PotentialParams::validate() const {
  if (!std::isfinite(v1) || !std::isfinite(v2) || !std::isfinite(q)) {
    throw InvalidArgument("potential parameters must be finite");
  }
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw InvalidArgument("alpha must be > 0, got " + fmt(alpha));
  }
}

namespace qhyper {

double sinh_q(double x, double q) { return 0.5 * (std::exp(x) - q * std::exp(-x)); }

double cosh_q(double x, double q) { return 0.5 * (std::exp(x) + q * std::exp(-x)); }

double tanh_q(double x, double q) {
  if (q == 0.0) return 1.0;
  check_cosh_pole(x, q);
  return scaled_sinh(x, q) / scaled_cosh(x, q);
}

double coth_q(double x, double q) {
  if (q == 0.0) return 1.0;
  check_sinh_pole(x, q);
  return scaled_cosh(x, q) / scaled_sinh(x, q);
}

double sech_q(double x, double q) {
  check_cosh_pole(x, q);
  // 2/(e^x + q e^-x), written against the dominant exponential.
  return x >= 0.0 ? 2.0 * std::exp(-x) / scaled_cosh(x, q)
                  : 2.0 * std::exp(x) / scaled_cosh(x, q);
}

double cosech_q(double x, double q) {
  check_sinh_pole(x, q);
  return x >= 0.0 ? 2.0 * std::exp(-x) / scaled_sinh(x, q)
                  : 2.0 * std::exp(x) / scaled_sinh(x, q);
}

double one_minus_tanh_q(double x, double q) {
  // (cosh_q - sinh_q)/cosh_q = q e^-x / cosh_q
  if (q == 0.0) return 0.0;
  check_cosh_pole(x, q);
  return x >= 0.0 ? 2.0 * q * std::exp(-2.0 * x) / scaled_cosh(x, q)
                  : 2.0 * q / scaled_cosh(x, q);
}

double one_plus_tanh_q(double x, double q) {
  // (cosh_q + sinh_q)/cosh_q = e^x / cosh_q
  if (q == 0.0) return 2.0;
  check_cosh_pole(x, q);
  return x >= 0.0 ? 2.0 / scaled_cosh(x, q)
                  : 2.0 * std::exp(2.0 * x) / scaled_cosh(x, q);
}

std::optional<double> cosh_q_zero(double q) {
  if (q < 0.0) return 0.5 * std::log(-q);
  return std::nullopt;
}

std::optional<double> sinh_q_zero(double q) {
  if (q > 0.0) return 0.5 * std::log(q);
  return std::nullopt;
}

} // namespace qhyper

std::optional<double> potential_pole(const PotentialParams &p) {
  if (auto z = qhyper::cosh_q_zero(p.q)) return *z / p.alpha;
  return std::nullopt;
}

double potential_eval(const PotentialParams &p, double x) {
  const double y = p.alpha * x;
  try {
    const double sech = qhyper::sech_q(y, p.q);
    return -p.v1 * sech * sech - p.v2 * qhyper::tanh_q(y, p.q);
  } catch (const PoleAtX &) {
    const double x0 = *potential_pole(p);
    throw PoleAtX(x0, "potential singular at x0 = ln(-q)/(2 alpha) = " + fmt(x0));
  }
}

std::vector<std::pair<double, double>> potential_curve(const PotentialParams &p,
                                                       double x_min, double x_max,
                                                       int n_points) {
  p.validate();
  if (n_points < 2) throw InvalidArgument("n_points must be >= 2");
  if (!(x_min < x_max)) throw InvalidArgument("x_min must be < x_max");
  if (auto x0 = potential_pole(p); x0 && *x0 >= x_min && *x0 <= x_max) {
    throw DomainViolation("interval [" + fmt(x_min) + ", " + fmt(x_max) +
                          "] contains the pole x0 = " + fmt(*x0));
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(n_points));
  const double last = n_points - 1;
  for (int i = 0; i < n_points; ++i) {
    const double t = i / last;
    const double x = i == n_points - 1 ? x_max : (1.0 - t) * x_min + t * x_max;
    out.emplace_back(x, potential_eval(p, x));
  }
  return out;
}

} // namespace kgnu
