#include "kgnu/orthopoly.hpp"

#include <cmath>

#include "kgnu/errors.hpp"

namespace kgnu::orthopoly {

double generalized_binomial(double r, int k) {
  if (k < 0) return 0.0;
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c *= (r - k + j) / j;
  return c;
}

double jacobi_eval_sum(const JacobiParams &p, double s) {
  if (p.n < 0) throw InvalidArgument("Jacobi degree must be >= 0");
  const double xm = 0.5 * (s - 1.0);
  const double xp = 0.5 * (s + 1.0);
  double sum = 0.0;
  for (int k = 0; k <= p.n; ++k) {
    sum += generalized_binomial(p.n + p.a, p.n - k) * generalized_binomial(p.n + p.b, k) *
           std::pow(xm, k) * std::pow(xp, p.n - k);
  }
  return sum;
}

double jacobi_eval(const JacobiParams &p, double s) {
  if (p.n < 0) throw InvalidArgument("Jacobi degree must be >= 0");
  const double a = p.a;
  const double b = p.b;
  if (p.n == 0) return 1.0;
  double prev = 1.0;
  double cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * s;
  for (int k = 1; k < p.n; ++k) {
    const double c = 2.0 * k + a + b;
    const double denom = 2.0 * (k + 1) * (k + a + b + 1.0) * c;
    // The recurrence breaks down when a + b hits a small negative integer.
    if (denom == 0.0) return jacobi_eval_sum(p, s);
    const double next = ((c + 1.0) * (c * (c + 2.0) * s + a * a - b * b) * cur -
                         2.0 * (k + a) * (k + b) * (c + 2.0) * prev) /
                        denom;
    prev = cur;
    cur = next;
  }
  return cur;
}

double jacobi_derivative(const JacobiParams &p, double s) {
  if (p.n == 0) return 0.0;
  return 0.5 * (p.n + p.a + p.b + 1.0) *
         jacobi_eval(JacobiParams{p.a + 1.0, p.b + 1.0, p.n - 1}, s);
}

double jacobi_second_derivative(const JacobiParams &p, double s) {
  if (p.n < 2) return 0.0;
  return 0.25 * (p.n + p.a + p.b + 1.0) * (p.n + p.a + p.b + 2.0) *
         jacobi_eval(JacobiParams{p.a + 2.0, p.b + 2.0, p.n - 2}, s);
}

} // namespace kgnu::orthopoly
