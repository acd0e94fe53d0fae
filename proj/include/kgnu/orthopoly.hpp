#pragma once

namespace kgnu {

/// Jacobi polynomial P_n^{(a,b)} with real a, b.
struct JacobiParams {
  double a = 0.0;
  double b = 0.0;
  int n = 0;

  /// a > -1 and b > -1, the range where (1-s)^a (1+s)^b is integrable on [-1,1].
  bool weight_integrable() const { return a > -1.0 && b > -1.0; }
};

namespace orthopoly {

/// Three-term recurrence in n.
double jacobi_eval(const JacobiParams &p, double s);

/// Finite hypergeometric sum
///   sum_k C(n+a, n-k) C(n+b, k) ((s-1)/2)^k ((s+1)/2)^(n-k).
/// Independent of jacobi_eval; used to cross-check it.
double jacobi_eval_sum(const JacobiParams &p, double s);

/// d/ds P_n^{(a,b)} = (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)}.
double jacobi_derivative(const JacobiParams &p, double s);

/// d^2/ds^2 P_n^{(a,b)}.
double jacobi_second_derivative(const JacobiParams &p, double s);

/// Generalized binomial C(r, k) for real r and integer k >= 0.
double generalized_binomial(double r, int k);

} // namespace orthopoly
} // namespace kgnu
