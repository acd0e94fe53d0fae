#include "kgnu/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kgnu/errors.hpp"

namespace kgnu::oracle {

double edge_leak(std::span<const double> v);

namespace {

// Gershgorin interval of a symmetric tridiagonal matrix.
std::pair<double, double> gershgorin(std::span<const double> d, std::span<const double> e) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(e[i - 1]);
    if (i + 1 < n) r += std::abs(e[i]);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  return {lo, hi};
}

// Energy at which g_n changes sign, by bisection on the sign of
// count(E^2 - M^2) <= n, i.e. e_n(E) >= E^2 - M^2.
struct SignOracle {
  const KGProblem &p;
  const GridSpec grid;
  int n;
  std::vector<double> xs;
  std::vector<double> vs;  // V(x) at the nodes
  mutable std::vector<double> diag;
  std::vector<double> off;

  SignOracle(const KGProblem &prob, GridSpec g, int level)
      : p(prob), grid(g), n(level) {
    const int m = grid.unknowns();
    const double h = grid.step();
    xs.resize(static_cast<std::size_t>(m));
    vs.resize(xs.size());
    diag.resize(xs.size());
    off.assign(static_cast<std::size_t>(std::max(m - 1, 0)), -1.0 / (h * h));
    for (int i = 0; i < m; ++i) {
      xs[i] = grid.node(i);
      vs[i] = potential_eval(p.potential, xs[i]);
    }
  }

  void fill(double energy) const {
    const double h = grid.step();
    const double scale = 2.0 * (energy + p.mass);
    for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = 2.0 / (h * h) + scale * vs[i];
  }

  // +1 when e_n(E) >= Ebar2, -1 otherwise.
  int sign(double energy) const {
    fill(energy);
    const double ebar2 = energy * energy - p.mass * p.mass;
    return sturm_count(diag, off, ebar2) <= n ? 1 : -1;
  }

  std::vector<double> roots(double lo, double hi, int scan, double tol) const {
    std::vector<double> es(static_cast<std::size_t>(scan));
    std::vector<int> ss(es.size());
    for (int i = 0; i < scan; ++i) {
      const double t = static_cast<double>(i) / (scan - 1);
      es[i] = i == scan - 1 ? hi : (1.0 - t) * lo + t * hi;
      ss[i] = sign(es[i]);
    }
    std::vector<double> out;
    for (int i = 0; i + 1 < scan; ++i) {
      if (ss[i] == ss[i + 1]) continue;
      double a = es[i], b = es[i + 1];
      const int sa = ss[i];
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (sign(mid) == sa) {
          a = mid;
        } else {
          b = mid;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    return out;
  }

  double leak(double energy) const {
    fill(energy);
    const double ebar2 = energy * energy - p.mass * p.mass;
    const auto v = tridiag_eigenvector(diag, off, ebar2);
    return edge_leak(v);
  }
};

} // namespace

double edge_leak(std::span<const double> v) {
  // The wall pins the outermost node to ~0, so look at the outer band instead.
  const std::size_t n = v.size();
  if (n == 0) return 1.0;
  const std::size_t band = std::max<std::size_t>(1, n / 40);
  double peak = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(v[i]);
    peak = std::max(peak, a);
    if (i < band || i >= n - band) edge = std::max(edge, a);
  }
  return peak > 0.0 ? edge / peak : 1.0;
}

GridSpec GridSpec::full_line(double alpha, double half_width, int intervals) {
  const double l = half_width / alpha;
  return GridSpec{-l, l, intervals};
}

GridSpec GridSpec::half_line(double x0, double alpha, double half_width, int intervals,
                             double eta_scale) {
  return GridSpec{x0 + eta_scale / alpha, x0 + 2.0 * half_width / alpha, intervals};
}

GridSpec GridSpec::for_problem(const KGProblem &p, double half_width, int intervals,
                               double eta_scale) {
  const auto dom = p.domain();
  if (dom.kind == Domain::Kind::HalfLine) {
    return half_line(dom.x0, p.potential.alpha, half_width, intervals, eta_scale);
  }
  return full_line(p.potential.alpha, half_width, intervals);
}

int sturm_count(std::span<const double> diag, std::span<const double> offdiag, double shift) {
  // LDL^T pivots of T - shift I; each negative pivot is an eigenvalue below shift.
  int count = 0;
  double piv = 1.0;
  const double tiny = std::numeric_limits<double>::min() * 1e3;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double e2 = i > 0 ? offdiag[i - 1] * offdiag[i - 1] : 0.0;
    piv = (diag[i] - shift) - (i > 0 ? e2 / piv : 0.0);
    if (piv == 0.0) piv = tiny;
    if (piv < 0.0) ++count;
  }
  return count;
}

std::vector<double> tridiag_eigen_lowest(std::span<const double> diag,
                                         std::span<const double> offdiag, int k) {
  const int n = static_cast<int>(diag.size());
  if (k < 0 || k > n) throw InvalidArgument("k must be in [0, size]");
  if (static_cast<int>(offdiag.size()) < n - 1) throw InvalidArgument("offdiag too short");
  const auto [glo, ghi] = gershgorin(diag, offdiag);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  double lower = glo;
  for (int j = 0; j < k; ++j) {
    // Smallest x with count(x) >= j + 1 is the j-th eigenvalue.
    double a = lower, b = ghi;
    const double floor = 1e-15 * std::max({std::abs(glo), std::abs(ghi), 1e-300});
    while (b - a > std::max(1e-12 * std::max(std::abs(a), std::abs(b)), floor)) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (sturm_count(diag, offdiag, mid) >= j + 1) {
        b = mid;
      } else {
        a = mid;
      }
    }
    const double ev = 0.5 * (a + b);
    out.push_back(ev);
    lower = a;
  }
  return out;
}

std::vector<double> tridiag_eigenvector(std::span<const double> diag,
                                        std::span<const double> offdiag, double eigenvalue,
                                        int iterations) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  // Shift slightly off the eigenvalue so the factorization stays regular.
  const auto [glo, ghi] = gershgorin(diag, offdiag);
  const double shift =
      eigenvalue + 1e-10 * std::max({std::abs(eigenvalue), std::abs(glo), std::abs(ghi), 1.0});

  // Tridiagonal LU with partial pivoting (as in LAPACK gttrf), reused across
  // iterations. Row i of U has entries u0 (diag), u1, u2 (fill-in).
  std::vector<double> dl(offdiag.begin(), offdiag.begin() + static_cast<long>(n - 1));
  std::vector<double> d(n), du(offdiag.begin(), offdiag.begin() + static_cast<long>(n - 1));
  std::vector<double> du2(n > 2 ? n - 2 : 0, 0.0);
  std::vector<int> swapped(n > 0 ? n - 1 : 0, 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;
  const double tiny = 1e-300;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;

  // Start vector without reflection symmetry so odd states are reachable.
  std::vector<double> v(n), prev(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    v[i] = 1.0 + t + 0.25 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  }
  constexpr int kMaxIterations = 60;
  for (int it = 0; it < kMaxIterations; ++it) {
    // Forward: apply L^-1 with the recorded interchanges.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) {
        const double tmp = v[i];
        v[i] = v[i + 1];
        v[i + 1] = tmp - dl[i] * v[i];
      } else {
        v[i + 1] -= dl[i] * v[i];
      }
    }
    // Back substitution with U.
    v[n - 1] /= d[n - 1];
    if (n > 1) v[n - 2] = (v[n - 2] - du[n - 2] * v[n - 1]) / d[n - 2];
    if (n > 2) {
      for (std::size_t i = n - 2; i-- > 0;) {
        v[i] = (v[i] - du[i] * v[i + 1] - du2[i] * v[i + 2]) / d[i];
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    // Sign-insensitive change against the previous iterate.
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] /= norm;
      dot += v[i] * prev[i];
    }
    const bool settled = 1.0 - std::abs(dot) < 1e-13;
    prev = v;
    if (it + 1 >= iterations && settled) break;
  }
  // Fix the overall sign so the largest component is positive.
  const auto it = std::max_element(v.begin(), v.end(),
                                   [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*it < 0.0) {
    for (double &x : v) x = -x;
  }
  return v;
}

Discretization discretize(const std::function<double(double)> &potential, const GridSpec &grid) {
  if (grid.intervals < 2) throw InvalidArgument("grid needs at least 2 intervals");
  const int m = grid.unknowns();
  const double h = grid.step();
  Discretization out;
  out.diag.resize(static_cast<std::size_t>(m));
  out.offdiag.assign(static_cast<std::size_t>(m - 1), -1.0 / (h * h));
  for (int i = 0; i < m; ++i) out.diag[i] = 2.0 / (h * h) + potential(grid.node(i));
  return out;
}

std::vector<double> schrodinger_levels(const std::function<double(double)> &potential,
                                       const GridSpec &grid, int k, bool extrapolate) {
  const auto coarse = discretize(potential, grid);
  auto levels = tridiag_eigen_lowest(coarse.diag, coarse.offdiag, k);
  if (!extrapolate) return levels;
  const auto fine = discretize(potential, grid.refined());
  const auto fine_levels = tridiag_eigen_lowest(fine.diag, fine.offdiag, k);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    levels[i] = (4.0 * fine_levels[i] - levels[i]) / 3.0;
  }
  return levels;
}

std::vector<double> schrodinger_eigenvector(const std::function<double(double)> &potential,
                                            const GridSpec &grid, int k) {
  const auto disc = discretize(potential, grid);
  const auto levels = tridiag_eigen_lowest(disc.diag, disc.offdiag, k + 1);
  return tridiag_eigenvector(disc.diag, disc.offdiag, levels.back());
}

namespace {

std::vector<OracleResult> solve_on_grid(const KGProblem &p, int n, const OracleConfig &cfg,
                                        const GridSpec &grid) {
  const double lo = -p.mass + cfg.edge_delta * p.mass;
  const double hi = p.mass - cfg.edge_delta * p.mass;
  const double tol = cfg.root_tol * p.mass;

  const SignOracle coarse(p, grid, n);
  const auto coarse_roots = coarse.roots(lo, hi, cfg.scan_points, tol);
  if (coarse_roots.empty()) {
    throw NoRoot("no self-consistent level n = " + std::to_string(n));
  }

  std::vector<OracleResult> out;
  if (!cfg.extrapolate) {
    for (double e : coarse_roots) {
      OracleResult r{n, e, e * e - p.mass * p.mass, coarse.leak(e), grid, false, false};
      r.accepted = r.boundary_leak <= cfg.leak_limit;
      out.push_back(r);
    }
    return out;
  }

  const SignOracle fine(p, grid.refined(), n);
  const auto fine_roots = fine.roots(lo, hi, cfg.scan_points, tol);
  for (double e : coarse_roots) {
    if (fine_roots.empty()) break;
    const auto nearest = std::min_element(
        fine_roots.begin(), fine_roots.end(),
        [e](double a, double b) { return std::abs(a - e) < std::abs(b - e); });
    const double ext = (4.0 * *nearest - e) / 3.0;
    OracleResult r{n, ext, ext * ext - p.mass * p.mass, fine.leak(*nearest), grid, true, false};
    r.accepted = r.boundary_leak <= cfg.leak_limit;
    out.push_back(r);
  }
  if (out.empty()) throw NoRoot("no self-consistent level n = " + std::to_string(n));
  return out;
}

} // namespace

std::vector<OracleResult> kg_selfconsistent_levels(const KGProblem &p, int n,
                                                   const OracleConfig &cfg) {
  p.validate();
  if (n < 0) throw InvalidArgument("quantum number must be >= 0");
  OracleConfig c = cfg;
  for (int attempt = 0;; ++attempt) {
    const GridSpec grid = GridSpec::for_problem(p, c.half_width, c.intervals, c.eta_scale);
    auto out = solve_on_grid(p, n, c, grid);
    const bool clean = std::all_of(out.begin(), out.end(),
                                   [](const OracleResult &r) { return r.accepted; });
    if (clean || attempt >= cfg.max_widenings) return out;
    // Tails reach the walls: widen the box at constant spacing.
    c.half_width *= 2.0;
    c.intervals *= 2;
  }
}

OracleResult kg_selfconsistent_level(const KGProblem &p, int n, double near,
                                     const OracleConfig &cfg) {
  const auto all = kg_selfconsistent_levels(p, n, cfg);
  return *std::min_element(all.begin(), all.end(), [near](const auto &a, const auto &b) {
    return std::abs(a.energy - near) < std::abs(b.energy - near);
  });
}

int count_nodes(std::span<const double> values) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  const double floor = 1e-12 * peak;
  int nodes = 0;
  int last = 0;
  for (double v : values) {
    if (std::abs(v) <= floor) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++nodes;
    last = s;
  }
  return nodes;
}

} // namespace kgnu::oracle
