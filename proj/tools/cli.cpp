#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "kgnu/errors.hpp"
#include "kgnu/kg_core.hpp"
#include "kgnu/oracle.hpp"
#include "kgnu/qhyper.hpp"
#include "kgnu/variants.hpp"

namespace kgnu::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char *kConventionNote =
    "eps2=-V1bar/(q alpha^2), gam2=-V2bar/alpha^2, beta2=-Ebar2/alpha^2 "
    "(re-derived q-power convention)";

// A usage-level failure detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- tables

struct Empty {};
using Cell = std::variant<Empty, double, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Document {
  std::string command;
  ojson params = ojson::object();
  Table table;
};

std::string cell_text(const Cell &c) {
  if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
  if (std::holds_alternative<bool>(c)) return std::get<bool>(c) ? "true" : "false";
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return "";
}

ojson cell_json(const Cell &c) {
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    return std::isfinite(v) ? ojson(v) : ojson(nullptr);
  }
  if (std::holds_alternative<bool>(c)) return std::get<bool>(c);
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

std::string param_text(const ojson &v) {
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto &e : v) {
      if (!s.empty()) s += ',';
      s += param_text(e);
    }
    return s;
  }
  return v.dump();
}

std::string render_csv(const Document &d) {
  std::string s;
  s += "# solver=kgnu version=" + std::string(kVersion) + " command=" + d.command + "\n";
  s += "# convention_erratum=true " + std::string(kConventionNote) + "\n";
  std::string params = "# params";
  for (const auto &[k, v] : d.params.items()) params += " " + k + "=" + param_text(v);
  s += params + "\n";
  for (std::size_t i = 0; i < d.table.columns.size(); ++i) {
    if (i) s += ',';
    s += d.table.columns[i];
  }
  s += '\n';
  for (const auto &row : d.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += cell_text(row[i]);
    }
    s += '\n';
  }
  return s;
}

std::string render_json(const Document &d) {
  ojson j;
  j["schema"] = "kgnu/1";
  j["meta"] = {{"solver", "kgnu"},
               {"version", kVersion},
               {"command", d.command},
               {"convention_erratum", true},
               {"convention_note", kConventionNote},
               {"params", d.params}};
  j["columns"] = d.table.columns;
  ojson rows = ojson::array();
  for (const auto &row : d.table.rows) {
    ojson r = ojson::array();
    for (const auto &c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- options

struct Physics {
  double mass = 1.0;
  double v1 = 1.0;
  double v2 = -1.0 / 3.0;
  double alpha = 1.0;
};

struct Output {
  std::string format = "csv";
  std::string path;
};

void add_physics(CLI::App *c, Physics &p, bool with_mass = true) {
  if (with_mass) c->add_option("--mass", p.mass, "rest mass M")->capture_default_str();
  c->add_option("--v1", p.v1, "well depth V1")->capture_default_str();
  c->add_option("--v2", p.v2, "asymmetry V2")->capture_default_str();
  c->add_option("--alpha", p.alpha, "range parameter alpha")->capture_default_str();
}

void add_output(CLI::App *c, Output &o) {
  c->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  c->add_option("--output", o.path, "output file (default: standard output)");
}

std::string render(const Document &d, const Output &o) {
  return o.format == "json" ? render_json(d) : render_csv(d);
}

void emit(const std::string &text, const std::string &path, std::ostream &out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw UsageError("failed writing '" + path + "'");
}

void require_finite(double v, const char *name) {
  if (!std::isfinite(v)) throw UsageError(std::string(name) + " must be finite");
}

// Spectrum APIs reject q = 0; say why.
void require_spectrum_q(double q) {
  if (q == 0.0) {
    throw UsageError(
        "q = 0 is not supported for spectra: the energy equation contains V1bar/q and is "
        "singular there (the convention-erratum form keeps this 1/q factor)");
  }
  DeformationQ::for_spectrum(q);
}

// Deterministic parallel map: result i is fn(i) regardless of scheduling.
// The first failure by index is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)> &fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(thread_budget(), n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto &s : slots) out.push_back(std::move(*s));
  return out;
}

ojson physics_json(const Physics &p) {
  return {{"mass", p.mass}, {"v1", p.v1}, {"v2", p.v2}, {"alpha", p.alpha}};
}

// ---------------------------------------------------------------- potential

struct PotentialOpts {
  Physics phys;
  std::vector<double> q{1.0};
  double xmin = -5.0;
  double xmax = 5.0;
  int points = 201;
  bool long_format = false;
  Output out;
};

std::string per_q_path(const std::string &path, double q) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  const std::string stem = has_ext ? path.substr(0, dot) : path;
  const std::string ext = has_ext ? path.substr(dot) : "";
  return stem + "_q" + format_number(q) + ext;
}

int cmd_potential(const PotentialOpts &o, std::ostream &out) {
  require_finite(o.xmin, "--xmin");
  require_finite(o.xmax, "--xmax");
  if (!(o.xmax > o.xmin)) throw UsageError("--xmax must exceed --xmin");
  if (o.points < 2) throw UsageError("--points must be >= 2");
  if (o.q.empty()) throw UsageError("at least one --q is required");

  auto base_params = [&](const ojson &q) {
    ojson p = {{"v1", o.phys.v1}, {"v2", o.phys.v2}, {"alpha", o.phys.alpha}, {"q", q},
               {"xmin", o.xmin}, {"xmax", o.xmax}, {"points", o.points}};
    return p;
  };
  auto curve = [&](double q) {
    const PotentialParams p{o.phys.v1, o.phys.v2, o.phys.alpha, q};
    p.validate();
    return potential_curve(p, o.xmin, o.xmax, o.points);
  };

  if (o.long_format) {
    Document d{"potential", base_params(o.q), {{"q", "x", "V"}, {}}};
    for (double q : o.q) {
      for (const auto &[x, v] : curve(q)) d.table.rows.push_back({q, x, v});
    }
    emit(render(d, o.out), o.out.path, out);
    return kOk;
  }
  std::string joined;
  for (double q : o.q) {
    Document d{"potential", base_params(q), {{"x", "V"}, {}}};
    for (const auto &[x, v] : curve(q)) d.table.rows.push_back({x, v});
    const std::string text = render(d, o.out);
    if (!o.out.path.empty() && o.q.size() > 1) {
      emit(text, per_q_path(o.out.path, q), out);
    } else {
      joined += text;
    }
  }
  if (!joined.empty()) emit(joined, o.out.path, out);
  return kOk;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOpts {
  Physics phys;
  std::optional<double> q;
  int n_max = 3;
  std::string variant = "general";
  Output out;
};

int cmd_spectrum(const SpectrumOpts &o, std::ostream &out) {
  if (o.n_max < 0) throw UsageError("--n-max must be >= 0");
  using variants::VariantKind;
  double q = o.q.value_or(1.0);
  if (o.variant == "eckart" && !o.q) q = -1.0;
  require_spectrum_q(q);

  ojson params = physics_json(o.phys);
  params["q"] = q;
  params["n_max"] = o.n_max;
  params["variant"] = o.variant;
  Document d{"spectrum", params, {{"n", "E", "Ebar2", "mu", "nu", "physical", "reasons"}, {}}};

  const double m = o.phys.mass;
  if (o.variant == "pt-rosen-morse") {
    const variants::VariantSpec v{VariantKind::PTRosenMorse, o.phys.v1, o.phys.v2, o.phys.alpha,
                                  q, 0.0};
    for (const auto &s : variants::pt_rosen_morse_levels(v, m, o.n_max)) {
      d.table.rows.push_back({static_cast<double>(s.n), s.energy, s.energy * s.energy - m * m,
                              s.exponents.mu, format_number(s.exponents.nu_imag) + "i",
                              s.physical, s.reasons_text()});
    }
    emit(render(d, o.out), o.out.path, out);
    return kOk;
  }

  PotentialParams pot{o.phys.v1, o.phys.v2, o.phys.alpha, q};
  if (o.variant == "rosen-morse" || o.variant == "eckart") {
    const auto kind = o.variant == "eckart" ? VariantKind::Eckart : VariantKind::RosenMorseWell;
    pot = variants::to_general({kind, o.phys.v1, o.phys.v2, o.phys.alpha, q, 0.0}).params;
  }
  const KGProblem p{m, pot};
  p.validate();
  for (const auto &s : energy_levels(p, o.n_max)) {
    d.table.rows.push_back({static_cast<double>(s.n), s.energy, s.energy * s.energy - m * m,
                            s.exponents.mu, s.exponents.nu, s.physical, s.reasons_text()});
  }
  emit(render(d, o.out), o.out.path, out);
  return kOk;
}

// ---------------------------------------------------------------- sweep

struct SweepOpts {
  double mass = 1.0;
  double alpha = 1.0;
  std::vector<double> q{1.0};
  std::vector<int> n{0};
  double from = 0.5;
  double to = 5.0;
  int steps = 10;
  double v2_ratio = -1.0 / 3.0;
  Output out;
};

int cmd_sweep(const SweepOpts &o, std::ostream &out) {
  require_finite(o.from, "--from");
  require_finite(o.to, "--to");
  require_finite(o.v2_ratio, "--v2-ratio");
  if (o.steps < 1) throw UsageError("--steps must be >= 1");
  if (o.q.empty() || o.n.empty()) throw UsageError("--q and --n need at least one value");
  for (int n : o.n) {
    if (n < 0) throw UsageError("--n must be >= 0");
  }
  for (double q : o.q) require_spectrum_q(q);
  if (!(o.mass > 0.0)) throw UsageError("--mass must be > 0");
  if (!(o.alpha > 0.0)) throw UsageError("--alpha must be > 0");

  std::vector<double> vs(static_cast<std::size_t>(o.steps) + 1);
  for (int i = 0; i <= o.steps; ++i) {
    vs[i] = i == o.steps ? o.to : o.from + (o.to - o.from) * i / o.steps;
  }
  const int n_top = *std::max_element(o.n.begin(), o.n.end());

  // One spectrum per (q, V); rows are assembled afterwards in a fixed order.
  const std::size_t nv = vs.size();
  const auto spectra = parallel_map<std::vector<BoundState>>(
      o.q.size() * nv, [&](std::size_t k) {
        const double q = o.q[k / nv];
        const double v = vs[k % nv];
        const KGProblem p{o.mass, PotentialParams{v, o.v2_ratio * v, o.alpha, q}};
        return energy_levels(p, n_top);
      });

  ojson params = {{"mass", o.mass},   {"alpha", o.alpha}, {"q", o.q},
                  {"n", o.n},         {"from", o.from},   {"to", o.to},
                  {"steps", o.steps}, {"v2_ratio", o.v2_ratio}};
  Document d{"sweep", params, {{"q", "n", "V", "E"}, {}}};
  for (std::size_t iq = 0; iq < o.q.size(); ++iq) {
    for (int n : o.n) {
      for (std::size_t iv = 0; iv < nv; ++iv) {
        bool any = false;
        for (const auto &s : spectra[iq * nv + iv]) {
          if (s.n != n || !s.physical) continue;
          d.table.rows.push_back({o.q[iq], static_cast<double>(n), vs[iv], s.energy});
          any = true;
        }
        if (!any) d.table.rows.push_back({o.q[iq], static_cast<double>(n), vs[iv], Empty{}});
      }
    }
  }
  emit(render(d, o.out), o.out.path, out);
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
  double mass = 1.0;
  double alpha = 1.0;
  std::vector<double> q;
  std::vector<double> v1;
  std::vector<double> v2;
  int n_max = 3;
  double tolerance = 1e-4;
  Output out;
};

struct VerifyCase {
  double q, v1, v2;
};

std::vector<VerifyCase> builtin_cases() {
  std::vector<VerifyCase> cs;
  for (double q : {1.0, 0.5, -1.0}) {
    for (double v1 : {0.5, 1.0, 2.0}) {
      for (double v2 : {0.0, -v1 / 3.0}) cs.push_back({q, v1, v2});
    }
  }
  return cs;
}

struct VerifyRow {
  std::string label;
  int n;
  double e_closed;
  std::optional<double> e_oracle;
};

int cmd_verify(const VerifyOpts &o, std::ostream &out, std::ostream &err) {
  if (!(o.tolerance > 0.0)) throw UsageError("--tolerance must be > 0");
  if (o.n_max < 0) throw UsageError("--n-max must be >= 0");
  if (!(o.mass > 0.0)) throw UsageError("--mass must be > 0");
  if (!(o.alpha > 0.0)) throw UsageError("--alpha must be > 0");

  std::vector<VerifyCase> cases;
  const bool custom = !o.q.empty() || !o.v1.empty() || !o.v2.empty();
  if (custom) {
    const std::vector<double> qs = o.q.empty() ? std::vector<double>{1.0} : o.q;
    const std::vector<double> v1s = o.v1.empty() ? std::vector<double>{1.0} : o.v1;
    const std::vector<double> v2s = o.v2.empty() ? std::vector<double>{0.0} : o.v2;
    for (double q : qs)
      for (double a : v1s)
        for (double b : v2s) cases.push_back({q, a, b});
  } else {
    cases = builtin_cases();
  }
  for (const auto &c : cases) require_spectrum_q(c.q);

  const auto per_case = parallel_map<std::vector<VerifyRow>>(cases.size(), [&](std::size_t i) {
    const auto &c = cases[i];
    const KGProblem p{o.mass, PotentialParams{c.v1, c.v2, o.alpha, c.q}};
    const std::string label =
        "q=" + format_number(c.q) + ";v1=" + format_number(c.v1) + ";v2=" + format_number(c.v2);
    std::vector<VerifyRow> rows;
    for (const auto &s : energy_levels(p, o.n_max)) {
      if (!s.physical) continue;
      VerifyRow r{label, s.n, s.energy, std::nullopt};
      try {
        r.e_oracle = oracle::kg_selfconsistent_level(p, s.n, s.energy).energy;
      } catch (const NoRoot &) {
      }
      rows.push_back(r);
    }
    return rows;
  });

  ojson params = {{"mass", o.mass}, {"alpha", o.alpha}, {"n_max", o.n_max},
                  {"tolerance", o.tolerance}, {"suite", custom ? "custom" : "builtin"}};
  Document d{"verify", params, {{"case", "n", "E_closed", "E_oracle", "gap"}, {}}};
  double worst = 0.0;
  int missing = 0;
  for (const auto &rows : per_case) {
    for (const auto &r : rows) {
      if (r.e_oracle) {
        const double gap = *r.e_oracle - r.e_closed;
        worst = std::max(worst, std::abs(gap));
        d.table.rows.push_back({r.label, static_cast<double>(r.n), r.e_closed, *r.e_oracle, gap});
      } else {
        ++missing;
        d.table.rows.push_back({r.label, static_cast<double>(r.n), r.e_closed, Empty{}, Empty{}});
      }
    }
  }
  emit(render(d, o.out), o.out.path, out);
  const bool ok = worst <= o.tolerance && missing == 0;
  err << "verify: " << d.table.rows.size() << " levels, max |gap| = " << format_number(worst)
      << ", missing = " << missing << ", tolerance = " << format_number(o.tolerance)
      << (ok ? " -> ok" : " -> FAILED") << "\n";
  return ok ? kOk : kNumerical;
}

// ---------------------------------------------------------------- wavefunction

struct WaveOpts {
  Physics phys;
  double q = 1.0;
  int n = 0;
  std::optional<double> xmin;
  std::optional<double> xmax;
  int points = 801;
  bool with_oracle = false;
  Output out;
};

// Oracle eigenvector at the oracle energy, unit L2 norm on its grid, sign
// aligned with `reference`, linearly interpolated onto xs.
std::vector<double> oracle_column(const KGProblem &p, int n, double energy,
                                  const std::vector<double> &xs,
                                  const std::vector<double> &reference) {
  const auto level = oracle::kg_selfconsistent_level(p, n, energy);
  const auto eff = effective_problem(p, level.energy);
  const auto &g = level.grid;
  auto v = oracle::schrodinger_eigenvector(eff.v_eff, g, n);
  const double h = g.step();
  double norm = 0.0;
  for (double x : v) norm += x * x * h;
  norm = std::sqrt(norm);
  std::vector<double> col(xs.size(), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double t = (xs[i] - g.x_begin) / h - 1.0;  // node index coordinate
    if (t < -1.0 || t > static_cast<double>(v.size())) continue;
    const auto at = [&](long k) {
      return (k < 0 || k >= static_cast<long>(v.size())) ? 0.0 : v[static_cast<std::size_t>(k)];
    };
    const long k = static_cast<long>(std::floor(t));
    const double f = t - static_cast<double>(k);
    col[i] = ((1.0 - f) * at(k) + f * at(k + 1)) / norm;
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) dot += col[i] * reference[i];
  if (dot < 0.0) {
    for (double &c : col) c = -c;
  }
  return col;
}

int cmd_wavefunction(const WaveOpts &o, std::ostream &out) {
  require_spectrum_q(o.q);
  if (o.n < 0) throw UsageError("--n must be >= 0");
  if (o.points < 2) throw UsageError("--points must be >= 2");
  const KGProblem p{o.phys.mass, PotentialParams{o.phys.v1, o.phys.v2, o.phys.alpha, o.q}};
  p.validate();
  const double half = 20.0 / o.phys.alpha;
  const double xmin = o.xmin.value_or(-half);
  const double xmax = o.xmax.value_or(half);
  require_finite(xmin, "--xmin");
  require_finite(xmax, "--xmax");
  if (!(xmax > xmin)) throw UsageError("--xmax must exceed --xmin");

  const auto levels = energy_levels(p, o.n);
  const BoundState *state = nullptr;
  std::string seen;
  for (const auto &s : levels) {
    if (s.n != o.n) continue;
    if (s.physical && !state) state = &s;
    if (!s.physical) seen += " E=" + format_number(s.energy) + " (" + s.reasons_text() + ")";
  }
  if (!state) {
    throw NotPhysical("no physical state with n = " + std::to_string(o.n) +
                      (seen.empty() ? std::string(" (no root of the energy equation)")
                                    : "; formal roots:" + seen));
  }
  const auto psi = wavefunction(p, *state);

  std::vector<double> xs(static_cast<std::size_t>(o.points)), ys(xs.size());
  for (int i = 0; i < o.points; ++i) {
    const double t = static_cast<double>(i) / (o.points - 1);
    xs[i] = i == o.points - 1 ? xmax : (1.0 - t) * xmin + t * xmax;
    ys[i] = psi(xs[i]);
  }

  ojson params = physics_json(o.phys);
  params["q"] = o.q;
  params["n"] = o.n;
  params["E"] = state->energy;
  params["norm_constant"] = psi.norm_constant();
  params["xmin"] = xmin;
  params["xmax"] = xmax;
  params["points"] = o.points;
  Document d{"wavefunction", params, {{"x", "psi"}, {}}};
  if (o.with_oracle) {
    d.table.columns.push_back("psi_oracle");
    const auto col = oracle_column(p, o.n, state->energy, xs, ys);
    for (std::size_t i = 0; i < xs.size(); ++i) d.table.rows.push_back({xs[i], ys[i], col[i]});
  } else {
    for (std::size_t i = 0; i < xs.size(); ++i) d.table.rows.push_back({xs[i], ys[i]});
  }
  emit(render(d, o.out), o.out.path, out);
  return kOk;
}

// ---------------------------------------------------------------- config file

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool has_flag(const std::vector<std::string> &args, const std::string &flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string &a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Appends `--key value` for every config entry whose flag is absent from the
// command line. Comma-separated values expand into repeated flags.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    const std::string flag = "--" + key;
    if (has_flag(rest, flag)) continue;
    if (value == "true" || value == "false") {
      if (value == "true") extra.push_back(flag);
      continue;
    }
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      extra.push_back(flag);
      extra.push_back(trim(item));
    }
  }
  rest.insert(rest.end(), extra.begin(), extra.end());
  return rest;
}

} // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

unsigned thread_budget() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("KGNU_THREADS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(std::min<long>(v, hw));
  }
  return hw;
}

int run(const std::vector<std::string> &raw_args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Klein-Gordon bound states of Rosen-Morse type potentials", "kgnu"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.footer("Options may also come from --config FILE (flat key=value lines; "
             "command-line flags win).\nExit codes: 0 ok, 1 numerical/physical failure, "
             "2 usage error.");

  PotentialOpts pot;
  auto *c_pot = app.add_subcommand("potential", "sample V(x) on a uniform grid");
  add_physics(c_pot, pot.phys, false);
  c_pot->add_option("--q", pot.q, "deformation (repeatable)")->capture_default_str();
  c_pot->add_option("--xmin", pot.xmin)->capture_default_str();
  c_pot->add_option("--xmax", pot.xmax)->capture_default_str();
  c_pot->add_option("--points", pot.points)->capture_default_str();
  c_pot->add_flag("--long", pot.long_format, "single table with a q column");
  add_output(c_pot, pot.out);

  SpectrumOpts spec;
  auto *c_spec = app.add_subcommand("spectrum", "closed-form bound states for n = 0..n-max");
  spec.phys.v1 = 2.0;
  spec.phys.v2 = 0.0;
  add_physics(c_spec, spec.phys);
  c_spec->add_option("--q", spec.q, "deformation (default 1; -1 for --variant eckart)");
  c_spec->add_option("--n-max", spec.n_max)->capture_default_str();
  c_spec->add_option("--variant", spec.variant, "parameterization of V1, V2")
      ->check(CLI::IsMember({"general", "rosen-morse", "eckart", "pt-rosen-morse"}))
      ->capture_default_str();
  add_output(c_spec, spec.out);

  SweepOpts sw;
  auto *c_sw = app.add_subcommand("sweep", "energy against coupling V1 = V, V2 = ratio * V");
  c_sw->add_option("--mass", sw.mass)->capture_default_str();
  c_sw->add_option("--alpha", sw.alpha)->capture_default_str();
  c_sw->add_option("--q", sw.q, "deformation (repeatable)")->capture_default_str();
  c_sw->add_option("--n", sw.n, "quantum number (repeatable)")->capture_default_str();
  c_sw->add_option("--from", sw.from)->capture_default_str();
  c_sw->add_option("--to", sw.to)->capture_default_str();
  c_sw->add_option("--steps", sw.steps, "number of intervals")->capture_default_str();
  c_sw->add_option("--v2-ratio", sw.v2_ratio)->capture_default_str();
  add_output(c_sw, sw.out);

  VerifyOpts ver;
  auto *c_ver = app.add_subcommand("verify", "closed form against the finite-difference oracle");
  c_ver->add_option("--mass", ver.mass)->capture_default_str();
  c_ver->add_option("--alpha", ver.alpha)->capture_default_str();
  c_ver->add_option("--q", ver.q, "grid values (repeatable; default: built-in suite)");
  c_ver->add_option("--v1", ver.v1, "grid values (repeatable)");
  c_ver->add_option("--v2", ver.v2, "grid values (repeatable)");
  c_ver->add_option("--n-max", ver.n_max)->capture_default_str();
  c_ver->add_option("--tolerance", ver.tolerance)->capture_default_str();
  add_output(c_ver, ver.out);

  WaveOpts wave;
  auto *c_wave = app.add_subcommand("wavefunction", "normalized closed-form wavefunction");
  wave.phys.v1 = 2.0;
  wave.phys.v2 = 0.0;
  add_physics(c_wave, wave.phys);
  c_wave->add_option("--q", wave.q)->capture_default_str();
  c_wave->add_option("--n", wave.n)->capture_default_str();
  c_wave->add_option("--xmin", wave.xmin, "default -20/alpha");
  c_wave->add_option("--xmax", wave.xmax, "default 20/alpha");
  c_wave->add_option("--points", wave.points)->capture_default_str();
  c_wave->add_flag("--oracle", wave.with_oracle, "add the finite-difference eigenvector");
  add_output(c_wave, wave.out);

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::Success &e) {
    std::ostringstream msg, dummy;
    app.exit(e, msg, dummy);
    out << msg.str();
    return kOk;
  } catch (const CLI::ParseError &e) {
    std::ostringstream msg;
    app.exit(e, msg, msg);
    err << msg.str();
    return kUsage;
  } catch (const UsageError &e) {
    err << "kgnu: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (c_pot->parsed()) return cmd_potential(pot, out);
    if (c_spec->parsed()) return cmd_spectrum(spec, out);
    if (c_sw->parsed()) return cmd_sweep(sw, out);
    if (c_ver->parsed()) return cmd_verify(ver, out, err);
    if (c_wave->parsed()) return cmd_wavefunction(wave, out);
  } catch (const UsageError &e) {
    err << "kgnu: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument &e) {
    err << "kgnu: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainViolation &e) {
    err << "kgnu: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidVariantParams &e) {
    err << "kgnu: " << e.what() << "\n";
    return kUsage;
  } catch (const Error &e) {
    err << "kgnu: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}

} // namespace kgnu::cli
