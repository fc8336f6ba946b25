#include <sdwave/certificate.hpp>
#include <sdwave/csv.hpp>
#include <sdwave/errors.hpp>
#include <sdwave/experiments.hpp>
#include <sdwave/gevrey.hpp>
#include <sdwave/hypotheses.hpp>
#include <sdwave/spectral_solver.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sdwave::experiments {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct InitialData {
  LatticeField u0{1};
  LatticeField u1{1};
  std::optional<GevreyData> gevrey;
};

class Writer {
 public:
  Writer(const Scenario& s, const RunOptions& opts, const std::string& suffix = {})
      : comment_(fmt::format("sdwave format={} config_hash={} scenario={}", kFormatVersion, hash_hex(s.hash),
                             s.name)) {
    report_.scenario = s.name;
    report_.out_dir = opts.out_root / (s.name + "-" + hash_hex(s.hash) + suffix);
    std::filesystem::create_directories(report_.out_dir);
  }

  void write(const std::string& file, const CsvTable& table) {
    const auto path = report_.out_dir / file;
    table.write(path, comment_);
    report_.files.push_back(path);
  }

  void verdict(std::string check, double measured, double threshold, bool pass) {
    report_.verdicts.push_back({std::move(check), measured, threshold, pass});
  }

  void summary(const std::string& quantity, double value) { summary_.emplace_back(quantity, value); }

  RunReport finish(std::chrono::steady_clock::time_point start) {
    CsvTable v({"check", "measured", "threshold", "pass"});
    for (const auto& x : report_.verdicts) v.row().add(x.check).add(x.measured).add(x.threshold).add(x.pass);
    write("verdicts.csv", v);
    CsvTable s({"quantity", "value"});
    for (const auto& [q, x] : summary_) s.row().add(q).add(x);
    write("summary.csv", s);
    report_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report_;
  }

 private:
  std::string comment_;
  RunReport report_;
  std::vector<std::pair<std::string, double>> summary_;
};

double num(const Section& sec, const std::string& key, double fallback) {
  auto it = sec.find(key);
  if (it == sec.end()) return fallback;
  double x = 0.0;
  const char* end = it->second.data() + it->second.size();
  auto [ptr, ec] = std::from_chars(it->second.data(), end, x);
  if (ec != std::errc{} || ptr != end) throw ValidationError("'" + key + " = " + it->second + "' is not a number");
  return x;
}

std::string str(const Section& sec, const std::string& key, const std::string& fallback = {}) {
  auto it = sec.find(key);
  return it == sec.end() ? fallback : it->second;
}

std::vector<std::string> split(const std::string& list, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(list);
  while (std::getline(in, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

LatticeField parse_csv_field(const DataSpec& d, const std::string& which) {
  LatticeField f(d.dim);
  std::istringstream in(d.csv_contents);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    if (cells.size() != static_cast<std::size_t>(d.dim) + 3) {
      throw ValidationError(fmt::format("data file line {}: expected {} cells", lineno, d.dim + 3));
    }
    if (cells[0] != "u0" && cells[0] != "u1") {
      throw ValidationError(fmt::format("data file line {}: first cell must be u0 or u1", lineno));
    }
    if (cells[0] != which) continue;
    LatticeIndex k{};
    Section row;
    for (int j = 0; j < d.dim; ++j) {
      const auto& c = cells[static_cast<std::size_t>(j) + 1];
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc{} || ptr != c.data() + c.size()) {
        throw ValidationError(fmt::format("data file line {}: bad index '{}'", lineno, c));
      }
      k[static_cast<std::size_t>(j)] = v;
    }
    row["re"] = cells[static_cast<std::size_t>(d.dim) + 1];
    row["im"] = cells[static_cast<std::size_t>(d.dim) + 2];
    f.add(k, Complex(num(row, "re", 0.0), num(row, "im", 0.0)));
  }
  return f;
}

InitialData build_data(const DataSpec& d) {
  InitialData out{LatticeField(d.dim), LatticeField(d.dim), std::nullopt};
  switch (d.kind) {
    case DataKind::none:
      break;
    case DataKind::delta:
      if (d.u0_amplitude != 0.0) out.u0 = LatticeField::delta(d.dim, {}, d.u0_amplitude);
      if (d.u1_amplitude != 0.0) out.u1 = LatticeField::delta(d.dim, {}, d.u1_amplitude);
      break;
    case DataKind::box: {
      const std::int64_t w = d.width;
      const std::int64_t span = 2 * w + 1;
      std::int64_t count = 1;
      for (int j = 0; j < d.dim; ++j) count *= span;
      for (std::int64_t c = 0; c < count; ++c) {
        LatticeIndex k{};
        std::int64_t rest = c;
        for (int j = 0; j < d.dim; ++j) {
          k[static_cast<std::size_t>(j)] = rest % span - w;
          rest /= span;
        }
        if (d.u0_amplitude != 0.0) out.u0.set(k, d.u0_amplitude);
        if (d.u1_amplitude != 0.0) out.u1.set(k, d.u1_amplitude);
      }
      break;
    }
    case DataKind::gevrey36:
      out.gevrey = build_gevrey_data(Example36Data{d.m0}, d.truncation);
      out.u1 = out.gevrey->field;
      break;
    case DataKind::gevrey37:
      out.gevrey = build_gevrey_data(Example37Data{d.rho, d.kappa}, d.truncation);
      out.u1 = out.gevrey->field;
      break;
    case DataKind::csv:
      out.u0 = parse_csv_field(d, "u0");
      out.u1 = parse_csv_field(d, "u1");
      break;
  }
  return out;
}

SolverOptions solver_options(const Scenario& s) {
  SolverOptions o;
  o.tol = s.solver.tol;
  return o;
}

std::string sanitize(std::string note) {
  std::replace(note.begin(), note.end(), ',', ';');
  std::replace(note.begin(), note.end(), '"', '\'');
  std::replace(note.begin(), note.end(), '\n', ' ');
  return note;
}

void run_simulate(const Scenario& s, const RunOptions& opts, Writer& w) {
  const InitialData data = build_data(s.data);
  const TorusGrid grid(s.data.dim, s.solver.grid);
  const auto times = sample_schedule(s.solver.horizon, s.solver.per_decade);
  const EnergyTrace trace =
      simulate(s.profile, data.u0, data.u1, grid, times, solver_options(s), opts.threads);

  const double e0 = trace.total.front();
  if (!(e0 > 0.0)) throw ValidationError("initial energy is zero on the grid");
  CsvTable energy({"t", "energy", "energy_inf", "ratio"});
  double max_dev = 0.0;
  double max_ratio = 0.0;
  double min_ratio = kInf;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double ratio = trace.total[i] / e0;
    max_dev = std::max(max_dev, std::abs(ratio - 1.0));
    max_ratio = std::max(max_ratio, ratio);
    min_ratio = std::min(min_ratio, ratio);
    energy.row().add(times[i]).add(trace.total[i]).add(grid.mean(trace.density_inf[i])).add(ratio);
  }
  w.write("energy.csv", energy);

  CsvTable spectrum({"point", "theta_1", "xi_norm", "density_0", "density_end"});
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const FrequencyPoint fp = grid.point(p);
    spectrum.row()
        .add(static_cast<long long>(p))
        .add(fp.theta()[0])
        .add(fp.xi_norm())
        .add(trace.density.front()[p])
        .add(trace.density.back()[p]);
  }
  w.write("spectrum.csv", spectrum);

  w.summary("energy_0", e0);
  w.summary("max_ratio", max_ratio);
  w.summary("min_ratio", min_ratio);
  w.summary("max_abs_ratio_minus_one", max_dev);
  if (s.expect.contains("conservation")) {
    const double tol = num(s.expect, "conservation", 1e-8);
    w.verdict("conservation", max_dev, tol, max_dev <= tol);
  }
}

CertificateKind certificate_kind(const Scenario& s) {
  if (s.task == Task::certify_lambda) return CertificateKind::zones_lambda;
  const std::string k = str(s.certificate, "kind", "zones-theta");
  if (k == "bounded-theta") return CertificateKind::bounded_theta;
  if (k == "integrable-xi") return CertificateKind::integrable_xi;
  if (k == "zones-theta") return CertificateKind::zones_theta;
  throw ValidationError("unknown certificate kind '" + k + "' for certify-gec");
}

// Distinct positive |xi| over a one-dimensional grid of n points.
std::vector<double> grid_xi_norms(int n) {
  std::vector<double> xs;
  for (int k = 1; k <= n / 2; ++k) xs.push_back(2.0 * std::sin(std::numbers::pi * k / n));
  return xs;
}

double log_sum_exp(const std::vector<double>& xs) {
  double peak = -kInf;
  for (double x : xs) peak = std::max(peak, x);
  if (!std::isfinite(peak)) return peak;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - peak);
  return peak + std::log(acc);
}

void run_boundedness(const Scenario& s, const RunOptions& opts, const CertificateReport& rep,
                     const InitialData& data, Writer& w) {
  if (s.data.dim != 1) throw ValidationError("energy boundedness runs in d = 1");
  const double n0 = rep.lambda.n0;
  const UValue u = data.gevrey ? u_functional(n0, data.gevrey->log_spectrum, s.profile)
                               : u_functional(n0, data.u0, data.u1, s.profile);
  w.summary("u_log_value", u.log_value);
  w.summary("u_shells", u.shells);
  w.verdict("u_finite", u.log_value, kInf, u.finite);

  const TorusGrid grid(1, s.solver.grid);
  const auto times = sample_schedule(s.solver.horizon, s.solver.per_decade);
  const EnergyTrace trace =
      simulate(s.profile, data.u0, data.u1, grid, times, solver_options(s), opts.threads);

  // The weight is 1 at xi = 0, where the mode energy is constant.
  std::vector<double> weighted;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double e = trace.density.front()[p];
    if (!(e > 0.0)) continue;
    const double xi = grid.point(p).xi_norm();
    const double lw = xi > 0.0 ? 2.0 * xi * theta_of_lambda_inverse(s.profile, n0 / xi) : 0.0;
    weighted.push_back(lw + std::log(e));
  }
  const double log_bound =
      rep.lambda.log_c_theory + log_sum_exp(weighted) - std::log(static_cast<double>(grid.size()));

  CsvTable table({"t", "energy", "log_energy", "log_bound"});
  double worst = -kInf;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double le = std::log(trace.total[i]);
    worst = std::max(worst, le - log_bound);
    table.row().add(times[i]).add(trace.total[i]).add(le).add(log_bound);
  }
  w.write("boundedness.csv", table);
  w.summary("log_energy_bound", log_bound);
  const double slack = num(s.certificate, "log_slack", 1e-8);
  w.verdict("energy_bound", worst, slack, worst <= slack);
}

void run_certify(const Scenario& s, const RunOptions& opts, Writer& w) {
  CertificateOptions o;
  o.kind = certificate_kind(s);
  o.horizon = s.solver.horizon;
  o.dim = s.data.dim;
  o.m = static_cast<int>(num(s.certificate, "m", 0));
  o.n_start = num(s.certificate, "n_start", o.n_start);
  o.n_cap = num(s.certificate, "n_cap", o.n_cap);
  o.hypothesis_horizon = num(s.certificate, "hypothesis_horizon", o.hypothesis_horizon);
  o.per_decade = s.solver.per_decade;
  o.solver = solver_options(s);
  o.log_slack = num(s.certificate, "log_slack", o.log_slack);
  o.threads = opts.threads;

  const bool bounded = s.task == Task::certify_lambda && s.data.kind != DataKind::none;
  const std::string modes = str(s.certificate, "modes", "32");
  std::vector<double> xis;
  if (modes == "grid") {
    if (s.data.dim != 1) throw ValidationError("modes = grid needs d = 1");
    xis = grid_xi_norms(s.solver.grid);
  } else {
    const double count = num(s.certificate, "modes", 32);
    if (count < 1 || count != std::floor(count)) throw ValidationError("[certificate] modes must be a count or grid");
    xis = certificate_xi_samples(static_cast<int>(count));
  }
  if (bounded && modes != "grid") throw ValidationError("energy boundedness needs [certificate] modes = grid");

  CertificateReport rep;
  try {
    rep = certify(s.profile, xis, o);
  } catch (const HypothesisFailure& e) {
    w.summary("hypotheses_hold", 0);
    w.verdict("hypotheses", 0.0, 1.0, false);
    fmt::print(stderr, "hypotheses: {}\n", e.what());
    return;
  }
  w.write("certificate.csv", rep.to_csv());

  CsvTable env({"xi_norm", "t", "log_lower", "log_upper", "log_measured"});
  double worst = -kInf;
  for (const auto& m : rep.modes) {
    worst = std::max(worst, m.worst_margin);
    for (std::size_t i = 0; i < m.envelope.times.size(); ++i) {
      env.row()
          .add(m.envelope.xi_norm)
          .add(m.envelope.times[i])
          .add(m.envelope.log_lower[i])
          .add(m.envelope.log_upper[i])
          .add(m.log_measured[i]);
    }
  }
  w.write("envelopes.csv", env);

  const CertificateSetup& st = rep.setup;
  w.summary("m", st.m);
  w.summary("c1", st.c1);
  w.summary("zone_n", st.partition.n);
  w.summary("zone_t0", st.partition.t0);
  w.summary("escalations", st.escalations);
  w.summary("c_rm", st.c_rm);
  w.summary("c_rm_holds", st.c_rm_holds ? 1 : 0);
  w.summary("max_radicand_ratio", st.max_radicand_ratio);
  w.summary("max_delta2", st.max_delta2);
  w.summary("max_correction_ratio", st.max_correction_ratio);
  w.summary("max_eigen_residual", st.max_eigen_residual);

  w.verdict("envelope", worst, o.log_slack, rep.pass);
  if (o.kind == CertificateKind::zones_theta || o.kind == CertificateKind::zones_lambda) {
    const double tol = num(s.expect, "eigen_residual", 1e-10);
    w.verdict("eigen_residual", st.max_eigen_residual, tol, st.max_eigen_residual <= tol);
  }
  if (o.kind == CertificateKind::zones_lambda) {
    w.summary("lambda_n0", rep.lambda.n0);
    w.summary("log_c_theory", rep.lambda.log_c_theory);
    w.summary("log_c_fit", rep.lambda.log_c_fit);
    w.verdict("lambda_constant", rep.lambda.log_c_fit, rep.lambda.log_c_theory,
              rep.lambda.log_c_fit <= rep.lambda.log_c_theory);
  }
  if (bounded) run_boundedness(s, opts, rep, build_data(s.data), w);
}

LogConvexSequence make_sequence(const Section& g) {
  const std::string kind = str(g, "sequence");
  if (kind == "factorial_power") return LogConvexSequence::factorial_power(num(g, "nu", 1.0));
  if (kind == "exponential") return LogConvexSequence::exponential(num(g, "b", 1.0), num(g, "sigma", 2.0));
  throw ValidationError("unknown sequence '" + kind + "'");
}

void run_gevrey(const Scenario& s, Writer& w) {
  const LogConvexSequence seq = make_sequence(s.gevrey);
  std::vector<double> n_grid;
  const std::string list = str(s.gevrey, "n_grid", "1,2,4,8,16,32,64,128,256,512,1024");
  for (const auto& item : split(list)) {
    Section one{{"n", item}};
    n_grid.push_back(num(one, "n", 0.0));
  }
  const double threshold = num(s.gevrey, "threshold", 10.0);
  const GateResult gate = theorem3_gate(n_grid, seq, s.profile, threshold, s.data.dim);
  w.write("gate.csv", gate.to_csv());
  w.summary("slope", gate.slope);
  w.summary("n0", gate.n0);
  if (s.expect.contains("gate")) {
    const std::string want = str(s.expect, "gate");
    w.verdict("gate=" + want, gate.slope, threshold, to_string(gate.verdict) == want);
  }

  if (s.data.kind != DataKind::gevrey36 && s.data.kind != DataKind::gevrey37) return;
  const InitialData data = build_data(s.data);
  const GevreyData& g = *data.gevrey;
  w.write("gevrey_data.csv", gevrey_data_csv(g));
  w.summary("data_entries", static_cast<double>(g.field.size()));

  const int order = static_cast<int>(num(s.gevrey, "moment_order", 6));
  const MomentResult mom = moment_check(g.field, order);
  w.verdict("moments", std::abs(mom.moment), 1e-9 * mom.scale, mom.pass);

  const double rho = num(s.gevrey, "rho", 1.0);
  const DecayResult decay = decay_check(g.field, seq, rho);
  w.summary("decay_log_constant", decay.log_constant);
  w.verdict("coefficient_decay", decay.log_constant, kInf, decay.pass);

  const DecayBoundCheck fb = fourier_decay_bound(g.field, seq, rho, TorusGrid(1, s.solver.grid));
  w.summary("fourier_bound_log_constant", fb.log_constant);
  w.verdict("fourier_decay_bound", fb.log_constant, kInf, fb.holds);
}

bool matches(Hypothesis h, const std::string& name) {
  auto norm = [](std::string x) {
    std::erase(x, '*');
    for (auto& ch : x) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return x;
  };
  return norm(to_string(h)) == norm(name);
}

void run_hypotheses(const Scenario& s, Writer& w) {
  const double horizon = num(s.hypotheses, "horizon", 1e4);
  const HypothesisReport rep = verify_hypotheses(s.profile, VerificationGrid::standard(horizon), horizon);
  CsvTable t({"hypothesis", "evaluated", "holds", "fitted_constant", "grid_supremum", "worst_t", "note"});
  for (const auto& r : rep.records) {
    t.row()
        .add(to_string(r.which))
        .add(r.evaluated)
        .add(r.holds)
        .add(r.fitted_constant)
        .add(r.grid_supremum)
        .add(r.worst_t)
        .add(sanitize(r.note));
  }
  w.write("hypotheses.csv", t);
  for (std::size_t k = 1; k < rep.derivative_constants.size(); ++k) {
    w.summary(fmt::format("C_{}", k), rep.derivative_constants[k]);
  }
  w.summary("case_i", rep.case_i ? 1 : 0);
  w.summary("case_ii", rep.case_ii ? 1 : 0);
  w.summary("case_iii", rep.case_iii ? 1 : 0);
  w.summary("lambda_case", rep.lambda_case ? 1 : 0);

  auto expect = [&](const std::string& key, bool want) {
    for (const auto& name : split(str(s.expect, key))) {
      const auto it = std::find_if(rep.records.begin(), rep.records.end(),
                                   [&](const HypothesisRecord& r) { return matches(r.which, name); });
      if (it == rep.records.end()) throw ValidationError("unknown hypothesis '" + name + "'");
      const bool ok = it->evaluated && it->holds == want;
      w.verdict(fmt::format("{} {}", to_string(it->which), want ? "holds" : "fails"), it->grid_supremum,
                it->fitted_constant, ok);
    }
  };
  expect("hold", true);
  expect("fail", false);
}

}  // namespace

bool RunReport::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

RunReport run(const Scenario& s, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Writer w(s, opts);
  switch (s.task) {
    case Task::simulate: run_simulate(s, opts, w); break;
    case Task::certify_gec:
    case Task::certify_lambda: run_certify(s, opts, w); break;
    case Task::gevrey_gate: run_gevrey(s, w); break;
    case Task::hypotheses: run_hypotheses(s, w); break;
  }
  return w.finish(start);
}

RunReport verify(const Scenario& s, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Writer w(s, opts, "-verify");
  run_hypotheses(s, w);
  return w.finish(start);
}

int classify_current_exception(std::string& message) {
  try {
    throw;
  } catch (const ConfigError& e) {
    message = std::string("config error: ") + e.what();
    return exit_config_error;
  } catch (const ValidationError& e) {
    message = std::string("invalid scenario: ") + e.what();
    return exit_validation_error;
  } catch (const std::invalid_argument& e) {
    message = std::string("invalid scenario: ") + e.what();
    return exit_validation_error;
  } catch (const NumericalError& e) {
    message = fmt::format("numerical failure at t = {}: {}", e.time(), e.what());
    return exit_numerical_error;
  } catch (const std::exception& e) {
    message = std::string("failure: ") + e.what();
    return exit_numerical_error;
  }
}

}  // namespace sdwave::experiments
