#include "glancing/commands.hpp"

#include "glancing/caustics.hpp"
#include "glancing/dispersion.hpp"
#include "glancing/errors.hpp"
#include "glancing/glancing_phase.hpp"
#include "glancing/images.hpp"
#include "glancing/parallel.hpp"
#include "glancing/spectral.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

namespace glancing {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json config_json(const RunConfig &cfg) {
  json j = json::object();
  for (const auto &[k, v] : cfg.echo()) {
    const auto dot = k.find('.');
    j[k.substr(0, dot)][k.substr(dot + 1)] = v;
  }
  return j;
}

json envelope(const RunConfig &cfg, const char *kind) {
  json j;
  j["kind"] = kind;
  j["build_id"] = build_id();
  j["seed"] = cfg.seed;
  j["config"] = config_json(cfg);
  return j;
}

std::vector<std::string> csv_comments(const RunConfig &cfg) {
  std::vector<std::string> c{std::string("build_id ") + build_id()};
  for (const auto &[k, v] : cfg.echo())
    c.push_back(k + " = " + v);
  return c;
}

// NaN and ±inf are not JSON numbers.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json nums(const std::vector<double> &v) {
  json a = json::array();
  for (double x : v)
    a.push_back(num(x));
  return a;
}

fs::path prepare_out(const RunConfig &cfg) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw ConfigError("output directory '" + cfg.out_dir + "' is not writable");
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f)
      throw ConfigError("output directory '" + cfg.out_dir + "' is not writable");
  }
  fs::remove(probe, ec);
  return dir;
}

void write_text(const fs::path &p, const std::string &s) {
  std::ofstream f(p, std::ios::binary);
  if (!f)
    throw ConfigError("cannot write '" + p.string() + "'");
  f << s;
}

void write_json(const fs::path &p, const json &j) { write_text(p, j.dump(1) + "\n"); }

ImageOptions image_options(const RunConfig &cfg) {
  ImageOptions o;
  o.theta.tol = cfg.truncation.tol;
  o.stop_ratio = cfg.truncation.stop_ratio;
  o.N_cap = cfg.truncation.N_cap;
  return o;
}

json truncation_json(const Truncation &t) {
  json j;
  j["K_max"] = t.K_max;
  j["theta_nodes"] = t.theta_nodes;
  j["omega_nodes"] = t.omega_nodes;
  j["N_min"] = t.N_min;
  j["N_max"] = t.N_max;
  j["tail_estimate"] = num(t.tail_estimate);
  j["tolerance"] = num(t.tolerance);
  return j;
}

template <class F> int guarded(std::ostream &log, F &&body) {
  try {
    body();
    return 0;
  } catch (const Error &e) {
    log << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception &e) {
    log << "internal error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::internal);
  }
}

void apply_workers(const RunConfig &cfg) { set_workers(cfg.workers); }

} // namespace

int cmd_airy_table(const RunConfig &cfg, std::ostream &log) {
  return guarded(log, [&] {
    if (cfg.airy.K < 1)
      throw ConfigError("airy-table: K must be >= 1");
    const fs::path dir = prepare_out(cfg);
    const AiryZeroTable t = airy_zeros(cfg.airy.K);
    json j = envelope(cfg, "airy_table");
    j["table"] = json::parse(t.to_json());
    write_json(dir / "airy_table.json", j);
    log << "airy-table: K=" << t.K << " omega_K=" << t.zeros.back() << "\n";
  });
}

int cmd_green(const RunConfig &cfg, std::ostream &log) {
  return guarded(log, [&] {
    apply_workers(cfg);
    cfg.params.validate();
    const Grid g = cfg.resolved_grid();
    const fs::path dir = prepare_out(cfg);
    ComplexField f;
    json j = envelope(cfg, "green");
    if (cfg.method == "spectral") {
      ThetaOptions o;
      o.tol = cfg.truncation.tol;
      f = spectral_green(cfg.params, g, cfg.truncation.K_max, o);
    } else {
      ImageSum s = image_green(cfg.params, g, image_options(cfg),
                               cfg.truncation.N_lo, cfg.truncation.N_hi);
      json terms = json::array();
      for (const auto &t : s.terms)
        terms.push_back({{"N", t.N}, {"sup", num(t.sup)}, {"l2", num(t.l2)}});
      j["terms"] = terms;
      j["stop_threshold"] = num(s.stop_threshold);
      f = std::move(s.field);
    }
    std::ofstream csv(dir / "green.csv", std::ios::binary);
    f.write_csv(csv, csv_comments(cfg));
    j["method"] = cfg.method;
    j["points"] = f.values.size();
    j["max_abs"] = num(f.max_abs());
    j["truncation"] = truncation_json(f.truncation);
    j["csv"] = "green.csv";
    write_json(dir / "green.json", j);
    log << "green: " << f.values.size() << " points, max |u| = " << f.max_abs()
        << "\n";
  });
}

int cmd_compare(const RunConfig &cfg, std::ostream &log) {
  return guarded(log, [&] {
    apply_workers(cfg);
    cfg.params.validate();
    const Grid g = cfg.resolved_grid();
    const fs::path dir = prepare_out(cfg);
    const EquivalenceReport r =
        equivalence_report(cfg.params, g, cfg.truncation.N_max,
                           cfg.truncation.K_max, image_options(cfg));
    json j = envelope(cfg, "compare");
    j["rel_linf"] = num(r.rel_linf);
    j["spectral_max"] = num(r.spectral_max);
    j["K_max"] = r.K_max;
    j["N_min"] = r.N_min;
    j["N_max"] = r.N_max;
    j["theta_nodes"] = r.theta_nodes;
    j["omega_nodes"] = r.omega_nodes;
    write_json(dir / "compare.json", j);
    log << "discrepancy " << r.rel_linf << " (N " << r.N_min << ".." << r.N_max
        << ", K " << r.K_max << ")\n";
  });
}

int cmd_caustics(const RunConfig &cfg, std::ostream &log) {
  return guarded(log, [&] {
    cfg.params.validate();
    if (cfg.caustics.N_lo < 1 || cfg.caustics.N_hi < cfg.caustics.N_lo)
      throw ConfigError("caustics: need 1 <= N_lo <= N_hi");
    const fs::path dir = prepare_out(cfg);
    json events = json::array();
    for (int N = cfg.caustics.N_lo; N <= cfg.caustics.N_hi; ++N) {
      const CausticEvent e = caustic_locate(cfg.params, N, cfg.caustics.omega_angle,
                                            cfg.caustics.check_range);
      const double ref = 4 * N * std::sqrt(cfg.params.a);
      events.push_back({{"N", e.N},
                        {"t_N", num(e.t_N)},
                        {"x_N", num(e.x_N)},
                        {"y_N", num(e.y_N)},
                        {"t_over_4N_sqrt_a", num(e.t_N / ref)},
                        {"predicted_amp", num(e.predicted_amp)},
                        {"hessian_residual", num(e.hessian_residual)},
                        {"kernel_cubic", num(e.kernel_cubic)},
                        {"kernel_quartic", num(e.kernel_quartic)},
                        {"newton_iterations", e.newton_iterations},
                        {"b_dropped", e.b_dropped}});
      log << "N=" << N << " t_N=" << e.t_N << " (4N sqrt a = " << ref
          << ") det=" << e.hessian_residual << "\n";
    }
    json j = envelope(cfg, "caustics");
    j["events"] = events;
    write_json(dir / "caustics.json", j);
  });
}

int cmd_decay(const RunConfig &cfg, std::ostream &log) {
  return guarded(log, [&] {
    apply_workers(cfg);
    cfg.params.validate();
    const fs::path dir = prepare_out(cfg);
    const auto &dc = cfg.decay;
    const ScanMethod method =
        dc.method == "images" ? ScanMethod::images : ScanMethod::spectral;
    std::vector<double> ts;
    for (int i = 0; i < dc.samples; ++i)
      ts.push_back(dc.t_lo * std::pow(dc.t_hi / dc.t_lo,
                                      static_cast<double>(i) / (dc.samples - 1)));

    DecayFit scan;
    FitWindow window = FitWindow::all;
    if (dc.mode == "synthetic") {
      // Exact power law A (h/t)^e; exercises the fitting path only.
      scan.params = cfg.params;
      for (double t : ts) {
        scan.t_samples.push_back(t);
        scan.sup_values.push_back(dc.synthetic_amplitude *
                                  std::pow(cfg.params.h / t, dc.synthetic_exponent));
        scan.x_arg.push_back(cfg.params.a);
        scan.y_arg.push_back(t);
        scan.caustic_N.push_back(0);
      }
    } else if (dc.mode == "caustics") {
      scan = caustic_scan(cfg.params, dc.N_lo, dc.N_hi, ScanBox{}, method);
      window = FitWindow::at_caustics;
    } else {
      scan = sup_scan(cfg.params, ts, ScanBox{}, method);
    }
    const DecayFit fit = fit_decay_exponent(scan, window);

    json j = envelope(cfg, "decay");
    j["mode"] = dc.mode;
    j["window"] = window == FitWindow::all ? "all" : "at_caustics";
    j["fitted_exponent"] = num(fit.fitted_exponent);
    j["intercept"] = num(fit.intercept);
    j["fit_residual"] = num(fit.fit_residual);
    json regimes = json::array();
    for (Regime r : fit.regimes)
      regimes.push_back(to_string(r));
    j["regimes"] = regimes;
    j["first_reflection_c"] = num(first_reflection_constant(scan));
    if (dc.mode == "caustics") {
      const EnvelopeFit e = fit_envelopes(scan);
      j["envelope"] = {{"C_upper", num(e.C_upper)},
                       {"c_lower", num(e.c_lower)},
                       {"ratio", num(e.ratio)}};
    }
    j["t"] = nums(fit.t_samples);
    j["sup"] = nums(fit.sup_values);
    j["x_arg"] = nums(fit.x_arg);
    j["y_arg"] = nums(fit.y_arg);
    j["caustic_N"] = fit.caustic_N;
    j["warnings"] = fit.warnings;
    write_json(dir / "decay.json", j);

    std::ofstream csv(dir / "decay.csv", std::ios::binary);
    for (const auto &c : csv_comments(cfg))
      csv << "# " << c << "\n";
    csv << "t,sup,x,y,N\n";
    char buf[160];
    for (std::size_t i = 0; i < fit.t_samples.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n",
                    fit.t_samples[i], fit.sup_values[i], fit.x_arg[i],
                    fit.y_arg[i], fit.caustic_N[i]);
      csv << buf;
    }
    log << "exponent " << fit.fitted_exponent << " (rms " << fit.fit_residual
        << ", " << fit.t_samples.size() << " samples)\n";
  });
}

int cmd_phase(const RunConfig &cfg, std::ostream &log) {
  return guarded(log, [&] {
    const MetricJet m = metric_by_name(cfg.phase.metric);
    m.validate();
    const fs::path dir = prepare_out(cfg);
    json j = envelope(cfg, "phase");
    j["metric"] = m.name;
    json jets = json::array();
    for (double w : cfg.phase.omegas) {
      const PhaseJet jet = build_phase_jet(m, w, cfg.phase.Y_max, cfg.phase.cells);
      const ResidualReport r =
          verify_generating_function(m, jet, default_eps_grid(), cfg.phase.samples,
                                     cfg.seed, cfg.phase.gamma_scale);
      auto taylor = [](const Taylor4 &t) { return json(t); };
      double max_jet = 0;
      for (const auto *v : {&jet.B0, &jet.B2, &jet.ell, &jet.gamma, &jet.beta})
        for (double x : *v)
          max_jet = std::max(max_jet, std::abs(x));
      json e;
      e["omega"] = w;
      e["Y"] = nums(jet.Y);
      e["B0"] = nums(jet.B0);
      e["B2"] = nums(jet.B2);
      e["ell"] = nums(jet.ell);
      e["gamma"] = nums(jet.gamma);
      e["beta"] = nums(jet.beta);
      e["max_abs_jet"] = num(max_jet);
      e["taylor"] = {{"B0", taylor(jet.B0_taylor)},
                     {"B2", taylor(jet.B2_taylor)},
                     {"ell", taylor(jet.ell_taylor)},
                     {"gamma", taylor(jet.gamma_taylor)}};
      e["eikonal_residual"] = num(jet.eikonal_residual);
      e["transport_residual"] = num(jet.transport_residual);
      e["ell_identity_residual"] = num(jet.ell_identity_residual);
      e["bracket"] = num(jet.bracket);
      e["gamma0"] = num(jet.gamma0);
      e["gamma_over_bracket"] = num(jet.gamma_over_bracket);
      // γ(0)R1²/{R0,R1} implied by each of three candidate constants.
      e["gamma_ratio_candidates"] = {{"expansion", 1.0 / 6},
                                     {"beta_relation", 2.0 / 3},
                                     {"gamma_formula", 1.0 / 12}};
      const std::string status = r.exact ? "exact" : (r.passed ? "pass" : "fail");
      e["residual"] = {{"eps", nums(r.eps)},
                       {"resid", nums(r.resid)},
                       {"slope", r.exact ? json(nullptr) : num(r.slope)},
                       {"max_resid", num(r.max_resid)},
                       {"status", status},
                       {"worst_slope", num(r.worst_slope)}};
      jets.push_back(e);
      log << m.name << " omega=" << w << ": residual "
          << (r.exact ? std::string("exact") : "slope " + std::to_string(r.slope))
          << ", max jet " << max_jet << "\n";
    }
    j["jets"] = jets;
    write_json(dir / "phase.json", j);
  });
}

int run_command(const RunConfig &cfg, std::ostream &log) {
  const std::string &c = cfg.command;
  if (c == "airy-table")
    return cmd_airy_table(cfg, log);
  if (c == "green")
    return cmd_green(cfg, log);
  if (c == "compare")
    return cmd_compare(cfg, log);
  if (c == "caustics")
    return cmd_caustics(cfg, log);
  if (c == "decay")
    return cmd_decay(cfg, log);
  if (c == "phase")
    return cmd_phase(cfg, log);
  log << "error: unknown command '" << c << "'\n";
  return static_cast<int>(ErrorKind::config);
}

} // namespace glancing
