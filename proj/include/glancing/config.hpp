#pragma once

#include "glancing/field.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace glancing {

// One axis of the evaluation grid: "lo:hi:step", "lo:hi" (step resolved from
// h) or a single value. Unset axes fall back to per-command defaults.
struct AxisSpec {
  double lo = 0, hi = 0, step = 0;
  bool set = false;
  bool auto_step() const { return set && step <= 0 && hi > lo; }
};

struct RunConfig {
  std::string command;
  WaveParams params;

  struct {
    AxisSpec t, x, y, y2;
  } grid;

  struct {
    int K_max = 0;        // 0: window cutoff
    int N_max = -1;       // compare: -1 selects the adaptive N range
    int N_lo = 1, N_hi = 0; // green/images: fixed range when N_lo <= N_hi
    double tol = 1e-10;   // θ-rule aliasing budget
    double stop_ratio = 1e-4;
    int N_cap = 4000;
  } truncation;

  std::string method = "spectral"; // green: spectral | images

  struct {
    int K = 50;
  } airy;

  struct {
    int N_lo = 1, N_hi = 5;
    double omega_angle = 0;
    bool check_range = true;
  } caustics;

  struct {
    std::string mode = "free"; // free | caustics | synthetic
    double t_lo = 0.05, t_hi = 0.4;
    int samples = 8;
    std::string method = "spectral";
    int N_lo = 1, N_hi = 6;
    double synthetic_exponent = 0.5;
    double synthetic_amplitude = 1.0;
  } decay;

  struct {
    std::string metric = "test_metric";
    std::vector<double> omegas{1.0, -1.0};
    double Y_max = 0.3;
    int cells = 64;
    int samples = 32;
    double gamma_scale = 1.0;
  } phase;

  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int workers = 0;

  // Grid with every auto step resolved to h/8. Axes that were not given
  // default to the single sample t = 0.5, x = a, y = 0.
  Grid resolved_grid() const;

  // Every field after resolution as ordered (section.key, value) pairs; the
  // text form round-trips through parse_config.
  std::vector<std::pair<std::string, std::string>> echo() const;
  std::string to_ini() const;
};

// Numbers accept decimal, "p/q" and "b^e" forms ("2^-8").
double parse_real(const std::string &s);
// "1 0; 0 2" → row-major entries.
std::vector<double> parse_rows(const std::string &s);
AxisSpec parse_axis(const std::string &s);

// INI text with sections [run] [params] [grid] [truncation] [airy]
// [caustics] [decay] [phase] [output]. Unknown keys are configuration errors.
RunConfig parse_config(const std::string &text);
RunConfig load_config(const std::string &path);

} // namespace glancing
