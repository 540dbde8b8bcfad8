#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dnls/background.hpp"
#include "dnls/dynamics.hpp"
#include "dnls/random.hpp"
#include "dnls/wellposedness.hpp"

namespace dnls {

enum class Experiment {
  soliton_check,
  conservation,
  plane_wave,
  gauge_check,
  hypothesis_audit,
  coercivity,
  difference,
  convergence,
};

std::string to_string(Experiment e);
const std::vector<std::string>& experiment_names();

enum class BackgroundChoice { zero, constant, dark_soliton };
enum class DatumChoice { zero, gaussian, plane_wave, random_band };

/// One experiment run. Field defaults depend on the experiment (see
/// experiment presets in config.cpp and the README table).
struct ExperimentConfig {
  Experiment experiment = Experiment::soliton_check;
  std::uint64_t rng_seed = 1;
  std::string output_name;
  bool checkpoint = false;

  std::size_t n_points = 1024;
  double box_length = 40.0;
  double center = 0.0;

  SimConfig sim{};

  BackgroundChoice background = BackgroundChoice::zero;
  cplx background_constant = 0.0;
  double amplitude = 1.0;

  DatumChoice datum = DatumChoice::gaussian;
  double datum_amplitude = 1.0;
  double datum_width = 1.0;
  double datum_wavenumber = 0.0;
  double datum_cutoff = 4.0;
  /// H^s norm of random_band data (<= 0: unnormalised).
  double datum_norm = 0.0;

  double s = 0.9;
  double epsilon = 0.01;
  double theta = 0.3;
  double delta = 0.05;
  std::optional<int> n0_exponent;  // nullopt: from the proposition formula
  std::optional<double> c1, c2, c3;  // nullopt: with_default_coefficients
  double similar = 2.0;
  double much_greater = 8.0;
  int trials = 100;
  double pair_norm = 0.2;
  int doublings = 3;
  std::vector<double> coefficient_scales{1.0};

  std::optional<double> gauge_delta;  // nullopt: -lambda/2

  DifferenceNorm difference_norm = DifferenceNorm::h_s_minus_1;
  std::vector<double> sweep_amplitudes{1e-2, 1e-3, 1e-4};

  std::vector<double> dt_list{4e-3, 2e-3, 1e-3};
  double reference_dt = 1.25e-4;
};

/// Parses the key = value text format. Unknown keys, malformed values,
/// duplicates and range violations are all collected into one ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Range checks that need no numerics. parse_config already calls this.
std::vector<std::string> config_violations(const ExperimentConfig& cfg);

/// Canonical key = value echo of every field, in schema order.
std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg);

/// Objects built from a config.
GridPtr build_grid(const ExperimentConfig& cfg);
Background build_background(const ExperimentConfig& cfg);
ComplexField build_datum(const ExperimentConfig& cfg, const GridPtr& grid, CounterRng& rng);
ModifiedEnergyConfig build_energy_config(const ExperimentConfig& cfg);

/// Builds grid, background and datum and checks the CFL bound and the
/// modified-energy ranges. Throws ConfigError.
void preflight(const ExperimentConfig& cfg);

}  // namespace dnls
