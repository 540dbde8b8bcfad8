#include "dnls/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dnls/errors.hpp"
#include "dnls/functionals.hpp"

namespace dnls {

namespace {

const std::vector<std::pair<Experiment, std::string>>& experiment_table() {
  static const std::vector<std::pair<Experiment, std::string>> t{
      {Experiment::soliton_check, "soliton_check"},
      {Experiment::conservation, "conservation"},
      {Experiment::plane_wave, "plane_wave"},
      {Experiment::gauge_check, "gauge_check"},
      {Experiment::hypothesis_audit, "hypothesis_audit"},
      {Experiment::coercivity, "coercivity"},
      {Experiment::difference, "difference"},
      {Experiment::convergence, "convergence"},
  };
  return t;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& v) {
  if (v.empty()) throw std::invalid_argument("expected a real number, got an empty value");
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || !std::isfinite(x)) {
    throw std::invalid_argument("expected a real number, got '" + v + "'");
  }
  return x;
}

long long parse_int(const std::string& v) {
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  }
  return x;
}

bool parse_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw std::invalid_argument("expected true or false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    throw std::invalid_argument("expected a list [a, b, ...], got '" + v + "'");
  }
  std::vector<double> out;
  const std::string body = trim(v.substr(1, v.size() - 2));
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item)));
  return out;
}

std::string show_list(const std::vector<double>& xs) {
  std::string s = "[";
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? ", " : "") + fmt(xs[k]);
  return s + "]";
}

template <class E>
E parse_enum(const std::string& v, const std::vector<std::pair<E, std::string>>& names) {
  std::string valid;
  for (const auto& [e, n] : names) {
    if (n == v) return e;
    valid += (valid.empty() ? "" : ", ") + n;
  }
  throw std::invalid_argument("unknown value '" + v + "'; valid values: " + valid);
}

template <class E>
std::string show_enum(E e, const std::vector<std::pair<E, std::string>>& names) {
  for (const auto& [k, n] : names) {
    if (k == e) return n;
  }
  return "?";
}

const std::vector<std::pair<BackgroundChoice, std::string>> kBackgrounds{
    {BackgroundChoice::zero, "zero"},
    {BackgroundChoice::constant, "constant"},
    {BackgroundChoice::dark_soliton, "dark_soliton"}};
const std::vector<std::pair<DatumChoice, std::string>> kData{
    {DatumChoice::zero, "zero"},
    {DatumChoice::gaussian, "gaussian"},
    {DatumChoice::plane_wave, "plane_wave"},
    {DatumChoice::random_band, "random_band"}};
const std::vector<std::pair<DifferenceNorm, std::string>> kNorms{
    {DifferenceNorm::h_s_minus_1, "h_s_minus_1"},
    {DifferenceNorm::h_s_minus_half, "h_s_minus_half"},
    {DifferenceNorm::theta_weighted, "theta_weighted"}};

struct Entry {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> show;
};

#define REAL(name, field)                                                              \
  Entry { name, [](ExperimentConfig& c, const std::string& v) { c.field = parse_real(v); }, \
          [](const ExperimentConfig& c) { return fmt(c.field); } }
#define FLAG(name, field)                                                              \
  Entry { name, [](ExperimentConfig& c, const std::string& v) { c.field = parse_bool(v); }, \
          [](const ExperimentConfig& c) { return std::string(c.field ? "true" : "false"); } }
#define OPT_REAL(name, field)                                                          \
  Entry { name,                                                                        \
          [](ExperimentConfig& c, const std::string& v) {                              \
            if (v == "auto") c.field.reset(); else c.field = parse_real(v);            \
          },                                                                           \
          [](const ExperimentConfig& c) { return c.field ? fmt(*c.field) : std::string("auto"); } }
#define LIST(name, field)                                                              \
  Entry { name, [](ExperimentConfig& c, const std::string& v) { c.field = parse_list(v); }, \
          [](const ExperimentConfig& c) { return show_list(c.field); } }

const std::vector<Entry>& schema() {
  static const std::vector<Entry> s{
      {"experiment", [](ExperimentConfig&, const std::string&) {},
       [](const ExperimentConfig& c) { return to_string(c.experiment); }},
      {"rng_seed",
       [](ExperimentConfig& c, const std::string& v) {
         const long long x = parse_int(v);
         if (x < 0) throw std::invalid_argument("must be a nonnegative integer");
         c.rng_seed = static_cast<std::uint64_t>(x);
       },
       [](const ExperimentConfig& c) { return std::to_string(c.rng_seed); }},
      {"output_name", [](ExperimentConfig& c, const std::string& v) { c.output_name = v; },
       [](const ExperimentConfig& c) { return c.output_name; }},
      FLAG("checkpoint", checkpoint),
      {"n_points",
       [](ExperimentConfig& c, const std::string& v) {
         const long long x = parse_int(v);
         if (x <= 0) throw std::invalid_argument("n_points must be a power of two >= 8");
         c.n_points = static_cast<std::size_t>(x);
       },
       [](const ExperimentConfig& c) { return std::to_string(c.n_points); }},
      REAL("box_length", box_length),
      REAL("center", center),
      REAL("lambda", sim.lambda),
      REAL("mu", sim.mu),
      REAL("dt", sim.dt),
      REAL("t_end", sim.t_end),
      FLAG("dealias", sim.dealias),
      REAL("cfl_safety", sim.cfl_safety),
      {"record_every",
       [](ExperimentConfig& c, const std::string& v) { c.sim.record_every = static_cast<int>(parse_int(v)); },
       [](const ExperimentConfig& c) { return std::to_string(c.sim.record_every); }},
      REAL("amp_bound", sim.amp_bound),
      {"background",
       [](ExperimentConfig& c, const std::string& v) { c.background = parse_enum(v, kBackgrounds); },
       [](const ExperimentConfig& c) { return show_enum(c.background, kBackgrounds); }},
      {"background_constant",
       [](ExperimentConfig& c, const std::string& v) {
         const auto xs = parse_list(v);
         if (xs.size() != 2) throw std::invalid_argument("expected [re, im]");
         c.background_constant = cplx(xs[0], xs[1]);
       },
       [](const ExperimentConfig& c) {
         return show_list({c.background_constant.real(), c.background_constant.imag()});
       }},
      REAL("amplitude", amplitude),
      {"datum", [](ExperimentConfig& c, const std::string& v) { c.datum = parse_enum(v, kData); },
       [](const ExperimentConfig& c) { return show_enum(c.datum, kData); }},
      REAL("datum_amplitude", datum_amplitude),
      REAL("datum_width", datum_width),
      REAL("datum_wavenumber", datum_wavenumber),
      REAL("datum_cutoff", datum_cutoff),
      REAL("datum_norm", datum_norm),
      REAL("s", s),
      REAL("epsilon", epsilon),
      REAL("theta", theta),
      REAL("delta", delta),
      {"n0",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "auto") {
           c.n0_exponent.reset();
           return;
         }
         const double x = parse_real(v);
         try {
           c.n0_exponent = Dyadic::from_value(x).exponent;
         } catch (const PreconditionError&) {
           throw std::invalid_argument("n0 must be auto or a power of two, got '" + v + "'");
         }
       },
       [](const ExperimentConfig& c) {
         return c.n0_exponent ? fmt(Dyadic{*c.n0_exponent}.value()) : std::string("auto");
       }},
      OPT_REAL("c1", c1),
      OPT_REAL("c2", c2),
      OPT_REAL("c3", c3),
      REAL("similar", similar),
      REAL("much_greater", much_greater),
      {"trials", [](ExperimentConfig& c, const std::string& v) { c.trials = static_cast<int>(parse_int(v)); },
       [](const ExperimentConfig& c) { return std::to_string(c.trials); }},
      REAL("pair_norm", pair_norm),
      {"doublings",
       [](ExperimentConfig& c, const std::string& v) { c.doublings = static_cast<int>(parse_int(v)); },
       [](const ExperimentConfig& c) { return std::to_string(c.doublings); }},
      LIST("coefficient_scales", coefficient_scales),
      OPT_REAL("gauge_delta", gauge_delta),
      {"difference_norm",
       [](ExperimentConfig& c, const std::string& v) { c.difference_norm = parse_enum(v, kNorms); },
       [](const ExperimentConfig& c) { return show_enum(c.difference_norm, kNorms); }},
      LIST("sweep_amplitudes", sweep_amplitudes),
      LIST("dt_list", dt_list),
      REAL("reference_dt", reference_dt),
  };
  return s;
}

#undef REAL
#undef FLAG
#undef OPT_REAL
#undef LIST

// Defaults for each experiment: the settings the acceptance runs use.
ExperimentConfig preset(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.output_name = to_string(e);
  c.sim.lambda = 2.0;
  c.sim.mu = 1.0;
  switch (e) {
    case Experiment::soliton_check:
      c.n_points = 4096;
      c.box_length = 80.0;
      c.sim.dt = 2.5e-4;
      c.sim.record_every = 40;
      c.background = BackgroundChoice::dark_soliton;
      c.datum = DatumChoice::zero;
      break;
    case Experiment::conservation:
      c.n_points = 1024;
      c.box_length = 50.0;
      c.sim.record_every = 100;
      break;
    case Experiment::plane_wave:
      c.n_points = 64;
      c.box_length = 2.0 * std::numbers::pi;
      c.sim.record_every = 100;
      c.datum = DatumChoice::plane_wave;
      c.datum_amplitude = 0.5;
      c.datum_wavenumber = 3.0;
      break;
    case Experiment::gauge_check:
      c.sim.dt = 1e-4;
      c.sim.t_end = 0.02;
      c.sim.record_every = 20;
      c.sim.dealias = false;
      c.datum_amplitude = 0.5;
      c.datum_wavenumber = 1.0;
      break;
    case Experiment::hypothesis_audit:
      c.n_points = 4096;
      c.box_length = 80.0;
      c.background = BackgroundChoice::dark_soliton;
      c.datum = DatumChoice::zero;
      c.s = 0.8;
      break;
    case Experiment::coercivity:
      c.n_points = 1024;
      c.box_length = 80.0;
      c.background = BackgroundChoice::dark_soliton;
      c.amplitude = 0.3;
      c.datum = DatumChoice::zero;
      c.coefficient_scales = {0.5, 1.0, 2.0};
      break;
    case Experiment::difference:
      c.n_points = 512;
      c.sim.record_every = 50;
      c.datum = DatumChoice::random_band;
      c.datum_norm = 0.5;
      break;
    case Experiment::convergence:
      c.n_points = 256;
      c.sim.t_end = 0.5;
      c.datum_amplitude = 0.5;
      c.datum_wavenumber = 1.0;
      break;
  }
  return c;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, n] : experiment_table()) {
    if (k == e) return n;
  }
  return "?";
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, n] : experiment_table()) v.push_back(n);
    return v;
  }();
  return names;
}

ExperimentConfig parse_config(const std::string& text) {
  std::vector<std::string> errors;
  std::vector<std::pair<std::string, std::string>> kv;
  std::map<std::string, int> seen_line;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (auto [it, fresh] = seen_line.emplace(key, lineno); !fresh) {
      errors.push_back(key + ": duplicate key (lines " + std::to_string(it->second) + " and " +
                       std::to_string(lineno) + ")");
      continue;
    }
    kv.emplace_back(key, value);
  }

  std::optional<Experiment> exp;
  std::string valid;
  for (const auto& n : experiment_names()) valid += (valid.empty() ? "" : ", ") + n;
  if (auto it = std::find_if(kv.begin(), kv.end(), [](auto& p) { return p.first == "experiment"; });
      it == kv.end()) {
    errors.push_back("experiment: missing required key; valid names: " + valid);
  } else {
    for (const auto& [k, n] : experiment_table()) {
      if (n == it->second) exp = k;
    }
    if (!exp) errors.push_back("experiment: unknown experiment '" + it->second + "'; valid names: " + valid);
  }
  if (!exp) throw ConfigError(errors);

  ExperimentConfig cfg = preset(*exp);
  for (const auto& [key, value] : kv) {
    const auto& s = schema();
    auto entry = std::find_if(s.begin(), s.end(), [&](const Entry& e) { return e.key == key; });
    if (entry == s.end()) {
      errors.push_back(key + ": unknown key");
      continue;
    }
    try {
      entry->set(cfg, value);
    } catch (const std::invalid_argument& e) {
      errors.push_back(key + ": " + e.what());
    }
  }
  if (errors.empty()) {
    for (auto& v : config_violations(cfg)) errors.push_back(std::move(v));
  }
  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::string> config_violations(const ExperimentConfig& c) {
  std::vector<std::string> v;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) v.push_back(msg);
  };
  need(is_power_of_two(c.n_points) && c.n_points >= 8, "n_points: n_points must be a power of two >= 8");
  need(c.box_length > 0.0, "box_length: must be positive");
  need(c.sim.dt > 0.0, "dt: must be positive");
  need(c.sim.t_end > 0.0, "t_end: must be positive");
  need(c.sim.t_end >= c.sim.dt, "t_end: must be at least one step dt");
  need(c.sim.cfl_safety > 0.0 && c.sim.cfl_safety <= 1.0, "cfl_safety: must lie in (0, 1]");
  need(c.sim.record_every >= 1, "record_every: must be >= 1");
  need(c.sim.amp_bound >= 0.0, "amp_bound: must be >= 0 (0 selects the automatic bound)");
  need(c.output_name.find('/') == std::string::npos && !c.output_name.empty() && c.output_name != "." &&
           c.output_name != "..",
       "output_name: must be a plain non-empty file name");
  if (c.background == BackgroundChoice::dark_soliton) need(c.amplitude > 0.0, "amplitude: must be positive");
  need(c.datum_width > 0.0, "datum_width: must be positive");
  need(c.datum_cutoff > 0.0, "datum_cutoff: must be positive");
  need(c.datum_norm >= 0.0, "datum_norm: must be >= 0");
  if (c.datum == DatumChoice::plane_wave && c.box_length > 0.0) {
    const double m = c.datum_wavenumber * c.box_length / (2.0 * std::numbers::pi);
    need(std::abs(m - std::round(m)) <= 1e-9 * std::max(1.0, std::abs(m)),
         "datum_wavenumber: a plane wave needs a multiple of 2*pi/box_length");
  }
  need(c.s >= 0.0, "s: must be >= 0");
  need(c.epsilon > 0.0, "epsilon: must be positive");
  need(c.delta > 0.0, "delta: must be positive");
  need(c.similar >= 1.0, "similar: must be >= 1");
  need(c.much_greater > 1.0, "much_greater: must be > 1");
  need(c.trials >= 1, "trials: must be >= 1");
  need(c.pair_norm > 0.0, "pair_norm: must be positive");
  need(c.doublings >= 0, "doublings: must be >= 0");
  need(!c.coefficient_scales.empty(), "coefficient_scales: must not be empty");
  for (double x : c.coefficient_scales) need(std::isfinite(x), "coefficient_scales: entries must be finite");
  need(!c.sweep_amplitudes.empty(), "sweep_amplitudes: must not be empty");
  for (double a : c.sweep_amplitudes) need(a > 0.0, "sweep_amplitudes: entries must be positive");
  if (c.experiment == Experiment::difference) {
    need(std::is_sorted(c.sweep_amplitudes.rbegin(), c.sweep_amplitudes.rend()) &&
             std::adjacent_find(c.sweep_amplitudes.begin(), c.sweep_amplitudes.end()) ==
                 c.sweep_amplitudes.end(),
         "sweep_amplitudes: must be strictly decreasing");
  }
  if (c.experiment == Experiment::convergence) {
    need(c.dt_list.size() >= 2, "dt_list: needs at least 2 step sizes");
    bool dec = true;
    for (std::size_t k = 0; k < c.dt_list.size(); ++k) {
      if (!(c.dt_list[k] > 0.0) || (k > 0 && !(c.dt_list[k] < c.dt_list[k - 1]))) dec = false;
    }
    need(dec, "dt_list: must be positive and strictly decreasing");
    need(c.reference_dt > 0.0 && !c.dt_list.empty() && c.reference_dt < c.dt_list.back(),
         "reference_dt: must be positive and below the smallest dt_list entry");
  }
  switch (c.experiment) {
    case Experiment::soliton_check:
      need(c.background == BackgroundChoice::dark_soliton, "background: soliton_check needs dark_soliton");
      break;
    case Experiment::conservation:
    case Experiment::plane_wave:
    case Experiment::gauge_check:
      need(c.background == BackgroundChoice::zero,
           "background: " + to_string(c.experiment) + " runs on the zero background");
      break;
    default: break;
  }
  return v;
}

std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : schema()) out.emplace_back(e.key, e.show(cfg));
  return out;
}

GridPtr build_grid(const ExperimentConfig& cfg) {
  return make_grid(cfg.n_points, cfg.box_length, cfg.center);
}

Background build_background(const ExperimentConfig& cfg) {
  switch (cfg.background) {
    case BackgroundChoice::zero: return make_constant_background(0.0);
    case BackgroundChoice::constant: return make_constant_background(cfg.background_constant);
    case BackgroundChoice::dark_soliton: return make_dark_soliton(cfg.amplitude);
  }
  throw ConfigError("background: unsupported kind");
}

ComplexField build_datum(const ExperimentConfig& cfg, const GridPtr& grid, CounterRng& rng) {
  const double a = cfg.datum_amplitude, w = cfg.datum_width, k = cfg.datum_wavenumber;
  const double c = cfg.center;
  switch (cfg.datum) {
    case DatumChoice::zero: return ComplexField(grid);
    case DatumChoice::gaussian:
      return ComplexField::from_function(grid, [=](double x) {
        const double y = (x - c) / w;
        return a * std::exp(-y * y) * std::polar(1.0, k * x);
      });
    case DatumChoice::plane_wave:
      return ComplexField::from_function(grid, [=](double x) { return a * std::polar(1.0, k * x); });
    case DatumChoice::random_band: {
      ComplexField f = random_band_field(grid, rng, cfg.datum_cutoff, 1.0);
      if (cfg.datum_norm > 0.0) f *= cfg.datum_norm / sobolev_norm(f, cfg.s);
      return f;
    }
  }
  throw ConfigError("datum: unsupported kind");
}

ModifiedEnergyConfig build_energy_config(const ExperimentConfig& c) {
  ModifiedEnergyConfig m = with_default_coefficients({}, c.sim.lambda);
  m.s = c.s;
  m.theta = c.theta;
  m.delta = c.delta;
  if (c.n0_exponent) m.n0 = Dyadic{*c.n0_exponent};
  if (c.c1) m.c1 = *c.c1;
  if (c.c2) m.c2 = *c.c2;
  if (c.c3) m.c3 = *c.c3;
  m.comparability.similar = c.similar;
  m.comparability.much_greater = c.much_greater;
  return m;
}

void preflight(const ExperimentConfig& cfg) {
  if (auto v = config_violations(cfg); !v.empty()) throw ConfigError(v);
  const GridPtr grid = build_grid(cfg);
  const Background bg = build_background(cfg);
  CounterRng rng(cfg.rng_seed);
  const ComplexField u0 = build_datum(cfg, grid, rng);
  std::vector<std::string> errors;
  auto absorb = [&](const std::function<void()>& f) {
    try {
      f();
    } catch (const ConfigError& e) {
      errors.insert(errors.end(), e.violations().begin(), e.violations().end());
    }
  };
  const bool dynamic = cfg.experiment != Experiment::hypothesis_audit &&
                       cfg.experiment != Experiment::coercivity;
  if (dynamic) {
    // the difference run perturbs the datum by at most the largest sweep amplitude
    double amp = cfg.sim.amp_bound > 0.0 ? cfg.sim.amp_bound : u0.max_abs() + bg.sup_abs();
    if (cfg.experiment == Experiment::difference && cfg.sim.amp_bound <= 0.0) {
      amp *= 1.0 + cfg.sweep_amplitudes.front();
    }
    absorb([&] { validate_sim_config(cfg.sim, *grid, amp); });
    if (cfg.experiment == Experiment::convergence) {
      for (double dt : cfg.dt_list) {
        SimConfig s = cfg.sim;
        s.dt = dt;
        absorb([&] { validate_sim_config(s, *grid, amp); });
      }
    }
  }
  if (cfg.experiment == Experiment::coercivity) {
    ModifiedEnergyConfig m = build_energy_config(cfg);
    if (!cfg.n0_exponent) m.n0 = Dyadic{1};
    absorb([&] { validate_modified_energy_config(m, *grid); });
    if (!(cfg.theta > 1.0 - cfg.s && cfg.theta < cfg.s - 0.5)) {
      errors.push_back("theta: coercivity requires 1 - s < theta < s - 1/2");
    }
  }
  if (!errors.empty()) throw ConfigError(errors);
}

}  // namespace dnls
