#include "specshare/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace specshare {

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::None: return "none";
    case SweepVariable::L: return "L";
    case SweepVariable::QMax: return "q_max";
    case SweepVariable::N: return "N";
    case SweepVariable::Sigma: return "sigma";
  }
  return "none";
}

std::string_view to_string(WorldKind w) {
  return w == WorldKind::Band ? "band" : "independent";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
    bad_value(key, value);
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

std::vector<double> parse_double_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (auto item : split_list(value)) out.push_back(parse_double(key, item));
  return out;
}

SweepVariable parse_sweep(std::string_view value) {
  if (value == "none") return SweepVariable::None;
  if (value == "L") return SweepVariable::L;
  if (value == "q_max") return SweepVariable::QMax;
  if (value == "N") return SweepVariable::N;
  if (value == "sigma") return SweepVariable::Sigma;
  bad_value("sweep_var", value);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

std::size_t derived_budget(std::size_t channels, double fraction) {
  const auto l = static_cast<long long>(std::llround(static_cast<double>(channels) * fraction));
  return static_cast<std::size_t>(std::max(1LL, l));
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::vector<std::string>* warnings) {
  ExperimentConfig c;
  std::map<std::string, int> seen;
  std::size_t line_no = 0;
  bool explicit_budget = false;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (seen[std::string(key)]++ > 0) throw ConfigError("duplicate key '" + std::string(key) + "'");

    if (key == "world") {
      if (value == "independent") c.world = WorldKind::Independent;
      else if (value == "band") c.world = WorldKind::Band;
      else bad_value(key, value);
    } else if (key == "N") {
      c.channels = parse_int<std::size_t>(key, value);
    } else if (key == "L") {
      c.budget = parse_int<std::size_t>(key, value);
      explicit_budget = true;
    } else if (key == "L_fraction") {
      c.budget_fraction = parse_double(key, value);
    } else if (key == "horizon") {
      c.horizon = parse_int<std::int64_t>(key, value);
    } else if (key == "runs") {
      c.runs = parse_int<std::size_t>(key, value);
    } else if (key == "base_seed") {
      c.base_seed = parse_int<std::uint64_t>(key, value);
    } else if (key == "gamma") {
      c.gamma = parse_double(key, value);
    } else if (key == "policies") {
      c.policies.clear();
      for (auto item : split_list(value)) c.policies.emplace_back(item);
    } else if (key == "q_min") {
      c.q_min = parse_double(key, value);
    } else if (key == "q_max") {
      c.q_max = parse_double(key, value);
    } else if (key == "q_list") {
      c.q_list = parse_double_list(key, value);
    } else if (key == "nonstationary") {
      c.nonstationary = parse_bool(key, value);
    } else if (key == "schedule_amplitude") {
      c.schedule_amplitude = parse_double(key, value);
    } else if (key == "sweep_var") {
      c.sweep = parse_sweep(value);
    } else if (key == "sweep_values") {
      c.sweep_values = parse_double_list(key, value);
    } else if (key == "ew_window") {
      c.ew_window = parse_int<std::uint64_t>(key, value);
    } else if (key == "ew_alpha") {
      c.ew_alpha = parse_double(key, value);
    } else if (key == "prior_q") {
      c.prior_q = parse_double(key, value);
    } else if (key == "band_width") {
      c.band_width = parse_int<int>(key, value);
    } else if (key == "band_sigma") {
      c.band_sigma = parse_double(key, value);
    } else if (key == "band_alpha") {
      c.band_memory = parse_double(key, value);
    } else if (key == "mean_age") {
      if (value == "all") c.mean_age = MeanAgeMode::AllChannels;
      else if (value == "selected") c.mean_age = MeanAgeMode::SelectedChannels;
      else bad_value(key, value);
    } else {
      throw ConfigError("unknown key '" + std::string(key) + "' on line " + std::to_string(line_no));
    }
  }

  if (c.budget_fraction && !explicit_budget) c.budget = derived_budget(c.channels, *c.budget_fraction);
  validate(c);
  channel_params(c, warnings);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), warnings);
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "world = " << to_string(c.world) << '\n';
  os << "N = " << c.channels << '\n';
  os << "L = " << c.budget << '\n';
  if (c.budget_fraction) os << "L_fraction = " << format_double(*c.budget_fraction) << '\n';
  os << "horizon = " << c.horizon << '\n';
  os << "runs = " << c.runs << '\n';
  os << "base_seed = " << c.base_seed << '\n';
  os << "gamma = " << format_double(c.gamma) << '\n';
  os << "policies = ";
  for (std::size_t i = 0; i < c.policies.size(); ++i) os << (i ? ", " : "") << c.policies[i];
  os << '\n';
  if (c.q_list.empty()) {
    os << "q_min = " << format_double(c.q_min) << '\n';
    os << "q_max = " << format_double(c.q_max) << '\n';
  } else {
    os << "q_list = " << join(c.q_list) << '\n';
  }
  os << "nonstationary = " << (c.nonstationary ? "true" : "false") << '\n';
  os << "schedule_amplitude = " << format_double(c.schedule_amplitude) << '\n';
  os << "sweep_var = " << to_string(c.sweep) << '\n';
  if (!c.sweep_values.empty()) os << "sweep_values = " << join(c.sweep_values) << '\n';
  os << "ew_window = " << c.ew_window << '\n';
  os << "ew_alpha = " << format_double(c.ew_alpha) << '\n';
  os << "prior_q = " << format_double(c.prior_q) << '\n';
  os << "band_width = " << c.band_width << '\n';
  os << "band_sigma = " << format_double(c.band_sigma) << '\n';
  os << "band_alpha = " << format_double(c.band_memory) << '\n';
  os << "mean_age = " << (c.mean_age == MeanAgeMode::AllChannels ? "all" : "selected") << '\n';
  return os.str();
}

namespace {

void validate_point(const ExperimentConfig& c) {
  if (c.channels < 1) throw ConfigError("N must be >= 1");
  if (c.budget < 1 || c.budget > c.channels) {
    throw ConfigError("L must lie in [1, N]; got L = " + std::to_string(c.budget) +
                      ", N = " + std::to_string(c.channels));
  }
  if (c.world == WorldKind::Band) {
    if (c.band_width < 1 || static_cast<std::size_t>(c.band_width) > c.channels) {
      throw ConfigError("band_width must lie in [1, N]");
    }
    if (!(c.band_sigma > 0.0)) throw ConfigError("band_sigma must be > 0");
  } else {
    if (!c.q_list.empty() && c.q_list.size() != c.channels) {
      throw ConfigError("q_list must have exactly N entries");
    }
    if (c.q_list.empty() && !(c.q_min > 0.0 && c.q_min <= c.q_max && c.q_max <= 0.5)) {
      throw ConfigError("need 0 < q_min <= q_max <= 0.5");
    }
    for (double q : c.q_list) {
      if (!(q > 0.0 && q <= 0.5)) throw ConfigError("q_list entries must lie in (0, 0.5]");
    }
  }
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (c.runs < 1) throw ConfigError("runs must be >= 1");
  if (!(c.gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
  if (c.budget_fraction && !(*c.budget_fraction > 0.0 && *c.budget_fraction <= 1.0)) {
    throw ConfigError("L_fraction must lie in (0, 1]");
  }
  if (!(c.schedule_amplitude >= 0.0)) throw ConfigError("schedule_amplitude must be >= 0");
  if (c.nonstationary && c.world == WorldKind::Band) {
    throw ConfigError("nonstationary schedules apply to the independent world only");
  }
  if (!(c.band_memory >= 0.0 && c.band_memory <= 1.0)) throw ConfigError("band_alpha must lie in [0, 1]");
  if (c.policies.empty()) throw ConfigError("policies must not be empty");
  try {
    for (const auto& spec : policy_specs(c)) spec.validate(c.world == WorldKind::Band);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (c.sweep == SweepVariable::None) {
    if (!c.sweep_values.empty()) throw ConfigError("sweep_values given without sweep_var");
    validate_point(c);
    return;
  }
  if (c.sweep_values.empty()) throw ConfigError("sweep_var given without sweep_values");
  if (c.sweep == SweepVariable::Sigma && c.world != WorldKind::Band) {
    throw ConfigError("sigma sweeps require the band world");
  }
  if (c.sweep == SweepVariable::QMax && (c.world != WorldKind::Independent || !c.q_list.empty())) {
    throw ConfigError("q_max sweeps require the independent world without q_list");
  }
  for (double v : c.sweep_values) validate_point(apply_sweep_value(c, v));
}

std::vector<ChannelParams> channel_params(const ExperimentConfig& c,
                                          std::vector<std::string>* warnings) {
  std::vector<double> qs = c.q_list;
  if (qs.empty()) {
    qs.resize(c.channels);
    for (std::size_t i = 0; i < c.channels; ++i) {
      qs[i] = c.channels == 1 ? c.q_min
                              : c.q_min + static_cast<double>(i) * (c.q_max - c.q_min) /
                                              static_cast<double>(c.channels - 1);
    }
  }
  std::vector<ChannelParams> params;
  params.reserve(qs.size());
  bool clamped = false;
  for (double q : qs) {
    if (q >= kMaxConfigurableQ) {
      clamped = clamped || q > kMaxConfigurableQ;
      q = kMaxConfigurableQ;
    }
    try {
      params.emplace_back(q);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (clamped && warnings) {
    warnings->push_back("q values at 0.5 clamped to 0.5 - 1e-6 (flip probability must be < 0.5)");
  }
  return params;
}

std::vector<PolicySpec> policy_specs(const ExperimentConfig& c) {
  std::vector<PolicySpec> specs;
  for (const auto& name : c.policies) {
    PolicySpec spec;
    try {
      spec = PolicySpec::from_name(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    spec.collision_penalty = c.gamma;
    spec.ew_window = c.ew_window;
    spec.ew_forgetting = c.ew_alpha;
    spec.prior_q = c.prior_q;
    specs.push_back(spec);
  }
  return specs;
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& config, double value) {
  ExperimentConfig c = config;
  auto as_count = [&](std::string_view what) {
    if (!(value >= 1.0) || value != std::floor(value)) {
      throw ConfigError(std::string(what) + " sweep values must be positive integers");
    }
    return static_cast<std::size_t>(value);
  };
  switch (c.sweep) {
    case SweepVariable::None: break;
    case SweepVariable::L: c.budget = as_count("L"); break;
    case SweepVariable::QMax: c.q_max = value; break;
    case SweepVariable::N:
      c.channels = as_count("N");
      if (c.budget_fraction) c.budget = derived_budget(c.channels, *c.budget_fraction);
      break;
    case SweepVariable::Sigma: c.band_sigma = value; break;
  }
  return c;
}

ExperimentConfig figure_preset(int figure) {
  ExperimentConfig c;
  switch (figure) {
    case 3:  // throughput / collisions vs L, independent channels
      c.sweep = SweepVariable::L;
      c.sweep_values = {1, 2, 3, 4, 6, 8};
      break;
    case 4:  // vs q_max
      c.budget = 4;
      c.sweep = SweepVariable::QMax;
      c.sweep_values = {0.2, 0.3, 0.4, 0.5};
      break;
    case 5:  // vs N at L = N / 4
      c.budget_fraction = 0.25;
      c.sweep = SweepVariable::N;
      c.sweep_values = {8, 16, 32, 64};
      break;
    case 6:  // stationary learning
      c.policies = {"pure_random", "check_empty_random", "whittle", "heuristic", "whittle_mle",
                    "heuristic_mle"};
      c.sweep = SweepVariable::L;
      c.sweep_values = {1, 2, 3, 4, 6, 8};
      break;
    case 7:  // non-stationary learning
      c.nonstationary = true;
      c.policies = {"pure_random", "check_empty_random", "whittle",       "heuristic",
                    "whittle_mle", "whittle_ewmle",      "heuristic_ewmle"};
      c.sweep = SweepVariable::L;
      c.sweep_values = {1, 2, 3, 4, 6, 8};
      break;
    case 8:  // correlated band vs L
      c.world = WorldKind::Band;
      c.channels = 16;
      c.policies = {"pure_random", "check_empty_random", "correlated_heuristic"};
      c.sweep = SweepVariable::L;
      c.sweep_values = {1, 2, 3, 4};
      break;
    case 9:  // correlated band vs sigma at L = 4
      c.world = WorldKind::Band;
      c.channels = 16;
      c.budget = 4;
      c.policies = {"pure_random", "check_empty_random", "correlated_heuristic"};
      c.sweep = SweepVariable::Sigma;
      c.sweep_values = {0.5, 1.0, 1.5, 2.0};
      break;
    default:
      throw ConfigError("no preset for figure " + std::to_string(figure) + " (expected 3..9)");
  }
  if (c.sweep == SweepVariable::L) c.budget = 1;
  validate(c);
  return c;
}

}  // namespace specshare
