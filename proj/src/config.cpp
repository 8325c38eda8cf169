#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "chronon/runner.hpp"

namespace chronon::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ArgumentError("--sweep: '" + text + "' is not a number (in " + key + ")");
  }
}

struct Bindings {
  std::string case_name = "a";
  std::string format_name = "csv";
  std::string sweep_text;
  std::string scheme_name;
};

CLI::Option* last_wins(CLI::Option* opt) {
  return opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_common(CLI::App* sub, ScenarioConfig& cfg, Bindings& b) {
  last_wins(sub->add_option("--case", b.case_name, "discretization case: a | b | general"))
      ->check(CLI::IsMember({"a", "b", "general"}));
  last_wins(sub->add_option("--tau", cfg.tau, "time step tau1 (case a) or tau0 (case b)"));
  last_wins(sub->add_option("--mass", cfg.m, "rest mass m >= 0"));
  last_wins(sub->add_option("--lambda-re", cfg.lambda_re, "Re lambda (general case)"));
  last_wins(sub->add_option("--lambda-im", cfg.lambda_im, "Im lambda (general case)"));
  last_wins(sub->add_option("--ds-re", cfg.ds_re, "Re delta_s (general case)"));
  last_wins(sub->add_option("--ds-im", cfg.ds_im, "Im delta_s (general case)"));
  last_wins(sub->add_option("--out", cfg.out_path, "output path, '-' for stdout"));
  last_wins(sub->add_option("--format", b.format_name, "csv | json"))
      ->check(CLI::IsMember({"csv", "json"}));
  last_wins(sub->add_option("--seed", cfg.seed, "seed for random draws"));
  last_wins(sub->add_option("--sweep", b.sweep_text, "<param>:<start>:<stop>:<count>[:log]"));
}

void add_grid(CLI::App* sub, ScenarioConfig& cfg, Bindings& b) {
  last_wins(sub->add_option("--p0", cfg.p0, "packet centre momentum"));
  last_wins(sub->add_option("--sigma", cfg.sigma, "packet momentum width"));
  last_wins(sub->add_option("--grid-n", cfg.grid_n, "number of grid modes (power of two)"));
  last_wins(sub->add_option("--p-max", cfg.p_max, "momentum grid half-width"));
  last_wins(sub->add_option("--steps", cfg.steps, "number of steps"));
  last_wins(sub->add_option("--dt", cfg.dt, "time step of effective propagation"));
  last_wins(sub->add_option("--scheme", b.scheme_name, "literal | leapfrog | effective"))
      ->check(CLI::IsMember({"literal", "leapfrog", "effective"}));
  last_wins(sub->add_option("--record-every", cfg.record_every, "record stride"));
}

// Pulls `--config <file>` / `--config=<file>` out of the argument list.
std::optional<std::string> take_config_path(std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ArgumentError("--config: missing file name");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return path;
}

std::vector<std::string> read_config_file(const std::string& path, const CLI::App& sub) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("--config: cannot open '" + path + "'");
  std::vector<std::string> tokens;
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
      throw ArgumentError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = trim(line.substr(eq + 1));
    if (sub.get_option_no_throw("--" + key) == nullptr) {
      throw ArgumentError(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                          "' for command " + sub.get_name());
    }
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

bool is_power_of_two(std::size_t n) { return n >= 4 && (n & (n - 1)) == 0; }

void validate(const ScenarioConfig& cfg) {
  auto bad = [](const std::string& key, const std::string& why) {
    throw ArgumentError(key + ": " + why);
  };
  for (auto [key, v] : {std::pair{"--tau", cfg.tau}, {"--mass", cfg.m}, {"--p0", cfg.p0},
                        {"--sigma", cfg.sigma}, {"--p-max", cfg.p_max}, {"--dt", cfg.dt},
                        {"--lambda-re", cfg.lambda_re}, {"--lambda-im", cfg.lambda_im},
                        {"--ds-re", cfg.ds_re}, {"--ds-im", cfg.ds_im}}) {
    if (!std::isfinite(v)) bad(key, "must be finite");
  }
  if (cfg.m < 0.0) bad("--mass", "must be >= 0");
  const bool general = cfg.case_tag == CaseTag::General;
  if (general && cfg.lambda_re == 0.0 && cfg.lambda_im == 0.0) bad("--lambda-re", "lambda must be nonzero");
  const std::string scheme = cfg.resolved_scheme();
  const bool signed_tau_ok = cfg.command == Command::Dispersion && cfg.case_tag == CaseTag::A;
  const bool zero_tau_ok = cfg.command == Command::Evolve && cfg.case_tag == CaseTag::A &&
                           scheme == "effective";
  if (!general && !signed_tau_ok) {
    if (cfg.tau < 0.0 || (cfg.tau == 0.0 && !zero_tau_ok)) bad("--tau", "must be > 0");
  }
  if (cfg.sweep) {
    const Sweep& s = *cfg.sweep;
    if (s.count < 2) bad("--sweep", "count must be >= 2");
    if (s.log && (s.start <= 0.0 || s.stop <= 0.0)) bad("--sweep", "log spacing needs positive bounds");
    std::vector<std::string> allowed;
    switch (cfg.command) {
      case Command::Dispersion:
        allowed = {"p", "E", "tau", "mass"};
        break;
      case Command::Derivative:
        allowed = {"E", "tau"};
        break;
      case Command::Commutators:
        allowed = {"tau", "mass"};
        break;
      case Command::Evolve:
        break;
    }
    if (std::find(allowed.begin(), allowed.end(), s.param) == allowed.end()) {
      bad("--sweep", "parameter '" + s.param + "' not sweepable for " + to_string(cfg.command));
    }
    if (general && s.param == "tau") bad("--sweep", "tau sweep needs case a or b");
    if (s.param == "E" && std::min(s.start, s.stop) < (cfg.command == Command::Dispersion ? cfg.m : 0.0)) {
      bad("--sweep", "energy sweep starts below the rest mass");
    }
    if (s.param == "mass" && std::min(s.start, s.stop) < 0.0) bad("--sweep", "negative mass");
    if (s.param == "tau" && !signed_tau_ok) {
      if (std::min(s.start, s.stop) <= 0.0) bad("--sweep", "tau values must be > 0");
    }
  }
  if (cfg.command == Command::Evolve) {
    if (!is_power_of_two(cfg.grid_n)) {
      bad("--grid-n", std::to_string(cfg.grid_n) + " is not a power of two >= 4");
    }
    if (!(cfg.p_max > 0.0)) bad("--p-max", "must be > 0");
    if (!(cfg.sigma > 0.0)) bad("--sigma", "must be > 0");
    if (!(std::abs(cfg.p0) + 4.0 * cfg.sigma < cfg.p_max)) bad("--p0", "|p0| + 4 sigma must be < p_max");
    if (cfg.steps < 1) bad("--steps", "must be >= 1");
    if (!(cfg.dt > 0.0)) bad("--dt", "must be > 0");
    if (cfg.record_every < 1) bad("--record-every", "must be >= 1");
    if (scheme == "literal" && cfg.case_tag != CaseTag::A) bad("--scheme", "literal requires --case a");
    if (scheme == "leapfrog" && cfg.case_tag != CaseTag::B) bad("--scheme", "leapfrog requires --case b");
  }
  if (cfg.command == Command::Commutators) {
    if (general) bad("--case", "commutators are defined for case a or b");
    if (cfg.draws < 1) bad("--draws", "must be >= 1");
  }
}

}  // namespace

std::vector<double> Sweep::values() const {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    v[i] = log ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
               : start + f * (stop - start);
  }
  if (count >= 1) v.back() = stop;
  return v;
}

Sweep parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 4 || parts.size() > 5) {
    throw ArgumentError("--sweep: expected <param>:<start>:<stop>:<count>[:log], got '" + text + "'");
  }
  Sweep s;
  s.param = parts[0];
  s.start = parse_double("--sweep", parts[1]);
  s.stop = parse_double("--sweep", parts[2]);
  const double count = parse_double("--sweep", parts[3]);
  if (count < 0 || count != std::floor(count)) throw ArgumentError("--sweep: count must be an integer");
  s.count = static_cast<std::size_t>(count);
  if (parts.size() == 5) {
    if (parts[4] != "log" && parts[4] != "linear") {
      throw ArgumentError("--sweep: spacing must be 'log' or 'linear'");
    }
    s.log = parts[4] == "log";
  }
  return s;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Dispersion:
      return "dispersion";
    case Command::Evolve:
      return "evolve";
    case Command::Commutators:
      return "commutators";
    case Command::Derivative:
      return "derivative";
  }
  return "?";
}

StepSpec ScenarioConfig::step_spec() const { return step_spec(tau); }

StepSpec ScenarioConfig::step_spec(double tau_override) const {
  switch (case_tag) {
    case CaseTag::A:
      return tau_override == 0.0 ? StepSpec::continuum() : StepSpec::case_a(tau_override);
    case CaseTag::B:
      return StepSpec::case_b(tau_override);
    case CaseTag::General:
      break;
  }
  return StepSpec::general({lambda_re, lambda_im}, {ds_re, ds_im});
}

std::string ScenarioConfig::resolved_scheme() const {
  if (!scheme.empty()) return scheme;
  switch (case_tag) {
    case CaseTag::A:
      return "literal";
    case CaseTag::B:
      return "leapfrog";
    case CaseTag::General:
      break;
  }
  return "effective";
}

ScenarioConfig parse_config(const std::vector<std::string>& argv) {
  std::vector<std::string> args = argv;
  const std::optional<std::string> config_path = take_config_path(args);

  ScenarioConfig cfg;
  Bindings b;
  CLI::App app{"chronon: discrete complex-time quantum mechanics toolkit", "chronon"};
  app.require_subcommand(1, 1);
  CLI::App* dispersion = app.add_subcommand("dispersion", "deformed spectra, velocities, canonical factors");
  CLI::App* evolve = app.add_subcommand("evolve", "1-D wave-packet evolution");
  CLI::App* commutators = app.add_subcommand("commutators", "closed vs numeric [q, p] commutators");
  CLI::App* derivative = app.add_subcommand("derivative", "discrete-derivative eigenvalue identity");
  for (CLI::App* sub : {dispersion, evolve, commutators, derivative}) add_common(sub, cfg, b);
  add_grid(evolve, cfg, b);
  last_wins(commutators->add_option("--draws", cfg.draws, "random (p, test state) draws"));

  if (args.empty()) throw ArgumentError("missing command (dispersion | evolve | commutators | derivative)");
  if (config_path) {
    CLI::App* sub = nullptr;
    for (CLI::App* candidate : {dispersion, evolve, commutators, derivative}) {
      if (candidate->get_name() == args.front()) sub = candidate;
    }
    if (sub == nullptr) throw ArgumentError("unknown command '" + args.front() + "'");
    std::vector<std::string> file_tokens = read_config_file(*config_path, *sub);
    args.insert(args.begin() + 1, file_tokens.begin(), file_tokens.end());
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream out;
    std::ostringstream err;
    app.exit(e, out, err);
    throw HelpRequested(out.str());
  } catch (const CLI::CallForAllHelp& e) {
    std::ostringstream out;
    std::ostringstream err;
    app.exit(e, out, err);
    throw HelpRequested(out.str());
  } catch (const CLI::ParseError& e) {
    throw ArgumentError(std::string(e.get_name()) + ": " + e.what());
  }

  if (dispersion->parsed()) cfg.command = Command::Dispersion;
  if (evolve->parsed()) cfg.command = Command::Evolve;
  if (commutators->parsed()) cfg.command = Command::Commutators;
  if (derivative->parsed()) cfg.command = Command::Derivative;
  cfg.case_tag = b.case_name == "a" ? CaseTag::A : b.case_name == "b" ? CaseTag::B : CaseTag::General;
  cfg.format = b.format_name == "json" ? Format::Json : Format::Csv;
  cfg.scheme = b.scheme_name;
  if (!b.sweep_text.empty()) cfg.sweep = parse_sweep(b.sweep_text);
  validate(cfg);
  return cfg;
}

}  // namespace chronon::cli
