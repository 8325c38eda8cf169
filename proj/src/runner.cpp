#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "chronon/algebra.hpp"
#include "chronon/difference_calculus.hpp"
#include "chronon/dispersion.hpp"
#include "chronon/parallel.hpp"
#include "chronon/runner.hpp"
#include "chronon/wavepacket.hpp"

namespace chronon::cli {
namespace {

// Deterministic uniform draws independent of the standard library's distributions.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  Vec3 direction() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * kPi);
    const double r = std::sqrt(1.0 - z * z);
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<double> sweep_or(const ScenarioConfig& cfg, const std::string& param,
                             std::vector<double> fallback) {
  if (cfg.sweep && cfg.sweep->param == param) return cfg.sweep->values();
  return fallback;
}

std::vector<OutputRecord> run_dispersion(const ScenarioConfig& cfg) {
  struct Point {
    double tau;
    double m;
    double p;
  };
  std::vector<Point> points;
  const std::string param = cfg.sweep ? cfg.sweep->param : "p";
  const std::vector<double> values =
      cfg.sweep ? cfg.sweep->values() : Sweep{"p", 0.0, 10.0, 101, false}.values();
  for (double v : values) {
    Point pt{cfg.tau, cfg.m, 0.0};
    if (param == "p") pt.p = v;
    if (param == "E") pt.p = std::sqrt(std::max(0.0, v * v - cfg.m * cfg.m));
    if (param == "tau") pt.tau = v;
    if (param == "mass") pt.m = v;
    points.push_back(pt);
  }
  std::vector<OutputRecord> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Point& pt = points[i];
    const StepSpec spec = cfg.step_spec(pt.tau);
    const double E = rel_energy(std::abs(pt.p), pt.m);
    const Complex ed = deformed_energy(spec, E);
    OutputRecord r;
    r.add("case", to_string(spec.tag()));
    r.add("tau", spec.tag() == CaseTag::General ? spec.tau() : pt.tau);
    r.add("m", pt.m);
    r.add("p", pt.p);
    r.add("E", E);
    r.add("E_D", ed.real());
    r.add("v_group", group_speed_1d(spec, pt.p, pt.m));
    r.add("g_factor", E > 0.0 ? canonical_factor(spec, E) : 1.0);
    r.add("im_ed_residual", std::abs(ed.imag()));
    rows[i] = std::move(r);
  });
  return rows;
}

std::vector<OutputRecord> run_derivative(const ScenarioConfig& cfg) {
  struct Point {
    double E;
    double tau;
    Complex s;
  };
  const std::string param = cfg.sweep ? cfg.sweep->param : "E";
  const std::vector<double> values =
      cfg.sweep ? cfg.sweep->values() : Sweep{"E", 0.0, 4.0, 41, false}.values();
  Draws draws(cfg.seed);
  std::vector<Point> points;
  for (double v : values) {
    Point pt{param == "E" ? v : cfg.m, param == "tau" ? v : cfg.tau, {}};
    const double radius = 10.0 * std::sqrt(draws.uniform(0.0, 1.0));
    pt.s = std::polar(radius, draws.uniform(0.0, 2.0 * kPi));
    points.push_back(pt);
  }
  std::vector<OutputRecord> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Point& pt = points[i];
    const StepSpec spec = cfg.step_spec(pt.tau);
    const Complex lambda = spec.lambda();
    const Complex ds = spec.delta_s();
    if (lambda == Complex{0.0, 0.0}) throw DomainError("derivative: lambda = 0 (tau = 0)");
    const Complex ratio = eigen_ratio(pt.E, pt.s, ds, lambda);
    const Complex ed = ed_general(pt.E, lambda, ds);
    OutputRecord r;
    r.add("E", pt.E);
    r.add("lambda_re", lambda.real());
    r.add("lambda_im", lambda.imag());
    r.add("ds_re", ds.real());
    r.add("ds_im", ds.imag());
    r.add("eigen_ratio_re", ratio.real());
    r.add("eigen_ratio_im", ratio.imag());
    r.add("ed_general_re", ed.real());
    r.add("ed_general_im", ed.imag());
    r.add("residual", std::abs(ratio - ed));
    rows[i] = std::move(r);
  });
  return rows;
}

std::vector<OutputRecord> run_commutators(const ScenarioConfig& cfg) {
  struct Draw {
    double tau;
    double m;
    Vec3 p;
    Vec3 centre;
    double sigma;
    Vec3 displacement;
  };
  const std::vector<double> taus = sweep_or(cfg, "tau", {cfg.tau});
  const std::vector<double> masses = sweep_or(cfg, "mass", {cfg.m});
  Draws draws(cfg.seed);
  std::vector<Draw> plan;
  for (double tau : taus) {
    for (double m : masses) {
      for (std::size_t k = 0; k < cfg.draws; ++k) {
        Draw d{tau, m, {}, {}, 0.0, {}};
        d.p = draws.uniform(0.1, 3.0) * draws.direction();
        d.centre = d.p + draws.uniform(0.0, 0.3) * draws.direction();
        d.sigma = draws.uniform(0.5, 1.5);
        d.displacement = {draws.uniform(-1.0, 1.0), draws.uniform(-1.0, 1.0), draws.uniform(-1.0, 1.0)};
        plan.push_back(d);
      }
    }
  }
  std::vector<std::vector<OutputRecord>> blocks(plan.size());
  parallel_for(plan.size(), [&](std::size_t k) {
    const Draw& d = plan[k];
    const StepSpec spec = cfg.step_spec(d.tau);
    const GaussianTestState3D test(d.centre, d.sigma, d.displacement);
    const Mat3c closed = commutator_qp_closed(spec, d.p, d.m);
    const Mat3c numeric = commutator_qp_numeric(spec, d.p, d.m, test);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        OutputRecord r;
        r.add("case", to_string(spec.tag()));
        r.add("px", d.p[0]);
        r.add("py", d.p[1]);
        r.add("pz", d.p[2]);
        r.add("m", d.m);
        r.add("tau", d.tau);
        r.add("ij", std::to_string(i + 1) + std::to_string(j + 1));
        r.add("closed_re", closed(i, j).real());
        r.add("closed_im", closed(i, j).imag());
        r.add("numeric_re", numeric(i, j).real());
        r.add("numeric_im", numeric(i, j).imag());
        r.add("abs_err", std::abs(closed(i, j) - numeric(i, j)));
        blocks[k].push_back(std::move(r));
      }
    }
  });
  std::vector<OutputRecord> rows;
  for (auto& b : blocks) {
    for (auto& r : b) rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<OutputRecord> run_evolve(const ScenarioConfig& cfg) {
  const MomentumGrid grid(cfg.grid_n, cfg.p_max);
  const std::string scheme = cfg.resolved_scheme();
  EvolveOptions options;
  options.record_every = cfg.record_every;
  Trajectory traj;
  if (scheme == "literal") {
    PacketState state = gaussian_packet(grid, cfg.p0, cfg.sigma, cfg.m, CaseALiteral{cfg.tau});
    traj = evolve_case_a(state, cfg.tau, cfg.steps, options);
  } else if (scheme == "leapfrog") {
    PacketState state = gaussian_packet(grid, cfg.p0, cfg.sigma, cfg.m, CaseBLeapfrog{cfg.tau});
    traj = evolve_case_b(state, cfg.tau, cfg.steps, options);
  } else {
    const StepSpec spec = cfg.step_spec();
    PacketState state = gaussian_packet(grid, cfg.p0, cfg.sigma, cfg.m, EffectiveDispersion{spec, cfg.dt});
    traj = evolve_effective(state, spec, cfg.dt, cfg.steps, options);
  }
  std::vector<OutputRecord> rows;
  rows.reserve(traj.records.size());
  for (const TrajectoryRecord& rec : traj.records) {
    OutputRecord r;
    r.add("step", static_cast<std::int64_t>(rec.step));
    r.add("t", rec.t);
    r.add("norm", rec.norm);
    r.add("centroid_x", rec.centroid_x);
    r.add("centroid_v", rec.centroid_v);
    r.add("front_x", rec.front_x);
    r.add("cone_fraction", rec.cone_fraction);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string value_text(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

nlohmann::ordered_json value_json(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<std::string>(v);
}

void check_schema(const std::vector<OutputRecord>& records) {
  if (records.empty()) throw InternalError("emit: empty record list");
  const auto& head = records.front().fields;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& f = records[r].fields;
    bool same = f.size() == head.size();
    for (std::size_t c = 0; same && c < f.size(); ++c) same = f[c].first == head[c].first;
    if (!same) throw InternalError("emit: row " + std::to_string(r) + " does not match the schema");
    for (const auto& [name, value] : f) {
      if (const auto* d = std::get_if<double>(&value); d != nullptr && !std::isfinite(*d)) {
        throw InternalError("emit: non-finite value in column '" + name + "' of row " + std::to_string(r));
      }
    }
  }
}

}  // namespace

std::vector<std::string> schema(Command c) {
  switch (c) {
    case Command::Dispersion:
      return {"case", "tau", "m", "p", "E", "E_D", "v_group", "g_factor", "im_ed_residual"};
    case Command::Evolve:
      return {"step", "t", "norm", "centroid_x", "centroid_v", "front_x", "cone_fraction"};
    case Command::Commutators:
      return {"case", "px", "py", "pz", "m", "tau", "ij", "closed_re", "closed_im",
              "numeric_re", "numeric_im", "abs_err"};
    case Command::Derivative:
      return {"E", "lambda_re", "lambda_im", "ds_re", "ds_im", "eigen_ratio_re",
              "eigen_ratio_im", "ed_general_re", "ed_general_im", "residual"};
  }
  return {};
}

std::vector<OutputRecord> run_scenario(const ScenarioConfig& cfg) {
  try {
    switch (cfg.command) {
      case Command::Dispersion:
        return run_dispersion(cfg);
      case Command::Evolve:
        return run_evolve(cfg);
      case Command::Commutators:
        return run_commutators(cfg);
      case Command::Derivative:
        return run_derivative(cfg);
    }
  } catch (const std::exception& e) {
    std::ostringstream ctx;
    ctx << to_string(cfg.command) << " (case " << to_string(cfg.case_tag) << ", tau "
        << format_number(cfg.tau) << ", m " << format_number(cfg.m) << "): " << e.what();
    throw std::runtime_error(ctx.str());
  }
  return {};
}

OutputRecord config_record(const ScenarioConfig& cfg) {
  OutputRecord r;
  r.add("command", to_string(cfg.command));
  r.add("case", to_string(cfg.case_tag));
  r.add("tau", cfg.tau);
  r.add("mass", cfg.m);
  if (cfg.case_tag == CaseTag::General) {
    r.add("lambda_re", cfg.lambda_re);
    r.add("lambda_im", cfg.lambda_im);
    r.add("ds_re", cfg.ds_re);
    r.add("ds_im", cfg.ds_im);
  }
  if (cfg.command == Command::Evolve) {
    r.add("scheme", cfg.resolved_scheme());
    r.add("p0", cfg.p0);
    r.add("sigma", cfg.sigma);
    r.add("grid_n", static_cast<std::int64_t>(cfg.grid_n));
    r.add("p_max", cfg.p_max);
    r.add("steps", static_cast<std::int64_t>(cfg.steps));
    r.add("dt", cfg.dt);
    r.add("record_every", static_cast<std::int64_t>(cfg.record_every));
  }
  if (cfg.command == Command::Commutators) r.add("draws", static_cast<std::int64_t>(cfg.draws));
  if (cfg.sweep) {
    std::ostringstream s;
    s << cfg.sweep->param << ':' << format_number(cfg.sweep->start) << ':'
      << format_number(cfg.sweep->stop) << ':' << cfg.sweep->count << (cfg.sweep->log ? ":log" : "");
    r.add("sweep", s.str());
  }
  r.add("seed", static_cast<std::int64_t>(cfg.seed));
  return r;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0 so output does not depend on the sign of zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string render(const std::vector<OutputRecord>& records, Format format,
                   const OutputRecord& config) {
  check_schema(records);
  if (format == Format::Csv) {
    std::string out;
    const auto& head = records.front().fields;
    for (std::size_t c = 0; c < head.size(); ++c) out += (c ? "," : "") + head[c].first;
    out += '\n';
    for (const auto& r : records) {
      for (std::size_t c = 0; c < r.fields.size(); ++c) {
        if (c) out += ',';
        out += value_text(r.fields[c].second);
      }
      out += '\n';
    }
    return out;
  }
  nlohmann::ordered_json doc;
  doc["schema"] = nlohmann::ordered_json::array();
  for (const auto& f : records.front().fields) doc["schema"].push_back(f.first);
  doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : config.fields) doc["config"][name] = value_json(value);
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    auto row = nlohmann::ordered_json::array();
    for (const auto& f : r.fields) row.push_back(value_json(f.second));
    doc["rows"].push_back(std::move(row));
  }
  return doc.dump(1) + "\n";
}

void emit(const std::vector<OutputRecord>& records, Format format, const std::string& out_path,
          const OutputRecord& config) {
  const std::string text = render(records, format, config);
  if (out_path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("emit: failed writing to stdout");
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("emit: cannot open '" + out_path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("emit: failed writing '" + out_path + "'");
}

}  // namespace chronon::cli
