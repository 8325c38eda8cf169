#include "chronon/wavepacket.hpp"

#include <cmath>
#include <sstream>
#include <unsupported/Eigen/FFT>

#include "chronon/dispersion.hpp"
#include "chronon/errors.hpp"
#include "chronon/numerics.hpp"

namespace chronon {
namespace {

constexpr double kFrontQuantile = 0.999;
constexpr double kWrapTolerance = 1e-6;
constexpr std::size_t kWrapCells = 4;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double total_probability(const Eigen::ArrayXd& density, double cell) {
  return numerics::pairwise_sum(density) * cell;
}

Eigen::ArrayXd phase_sign(std::size_t n) {
  Eigen::ArrayXd sign(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) sign[static_cast<Eigen::Index>(k)] = (k % 2 == 0) ? 1.0 : -1.0;
  return sign;
}

struct PositionDensity {
  Eigen::ArrayXd rho;
  double norm = 0.0;
};

PositionDensity position_density(const PacketState& state, PositionTransform& transform) {
  const Eigen::ArrayXcd psi_x = transform.to_position(state.amps);
  PositionDensity d;
  d.rho = psi_x.abs2();
  d.norm = total_probability(d.rho, state.grid.dx());
  return d;
}

double front_quantile(const MomentumGrid& grid, const Eigen::ArrayXd& rho, double norm) {
  const std::size_t n = grid.size();
  const std::size_t centre = n / 2;
  const double target = kFrontQuantile * norm;
  double acc = rho[static_cast<Eigen::Index>(centre)] * grid.dx();
  if (acc >= target) return 0.0;
  for (std::size_t r = 1; r <= centre; ++r) {
    acc += rho[static_cast<Eigen::Index>(centre - r)] * grid.dx();
    if (centre + r < n) acc += rho[static_cast<Eigen::Index>(centre + r)] * grid.dx();
    if (acc >= target) return static_cast<double>(r) * grid.dx();
  }
  return static_cast<double>(centre) * grid.dx();
}

void check_wrap(const MomentumGrid& grid, const Eigen::ArrayXd& rho, double norm, std::size_t step) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto cells = static_cast<Eigen::Index>(kWrapCells);
  const double edge = (rho.head(cells).sum() + rho.tail(cells).sum()) * grid.dx();
  if (edge > kWrapTolerance * norm) {
    std::ostringstream msg;
    msg << "wrap-around guard: probability " << edge / norm << " within " << kWrapCells
        << " cells of the position boundary at step " << step << " (n = " << n
        << ", p_max = " << grid.p_max() << "); enlarge grid_n or shorten the run";
    throw ConfigError(msg.str());
  }
}

// Collects trajectory records; centroid_v is filled in by finish().
class Recorder {
 public:
  Recorder(const PacketState& state, std::string semantics, const EvolveOptions& options)
      : transform_(state.grid), options_(options) {
    traj_.semantics = std::move(semantics);
    traj_.grid = state.grid;
    traj_.m = state.m;
    traj_.initial_density = state.amps.abs2();
  }

  void record(const PacketState& state, double elapsed, double lab_time) {
    const PositionDensity d = position_density(state, transform_);
    if (!(d.norm > 0.0) || !std::isfinite(d.norm)) {
      throw ProbeError("trajectory: state norm is zero or non-finite at step " +
                       std::to_string(state.step_index));
    }
    if (options_.wrap_guard) check_wrap(state.grid, d.rho, d.norm, state.step_index);
    const Eigen::ArrayXd x = state.grid.positions();
    TrajectoryRecord r;
    r.step = state.step_index;
    r.t = elapsed;
    r.norm = total_probability(state.amps.abs2(), state.grid.dp());
    r.centroid_x = total_probability(x * d.rho, state.grid.dx()) / d.norm;
    r.front_x = front_quantile(state.grid, d.rho, d.norm);
    if (traj_.records.empty()) front0_ = r.front_x;
    const double radius = front0_ + lab_time;
    const Eigen::ArrayXd outside = (x.abs() > radius).select(d.rho, 0.0);
    r.cone_fraction = total_probability(outside, state.grid.dx()) / d.norm;
    traj_.records.push_back(r);
  }

  bool due(std::size_t step, std::size_t last) const {
    return step % options_.record_every == 0 || step == last;
  }

  Trajectory finish() {
    auto& rec = traj_.records;
    const std::size_t n = rec.size();
    for (std::size_t i = 0; i < n && n > 1; ++i) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
      rec[i].centroid_v = (rec[hi].centroid_x - rec[lo].centroid_x) / (rec[hi].t - rec[lo].t);
    }
    return std::move(traj_);
  }

 private:
  PositionTransform transform_;
  EvolveOptions options_;
  Trajectory traj_;
  double front0_ = 0.0;
};

void require_steps(std::size_t steps, const char* who) {
  if (steps < 1) throw UsageError(std::string(who) + ": steps must be >= 1");
}

void require_stride(const EvolveOptions& options) {
  if (options.record_every < 1) throw UsageError("evolve: record_every must be >= 1");
}

}  // namespace

// ---------------------------------------------------------------------------

MomentumGrid::MomentumGrid(std::size_t n, double p_max) : n_(n), p_max_(p_max) {
  if (n < 4 || (n & (n - 1)) != 0) {
    throw ConfigError("MomentumGrid: n = " + std::to_string(n) + " is not a power of two >= 4");
  }
  if (!(p_max > 0.0) || !std::isfinite(p_max)) throw ConfigError("MomentumGrid: p_max must be positive");
}

Eigen::ArrayXd MomentumGrid::momenta() const {
  Eigen::ArrayXd p(static_cast<Eigen::Index>(n_));
  for (std::size_t k = 0; k < n_; ++k) p[static_cast<Eigen::Index>(k)] = momentum(k);
  return p;
}

Eigen::ArrayXd MomentumGrid::positions() const {
  Eigen::ArrayXd x(static_cast<Eigen::Index>(n_));
  for (std::size_t j = 0; j < n_; ++j) x[static_cast<Eigen::Index>(j)] = position(j);
  return x;
}

Eigen::ArrayXd MomentumGrid::energies(double m) const {
  if (m < 0.0) throw DomainError("MomentumGrid::energies: negative mass");
  return (momenta().square() + m * m).sqrt();
}

std::string scheme_name(const Scheme& scheme) {
  return std::visit(Overloaded{[](const CaseALiteral&) { return std::string("literal"); },
                               [](const CaseBLeapfrog&) { return std::string("leapfrog"); },
                               [](const EffectiveDispersion&) { return std::string("effective"); }},
                    scheme);
}

// ---------------------------------------------------------------------------

struct PositionTransform::Impl {
  MomentumGrid grid;
  Eigen::FFT<double> fft;
  Eigen::ArrayXd sign;
  std::vector<Complex> in;
  std::vector<Complex> out;

  explicit Impl(const MomentumGrid& g)
      : grid(g), sign(phase_sign(g.size())), in(g.size()), out(g.size()) {}
};

PositionTransform::PositionTransform(const MomentumGrid& grid) : impl_(std::make_unique<Impl>(grid)) {}
PositionTransform::~PositionTransform() = default;
PositionTransform::PositionTransform(PositionTransform&&) noexcept = default;
PositionTransform& PositionTransform::operator=(PositionTransform&&) noexcept = default;

// With p_k x_j = −kπ − jπ + 2πkj/n + nπ/2 and n a multiple of 4, the continuous transform
// reduces to an alternating-sign DFT.
Eigen::ArrayXcd PositionTransform::to_position(const Eigen::ArrayXcd& momentum_amps) {
  auto& s = *impl_;
  const auto n = static_cast<Eigen::Index>(s.grid.size());
  if (momentum_amps.size() != n) throw UsageError("to_position: amplitude count does not match grid");
  for (Eigen::Index k = 0; k < n; ++k) s.in[static_cast<std::size_t>(k)] = s.sign[k] * momentum_amps[k];
  s.fft.inv(s.out, s.in);
  const double scale = s.grid.dp() * static_cast<double>(n) / std::sqrt(2.0 * kPi);
  Eigen::ArrayXcd psi(n);
  for (Eigen::Index j = 0; j < n; ++j) psi[j] = scale * s.sign[j] * s.out[static_cast<std::size_t>(j)];
  return psi;
}

Eigen::ArrayXcd PositionTransform::to_momentum(const Eigen::ArrayXcd& position_amps) {
  auto& s = *impl_;
  const auto n = static_cast<Eigen::Index>(s.grid.size());
  if (position_amps.size() != n) throw UsageError("to_momentum: amplitude count does not match grid");
  for (Eigen::Index j = 0; j < n; ++j) s.in[static_cast<std::size_t>(j)] = s.sign[j] * position_amps[j];
  s.fft.fwd(s.out, s.in);
  const double scale = s.grid.dx() / std::sqrt(2.0 * kPi);
  Eigen::ArrayXcd psi(n);
  for (Eigen::Index k = 0; k < n; ++k) psi[k] = scale * s.sign[k] * s.out[static_cast<std::size_t>(k)];
  return psi;
}

// ---------------------------------------------------------------------------

PacketState gaussian_packet(const MomentumGrid& grid, double p0, double sigma, double m,
                            Scheme scheme) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian_packet: sigma must be positive");
  if (!(std::abs(p0) + 4.0 * sigma < grid.p_max())) {
    throw ConfigError("gaussian_packet: band |p0| + 4 sigma must lie inside p_max");
  }
  if (m < 0.0) throw DomainError("gaussian_packet: negative mass");
  const Eigen::ArrayXd p = grid.momenta();
  Eigen::ArrayXcd amps = (-(p - p0).square() / (4.0 * sigma * sigma)).exp().cast<Complex>();
  const double norm = total_probability(amps.abs2(), grid.dp());
  amps /= std::sqrt(norm);
  return PacketState{grid, std::move(amps), std::nullopt, 0, std::move(scheme), m};
}

PacketState step_case_a(const PacketState& state, double tau1) {
  if (!std::holds_alternative<CaseALiteral>(state.scheme)) {
    throw UsageError("step_case_a: state scheme is " + scheme_name(state.scheme) + ", not literal");
  }
  PacketState next = state;
  next.amps *= (tau1 * state.grid.energies(state.m)).exp();
  ++next.step_index;
  return next;
}

Trajectory evolve_case_a(PacketState& state, double tau1, std::size_t steps,
                         const EvolveOptions& options) {
  require_steps(steps, "evolve_case_a");
  require_stride(options);
  if (!std::holds_alternative<CaseALiteral>(state.scheme)) {
    throw UsageError("evolve_case_a: state scheme is " + scheme_name(state.scheme) + ", not literal");
  }
  const Eigen::ArrayXd growth = (tau1 * state.grid.energies(state.m)).exp();
  const std::size_t first = state.step_index;
  Recorder rec(state, "literal", options);
  rec.record(state, 0.0, 0.0);
  for (std::size_t i = 1; i <= steps; ++i) {
    state.amps *= growth;
    ++state.step_index;
    if (rec.due(i, steps)) rec.record(state, static_cast<double>(state.step_index - first) * tau1, 0.0);
  }
  return rec.finish();
}

Complex physical_root(double theta) {
  return {std::sqrt(std::max(0.0, (1.0 - theta) * (1.0 + theta))), -theta};
}

Complex physical_root_at_phase(double x) { return {std::abs(std::cos(x)), -std::sin(x)}; }

Trajectory evolve_case_b(PacketState& state, double tau0, std::size_t steps,
                         const EvolveOptions& options) {
  require_steps(steps, "evolve_case_b");
  require_stride(options);
  if (!std::holds_alternative<CaseBLeapfrog>(state.scheme)) {
    throw UsageError("evolve_case_b: state scheme is " + scheme_name(state.scheme) + ", not leapfrog");
  }
  if (!(tau0 > 0.0)) throw DomainError("evolve_case_b: tau0 must be positive");
  if (state.step_index >= 1 && !state.amps_prev) {
    throw UsageError("evolve_case_b: leapfrog state past step 0 lacks previous amplitudes");
  }
  const Eigen::ArrayXd E = state.grid.energies(state.m);
  const Eigen::ArrayXd theta = (tau0 * E).sin();  // τ0 E_D
  const Eigen::ArrayXcd kick = Complex{0.0, -2.0} * theta.cast<Complex>();
  const std::size_t first = state.step_index;

  Recorder rec(state, "leapfrog", options);
  rec.record(state, 0.0, 0.0);
  for (std::size_t i = 1; i <= steps; ++i) {
    if (state.step_index == 0) {
      Eigen::ArrayXcd root(theta.size());
      for (Eigen::Index k = 0; k < theta.size(); ++k) root[k] = physical_root_at_phase(tau0 * E[k]);
      Eigen::ArrayXcd next = root * state.amps;
      state.amps_prev = std::move(state.amps);
      state.amps = std::move(next);
    } else {
      Eigen::ArrayXcd next = *state.amps_prev + kick * state.amps;
      state.amps_prev = std::move(state.amps);
      state.amps = std::move(next);
    }
    ++state.step_index;
    if (rec.due(i, steps)) {
      const double t = static_cast<double>(state.step_index - first) * tau0;
      rec.record(state, t, t);
    }
  }
  return rec.finish();
}

Trajectory evolve_effective(PacketState& state, const StepSpec& spec, double dt, std::size_t steps,
                            const EvolveOptions& options) {
  require_steps(steps, "evolve_effective");
  require_stride(options);
  if (!std::holds_alternative<EffectiveDispersion>(state.scheme)) {
    throw UsageError("evolve_effective: state scheme is " + scheme_name(state.scheme) +
                     ", not effective");
  }
  if (!(dt > 0.0)) throw DomainError("evolve_effective: dt must be positive");
  const Eigen::ArrayXd E = state.grid.energies(state.m);
  Eigen::ArrayXcd phase(E.size());
  double worst_imag = 0.0;
  double scale = 0.0;
  for (Eigen::Index k = 0; k < E.size(); ++k) {
    const Complex ed = deformed_energy(spec, E[k]);
    worst_imag = std::max(worst_imag, std::abs(ed.imag()));
    scale = std::max(scale, std::abs(ed));
    phase[k] = std::polar(1.0, -dt * ed.real());
  }
  if (worst_imag > 1e-12 * std::max(1.0, scale)) {
    std::ostringstream msg;
    msg << "evolve_effective: reality condition violated, max |Im E_D| = " << worst_imag
        << " on the grid for lambda = " << spec.lambda() << ", delta_s = " << spec.delta_s();
    throw DomainError(msg.str());
  }
  const std::size_t first = state.step_index;
  Recorder rec(state, "effective", options);
  rec.record(state, 0.0, 0.0);
  for (std::size_t i = 1; i <= steps; ++i) {
    state.amps *= phase;
    ++state.step_index;
    if (rec.due(i, steps)) {
      const double t = static_cast<double>(state.step_index - first) * dt;
      rec.record(state, t, t);
    }
  }
  return rec.finish();
}

// ---------------------------------------------------------------------------

Observables observables(const PacketState& state) {
  PositionTransform transform(state.grid);
  return observables(state, transform);
}

Observables observables(const PacketState& state, PositionTransform& transform) {
  const Eigen::ArrayXd rho_p = state.amps.abs2();
  const double dp = state.grid.dp();
  Observables o;
  o.norm = total_probability(rho_p, dp);
  if (!(o.norm > 0.0)) throw ProbeError("observables: degenerate state with zero norm");
  const Eigen::ArrayXd p = state.grid.momenta();
  o.spectral_centroid_p = total_probability(p * rho_p, dp) / o.norm;
  o.spectral_mean_abs_p = total_probability(p.abs() * rho_p, dp) / o.norm;
  const PositionDensity d = position_density(state, transform);
  o.centroid_x = total_probability(state.grid.positions() * d.rho, state.grid.dx()) / d.norm;
  o.quantile_front_x = front_quantile(state.grid, d.rho, d.norm);
  return o;
}

Complex mode_oracle(double p, double m, const Scheme& scheme, std::size_t steps) {
  const double E = rel_energy(std::abs(p), m);
  const auto n = static_cast<double>(steps);
  return std::visit(
      Overloaded{
          [&](const CaseALiteral& s) { return Complex{std::exp(n * s.tau1 * E), 0.0}; },
          [&](const CaseBLeapfrog& s) {
            const Complex z = physical_root_at_phase(s.tau0 * E);
            return std::polar(1.0, n * std::arg(z));
          },
          [&](const EffectiveDispersion& s) {
            return std::exp(Complex{0.0, -n * s.dt} * deformed_energy(s.spec, E));
          }},
      scheme);
}

double mean_group_speed(const MomentumGrid& grid, const Eigen::ArrayXd& density,
                        const StepSpec& spec, double m) {
  Eigen::ArrayXd v(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    v[static_cast<Eigen::Index>(k)] = group_speed_1d(spec, grid.momentum(k), m);
  }
  return numerics::pairwise_sum(density * v) / numerics::pairwise_sum(density);
}

LightConeReport light_cone_report(const Trajectory& traj, const StepSpec& spec, double m) {
  if (traj.records.size() < 10) {
    throw UsageError("light_cone_report: need >= 10 trajectory records, got " +
                     std::to_string(traj.records.size()));
  }
  if (traj.semantics != "effective") {
    throw UsageError("light_cone_report: trajectory produced by '" + traj.semantics +
                     "', expected effective-dispersion evolution");
  }
  const std::size_t start = traj.records.size() / 2;
  std::vector<double> t;
  std::vector<double> xc;
  std::vector<double> xf;
  for (std::size_t i = start; i < traj.records.size(); ++i) {
    t.push_back(traj.records[i].t);
    xc.push_back(traj.records[i].centroid_x);
    xf.push_back(traj.records[i].front_x);
  }
  const numerics::LineFit centroid = numerics::fit_line(t, xc);
  const numerics::LineFit front = numerics::fit_line(t, xf);
  LightConeReport r;
  r.fitted_centroid_speed = centroid.slope;
  r.centroid_speed_stderr = centroid.slope_stderr;
  r.fitted_front_speed = front.slope;
  r.predicted_speed = mean_group_speed(traj.grid, traj.initial_density, spec, m);
  r.superluminal = std::abs(r.fitted_centroid_speed) > 1.0 + 3.0 * r.centroid_speed_stderr;
  return r;
}

}  // namespace chronon
