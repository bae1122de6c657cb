#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "levitsim/cavity.hpp"
#include "levitsim/collision.hpp"
#include "levitsim/errors.hpp"
#include "levitsim/langevin.hpp"
#include "levitsim/noise.hpp"
#include "levitsim/sensing.hpp"
#include "levitsim/spinmech.hpp"
#include "levitsim/stats.hpp"
#include "scenario_internal.hpp"

namespace levitsim {

namespace detail {

namespace {

using io::quantity;

double num(const json& r, const char* key) { return r.at(key).get<double>(); }
std::int64_t whole(const json& r, const char* key) { return r.at(key).get<std::int64_t>(); }

std::vector<double> grid(double lo, double hi, std::size_t n, bool log_spacing) {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    g[i] = log_spacing ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  g.back() = hi;
  return g;
}

io::Table spectrum_table(const Spectrum& s) {
  io::Table t{{"omega_rad_s", "psd_m2_s"}, {}};
  for (std::size_t i = 0; i < s.frequencies.size(); ++i) {
    t.add_row({s.frequencies[i], s.values[i]});
  }
  return t;
}

json fit_json(const ModeFit& f) {
  return {{"temperature", quantity(f.temperature, "K")},
          {"gamma_total", quantity(f.gamma_total, "1/s")},
          {"omega", quantity(f.omega, "rad/s")},
          {"residual", f.residual}};
}

const char* axis_name(Axis a) {
  static const char* names[] = {"x", "y", "z"};
  return names[static_cast<std::size_t>(a)];
}

}  // namespace

Axis axis_from_string(const std::string& s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  throw ConfigError("unknown axis '" + s + "' (expected x, y or z)");
}

Particle make_particle(const json& r) {
  const json& p = r.at("particle");
  const double radius = num(p, "radius");
  const bool has_density = p.contains("density");
  const bool has_mass = p.contains("mass");
  if (has_density && has_mass) {
    throw ConfigError("'particle' takes either 'density' or 'mass', not both");
  }
  if (!has_density && !has_mass) throw ConfigError("missing required field 'particle.density'");
  const double volume = 4.0 / 3.0 * constants::kPi * radius * radius * radius;
  const double density = has_density ? num(p, "density") : num(p, "mass") / volume;
  return Particle(radius, density, num(p, "permittivity"));
}

GasEnvironment make_gas(const json& r) {
  const json& g = r.at("gas");
  return GasEnvironment(num(g, "pressure"), num(g, "temperature"), num(g, "molecule_mass"));
}

TrapConfig make_trap(const json& r) {
  const json& t = r.at("trap");
  const auto& f = t.at("frequencies");
  return TrapConfig({f[0].get<double>(), f[1].get<double>(), f[2].get<double>()},
                    num(t, "wavelength"), num(t, "intensity"));
}

CavityConfig make_cavity(const json& r) {
  const json& c = r.at("cavity");
  const double omega_c = 2.0 * constants::kPi * constants::kSpeedOfLight / num(c, "wavelength");
  return CavityConfig::with_aligned_trap(num(c, "length"), num(c, "waist"), num(c, "kappa"),
                                         omega_c);
}

namespace {

SensingScenario make_sensing(const json& r) {
  SensingScenario s{make_particle(r), make_gas(r), 0.0, 1.0, 1064e-9, 0.0, std::nullopt};
  s.omega0 = num(r, "frequency");
  s.bandwidth = num(r, "bandwidth");
  s.wavelength = num(r, "wavelength");
  s.r_plus = num(r, "r_plus");
  validate(s);
  return s;
}

CollisionScenario make_collision(const json& r) {
  const json& c = r.at("coupling");
  CollisionScenario s{make_particle(r),
                      make_gas(r),
                      num(r, "omega_j"),
                      {num(c, "g"), num(c, "alpha"), num(c, "kappa")},
                      num(r, "t_sur"),
                      elasticity_from_string(r.at("elasticity").get<std::string>())};
  validate(s);
  return s;
}

OptoCoupling make_coupling(const json& r) {
  const double omega = num(r, "omega_m");
  const double kappa = num(r, "kappa");
  if (r.contains("g")) {
    const json& d = r.at("drive");
    DriveConfig drive{num(d, "detuning"), num(d, "rabi"), num(d, "power")};
    return solve_coupling(num(r, "g"), drive, omega, kappa);
  }
  return OptoCoupling{num(r, "enhanced_coupling"), {1.0, 0.0}, num(r, "delta_eff")};
}

const char* sweep_dimension(SweepAxis a) {
  switch (a) {
    case SweepAxis::Radius: return "length";
    case SweepAxis::Frequency: return "angular frequency";
    case SweepAxis::Pressure: return "pressure";
    case SweepAxis::Temperature: return "temperature";
  }
  return "?";
}

void check_kind_impl(ScenarioKind k, const json& r) {
  if (r.contains("particle")) make_particle(r);
  if (r.contains("gas")) make_gas(r);
  if (r.contains("trap")) make_trap(r);
  if (r.contains("cavity")) make_cavity(r);
  switch (k) {
    case ScenarioKind::Brownian:
    case ScenarioKind::Feedback:
    case ScenarioKind::Budget:
      break;
    case ScenarioKind::CavityCool: {
      const bool chain = r.contains("g") || r.contains("drive");
      const bool direct = r.contains("enhanced_coupling") || r.contains("delta_eff");
      if (chain == direct) {
        throw ConfigError("cavity-cool needs either 'g' with 'drive' or 'enhanced_coupling' with "
                          "'delta_eff'");
      }
      if (chain && !(r.contains("g") && r.contains("drive"))) {
        throw ConfigError(r.contains("g") ? "missing required field 'drive'"
                                          : "missing required field 'g'");
      }
      if (direct && !(r.contains("enhanced_coupling") && r.contains("delta_eff"))) {
        throw ConfigError(r.contains("delta_eff") ? "missing required field 'enhanced_coupling'"
                                                  : "missing required field 'delta_eff'");
      }
      const json& scan = r.at("scan");
      if (!(num(scan, "min_ratio") < num(scan, "max_ratio"))) {
        throw ConfigError("'scan.min_ratio' must be below 'scan.max_ratio'");
      }
      break;
    }
    case ScenarioKind::Fock:
      if (whole(r, "dim") < whole(r, "n") + 5) {
        throw ConfigError("'dim' must be at least n + 5 = " + std::to_string(whole(r, "n") + 5));
      }
      break;
    case ScenarioKind::Cat:
      if (whole(r, "sign") != 1 && whole(r, "sign") != -1) {
        throw ConfigError("'sign' must be +1 or -1");
      }
      break;
    case ScenarioKind::SenseSweep: {
      make_sensing(r);
      const json& sw = r.at("sweep");
      const auto axis = sweep_axis_from_string(sw.at("axis").get<std::string>());
      for (const char* end : {"start", "stop"}) {
        const auto dim = sw.at(end).at("dimension").get<std::string>();
        if (dim != sweep_dimension(axis)) {
          throw ConfigError(std::string("unit mismatch for 'sweep.") + end + "': a " + dim +
                            " unit on a " + to_string(axis) + " sweep");
        }
      }
      if (!(num(sw.at("start"), "value") < num(sw.at("stop"), "value"))) {
        throw ConfigError("'sweep.start' must be below 'sweep.stop'");
      }
      break;
    }
    case ScenarioKind::Collide:
      make_collision(r);
      if (r.contains("duration") == r.contains("events")) {
        throw ConfigError("collide needs exactly one of 'duration' or 'events'");
      }
      break;
  }
}

}  // namespace

void check_kind(ScenarioKind k, const json& r) {
  try {
    check_kind_impl(k, r);
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

// ---------------------------------------------------------------------------------------

Emitter::Emitter(std::filesystem::path dir, OutputFormat format)
    : dir_(std::move(dir)), format_(format) {}

void Emitter::write(const std::string& name, const std::string& content) {
  const auto path = dir_ / name;
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
  }
  files_.push_back({name, io::sha256_hex(content), content.size()});
}

void Emitter::table(const std::string& stem, const io::Table& t, const json& records) {
  if (format_ == OutputFormat::Csv) {
    std::ostringstream os;
    io::write_csv(os, t);
    write(stem + ".csv", os.str());
  } else {
    write(stem + ".json", (records.is_null() ? io::to_json(t) : records).dump(2) + "\n");
  }
}

void Emitter::json_file(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------------------
// Runners

json run_brownian(RunContext& ctx) {
  const json& r = ctx.scenario.resolved;
  const Particle p = make_particle(r);
  const GasEnvironment gas = make_gas(r);
  const TrapConfig trap = make_trap(r);
  const auto params = OscillatorParams::from(p, gas, trap);
  const double dt = r.contains("dt") ? num(r, "dt") : max_step(params);
  SimulationOptions opt;
  opt.record_stride = static_cast<std::size_t>(whole(r, "record_stride"));
  opt.scenario_hash = ctx.hash;
  const auto traj = simulate(params, num(r, "duration"), dt, ctx.seed, opt);

  std::vector<double> v;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    const auto va = traj.velocities(a);
    v.insert(v.end(), va.begin(), va.end());
  }
  const double sigma = std::sqrt(constants::kBoltzmann * gas.temperature() / p.mass());
  const double v_rms = stats::rms(v);
  const auto ks = stats::ks_test(v, [sigma](double x) { return stats::normal_cdf(x, sigma); });

  std::size_t bins = static_cast<std::size_t>(whole(r, "histogram_bins"));
  if (bins % 2 == 0) ++bins;
  const double width = 10.0 * sigma / static_cast<double>(bins);
  const double lower = -(static_cast<double>(bins / 2) + 0.5) * width;
  std::vector<std::size_t> counts(bins, 0);
  std::size_t outside = 0;
  for (double x : v) {
    const double k = std::floor((x - lower) / width);
    if (k < 0.0 || k >= static_cast<double>(bins)) {
      ++outside;
    } else {
      ++counts[static_cast<std::size_t>(k)];
    }
  }
  io::Table hist{{"v_m_per_s", "count", "pdf_empirical", "pdf_maxwell"}, {}};
  const double norm = 1.0 / (static_cast<double>(v.size()) * width);
  for (std::size_t i = 0; i < bins; ++i) {
    const double c = lower + (static_cast<double>(i) + 0.5) * width;
    const double pdf = std::exp(-0.5 * c * c / (sigma * sigma)) / (sigma * std::sqrt(2.0 * constants::kPi));
    hist.add_row({c, static_cast<std::int64_t>(counts[i]), static_cast<double>(counts[i]) * norm, pdf});
  }
  ctx.out.table("velocity_histogram", hist);

  json fits = json::object();
  const auto seg = static_cast<std::size_t>(whole(r, "welch_segment"));
  const double nyquist = constants::kPi / traj.dt;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    if (nyquist < 4.0 * trap.omega(a)) {
      ctx.warnings.push_back(std::string("axis ") + axis_name(a) +
                             ": record rate too low to resolve the mode; spectrum skipped");
      fits[axis_name(a)] = nullptr;
      continue;
    }
    const auto spec = estimate_psd(traj, a, {seg, 0.5});
    ctx.out.table(std::string("psd_") + axis_name(a), spectrum_table(spec));
    try {
      fits[axis_name(a)] = fit_json(fit_mode(spec, p.mass()));
    } catch (const FitError& e) {
      ctx.warnings.push_back(std::string("axis ") + axis_name(a) + ": " + e.what());
      fits[axis_name(a)] = nullptr;
    }
  }

  if (r.at("write_trajectory").get<bool>()) {
    io::Table t{{"t", "x", "y", "z", "vx", "vy", "vz"}, {}};
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
      const auto& s = traj.samples[i];
      t.add_row({traj.dt * static_cast<double>(i), s.position[0], s.position[1], s.position[2],
                 s.velocity[0], s.velocity[1], s.velocity[2]});
    }
    ctx.out.table("trajectory", t);
  }

  json summary;
  summary["samples"] = v.size();
  summary["dt"] = quantity(dt, "s");
  summary["record_dt"] = quantity(traj.dt, "s");
  summary["gas_damping"] = quantity(params.gamma0, "1/s");
  summary["v_rms"] = quantity(v_rms, "m/s");
  summary["v_rms_expected"] = quantity(sigma, "m/s");
  summary["v_rms_relative_error"] = v_rms / sigma - 1.0;
  summary["ks"] = {{"statistic", ks.statistic}, {"p_value", ks.p_value}};
  summary["histogram_outside"] = outside;
  summary["mode_fits"] = fits;
  if (r.contains("velocity_window")) {
    const auto fd = instantaneous_velocity(traj, num(r, "velocity_window"));
    summary["v_rms_finite_difference"] = quantity(fd.v_rms, "m/s");
  }
  return summary;
}

json run_feedback(RunContext& ctx) {
  const json& r = ctx.scenario.resolved;
  const Particle p = make_particle(r);
  const GasEnvironment gas = make_gas(r);
  const TrapConfig trap = make_trap(r);
  const Axis axis = axis_from_string(r.at("axis").get<std::string>());
  const double g0 = gas_damping(p, gas);
  const auto seg = static_cast<std::size_t>(whole(r, "segment_length"));
  const auto segments = static_cast<double>(whole(r, "segments"));
  const auto stride = static_cast<std::size_t>(whole(r, "record_stride"));

  io::Table ladder{{"ratio", "t_expected_K", "t_fit_K", "gamma_fit_per_s", "omega_fit_rad_s"}, {}};
  json rungs = json::array();
  const auto& ratios = r.at("ratios");
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double ratio = ratios[i].get<double>();
    FeedbackConfig fb;
    fb.gamma_cool[static_cast<std::size_t>(axis)] = ratio * g0;
    const auto params = OscillatorParams::from(p, gas, trap, fb);
    const double dt = max_step(params);
    SimulationOptions opt;
    opt.record_stride = stride;
    opt.scenario_hash = ctx.hash;
    // Half-overlapped segments: (segments + 1) / 2 segment lengths of samples.
    const double duration = static_cast<double>(seg) * (segments + 1.0) / 2.0 * dt *
                            static_cast<double>(stride);
    const auto traj = simulate(params, duration, dt, ctx.seed + i, opt);
    const auto spec = estimate_psd(traj, axis, {seg, 0.5});
    ctx.out.table("psd_rung_" + std::to_string(i), spectrum_table(spec));
    const double expected = params.effective_temperature(axis);
    json rung = {{"ratio", ratio}, {"t_expected", quantity(expected, "K")}};
    try {
      const auto fit = fit_mode(spec, p.mass());
      ladder.add_row({ratio, expected, fit.temperature, fit.gamma_total, fit.omega});
      rung["fit"] = fit_json(fit);
      rung["relative_error"] = fit.temperature / expected - 1.0;
    } catch (const FitError& e) {
      ctx.warnings.push_back("ratio " + io::format_double(ratio) + ": " + e.what());
      const double nan = std::numeric_limits<double>::quiet_NaN();
      ladder.add_row({ratio, expected, nan, nan, nan});
      rung["fit"] = nullptr;
    }
    rungs.push_back(std::move(rung));
  }
  ctx.out.table("ladder", ladder);
  return {{"axis", axis_name(axis)},
          {"gamma0", quantity(g0, "1/s")},
          {"bath_temperature", quantity(gas.temperature(), "K")},
          {"rungs", rungs}};
}

json run_cavity_cool(RunContext& ctx) {
  const json& r = ctx.scenario.resolved;
  const double omega = num(r, "omega_m");
  const double kappa = num(r, "kappa");
  const OptoCoupling c = make_coupling(r);
  const double big_g = c.enhanced();
  const auto result = steady_state(c, omega, kappa);

  const json& scan = r.at("scan");
  const auto ratios = grid(num(scan, "min_ratio"), num(scan, "max_ratio"),
                           static_cast<std::size_t>(whole(scan, "points")), false);
  io::Table t{{"g", "alpha_c_re", "alpha_c_im", "delta_eff", "n_final", "gamma", "s1", "s2", "stable"}, {}};
  json records = json::array();
  for (double x : ratios) {
    const OptoCoupling cs{big_g, {1.0, 0.0}, x * omega};
    const auto rs = steady_state(cs, omega, kappa);
    t.add_row({cs.g, 1.0, 0.0, cs.delta_eff,
               rs.n_final.value_or(std::numeric_limits<double>::quiet_NaN()), rs.gamma, rs.s1,
               rs.s2, static_cast<std::int64_t>(rs.stable)});
    records.push_back(io::cooling_record(cs, rs));
  }
  ctx.out.table("detuning_scan", t, records);

  const double d_opt = optimal_detuning(omega, kappa);
  const auto at_opt = steady_state(OptoCoupling{big_g, {1.0, 0.0}, d_opt}, omega, kappa);
  const auto at_sideband = steady_state(OptoCoupling{big_g, {1.0, 0.0}, -omega}, omega, kappa);

  json summary;
  summary["operating_point"] = io::cooling_record(c, result);
  summary["enhanced_coupling"] = quantity(big_g, "rad/s");
  summary["resolved_sideband"] = result.resolved_sideband;
  summary["weak_coupling"] = result.weak_coupling;
  summary["optimal_detuning"] = quantity(d_opt, "rad/s");
  summary["n_final_optimal"] = at_opt.n_final ? json(*at_opt.n_final) : json(nullptr);
  summary["n_final_sideband"] = at_sideband.n_final ? json(*at_sideband.n_final) : json(nullptr);
  summary["n_final_sideband_limit"] = std::pow(kappa / (4.0 * omega), 2);

  if (r.contains("dynamics")) {
    const json& d = r.at("dynamics");
    const double rate = 4.0 * big_g * big_g / kappa;
    // Long enough for the initial excess to fall well below the steady state.
    const double t_end =
        d.contains("t_end") ? num(d, "t_end") : (15.0 + std::log1p(num(d, "n_init"))) / rate;
    const auto times = grid(0.0, t_end, static_cast<std::size_t>(whole(d, "points")), false);
    const auto trace = covariance_dynamics(c, omega, kappa, num(d, "n_init"), times);
    io::Table dyn{{"t_s", "n_phonon"}, {}};
    for (std::size_t i = 0; i < trace.times.size(); ++i) dyn.add_row({trace.times[i], trace.phonons[i]});
    ctx.out.table("dynamics", dyn);
    summary["n_asymptote"] = trace.phonons.back();
    if (result.n_final) summary["asymptote_ratio"] = trace.phonons.back() / *result.n_final;
  }
  return summary;
}

json run_budget(RunContext& ctx) {
  const json& r = ctx.scenario.resolved;
  const json& n = r.at("noise");
  NoiseInputs in{num(n, "s_eps"), num(n, "s_x"), num(n, "linewidth"), num(n, "gamma_c"),
                 num(n, "n_c")};
  const auto b = budget(make_particle(r), make_gas(r), make_trap(r), make_cavity(r), in,
                        axis_from_string(r.at("axis").get<std::string>()));
  const json record = io::to_json(b);
  ctx.out.json_file("budget.json", record);
  json units = {{"gamma_gas", "1/s"},       {"gamma_recoil_trap", "1/s"}, {"gamma_recoil_linear", "1/s"},
                {"gamma_intensity", "1/s"}, {"gamma_pointing", "1/s"},  {"n_ph_floor", "1"}};
  json summary;
  for (const auto& [key, unit] : units.items()) summary[key] = quantity(record[key].get<double>(), unit.get<std::string>());
  summary["dominant"] = record["dominant"];
  summary["recoil_ratio"] = std::isfinite(b.recoil_ratio) ? json(b.recoil_ratio) : json(nullptr);
  return summary;
}

json run_fock(RunContext& ctx) {
  const json& r = ctx.scenario.resolved;
  const double lambda = num(r, "lambda");
  const auto n = static_cast<std::size_t>(whole(r, "n"));
  const auto dim = static_cast<std::size_t>(whole(r, "dim"));
  const auto prep = prepare_fock(n, lambda, dim);
  ctx.out.json_file("state.json", io::to_json(prep.state));

  io::Table pulses{{"step", "hamiltonian", "duration_s"}, {}};
  for (std::size_t i = 0; i < prep.sequence.size(); ++i) {
    pulses.add_row({static_cast<std::int64_t>(i + 1), to_string(prep.sequence[i].tag),
                    prep.sequence[i].duration});
  }
  ctx.out.table("pulses", pulses);
  const auto pops = prep.state.phonon_populations();
  io::Table pt{{"n", "population"}, {}};
  for (std::size_t k = 0; k < pops.size(); ++k) pt.add_row({static_cast<std::int64_t>(k), pops[k]});
  ctx.out.table("populations", pt);

  json summary;
  summary["target_n"] = n;
  summary["target_spin"] = n % 2 ? "-" : "+";
  summary["fidelity"] = prep.fidelity;
  summary["infidelity"] = 1.0 - prep.fidelity;
  summary["mean_phonons"] = prep.state.mean_phonons();
  summary["leak"] = prep.state.leak();
  summary["norm_error"] = std::fabs(prep.state.norm() - 1.0);

  if (r.contains("qnd")) {
    const json& q = r.at("qnd");
    const auto shift = qnd_shift(num(q, "rabi"), lambda, num(q, "omega_m"));
    if (!shift.valid) {
      ctx.warnings.push_back("dispersive condition ||Omega| - omega_m/2| >= 5 lambda is violated");
    }
    // Equal spin superposition on the prepared phonon state.
    const std::size_t spin = n % 2;
    Eigen::VectorXcd phonon(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) phonon[static_cast<Eigen::Index>(k)] = prep.state.amplitude(spin, k);
    phonon.normalize();
    Eigen::VectorXcd s(2);
    s << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const auto start = SpinPhononState::product(SpinBasis::Dressed, s, phonon);
    const auto ro = qnd_readout(start, shift.chi, num(q, "time"));
    io::Table qt{{"n", "population", "phase_rad"}, {}};
    for (std::size_t k = 0; k < ro.populations.size(); ++k) {
      qt.add_row({static_cast<std::int64_t>(k), ro.populations[k], ro.phases[k]});
    }
    ctx.out.table("qnd", qt);
    summary["qnd"] = {{"chi", quantity(shift.chi, "rad/s")},
                      {"valid", shift.valid},
                      {"fringe", ro.fringe},
                      {"fringe_from_state", ro.fringe_from_state}};
  }
  return summary;
}

json run_cat(RunContext& ctx) {
  const json& r = ctx.scenario.resolved;
  const Particle p = make_particle(r);
  const double omega = num(r, "omega_m");
  const int sign = static_cast<int>(whole(r, "sign"));
  const auto res = cat_protocol(p, omega, num(r, "gradient"),
                                static_cast<std::size_t>(whole(r, "n_m")),
                                static_cast<std::size_t>(whole(r, "dim")), sign);
  ctx.out.json_file("state.json", io::to_json(res.cat));

  const double t = num(r, "flight_time");
  const json& fr = r.at("fringe");
  const double tau = omega * t;
  const double half = fr.contains("half_width")
                          ? num(fr, "half_width")
                          : 0.5 * res.d_m + 4.0 * res.a2 * std::sqrt(1.0 + tau * tau);
  const auto z = grid(-half, half, static_cast<std::size_t>(whole(fr, "points")), false);
  const auto intensity = fringe_pattern(res.mass, omega, res.d_m, t, sign, z);
  io::Table ft{{"z_m", "intensity"}, {}};
  for (std::size_t i = 0; i < z.size(); ++i) ft.add_row({z[i], intensity[i]});
  ctx.out.table("fringe", ft);

  return {{"lambda", quantity(res.lambda, "rad/s")},
          {"a2", quantity(res.a2, "m")},
          {"d_m", quantity(res.d_m, "m")},
          {"d_m_over_a2", res.d_m / res.a2},
          {"d_m_numeric", quantity(res.d_m_numeric, "m")},
          {"d_m_relative_difference", res.d_m_numeric / res.d_m - 1.0},
          {"flight_time", quantity(t, "s")},
          {"fringe_period", quantity(res.fringe_period(t), "m")},
          {"fringe_period_exact", quantity(exact_fringe_period(res.mass, omega, res.d_m, t), "m")},
          {"dim", res.dim},
          {"leak", res.cat.leak()}};
}

json run_sense_sweep(RunContext& ctx) {
  const json& r = ctx.scenario.resolved;
  const auto s = make_sensing(r);
  const json& sw = r.at("sweep");
  const auto axis = sweep_axis_from_string(sw.at("axis").get<std::string>());
  const auto xs = grid(num(sw.at("start"), "value"), num(sw.at("stop"), "value"),
                       static_cast<std::size_t>(whole(sw, "points")),
                       sw.at("spacing").get<std::string>() == "log");
  const auto pts = sweep(s, axis, xs);
  io::Table t{{"x_value", "f_min_N_per_rtHz", "a_min", "chi", "regime"}, {}};
  json counts = {{"gas-limited", 0}, {"crossover", 0}, {"recoil-limited", 0}};
  for (const auto& p : pts) {
    t.add_row({p.x, p.point.f_min, p.point.a_min, p.point.chi, to_string(p.point.regime)});
    counts[to_string(p.point.regime)] = counts[to_string(p.point.regime)].get<int>() + 1;
  }
  ctx.out.table("sweep", t);
  const auto lo = with_parameter(s, axis, xs.front());
  const auto hi = with_parameter(s, axis, xs.back());
  return {{"axis", to_string(axis)},
          {"points", pts.size()},
          {"regime_counts", counts},
          {"f_min_first", quantity(pts.front().point.f_min, "N/rtHz")},
          {"f_min_last", quantity(pts.back().point.f_min, "N/rtHz")},
          {"chi_first", pts.front().point.chi},
          {"chi_last", pts.back().point.chi},
          {"exponent_first", scaling_exponent(lo, axis)},
          {"exponent_last", scaling_exponent(hi, axis)}};
}

json run_collide(RunContext& ctx) {
  const json& r = ctx.scenario.resolved;
  const auto s = make_collision(r);
  const double rate = collision_rate(s.particle, s.gas);
  double duration = 0.0;
  if (r.contains("duration")) {
    duration = num(r, "duration");
  } else {
    if (rate == 0.0) throw ConfigError("'events' needs a non-zero collision rate");
    duration = static_cast<double>(whole(r, "events")) / rate;
  }
  const auto st = simulate_stream(s, duration, ctx.seed);
  for (const auto& w : st.warnings) ctx.warnings.push_back(w);
  io::Table t{{"t_s", "n_kick", "photons"}, {}};
  double photons = 0.0, photons2 = 0.0;
  for (const auto& e : st.events) {
    t.add_row({e.time, e.n_kick, static_cast<std::int64_t>(e.photons)});
    photons += static_cast<double>(e.photons);
    photons2 += static_cast<double>(e.photons) * static_cast<double>(e.photons);
  }
  ctx.out.table("events", t);
  const auto kick = phonon_kick(s.particle, s.gas, s.omega_j, s.elasticity, s.t_sur);
  const double n_ev = static_cast<double>(st.events.size());
  json summary;
  summary["duration"] = quantity(duration, "s");
  summary["events"] = st.events.size();
  summary["rate"] = quantity(rate, "1/s");
  summary["empirical_rate"] = quantity(n_ev / duration, "1/s");
  summary["n0"] = st.n0;
  summary["elastic_detectable"] = kick.elastic_detectable;
  summary["inelastic_detectable"] = kick.inelastic_detectable;
  summary["pulse_duration"] = quantity(st.pulse.tau, "s");
  summary["resolvable"] = st.pulse.resolvable.value_or(false);
  if (n_ev > 0) {
    const double mean = photons / n_ev;
    const double var = std::max(0.0, photons2 / n_ev - mean * mean);
    summary["mean_photons"] = mean;
    summary["mean_photons_stderr"] = std::sqrt(var / n_ev);
    summary["temperature_estimate"] = quantity(
        surface_temperature_estimate(st.events, s.particle, s.gas, s.omega_j), "K");
  }
  return summary;
}

}  // namespace detail

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Files listed by an earlier manifest in the same directory are removed so that the
// directory only holds what the new manifest lists.
void remove_previous_outputs(const std::filesystem::path& dir) {
  const auto manifest = dir / "manifest.json";
  std::ifstream in(manifest);
  if (!in) return;
  io::json old;
  try {
    old = io::json::parse(in);
  } catch (const io::json::exception&) {
    return;
  }
  if (!old.contains("files") || !old["files"].is_array()) return;
  for (const auto& f : old["files"]) {
    if (!f.contains("path") || !f["path"].is_string()) continue;
    const std::filesystem::path rel = f["path"].get<std::string>();
    if (rel.is_absolute() || rel.has_parent_path()) continue;
    std::error_code ec;
    std::filesystem::remove(dir / rel, ec);
  }
  std::error_code ec;
  std::filesystem::remove(manifest, ec);
}

}  // namespace

RunManifest run_scenario(const Scenario& s, const RunOptions& options) {
  RunManifest m;
  m.scenario = s.name;
  m.kind = to_string(s.kind);
  m.scenario_hash = scenario_hash(s);
  m.version = toolkit_version();
  m.timestamp = utc_timestamp();
  m.seed = options.seed.value_or(s.seed);
  m.parameters = s.parameters;
  m.resolved = s.resolved;

  const auto root = options.out_root.empty() ? default_output_root() : options.out_root;
  m.directory = root / (s.output.empty() ? s.name : s.output);
  std::filesystem::create_directories(m.directory);
  remove_previous_outputs(m.directory);

  detail::Emitter out(m.directory, options.format);
  detail::RunContext ctx{s, m.seed, m.scenario_hash, out, m.warnings};
  switch (s.kind) {
    case ScenarioKind::Brownian: m.summary = detail::run_brownian(ctx); break;
    case ScenarioKind::Feedback: m.summary = detail::run_feedback(ctx); break;
    case ScenarioKind::CavityCool: m.summary = detail::run_cavity_cool(ctx); break;
    case ScenarioKind::Budget: m.summary = detail::run_budget(ctx); break;
    case ScenarioKind::Fock: m.summary = detail::run_fock(ctx); break;
    case ScenarioKind::Cat: m.summary = detail::run_cat(ctx); break;
    case ScenarioKind::SenseSweep: m.summary = detail::run_sense_sweep(ctx); break;
    case ScenarioKind::Collide: m.summary = detail::run_collide(ctx); break;
  }
  io::json summary = {{"scenario", s.name}, {"kind", m.kind}, {"seed", m.seed}};
  summary.update(m.summary);
  m.summary = summary;
  out.json_file("summary.json", m.summary);
  m.files = out.files();

  const auto manifest = to_json(m).dump(2) + "\n";
  std::ofstream f(m.directory / "manifest.json", std::ios::binary | std::ios::trunc);
  f << manifest;
  if (!f) throw std::runtime_error("cannot write manifest in '" + m.directory.string() + "'");
  return m;
}

}  // namespace levitsim
