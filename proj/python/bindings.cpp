#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "levitsim/cavity.hpp"
#include "levitsim/collision.hpp"
#include "levitsim/errors.hpp"
#include "levitsim/langevin.hpp"
#include "levitsim/noise.hpp"
#include "levitsim/scenario.hpp"
#include "levitsim/sensing.hpp"
#include "levitsim/spinmech.hpp"
#include "levitsim/stats.hpp"

namespace py = pybind11;
using namespace levitsim;

namespace {

py::object to_python(const io::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

io::json from_python(const py::object& o) {
  return io::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::array_t<double> as_array(std::vector<double> v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<std::complex<double>> as_array(const Eigen::VectorXcd& v) {
  return py::array_t<std::complex<double>>(v.size(), v.data());
}

}  // namespace

PYBIND11_MODULE(_levitsim, m) {
  m.doc() = "Levitated optomechanics simulation toolkit";
  m.attr("__version__") = toolkit_version();

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<TruncationError>(m, "TruncationError", numerical.ptr());
  py::register_exception<InstabilityError>(m, "InstabilityError", numerical.ptr());

  py::enum_<Axis>(m, "Axis").value("X", Axis::X).value("Y", Axis::Y).value("Z", Axis::Z);

  py::class_<Particle>(m, "Particle")
      .def(py::init<double, double, double>(), py::arg("radius"), py::arg("density"),
           py::arg("permittivity") = 2.1)
      .def_property_readonly("radius", &Particle::radius)
      .def_property_readonly("density", &Particle::density)
      .def_property_readonly("permittivity", &Particle::relative_permittivity)
      .def_property_readonly("mass", &Particle::mass)
      .def_property_readonly("volume", &Particle::volume)
      .def("__repr__", [](const Particle& p) {
        return "Particle(radius=" + std::to_string(p.radius()) + ", density=" + std::to_string(p.density()) + ")";
      });

  py::class_<GasEnvironment>(m, "GasEnvironment")
      .def(py::init<double, double, double>(), py::arg("pressure"), py::arg("temperature"),
           py::arg("molecule_mass") = constants::kAirMoleculeMass)
      .def_property_readonly("pressure", &GasEnvironment::pressure)
      .def_property_readonly("temperature", &GasEnvironment::temperature)
      .def_property_readonly("mean_speed", &GasEnvironment::mean_speed);

  py::class_<TrapConfig>(m, "TrapConfig")
      .def(py::init<Vec3, double, double>(), py::arg("omega"), py::arg("wavelength") = 1064e-9,
           py::arg("intensity") = 1e12)
      .def_property_readonly("omega", py::overload_cast<>(&TrapConfig::omega, py::const_));

  m.def("gas_damping", &gas_damping, py::arg("particle"), py::arg("gas"));
  m.def("zero_point_fluctuation", &zero_point_fluctuation, py::arg("mass"), py::arg("omega"));

  // Langevin
  py::class_<ModeFit>(m, "ModeFit")
      .def_readonly("temperature", &ModeFit::temperature)
      .def_readonly("gamma_total", &ModeFit::gamma_total)
      .def_readonly("omega", &ModeFit::omega)
      .def_readonly("residual", &ModeFit::residual);

  m.def(
      "simulate",
      [](const Particle& p, const GasEnvironment& gas, const TrapConfig& trap, double duration,
         std::uint64_t seed, Vec3 gamma_cool, std::size_t record_stride, std::optional<double> dt) {
        FeedbackConfig fb{gamma_cool};
        const auto params = OscillatorParams::from(p, gas, trap, fb);
        SimulationOptions opt;
        opt.record_stride = record_stride;
        const auto traj = [&] {
          py::gil_scoped_release release;
          return simulate(params, duration, dt ? *dt : max_step(params), seed, opt);
        }();
        const auto n = static_cast<py::ssize_t>(traj.samples.size());
        py::array_t<double> x({n, py::ssize_t{3}}), v({n, py::ssize_t{3}});
        auto xm = x.mutable_unchecked<2>();
        auto vm = v.mutable_unchecked<2>();
        for (py::ssize_t i = 0; i < n; ++i) {
          for (py::ssize_t k = 0; k < 3; ++k) {
            xm(i, k) = traj.samples[i].position[k];
            vm(i, k) = traj.samples[i].velocity[k];
          }
        }
        py::dict out;
        out["dt"] = traj.dt;
        out["position"] = x;
        out["velocity"] = v;
        return out;
      },
      py::arg("particle"), py::arg("gas"), py::arg("trap"), py::arg("duration"), py::arg("seed"),
      py::arg("gamma_cool") = Vec3{0.0, 0.0, 0.0}, py::arg("record_stride") = 1,
      py::arg("dt") = py::none(),
      "Simulates the three axes. Returns {'dt', 'position', 'velocity'} with (n, 3) arrays.");

  m.def(
      "estimate_psd",
      [](const std::vector<double>& series, double dt, std::size_t segment_length, double overlap) {
        const auto s = estimate_psd(series, dt, {segment_length, overlap});
        return py::make_tuple(as_array(s.frequencies), as_array(s.values));
      },
      py::arg("series"), py::arg("dt"), py::arg("segment_length") = 0, py::arg("overlap") = 0.5,
      "Welch estimate. Returns (omega, S) with <x^2> = (1/pi) int S d omega.");

  m.def(
      "fit_mode",
      [](const std::vector<double>& omega, const std::vector<double>& values, double mass) {
        Spectrum s;
        s.frequencies = omega;
        s.values = values;
        return fit_mode(s, mass);
      },
      py::arg("omega"), py::arg("psd"), py::arg("mass"));

  m.def(
      "ks_normal",
      [](const std::vector<double>& x, double sigma) {
        const auto r = stats::ks_test(x, [sigma](double v) { return stats::normal_cdf(v, sigma); });
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("samples"), py::arg("sigma"), "KS test against N(0, sigma^2). Returns (D, p).");

  // Cavity
  py::class_<OptoCoupling>(m, "OptoCoupling")
      .def(py::init([](double g, std::complex<double> alpha_c, double delta_eff) {
             OptoCoupling c;
             c.g = g;
             c.alpha_c = alpha_c;
             c.delta_eff = delta_eff;
             return c;
           }),
           py::arg("g"), py::arg("alpha_c"), py::arg("delta_eff"))
      .def_readonly("g", &OptoCoupling::g)
      .def_readonly("alpha_c", &OptoCoupling::alpha_c)
      .def_readonly("delta_eff", &OptoCoupling::delta_eff);

  py::class_<CoolingResult>(m, "CoolingResult")
      .def_readonly("n_final", &CoolingResult::n_final)
      .def_readonly("gamma", &CoolingResult::gamma)
      .def_readonly("stable", &CoolingResult::stable)
      .def_readonly("heating", &CoolingResult::heating);

  m.def("solve_coupling",
        [](double g, double delta, double rabi, double omega_m, double kappa) {
          return solve_coupling(g, DriveConfig{delta, rabi, 0.0}, omega_m, kappa);
        },
        py::arg("g"), py::arg("detuning"), py::arg("rabi"), py::arg("omega_m"), py::arg("kappa"));
  m.def("steady_state", &steady_state, py::arg("coupling"), py::arg("omega_m"), py::arg("kappa"));
  m.def("optimal_detuning", &optimal_detuning, py::arg("omega_m"), py::arg("kappa"));
  m.def(
      "covariance_dynamics",
      [](const OptoCoupling& c, double omega_m, double kappa, double n_init, const std::vector<double>& t) {
        return as_array(covariance_dynamics(c, omega_m, kappa, n_init, t).phonons);
      },
      py::arg("coupling"), py::arg("omega_m"), py::arg("kappa"), py::arg("n_init"), py::arg("times"));
  m.def(
      "squeezing_db", [](double kappa, double omega_m) { return squeezing_variance(kappa, omega_m).db; },
      py::arg("kappa"), py::arg("omega_m"));

  // Noise
  m.def("recoil_heating_rate", &recoil_rate_linear, py::arg("particle"), py::arg("omega"),
        py::arg("wavelength") = 1064e-9);
  m.def("intensity_heating", &intensity_heating, py::arg("omega"), py::arg("s_eps"));
  m.def("pointing_heating", &pointing_heating, py::arg("mass"), py::arg("omega"), py::arg("s_x"));

  // Spin mechanics
  m.def("spin_coupling", &spin_coupling, py::arg("particle"), py::arg("omega_m"), py::arg("gradient"));
  m.def(
      "prepare_fock",
      [](std::size_t n, double lambda, std::size_t dim) {
        const auto f = prepare_fock(n, lambda, dim);
        py::dict out;
        out["fidelity"] = f.fidelity;
        out["amplitudes"] = as_array(f.state.amplitudes());
        out["populations"] = as_array(f.state.phonon_populations());
        out["pulses"] = f.sequence.size();
        return out;
      },
      py::arg("n"), py::arg("lambda_"), py::arg("dim"));
  m.def(
      "cat_protocol",
      [](const Particle& p, double omega, double gradient, std::size_t n_m, double t_flight) {
        const auto c = cat_protocol(p, omega, gradient, n_m);
        py::dict out;
        out["lambda"] = c.lambda;
        out["a2"] = c.a2;
        out["d_m"] = c.d_m;
        out["d_m_numeric"] = c.d_m_numeric;
        out["dim"] = c.dim;
        out["fringe_period"] = c.d_m > 0.0 ? c.fringe_period(t_flight) : 0.0;
        return out;
      },
      py::arg("particle"), py::arg("omega"), py::arg("gradient"), py::arg("n_m") = 0,
      py::arg("t_flight") = 10e-3);

  // Sensing
  py::enum_<SweepAxis>(m, "SweepAxis")
      .value("RADIUS", SweepAxis::Radius)
      .value("FREQUENCY", SweepAxis::Frequency)
      .value("PRESSURE", SweepAxis::Pressure)
      .value("TEMPERATURE", SweepAxis::Temperature);

  py::class_<SensingScenario>(m, "SensingScenario")
      .def(py::init([](const Particle& p, const GasEnvironment& gas, double omega0, double bandwidth,
                       double wavelength, double r_plus) {
             SensingScenario s{p, gas, omega0, bandwidth, wavelength, r_plus, std::nullopt};
             validate(s);
             return s;
           }),
           py::arg("particle"), py::arg("gas"), py::arg("omega0"), py::arg("bandwidth") = 1.0,
           py::arg("wavelength") = 1064e-9, py::arg("r_plus") = 0.0);

  m.def(
      "f_min",
      [](const SensingScenario& s) {
        const auto r = f_min_recoil(s);
        py::dict out;
        out["f_min"] = r.f_min;
        out["a_min"] = r.a_min;
        out["chi"] = r.chi;
        out["regime"] = to_string(r.regime);
        return out;
      },
      py::arg("scenario"));
  m.def("f_min_damping", &f_min_damping, py::arg("mass"), py::arg("temperature"), py::arg("bandwidth"),
        py::arg("gamma"));
  m.def("scaling_exponent", &scaling_exponent, py::arg("scenario"), py::arg("axis"),
        py::arg("rel_step") = 1e-4);
  m.def(
      "sweep",
      [](const SensingScenario& s, SweepAxis axis, const std::vector<double>& grid) {
        std::vector<double> f;
        for (const auto& p : sweep(s, axis, grid)) f.push_back(p.point.f_min);
        return as_array(std::move(f));
      },
      py::arg("scenario"), py::arg("axis"), py::arg("grid"));
  m.def("yukawa_scale", &yukawa_scale, py::arg("density"), py::arg("alpha"), py::arg("length"));

  // Collisions
  m.def("collision_rate", &collision_rate, py::arg("particle"), py::arg("gas"));
  m.def(
      "simulate_collisions",
      [](const Particle& p, const GasEnvironment& gas, double omega_j, double t_sur, bool inelastic,
         double duration, std::uint64_t seed, double g, double alpha, double kappa) {
        const CollisionScenario s{p, gas, omega_j, {g, alpha, kappa}, t_sur,
                                  inelastic ? Elasticity::Inelastic : Elasticity::Elastic};
        const auto st = [&] {
          py::gil_scoped_release release;
          return simulate_stream(s, duration, seed);
        }();
        std::vector<double> t, kick, photons;
        for (const auto& e : st.events) {
          t.push_back(e.time);
          kick.push_back(e.n_kick);
          photons.push_back(static_cast<double>(e.photons));
        }
        py::dict out;
        out["time"] = as_array(std::move(t));
        out["n_kick"] = as_array(std::move(kick));
        out["photons"] = as_array(std::move(photons));
        out["rate"] = st.rate;
        out["n0"] = st.n0;
        out["warnings"] = st.warnings;
        out["temperature_estimate"] = st.events.empty()
                                          ? py::object(py::none())
                                          : py::cast(surface_temperature_estimate(st.events, p, gas, omega_j));
        return out;
      },
      py::arg("particle"), py::arg("gas"), py::arg("omega_j"), py::arg("t_sur"), py::arg("inelastic"),
      py::arg("duration"), py::arg("seed"), py::arg("g") = 1e6, py::arg("alpha") = 1.0, py::arg("kappa") = 1e7);

  // Scenarios
  m.def(
      "validate_scenario", [](const py::object& doc) { return to_python(to_json(parse_scenario(from_python(doc)))); },
      py::arg("document"), "Strictly parses a scenario document and returns its normalised form.");
  m.def(
      "resolve_scenario",
      [](const py::object& doc) { return to_python(parse_scenario(from_python(doc)).resolved); },
      py::arg("document"), "SI-resolved parameters with defaults applied.");
  m.def(
      "run_scenario",
      [](const py::object& source, std::optional<std::filesystem::path> out,
         std::optional<std::uint64_t> seed, const std::string& format) {
        const Scenario s = py::isinstance<py::dict>(source)
                               ? parse_scenario(from_python(source))
                               : parse_scenario(source.cast<std::filesystem::path>());
        RunOptions opt;
        opt.seed = seed;
        if (out) opt.out_root = *out;
        opt.format = output_format_from_string(format);
        const auto manifest = [&] {
          py::gil_scoped_release release;
          return run_scenario(s, opt);
        }();
        py::dict result;
        result["directory"] = manifest.directory;
        result["manifest"] = to_python(to_json(manifest));
        result["summary"] = to_python(manifest.summary);
        return result;
      },
      py::arg("scenario"), py::arg("out") = py::none(), py::arg("seed") = py::none(),
      py::arg("format") = "csv",
      "Runs a scenario given as a path or a dict. Returns {'directory', 'manifest', 'summary'}.");
}
