#include "qdint/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <thread>

#include <json.hpp>

#include "qdint/dressed.hpp"
#include "qdint/dynamics.hpp"
#include "qdint/interference.hpp"
#include "qdint/response.hpp"

namespace qdint {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------- parameters

// Collects every missing/mistyped key before failing, so one error message
// reports the whole problem.
class Params {
public:
    explicit Params(const std::map<std::string, ParamValue>& map) : map_(&map) {}

    double num(const std::string& key)
    {
        const auto it = map_->find(key);
        if (it == map_->end()) {
            missing_.push_back(key);
            return 0.0;
        }
        if (const double* d = std::get_if<double>(&it->second))
            return *d;
        bad_.push_back(key + " (expected a number)");
        return 0.0;
    }

    double num_or(const std::string& key, double fallback)
    {
        const auto it = map_->find(key);
        if (it == map_->end())
            return fallback;
        if (const double* d = std::get_if<double>(&it->second))
            return *d;
        bad_.push_back(key + " (expected a number)");
        return fallback;
    }

    std::string str(const std::string& key)
    {
        const auto it = map_->find(key);
        if (it == map_->end()) {
            missing_.push_back(key);
            return {};
        }
        if (const std::string* s = std::get_if<std::string>(&it->second))
            return *s;
        bad_.push_back(key + " (expected a string)");
        return {};
    }

    std::string str_or(const std::string& key, const std::string& fallback)
    {
        const auto it = map_->find(key);
        if (it == map_->end())
            return fallback;
        if (const std::string* s = std::get_if<std::string>(&it->second))
            return *s;
        bad_.push_back(key + " (expected a string)");
        return fallback;
    }

    void finish(const std::string& scenario) const
    {
        if (missing_.empty() && bad_.empty())
            return;
        std::string msg = "config validation failed for scenario '" + scenario + "':";
        if (!missing_.empty()) {
            msg += " missing required parameter(s):";
            for (const std::string& k : missing_)
                msg += " " + k;
            msg += ";";
        }
        for (const std::string& k : bad_)
            msg += " invalid " + k + ";";
        throw ValidationError(msg);
    }

private:
    const std::map<std::string, ParamValue>* map_;
    std::vector<std::string> missing_;
    std::vector<std::string> bad_;
};

std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> xs(n);
    if (n == 1) {
        xs[0] = a;
        return xs;
    }
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = a + (b - a) * double(i) / double(n - 1);
    return xs;
}

std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// least-squares slope of ln(v) over t, restricted to usable samples
double fit_decay_rate(const std::vector<double>& t, const std::vector<double>& v)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (v[i] <= 1e-13)
            continue;
        const double y = std::log(v[i]);
        sx += t[i];
        sy += y;
        sxx += t[i] * t[i];
        sxy += t[i] * y;
        ++n;
    }
    if (n < 2)
        return 0.0;
    const double denom = double(n) * sxx - sx * sx;
    if (denom == 0.0)
        return 0.0;
    return -(double(n) * sxy - sx * sy) / denom;
}

// ------------------------------------------------------------ physics setups

Liouvillian two_atom_liouvillian(double gamma, double gamma12, double omega12, double rabi,
                                 double delta_l, bool driven)
{
    const LevelScheme scheme = make_two_atom(gamma, gamma);
    const CouplingCoefficients coup =
        CouplingCoefficients::explicit_coupling(gamma, gamma, gamma12, 0.0, 0.0, omega12);
    if (!driven)
        return build_liouvillian(scheme, DriveField::none(), coup, Frame::Lab);
    const double omega0 =
        0.5 * (scheme.transition_frequency(0) + scheme.transition_frequency(1));
    // delta_l = omega0 - omegaL
    const DriveField drive = DriveField::both(rabi, rabi, omega0 - delta_l);
    return build_liouvillian(scheme, drive, coup, Frame::RotatingAtLaser);
}

Liouvillian v_decay_liouvillian(double gamma2, double delta, double gamma12)
{
    const LevelScheme scheme = make_v_scheme(1.0, gamma2, delta);
    const CouplingCoefficients coup =
        CouplingCoefficients::explicit_coupling(1.0, gamma2, gamma12);
    return build_liouvillian(scheme, DriveField::none(), coup, Frame::Lab);
}

Liouvillian v_both_driven_liouvillian(double rabi1, double rabi2, double delta, double delta_l,
                                      double gamma2, double gamma12, double delta12 = 0.0)
{
    const LevelScheme scheme = make_v_scheme(1.0, gamma2, delta);
    const CouplingCoefficients coup =
        CouplingCoefficients::explicit_coupling(1.0, gamma2, gamma12, delta12);
    const double omega0 =
        0.5 * (scheme.transition_frequency(0) + scheme.transition_frequency(1));
    // delta_l = omegaL - (omega1 + omega2)/2
    const DriveField drive = DriveField::both(rabi1, rabi2, omega0 + delta_l);
    return build_liouvillian(scheme, drive, coup, Frame::RotatingAtLaser);
}

struct SingleDriven {
    LevelScheme scheme;
    Liouvillian liou;
};

// Strong drive resonant with the |1>-|2> transition only; the undriven upper
// level |3> sits `delta` above |1>.
SingleDriven v_single_driven(double rabi, double delta, double gamma2, double gamma12)
{
    SingleDriven out{make_v_scheme(1.0, gamma2, -delta), {}};
    const CouplingCoefficients coup =
        CouplingCoefficients::explicit_coupling(1.0, gamma2, gamma12);
    const DriveField drive = DriveField::single(DriveField::Target::Transition1, rabi,
                                                out.scheme.transition_frequency(0));
    out.liou = build_liouvillian(out.scheme, drive, coup, Frame::RotatingAtLaser);
    return out;
}

DensityMatrix v_initial_state(const LevelScheme& scheme, const std::string& which)
{
    const double inv = 1.0 / std::sqrt(2.0);
    if (which == "s")
        return DensityMatrix::pure({inv, 0.0, inv}, scheme.basis_labels());
    if (which == "a")
        return DensityMatrix::pure({inv, 0.0, -inv}, scheme.basis_labels());
    if (which == "mixed-upper") {
        ComplexMatrix m(3, 3);
        m(0, 0) = 0.5;
        m(2, 2) = 0.5;
        return DensityMatrix(std::move(m), scheme.basis_labels());
    }
    return DensityMatrix::level(scheme, which);
}

// Collective-state populations of the driven two-atom system. The closed
// form reads its variables as pair quantities: detuning 2(omega_L - omega_0)
// and dipole-dipole shift 2*Omega12. Both signs are pinned by exact limits:
// the independent-atom product state, and the collective resonance sitting
// at omega_0 + Omega12.
struct CollectiveReference {
    double ee, ss, aa, gg;
};
CollectiveReference eq53_reference(double rabi, double delta_l, double gamma, double gamma12,
                                   double omega12)
{
    const double o2 = rabi * rabi;
    const double o4 = o2 * o2;
    const double dl = 2.0 * delta_l;
    const double o12 = 2.0 * omega12;
    const double g2 = gamma * gamma + dl * dl;
    const double d = o4 + g2 * (o2 + 0.25 * ((gamma + gamma12) * (gamma + gamma12) +
                                             (dl + o12) * (dl + o12)));
    CollectiveReference r{};
    r.ee = o4 / (4.0 * d);
    r.ss = (2.0 * o2 * g2 + o4) / (4.0 * d);
    r.aa = o4 / (4.0 * d);
    r.gg = 1.0 - r.ee - r.ss - r.aa;
    return r;
}

// -------------------------------------------------------------- scenarios

// The echo records what determines the numbers: scenario and parameters.
// Output path and format are delivery details and stay out, so runs that
// differ only in destination produce identical bytes.
std::string result_config_echo(const ScenarioConfig& cfg)
{
    json j;
    j["scenario"] = cfg.scenario;
    json params = json::object();
    for (const auto& [key, value] : cfg.parameters) {
        if (const double* d = std::get_if<double>(&value))
            params[key] = *d;
        else
            params[key] = std::get<std::string>(value);
    }
    j["parameters"] = params;
    return j.dump();
}

ResultEnvelope envelope_for(const ScenarioConfig& cfg)
{
    ResultEnvelope env;
    env.scenario = cfg.scenario;
    env.config_echo = result_config_echo(cfg);
    return env;
}

ResultEnvelope run_decay(const ScenarioConfig& cfg)
{
    Params p(cfg.parameters);
    const double gamma12 = p.num("gamma12");
    const double gamma = p.num_or("gamma", 1.0);
    const double omega12 = p.num_or("omega12", 0.0);
    const double tmax = p.num_or("tmax", 5.0);
    const auto samples = std::size_t(p.num_or("samples", 200));
    p.finish(cfg.scenario);

    const Liouvillian liou = two_atom_liouvillian(gamma, gamma12, omega12, 0.0, 0.0, false);
    const LevelScheme scheme = make_two_atom(gamma, gamma);
    const DensityMatrix rho0 = DensityMatrix::level(scheme, "e1g2");
    const Trajectory traj = evolve(liou, rho0, linspace(0.0, tmax, samples));

    ResultEnvelope env = envelope_for(cfg);
    env.columns = {"t", "rho_gg", "rho_ss", "rho_aa", "rho_ee"};
    std::vector<double> ts, ss, aa;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const CollectiveState c = dicke_observables(traj.states[i]);
        env.rows.push_back({traj.times[i], c.gg, c.ss, c.aa, c.ee});
        ts.push_back(traj.times[i]);
        ss.push_back(c.ss);
        aa.push_back(c.aa);
    }
    env.summary["fitted_rate_ss"] = fit_decay_rate(ts, ss);
    env.summary["fitted_rate_aa"] = fit_decay_rate(ts, aa);
    env.summary["expected_rate_ss"] = gamma + gamma12;
    env.summary["expected_rate_aa"] = gamma - gamma12;
    return env;
}

ResultEnvelope run_steady(const ScenarioConfig& cfg)
{
    Params p(cfg.parameters);
    const std::string system = p.str("system");
    ResultEnvelope env = envelope_for(cfg);

    if (system == "v-decay") {
        const double delta = p.num("delta");
        const double gamma12 = p.num("gamma12");
        const double gamma2 = p.num_or("gamma2", 1.0);
        const std::string initial = p.str_or("initial", "1");
        p.finish(cfg.scenario);

        const Liouvillian liou = v_decay_liouvillian(gamma2, delta, gamma12);
        const LevelScheme scheme = make_v_scheme(1.0, gamma2, delta);
        std::optional<DensityMatrix> rho0;
        if (steady_state_degeneracy(liou) > 1)
            rho0 = v_initial_state(scheme, initial);
        const DensityMatrix ss = steady_state(liou, rho0);
        env.columns = {"rho11", "rho22", "rho33", "re_rho13", "im_rho13"};
        env.rows.push_back({ss(0, 0).real(), ss(1, 1).real(), ss(2, 2).real(),
                            ss(0, 2).real(), ss(0, 2).imag()});
        env.summary["kernel_dim"] = double(steady_state_degeneracy(liou));
        return env;
    }

    if (system == "two-atom-driven") {
        const double rabi = p.num("rabi");
        const double delta_l = p.num_or("delta_l", 0.0);
        const double gamma12 = p.num("gamma12");
        const double omega12 = p.num_or("omega12", 0.0);
        const double gamma = p.num_or("gamma", 1.0);
        p.finish(cfg.scenario);

        const Liouvillian liou =
            two_atom_liouvillian(gamma, gamma12, omega12, rabi, delta_l, true);
        const DensityMatrix ss = steady_state(liou);
        const CollectiveState c = dicke_observables(ss);
        env.columns = {"rho_gg", "rho_ss", "rho_aa", "rho_ee", "re_rho_sa", "im_rho_sa"};
        env.rows.push_back({c.gg, c.ss, c.aa, c.ee, c.sa.real(), c.sa.imag()});
        const CollectiveReference ref = eq53_reference(rabi, delta_l, gamma, gamma12, omega12);
        env.summary["ref_rho_ee"] = ref.ee;
        env.summary["ref_rho_ss"] = ref.ss;
        env.summary["ref_rho_aa"] = ref.aa;
        return env;
    }

    p.finish(cfg.scenario);
    throw ValidationError("unknown steady-state system: " + system);
}

ResultEnvelope run_trap(const ScenarioConfig& cfg)
{
    Params p(cfg.parameters);
    const double delta = p.num("delta");
    const double gamma12 = p.num("gamma12");
    const double gamma2 = p.num_or("gamma2", 1.0);
    const double tmax = p.num_or("tmax", 20.0);
    const auto samples = std::size_t(p.num_or("samples", 400));
    const std::string initial = p.str_or("initial", "1");
    p.finish(cfg.scenario);

    const LevelScheme scheme = make_v_scheme(1.0, gamma2, delta);
    const Liouvillian liou = v_decay_liouvillian(gamma2, delta, gamma12);
    const Trajectory traj =
        evolve(liou, v_initial_state(scheme, initial), linspace(0.0, tmax, samples));
    const std::vector<double> alpha = constant_of_motion_alpha(traj);
    const std::vector<SuperpositionSample> sup = superposition_populations(traj);

    ResultEnvelope env = envelope_for(cfg);
    env.columns = {"t", "rho11", "rho22", "rho33", "re_rho13", "alpha", "rho_ss", "rho_aa"};
    double drift = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const DensityMatrix& rho = traj.states[i];
        env.rows.push_back({traj.times[i], rho(0, 0).real(), rho(1, 1).real(),
                            rho(2, 2).real(), rho(0, 2).real(), alpha[i], sup[i].ss,
                            sup[i].aa});
        drift = std::max(drift, std::abs(alpha[i] - alpha[0]));
    }
    env.summary["alpha_initial"] = alpha.front();
    env.summary["alpha_final"] = alpha.back();
    env.summary["alpha_max_drift"] = drift;
    return env;
}

std::vector<double> spectrum_grid(double window, std::size_t points, std::size_t center_points,
                                  double center_halfwidth)
{
    std::vector<double> grid = linspace(-window, window, points);
    if (center_points > 0) {
        const std::vector<double> fine =
            linspace(-center_halfwidth, center_halfwidth, center_points);
        grid.insert(grid.end(), fine.begin(), fine.end());
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }
    return grid;
}

ResultEnvelope run_spectrum(const ScenarioConfig& cfg)
{
    Params p(cfg.parameters);
    const double rabi = p.num("rabi");
    const double delta = p.num("delta");
    const double gamma12 = p.num("gamma12");
    const double gamma2 = p.num_or("gamma2", 1.0);
    const double delta_l = p.num_or("delta_l", 0.0);
    const double rabi2 = p.num_or("rabi2", rabi);
    const double dressed_scale = std::sqrt(delta * delta + 2.0 * rabi * rabi);
    const double window = p.num_or("window", std::max(12.0, 2.0 * dressed_scale));
    const auto points = std::size_t(p.num_or("points", 4001));
    const auto center_points = std::size_t(p.num_or("center_points", 801));
    const double center_halfwidth = p.num_or("center_halfwidth", 0.25);
    p.finish(cfg.scenario);

    const LevelScheme scheme = make_v_scheme(1.0, gamma2, delta);
    const Liouvillian liou =
        v_both_driven_liouvillian(rabi, rabi2, delta, delta_l, gamma2, gamma12);
    const DensityMatrix rho_ss = steady_state(liou);
    const CouplingCoefficients coup =
        CouplingCoefficients::explicit_coupling(1.0, gamma2, gamma12);

    const std::vector<double> grid =
        spectrum_grid(window, points, center_points, center_halfwidth);
    const SpectrumTrace trace = fluorescence_spectrum(
        liou, rho_ss, {scheme.lowering_operator(0), scheme.lowering_operator(1)}, coup, grid);

    // elastic scattering sits in a delta function at the drive frequency; it
    // is removed from the trace and reported as a separate weight
    const cplx mean1 = (rho_ss.matrix * scheme.lowering_operator(0).adjoint()).trace();
    const cplx mean2 = (rho_ss.matrix * scheme.lowering_operator(1).adjoint()).trace();
    const double coherent_weight =
        (std::norm(mean1) + gamma2 * std::norm(mean2) +
         2.0 * gamma12 * (mean1 * std::conj(mean2)).real());

    ResultEnvelope env = envelope_for(cfg);
    env.columns = {"delta", "intensity"};
    for (std::size_t i = 0; i < trace.detunings.size(); ++i)
        env.rows.push_back({trace.detunings[i], trace.values[i]});

    const std::vector<Peak> peaks = find_peaks(trace);
    env.summary["peak_count"] = double(peaks.size());
    std::string pos;
    for (const Peak& pk : peaks) {
        if (!pos.empty())
            pos += ";";
        pos += fmt_double(pk.position);
    }
    env.summary["peak_positions"] = pos;
    env.summary["total_integrated"] = integrate_trace(trace);
    env.summary["coherent_weight"] = coherent_weight;
    env.summary["max_value"] =
        trace.values.empty() ? 0.0 : *std::max_element(trace.values.begin(), trace.values.end());
    return env;
}

ResultEnvelope run_absorb(const ScenarioConfig& cfg, bool probe_undriven)
{
    Params p(cfg.parameters);
    const double rabi = p.num("rabi");
    const double delta = p.num("delta");
    const double gamma2 = p.num("gamma2");
    const double pfrac = p.num("p");
    const double omega_p = p.num_or("omega_p", 0.5);
    const double window = p.num_or("window", rabi + 10.0);
    const auto points = std::size_t(p.num_or("points", 4001));
    p.finish(cfg.scenario);

    const double gamma12 = pfrac * std::sqrt(gamma2);
    const SingleDriven sys = v_single_driven(rabi, delta, gamma2, gamma12);

    const std::size_t i1 = sys.scheme.level_index("1");
    const std::size_t i2 = sys.scheme.level_index("2");
    const std::size_t i3 = sys.scheme.level_index("3");
    ComplexMatrix probe(3, 3);
    std::pair<std::size_t, std::size_t> target;
    double factor = 1.0;
    if (probe_undriven) {
        probe(i3, i2) = 1.0; // couples only to mu32
        target = {i3, i2};
        factor = 2.0;
    } else {
        probe(i1, i2) = 1.0; // couples only to mu12
        target = {i1, i2};
    }

    const std::vector<double> grid = spectrum_grid(window, points, 0, 0.0);
    const SpectrumTrace trace = probe_absorption(sys.liou, probe, target, omega_p, grid, factor);

    ResultEnvelope env = envelope_for(cfg);
    env.columns = {"delta", "w"};
    for (std::size_t i = 0; i < trace.detunings.size(); ++i)
        env.rows.push_back({trace.detunings[i], trace.values[i]});

    const auto at = [&](double d) {
        const SpectrumTrace one =
            probe_absorption(sys.liou, probe, target, omega_p, {d}, factor);
        return one.values[0];
    };
    env.summary["w_at_plus_rabi"] = at(rabi);
    env.summary["w_at_minus_rabi"] = at(-rabi);
    env.summary["w_at_zero"] = at(0.0);
    double peak = 0.0;
    for (double v : trace.values)
        peak = std::max(peak, std::abs(v));
    env.summary["peak_abs"] = peak;
    return env;
}

ResultEnvelope run_dressed(const ScenarioConfig& cfg)
{
    Params p(cfg.parameters);
    const std::string system = p.str("system");
    const double rabi = p.num("rabi");
    const double delta = p.num("delta");
    const double gamma2 = p.num_or("gamma2", 1.0);
    const double theta = p.num_or("theta_deg", 0.0) * pi / 180.0;
    const double mu = p.num_or("mu", 1.0);
    p.finish(cfg.scenario);

    const Vec3 mu12{mu, 0.0, 0.0};
    const Vec3 mu32{mu * std::cos(theta), mu * std::sin(theta), 0.0};

    DressedManifold manifold;
    TransitionTable table;
    if (system == "aux") {
        manifold = aux_level_manifold(rabi, delta);
        table = aux_level_transition_moments(manifold, mu12, mu32, 1.0, gamma2);
    } else if (system == "single") {
        manifold = single_drive_manifold(rabi, delta, 1.0, gamma2);
        table = single_drive_transition_moments(manifold, mu12, mu32, 1.0, gamma2);
    } else if (system == "both") {
        manifold = both_drive_manifold(rabi, delta);
        table = both_drive_transition_moments(manifold, mu, theta);
    } else if (system == "lambda") {
        LambdaManifoldResult r = lambda_manifold(rabi, delta, 1.0, gamma2, mu);
        manifold = std::move(r.manifold);
        table = std::move(r.table);
    } else {
        throw ValidationError("unknown dressed system: " + system);
    }

    ResultEnvelope env = envelope_for(cfg);
    env.columns = {"from_state", "to_state", "moment_x", "moment_y", "moment_z", "rate"};

    std::vector<std::string> names;
    const auto id_of = [&](const std::string& s) {
        const auto it = std::find(names.begin(), names.end(), s);
        if (it != names.end())
            return double(it - names.begin());
        names.push_back(s);
        return double(names.size() - 1);
    };
    for (const TransitionEntry& e : table.entries)
        env.rows.push_back({id_of(e.from), id_of(e.to), e.moment[0], e.moment[1], e.moment[2],
                            e.rate});

    std::string state_names, energies, classes;
    for (const DressedState& st : manifold.states) {
        if (!state_names.empty()) {
            state_names += ";";
            energies += ";";
        }
        state_names += st.label;
        energies += fmt_double(st.energy);
    }
    for (const auto& [label, cls] : classify_states(table)) {
        if (!classes.empty())
            classes += ";";
        classes += label + ":" + state_class_name(cls);
    }
    std::string ids;
    for (const std::string& n : names) {
        if (!ids.empty())
            ids += ";";
        ids += n;
    }
    env.summary["states"] = state_names;
    env.summary["energies"] = energies;
    env.summary["alpha"] = manifold.alpha;
    env.summary["beta"] = manifold.beta;
    env.summary["classification"] = classes;
    env.summary["row_state_ids"] = ids;
    return env;
}

ResultEnvelope run_cpt(const ScenarioConfig& cfg)
{
    Params p(cfg.parameters);
    const double gamma2 = p.num("gamma2");
    const double rabi = p.num("rabi");
    const double delta12 = p.num("delta12");
    const double pfrac = p.num("p");
    const double delta_l = p.num_or("delta_l", 0.0);
    const double dmin = p.num_or("delta_min", -3.0);
    const double dmax = p.num_or("delta_max", 3.0);
    const auto points = std::size_t(p.num_or("points", 601));
    p.finish(cfg.scenario);

    ResultEnvelope env = envelope_for(cfg);
    env.columns = {"delta", "rho33"};
    double best_delta = dmin, best_val = std::numeric_limits<double>::infinity();
    for (double d : linspace(dmin, dmax, points)) {
        const CptResult r = cpt_upper_population(1.0, gamma2, rabi, d, delta12, pfrac, delta_l);
        env.rows.push_back({d, r.rho33});
        if (r.rho33 < best_val) {
            best_val = r.rho33;
            best_delta = d;
        }
    }
    const double expected = (1.0 - gamma2) * delta12 / std::sqrt(gamma2);
    env.summary["zero_crossing"] = best_delta;
    env.summary["min_rho33"] = best_val;
    env.summary["expected_zero"] = expected;
    const CptResult at_expected =
        cpt_upper_population(1.0, gamma2, rabi, expected, delta12, pfrac, delta_l);
    env.summary["rho33_at_expected_zero"] = at_expected.rho33;
    return env;
}

ResultEnvelope run_young(const ScenarioConfig& cfg)
{
    Params p(cfg.parameters);
    const double k0_r21 = p.num("k0_r21");
    const double delta_over_omega0 = p.num_or("delta_over_omega0", 0.0);
    const double dphi = p.num_or("dphi", 0.0);
    const double i1 = p.num_or("i1", 1.0);
    const double i2 = p.num_or("i2", 1.0);
    const double g1_abs = p.num_or("g1_abs", 1.0);
    const auto points = std::size_t(p.num_or("points", 1024));
    const double r_over = p.num_or("r_over_r21", 200.0);
    const double asym = p.num_or("asym", 0.0);
    const auto smooth = std::size_t(p.num_or("smooth_window", 0));
    p.finish(cfg.scenario);

    SlitGeometry geom;
    geom.k0 = k0_r21; // |r21| = 1 length unit
    geom.r1 = {-0.5 * (1.0 - asym), 0.0, 0.0};
    geom.r2 = {0.5 * (1.0 + asym), 0.0, 0.0};

    FieldPair f;
    f.intensity1 = i1;
    f.intensity2 = i2;
    const double omega0 = 1.0;
    f.omega1 = omega0 * (1.0 + 0.5 * delta_over_omega0);
    f.omega2 = omega0 * (1.0 - 0.5 * delta_over_omega0);
    f.phi1 = dphi;
    f.phi2 = 0.0;
    f.g1 = g1_abs;

    ResultEnvelope env = envelope_for(cfg);
    env.columns = {"phase", "angle", "intensity"};
    std::vector<double> vals;
    // uniform sweep of the fringe phase argument over one period (half-open,
    // so the bright and dark fringes are sampled exactly); directions with
    // |phase| > k0 r21 are geometrically unreachable and clipped
    const double reach = std::min(pi, k0_r21);
    for (std::size_t i = 0; i < points; ++i) {
        const double phase = -reach + 2.0 * reach * double(i) / double(points);
        const double sv = phase / k0_r21;
        const Vec3 dir{sv, 0.0, std::sqrt(1.0 - sv * sv)};
        const double v = young_intensity(geom, f, dir, r_over);
        vals.push_back(v);
        env.rows.push_back({phase, std::asin(sv), v});
    }
    const double vmax = *std::max_element(vals.begin(), vals.end());
    const double vmin = *std::min_element(vals.begin(), vals.end());
    env.summary["visibility"] = (vmax + vmin) > 0.0 ? (vmax - vmin) / (vmax + vmin) : 0.0;
    env.summary["max_intensity"] = vmax;
    env.summary["min_intensity"] = vmin;

    if (smooth > 1 && smooth < vals.size()) {
        // boxcar over the fast phase to emulate a detector of finite angular
        // resolution
        std::vector<double> sm;
        for (std::size_t i = 0; i + smooth <= vals.size(); ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < smooth; ++k)
                acc += vals[i + k];
            sm.push_back(acc / double(smooth));
        }
        const double smax = *std::max_element(sm.begin(), sm.end());
        const double smin = *std::min_element(sm.begin(), sm.end());
        env.summary["visibility_smoothed"] =
            (smax + smin) > 0.0 ? (smax - smin) / (smax + smin) : 0.0;
    }
    return env;
}

ResultEnvelope run_two_atom_pattern(const ScenarioConfig& cfg)
{
    Params p(cfg.parameters);
    const std::string source = p.str("source");
    const double k_r21 = p.num("k_r21");
    const auto points = std::size_t(p.num_or("points", 721));

    CollectiveState c;
    if (source == "state") {
        c.ss = p.num_or("pop_ss", 0.0);
        c.aa = p.num_or("pop_aa", 0.0);
        c.ee = p.num_or("pop_ee", 0.0);
        c.gg = p.num_or("pop_gg", 1.0 - c.ss - c.aa - c.ee);
        c.sa = cplx(p.num_or("re_sa", 0.0), p.num_or("im_sa", 0.0));
        p.finish(cfg.scenario);
    } else if (source == "driven") {
        const double rabi = p.num("rabi");
        const double delta_l = p.num_or("delta_l", 0.0);
        const double gamma12 = p.num("gamma12");
        const double omega12 = p.num_or("omega12", 0.0);
        p.finish(cfg.scenario);
        const Liouvillian liou =
            two_atom_liouvillian(1.0, gamma12, omega12, rabi, delta_l, true);
        c = dicke_observables(steady_state(liou));
    } else if (source == "decay") {
        const double gamma12 = p.num("gamma12");
        const double time = p.num("time");
        p.finish(cfg.scenario);
        const Liouvillian liou = two_atom_liouvillian(1.0, gamma12, 0.0, 0.0, 0.0, false);
        const LevelScheme scheme = make_two_atom(1.0, 1.0);
        const Trajectory traj =
            evolve(liou, DensityMatrix::level(scheme, "e1g2"), {0.0, time});
        c = dicke_observables(traj.states.back());
    } else {
        p.finish(cfg.scenario);
        throw ValidationError("unknown two-atom-pattern source: " + source);
    }

    SlitGeometry geom;
    geom.k0 = k_r21;
    geom.r1 = {-0.5, 0.0, 0.0};
    geom.r2 = {0.5, 0.0, 0.0};
    const Vec3 fixed{0.0, 0.0, 1.0};

    ResultEnvelope env = envelope_for(cfg);
    env.columns = {"angle", "g1", "g2"};
    double g1min = 1e300, g1max = -1e300, g2min = 1e300, g2max = -1e300;
    for (double a : linspace(-0.5 * pi, 0.5 * pi, points)) {
        const Vec3 dir{std::sin(a), 0.0, std::cos(a)};
        const double g1 = two_atom_g1(c, geom, dir);
        const double g2 = two_atom_g2(c, geom, dir, fixed);
        env.rows.push_back({a, g1, g2});
        g1min = std::min(g1min, g1);
        g1max = std::max(g1max, g1);
        g2min = std::min(g2min, g2);
        g2max = std::max(g2max, g2);
    }
    env.summary["g1_visibility"] = (g1max + g1min) > 0.0 ? (g1max - g1min) / (g1max + g1min) : 0.0;
    env.summary["g2_visibility"] = (g2max + g2min) > 0.0 ? (g2max - g2min) / (g2max + g2min) : 0.0;
    env.summary["pop_ss"] = c.ss;
    env.summary["pop_aa"] = c.aa;
    env.summary["pop_ee"] = c.ee;
    return env;
}

ResultEnvelope run_eigen(const ScenarioConfig& cfg)
{
    Params p(cfg.parameters);
    const std::string target = p.str("target");
    ResultEnvelope env = envelope_for(cfg);
    env.columns = {"re", "im"};

    ComplexVector vals;
    if (target == "cubic") {
        const double rabi = p.num("rabi");
        const double delta = p.num("delta");
        const double gamma12 = p.num("gamma12");
        const double gamma = p.num_or("gamma", 1.0);
        p.finish(cfg.scenario);
        // monic cubic  l^3 + c2 l^2 + c1 l + c0 from the coherence-block
        // characteristic equation
        const double c2 = gamma;
        const double c1 = 0.25 * delta * delta + 0.25 * (gamma * gamma - gamma12 * gamma12) +
                          0.5 * rabi * rabi;
        const double c0 = 0.25 * rabi * rabi * (gamma - gamma12);
        ComplexMatrix companion(3, 3);
        companion(0, 2) = -c0;
        companion(1, 0) = 1.0;
        companion(1, 2) = -c1;
        companion(2, 1) = 1.0;
        companion(2, 2) = -c2;
        vals = eig_general(companion).eigenvalues;
    } else if (target == "coherence-block") {
        const double rabi = p.num("rabi");
        const double delta = p.num("delta");
        const double gamma12 = p.num("gamma12");
        const double gamma2 = p.num_or("gamma2", 1.0);
        p.finish(cfg.scenario);
        const LevelScheme scheme = make_aux_v_scheme(1.0, gamma2, delta);
        const CouplingCoefficients coup =
            CouplingCoefficients::explicit_coupling(1.0, gamma2, gamma12);
        const double eb = scheme.level_energy("b");
        const double mid =
            0.5 * (scheme.level_energy("1") + scheme.level_energy("3")) - eb;
        DriveField drive = DriveField::both(rabi, rabi, mid); // midway between the uppers
        drive.target = DriveField::Target::AuxiliaryLevel;
        vals = eig_general(coherence_block(scheme, drive, coup).matrix).eigenvalues;
    } else if (target == "liouvillian") {
        const std::string system = p.str("system");
        if (system == "v-decay") {
            const double delta = p.num("delta");
            const double gamma12 = p.num("gamma12");
            const double gamma2 = p.num_or("gamma2", 1.0);
            p.finish(cfg.scenario);
            vals = eig_general(v_decay_liouvillian(gamma2, delta, gamma12).generator)
                       .eigenvalues;
        } else if (system == "v-driven") {
            const double rabi = p.num("rabi");
            const double delta = p.num("delta");
            const double gamma12 = p.num("gamma12");
            const double gamma2 = p.num_or("gamma2", 1.0);
            const double delta_l = p.num_or("delta_l", 0.0);
            p.finish(cfg.scenario);
            vals = eig_general(v_both_driven_liouvillian(rabi, rabi, delta, delta_l, gamma2,
                                                         gamma12)
                                   .generator)
                       .eigenvalues;
        } else if (system == "two-atom-driven") {
            const double rabi = p.num("rabi");
            const double delta_l = p.num_or("delta_l", 0.0);
            const double gamma12 = p.num("gamma12");
            const double omega12 = p.num_or("omega12", 0.0);
            p.finish(cfg.scenario);
            vals = eig_general(
                       two_atom_liouvillian(1.0, gamma12, omega12, rabi, delta_l, true)
                           .generator)
                       .eigenvalues;
        } else {
            p.finish(cfg.scenario);
            throw ValidationError("unknown liouvillian system: " + system);
        }
    } else {
        p.finish(cfg.scenario);
        throw ValidationError("unknown eigen target: " + target);
    }

    double max_re = -1e300;
    std::size_t kernel = 0;
    double scale = 0.0;
    for (const cplx& v : vals)
        scale = std::max(scale, std::abs(v));
    for (const cplx& v : vals) {
        env.rows.push_back({v.real(), v.imag()});
        max_re = std::max(max_re, v.real());
        if (std::abs(v) <= 1e-9 * std::max(scale, 1e-300))
            ++kernel;
    }
    env.summary["max_real_part"] = max_re;
    env.summary["near_zero_count"] = double(kernel);
    return env;
}

} // namespace

const std::vector<std::string>& known_scenarios()
{
    static const std::vector<std::string> names = {
        "decay", "steady", "trap",  "spectrum",         "absorb-w12", "absorb-w23",
        "dressed", "cpt",  "young", "two-atom-pattern", "eigen"};
    return names;
}

ScenarioConfig parse_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ValidationError("config must be a JSON object");

    ScenarioConfig cfg;
    if (j.contains("scenario")) {
        if (!j["scenario"].is_string())
            throw ValidationError("config key 'scenario' must be a string");
        cfg.scenario = j["scenario"].get<std::string>();
    }
    if (j.contains("output")) {
        if (!j["output"].is_string())
            throw ValidationError("config key 'output' must be a string");
        cfg.output = j["output"].get<std::string>();
    }
    if (j.contains("format")) {
        if (!j["format"].is_string())
            throw ValidationError("config key 'format' must be a string");
        cfg.format = j["format"].get<std::string>();
        if (cfg.format != "csv" && cfg.format != "json")
            throw ValidationError("config format must be 'csv' or 'json'");
    }
    if (j.contains("parameters")) {
        if (!j["parameters"].is_object())
            throw ValidationError("config key 'parameters' must be an object");
        for (const auto& [key, value] : j["parameters"].items()) {
            if (value.is_number())
                cfg.parameters[key] = value.get<double>();
            else if (value.is_string())
                cfg.parameters[key] = value.get<std::string>();
            else
                throw ValidationError("parameter '" + key + "' must be a number or string");
        }
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "scenario" && key != "output" && key != "format" && key != "parameters")
            throw ValidationError("unknown config key: " + key);
    }
    return cfg;
}

std::string emit_config(const ScenarioConfig& cfg)
{
    json j;
    j["scenario"] = cfg.scenario;
    j["output"] = cfg.output;
    j["format"] = cfg.format;
    json params = json::object();
    for (const auto& [key, value] : cfg.parameters) {
        if (const double* d = std::get_if<double>(&value))
            params[key] = *d;
        else
            params[key] = std::get<std::string>(value);
    }
    j["parameters"] = params;
    return j.dump();
}

ResultEnvelope run_scenario(const ScenarioConfig& cfg)
{
    const auto& names = known_scenarios();
    if (std::find(names.begin(), names.end(), cfg.scenario) == names.end())
        throw ValidationError("unknown scenario: '" + cfg.scenario + "'");

    if (cfg.scenario == "decay")
        return run_decay(cfg);
    if (cfg.scenario == "steady")
        return run_steady(cfg);
    if (cfg.scenario == "trap")
        return run_trap(cfg);
    if (cfg.scenario == "spectrum")
        return run_spectrum(cfg);
    if (cfg.scenario == "absorb-w12")
        return run_absorb(cfg, false);
    if (cfg.scenario == "absorb-w23")
        return run_absorb(cfg, true);
    if (cfg.scenario == "dressed")
        return run_dressed(cfg);
    if (cfg.scenario == "cpt")
        return run_cpt(cfg);
    if (cfg.scenario == "young")
        return run_young(cfg);
    if (cfg.scenario == "two-atom-pattern")
        return run_two_atom_pattern(cfg);
    return run_eigen(cfg);
}

unsigned sweep_thread_cap()
{
    if (const char* env = std::getenv("QDINT_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1)
            return unsigned(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::vector<ResultEnvelope> sweep(const ScenarioConfig& cfg, const std::string& axis,
                                  const std::vector<ParamValue>& values)
{
    std::vector<ResultEnvelope> results(values.size());
    if (values.empty())
        return results;

    const auto run_point = [&](std::size_t idx) {
        ScenarioConfig point = cfg;
        point.parameters[axis] = values[idx];
        try {
            results[idx] = run_scenario(point);
        } catch (const std::exception& e) {
            results[idx] = ResultEnvelope{};
            results[idx].scenario = point.scenario;
            results[idx].config_echo = result_config_echo(point);
            results[idx].ok = false;
            results[idx].error = e.what();
        }
    };

    const unsigned want = unsigned(std::min<std::size_t>(values.size(), sweep_thread_cap()));
    if (want <= 1) {
        for (std::size_t i = 0; i < values.size(); ++i)
            run_point(i);
        return results;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < want; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < values.size(); i += want)
                run_point(i);
        });
    for (std::thread& th : pool)
        th.join();
    return results;
}

std::string render_csv(const ResultEnvelope& env)
{
    std::string out;
    out += std::string("# qdint ") + kArtifactVersion + "\n";
    out += "# scenario: " + env.scenario + "\n";
    out += "# config: " + env.config_echo + "\n";
    json summary = json::object();
    for (const auto& [key, value] : env.summary) {
        if (const double* d = std::get_if<double>(&value))
            summary[key] = *d;
        else
            summary[key] = std::get<std::string>(value);
    }
    out += "# summary: " + summary.dump() + "\n";
    if (!env.ok) {
        out += "# error: " + env.error + "\n";
        return out;
    }
    for (std::size_t i = 0; i < env.columns.size(); ++i) {
        if (i)
            out += ",";
        out += env.columns[i];
    }
    out += "\n";
    for (const std::vector<double>& row : env.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ",";
            out += fmt_double(row[i]);
        }
        out += "\n";
    }
    return out;
}

std::string render_json(const ResultEnvelope& env)
{
    json j;
    j["artifact_version"] = kArtifactVersion;
    j["scenario"] = env.scenario;
    j["config"] = json::parse(env.config_echo);
    j["ok"] = env.ok;
    if (!env.ok)
        j["error"] = env.error;
    j["columns"] = env.columns;
    j["rows"] = env.rows;
    json summary = json::object();
    for (const auto& [key, value] : env.summary) {
        if (const double* d = std::get_if<double>(&value))
            summary[key] = *d;
        else
            summary[key] = std::get<std::string>(value);
    }
    j["summary"] = summary;
    return j.dump(2) + "\n";
}

} // namespace qdint
