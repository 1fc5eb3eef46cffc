#include "nlbif/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "nlbif/c_curves.hpp"
#include "nlbif/errors.hpp"
#include "nlbif/export.hpp"
#include "nlbif/nonlocal_equilibria.hpp"
#include "nlbif/pde_sim.hpp"
#include "nlbif/spectral.hpp"

namespace nlbif {

using nlohmann::json;

namespace {

std::string sign_name(Sign s) { return to_string(s); }

std::string class_id(int j, Sign s) { return std::to_string(j) + "_" + sign_name(s); }

bool contains(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

// Shared state across tasks of one run.
class Session {
public:
    Session(const RunConfig& cfg, const RunOptions& opts, ArtifactWriter& out, std::ostream& log)
        : cfg_(cfg),
          tol_(cfg.tolerances.scaled(opts.tol_scale)),
          jobs_(std::max(1, opts.jobs)),
          out_(out),
          log_(log),
          f_(make_nonlinearity(cfg.nonlinearity)),
          a_(make_diffusion(cfg.diffusion, cfg.r_max)) {
        time_maps_.quad.rel_tol = tol_.quad_rel_tol;
        time_maps_.energy_cutoff = tol_.energy_cutoff;
        find_.tol_gap_rel = tol_.tol_gap_rel;
        find_.tangency_tol = tol_.tangency_tol;
        profile_.time_maps = time_maps_;
        profile_.endpoint_tol = tol_.endpoint_tol;
    }

    void run_task(const std::string& name) {
        if (name == "validate") validate();
        else if (name == "ccurves") ccurves();
        else if (name == "equilibria") equilibria();
        else if (name == "sweep") do_sweep();
        else if (name == "spectrum") spectrum();
        else if (name == "simulate") simulate();
        else if (name == "verify-all") verify_all();
        else throw ConfigError("unknown task '" + name + "'");
    }

private:
    const std::vector<CCurve>& curves() {
        if (!curves_) {
            CCurveOptions o;
            o.r_max = cfg_.r_max;
            o.samples = cfg_.ccurve_samples;
            o.interp_tol = tol_.interp_tol;
            o.jobs = jobs_;
            o.time_maps = time_maps_;
            curves_ = build_curves(f_, cfg_.j_max, o);
        }
        return *curves_;
    }

    void validate() {
        const ValidationReport rep = validate_nonlinearity(f_.functions());
        json checks = json::array();
        for (const auto& c : rep.checks) {
            checks.push_back({{"name", c.name}, {"passed", c.passed}, {"worst", c.worst}, {"where", c.where}, {"note", c.note}});
        }
        json classes = json::array();
        for (int j = 1; j <= cfg_.j_max; ++j) {
            for (Sign s : {Sign::plus, Sign::minus}) {
                const NodalClass cls(f_, j, s, time_maps_);
                classes.push_back({{"j", j},
                                   {"sign", sign_name(s)},
                                   {"energy_limit", cls.energy_limit()},
                                   {"lambda_limit", cls.lambda_limit()},
                                   {"r_limit", cls.r_limit()},
                                   {"reaches_r_max", cls.r_limit() >= cfg_.r_max}});
            }
        }
        json doc{{"nonlinearity", {{"name", f_.name()}, {"odd", f_.is_odd()}, {"z_plus", f_.z_plus()}, {"z_minus", f_.z_minus()}}},
                 {"checks", checks},
                 {"passed", rep.passed()},
                 {"diffusion", {{"family", a_.family()}, {"m", a_.m()}, {"M", a_.M()}, {"r_max", a_.r_max()},
                                {"nondecreasing", a_.is_nondecreasing()}}},
                 {"classes", classes}};
        out_.write_json("validation.json", doc);
        if (!rep.passed()) throw ValidationError("nonlinearity failed validation");
        if (!(a_.m() > 0.0)) throw ValidationError("diffusion must be bounded below by a positive constant");
    }

    void ccurves() {
        json index = json::array();
        for (const auto& c : curves()) {
            const std::string file = "ccurves/c_" + class_id(c.j(), c.sign()) + ".csv";
            out_.write(file, ccurve_csv(c));
            index.push_back({{"j", c.j()},
                             {"sign", sign_name(c.sign())},
                             {"file", file},
                             {"samples", c.samples().size()},
                             {"c0", c.samples().front().c},
                             {"dc0", c.samples().front().dc},
                             {"r_end", c.r_end()},
                             {"requested_r_max", c.requested_r_max()},
                             {"clamped", c.clamped()},
                             {"max_holdout_error", c.max_holdout_error()},
                             {"holdout_validated", c.holdout_validated()}});
            if (c.clamped()) {
                log_ << "ccurves: class " << c.j() << to_symbol(c.sign()) << " clamped at r = " << c.r_end() << "\n";
            }
        }
        ScalingReport scaling;
        for (int j = 2; j <= cfg_.j_max; ++j) {
            const ScalingReport part = check_scaling_identities(f_, j, {}, 100, cfg_.r_max, time_maps_);
            scaling.checks.insert(scaling.checks.end(), part.checks.begin(), part.checks.end());
        }
        json checks = json::array();
        for (const auto& s : scaling.checks) {
            checks.push_back({{"identity", s.identity}, {"j", s.j}, {"sign", sign_name(s.sign)},
                              {"max_rel_dev", s.max_rel_dev}, {"where", s.where}, {"points", s.points}});
        }
        out_.write_json("ccurves.json", {{"curves", index}, {"scaling", checks}, {"scaling_worst", scaling.worst()}});
    }

    EquilibriumSet equilibria_at(double nu) { return find_equilibria(a_, curves(), nu, find_); }

    void equilibria() {
        json summary = json::array();
        for (std::size_t i = 0; i < cfg_.nu.size(); ++i) {
            const double nu = cfg_.nu[i];
            const EquilibriumSet set = equilibria_at(nu);
            const std::string stem = "equilibria/nu_" + std::to_string(i);
            out_.write(stem + ".csv", equilibria_csv(set));
            json points = json::array();
            for (const auto& p : set.points) {
                const NonlocalProfile prof = equilibrium_profile(f_, a_, p, cfg_.profile_n);
                const std::string file = stem + "/profile_" + class_id(p.j, p.sign) + "_r" + std::to_string(points.size()) + ".csv";
                out_.write(file, profile_csv(prof.profile));
                points.push_back({{"j", p.j}, {"sign", sign_name(p.sign)}, {"r", p.r}, {"morse_index", p.morse_index},
                                  {"hyperbolic", p.hyperbolic}, {"profile", file}, {"r_rel_error", prof.r_rel_error},
                                  {"residual", prof.residual}, {"verified", prof.verified}});
            }
            summary.push_back({{"nu", nu},
                               {"count", set.count()},
                               {"file", stem + ".csv"},
                               {"zero_morse_index", set.zero.morse_index},
                               {"zero_hyperbolic", set.zero.hyperbolic},
                               {"points", points},
                               {"horizon_warnings", set.horizon_warnings}});
            log_ << "equilibria: nu = " << nu << ", " << set.count() << " equilibria\n";
        }
        out_.write_json("equilibria.json", {{"sets", summary}});
    }

    void do_sweep() {
        SweepOptions o;
        o.find = find_;
        o.jobs = jobs_;
        const BifurcationDiagram d = sweep(a_, curves(), cfg_.nu_grid, o);
        out_.write("branches.csv", branches_csv(d));
        out_.write("counts.csv", counts_csv(d));
        out_.write_json("events.json", events_json(d));
        out_.write("diagram.svg", diagram_svg(d));
        log_ << "sweep: " << d.events.size() << " events, counts "
             << (d.counts_consistent() ? "consistent" : "INCONSISTENT") << "\n";
        if (!d.counts_consistent()) throw Error("sweep: predicted and direct equilibrium counts disagree");
    }

    ProfileSource source_for(const BranchPoint& p) {
        return [this, p](int intervals) {
            return reconstruct_profile(f_, p.lambda, p.j, p.sign, p.E, intervals, profile_).phi;
        };
    }

    void spectrum() {
        json sets = json::array();
        bool all_agree = true;
        for (std::size_t i = 0; i < cfg_.nu.size(); ++i) {
            const double nu = cfg_.nu[i];
            const EquilibriumSet set = equilibria_at(nu);
            json points = json::array();
            for (std::size_t q = 0; q < set.points.size(); ++q) {
                const BranchPoint& p = set.points[q];
                const SpectralReport rep =
                    spectral_report(f_, a_, source_for(p), nu, p.r, OperatorMode::nonlocal_paper, cfg_.spectrum_n);
                json entry = spectral_json(rep);
                entry["j"] = p.j;
                entry["sign"] = sign_name(p.sign);
                entry["r"] = p.r;
                entry["derivative_index"] = p.morse_index;
                entry["hyperbolic"] = p.hyperbolic;
                const bool agree = !p.hyperbolic || (!rep.indeterminate && rep.positive == p.morse_index);
                entry["agree"] = agree;
                all_agree = all_agree && agree;

                const std::vector<double> psi = source_for(p)(cfg_.spectrum_n + 1);
                const EpsilonSweep es = epsilon_sweep(f_, a_, psi, nu, p.r, p.j, p.dc);
                const std::string file =
                    "spectrum/nu_" + std::to_string(i) + "_" + class_id(p.j, p.sign) + "_" + std::to_string(q) + "_eps.csv";
                out_.write(file, epsilon_csv(es));
                entry["epsilon"] = {{"file", file},         {"eps0", es.eps0},
                                    {"eps_tilde", es.eps_tilde}, {"eps_crossing", es.eps_crossing},
                                    {"mu_at_tilde", es.mu_at_tilde}, {"monotone", es.monotone},
                                    {"worst_decrease", es.worst_decrease}, {"ambiguous", es.ambiguous}};
                points.push_back(entry);
            }
            sets.push_back({{"nu", nu}, {"points", points}});
        }
        out_.write_json("spectrum.json", {{"n", cfg_.spectrum_n}, {"sets", sets}, {"all_agree", all_agree}});
        if (!all_agree) throw Error("spectrum: spectral and derivative Morse indices disagree");
    }

    std::vector<double> initial_state(const InitialCondition& ic, int n) const {
        std::vector<double> u = sample_on_grid(
            [&](double x) {
                double v = 0.0;
                for (const auto& [k, amp] : ic.modes) v += amp * std::sin(k * x);
                return v;
            },
            n);
        if (ic.noise > 0.0) {
            std::mt19937_64 rng(ic.seed);
            std::uniform_real_distribution<double> unit(-1.0, 1.0);
            std::vector<double> amps(8);
            for (double& amp : amps) amp = ic.noise * unit(rng);
            const double h = std::numbers::pi / (n + 1);
            for (int i = 1; i <= n; ++i) {
                for (int k = 1; k <= 8; ++k) u[i] += amps[k - 1] * std::sin(k * i * h);
            }
        }
        return u;
    }

    void simulate() {
        const int n = cfg_.simulate.n;
        const Form form = cfg_.simulate.form == "semilinear" ? Form::semilinear : Form::quasilinear;
        json runs = json::array();
        for (std::size_t i = 0; i < cfg_.nu.size(); ++i) {
            const double nu = cfg_.nu[i];
            const EquilibriumSet set = equilibria_at(nu);
            std::vector<KnownEquilibrium> known;
            known.push_back({"zero", std::vector<double>(n + 2, 0.0), set.zero.morse_index});
            std::map<std::string, int> seen;
            for (const auto& p : set.points) {
                std::string id = std::to_string(p.j) + to_symbol(p.sign);
                if (seen[id]++ > 0) id += "#" + std::to_string(seen[id]);
                known.push_back({id, reconstruct_profile(f_, p.lambda, p.j, p.sign, p.E, n + 1, profile_).phi,
                                 p.morse_index});
            }
            const Model model{f_, a_, nu};
            EvolveOptions eo;
            eo.dt0 = cfg_.simulate.dt0;
            for (const auto& ic : cfg_.simulate.initial) {
                const TrajectoryLog tl = evolve(initial_state(ic, n), model, form, cfg_.simulate.t_end, known, eo);
                const std::string file = "simulate/nu_" + std::to_string(i) + "_" + ic.name + ".csv";
                out_.write(file, trajectory_csv(tl));
                int terminal_index = -1;
                for (const auto& k : known) {
                    if (k.id == tl.terminal) terminal_index = k.morse_index;
                }
                runs.push_back({{"nu", nu},
                                {"initial", ic.name},
                                {"form", to_string(form)},
                                {"file", file},
                                {"terminal", tl.terminal},
                                {"terminal_morse_index", terminal_index},
                                {"converged", tl.converged},
                                {"t_final", tl.final_state.t},
                                {"accepted_steps", tl.accepted_steps},
                                {"rejected_steps", tl.rejected_steps},
                                {"max_V_increase", tl.max_V_increase},
                                {"lyapunov_monotone", tl.lyapunov_monotone}});
                log_ << "simulate: nu = " << nu << ", " << ic.name << " -> " << tl.terminal << "\n";
            }
        }
        out_.write_json("simulate.json", {{"n", n}, {"runs", runs}});
    }

    void verify_all() {
        json checks = json::array();
        bool ok = true;
        auto add = [&](const std::string& name, double value, double tol, bool passed) {
            checks.push_back({{"name", name}, {"value", value}, {"tolerance", tol}, {"passed", passed}});
            ok = ok && passed;
        };

        double anchor = 0.0;
        for (const auto& c : curves()) anchor = std::max(anchor, std::abs(c.samples().front().c - 1.0 / (c.j() * c.j())));
        add("c_anchor_at_zero", anchor, 1e-8, anchor <= 1e-8);

        double holdout = 0.0;
        for (const auto& c : curves()) holdout = std::max(holdout, c.max_holdout_error());
        add("ccurve_holdout", holdout, tol_.interp_tol, holdout <= tol_.interp_tol);

        double scaling = 0.0;
        for (int j = 2; j <= cfg_.j_max; ++j) {
            scaling = std::max(scaling, check_scaling_identities(f_, j, {}, 100, cfg_.r_max, time_maps_).worst());
        }
        add("scaling_identities", scaling, 1e-6, scaling <= 1e-6);

        // Small-energy limit of the time map: tau -> pi / sqrt(lambda).
        double limit_dev = 0.0;
        for (Sign s : {Sign::plus, Sign::minus}) {
            for (double lambda : {1.0, 4.0, 9.0}) {
                const double E = 1e-10 * f_.heteroclinic_level(s);
                limit_dev = std::max(limit_dev, std::abs(tau(f_, E, lambda, s, time_maps_) - std::numbers::pi / std::sqrt(lambda)));
            }
        }
        add("time_map_small_energy", limit_dev, 1e-6, limit_dev <= 1e-6);

        double identity = 0.0, arch = 0.0;
        int nodal_errors = 0;
        for (int j = 1; j <= cfg_.j_max; ++j) {
            for (Sign s : {Sign::plus, Sign::minus}) {
                const EquilibriumCI eq = local_equilibrium(f_, 1.5 * j * j + 1.0, j, s, cfg_.profile_n, profile_);
                identity = std::max(identity, energy_identity_deviation(eq, f_));
                arch = std::max(arch, std::abs(eq.r - eq.r_arch) / eq.r_arch);
                if (interior_sign_changes(eq.phi) != j - 1) ++nodal_errors;
            }
        }
        add("energy_identity", identity, 1e-8, identity <= 1e-8);
        add("arch_vs_quadrature_r", arch, 1e-6, arch <= 1e-6);
        add("nodal_counts", nodal_errors, 0, nodal_errors == 0);

        // Census and index agreement at every configured nu.
        int mismatches = 0;
        for (double nu : cfg_.nu) {
            const EquilibriumSet set = equilibria_at(nu);
            for (const auto& p : set.points) {
                if (!p.hyperbolic) continue;
                const SpectralReport rep =
                    spectral_report(f_, a_, source_for(p), nu, p.r, OperatorMode::nonlocal_paper, cfg_.spectrum_n, 2);
                if (rep.indeterminate || rep.positive != p.morse_index) ++mismatches;
            }
        }
        add("spectral_vs_derivative_index", mismatches, 0, mismatches == 0);

        out_.write_json("verify.json", {{"checks", checks}, {"passed", ok}});
        if (!ok) throw Error("verify-all: at least one invariant failed");
    }

    const RunConfig& cfg_;
    Tolerances tol_;
    int jobs_;
    ArtifactWriter& out_;
    std::ostream& log_;
    Nonlinearity f_;
    Diffusion a_;
    TimeMapOptions time_maps_;
    FindOptions find_;
    ProfileOptions profile_;
    std::optional<std::vector<CCurve>> curves_;
};

void write_manifest(ArtifactWriter& out, const RunResult& result) {
    std::vector<std::string> files = out.written();
    std::sort(files.begin(), files.end());
    json artifacts = json::array();
    for (const auto& file : files) {
        const auto full = out.root() / file;
        artifacts.push_back({{"path", file}, {"sha256", sha256_file(full)}, {"bytes", std::filesystem::file_size(full)}});
    }
    json doc{{"status", result.status == 0 ? "ok" : "failed"}, {"tasks", result.tasks}, {"artifacts", artifacts}};
    if (result.status != 0) {
        doc["failed_task"] = result.failed_task;
        doc["error"] = result.message;
    }
    const std::filesystem::path path = out.root() / "manifest.json";
    std::ofstream os(path, std::ios::binary);
    os << doc.dump(2) << "\n";
}

} // namespace

std::vector<std::string> plan_tasks(const RunConfig& cfg) {
    const bool downstream = std::any_of(cfg.tasks.begin(), cfg.tasks.end(), [](const std::string& t) { return t != "validate"; });
    std::vector<std::string> plan;
    for (const auto& t : known_tasks()) {
        const bool wanted = contains(cfg.tasks, t) || t == "validate" || (t == "ccurves" && downstream);
        if (wanted) plan.push_back(t);
    }
    return plan;
}

RunResult run(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
    RunResult result;
    result.out_dir = opts.out.empty() ? std::filesystem::path(cfg.output_dir) : opts.out;
    std::filesystem::create_directories(result.out_dir);
    ArtifactWriter out(result.out_dir);
    try {
        Session session(cfg, opts, out, log);
        for (const auto& task : plan_tasks(cfg)) {
            result.failed_task = task;
            log << "task " << task << "\n";
            session.run_task(task);
            result.tasks.push_back(task);
        }
        result.failed_task.clear();
    } catch (const std::exception& e) {
        result.status = 1;
        result.message = e.what();
        log << "error: " << e.what() << "\n";
    }
    result.artifacts = out.written();
    std::sort(result.artifacts.begin(), result.artifacts.end());
    write_manifest(out, result);
    return result;
}

RunResult run_file(const std::string& config_path, const RunOptions& opts, std::ostream& log) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
        // Family parameters are checked here so that a bad function spec never creates files.
        make_nonlinearity(cfg.nonlinearity);
        make_diffusion(cfg.diffusion, cfg.r_max);
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        RunResult r;
        r.status = 2;
        r.message = e.what();
        return r;
    }
    return run(cfg, opts, log);
}

} // namespace nlbif
