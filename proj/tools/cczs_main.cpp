// Copyright 2026 The cczs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cczs/circuits.hpp"
#include "cczs/io.hpp"
#include "cczs/lambda.hpp"
#include "cczs/noise.hpp"
#include "cczs/process.hpp"
#include "cczs/state_tomo.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cczs;

namespace {

struct Options {
    std::string device = std::string(CCZS_DATA_DIR) + "/device.json";
    std::string gateset = std::string(CCZS_DATA_DIR) + "/gateset_gst.json";
    std::optional<std::uint64_t> seed;
    int shots = 5000;
    int nboot = 1000;
    double theta = 0.5, phi = 0.0, gamma = 0.0;  // units of pi
    double miscal_theta = 0.0, miscal_phi = 0.0, miscal_gamma = 0.0;
    std::optional<double> tau_ns;
    std::string out = ".";
    unsigned threads = 1;
    bool force = false;
    bool noiseless = false;
    bool exact = false;
    int samples = 10000;
    std::string family = "ghz";
    std::string swept = "first";
    std::string input;
};

class Writer {
   public:
    Writer(std::string dir, bool force) : dir_(std::move(dir)), force_(force) {}

    // All targets are checked before anything is written.
    void plan(const std::vector<std::string>& names) const {
        fs::create_directories(dir_);
        for (const auto& n : names) {
            if (!force_ && fs::exists(fs::path(dir_) / n)) {
                throw ConfigError("refusing to overwrite " + (fs::path(dir_) / n).string() + " (use --force)");
            }
        }
    }
    void write(const std::string& name, const std::string& text) const {
        std::ofstream f(fs::path(dir_) / name, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot write " + name);
        f << text;
    }
    void write_json(const std::string& name, const json& j) const { write(name, j.dump(2) + "\n"); }

   private:
    std::string dir_;
    bool force_;
};

std::uint64_t require_seed(const Options& o) {
    if (!o.seed) throw ConfigError("--seed is required for this command");
    return *o.seed;
}

double cczs_time(const DeviceFile& dev) {
    DriveConfig d;
    d.j01 = dev.coupling();
    d.j02 = dev.coupling();
    return gate_time(d);
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = a + (b - a) * k / (n - 1);
    return v;
}

json populations_json(const Populations& p) { return json::array({p[0], p[1], p[2]}); }

int cmd_dynamics(const Options& o, bool chevron_only) {
    const DeviceFile dev = load_device(o.device);
    LambdaConfig c;
    c.g1 = dev.coupling();
    c.g3 = dev.coupling();
    const bool coupled = dev.coupling() > 0;
    const double tg = coupled ? cczs_time(dev) : 0.0;
    const double t_end = o.tau_ns ? *o.tau_ns * 1e-9 : (coupled ? tg : 250e-9);
    if (!(t_end > 0)) throw ConfigError("--tau must be positive");

    Writer w(o.out, o.force);
    const SweptCoupler swept = o.swept == "second" ? SweptCoupler::Second : SweptCoupler::First;
    const auto offsets = linspace(-5e6, 5e6, 41);
    const auto ctimes = linspace(0.0, 2 * t_end, 101);
    if (chevron_only) {
        w.plan({"chevron.csv"});
        w.write("chevron.csv", chevron_csv(chevron_landscape(c, offsets, ctimes, swept, o.threads)));
        return 0;
    }
    w.plan({"populations.csv", "chevron.csv", "dynamics.json"});
    const auto times = linspace(0.0, t_end, 201);
    const auto pops = populations(c, LambdaState{}, times);
    const auto at_end = populations(c, LambdaState{}, {t_end})[0];
    json summary{{"coupling_rad_s", dev.coupling()},
                 {"gate_time_s", coupled ? json(tg) : json(nullptr)},
                 {"t_end_s", t_end},
                 {"populations_at_t_end", populations_json(at_end)},
                 {"p101_at_t_end", at_end[2]}};
    w.write("populations.csv", populations_csv(times, pops));
    w.write("chevron.csv", chevron_csv(chevron_landscape(c, offsets, ctimes, swept, o.threads)));
    w.write_json("dynamics.json", summary);
    return 0;
}

json angles_json(const GateParams& p) {
    return json{{"theta_over_pi", p.theta / kPi}, {"phi_over_pi", p.phi / kPi}, {"gamma_over_pi", p.gamma / kPi}};
}

int cmd_qpt(const Options& o) {
    const DeviceFile dev = load_device(o.device);
    const NoisyGateSetModel gsm = o.noiseless ? NoisyGateSetModel::ideal() : load_gateset(o.gateset);
    const DecoherenceRates rates = o.noiseless ? DecoherenceRates::zero() : dev.rates();
    const bool sampled = !(o.noiseless || o.exact);
    const std::uint64_t seed = sampled ? require_seed(o) : o.seed.value_or(0);
    if (sampled && (o.shots <= 0 || o.nboot < 2)) throw ConfigError("--shots must be positive and --nboot >= 2");
    if (!(dev.coupling() > 0)) throw ConfigError("device has zero coupling");

    const GateParams target{o.theta * kPi, o.phi * kPi, o.gamma * kPi};
    const GateParams actual{(o.theta + o.miscal_theta) * kPi, (o.phi + o.miscal_phi) * kPi,
                            (o.gamma + o.miscal_gamma) * kPi};
    const double tau = o.tau_ns ? *o.tau_ns * 1e-9 : cczs_time(dev);
    const DriveConfig drive = drives_for_angles(actual, tau);

    Writer w(o.out, o.force);
    std::vector<std::string> files{"qpt_summary.json", "choi_real.csv", "choi_imag.csv", "ptm_overlap.csv"};
    if (sampled) files.push_back("qpt_dataset.json");
    w.plan(files);

    QuantumProcess truth;
    truth.choi = qutrit_channel_choi(build_heff(drive), jump_operators(rates), tau, LeakagePolicy::FoldToOne);
    const CMatrix u_target = build_cczs(target);

    Reconstruction rec;
    std::optional<TomographyDataset> data;
    if (sampled) {
        data = simulate_qpt_dataset(truth, gsm, o.shots, seed);
        rec = pls_reconstruct(*data, gsm);
    } else {
        rec = pls_reconstruct(qpt_probabilities(truth, gsm), gsm);
    }
    const double f_raw = process_fidelity(rec.process, u_target);
    const ControlErrorFree cef = control_error_free(rec.process, target);
    const LeadingKraus lk = leading_kraus(rec.process);
    const PtmOverlap overlap = ptm_overlap(to_ptm(choi_from_unitary(u_target)), to_ptm(rec.process));

    json summary{{"target", angles_json(target)},
                 {"implemented", angles_json(actual)},
                 {"gate_time_s", tau},
                 {"shots", sampled ? json(o.shots) : json(nullptr)},
                 {"seed", sampled ? json(seed) : json(nullptr)},
                 {"f_true", process_fidelity(truth, u_target)},
                 {"f_raw", f_raw},
                 {"f_cef", cef.fidelity},
                 {"fitted", angles_json(cef.params)},
                 {"projection", {{"iterations", rec.projection.iterations}, {"converged", rec.projection.converged}}},
                 {"tp_error", rec.process.tp_error()},
                 {"min_eigenvalue", rec.process.min_eigenvalue()},
                 {"leading_kraus", {{"weight", lk.weight}, {"degenerate", lk.degenerate}, {"matrix", matrix_to_json(lk.op)}}},
                 {"ptm_overlap", {{"threshold", 1e-3}, {"significant", overlap.significant}, {"max_abs", overlap.max_abs}}},
                 {"gateset_adjustments", gsm.adjustments}};
    bool ok = rec.projection.converged;
    if (sampled) {
        const auto boot = bootstrap(*data, gsm, o.nboot, split_seed(seed, 1),
                                    [&](const QuantumProcess& p) { return process_fidelity(p, u_target); }, o.threads);
        summary["bootstrap"] = {{"n_boot", o.nboot}, {"mean", boot.mean},          {"stdev", boot.stdev},
                                {"p025", boot.p025},  {"p975", boot.p975},         {"unconverged", boot.unconverged}};
        ok = ok && boot.unconverged == 0;
        w.write_json("qpt_dataset.json", tomography_dataset_to_json(*data));
    } else {
        summary["bootstrap"] = nullptr;
    }
    summary["status"] = ok ? "ok" : "not_converged";
    w.write_json("qpt_summary.json", summary);
    w.write("choi_real.csv", matrix_csv(rec.process.choi.real()));
    w.write("choi_imag.csv", matrix_csv(rec.process.choi.imag()));
    w.write("ptm_overlap.csv", matrix_csv(overlap.d));
    return ok ? 0 : 1;
}

int cmd_state(const Options& o) {
    if (o.family != "ghz" && o.family != "w") throw ConfigError("state family must be ghz or w");
    const StateFamily fam = o.family == "ghz" ? StateFamily::Ghz : StateFamily::W;
    const DeviceFile dev = load_device(o.device);
    const NoisyGateSetModel gsm = o.noiseless ? NoisyGateSetModel::ideal() : load_gateset(o.gateset);
    const std::uint64_t seed = o.noiseless ? 0 : require_seed(o);
    if (!o.noiseless && o.shots <= 0) throw ConfigError("--shots must be positive");

    CircuitTiming timing;
    timing.coupling = dev.coupling();
    timing.single_qubit = dev.single_qubit_time;
    if (!(timing.coupling > 0)) throw ConfigError("device has zero coupling");
    const Circuit native = fam == StateFamily::Ghz ? ghz_circuit(timing) : w_circuit(timing);
    const Circuit reference = fam == StateFamily::Ghz ? ghz_reference(timing) : w_reference(timing);

    Writer w(o.out, o.force);
    const std::string stem = "state_" + o.family;
    std::vector<std::string> files{stem + ".json", stem + "_rho_real.csv", stem + "_rho_imag.csv",
                                   stem + "_expectations.csv", stem + "_circuit.json"};
    if (!o.noiseless) files.push_back(stem + "_dataset.json");
    w.plan(files);

    const DecoherenceRates rates = dev.rates();
    const DecoherenceRates* noise = o.noiseless ? nullptr : &rates;
    const CMatrix rho0 = o.noiseless ? ground_state_27() : noisy_initial_state(gsm);
    auto simulate = [&](const Circuit& c) {
        return qutrit_to_qubit(run_circuit(c, rho0, noise), LeakagePolicy::FoldToOne);
    };
    const CMatrix rho_sim = simulate(native);
    const auto pc_sim = phase_correction(rho_sim, fam);
    const auto pc_ref = phase_correction(simulate(reference), fam);

    json summary{{"family", o.family}, {"noiseless", o.noiseless}, {"fidelity_simulated", pc_sim.fidelity_after}};
    CMatrix reported = pc_sim.rho;
    std::array<double, 3> angles = pc_sim.angles;
    bool ok = true;
    if (!o.noiseless) {
        const auto effects = gsm.effects();
        const StateDataset data = simulate_state_dataset(rho_sim, effects, o.shots, seed);
        const MleResult mle = mle_reconstruct(data, effects);
        const auto pc = phase_correction(mle.rho.matrix, fam);
        reported = pc.rho;
        angles = pc.angles;
        ok = mle.converged;
        summary["shots"] = o.shots;
        summary["seed"] = seed;
        summary["fidelity_reconstructed"] = pc.fidelity_after;
        summary["mle"] = {{"gradient_norm", mle.gradient_norm}, {"iterations", mle.iterations},
                          {"converged", mle.converged}, {"log_likelihood", mle.log_likelihood}};
        summary["fidelity"] = pc.fidelity_after;
        w.write_json(stem + "_dataset.json", state_dataset_to_json(data));
    } else {
        summary["fidelity"] = pc_sim.fidelity_after;
    }
    summary["phase_angles"] = json::array({angles[0], angles[1], angles[2]});
    auto depth_json = [](const DepthReport& d) {
        return json{{"entangling_depth", d.entangling_depth}, {"cz_depth", d.cz_depth}, {"cczs_count", d.cczs_count},
                    {"duration_s", d.duration}};
    };
    summary["native"] = depth_json(depth_report(native));
    summary["reference"] = depth_json(depth_report(reference));
    summary["reference"]["fidelity_simulated"] = pc_ref.fidelity_after;
    summary["status"] = ok ? "ok" : "not_converged";

    std::ostringstream ex;
    ex << "pauli,expectation\n";
    const char* labels = "IXYZ";
    const CVector coeff = pauli_coefficients(reported, 3);
    for (int a = 0; a < 64; ++a) {
        ex << labels[a / 16] << labels[(a / 4) % 4] << labels[a % 4] << ',' << format_double(coeff(a).real()) << '\n';
    }
    w.write_json(stem + ".json", summary);
    w.write(stem + "_rho_real.csv", matrix_csv(reported.real()));
    w.write(stem + "_rho_imag.csv", matrix_csv(reported.imag()));
    w.write(stem + "_expectations.csv", ex.str());
    json circuits{{"native", circuit_to_json(native)}, {"reference", circuit_to_json(reference)}};
    w.write_json(stem + "_circuit.json", circuits);
    return ok ? 0 : 1;
}

int cmd_limit(const Options& o) {
    const DeviceFile dev = load_device(o.device);
    const std::uint64_t seed = require_seed(o);
    const double tau = o.tau_ns ? *o.tau_ns * 1e-9 : 250e-9;
    if (!(tau > 0)) throw ConfigError("--tau must be positive");
    if (o.samples < 100) throw ConfigError("--samples must be at least 100");
    Writer w(o.out, o.force);
    w.plan({"limit.json", "limit_samples.csv"});
    const CoherenceLimit point = coherence_limit(dev.rates(), tau);
    const MonteCarloLimit mc = monte_carlo_limit(dev.coherence, tau, o.samples, seed, o.threads);
    json summary{{"tau_s", tau},
                 {"f_av", point.f_av},
                 {"f_chi", point.f_chi},
                 {"small_rate_warning", point.small_rate_warning},
                 {"monte_carlo",
                  {{"samples", o.samples}, {"seed", seed}, {"lo", mc.lo}, {"hi", mc.hi}, {"point", mc.point},
                   {"rejected", mc.rejected}}}};
    std::ostringstream csv;
    csv << "f_chi\n";
    for (double f : mc.f_chi) csv << format_double(f) << '\n';
    w.write_json("limit.json", summary);
    w.write("limit_samples.csv", csv.str());
    return 0;
}

std::pair<std::vector<double>, std::vector<Populations>> read_populations_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    std::getline(in, line);
    std::vector<double> times;
    std::vector<Populations> pops;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ',')) {
            try {
                v.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("bad number in " + path + ": " + cell);
            }
        }
        if (v.size() != 4) throw ConfigError("expected columns time_s,p1,p2,p3 in " + path);
        times.push_back(v[0]);
        pops.push_back({v[1], v[2], v[3]});
    }
    if (times.size() < 8) throw ConfigError("too few rows in " + path);
    return {times, pops};
}

int cmd_fit(const Options& o) {
    if (o.input.empty()) throw ConfigError("--input is required");
    const auto [times, pops] = read_populations_csv(o.input);
    Writer w(o.out, o.force);
    w.plan({"fit.json"});
    const LambdaFit fit = fit_lambda_model(times, pops);
    json summary{{"g1_rad_s", fit.g1},         {"g3_rad_s", fit.g3},         {"delta1_rad_s", fit.delta1},
                 {"delta3_rad_s", fit.delta3}, {"residual", fit.residual},   {"iterations", fit.iterations},
                 {"converged", fit.converged}};
    w.write_json("fit.json", summary);
    return fit.converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CCZS gate simulation and characterization"};
    app.require_subcommand(1);
    Options o;
    std::uint64_t seed = 0;
    std::vector<CLI::Option*> seed_opts;

    auto common = [&](CLI::App* c) {
        c->add_option("--device", o.device, "Device description JSON");
        c->add_option("--out", o.out, "Output directory");
        c->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
        c->add_flag("--force", o.force, "Overwrite existing outputs");
        seed_opts.push_back(c->add_option("--seed", seed, "Random seed"));
    };
    auto tau_opt = [&](CLI::App* c) {
        c->add_option_function<double>("--tau", [&](const double& v) { o.tau_ns = v; }, "Duration in ns");
    };

    auto* dyn = app.add_subcommand("dynamics", "Lambda-system populations and chevron");
    common(dyn);
    tau_opt(dyn);
    dyn->add_option("--swept", o.swept, "Swept coupler: first or second")->check(CLI::IsMember({"first", "second"}));
    auto* chev = app.add_subcommand("chevron", "Chevron landscape only");
    common(chev);
    tau_opt(chev);
    chev->add_option("--swept", o.swept, "Swept coupler: first or second")->check(CLI::IsMember({"first", "second"}));

    auto* qpt = app.add_subcommand("qpt", "Simulated process tomography of a CCZS gate");
    common(qpt);
    tau_opt(qpt);
    qpt->add_option("--gateset", o.gateset, "Gate-set JSON");
    qpt->add_option("--shots", o.shots, "Shots per setting");
    qpt->add_option("--nboot", o.nboot, "Bootstrap replicates");
    qpt->add_option("--theta", o.theta, "Target theta / pi");
    qpt->add_option("--phi", o.phi, "Target phi / pi");
    qpt->add_option("--gamma", o.gamma, "Target gamma / pi");
    qpt->add_option("--miscal-theta", o.miscal_theta, "Calibration offset of theta / pi");
    qpt->add_option("--miscal-phi", o.miscal_phi, "Calibration offset of phi / pi");
    qpt->add_option("--miscal-gamma", o.miscal_gamma, "Calibration offset of gamma / pi");
    qpt->add_flag("--noiseless", o.noiseless, "No decoherence, ideal gate set, exact probabilities");
    qpt->add_flag("--exact", o.exact, "Exact probabilities instead of sampled counts");

    auto* st = app.add_subcommand("state", "GHZ or W preparation with state tomography");
    common(st);
    st->add_option("family", o.family, "ghz or w")->required()->check(CLI::IsMember({"ghz", "w"}));
    st->add_option("--gateset", o.gateset, "Gate-set JSON");
    st->add_option("--shots", o.shots, "Shots per basis");
    st->add_flag("--noiseless", o.noiseless, "Ideal preparation and gates, no tomography");

    auto* lim = app.add_subcommand("limit", "Coherence limit and Monte-Carlo interval");
    common(lim);
    tau_opt(lim);
    lim->add_option("--samples", o.samples, "Monte-Carlo samples");

    auto* fit = app.add_subcommand("fit", "Fit the Lambda model to a populations CSV");
    common(fit);
    fit->add_option("--input", o.input, "CSV with time_s,p1,p2,p3");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (auto* so : seed_opts) {
        if (so->count() > 0) o.seed = seed;
    }

    try {
        if (*dyn) return cmd_dynamics(o, false);
        if (*chev) return cmd_dynamics(o, true);
        if (*qpt) return cmd_qpt(o);
        if (*st) return cmd_state(o);
        if (*lim) return cmd_limit(o);
        if (*fit) return cmd_fit(o);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
