// Copyright 2026 The hhlsim Authors
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

#include "hhlsim/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "hhlsim/analysis.hpp"
#include "hhlsim/compiled2x2.hpp"
#include "hhlsim/error.hpp"
#include "hhlsim/hhl.hpp"
#include "hhlsim/serialize.hpp"

namespace hhlsim::cli {

using nlohmann::json;

namespace {

constexpr const char* kSchemaVersion = "1";

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, path + ": " + e.what());
    }
}

void emit(const std::string& text, const std::string& out_file, std::ostream& out) {
    if (out_file.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_file, std::ios::binary);
    if (!f) throw Error(ErrorKind::BadFlag, "cannot write " + out_file);
    f << text;
}

std::vector<std::string> expand_inputs(const std::string& input) {
    if (input == "all") return {"b1", "b2", "b3"};
    return {input};
}

const std::map<std::string, PipelineMode> kModes{{"compiled", PipelineMode::Compiled},
                                                 {"generic", PipelineMode::Generic}};
const std::map<std::string, Feedforward> kFeedforward{{"unitary", Feedforward::Unitary},
                                                      {"semiclassical", Feedforward::Semiclassical}};
const std::map<std::string, NoiseTarget> kNoiseTargets{{"all", NoiseTarget::All},
                                                       {"entangling", NoiseTarget::EntanglingOnly}};

// solve --------------------------------------------------------------------------

struct SolveArgs {
    std::string problem_file;
    std::string matrix_file;
    std::string vector_file;
    std::optional<int> register_bits;
    std::optional<double> c_const;
    std::optional<double> t0;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::string out_file;
    std::string format = "json";
};

HhlProblem load_problem(const SolveArgs& a) {
    const std::string& main_file = a.problem_file.empty() ? a.matrix_file : a.problem_file;
    if (main_file.empty()) throw Error(ErrorKind::BadFlag, "solve needs a problem file or --matrix");
    const json doc = read_json_file(main_file);

    json problem = doc.is_object() ? doc : json{{"matrix", doc}};
    if (!a.vector_file.empty()) problem["vector"] = read_json_file(a.vector_file);
    if (!problem.contains("vector")) throw Error(ErrorKind::Parse, "no vector given (problem field or --vector)");
    HhlProblem p = problem_from_json(problem);
    if (a.register_bits) p.register_bits = *a.register_bits;
    if (a.c_const) p.c_const = *a.c_const;
    if (a.t0) p.t0 = *a.t0;
    return p;
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
    const HhlProblem p = load_problem(a);
    const HhlValidation v = validate(p);
    const HhlResult r = run_hhl(p);

    json doc = to_json(r);
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "solve";
    json config = to_json(p);
    config["c_const"] = round12(r.c_const);
    config["seed"] = a.seed;
    config["shots"] = a.shots;
    doc["config"] = std::move(config);
    doc["kappa"] = round12(v.kappa);
    doc["exact_spectrum"] = v.exact;
    doc["success_probability_formula"] = round12(success_probability(p));

    if (a.shots > 0) {
        Circuit c = hhl_circuit(p);
        const HhlLayout lay = layout_of(p);
        c.measure(lay.ancilla(), 0);
        ComplexVec init = ComplexVec::Zero(Eigen::Index{1} << lay.total());
        init.head(p.b.size()) = p.b;
        const auto hist = sample_shots(c, init, a.shots, a.seed);
        const std::uint64_t hits = hist.count("1") ? hist.at("1") : 0;
        const double freq = static_cast<double>(hits) / static_cast<double>(a.shots);
        doc["shots"] = {{"count", a.shots},
                        {"success_frequency", round12(freq)},
                        {"stderr", round12(std::sqrt(freq * (1.0 - freq) / static_cast<double>(a.shots)))}};
    }

    if (a.format == "csv") {
        std::ostringstream os;
        os.precision(12);
        os << "index,re,im\n";
        for (Eigen::Index i = 0; i < r.x_state.size(); ++i) {
            os << i << ',' << round12(r.x_state[i].real()) << ',' << round12(r.x_state[i].imag()) << '\n';
        }
        emit(os.str(), a.out_file, out);
    } else {
        emit(doc.dump(2) + "\n", a.out_file, out);
    }
    return kOk;
}

// report --------------------------------------------------------------------------

struct ReportArgs {
    std::string input = "all";
    std::string mode = "compiled";
    std::string feedforward = "unitary";
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::string out_file;
    std::string format = "json";
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
    ReportOptions opts;
    opts.mode = kModes.at(a.mode);
    opts.feedforward = kFeedforward.at(a.feedforward);
    opts.inputs = expand_inputs(a.input);
    opts.shots = a.shots;
    opts.seed = a.seed;
    const Fig3Report report = build_fig3_report(opts);

    if (a.format == "csv") {
        emit(to_csv(report), a.out_file, out);
        return kOk;
    }
    json doc = to_json(report);
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "paper";
    doc["config"] = {{"input", a.input}, {"mode", a.mode},   {"feedforward", a.feedforward},
                     {"shots", a.shots}, {"seed", a.seed}};
    emit(doc.dump(2) + "\n", a.out_file, out);
    return kOk;
}

// noise-sweep --------------------------------------------------------------------

struct SweepArgs {
    std::vector<double> p_values;
    std::string input = "all";
    std::string mode = "compiled";
    std::string feedforward = "unitary";
    std::string target = "all";
    std::uint64_t seed = 0;
    std::string out_file;
    std::string format = "csv";
};

std::vector<double> default_sweep() {
    std::vector<double> ps;
    for (int i = 0; i <= 10; ++i) ps.push_back(0.05 * i);
    return ps;
}

int cmd_noise_sweep(const SweepArgs& a, std::ostream& out) {
    const std::vector<double> ps = a.p_values.empty() ? default_sweep() : a.p_values;
    for (double p : ps) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::BadFlag, "p = " + std::to_string(p) + " outside [0, 1]");
    }
    const ComplexMatrix matrix = instance_matrix();
    std::ostringstream csv;
    csv.precision(12);
    csv << "p,input,fidelity\n";
    json rows = json::array();
    for (double p : ps) {
        ReportOptions opts;
        opts.mode = kModes.at(a.mode);
        opts.feedforward = kFeedforward.at(a.feedforward);
        opts.seed = a.seed;
        opts.noise = NoiseSpec{p, kNoiseTargets.at(a.target)};
        for (const std::string& name : expand_inputs(a.input)) {
            const ComplexVec ideal = classical_solve(matrix, preset_input(name));
            const HhlResult r = run_pipeline(opts, name);
            const double f = fidelity(ideal, reconstruct_single_qubit(pauli_expectations(r.x_density)));
            csv << round12(p) << ',' << name << ',' << round12(f) << '\n';
            rows.push_back({{"p", round12(p)}, {"input", name}, {"fidelity", round12(f)}});
        }
    }
    if (a.format == "json") {
        json doc{{"schema_version", kSchemaVersion},
                 {"command", "noise-sweep"},
                 {"config", {{"input", a.input}, {"mode", a.mode}, {"feedforward", a.feedforward},
                             {"noise_target", a.target}, {"seed", a.seed}}},
                 {"rows", std::move(rows)}};
        emit(doc.dump(2) + "\n", a.out_file, out);
    } else {
        emit(csv.str(), a.out_file, out);
    }
    return kOk;
}

// selftest -----------------------------------------------------------------------

// Fidelity of the compiled b3 output against (3,-1)/√10 with the printed
// rotation angles; frozen from an independent 16-dim statevector computation.
constexpr double kCompiledB3Fidelity = 0.998949878525;

SelftestCheck check(std::string name, bool ok, std::string detail = {}) {
    return {std::move(name), ok, std::move(detail)};
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

}  // namespace

std::vector<SelftestCheck> run_selftest(std::optional<double> theta_big_override) {
    std::vector<SelftestCheck> checks;
    auto guarded = [&](const std::string& name, auto&& body) {
        try {
            checks.push_back(body());
        } catch (const std::exception& e) {
            checks.push_back(check(name, false, e.what()));
        }
    };
    auto compiled_cfg = [&](ComplexVec b, Feedforward ff) {
        CompiledConfig cfg = make_config(std::move(b), ff);
        if (theta_big_override) cfg.theta_big = *theta_big_override;
        return cfg;
    };
    const ComplexMatrix a = instance_matrix();
    const std::vector<std::string> inputs{"b1", "b2", "b3"};

    guarded("eigh instance matrix", [&] {
        const auto ed = eigh(a);
        const bool ok = std::abs(ed.eigenvalues[0] - 1.0) < 1e-12 && std::abs(ed.eigenvalues[1] - 2.0) < 1e-12;
        return check("eigh instance matrix", ok, "lambda = " + fmt(ed.eigenvalues[0]) + ", " + fmt(ed.eigenvalues[1]));
    });
    guarded("exp_unitary period", [&] {
        const double dev = (exp_unitary(a, 2 * std::numbers::pi) - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff();
        return check("exp_unitary period", dev < 1e-10, "max deviation " + fmt(dev));
    });
    guarded("qft matches DFT", [&] {
        const int n = 3;
        const Eigen::Index d = 1 << n;
        ComplexMatrix u = ComplexMatrix::Identity(d, d);
        const Circuit c = qft(n);
        for (const Operation& op : c.ops()) u = embed(std::get<Gate>(op), n) * u;
        double dev = 0.0;
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index k = 0; k < d; ++k) {
                const Complex f = std::polar(1.0 / std::sqrt(double(d)), 2 * std::numbers::pi * double(j * k) / double(d));
                dev = std::max(dev, std::abs(u(j, k) - f));
            }
        return check("qft matches DFT", dev < 1e-10, "max deviation " + fmt(dev));
    });
    guarded("generic oracle", [&] {
        double worst = 1.0;
        for (const auto& in : inputs) worst = std::min(worst, run_hhl(instance_problem(in)).fidelity_vs_classical);
        return check("generic oracle", worst >= 1.0 - 1e-9, "min fidelity " + fmt(worst));
    });
    guarded("generic success probability", [&] {
        double dev = 0.0;
        for (const auto& in : inputs) {
            const HhlProblem p = instance_problem(in);
            dev = std::max(dev, std::abs(run_hhl(p).success_probability - success_probability(p)));
        }
        return check("generic success probability", dev < 1e-9, "max deviation " + fmt(dev));
    });
    guarded("register disentanglement", [&] {
        double worst = 0.0;
        for (const auto& in : inputs) worst = std::max(worst, run_hhl(instance_problem(in)).register_residual);
        return check("register disentanglement", worst < 1e-10, "max residual " + fmt(worst));
    });
    guarded("random exact-spectrum oracle", [&] {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> g;
        double worst = 1.0;
        for (int trial = 0; trial < 20; ++trial) {
            const int dim = trial % 2 ? 4 : 2;
            ComplexMatrix z(dim, dim);
            for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = Complex(g(rng), g(rng));
            const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(z).householderQ();
            Eigen::VectorXd lambda(dim);
            for (int i = 0; i < dim; ++i) lambda[i] = 1.0 + static_cast<double>(rng() % 3);
            HhlProblem p;
            p.a = q * lambda.cast<Complex>().asDiagonal() * q.adjoint();
            p.a = 0.5 * (p.a + p.a.adjoint()).eval();
            p.b = ComplexVec(dim);
            for (int i = 0; i < dim; ++i) p.b[i] = Complex(g(rng), g(rng));
            p.b.normalize();
            worst = std::min(worst, run_hhl(p).fidelity_vs_classical);
        }
        return check("random exact-spectrum oracle", worst > 1.0 - 1e-9, "min fidelity " + fmt(worst));
    });
    guarded("compiled success probability", [&] {
        const std::map<std::string, double> want{{"b1", 0.146446609407}, {"b2", 0.5}, {"b3", 0.323223304703}};
        double dev = 0.0;
        for (const auto& in : inputs) {
            const double p = run_compiled(compiled_cfg(preset_input(in), Feedforward::Unitary)).success_probability;
            dev = std::max(dev, std::abs(p - want.at(in)));
        }
        return check("compiled success probability", dev < 1e-10, "max deviation " + fmt(dev));
    });
    guarded("compiled approximation", [&] {
        const double f = run_compiled(compiled_cfg(preset_input("b3"), Feedforward::Unitary)).fidelity_vs_classical;
        return check("compiled approximation", std::abs(f - kCompiledB3Fidelity) < 1e-10, "b3 fidelity " + fmt(f));
    });
    guarded("feedforward equivalence", [&] {
        double worst = 1.0;
        for (int i = 0; i < 10; ++i) {
            const ComplexVec b = polarization_input(0.37 * i + 0.1);
            const HhlResult u = run_compiled(compiled_cfg(b, Feedforward::Unitary));
            const HhlResult s = run_compiled(compiled_cfg(b, Feedforward::Semiclassical), std::nullopt, i);
            worst = std::min(worst, overlap(u.x_state, s.x_state));
        }
        return check("feedforward equivalence", worst > 1.0 - 1e-10, "min overlap " + fmt(worst));
    });
    guarded("backend equivalence", [&] {
        const CompiledConfig cfg = compiled_cfg(preset_input("b3"), Feedforward::Unitary);
        const HhlResult pure = run_compiled(cfg);
        const HhlResult mixed = run_compiled(cfg, NoiseSpec{0.0, NoiseTarget::All});
        const double dev = (pure.x_density.matrix() - mixed.x_density.matrix()).cwiseAbs().maxCoeff();
        return check("backend equivalence", dev < 1e-10, "max deviation " + fmt(dev));
    });
    guarded("tomography round trip", [&] {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double dev = 0.0;
        for (int i = 0; i < 100; ++i) {
            PauliExpectations e{u(rng), u(rng), u(rng)};
            const double r = e.radius();
            if (r > 1.0) e = {e.z / r, e.x / r, e.y / r};
            const PauliExpectations back = pauli_expectations(reconstruct_single_qubit(e));
            dev = std::max({dev, std::abs(back.z - e.z), std::abs(back.x - e.x), std::abs(back.y - e.y)});
        }
        return check("tomography round trip", dev < 1e-10, "max deviation " + fmt(dev));
    });
    guarded("reciprocal swap", [&] { return check("reciprocal swap", reciprocal_swap_check()); });
    guarded("GHZ at ancilla entangling", [&] {
        const ComplexVec s = intermediate_state(compiled_cfg(preset_input("b3"), Feedforward::Unitary),
                                                CompiledStage::AfterAncillaEntangling);
        const double f = best_ghz_frame(s).fidelity;
        return check("GHZ at ancilla entangling", std::abs(f - 1.0) < 1e-10, "frame fidelity " + fmt(f));
    });
    guarded("noise monotone", [&] {
        double prev = 2.0;
        bool ok = true;
        for (int i = 0; i <= 10; ++i) {
            const CompiledConfig cfg = compiled_cfg(preset_input("b3"), Feedforward::Unitary);
            const HhlResult r = run_compiled(cfg, NoiseSpec{0.05 * i, NoiseTarget::All});
            ok = ok && r.fidelity_vs_classical <= prev + 1e-12;
            prev = r.fidelity_vs_classical;
        }
        return check("noise monotone", ok, "fidelity at p=0.5 " + fmt(prev));
    });
    return checks;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gate-model HHL linear-system simulator", "hhlsim"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Solve a linear system from a JSON problem file");
    s->add_option("problem", solve.problem_file, "Problem file {matrix, vector, register_bits, t0, c_const}");
    s->add_option("--matrix", solve.matrix_file, "Problem file or bare matrix JSON");
    s->add_option("--vector", solve.vector_file, "Vector JSON, overrides the problem's vector");
    s->add_option("--register-bits", solve.register_bits, "Phase-estimation register width");
    s->add_option("--c-const", solve.c_const, "Rotation constant C");
    s->add_option("--t0", solve.t0, "Evolution time t0");
    s->add_option("--shots", solve.shots, "Also sample the heralding ancilla this many times");
    s->add_option("--seed", solve.seed, "Shot seed")->envname("HHL_SIM_SEED");
    s->add_option("--out", solve.out_file, "Output file (default stdout)");
    s->add_option("--format", solve.format)->check(CLI::IsMember({"json", "csv"}));

    ReportArgs report;
    auto* pc = app.add_subcommand("paper", "Reproduce the ideal 2x2 instance for b1, b2, b3");
    pc->add_option("--input", report.input)->check(CLI::IsMember({"b1", "b2", "b3", "all"}));
    pc->add_option("--mode", report.mode)->check(CLI::IsMember({"compiled", "generic"}));
    pc->add_option("--feedforward", report.feedforward)->check(CLI::IsMember({"unitary", "semiclassical"}));
    pc->add_option("--shots", report.shots, "Shot-estimate the Pauli expectations");
    pc->add_option("--seed", report.seed)->envname("HHL_SIM_SEED");
    pc->add_option("--out", report.out_file);
    pc->add_option("--format", report.format)->check(CLI::IsMember({"json", "csv"}));

    SweepArgs sweep;
    auto* ns = app.add_subcommand("noise-sweep", "Output fidelity under depolarizing noise");
    ns->add_option("--p", sweep.p_values, "Depolarizing probabilities (default 0, 0.05, ..., 0.5)")->delimiter(',');
    ns->add_option("--input", sweep.input)->check(CLI::IsMember({"b1", "b2", "b3", "all"}));
    ns->add_option("--mode", sweep.mode)->check(CLI::IsMember({"compiled", "generic"}));
    ns->add_option("--feedforward", sweep.feedforward)->check(CLI::IsMember({"unitary", "semiclassical"}));
    ns->add_option("--noise-target", sweep.target)->check(CLI::IsMember({"all", "entangling"}));
    ns->add_option("--seed", sweep.seed)->envname("HHL_SIM_SEED");
    ns->add_option("--out", sweep.out_file);
    ns->add_option("--format", sweep.format)->check(CLI::IsMember({"json", "csv"}));

    std::optional<double> corrupt_theta;
    auto* st = app.add_subcommand("selftest", "Run the embedded invariant suite");
    st->add_option("--corrupt-theta", corrupt_theta)->group("");  // negative-control hook

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (*s) return cmd_solve(solve, out);
        if (*pc) return cmd_report(report, out);
        if (*ns) return cmd_noise_sweep(sweep, out);
        const auto checks = run_selftest(corrupt_theta);
        bool all = true;
        for (const auto& c : checks) {
            out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(32) << c.name << c.detail << '\n';
            all = all && c.passed;
        }
        out << checks.size() << " checks, " << (all ? "all passed" : "failures present") << '\n';
        return all ? kOk : kCheckFailed;
    } catch (const Error& e) {
        err << "hhlsim: " << e.what() << '\n';
        return e.kind() == ErrorKind::ZeroProbability ? kZeroProbability : kInvalidInput;
    } catch (const std::exception& e) {
        err << "hhlsim: " << e.what() << '\n';
        return kCheckFailed;
    }
}

}  // namespace hhlsim::cli
