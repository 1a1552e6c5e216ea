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

#include "hhlsim/analysis.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "hhlsim/error.hpp"

namespace hhlsim {

double PauliExpectations::operator[](Pauli p) const {
    switch (p) {
        case Pauli::Z: return z;
        case Pauli::X: return x;
        case Pauli::Y: return y;
    }
    return 0.0;
}

double PauliExpectations::radius() const { return std::sqrt(x * x + y * y + z * z); }

double pauli_expectation(const ComplexVec& state, Pauli which) {
    if (state.size() != 2) throw Error(ErrorKind::DimensionMismatch, "Pauli expectation needs a single qubit");
    const Complex a0 = state[0];
    const Complex a1 = state[1];
    const double norm = state.squaredNorm();
    switch (which) {
        case Pauli::Z: return (std::norm(a0) - std::norm(a1)) / norm;
        case Pauli::X: return 2.0 * (std::conj(a0) * a1).real() / norm;
        case Pauli::Y: return 2.0 * (std::conj(a0) * a1).imag() / norm;
    }
    return 0.0;
}

double pauli_expectation(const DensityMatrix& rho, Pauli which) {
    if (rho.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "Pauli expectation needs a single qubit");
    const ComplexMatrix& m = rho.matrix();
    switch (which) {
        case Pauli::Z: return (m(0, 0) - m(1, 1)).real();
        case Pauli::X: return 2.0 * m(1, 0).real();
        case Pauli::Y: return 2.0 * m(1, 0).imag();
    }
    return 0.0;
}

PauliExpectations pauli_expectations(const ComplexVec& state) {
    return {pauli_expectation(state, Pauli::Z), pauli_expectation(state, Pauli::X), pauli_expectation(state, Pauli::Y)};
}

PauliExpectations pauli_expectations(const DensityMatrix& rho) {
    return {pauli_expectation(rho, Pauli::Z), pauli_expectation(rho, Pauli::X), pauli_expectation(rho, Pauli::Y)};
}

DensityMatrix reconstruct_single_qubit(const PauliExpectations& e) {
    using namespace std::complex_literals;
    PauliExpectations v = e;
    const double r = e.radius();
    if (!std::isfinite(r) || r > 1.0 + kBlochClampTol) {
        throw Error(ErrorKind::UnphysicalExpectations, "Bloch radius " + std::to_string(r) + " exceeds 1");
    }
    if (r > 1.0) {
        v.x /= r;
        v.y /= r;
        v.z /= r;
    }
    ComplexMatrix m(2, 2);
    m << 0.5 * (1.0 + v.z), 0.5 * (v.x - 1i * v.y), 0.5 * (v.x + 1i * v.y), 0.5 * (1.0 - v.z);
    return DensityMatrix(std::move(m));
}

double ghz_fidelity(const DensityMatrix& rho) {
    if (rho.dim() != 16) throw Error(ErrorKind::DimensionMismatch, "GHZ fidelity needs a 4-qubit state");
    ComplexVec ghz = ComplexVec::Zero(16);
    ghz[0] = ghz[15] = std::numbers::sqrt2 / 2;
    return fidelity(ghz, rho);
}

const std::vector<ComplexMatrix>& ghz_frame_gates() {
    static const std::vector<ComplexMatrix> frames = [] {
        const ComplexMatrix i = ComplexMatrix::Identity(2, 2);
        const ComplexMatrix x = gates::x(0).base_matrix();
        const ComplexMatrix z = gates::z(0).base_matrix();
        const ComplexMatrix h = gates::hadamard(0).base_matrix();
        return std::vector<ComplexMatrix>{i, x, z, h, x * h, z * h};
    }();
    return frames;
}

std::vector<std::string> ghz_frame_names() { return {"I", "X", "Z", "H", "XH", "ZH"}; }

ComplexVec apply_local_frame(const ComplexVec& psi, const std::vector<int>& choice) {
    const int q = qubit_count(psi.size());
    if (q < 0 || static_cast<int>(choice.size()) != q) {
        throw Error(ErrorKind::DimensionMismatch, "one frame choice per qubit");
    }
    const auto& frames = ghz_frame_gates();
    ComplexVec out = psi;
    for (int k = 0; k < q; ++k) {
        const int c = choice[static_cast<std::size_t>(k)];
        if (c < 0 || c >= static_cast<int>(frames.size())) throw Error(ErrorKind::BadIndex, "frame choice");
        out = embed(gates::unitary(frames[static_cast<std::size_t>(c)], {k}), q) * out;
    }
    return out;
}

LocalFrame best_ghz_frame(const ComplexVec& psi) {
    if (psi.size() != 16) throw Error(ErrorKind::DimensionMismatch, "GHZ frame search needs 4 qubits");
    const auto& frames = ghz_frame_gates();
    const int nf = static_cast<int>(frames.size());
    std::vector<std::vector<ComplexMatrix>> embedded(4);
    for (int k = 0; k < 4; ++k) {
        for (const auto& f : frames) embedded[static_cast<std::size_t>(k)].push_back(embed(gates::unitary(f, {k}), 4));
    }
    const double h = std::numbers::sqrt2 / 2;
    LocalFrame best;
    std::array<int, 4> c{};
    for (c[0] = 0; c[0] < nf; ++c[0])
        for (c[1] = 0; c[1] < nf; ++c[1])
            for (c[2] = 0; c[2] < nf; ++c[2])
                for (c[3] = 0; c[3] < nf; ++c[3]) {
                    ComplexVec v = psi;
                    for (int k = 0; k < 4; ++k) v = embedded[static_cast<std::size_t>(k)][static_cast<std::size_t>(c[k])] * v;
                    const double f = std::norm(h * (v[0] + v[15]));
                    if (f > best.fidelity + 1e-15) best = {{c[0], c[1], c[2], c[3]}, f};
                }
    return best;
}

// Preset-instance pipelines -------------------------------------------------------

HhlProblem instance_problem(std::string_view input) {
    HhlProblem p;
    p.a = instance_matrix();
    p.b = preset_input(input);
    p.register_bits = 2;
    p.c_const = 1.0;
    return p;
}

namespace {

CompiledConfig compiled_config(const ReportOptions& opts, std::string_view input) {
    CompiledConfig cfg = make_config(preset_input(input), opts.feedforward);
    if (opts.theta_big_override) cfg.theta_big = *opts.theta_big_override;
    return cfg;
}

// Algorithm circuit and initial state over the shared 4-qubit layout.
std::pair<Circuit, ComplexVec> pipeline_circuit(const ReportOptions& opts, std::string_view input) {
    if (opts.mode == PipelineMode::Compiled) {
        const CompiledConfig cfg = compiled_config(opts, input);
        return {build_compiled_circuit(cfg), compiled_initial_state(cfg.input_b)};
    }
    const HhlProblem p = instance_problem(input);
    return {hhl_circuit(p), compiled_initial_state(p.b)};
}

}  // namespace

HhlResult run_pipeline(const ReportOptions& opts, std::string_view input) {
    if (opts.mode == PipelineMode::Compiled) return run_compiled(compiled_config(opts, input), opts.noise, opts.seed);
    return run_hhl(instance_problem(input), opts.noise);
}

ShotEstimate estimate_by_shots(const ReportOptions& opts, std::string_view input) {
    if (opts.shots == 0) throw Error(ErrorKind::BadFlag, "shot estimate needs shots > 0");
    const auto [algorithm, init] = pipeline_circuit(opts, input);
    constexpr QubitRoles R = kRoles;

    ShotEstimate est;
    est.accepted = opts.shots;
    const std::array<Pauli, 3> observables{Pauli::Z, Pauli::X, Pauli::Y};
    std::array<double, 3> mean{};
    std::array<double, 3> err{};
    for (std::size_t o = 0; o < observables.size(); ++o) {
        Circuit c(algorithm.qubits());
        c.append(algorithm);
        if (observables[o] == Pauli::X) c.add(gates::hadamard(R.input));
        if (observables[o] == Pauli::Y) {
            c.add(gates::phase(R.input, -std::numbers::pi / 2));
            c.add(gates::hadamard(R.input));
        }
        const int base = c.classical_slots();
        c.measure(R.ancilla, base);
        c.measure(R.register_r1, base + 1);
        c.measure(R.register_r2, base + 2);
        c.measure(R.input, base + 3);

        const auto hist = sample_shots(c, init, opts.shots, opts.seed + 1000003ULL * o);
        std::uint64_t n0 = 0;
        std::uint64_t n1 = 0;
        for (const auto& [bits, count] : hist) {
            const std::string tail = bits.substr(static_cast<std::size_t>(base));
            if (tail == "1000") n0 += count;
            else if (tail == "1001") n1 += count;
        }
        const std::uint64_t n = n0 + n1;
        if (n == 0) throw Error(ErrorKind::ZeroProbability, "no shot passed post-selection");
        mean[o] = (static_cast<double>(n0) - static_cast<double>(n1)) / static_cast<double>(n);
        err[o] = std::sqrt(std::max(0.0, 1.0 - mean[o] * mean[o]) / static_cast<double>(n));
        est.accepted = std::min(est.accepted, n);
    }
    est.mean = {mean[0], mean[1], mean[2]};
    est.stderr_ = {err[0], err[1], err[2]};
    return est;
}

Fig3Report build_fig3_report(const ReportOptions& opts) {
    if (opts.shots > 0 && opts.noise) {
        throw Error(ErrorKind::BadFlag, "shot estimates are noiseless; drop either shots or noise");
    }
    Fig3Report report;
    report.mode = opts.mode;
    report.feedforward = opts.feedforward;
    report.noise = opts.noise;
    const ComplexMatrix a = instance_matrix();
    for (const std::string& name : opts.inputs) {
        InputReport row;
        row.input = name;
        const ComplexVec ideal_x = classical_solve(a, preset_input(name));
        const HhlResult result = run_pipeline(opts, name);
        row.ideal = pauli_expectations(ideal_x);
        row.simulated = pauli_expectations(result.x_density);
        row.success_probability = result.success_probability;
        row.fidelity = fidelity(ideal_x, reconstruct_single_qubit(row.simulated));
        if (opts.shots > 0) row.shots = estimate_by_shots(opts, name);
        report.inputs.push_back(std::move(row));
    }
    return report;
}

}  // namespace hhlsim
