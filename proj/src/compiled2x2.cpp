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

#include "hhlsim/compiled2x2.hpp"

#include <cmath>
#include <numbers>

#include "hhlsim/error.hpp"

namespace hhlsim {

namespace {

constexpr QubitRoles R = kRoles;

// Same qubit layout as the generic pipeline with one input qubit and two
// register bits: R2 is register bit 0, R1 register bit 1.
constexpr HhlLayout kLayout{1, 2};

void add_phase_estimation(Circuit& c) {
    c.add(gates::hadamard(R.input));
    c.add(gates::x(R.register_r2));
    c.add(gates::cnot(R.input, R.register_r1));
    c.add(gates::cnot(R.input, R.register_r2));
    c.add(gates::hadamard(R.input));
}

void add_rotation(Circuit& c, const CompiledConfig& cfg) {
    c.add(gates::controlled(gates::h_theta(R.ancilla, cfg.theta_big), {R.register_r1}));
    c.add(gates::controlled(gates::h_theta(R.ancilla, cfg.theta_small), {R.register_r2}));
}

void check_input(const ComplexVec& b) {
    if (b.size() != 2) throw Error(ErrorKind::DimensionMismatch, "compiled circuit takes a single-qubit input");
    if (!is_normalized(b)) throw Error(ErrorKind::NotNormalized, "input vector");
}

}  // namespace

ComplexMatrix instance_matrix() {
    ComplexMatrix a(2, 2);
    a << 1.5, 0.5, 0.5, 1.5;
    return a;
}

ComplexVec preset_input(std::string_view name) {
    const double h = std::numbers::sqrt2 / 2;
    ComplexVec b(2);
    if (name == "b1") b << h, h;
    else if (name == "b2") b << h, -h;
    else if (name == "b3") b << 1.0, 0.0;
    else throw Error(ErrorKind::BadFlag, "unknown input preset '" + std::string(name) + "'");
    return b;
}

ComplexVec polarization_input(double angle) {
    ComplexVec b(2);
    b << std::cos(angle), std::sin(angle);
    return b;
}

CompiledConfig make_config(ComplexVec b, Feedforward ff) {
    CompiledConfig cfg;
    cfg.input_b = std::move(b);
    cfg.feedforward = ff;
    return cfg;
}

ComplexVec compiled_initial_state(const ComplexVec& b) {
    check_input(b);
    ComplexVec s = ComplexVec::Zero(16);
    s[0] = b[0];
    s[1 << R.input] = b[1];
    return s;
}

Circuit compiled_forward_circuit(const CompiledConfig& cfg) {
    Circuit c(4);
    add_phase_estimation(c);
    add_rotation(c, cfg);
    return c;
}

Circuit build_compiled_circuit(const CompiledConfig& cfg) {
    Circuit c = compiled_forward_circuit(cfg);
    // Rotate the registers into the X basis; each outcome leaves a known sign
    // pattern on the two eigenvector branches of the input.
    c.add(gates::hadamard(R.register_r1));
    c.add(gates::hadamard(R.register_r2));
    if (cfg.feedforward == Feedforward::Semiclassical) {
        c.measure(R.register_r1, 0);
        c.measure(R.register_r2, 1);
        c.conditional(gates::x(R.input), 0);
        c.conditional(gates::x(R.input), 1);
        c.conditional(gates::x(R.register_r1), 0);
        c.conditional(gates::x(R.register_r2), 1);
    } else {
        c.add(gates::cnot(R.register_r1, R.input));
        c.add(gates::cnot(R.register_r2, R.input));
        // Registers are now |+>|->.
        c.add(gates::hadamard(R.register_r1));
        c.add(gates::hadamard(R.register_r2));
        c.add(gates::x(R.register_r2));
    }
    return c;
}

HhlResult run_compiled(const CompiledConfig& cfg, const std::optional<NoiseSpec>& noise, std::uint64_t seed) {
    const Circuit c = build_compiled_circuit(cfg);
    const ComplexVec expected = classical_solve(instance_matrix(), cfg.input_b);
    HhlResult r = postselect_output(run(c, compiled_initial_state(cfg.input_b), noise, seed), kLayout, expected);
    r.gate_count = c.census();
    r.c_const = std::sin(2.0 * cfg.theta_big);  // implied C: amplitude on the lambda = 1 branch
    return r;
}

double compiled_success_probability(const CompiledConfig& cfg) {
    check_input(cfg.input_b);
    const double h = std::numbers::sqrt2 / 2;
    // u+ = (1, 1)/√2 has lambda = 2, u- = (1, -1)/√2 has lambda = 1.
    const double beta_plus = std::norm(h * (cfg.input_b[0] + cfg.input_b[1]));
    const double beta_minus = std::norm(h * (cfg.input_b[0] - cfg.input_b[1]));
    const double s_small = std::sin(2.0 * cfg.theta_small);
    const double s_big = std::sin(2.0 * cfg.theta_big);
    return beta_plus * s_small * s_small + beta_minus * s_big * s_big;
}

ComplexVec intermediate_state(const CompiledConfig& cfg, CompiledStage stage) {
    Circuit c(4);
    add_phase_estimation(c);
    if (stage == CompiledStage::AfterRotation) {
        add_rotation(c, cfg);
    } else {
        c.add(gates::swap(R.register_r1, R.register_r2));  // phase-estimation bit reversal
        if (stage == CompiledStage::AfterAncillaEntangling) {
            c.add(gates::swap(R.register_r1, R.register_r2));  // reciprocal
            c.add(gates::cnot(R.register_r1, R.ancilla));
        }
    }
    return run(c, compiled_initial_state(cfg.input_b)).statevector();
}

bool reciprocal_swap_check() {
    const Gate swap = gates::swap(R.register_r1, R.register_r2);
    auto encode = [](int value) {
        const std::uint64_t r1 = static_cast<std::uint64_t>(value >> 1) & 1U;
        const std::uint64_t r2 = static_cast<std::uint64_t>(value) & 1U;
        return (r1 << R.register_r1) | (r2 << R.register_r2);
    };
    for (int lambda : {1, 2}) {
        const ComplexVec out = apply_gate(basis_state(4, encode(lambda)), swap);
        const ComplexVec want = basis_state(4, encode(2 / lambda));
        if ((out - want).norm() > 1e-15) return false;
    }
    return true;
}

}  // namespace hhlsim
