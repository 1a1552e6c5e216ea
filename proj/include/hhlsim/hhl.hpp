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

#pragma once

#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hhlsim/circuit.hpp"
#include "hhlsim/qstate.hpp"

namespace hhlsim {

struct HhlProblem {
    ComplexMatrix a;
    ComplexVec b;
    int register_bits = 2;
    double t0 = 2.0 * std::numbers::pi;
    std::optional<double> c_const;  // unset: smallest populated eigenvalue
};

struct HhlValidation {
    double kappa = 0.0;
    bool exact = false;
    EigenDecomposition spectrum;
};

struct HhlResult {
    ComplexVec x_state;
    DensityMatrix x_density = DensityMatrix::maximally_mixed(1);
    double success_probability = 0.0;
    double fidelity_vs_classical = 0.0;
    double register_residual = 0.0;  // population outside |0..0> after uncompute
    bool register_reset_ok = false;
    double c_const = 0.0;
    std::map<std::string, int> gate_count;
};

/// Qubit assignment of the generic pipeline: input qubits 0..m-1, register
/// qubits m..m+n-1, ancilla m+n.
struct HhlLayout {
    int input_qubits;
    int register_bits;

    int total() const { return input_qubits + register_bits + 1; }
    int ancilla() const { return input_qubits + register_bits; }
    int register_qubit(int j) const { return input_qubits + j; }
    std::vector<int> input() const;
    std::vector<int> register_() const;
};

HhlLayout layout_of(const HhlProblem& p);

HhlValidation validate(const HhlProblem& p);

/// Register value written by phase estimation for eigenvalue lambda.
double register_value(double lambda, double t0);

/// C actually used: p.c_const, or the smallest populated register value in
/// eigenvalue units.
double resolved_c(const HhlProblem& p);

/// Register probabilities after phase estimation on |0..0>|b>.
std::vector<double> register_distribution(const HhlProblem& p);

Circuit phase_estimation_circuit(const HhlProblem& p);
Circuit reciprocal_rotation_circuit(const HhlProblem& p);
/// Phase estimation, rotation and uncompute, without post-selection.
Circuit hhl_circuit(const HhlProblem& p);

/// Heralds ancilla = 1, projects the register onto |0..0> and fills every
/// HhlResult field except c_const and gate_count. Statevector outcomes keep the
/// register slice; density outcomes post-select register qubits one by one.
HhlResult postselect_output(const RunOutcome& out, const HhlLayout& lay, const ComplexVec& expected);

HhlResult run_hhl(const HhlProblem& p, const std::optional<NoiseSpec>& noise = std::nullopt);

/// A^{-1} b scaled to unit length.
ComplexVec classical_solve(const ComplexMatrix& a, const ComplexVec& b);

/// Σ_j |β_j|² C²/λ_j².
double success_probability(const HhlProblem& p);

}  // namespace hhlsim
