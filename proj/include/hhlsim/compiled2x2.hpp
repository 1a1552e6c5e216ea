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

#include <numbers>
#include <optional>
#include <string_view>

#include "hhlsim/circuit.hpp"
#include "hhlsim/hhl.hpp"

namespace hhlsim {

// Four-qubit compiled circuit for the 2x2 instance A = [[1.5, 0.5], [0.5, 1.5]]
// (eigenvalues 1 and 2).
//
//   phase estimation   H(in) X(R2) CX(in->R1) CX(in->R2) H(in) [swap]
//   reciprocal         [swap]            (the two swaps cancel and are elided)
//   rotation           C_R1-H(theta_big) on ancilla, C_R2-H(theta_small)
//   uncompute          H(R1) H(R2), then either measure R1, R2 and feed the
//                      outcomes forward as X corrections (semiclassical), or the
//                      deferred-measurement equivalent with two CNOTs (unitary)
//
// Register encoding before the reciprocal swap: lambda=1 -> |R1 R2> = |01>,
// lambda=2 -> |10>. After it the register holds 2/lambda, so R1 flags lambda=1
// and R2 flags lambda=2.

enum class Feedforward { Unitary, Semiclassical };

struct QubitRoles {
    int ancilla = 3;
    int register_r1 = 2;
    int register_r2 = 1;
    int input = 0;
};

inline constexpr QubitRoles kRoles{};

struct CompiledConfig {
    ComplexVec input_b;
    Feedforward feedforward = Feedforward::Unitary;
    double theta_big = std::numbers::pi / 8;
    double theta_small = std::numbers::pi / 16;
};

enum class CompiledStage {
    AfterPhaseEstimation,    // register holds |lambda>
    AfterAncillaEntangling,  // ancilla parity-entangled with R1 inside the rotation
    AfterRotation,
};

ComplexMatrix instance_matrix();

/// "b1", "b2", "b3"; throws BadFlag for anything else.
ComplexVec preset_input(std::string_view name);

/// cos(angle)|0> + sin(angle)|1>, i.e. a linear polarization angle.
ComplexVec polarization_input(double angle);

CompiledConfig make_config(ComplexVec b, Feedforward ff = Feedforward::Unitary);

Circuit build_compiled_circuit(const CompiledConfig& cfg);

/// Circuit up to and including the rotation (the four entangling gates).
Circuit compiled_forward_circuit(const CompiledConfig& cfg);

HhlResult run_compiled(const CompiledConfig& cfg,
                       const std::optional<NoiseSpec>& noise = std::nullopt,
                       std::uint64_t seed = 0);

double compiled_success_probability(const CompiledConfig& cfg);

ComplexVec intermediate_state(const CompiledConfig& cfg, CompiledStage stage);

/// Input embedded as |0>_anc |00>_R |b>.
ComplexVec compiled_initial_state(const ComplexVec& b);

bool reciprocal_swap_check();

}  // namespace hhlsim
