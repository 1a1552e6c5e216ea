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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hhlsim/circuit.hpp"
#include "hhlsim/compiled2x2.hpp"
#include "hhlsim/qstate.hpp"

namespace hhlsim {

enum class Pauli { Z, X, Y };

struct PauliExpectations {
    double z = 0.0;
    double x = 0.0;
    double y = 0.0;

    double operator[](Pauli p) const;
    double radius() const;
};

double pauli_expectation(const ComplexVec& state, Pauli which);
double pauli_expectation(const DensityMatrix& rho, Pauli which);
PauliExpectations pauli_expectations(const ComplexVec& state);
PauliExpectations pauli_expectations(const DensityMatrix& rho);

inline constexpr double kBlochClampTol = 1e-6;

/// ρ = (I + xX + yY + zZ)/2. Bloch radii up to 1 + 1e-6 are pulled back onto
/// the sphere; larger radii throw UnphysicalExpectations.
DensityMatrix reconstruct_single_qubit(const PauliExpectations& e);

/// <GHZ|ρ|GHZ> with GHZ = (|0000> + |1111>)/√2.
double ghz_fidelity(const DensityMatrix& rho);
inline bool genuine_entanglement_witnessed(double ghz_fid) { return ghz_fid > 0.5; }

/// Local frame applied qubit by qubit before comparing against GHZ. Each entry
/// is one of the single-qubit gates in ghz_frame_gates().
struct LocalFrame {
    std::vector<int> choice;  // index into ghz_frame_gates(), per qubit
    double fidelity = 0.0;
};

/// The frame set searched by best_ghz_frame: I, X, Z, H, XH, ZH.
const std::vector<ComplexMatrix>& ghz_frame_gates();
std::vector<std::string> ghz_frame_names();

ComplexVec apply_local_frame(const ComplexVec& psi, const std::vector<int>& choice);

/// Best GHZ fidelity of a 4-qubit pure state over the documented frame set.
LocalFrame best_ghz_frame(const ComplexVec& psi);

enum class PipelineMode { Compiled, Generic };

struct ShotEstimate {
    PauliExpectations mean;
    PauliExpectations stderr_;
    std::uint64_t accepted = 0;  // shots per observable that passed post-selection
};

struct InputReport {
    std::string input;
    PauliExpectations ideal;
    PauliExpectations simulated;
    double success_probability = 0.0;
    double fidelity = 0.0;
    std::optional<ShotEstimate> shots;
};

struct Fig3Report {
    PipelineMode mode = PipelineMode::Generic;
    Feedforward feedforward = Feedforward::Unitary;
    std::optional<NoiseSpec> noise;
    std::vector<InputReport> inputs;
};

struct ReportOptions {
    PipelineMode mode = PipelineMode::Generic;
    Feedforward feedforward = Feedforward::Unitary;
    std::optional<NoiseSpec> noise;
    std::vector<std::string> inputs{"b1", "b2", "b3"};
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::optional<double> theta_big_override;  // test hook for negative controls
};

/// The generic pipeline for the 2x2 instance: A, the preset input, two
/// register bits, t0 = 2π, C = 1.
HhlProblem instance_problem(std::string_view input);

/// Runs one pipeline for one input and returns the output-qubit state.
HhlResult run_pipeline(const ReportOptions& opts, std::string_view input);

/// Shot-based Pauli estimates of the post-selected output qubit, with
/// binomial standard errors √((1-<M>²)/n).
ShotEstimate estimate_by_shots(const ReportOptions& opts, std::string_view input);

/// Fidelity as reported: ideal |x> against the density matrix rebuilt from the
/// simulated Pauli expectations.
Fig3Report build_fig3_report(const ReportOptions& opts);

}  // namespace hhlsim
