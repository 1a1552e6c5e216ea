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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hhlsim/qstate.hpp"

namespace hhlsim {

enum class GateKind { X, Y, Z, Hadamard, Phase, HTheta, Swap, Unitary };

/// A gate together with the qubits it acts on. Controls are optional and may
/// be open (conditioned on |0>) through `control_values`.
///
/// For multi-qubit targets, targets[0] is the least significant bit of the
/// gate's local index, matching the register-wide convention.
struct Gate {
    GateKind kind = GateKind::X;
    std::vector<int> targets;
    std::vector<int> controls;
    std::vector<int> control_values;  // empty means every control on |1>
    double angle = 0.0;               // Phase: phi, HTheta: theta
    ComplexMatrix unitary;            // Unitary only

    /// Matrix acting on the targets alone.
    ComplexMatrix base_matrix() const;
    /// Every qubit the gate touches, controls first.
    std::vector<int> qubits() const;
    bool entangling() const { return qubits().size() >= 2; }
    Gate adjoint() const;
};

/// H(theta) = [[cos 2θ, sin 2θ], [sin 2θ, -cos 2θ]].
ComplexMatrix h_theta_matrix(double theta);

namespace gates {
Gate x(int target);
Gate y(int target);
Gate z(int target);
Gate hadamard(int target);
Gate phase(int target, double phi);
Gate h_theta(int target, double theta);
Gate swap(int a, int b);
/// Throws NonUnitary unless u is unitary within 1e-10 and sized for targets.
Gate unitary(ComplexMatrix u, std::vector<int> targets);
Gate cnot(int control, int target);
Gate controlled(Gate inner, std::vector<int> controls, std::vector<int> control_values = {});
}  // namespace gates

struct Measure {
    int qubit;
    int slot;
};

/// Applies `gate` only when classical slot `slot` holds `outcome`.
struct ConditionalGate {
    Gate gate;
    int slot;
    int outcome = 1;
};

struct PostSelect {
    int qubit;
    int outcome;
};

using Operation = std::variant<Gate, Measure, ConditionalGate, PostSelect>;

class Circuit {
public:
    explicit Circuit(int qubits);

    int qubits() const { return qubits_; }
    int classical_slots() const { return slots_; }
    const std::vector<Operation>& ops() const { return ops_; }
    bool empty() const { return ops_.empty(); }
    bool is_unitary() const;

    Circuit& add(Gate g);
    Circuit& measure(int qubit, int slot);
    Circuit& conditional(Gate g, int slot, int outcome = 1);
    Circuit& post_select(int qubit, int outcome);
    Circuit& add(const Operation& op);

    /// Appends `other`, relabelling its qubit q as qubit_map[q] (identity when
    /// the map is empty).
    Circuit& append(const Circuit& other, const std::vector<int>& qubit_map = {});

    /// Reversed circuit of adjoint gates. Only defined for unitary circuits.
    Circuit inverse() const;

    /// Gate counts keyed by class: "h", "x", "cx", "ch_theta", "cccunitary", ...
    /// plus "entangling", "measure", "conditional" and "post_select" totals.
    std::map<std::string, int> census() const;

private:
    void check_gate(const Gate& g) const;

    int qubits_;
    int slots_ = 0;
    std::vector<bool> written_;
    std::vector<Operation> ops_;
};

enum class NoiseTarget { All, EntanglingOnly };

/// Depolarizing channel applied after each matching gate, on the qubits the
/// gate touches.
struct NoiseSpec {
    double p_depolarizing = 0.0;
    NoiseTarget applies_to = NoiseTarget::All;
};

struct RunOutcome {
    std::variant<ComplexVec, DensityMatrix> state;
    std::vector<int> classical_bits;  // -1 for slots never written
    double probability = 1.0;         // Born probability of the realized branch

    const ComplexVec& statevector() const { return std::get<ComplexVec>(state); }
    const DensityMatrix& density() const { return std::get<DensityMatrix>(state); }
};

/// Full 2^qubits unitary of `g`, built by iterating over basis states.
ComplexMatrix embed(const Gate& g, int qubits);

ComplexVec apply_gate(const ComplexVec& state, const Gate& g);

/// Noiseless runs use the statevector backend; passing a NoiseSpec (even with
/// p = 0) switches to the density-matrix backend. Measurements draw from
/// ShotRng(seed, 0).
RunOutcome run(const Circuit& c, const ComplexVec& input,
               const std::optional<NoiseSpec>& noise = std::nullopt, std::uint64_t seed = 0);
RunOutcome run(const Circuit& c, const DensityMatrix& input,
               const std::optional<NoiseSpec>& noise = std::nullopt, std::uint64_t seed = 0);

/// Projects `qubit` onto `outcome`; returns the renormalized state and the
/// branch probability. Throws ZeroProbability below a projection norm of 1e-14.
std::pair<ComplexVec, double> post_select(const ComplexVec& state, int qubit, int outcome);
std::pair<DensityMatrix, double> post_select(const DensityMatrix& rho, int qubit, int outcome);

/// Probability that `qubit` reads 1.
double probability_one(const ComplexVec& state, int qubit);

/// Classical records as bit strings, slot 0 leftmost. Shot i draws from
/// ShotRng(seed, i), so the histogram is independent of scheduling.
std::map<std::string, std::uint64_t> sample_shots(const Circuit& c, const ComplexVec& input,
                                                  std::uint64_t shots, std::uint64_t seed);

/// QFT with F_jk = e^{2πijk/2^n}/√(2^n) on qubits 0..n-1.
Circuit qft(int n);
Circuit inverse_qft(int n);

/// rho -> (1-p) rho + p (I/d ⊗ tr_set rho) on `qubits`.
DensityMatrix depolarize(const DensityMatrix& rho, std::span<const int> qubits, double p);

}  // namespace hhlsim
