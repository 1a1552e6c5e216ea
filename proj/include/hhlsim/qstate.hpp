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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hhlsim {

using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

// Qubit ordering used throughout: qubit 0 is the least significant bit of the
// basis-state index. In tensor(a, b) the left factor occupies the higher
// qubit indices, so tensor(|0>, |1>) is basis state 1.

inline constexpr double kHermitianInputTol = 1e-8;
inline constexpr double kHermitianOutputTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kNormTol = 1e-12;

struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;  // ascending
    ComplexMatrix eigenvectors;   // column j pairs with eigenvalues[j]
};

/// Mixed state on `qubits()` qubits. Construction checks shape, hermiticity
/// and unit trace; positivity is checked within 1e-10.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m);

    static DensityMatrix from_pure(const ComplexVec& psi);
    static DensityMatrix maximally_mixed(int qubits);

    const ComplexMatrix& matrix() const { return m_; }
    int qubits() const { return qubits_; }
    Eigen::Index dim() const { return m_.rows(); }
    double trace() const { return m_.trace().real(); }
    double purity() const;

private:
    struct Unchecked {};
    DensityMatrix(ComplexMatrix m, int qubits, Unchecked) : m_(std::move(m)), qubits_(qubits) {}
    friend DensityMatrix make_density_unchecked(ComplexMatrix m);

    ComplexMatrix m_;
    int qubits_;
};

/// Builds a density matrix from an already-valid operator (hermitian, unit
/// trace) without re-running the positivity check. Internal use by the
/// simulator hot paths.
DensityMatrix make_density_unchecked(ComplexMatrix m);

bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianOutputTol);
bool is_unitary(const ComplexMatrix& m, double tol = kUnitaryTol);
bool is_normalized(const ComplexVec& v, double tol = kNormTol);

/// Number of qubits spanned by `dim`, or -1 when dim is not a power of two.
int qubit_count(Eigen::Index dim);

EigenDecomposition eigh(const ComplexMatrix& m);

/// e^{i a t} computed spectrally.
ComplexMatrix exp_unitary(const ComplexMatrix& a, double t);

/// <x|rho|x>, clamped to [0, 1].
double fidelity(const ComplexVec& pure, const DensityMatrix& rho);

/// |<a|b>|^2 for normalized vectors; global-phase insensitive.
double overlap(const ComplexVec& a, const ComplexVec& b);

ComplexVec tensor(const ComplexVec& a, const ComplexVec& b);
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexVec basis_state(int qubits, std::uint64_t index);

/// Traces out every qubit not in `keep`. The kept qubits keep their relative
/// order: the smallest kept index becomes qubit 0 of the result.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Von Neumann entropy in bits of the reduced state on `keep`.
double entanglement_entropy(const ComplexVec& psi, std::span<const int> keep);

}  // namespace hhlsim
