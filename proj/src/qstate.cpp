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

#include "hhlsim/qstate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "hhlsim/error.hpp"

namespace hhlsim {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotHermitian: return "not hermitian";
        case ErrorKind::DimensionMismatch: return "dimension mismatch";
        case ErrorKind::BadIndex: return "bad index";
        case ErrorKind::NonUnitary: return "non-unitary";
        case ErrorKind::ZeroProbability: return "zero probability";
        case ErrorKind::Singular: return "singular";
        case ErrorKind::NotNormalized: return "not normalized";
        case ErrorKind::InvalidC: return "invalid C";
        case ErrorKind::UnphysicalExpectations: return "unphysical expectations";
        case ErrorKind::BadFlag: return "bad flag";
        case ErrorKind::Parse: return "parse error";
    }
    return "error";
}

namespace {

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be square and non-empty");
    }
    if (!is_hermitian(m, kHermitianInputTol)) {
        std::ostringstream os;
        os << what << " deviates from its adjoint by " << max_abs(m - m.adjoint());
        throw Error(ErrorKind::NotHermitian, os.str());
    }
}

}  // namespace

int qubit_count(Eigen::Index dim) {
    if (dim <= 0) return -1;
    const auto u = static_cast<std::uint64_t>(dim);
    if (!std::has_single_bit(u)) return -1;
    return std::countr_zero(u);
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const ComplexMatrix id = ComplexMatrix::Identity(m.rows(), m.cols());
    return max_abs(m.adjoint() * m - id) <= tol;
}

bool is_normalized(const ComplexVec& v, double tol) {
    return std::abs(v.squaredNorm() - 1.0) <= tol;
}

// DensityMatrix ---------------------------------------------------------------

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)), qubits_(qubit_count(m_.rows())) {
    if (m_.rows() != m_.cols() || qubits_ < 0) {
        throw Error(ErrorKind::DimensionMismatch, "density matrix must be 2^q x 2^q");
    }
    if (!is_hermitian(m_, kHermitianOutputTol)) {
        throw Error(ErrorKind::NotHermitian, "density matrix");
    }
    if (std::abs(trace() - 1.0) > 1e-10) {
        throw Error(ErrorKind::NotNormalized, "density matrix trace is " + std::to_string(trace()));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10) {
        throw Error(ErrorKind::NotNormalized, "density matrix has a negative eigenvalue");
    }
}

DensityMatrix make_density_unchecked(ComplexMatrix m) {
    const int q = qubit_count(m.rows());
    return DensityMatrix(std::move(m), q, DensityMatrix::Unchecked{});
}

DensityMatrix DensityMatrix::from_pure(const ComplexVec& psi) {
    if (qubit_count(psi.size()) < 0) {
        throw Error(ErrorKind::DimensionMismatch, "state dimension must be a power of two");
    }
    if (!is_normalized(psi, 1e-10)) {
        throw Error(ErrorKind::NotNormalized, "pure state");
    }
    return make_density_unchecked(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int qubits) {
    const Eigen::Index d = Eigen::Index{1} << qubits;
    return make_density_unchecked(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

// Spectral routines -----------------------------------------------------------

EigenDecomposition eigh(const ComplexMatrix& m) {
    require_hermitian(m, "matrix");
    // Symmetrize so rounding in the input cannot leak into the eigenvectors.
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::NotHermitian, "eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix exp_unitary(const ComplexMatrix& a, double t) {
    const EigenDecomposition ed = eigh(a);
    ComplexVec phases(ed.eigenvalues.size());
    for (Eigen::Index j = 0; j < phases.size(); ++j) {
        phases[j] = std::polar(1.0, ed.eigenvalues[j] * t);
    }
    return ed.eigenvectors * phases.asDiagonal() * ed.eigenvectors.adjoint();
}

double fidelity(const ComplexVec& pure, const DensityMatrix& rho) {
    if (pure.size() != rho.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "fidelity: state and density matrix sizes differ");
    }
    const double f = pure.dot(rho.matrix() * pure).real();
    return std::clamp(f, 0.0, 1.0);
}

double overlap(const ComplexVec& a, const ComplexVec& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::DimensionMismatch, "overlap: sizes differ");
    }
    return std::norm(a.dot(b));
}

ComplexVec tensor(const ComplexVec& a, const ComplexVec& b) {
    ComplexVec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a[i] * b;
    }
    return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexVec basis_state(int qubits, std::uint64_t index) {
    const Eigen::Index d = Eigen::Index{1} << qubits;
    if (index >= static_cast<std::uint64_t>(d)) {
        throw Error(ErrorKind::BadIndex, "basis index out of range");
    }
    ComplexVec v = ComplexVec::Zero(d);
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return v;
}

// Partial trace ----------------------------------------------------------------

namespace {

// Gathers the bits of `index` at positions `qubits` into a compact integer,
// qubits[0] landing on bit 0.
std::uint64_t gather_bits(std::uint64_t index, std::span<const int> qubits) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        out |= ((index >> qubits[i]) & 1ULL) << i;
    }
    return out;
}

std::vector<int> sorted_keep(std::span<const int> keep, int qubits) {
    std::vector<int> k(keep.begin(), keep.end());
    std::sort(k.begin(), k.end());
    if (std::adjacent_find(k.begin(), k.end()) != k.end()) {
        throw Error(ErrorKind::BadIndex, "partial_trace: repeated qubit");
    }
    for (int q : k) {
        if (q < 0 || q >= qubits) throw Error(ErrorKind::BadIndex, "partial_trace: qubit out of range");
    }
    return k;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
    const int q = rho.qubits();
    const std::vector<int> kept = sorted_keep(keep, q);
    std::vector<int> traced;
    for (int i = 0; i < q; ++i) {
        if (!std::binary_search(kept.begin(), kept.end(), i)) traced.push_back(i);
    }
    const Eigen::Index dk = Eigen::Index{1} << kept.size();
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    const ComplexMatrix& m = rho.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const auto ur = static_cast<std::uint64_t>(r);
        const auto env_r = gather_bits(ur, traced);
        const auto kr = static_cast<Eigen::Index>(gather_bits(ur, kept));
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const auto uc = static_cast<std::uint64_t>(c);
            if (gather_bits(uc, traced) != env_r) continue;
            out(kr, static_cast<Eigen::Index>(gather_bits(uc, kept))) += m(r, c);
        }
    }
    return make_density_unchecked(0.5 * (out + out.adjoint()));
}

double entanglement_entropy(const ComplexVec& psi, std::span<const int> keep) {
    const DensityMatrix reduced = partial_trace(DensityMatrix::from_pure(psi), keep);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(reduced.matrix(), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (double p : solver.eigenvalues()) {
        if (p > 1e-15) s -= p * std::log2(p);
    }
    return s;
}

}  // namespace hhlsim
