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

#include "hhlsim/hhl.hpp"

#include <cmath>
#include <numbers>

#include "hhlsim/error.hpp"

namespace hhlsim {

namespace {

constexpr double kPopulated = 1e-10;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

std::vector<int> HhlLayout::input() const {
    std::vector<int> q(static_cast<std::size_t>(input_qubits));
    for (int i = 0; i < input_qubits; ++i) q[static_cast<std::size_t>(i)] = i;
    return q;
}

std::vector<int> HhlLayout::register_() const {
    std::vector<int> q(static_cast<std::size_t>(register_bits));
    for (int j = 0; j < register_bits; ++j) q[static_cast<std::size_t>(j)] = register_qubit(j);
    return q;
}

HhlLayout layout_of(const HhlProblem& p) {
    return {qubit_count(p.a.rows()), p.register_bits};
}

double register_value(double lambda, double t0) { return lambda * t0 / kTwoPi; }

HhlValidation validate(const HhlProblem& p) {
    const int m = qubit_count(p.a.rows());
    if (p.a.rows() != p.a.cols() || m < 1) {
        throw Error(ErrorKind::DimensionMismatch, "matrix must be N x N with N = 2^m, m >= 1");
    }
    if (p.b.size() != p.a.rows()) throw Error(ErrorKind::DimensionMismatch, "vector length differs from matrix size");
    if (p.register_bits < 1 || m + p.register_bits + 1 > 14) {
        throw Error(ErrorKind::BadFlag, "register bits out of range");
    }
    if (!(p.t0 > 0.0) || !std::isfinite(p.t0)) throw Error(ErrorKind::BadFlag, "t0 must be positive");
    if (!is_normalized(p.b)) throw Error(ErrorKind::NotNormalized, "input vector norm is " + std::to_string(p.b.norm()));
    if (p.c_const && !(*p.c_const > 0.0)) throw Error(ErrorKind::InvalidC, "C must be positive");

    HhlValidation v;
    v.spectrum = eigh(p.a);
    const Eigen::VectorXd mags = v.spectrum.eigenvalues.cwiseAbs();
    if (mags.minCoeff() < 1e-10) throw Error(ErrorKind::Singular, "matrix is singular");
    v.kappa = mags.maxCoeff() / mags.minCoeff();

    const double top = static_cast<double>((1ULL << p.register_bits) - 1);
    v.exact = true;
    for (double lambda : v.spectrum.eigenvalues) {
        const double k = register_value(lambda, p.t0);
        const double r = std::round(k);
        if (std::abs(k - r) > 1e-9 || r < 1.0 || r > top) v.exact = false;
    }
    return v;
}

Circuit phase_estimation_circuit(const HhlProblem& p) {
    validate(p);
    const HhlLayout lay = layout_of(p);
    const double big_t = static_cast<double>(1ULL << p.register_bits);
    Circuit c(lay.total());
    for (int j = 0; j < lay.register_bits; ++j) c.add(gates::hadamard(lay.register_qubit(j)));
    // Register qubit j controls e^{iA 2^j t0/T}; together they give Σ_k |k><k| ⊗ e^{iAkt0/T}.
    for (int j = 0; j < lay.register_bits; ++j) {
        const ComplexMatrix u = exp_unitary(p.a, p.t0 * static_cast<double>(1ULL << j) / big_t);
        c.add(gates::controlled(gates::unitary(u, lay.input()), {lay.register_qubit(j)}));
    }
    c.append(inverse_qft(lay.register_bits), lay.register_());
    return c;
}

std::vector<double> register_distribution(const HhlProblem& p) {
    const HhlLayout lay = layout_of(p);
    const Circuit pe = phase_estimation_circuit(p);
    ComplexVec init = ComplexVec::Zero(Eigen::Index{1} << lay.total());
    init.head(p.b.size()) = p.b;
    const ComplexVec out = run(pe, init).statevector();

    std::vector<double> dist(1ULL << lay.register_bits, 0.0);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const auto k = (static_cast<std::uint64_t>(i) >> lay.input_qubits) & ((1ULL << lay.register_bits) - 1);
        dist[k] += std::norm(out[i]);
    }
    return dist;
}

double resolved_c(const HhlProblem& p) {
    if (p.c_const) return *p.c_const;
    const std::vector<double> dist = register_distribution(p);
    for (std::size_t k = 1; k < dist.size(); ++k) {
        if (dist[k] > kPopulated) return static_cast<double>(k) * kTwoPi / p.t0;
    }
    throw Error(ErrorKind::ZeroProbability, "no register value above 0 is populated");
}

Circuit reciprocal_rotation_circuit(const HhlProblem& p) {
    const HhlValidation v = validate(p);
    const HhlLayout lay = layout_of(p);
    const std::vector<double> dist = register_distribution(p);
    const double c_const = p.c_const ? *p.c_const : resolved_c(p);

    if (v.exact && dist[0] >= kPopulated) {
        throw Error(ErrorKind::Singular, "register value 0 populated despite an exact spectrum");
    }

    Circuit c(lay.total());
    const std::vector<int> reg = lay.register_();
    for (std::size_t k = 1; k < dist.size(); ++k) {
        // Value k stands for lambda = 2πk/t0, so the |1> amplitude is C/lambda.
        double ratio = c_const * p.t0 / (kTwoPi * static_cast<double>(k));
        if (ratio > 1.0 + 1e-12) {
            if (dist[k] > kPopulated) {
                throw Error(ErrorKind::InvalidC, "C/lambda = " + std::to_string(ratio) + " > 1 for register value " +
                                                     std::to_string(k));
            }
            ratio = 1.0;
        }
        const double theta = 0.5 * std::asin(std::min(ratio, 1.0));
        std::vector<int> values(reg.size());
        for (std::size_t j = 0; j < reg.size(); ++j) values[j] = static_cast<int>((k >> j) & 1U);
        c.add(gates::controlled(gates::h_theta(lay.ancilla(), theta), reg, values));
    }
    return c;
}

Circuit hhl_circuit(const HhlProblem& p) {
    const Circuit pe = phase_estimation_circuit(p);
    Circuit c(pe.qubits());
    c.append(pe);
    c.append(reciprocal_rotation_circuit(p));
    c.append(pe.inverse());
    return c;
}

HhlResult postselect_output(const RunOutcome& out, const HhlLayout& lay, const ComplexVec& expected) {
    HhlResult r;
    const Eigen::Index n = Eigen::Index{1} << lay.input_qubits;
    if (const auto* psi = std::get_if<ComplexVec>(&out.state)) {
        auto [heralded, prob] = post_select(*psi, lay.ancilla(), 1);
        r.success_probability = prob;
        // Register |0..0> slice: ancilla bit set, register bits clear.
        const ComplexVec x = heralded.segment(Eigen::Index{1} << lay.ancilla(), n);
        const double kept = x.squaredNorm();
        r.register_residual = std::max(0.0, 1.0 - kept);
        if (std::sqrt(kept) < 1e-14) throw Error(ErrorKind::ZeroProbability, "register never returns to |0>");
        r.x_state = x / std::sqrt(kept);
        r.x_density = DensityMatrix::from_pure(r.x_state);
    } else {
        auto [rho, prob] = post_select(out.density(), lay.ancilla(), 1);
        r.success_probability = prob;
        double kept = 1.0;
        for (int q : lay.register_()) {
            auto [next, pq] = post_select(rho, q, 0);
            rho = std::move(next);
            kept *= pq;
        }
        r.register_residual = std::max(0.0, 1.0 - kept);
        r.x_density = partial_trace(rho, lay.input());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(r.x_density.matrix());
        r.x_state = solver.eigenvectors().col(solver.eigenvectors().cols() - 1);
    }
    r.register_reset_ok = r.register_residual < 1e-10;
    r.fidelity_vs_classical = fidelity(expected, r.x_density);
    return r;
}

HhlResult run_hhl(const HhlProblem& p, const std::optional<NoiseSpec>& noise) {
    validate(p);
    const HhlLayout lay = layout_of(p);
    const Circuit circuit = hhl_circuit(p);
    const ComplexVec expected = classical_solve(p.a, p.b);

    ComplexVec init = ComplexVec::Zero(Eigen::Index{1} << lay.total());
    init.head(p.b.size()) = p.b;

    HhlResult r = postselect_output(run(circuit, init, noise), lay, expected);
    r.c_const = resolved_c(p);
    r.gate_count = circuit.census();
    return r;
}

ComplexVec classical_solve(const ComplexMatrix& a, const ComplexVec& b) {
    if (a.rows() != a.cols() || a.rows() != b.size() || a.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, "classical_solve: shapes differ");
    }
    const Eigen::FullPivLU<ComplexMatrix> lu(a);
    if (!lu.isInvertible() || lu.rcond() < 1e-12) throw Error(ErrorKind::Singular, "matrix is singular");
    const ComplexVec x = lu.solve(b);
    const double n = x.norm();
    if (n == 0.0) throw Error(ErrorKind::ZeroProbability, "zero right-hand side");
    return x / n;
}

double success_probability(const HhlProblem& p) {
    const HhlValidation v = validate(p);
    const double c = resolved_c(p);
    const ComplexVec beta = v.spectrum.eigenvectors.adjoint() * p.b;
    double total = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        const double lambda = v.spectrum.eigenvalues[j];
        total += std::norm(beta[j]) * c * c / (lambda * lambda);
    }
    return total;
}

}  // namespace hhlsim
