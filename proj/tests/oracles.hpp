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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

// Reference computations kept independent of the library code paths.
namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat random_hermitian(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
    return 0.5 * (m + m.adjoint());
}

inline Mat random_unitary(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Mat z(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) z(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<Mat> qr(z);
    return qr.householderQ();
}

inline Vec random_state(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = Complex(g(rng), g(rng));
    return v.normalized();
}

// Hermitian matrix with the given spectrum in a random eigenbasis.
inline Mat with_spectrum(std::mt19937_64& rng, const Eigen::VectorXd& lambda) {
    const Mat q = random_unitary(rng, static_cast<int>(lambda.size()));
    const Mat a = q * lambda.cast<Complex>().asDiagonal() * q.adjoint();
    return 0.5 * (a + a.adjoint());
}

// Scaled Taylor series with repeated squaring.
inline Mat taylor_exp_i(const Mat& a, double t) {
    const Mat x = Complex(0.0, t) * a;
    const double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
    const Mat y = x / std::pow(2.0, squarings);
    Mat term = Mat::Identity(a.rows(), a.cols());
    Mat sum = term;
    for (int k = 1; k < 30; ++k) {
        term = (term * y / double(k)).eval();
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
    return sum;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Vec kron(const Vec& a, const Vec& b) {
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

inline Mat dft(int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    Mat f(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index k = 0; k < d; ++k)
            f(j, k) = std::polar(1.0 / std::sqrt(double(d)), 2.0 * std::numbers::pi * double(j * k) / double(d));
    return f;
}

inline double overlap(const Vec& a, const Vec& b) { return std::norm(a.dot(b)); }

inline Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Mat pauli_y() {
    Mat m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

inline Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline Mat hadamard() {
    Mat m(2, 2);
    m << 1, 1, 1, -1;
    return m / std::sqrt(2.0);
}

// Operator on `qubits` qubits from single-qubit factors; factors[q] acts on qubit q.
inline Mat local_product(const std::vector<Mat>& factors) {
    Mat out = Mat::Identity(1, 1);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) out = kron(out, *it);
    return out;
}

inline Mat on_qubit(int qubits, int q, const Mat& u) {
    std::vector<Mat> f(static_cast<std::size_t>(qubits), Mat::Identity(2, 2));
    f[static_cast<std::size_t>(q)] = u;
    return local_product(f);
}

inline Mat controlled(int qubits, int c, int t, const Mat& u) {
    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    std::vector<Mat> a(static_cast<std::size_t>(qubits), Mat::Identity(2, 2)), b = a;
    a[static_cast<std::size_t>(c)] = p0;
    b[static_cast<std::size_t>(c)] = p1;
    b[static_cast<std::size_t>(t)] = u;
    return local_product(a) + local_product(b);
}

inline Mat h_theta(double th) {
    Mat m(2, 2);
    m << std::cos(2 * th), std::sin(2 * th), std::sin(2 * th), -std::cos(2 * th);
    return m;
}

// Unnormalized input-qubit state of the 4-qubit compiled circuit (coherent
// uncompute) after selecting ancilla 1 and both registers 0.
// Qubits: ancilla 3, R1 2, R2 1, input 0.
inline Vec compiled_output(const Vec& b, double big, double small) {
    constexpr int anc = 3, r1 = 2, r2 = 1, in = 0;
    const Mat h = hadamard(), x = pauli_x();
    Mat u = Mat::Identity(16, 16);
    for (const Mat& g : {on_qubit(4, in, h), on_qubit(4, r2, x), controlled(4, in, r1, x), controlled(4, in, r2, x),
                         on_qubit(4, in, h), controlled(4, r1, anc, h_theta(big)), controlled(4, r2, anc, h_theta(small)),
                         on_qubit(4, r1, h), on_qubit(4, r2, h), controlled(4, r1, in, x), controlled(4, r2, in, x),
                         on_qubit(4, r1, h), on_qubit(4, r2, h), on_qubit(4, r2, x)}) {
        u = (g * u).eval();
    }
    Vec init = Vec::Zero(16);
    init[0] = b[0];
    init[1] = b[1];
    const Vec out = u * init;
    Vec x2(2);
    x2 << out[0b1000], out[0b1001];
    return x2;
}

}  // namespace oracle
