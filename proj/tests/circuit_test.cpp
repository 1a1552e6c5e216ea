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

#include "hhlsim/circuit.hpp"

#include <gtest/gtest.h>

#include "hhlsim/error.hpp"
#include "oracles.hpp"

namespace hhlsim {
namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexVec plus_state() {
    ComplexVec v(2);
    v << 1, 1;
    return v / std::sqrt(2.0);
}

ComplexMatrix circuit_matrix(const Circuit& c) {
    const Eigen::Index d = Eigen::Index{1} << c.qubits();
    ComplexMatrix u = ComplexMatrix::Identity(d, d);
    for (const Operation& op : c.ops()) u = embed(std::get<Gate>(op), c.qubits()) * u;
    return u;
}

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::Parse;
}

Gate random_gate(std::mt19937_64& rng, int qubits) {
    std::uniform_int_distribution<int> pick(0, 7), qd(0, qubits - 1);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    const int t = qd(rng);
    int other = qd(rng);
    while (qubits > 1 && other == t) other = qd(rng);
    Gate g;
    switch (pick(rng)) {
        case 0: g = gates::x(t); break;
        case 1: g = gates::y(t); break;
        case 2: g = gates::z(t); break;
        case 3: g = gates::hadamard(t); break;
        case 4: g = gates::phase(t, ang(rng)); break;
        case 5: g = gates::h_theta(t, ang(rng)); break;
        case 6: g = qubits > 1 ? gates::swap(t, other) : gates::x(t); break;
        default: g = gates::unitary(oracle::random_unitary(rng, 2), {t}); break;
    }
    if (qubits > 1 && rng() % 2 && g.kind != GateKind::Swap) {
        g = gates::controlled(g, {other}, {static_cast<int>(rng() % 2)});
    }
    return g;
}

TEST(Gates, HThetaMatrix) {
    const double th = 0.3;
    ComplexMatrix want(2, 2);
    want << std::cos(2 * th), std::sin(2 * th), std::sin(2 * th), -std::cos(2 * th);
    EXPECT_EQ(h_theta_matrix(th), want);
    EXPECT_LT(max_abs(h_theta_matrix(kPi / 8) - oracle::hadamard()), 1e-15);
}

TEST(ApplyGate, Examples) {
    EXPECT_LT((apply_gate(basis_state(1, 0), gates::hadamard(0)) - plus_state()).norm(), 1e-15);
    EXPECT_LT((apply_gate(basis_state(1, 0), gates::h_theta(0, kPi / 8)) - plus_state()).norm(), 1e-15);
    // control qubit 1 in |1>, target qubit 0 in |0>
    EXPECT_LT((apply_gate(basis_state(2, 2), gates::cnot(1, 0)) - basis_state(2, 3)).norm(), 1e-15);
}

TEST(ApplyGate, Errors) {
    EXPECT_EQ(kind_of([] { apply_gate(basis_state(2, 0), gates::x(2)); }), ErrorKind::BadIndex);
    EXPECT_EQ(kind_of([] { apply_gate(basis_state(2, 0), gates::cnot(1, 1)); }), ErrorKind::BadIndex);
    ComplexMatrix m(2, 2);
    m << 1, 1, 0, 1;
    EXPECT_EQ(kind_of([&] { gates::unitary(m, {0}); }), ErrorKind::NonUnitary);
}

TEST(Embed, SingleQubitGatesMatchKronecker) {
    std::mt19937_64 rng(10);
    for (int q = 0; q < 3; ++q) {
        const ComplexMatrix u = oracle::random_unitary(rng, 2);
        std::vector<oracle::Mat> f(3, oracle::Mat::Identity(2, 2));
        f[static_cast<std::size_t>(q)] = u;
        EXPECT_LT(max_abs(embed(gates::unitary(u, {q}), 3) - oracle::local_product(f)), 1e-14);
    }
}

TEST(Embed, ControlledMatchesProjectorSum) {
    std::mt19937_64 rng(11);
    const ComplexMatrix u = oracle::random_unitary(rng, 2);
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    // control on qubit 2, target qubit 0, qubit 1 idle
    const ComplexMatrix want = oracle::local_product({i2, i2, p0}) + oracle::local_product({u, i2, p1});
    EXPECT_LT(max_abs(embed(gates::controlled(gates::unitary(u, {0}), {2}), 3) - want), 1e-14);
    // control value 0
    const ComplexMatrix want0 = oracle::local_product({u, i2, p0}) + oracle::local_product({i2, i2, p1});
    EXPECT_LT(max_abs(embed(gates::controlled(gates::unitary(u, {0}), {2}, {0}), 3) - want0), 1e-14);
}

TEST(Embed, RandomGatesAreUnitary) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 1000; ++trial) {
        const int q = 1 + trial % 4;
        const Gate g = random_gate(rng, q);
        ASSERT_TRUE(is_unitary(embed(g, q)));
        ASSERT_LT(max_abs(embed(g.adjoint(), q) * embed(g, q) - ComplexMatrix::Identity(1 << q, 1 << q)), 1e-10);
    }
}

TEST(Run, Examples) {
    std::mt19937_64 rng(13);
    const ComplexVec psi = oracle::random_state(rng, 8);
    EXPECT_EQ(run(Circuit(3), psi).statevector(), psi);
    Circuit c(1);
    c.add(gates::x(0));
    const RunOutcome out = run(c, basis_state(1, 0));
    EXPECT_LT((out.statevector() - basis_state(1, 1)).norm(), 1e-15);
    EXPECT_DOUBLE_EQ(out.probability, 1.0);
}

TEST(Run, DimensionMismatch) {
    EXPECT_EQ(kind_of([] { run(Circuit(2), basis_state(3, 0)); }), ErrorKind::DimensionMismatch);
}

TEST(Run, NormPreservationAndComposition) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        const int q = 1 + trial % 4;
        Circuit a(q), b(q), ab(q);
        for (int i = 0; i < 6; ++i) a.add(random_gate(rng, q));
        for (int i = 0; i < 6; ++i) b.add(random_gate(rng, q));
        ab.append(a).append(b);
        const ComplexVec psi = oracle::random_state(rng, 1 << q);
        const ComplexVec whole = run(ab, psi).statevector();
        ASSERT_NEAR(whole.norm(), 1.0, 1e-10);
        ASSERT_EQ(whole, run(b, run(a, psi).statevector()).statevector());
    }
}

TEST(Run, BackendsAgreeAtZeroNoise) {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        Circuit c(3);
        for (int i = 0; i < 10; ++i) c.add(random_gate(rng, 3));
        const ComplexVec psi = oracle::random_state(rng, 8);
        const ComplexVec pure = run(c, psi).statevector();
        const DensityMatrix mixed = run(c, psi, NoiseSpec{0.0, NoiseTarget::All}).density();
        ASSERT_LT(max_abs(mixed.matrix() - pure * pure.adjoint()), 1e-10);
    }
}

TEST(Run, InverseUndoesCircuit) {
    std::mt19937_64 rng(16);
    Circuit c(3);
    for (int i = 0; i < 12; ++i) c.add(random_gate(rng, 3));
    EXPECT_LT(max_abs(circuit_matrix(c.inverse()) * circuit_matrix(c) - ComplexMatrix::Identity(8, 8)), 1e-10);
}

TEST(Run, MeasurementFollowsBornRuleAndSeed) {
    Circuit c(1);
    c.add(gates::h_theta(0, 0.4)).measure(0, 0);
    const RunOutcome a = run(c, basis_state(1, 0), std::nullopt, 99);
    const RunOutcome b = run(c, basis_state(1, 0), std::nullopt, 99);
    EXPECT_EQ(a.classical_bits, b.classical_bits);
    const double p1 = std::pow(std::sin(0.8), 2);
    EXPECT_NEAR(a.probability, a.classical_bits[0] ? p1 : 1 - p1, 1e-12);
    EXPECT_LT((a.statevector() - basis_state(1, static_cast<std::uint64_t>(a.classical_bits[0]))).norm(), 1e-12);
}

TEST(Circuit, SlotsMustBeWrittenBeforeRead) {
    Circuit c(2);
    EXPECT_EQ(kind_of([&] { c.conditional(gates::x(1), 0); }), ErrorKind::BadIndex);
    c.measure(0, 0);
    EXPECT_NO_THROW(c.conditional(gates::x(1), 0));
    EXPECT_EQ(c.classical_slots(), 1);
    EXPECT_FALSE(c.is_unitary());
}

// Measure-then-conditional versus the controlled-gate circuit, branch by branch.
TEST(DeferredMeasurement, RandomThreeQubitCircuits) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const int q = static_cast<int>(rng() % 3);
        Circuit prefix(3);
        for (int i = 0; i < 8; ++i) prefix.add(random_gate(rng, 3));
        std::vector<Gate> tail;
        for (int i = 0; i < 3; ++i) {
            Gate g = random_gate(rng, 2);  // acts on the two qubits other than q
            std::vector<int> others;
            for (int k = 0; k < 3; ++k)
                if (k != q) others.push_back(k);
            for (int& t : g.targets) t = others[static_cast<std::size_t>(t)];
            for (int& t : g.controls) t = others[static_cast<std::size_t>(t)];
            tail.push_back(std::move(g));
        }
        const int outcome = static_cast<int>(rng() % 2);

        Circuit semi(3);
        semi.append(prefix).measure(q, 0);
        Circuit deferred(3);
        deferred.append(prefix);
        for (const Gate& g : tail) {
            semi.conditional(g, 0, outcome);
            Gate cg = g;
            cg.controls.insert(cg.controls.begin(), q);
            std::vector<int> vals = g.control_values.empty() ? std::vector<int>(g.controls.size(), 1) : g.control_values;
            vals.insert(vals.begin(), outcome);
            cg.control_values = vals;
            deferred.add(cg);
        }
        const ComplexVec psi = oracle::random_state(rng, 8);
        const ComplexVec full = run(deferred, psi).statevector();
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const RunOutcome s = run(semi, psi, std::nullopt, seed);
            const int bit = s.classical_bits[0];
            const auto [branch, p] = post_select(full, q, bit);
            ASSERT_NEAR(p, s.probability, 1e-10);
            ASSERT_NEAR(oracle::overlap(branch, s.statevector()), 1.0, 1e-10);
        }
    }
}

TEST(PostSelect, Examples) {
    const auto [state, p] = post_select(plus_state(), 0, 1);
    EXPECT_NEAR(p, 0.5, 1e-15);
    EXPECT_LT((state - basis_state(1, 1)).norm(), 1e-15);
    EXPECT_EQ(kind_of([] { post_select(basis_state(1, 0), 0, 1); }), ErrorKind::ZeroProbability);
    const auto [rho, pr] = post_select(DensityMatrix::from_pure(plus_state()), 0, 0);
    EXPECT_NEAR(pr, 0.5, 1e-15);
    EXPECT_NEAR(rho.matrix()(0, 0).real(), 1.0, 1e-15);
}

TEST(Shots, DeterministicOutcomes) {
    Circuit c(1);
    c.measure(0, 0);
    const auto h = sample_shots(c, basis_state(1, 1), 1000, 3);
    ASSERT_EQ(h.size(), 1u);
    EXPECT_EQ(h.at("1"), 1000u);
}

TEST(Shots, BinomialWithinThreeSigma) {
    Circuit c(1);
    c.measure(0, 0);
    const std::uint64_t n = 100000;
    const auto h = sample_shots(c, plus_state(), n, 5);
    const double freq = double(h.at("1")) / double(n);
    EXPECT_LT(std::abs(freq - 0.5), 3 * std::sqrt(0.25 / double(n)));
}

TEST(Shots, SameSeedSameHistogram) {
    std::mt19937_64 rng(18);
    Circuit c(3);
    for (int i = 0; i < 10; ++i) c.add(random_gate(rng, 3));
    c.measure(0, 0).measure(1, 1).measure(2, 2);
    const ComplexVec psi = oracle::random_state(rng, 8);
    EXPECT_EQ(sample_shots(c, psi, 20000, 42), sample_shots(c, psi, 20000, 42));
    EXPECT_NE(sample_shots(c, psi, 20000, 42), sample_shots(c, psi, 20000, 43));
}

TEST(Shots, SlotZeroIsLeftmostAndUnsetIsDash) {
    Circuit c(2);
    c.add(gates::x(1)).measure(1, 0).measure(0, 2);
    const auto h = sample_shots(c, basis_state(2, 0), 10, 0);
    ASSERT_EQ(h.size(), 1u);
    EXPECT_EQ(h.begin()->first, "1-0");
}

TEST(Qft, SingleQubitIsHadamard) {
    EXPECT_LT(max_abs(circuit_matrix(qft(1)) - oracle::hadamard()), 1e-15);
}

TEST(Qft, TwoQubitsOnZeroIsUniform) {
    const ComplexVec out = run(qft(2), basis_state(2, 0)).statevector();
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(out[i] - 0.5), 0.0, 1e-15);
}

TEST(Qft, MatchesDftMatrix) {
    for (int n = 1; n <= 5; ++n) {
        EXPECT_LT(max_abs(circuit_matrix(qft(n)) - oracle::dft(n)), 1e-12) << n;
        const ComplexMatrix round = circuit_matrix(inverse_qft(n)) * circuit_matrix(qft(n));
        EXPECT_LT(max_abs(round - ComplexMatrix::Identity(1 << n, 1 << n)), 1e-10) << n;
    }
}

TEST(Depolarize, Examples) {
    const DensityMatrix plus = DensityMatrix::from_pure(plus_state());
    const std::vector<int> q0{0};
    EXPECT_EQ(depolarize(plus, q0, 0.0).matrix(), plus.matrix());
    EXPECT_LT(max_abs(depolarize(DensityMatrix::from_pure(basis_state(1, 0)), q0, 1.0).matrix() -
                      ComplexMatrix::Identity(2, 2) / 2.0),
              1e-15);
    EXPECT_NEAR(fidelity(plus_state(), depolarize(plus, q0, 0.1)), 0.95, 1e-14);
}

TEST(Depolarize, TwoQubitChannelMatchesDefinition) {
    std::mt19937_64 rng(19);
    const ComplexVec psi = oracle::random_state(rng, 8);
    const DensityMatrix rho = DensityMatrix::from_pure(psi);
    const std::vector<int> hit{0, 2}, rest{1};
    const double p = 0.3;
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    // I/4 on qubits {0,2} tensored with the reduced state of qubit 1
    const ComplexMatrix r1 = partial_trace(rho, rest).matrix();
    const ComplexMatrix want = (1 - p) * rho.matrix() + p * oracle::local_product({i2 / 2.0, r1, i2 / 2.0});
    const DensityMatrix got = depolarize(rho, hit, p);
    EXPECT_LT(max_abs(got.matrix() - want), 1e-14);
    EXPECT_NEAR(got.trace(), 1.0, 1e-10);
}

TEST(Noise, EntanglingOnlySkipsSingleQubitGates) {
    Circuit c(2);
    c.add(gates::hadamard(0)).add(gates::hadamard(1));
    const ComplexVec pure = run(c, basis_state(2, 0)).statevector();
    const DensityMatrix mixed = run(c, basis_state(2, 0), NoiseSpec{0.5, NoiseTarget::EntanglingOnly}).density();
    EXPECT_LT(max_abs(mixed.matrix() - pure * pure.adjoint()), 1e-14);
    const DensityMatrix all = run(c, basis_state(2, 0), NoiseSpec{0.5, NoiseTarget::All}).density();
    EXPECT_LT(all.purity(), 0.99);
}

TEST(Census, CountsByClass) {
    Circuit c(3);
    c.add(gates::hadamard(0))
        .add(gates::cnot(0, 1))
        .add(gates::controlled(gates::h_theta(2, 0.1), {0}))
        .measure(1, 0)
        .conditional(gates::x(2), 0);
    const auto census = c.census();
    EXPECT_EQ(census.at("h"), 1);
    EXPECT_EQ(census.at("cx"), 1);
    EXPECT_EQ(census.at("ch_theta"), 1);
    EXPECT_EQ(census.at("entangling"), 2);
    EXPECT_EQ(census.at("measure"), 1);
    EXPECT_EQ(census.at("conditional"), 1);
}

}  // namespace
}  // namespace hhlsim
