#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_support.hpp"
#include "vqebench/ansatz_layered.hpp"

using namespace vqebench;
using std::numbers::pi;

namespace {

oracle::Mat native_givens(double t) {
  ParamCircuit c(2);
  c.add(gates::givens(0, 1, t));
  return oracle::circuit_unitary(c, std::vector<double>{});
}

oracle::Mat compiled_givens(double t) {
  ParamCircuit c(2);
  for (const auto& g : givens_compilation(t)) c.add(g);
  return oracle::circuit_unitary(c, std::vector<double>{});
}

// One-body density matrix gamma_pq = <a+_p a_q>.
Eigen::MatrixXcd one_body_density(const StateVector& s) {
  const std::size_t n = s.n_qubits();
  Eigen::MatrixXcd gamma(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::uint32_t p = 0; p < n; ++p)
    for (std::uint32_t q = 0; q < n; ++q) {
      const auto op = jordan_wigner(FermionOperator::term({create(p), annihilate(q)}), n);
      gamma(p, q) = CompiledOperator(op, n).expectation(s.amplitudes());
    }
  return gamma;
}

}  // namespace

TEST(Hea, StructuralCounts) {
  const auto b = build_hea(4, 1);
  EXPECT_EQ(b.n_params(), 16u);
  EXPECT_EQ(b.circuit.count(GateKind::CNOT), 3u);
  const auto d0 = build_hea(2, 0);
  EXPECT_EQ(d0.n_params(), 4u);
  EXPECT_EQ(d0.circuit.count(GateKind::CNOT), 0u);
  for (std::size_t n = 1; n <= 8; ++n)
    for (std::size_t d = 0; d <= 4; ++d) EXPECT_EQ(build_hea(n, d).n_params(), 2 * n * (d + 1));
  EXPECT_FALSE(b.particle_conserving);
  EXPECT_TRUE(b.init.is_random());
  EXPECT_DOUBLE_EQ(b.init.hi, 2 * pi);
  EXPECT_EQ(b.restarts, 10u);
}

TEST(Hea, GateOrderFollowsLayerPattern) {
  const auto b = build_hea(3, 1);
  const auto& g = b.circuit.gates();
  ASSERT_EQ(g.size(), 6u + 2u + 6u);
  EXPECT_EQ(g[0].kind, GateKind::RY);
  EXPECT_EQ(g[1].kind, GateKind::RZ);
  EXPECT_EQ(g[6].kind, GateKind::CNOT);
  EXPECT_EQ(g[6].targets, (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(g[7].targets, (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(g[8].kind, GateKind::RY);
}

TEST(Hea, ZeroAnglesOnVacuumGiveVacuumEnergy) {
  const auto p = support::load_problem("H2", "0.7414");
  const auto b = build_hea(4, 2);
  const std::vector<double> zeros(b.n_params(), 0.0);
  const double e = expectation(p.h, apply_circuit(b.circuit, zeros, 0));
  EXPECT_NEAR(e, expectation(p.h, StateVector(4, 0)), 1e-14);
}

TEST(Ldca, StructuralCounts) {
  EXPECT_EQ(build_ldca(4, 1).n_params(), 34u);
  const auto one = build_ldca(4, 1).n_params() - 4, two = build_ldca(4, 2).n_params() - 4;
  EXPECT_EQ(two, 2 * one);
  EXPECT_EQ(build_ldca(2, 1).n_params(), 1u * 1u * 5u + 2u);
  EXPECT_EQ(build_ldca(5, 1).n_params(), 3u * 4u * 5u + 5u);
  EXPECT_THROW(build_ldca(1, 1), InputError);
  EXPECT_THROW(build_ldca(4, 0), InputError);
  EXPECT_EQ(build_ldca(4, 1).restarts, 20u);
}

TEST(Layered, ZeroAnglesAreIdentity) {
  for (const auto& b : {build_hea(3, 0), build_hea(4, 0), build_ldca(4, 1), build_ldca(3, 2), build_brc(4, 2)}) {
    const std::vector<double> zeros(b.n_params(), 0.0);
    const auto u = oracle::circuit_unitary(b.circuit, zeros);
    EXPECT_LT(oracle::max_abs(u - oracle::Mat::Identity(u.rows(), u.cols())), 1e-14) << b.family;
  }
}

TEST(Hea, ZeroAnglesLeaveOnlyTheCnotChains) {
  const auto b = build_hea(4, 2);
  ParamCircuit chains(4);
  for (int layer = 0; layer < 2; ++layer)
    for (std::uint32_t q = 0; q + 1 < 4; ++q) chains.add(gates::cnot(q, q + 1));
  const std::vector<double> zeros(b.n_params(), 0.0);
  EXPECT_LT(oracle::max_abs(oracle::circuit_unitary(b.circuit, zeros) - oracle::circuit_unitary(chains, std::vector<double>{})),
            1e-14);
}

TEST(Brc, ParameterCountFormula) {
  for (std::size_t n = 2; n <= 10; ++n)
    for (std::size_t e = 1; e < n; ++e) {
      const auto b = build_brc(n, e);
      EXPECT_EQ(b.n_params(), e * (n - e));
      EXPECT_EQ(b.circuit.count(GateKind::GivensRotation), e * (n - e));
    }
  EXPECT_EQ(build_brc(4, 2).n_params(), 4u);
  EXPECT_EQ(build_brc(8, 4).n_params(), 16u);
  EXPECT_THROW(build_brc(4, 0), InputError);
  EXPECT_THROW(build_brc(4, 4), InputError);
}

TEST(Brc, ClosedShellSharesParametersAcrossSpin) {
  const auto b = build_brc_closed_shell(8, 4);
  EXPECT_EQ(b.n_params(), 4u);
  EXPECT_EQ(b.circuit.count(GateKind::GivensRotation), 8u);
  EXPECT_EQ(b.initial_state, 0b1111u);
  EXPECT_DOUBLE_EQ(b.init.lo, -pi);
  EXPECT_DOUBLE_EQ(b.init.hi, pi);
  EXPECT_EQ(build_brc_closed_shell(12, 4).n_params(), 8u);
}

TEST(Brc, NetworkTouchesOnlyNeighbours) {
  for (const auto& [p, q] : givens_network(6, 3)) EXPECT_EQ(q, p + 1);
}

TEST(Brc, ZeroAnglesKeepFilledState) {
  const auto p = support::load_problem("H4", "0.9");
  const auto b = build_brc_closed_shell(8, 4);
  const std::vector<double> zeros(b.n_params(), 0.0);
  EXPECT_NEAR(expectation(p.h, apply_circuit(b.circuit, zeros, b.initial_state)), p.hf, 1e-12);
}

TEST(Brc, ProducesSlaterDeterminantsAndConservesParticles) {
  std::mt19937_64 rng(77);
  for (const auto& b : {build_brc(6, 3), build_brc_closed_shell(8, 4)}) {
    const std::size_t ne = static_cast<std::size_t>(std::popcount(b.initial_state));
    double worst = 0.0;
    for (int draw = 0; draw < 200; ++draw) {
      const auto s = apply_circuit(b.circuit, support::uniform_values(b.n_params(), rng), b.initial_state);
      worst = std::max(worst, std::abs(support::mean_particle_number(s) - static_cast<double>(ne)));
      if (draw < 10) {
        const auto gamma = one_body_density(s);
        EXPECT_LT(oracle::max_abs(gamma * gamma - gamma), 1e-10) << b.family;
      }
    }
    EXPECT_LT(worst, 1e-10);
  }
}

TEST(GivensCompilation, FiveGatesTwoSqrtIswaps) {
  const auto g = givens_compilation(0.3);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(std::count_if(g.begin(), g.end(), [](const Gate& x) { return x.kind == GateKind::SqrtISwap; }), 2);
  EXPECT_EQ(std::count_if(g.begin(), g.end(), [](const Gate& x) { return x.kind == GateKind::RZ; }), 3);
}

TEST(GivensCompilation, ZeroIsIdentity) {
  EXPECT_LT(oracle::max_abs(compiled_givens(0.0) - oracle::Mat::Identity(4, 4)), 1e-12);
}

TEST(GivensCompilation, QuarterTurnSwapsSingleExcitations) {
  const auto u = compiled_givens(pi / 2);
  EXPECT_NEAR(std::abs(u(1, 2)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(u(2, 1)), 1.0, 1e-12);
  EXPECT_LT(oracle::max_abs(u - native_givens(pi / 2)), 1e-12);
}

TEST(GivensCompilation, MatchesNativeBlockForRandomAngles) {
  std::mt19937_64 rng(3);
  for (double t : support::uniform_values(50, rng, -2 * pi, 2 * pi))
    EXPECT_LT(oracle::max_abs(compiled_givens(t) - native_givens(t)), 1e-12) << t;
}

TEST(Layered, InitPoliciesAreDeterministicBuilds) {
  EXPECT_EQ(build_hea(4, 2).circuit, build_hea(4, 2).circuit);
  EXPECT_EQ(build_ldca(6, 2).circuit, build_ldca(6, 2).circuit);
  EXPECT_EQ(build_brc_closed_shell(8, 4).circuit, build_brc_closed_shell(8, 4).circuit);
}
