#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vqebench/ansatz_adaptive.hpp"

using namespace vqebench;

namespace {

OperatorPool single_excitation_pool(std::uint32_t to, std::uint32_t from) {
  ExcitationGenerator g;
  g.excitation = FermionOperator::term({create(to), annihilate(from)});
  g.param_name = "t";
  OperatorPool pool;
  pool.entries.push_back({"t", g, {}});
  return pool;
}

std::set<std::string> labels(const OperatorPool& pool) {
  std::set<std::string> out;
  for (const auto& e : pool.entries) out.insert(e.label);
  return out;
}

void expect_monotone(const AdaptiveTrace& t) {
  double last = t.initial_energy;
  for (const auto& it : t.iterations) {
    EXPECT_LE(it.energy, last + 1e-9);
    last = it.energy;
  }
}

}  // namespace

TEST(FermionicPool, SizesMatchUccsd) {
  EXPECT_EQ(build_fermionic_pool(4, 2).size(), 2u);
  for (const auto& [mol, bond] : std::vector<std::pair<std::string, std::string>>{{"H2", "0.7414"}, {"H4", "0.9"}, {"LiH", "1.6"}}) {
    const auto d = load_fcidump(support::fixture_path(mol, bond));
    EXPECT_EQ(build_fermionic_pool(d.n_qubits(), d.n_electrons).size(),
              build_uccsd_singlet(d.n_qubits(), d.n_electrons).n_params())
        << mol;
  }
  EXPECT_THROW(build_fermionic_pool(4, 1), InputError);
}

TEST(FermionicPool, EntriesAreAntiHermitian) {
  for (const auto& e : build_fermionic_pool(8, 4).entries) {
    const auto q = generator_qubit_operator(*e.generator, 8);
    EXPECT_EQ(q + q.adjoint(), QubitOperator{});
    for (const auto& [p, c] : q.terms()) EXPECT_EQ(p.y_count() % 2, 1u) << e.label;
  }
}

TEST(QubitPool, AdjacentSingle) {
  EXPECT_EQ(labels(build_qubit_pool(single_excitation_pool(1, 0), 2)), (std::set<std::string>{"X0 Y1", "Y0 X1"}));
}

TEST(QubitPool, ZChainIsStripped) {
  EXPECT_EQ(labels(build_qubit_pool(single_excitation_pool(3, 0), 4)), (std::set<std::string>{"X0 Y3", "Y0 X3"}));
}

TEST(QubitPool, OddYAndNoZ) {
  const auto pool = build_qubit_pool(build_fermionic_pool(12, 4), 12);
  EXPECT_GT(pool.size(), 0u);
  std::set<PauliString> distinct;
  for (const auto& e : pool.entries) {
    EXPECT_EQ(e.pauli.y_count() % 2, 1u);
    EXPECT_EQ(e.pauli.z_count(), 0u);
    distinct.insert(e.pauli);
  }
  EXPECT_EQ(distinct.size(), pool.size());
  EXPECT_THROW(build_qubit_pool(pool, 12), InputError);
}

TEST(Screening, FiniteDifferenceMatchesCommutator) {
  const auto p = support::load_problem("H4", "1.2");
  const CompiledOperator h(p.h, 8);
  const auto pool = build_fermionic_pool(8, 4);
  const auto uccsd = build_uccsd_singlet(8, 4);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 3; ++trial) {
    const auto s = apply_circuit(uccsd.circuit, support::uniform_values(uccsd.n_params(), rng, -0.4, 0.4), uccsd.initial_state);
    const auto fd = fermionic_pool_gradients(h, pool, s, 1e-5);
    const auto exact = fermionic_pool_commutator_gradients(h, pool, s);
    for (std::size_t i = 0; i < fd.size(); ++i) EXPECT_NEAR(fd[i], exact[i], 1e-4) << pool.entries[i].label;
  }
}

TEST(AdaptVqe, HugeEpsilonStopsImmediately) {
  const auto p = support::load_problem("H2", "0.7414");
  AdaptOptions opts;
  opts.epsilon = 1e3;
  const auto r = adapt_vqe(p.h, 4, 2, build_fermionic_pool(4, 2), opts);
  EXPECT_TRUE(r.trace.iterations.empty());
  EXPECT_TRUE(r.trace.converged);
  EXPECT_NEAR(r.energy, p.hf, 1e-12);
  opts.epsilon = 0.0;
  EXPECT_THROW(adapt_vqe(p.h, 4, 2, build_fermionic_pool(4, 2), opts), InputError);
}

TEST(AdaptVqe, H2ReachesFciInTwoIterations) {
  const auto p = support::load_problem("H2", "0.7414");
  const auto r = adapt_vqe(p.h, 4, 2, build_fermionic_pool(4, 2));
  EXPECT_TRUE(r.trace.converged);
  EXPECT_LE(r.trace.iterations.size(), 2u);
  EXPECT_LT(std::abs(r.energy - p.fci), 1e-6);
  EXPECT_LT(r.trace.final_gradient_norm, 1e-2);
  expect_monotone(r.trace);
}

TEST(AdaptVqe, H4ConvergesMonotonicallyAndDeterministically) {
  const auto p = support::load_problem("H4", "0.9");
  const auto pool = build_fermionic_pool(8, 4);
  const auto r = adapt_vqe(p.h, 8, 4, pool);
  EXPECT_TRUE(r.trace.converged);
  EXPECT_LT(r.trace.final_gradient_norm, 1e-2);
  EXPECT_GE(r.energy, p.fci - 1e-9);
  expect_monotone(r.trace);
  EXPECT_EQ(r.ansatz.n_params(), r.trace.iterations.size());
  const auto again = adapt_vqe(p.h, 8, 4, pool);
  ASSERT_EQ(again.trace.iterations.size(), r.trace.iterations.size());
  for (std::size_t i = 0; i < r.trace.iterations.size(); ++i) {
    EXPECT_EQ(again.trace.iterations[i].label, r.trace.iterations[i].label);
    EXPECT_EQ(again.trace.iterations[i].energy, r.trace.iterations[i].energy);
  }
  // The grown circuit conserves particle number for arbitrary parameters.
  std::mt19937_64 rng(1);
  for (int draw = 0; draw < 50; ++draw) {
    const auto s = apply_circuit(r.ansatz.circuit, support::uniform_values(r.ansatz.n_params(), rng), r.ansatz.initial_state);
    EXPECT_NEAR(support::mean_particle_number(s), 4.0, 1e-10);
  }
}

TEST(AdaptVqe, TruncationFlag) {
  const auto p = support::load_problem("H4", "0.9");
  AdaptOptions opts;
  opts.max_iters = 1;
  const auto r = adapt_vqe(p.h, 8, 4, build_fermionic_pool(8, 4), opts);
  EXPECT_EQ(r.trace.iterations.size(), 1u);
  EXPECT_TRUE(r.trace.truncated);
  EXPECT_FALSE(r.trace.converged);
}

TEST(QubitAdapt, CommutingPoolStopsAtHartreeFock) {
  const auto h = QubitOperator::term("Z0 Z1") + QubitOperator::term("Z0", 0.5);
  OperatorPool pool;
  pool.kind = PoolKind::QubitPauli;
  pool.entries.push_back({"X0 Y1", std::nullopt, parse_pauli_string("X0 Y1")});
  const auto r = qubit_adapt_vqe(h, 2, 2, pool);
  EXPECT_TRUE(r.trace.iterations.empty());
  EXPECT_NEAR(r.energy, expectation(h, StateVector(2, 3)), 1e-14);
}

TEST(QubitAdapt, H2ReachesChemicalAccuracy) {
  const auto p = support::load_problem("H2", "0.7414");
  const auto pool = build_qubit_pool(build_fermionic_pool(4, 2), 4);
  const auto r = qubit_adapt_vqe(p.h, 4, 2, pool);
  EXPECT_LT(r.energy - p.fci, kChemicalAccuracy);
  EXPECT_GE(r.energy, p.fci - 1e-9);
  EXPECT_EQ(r.ansatz.circuit.gates().size(), r.trace.iterations.size());
  expect_monotone(r.trace);
}

TEST(QubitAdapt, ParameterShiftMatchesAdjointOnGrownCircuit) {
  const auto p = support::load_problem("H4", "1.2");
  const auto pool = build_qubit_pool(build_fermionic_pool(8, 4), 8);
  AdaptOptions opts;
  opts.max_iters = 6;
  const auto r = qubit_adapt_vqe(p.h, 8, 4, pool, opts);
  ASSERT_GT(r.ansatz.n_params(), 0u);
  const CompiledOperator h(p.h, 8);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = support::uniform_values(r.ansatz.n_params(), rng);
    const auto eg = adjoint_gradient(r.ansatz.circuit, h, x, r.ansatz.initial_state);
    for (std::size_t k = 0; k < x.size(); ++k)
      EXPECT_NEAR(parameter_shift_gradient(r.ansatz.circuit, h, x, r.ansatz.initial_state, r.ansatz.circuit.param_names()[k]),
                  eg.gradient[k], 1e-9);
  }
}

TEST(GridGolden, FindsSinusoidMinimum) {
  auto f = [](double t) { return 0.3 + 0.7 * std::cos(2 * t - 1.1); };
  const auto [x, fx] = grid_golden_minimize(f, -std::numbers::pi, std::numbers::pi);
  EXPECT_NEAR(fx, -0.4, 1e-10);
  EXPECT_NEAR(std::cos(2 * x - 1.1), -1.0, 1e-10);
}

TEST(Qcc, ProductGroundStateNeedsNoEntanglers) {
  OperatorPool pool;
  pool.kind = PoolKind::QccEntangler;
  pool.entries.push_back({"X0 Y1", std::nullopt, parse_pauli_string("X0 Y1")});
  const auto r = qcc_optimize(QubitOperator::term("Z0", -1.0), 2, 0, pool);
  EXPECT_NEAR(r.energy, -1.0, 1e-12);
  EXPECT_TRUE(r.trace.iterations.empty());
  EXPECT_NEAR(r.values[0], 0.0, 1e-6);
  EXPECT_EQ(r.ansatz.n_params(), 4u);
  EXPECT_THROW(qcc_optimize(QubitOperator::term("Z0"), 2, 0, OperatorPool{PoolKind::QccEntangler, {}}), InputError);
}

TEST(Qcc, H2ReachesChemicalAccuracy) {
  const auto p = support::load_problem("H2", "0.7414");
  const auto pool = as_qcc_pool(build_qubit_pool(build_fermionic_pool(4, 2), 4));
  QccOptions opts;
  opts.reference_energy = p.fci;
  const auto r = qcc_optimize(p.h, 4, 2, pool, opts);
  EXPECT_LT(r.energy - p.fci, kChemicalAccuracy);
  EXPECT_GE(r.energy, p.fci - 1e-9);
  EXPECT_EQ(r.ansatz.n_params(), 2 * 4 + r.trace.iterations.size());
  expect_monotone(r.trace);
}

TEST(Qcc, StopsOnSmallImprovementWithoutReference) {
  const auto p = support::load_problem("H2", "0.7414");
  const auto pool = as_qcc_pool(build_qubit_pool(build_fermionic_pool(4, 2), 4));
  const auto r = qcc_optimize(p.h, 4, 2, pool);
  EXPECT_TRUE(r.trace.converged);
  EXPECT_LT(r.trace.final_gradient_norm, 1e-6);
  EXPECT_GE(r.energy, p.fci - 1e-9);
  EXPECT_LT(r.energy - p.fci, kChemicalAccuracy);
}
