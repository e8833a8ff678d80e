#pragma once

// Adaptive ansatz construction: ADAPT-VQE over fermionic excitations,
// qubit-ADAPT over single Pauli strings, and qubit coupled cluster (QCC).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vqebench/ansatz_fixed.hpp"
#include "vqebench/errors.hpp"
#include "vqebench/hamiltonian.hpp"
#include "vqebench/optimizer.hpp"
#include "vqebench/statevector.hpp"
#include "vqebench/vqe.hpp"

namespace vqebench {

enum class PoolKind { FermionicSD, QubitPauli, QccEntangler };

struct PoolEntry {
  std::string label;
  std::optional<ExcitationGenerator> generator;  // fermionic pools
  PauliString pauli;                             // qubit and QCC pools
};

struct OperatorPool {
  PoolKind kind = PoolKind::FermionicSD;
  std::vector<PoolEntry> entries;

  [[nodiscard]] std::size_t size() const { return entries.size(); }
};

struct AdaptiveIteration {
  std::string label;
  double gradient_norm = 0.0;
  double energy = 0.0;
  std::size_t n_params = 0;
  double wall_time = 0.0;
};

struct AdaptiveTrace {
  double initial_energy = 0.0;
  std::vector<AdaptiveIteration> iterations;
  double final_gradient_norm = 0.0;
  bool converged = false;
  bool truncated = false;
};

struct AdaptiveResult {
  AnsatzBuild ansatz;
  std::vector<double> values;
  double energy = 0.0;
  AdaptiveTrace trace;
};

/// One entry per singlet UCCSD generator.
inline OperatorPool build_fermionic_pool(std::size_t n_qubits, std::size_t n_electrons) {
  OperatorPool pool;
  pool.kind = PoolKind::FermionicSD;
  for (auto& g : uccsd_singlet_generators(n_qubits, n_electrons)) {
    if (generator_qubit_operator(g, n_qubits).empty()) continue;
    pool.entries.push_back({g.param_name, g, {}});
  }
  return pool;
}

/// Distinct Z-stripped Pauli strings with an odd number of Y factors taken
/// from the Jordan-Wigner images of a fermionic pool, in first-seen order.
inline OperatorPool build_qubit_pool(const OperatorPool& fermionic, std::size_t n_qubits) {
  if (fermionic.kind != PoolKind::FermionicSD) throw InputError("qubit pool is derived from a fermionic pool");
  OperatorPool pool;
  pool.kind = PoolKind::QubitPauli;
  std::set<PauliString> seen;
  for (const auto& e : fermionic.entries) {
    const QubitOperator image = generator_qubit_operator(*e.generator, n_qubits);
    for (const auto& [p, c] : image.terms()) {
      if (p.y_count() % 2 == 0) continue;
      PauliString stripped{p.x, p.z & p.x};
      if (!seen.insert(stripped).second) continue;
      pool.entries.push_back({serialize_pauli_string(stripped), std::nullopt, stripped});
    }
  }
  return pool;
}

inline OperatorPool as_qcc_pool(OperatorPool pool) {
  if (pool.kind == PoolKind::FermionicSD) throw InputError("QCC entanglers are Pauli strings");
  pool.kind = PoolKind::QccEntangler;
  return pool;
}

struct AdaptOptions {
  double epsilon = 1e-2;
  std::size_t max_iters = 100;
  double fd_step = 1e-5;
  OptimizerConfig optimizer;
  std::size_t threads = 1;
};

/// Finite-difference screening gradients dE/dtheta of exp(theta tau_i) applied to `s`.
inline std::vector<double> fermionic_pool_gradients(const CompiledOperator& h, const OperatorPool& pool,
                                                    const StateVector& s, double step, std::size_t threads = 1) {
  std::vector<double> g(pool.size());
  detail::parallel_for(pool.size(), threads, [&](std::size_t i) {
    const ParamCircuit c = trotterize({*pool.entries[i].generator}, s.n_qubits());
    auto shifted = [&](double t) {
      StateVector v = s;
      const std::vector<double> x(c.n_params(), t);
      apply_circuit_inplace(c, x, v);
      return expectation(h, v);
    };
    g[i] = (shifted(step) - shifted(-step)) / (2.0 * step);
  });
  return g;
}

/// Analytic screening gradients <s|[H, A_i]|s> for the same pool.
inline std::vector<double> fermionic_pool_commutator_gradients(const CompiledOperator& h, const OperatorPool& pool,
                                                               const StateVector& s) {
  std::vector<double> g;
  for (const auto& e : pool.entries)
    g.push_back(commutator_gradient(h, CompiledOperator(generator_qubit_operator(*e.generator, s.n_qubits()), s.n_qubits()), s));
  return g;
}

/// d/dtheta <exp(-i theta P) H exp(i theta P)> at theta = 0 for each pool string.
inline std::vector<double> qubit_pool_gradients(const CompiledOperator& h, const OperatorPool& pool, const StateVector& s,
                                                std::size_t threads = 1) {
  std::vector<double> g(pool.size());
  detail::parallel_for(pool.size(), threads, [&](std::size_t i) {
    QubitOperator tau;
    tau.add_term(pool.entries[i].pauli, cplx(0, 1));
    g[i] = commutator_gradient(h, CompiledOperator(tau, s.n_qubits()), s);
  });
  return g;
}

namespace detail {

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Index of the largest |g|; the lowest index wins ties.
inline std::size_t argmax_abs(const std::vector<double>& g) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < g.size(); ++i)
    if (std::abs(g[i]) > std::abs(g[best])) best = i;
  return best;
}

struct AdaptLoop {
  std::function<std::vector<double>(const StateVector&)> screen;
  std::function<void(ParamCircuit&, std::size_t entry, const std::string& name)> append;
  GradientMethod gradient = GradientMethod::Adjoint;
};

inline AdaptiveResult run_adaptive(const QubitOperator& h, std::size_t n_qubits, std::size_t n_electrons,
                                   const OperatorPool& pool, const AdaptOptions& opts, std::string family,
                                   bool conserving, const AdaptLoop& loop) {
  if (opts.epsilon <= 0.0) throw InputError("epsilon must be positive");
  if (pool.entries.empty()) throw InputError("operator pool is empty");
  const auto start = std::chrono::steady_clock::now();
  const CompiledOperator compiled(h, n_qubits);
  AdaptiveResult out;
  out.ansatz.family = std::move(family);
  out.ansatz.circuit = ParamCircuit(n_qubits);
  out.ansatz.particle_conserving = conserving;
  out.ansatz.initial_state = hf_state_index(n_qubits, n_electrons);
  out.energy = energy(out.ansatz.circuit, compiled, out.values, out.ansatz.initial_state);
  out.trace.initial_energy = out.energy;

  for (std::size_t iter = 0;; ++iter) {
    const StateVector s = apply_circuit(out.ansatz.circuit, out.values, out.ansatz.initial_state);
    const auto g = loop.screen(s);
    const double gnorm = norm2(g);
    out.trace.final_gradient_norm = gnorm;
    if (gnorm < opts.epsilon) {
      out.trace.converged = true;
      break;
    }
    if (iter == opts.max_iters) {
      out.trace.truncated = true;
      break;
    }
    const std::size_t pick = argmax_abs(g);
    const std::string name = "a" + std::to_string(iter) + "_" + pool.entries[pick].label;
    loop.append(out.ansatz.circuit, pick, name);
    out.values.push_back(0.0);

    VqeOptions vopts;
    vopts.optimizer = opts.optimizer;
    vopts.gradient = loop.gradient;
    vopts.initial_values = out.values;
    const auto r = run_vqe(out.ansatz, compiled, vopts);
    out.values = r.values;
    out.energy = r.energy;
    out.trace.iterations.push_back({pool.entries[pick].label, gnorm, r.energy, out.ansatz.n_params(),
                                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
  }
  return out;
}

}  // namespace detail

/// ADAPT-VQE: grow the ansatz by the pool operator with the largest
/// finite-difference gradient, re-optimizing all parameters after each step.
inline AdaptiveResult adapt_vqe(const QubitOperator& h, std::size_t n_qubits, std::size_t n_electrons,
                                const OperatorPool& pool, const AdaptOptions& opts = {}) {
  if (pool.kind != PoolKind::FermionicSD) throw InputError("ADAPT-VQE expects a fermionic pool");
  const CompiledOperator compiled(h, n_qubits);
  detail::AdaptLoop loop;
  loop.screen = [&](const StateVector& s) { return fermionic_pool_gradients(compiled, pool, s, opts.fd_step, opts.threads); };
  loop.append = [&](ParamCircuit& c, std::size_t entry, const std::string& name) {
    ExcitationGenerator g = *pool.entries[entry].generator;
    g.param_name = name;
    c.append(trotterize({g}, n_qubits));
  };
  auto out = detail::run_adaptive(h, n_qubits, n_electrons, pool, opts, "ADAPT", true, loop);
  for (const auto& it : out.trace.iterations)
    for (const auto& e : pool.entries)
      if (e.label == it.label) out.ansatz.generators.push_back(*e.generator);
  return out;
}

/// qubit-ADAPT: one PauliEvolution gate per iteration, screened by the
/// commutator gradient and optimized with parameter-shift gradients.
inline AdaptiveResult qubit_adapt_vqe(const QubitOperator& h, std::size_t n_qubits, std::size_t n_electrons,
                                      const OperatorPool& pool, const AdaptOptions& opts = {}) {
  if (pool.kind == PoolKind::FermionicSD) throw InputError("qubit-ADAPT expects a Pauli-string pool");
  const CompiledOperator compiled(h, n_qubits);
  detail::AdaptLoop loop;
  loop.screen = [&](const StateVector& s) { return qubit_pool_gradients(compiled, pool, s, opts.threads); };
  loop.append = [&](ParamCircuit& c, std::size_t entry, const std::string& name) {
    c.add(gates::pauli_evolution(pool.entries[entry].pauli, ParamBinding{name}));
  };
  loop.gradient = GradientMethod::ParameterShift;
  return detail::run_adaptive(h, n_qubits, n_electrons, pool, opts, "qubit-ADAPT", false, loop);
}

struct QccOptions {
  std::size_t max_entanglers = 20;
  double improvement_tolerance = 1e-6;
  std::optional<double> reference_energy;
  double chem_tol = kChemicalAccuracy;
  OptimizerConfig optimizer;
  std::size_t threads = 1;
};

/// Minimum of f on [lo, hi]: a 17-point grid followed by golden-section
/// refinement around the best grid point.
inline std::pair<double, double> grid_golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                                                      double tol = 1e-6) {
  constexpr int kGrid = 17;
  const double h = (hi - lo) / (kGrid - 1);
  int best = 0;
  double fbest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kGrid; ++k) {
    const double v = f(lo + k * h);
    if (v < fbest) {
      fbest = v;
      best = k;
    }
  }
  double a = lo + std::max(0, best - 1) * h, b = lo + std::min(kGrid - 1, best + 1) * h;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double fx = f(x);
  if (fx <= fbest) return {x, fx};
  return {lo + best * h, fbest};
}

/// Qubit mean-field layer: RY(theta_q) then RZ(phi_q) on every qubit.
inline ParamCircuit qcc_mean_field_circuit(std::size_t n_qubits) {
  ParamCircuit c(n_qubits);
  for (std::uint32_t q = 0; q < n_qubits; ++q) {
    c.add(gates::ry(q, ParamBinding{"mf_theta_" + std::to_string(q)}));
    c.add(gates::rz(q, ParamBinding{"mf_phi_" + std::to_string(q)}));
  }
  return c;
}

/// QCC: optimize the mean field, then repeatedly add the entangler with the
/// largest one-dimensional energy drop and re-optimize everything.
inline AdaptiveResult qcc_optimize(const QubitOperator& h, std::size_t n_qubits, std::size_t n_electrons,
                                   const OperatorPool& pool, const QccOptions& opts = {}) {
  if (pool.entries.empty()) throw InputError("QCC entangler pool is empty");
  if (pool.kind == PoolKind::FermionicSD) throw InputError("QCC entanglers are Pauli strings");
  const auto start = std::chrono::steady_clock::now();
  const CompiledOperator compiled(h, n_qubits);
  AdaptiveResult out;
  out.ansatz.family = "QCC";
  out.ansatz.circuit = qcc_mean_field_circuit(n_qubits);
  out.ansatz.initial_state = 0;
  out.values.assign(2 * n_qubits, 0.0);
  for (std::size_t q = 0; q < std::min(n_electrons, n_qubits); ++q) out.values[2 * q] = std::numbers::pi;
  out.trace.initial_energy = energy(out.ansatz.circuit, compiled, out.values, 0);

  auto reoptimize = [&] {
    VqeOptions v;
    v.optimizer = opts.optimizer;
    v.initial_values = out.values;
    const auto r = run_vqe(out.ansatz, compiled, v);
    out.values = r.values;
    out.energy = r.energy;
  };
  reoptimize();

  std::vector<std::pair<double, double>> ranked(pool.size());
  while (true) {
    if (opts.reference_energy && out.energy - *opts.reference_energy < opts.chem_tol) {
      out.trace.converged = true;
      break;
    }
    if (out.trace.iterations.size() >= opts.max_entanglers) {
      out.trace.truncated = true;
      break;
    }
    const StateVector s = apply_circuit(out.ansatz.circuit, out.values, 0);
    const double e0 = expectation(compiled, s);
    detail::parallel_for(pool.size(), opts.threads, [&](std::size_t i) {
      auto f = [&](double tau) { return expectation(compiled, apply_pauli_evolution(s, pool.entries[i].pauli, tau)); };
      const auto [tau, e] = grid_golden_minimize(f, -std::numbers::pi, std::numbers::pi);
      ranked[i] = {e - e0, tau};
    });
    std::size_t pick = 0;
    for (std::size_t i = 1; i < ranked.size(); ++i)
      if (ranked[i].first < ranked[pick].first) pick = i;
    const double gain = -ranked[pick].first;
    out.trace.final_gradient_norm = gain;
    if (gain < opts.improvement_tolerance) {
      out.trace.converged = true;
      break;
    }
    const std::string name = "e" + std::to_string(out.trace.iterations.size()) + "_" + pool.entries[pick].label;
    out.ansatz.circuit.add(gates::pauli_evolution(pool.entries[pick].pauli, ParamBinding{name}));
    out.values.push_back(ranked[pick].second);
    reoptimize();
    out.trace.iterations.push_back({pool.entries[pick].label, gain, out.energy, out.ansatz.n_params(),
                                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
  }
  return out;
}

}  // namespace vqebench
