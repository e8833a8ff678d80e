#pragma once

// VQE driver: seeded initialization, restarts, and the HEA layer-growth
// protocol.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "vqebench/ansatz_fixed.hpp"
#include "vqebench/ansatz_layered.hpp"
#include "vqebench/optimizer.hpp"
#include "vqebench/statevector.hpp"

namespace vqebench {

inline constexpr double kChemicalAccuracy = 0.0016;

/// Deterministic child seed for (label, index) under a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  return rng();
}

inline std::vector<double> initial_parameters(const InitPolicy& policy, std::size_t n, std::uint64_t seed) {
  std::vector<double> x(n, 0.0);
  if (!policy.is_random()) return x;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(policy.lo, policy.hi);
  for (auto& v : x) v = u(rng);
  return x;
}

enum class GradientMethod { Adjoint, ParameterShift };

struct VqeOptions {
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  std::optional<std::size_t> restarts;  // defaults to the ansatz's own count
  std::size_t threads = 1;
  GradientMethod gradient = GradientMethod::Adjoint;
  std::optional<std::vector<double>> initial_values;  // overrides the init policy for the first run
};

struct VqeResult {
  double energy = 0.0;
  std::map<std::string, double> parameters;
  std::vector<double> values;
  std::size_t n_evaluations = 0;
  std::size_t n_iterations = 0;
  double wall_time = 0.0;
  bool converged = false;
  std::size_t restarts_used = 0;
};

/// Energy-and-gradient objective for `c` on `h` from basis state `initial`.
inline Objective circuit_objective(const ParamCircuit& c, const CompiledOperator& h, std::uint64_t initial,
                                   GradientMethod method = GradientMethod::Adjoint) {
  return [&c, &h, initial, method](std::span<const double> x, std::span<double> grad) {
    if (method == GradientMethod::Adjoint) {
      auto eg = adjoint_gradient(c, h, x, initial);
      std::copy(eg.gradient.begin(), eg.gradient.end(), grad.begin());
      return eg.energy;
    }
    for (std::size_t k = 0; k < c.n_params(); ++k)
      grad[k] = parameter_shift_gradient(c, h, x, initial, c.param_names()[k]);
    return energy(c, h, x, initial);
  };
}

namespace detail {

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Optimizes the ansatz from each restart's initial parameters and returns
/// the lowest-energy run. Ties go to the lowest restart index.
inline VqeResult run_vqe(const AnsatzBuild& ansatz, const CompiledOperator& h, const VqeOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const ParamCircuit& c = ansatz.circuit;
  VqeResult best;
  if (c.n_params() == 0) {
    best.energy = energy(c, h, std::vector<double>{}, ansatz.initial_state);
    best.n_evaluations = 1;
    best.converged = true;
    best.restarts_used = 1;
    best.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return best;
  }
  const std::size_t restarts = ansatz.init.is_random() ? opts.restarts.value_or(ansatz.restarts) : 1;
  if (restarts == 0) throw InputError("restart count must be positive");
  const Objective f = circuit_objective(c, h, ansatz.initial_state, opts.gradient);
  std::vector<OptimizeResult> runs(restarts);
  detail::parallel_for(restarts, opts.threads, [&](std::size_t r) {
    std::vector<double> x0 = (r == 0 && opts.initial_values)
                                 ? *opts.initial_values
                                 : initial_parameters(ansatz.init, c.n_params(), derive_seed(opts.seed, "restart", r));
    if (x0.size() != c.n_params()) throw InputError("initial parameter vector has the wrong length");
    runs[r] = minimize_bfgs(f, std::move(x0), opts.optimizer);
  });
  std::size_t pick = 0;
  for (std::size_t r = 0; r < restarts; ++r) {
    best.n_evaluations += runs[r].n_evaluations;
    best.n_iterations += runs[r].n_iterations;
    if (runs[r].f < runs[pick].f) pick = r;
  }
  best.energy = runs[pick].f;
  best.values = runs[pick].x;
  best.parameters = c.values_to_map(best.values);
  best.converged = runs[pick].converged;
  best.restarts_used = restarts;
  best.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return best;
}

inline VqeResult run_vqe(const AnsatzBuild& ansatz, const QubitOperator& h, const VqeOptions& opts = {}) {
  return run_vqe(ansatz, CompiledOperator(h, ansatz.circuit.n_qubits()), opts);
}

struct LayerGrowthOptions {
  std::size_t budget = 50000;
  std::size_t restarts = kHeaRestarts;
  double chem_tol = kChemicalAccuracy;
  std::size_t max_depth = 64;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
};

struct LayerGrowthResult {
  VqeResult best;
  std::size_t depth = 0;           // depth of the best result
  bool reached_accuracy = false;
  std::vector<double> depth_energies;  // best energy per depth tried, from depth 1
};

/// Grows the HEA one layer at a time from depth 1 until the best energy is
/// within chem_tol of the reference or the evaluation budget is spent.
inline LayerGrowthResult run_hea_layer_growth(const QubitOperator& h, std::size_t n_qubits, std::uint64_t initial_state,
                                              double reference_energy, const LayerGrowthOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const CompiledOperator compiled(h, n_qubits);
  LayerGrowthResult out;
  std::size_t used = 0;
  bool have_best = false;
  for (std::size_t depth = 1; depth <= opts.max_depth && used < opts.budget; ++depth) {
    const AnsatzBuild ansatz = build_hea(n_qubits, depth, initial_state);
    const Objective f = circuit_objective(ansatz.circuit, compiled, initial_state);
    double depth_best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < opts.restarts && used < opts.budget; ++r) {
      OptimizerConfig cfg = opts.optimizer;
      cfg.max_evaluations = std::min(cfg.max_evaluations, opts.budget - used);
      const auto x0 = initial_parameters(ansatz.init, ansatz.n_params(),
                                         derive_seed(opts.seed, "hea-depth-" + std::to_string(depth), r));
      const auto run = minimize_bfgs(f, x0, cfg);
      used += run.n_evaluations;
      out.best.n_iterations += run.n_iterations;
      depth_best = std::min(depth_best, run.f);
      if (!have_best || run.f < out.best.energy) {
        have_best = true;
        out.best.energy = run.f;
        out.best.values = run.x;
        out.best.parameters = ansatz.circuit.values_to_map(run.x);
        out.best.converged = run.converged;
        out.depth = depth;
      }
      out.best.restarts_used += 1;
    }
    out.depth_energies.push_back(depth_best);
    if (have_best && out.best.energy - reference_energy < opts.chem_tol) {
      out.reached_accuracy = true;
      break;
    }
  }
  out.best.n_evaluations = used;
  out.best.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace vqebench
