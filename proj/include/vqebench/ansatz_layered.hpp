#pragma once

// Layered ansatzes: hardware-efficient (HEA), low-depth circuit ansatz
// (LDCA) and basis-rotation circuits (BRC) built from Givens rotations.

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "vqebench/ansatz_fixed.hpp"
#include "vqebench/errors.hpp"
#include "vqebench/statevector.hpp"

namespace vqebench {

inline constexpr std::size_t kHeaRestarts = 10;
inline constexpr std::size_t kLdcaRestarts = 20;
inline constexpr std::size_t kBrcRestarts = 20;

namespace detail {

inline void hea_rotation_layer(ParamCircuit& c, std::size_t layer) {
  for (std::uint32_t q = 0; q < c.n_qubits(); ++q) {
    const std::string base = "l" + std::to_string(layer) + "_q" + std::to_string(q);
    c.add(gates::ry(q, ParamBinding{base + "_ry"}));
    c.add(gates::rz(q, ParamBinding{base + "_rz"}));
  }
}

}  // namespace detail

/// U^0 followed by `depth` blocks of [CNOT chain i -> i+1; RY RZ on every qubit].
inline AnsatzBuild build_hea(std::size_t n_qubits, std::size_t depth, std::uint64_t initial_state = 0) {
  if (n_qubits == 0) throw InputError("HEA needs at least one qubit");
  AnsatzBuild b;
  b.family = "HEA";
  b.circuit = ParamCircuit(n_qubits);
  detail::hea_rotation_layer(b.circuit, 0);
  for (std::size_t layer = 1; layer <= depth; ++layer) {
    for (std::uint32_t q = 0; q + 1 < n_qubits; ++q) b.circuit.add(gates::cnot(q, q + 1));
    detail::hea_rotation_layer(b.circuit, layer);
  }
  b.init = InitPolicy::uniform(0.0, 2.0 * std::numbers::pi);
  b.initial_state = initial_state;
  b.restarts = kHeaRestarts;
  return b;
}

/// `cycles` cycles of ceil(n/2) layers; each layer applies a five-rotation
/// matchgate block (XX, YY, ZZ, XY, YX) on even pairs, then on odd pairs.
/// A final RZ per qubit adds the variational phases.
inline AnsatzBuild build_ldca(std::size_t n_qubits, std::size_t cycles, std::uint64_t initial_state = 0) {
  if (n_qubits < 2) throw InputError("LDCA needs at least two qubits");
  if (cycles == 0) throw InputError("LDCA needs at least one cycle");
  static constexpr std::array<std::pair<PauliAxis, PauliAxis>, 5> kBlock = {{{PauliAxis::X, PauliAxis::X},
                                                                              {PauliAxis::Y, PauliAxis::Y},
                                                                              {PauliAxis::Z, PauliAxis::Z},
                                                                              {PauliAxis::X, PauliAxis::Y},
                                                                              {PauliAxis::Y, PauliAxis::X}}};
  static constexpr std::array<const char*, 5> kNames = {"xx", "yy", "zz", "xy", "yx"};
  AnsatzBuild b;
  b.family = "LDCA";
  b.circuit = ParamCircuit(n_qubits);
  const std::size_t layers = (n_qubits + 1) / 2;
  for (std::size_t cycle = 0; cycle < cycles; ++cycle)
    for (std::size_t layer = 0; layer < layers; ++layer)
      for (std::size_t parity = 0; parity < 2; ++parity)
        for (std::size_t q = parity; q + 1 < n_qubits; q += 2) {
          const std::string base = "c" + std::to_string(cycle) + "_l" + std::to_string(layer) + "_q" + std::to_string(q);
          for (std::size_t k = 0; k < kBlock.size(); ++k) {
            PauliString p;
            p.set(q, kBlock[k].first);
            p.set(q + 1, kBlock[k].second);
            b.circuit.add(gates::pauli_evolution(p, ParamBinding{base + "_" + kNames[k]}));
          }
        }
  for (std::uint32_t q = 0; q < n_qubits; ++q) b.circuit.add(gates::rz(q, ParamBinding{"phase_q" + std::to_string(q)}));
  b.init = InitPolicy::uniform(0.0, 2.0 * std::numbers::pi);
  b.initial_state = initial_state;
  b.restarts = kLdcaRestarts;
  return b;
}

/// Mode pairs (p, p+1) of the diamond Givens network that rotates the lowest
/// `n_occupied` of `n_modes` modes, in application order.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> givens_network(std::size_t n_modes, std::size_t n_occupied) {
  if (n_occupied == 0 || n_occupied >= n_modes) throw InputError("BRC requires 0 < electrons < modes");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::size_t d = 0; d < n_modes - n_occupied; ++d)
    for (std::size_t i = n_occupied; i-- > 0;)
      out.emplace_back(static_cast<std::uint32_t>(i + d), static_cast<std::uint32_t>(i + d + 1));
  return out;
}

/// Basis-rotation circuit on `n_modes` linearly connected qubits with the
/// lowest `n_electrons` occupied: n_electrons * (n_modes - n_electrons) Givens rotations.
inline AnsatzBuild build_brc(std::size_t n_modes, std::size_t n_electrons) {
  AnsatzBuild b;
  b.family = "BRC";
  b.circuit = ParamCircuit(n_modes);
  std::size_t k = 0;
  for (const auto& [p, q] : givens_network(n_modes, n_electrons))
    b.circuit.add(gates::givens(p, q, ParamBinding{"g" + std::to_string(k++)}));
  b.particle_conserving = true;
  b.init = InitPolicy::uniform(-std::numbers::pi, std::numbers::pi);
  b.initial_state = hf_state_index(n_modes, n_electrons);
  b.restarts = kBrcRestarts;
  return b;
}

/// Closed-shell BRC on interleaved spin orbitals: the same spatial network is
/// applied to the alpha and the beta qubits with shared parameters.
inline AnsatzBuild build_brc_closed_shell(std::size_t n_qubits, std::size_t n_electrons) {
  detail::check_closed_shell(n_qubits, n_electrons);
  AnsatzBuild b = build_brc(n_qubits / 2, n_electrons / 2);
  ParamCircuit c(n_qubits);
  std::size_t k = 0;
  for (const auto& [p, q] : givens_network(n_qubits / 2, n_electrons / 2)) {
    const std::string name = "g" + std::to_string(k++);
    for (std::uint32_t spin = 0; spin < 2; ++spin) c.add(gates::givens(2 * p + spin, 2 * q + spin, ParamBinding{name}));
  }
  b.circuit = std::move(c);
  b.initial_state = hf_state_index(n_qubits, n_electrons);
  return b;
}

/// Givens(theta) on qubits (a, b) as two sqrt(iSWAP) and three RZ gates, in
/// application order. Equal to the native block including global phase.
inline std::vector<Gate> givens_compilation(double theta, std::uint32_t a = 0, std::uint32_t b = 1) {
  using std::numbers::pi;
  return {gates::rz(a, -pi), gates::sqrt_iswap(a, b), gates::rz(a, theta + pi), gates::rz(b, -theta),
          gates::sqrt_iswap(a, b)};
}

}  // namespace vqebench
