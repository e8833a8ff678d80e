#pragma once

// Fixed-structure unitary coupled cluster ansatzes. Each builder produces a
// list of excitation generators which are Jordan-Wigner mapped and
// Trotterized (first order, one step) into PauliEvolution gates.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "vqebench/errors.hpp"
#include "vqebench/hamiltonian.hpp"
#include "vqebench/operators.hpp"
#include "vqebench/statevector.hpp"

namespace vqebench {

enum class ExcitationKind { Single, Double, PairedDouble, GeneralizedSingle, QubitSingle, QubitDouble };

/// T of the generator prefactor * (T - T^dagger). Fermionic kinds carry T in
/// `excitation`; qubit kinds are defined by the index lists alone.
struct ExcitationGenerator {
  ExcitationKind kind = ExcitationKind::Single;
  std::vector<std::uint32_t> creation;
  std::vector<std::uint32_t> annihilation;
  FermionOperator excitation;
  std::string param_name;
  double prefactor = 1.0;

  [[nodiscard]] bool is_qubit() const {
    return kind == ExcitationKind::QubitSingle || kind == ExcitationKind::QubitDouble;
  }
};

struct InitPolicy {
  enum class Kind { Zeros, Uniform };
  Kind kind = Kind::Zeros;
  double lo = 0.0;
  double hi = 0.0;

  static InitPolicy zeros() { return {}; }
  static InitPolicy uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
  [[nodiscard]] bool is_random() const { return kind == Kind::Uniform; }
};

struct AnsatzBuild {
  std::string family;
  ParamCircuit circuit;
  std::vector<ExcitationGenerator> generators;
  bool particle_conserving = false;
  InitPolicy init;
  std::uint64_t initial_state = 0;
  std::size_t restarts = 1;

  [[nodiscard]] std::size_t n_params() const { return circuit.n_params(); }
};

namespace detail {

inline QubitOperator qubit_raise(std::uint32_t q) {
  QubitOperator o;
  o.add_term(PauliString::single(q, PauliAxis::X), 0.5);
  o.add_term(PauliString::single(q, PauliAxis::Y), cplx(0, -0.5));
  return o;
}

inline QubitOperator qubit_lower(std::uint32_t q) {
  QubitOperator o;
  o.add_term(PauliString::single(q, PauliAxis::X), 0.5);
  o.add_term(PauliString::single(q, PauliAxis::Y), cplx(0, 0.5));
  return o;
}

inline void check_closed_shell(std::size_t n_qubits, std::size_t n_electrons) {
  if (n_qubits % 2 != 0) throw InputError("number of spin orbitals must be even");
  if (n_electrons % 2 != 0) throw InputError("closed-shell reference requires an even electron count");
  if (n_electrons > n_qubits) throw InputError("more electrons than spin orbitals");
}

inline std::string index_name(const std::string& prefix, std::initializer_list<std::size_t> idx) {
  std::string s = prefix;
  for (auto i : idx) s += "_" + std::to_string(i);
  return s;
}

}  // namespace detail

/// Anti-Hermitian qubit operator prefactor * (T - T^dagger).
inline QubitOperator generator_qubit_operator(const ExcitationGenerator& g, std::size_t n_qubits) {
  QubitOperator t = QubitOperator::identity(1.0);
  if (g.is_qubit()) {
    for (auto c : g.creation) t = t * detail::qubit_raise(c);
    for (auto a : g.annihilation) t = t * detail::qubit_lower(a);
  } else {
    t = jordan_wigner(g.excitation, n_qubits);
  }
  return (t - t.adjoint()) * g.prefactor;
}

namespace detail {

inline void append_pauli_group(ParamCircuit& c, const QubitOperator& a, const std::string& name) {
  std::vector<std::pair<std::string, double>> strings;
  for (const auto& [p, coeff] : a.terms()) {
    if (std::abs(coeff.real()) > 1e-10) throw NumericalError("generator is not anti-Hermitian");
    if (p.is_identity()) continue;
    strings.emplace_back(serialize_pauli_string(p), coeff.imag());
  }
  std::sort(strings.begin(), strings.end());
  for (const auto& [text, r] : strings) c.add(gates::pauli_evolution(parse_pauli_string(text), ParamBinding{name, r}));
}

}  // namespace detail

/// One PauliEvolution gate per Pauli string, strings in sorted serialization
/// order. A string with coefficient i*r becomes exp(i theta r P).
///
/// Fermionic generators are split into their elementary excitation terms and
/// each term's strings are emitted together. Strings of one term commute, so
/// every group is an exact exponential and particle number is conserved.
/// Generators whose image vanishes are dropped.
inline ParamCircuit trotterize(const std::vector<ExcitationGenerator>& gens, std::size_t n_qubits) {
  ParamCircuit c(n_qubits);
  for (const auto& g : gens) {
    if (g.is_qubit()) {
      detail::append_pauli_group(c, generator_qubit_operator(g, n_qubits), g.param_name);
      continue;
    }
    for (const auto& [term, coeff] : g.excitation.terms()) {
      ExcitationGenerator part = g;
      part.excitation = FermionOperator::term(term, coeff);
      detail::append_pauli_group(c, generator_qubit_operator(part, n_qubits), g.param_name);
    }
  }
  return c;
}

namespace detail {

inline AnsatzBuild finish(std::string family, std::vector<ExcitationGenerator> gens, std::size_t n_qubits,
                          std::size_t n_electrons, InitPolicy init, std::size_t restarts, bool conserving) {
  AnsatzBuild b;
  b.family = std::move(family);
  b.circuit = trotterize(gens, n_qubits);
  b.generators = std::move(gens);
  b.particle_conserving = conserving;
  b.init = init;
  b.initial_state = hf_state_index(n_qubits, n_electrons);
  b.restarts = restarts;
  return b;
}

inline FermionOperator excitation_term(std::initializer_list<Ladder> ops, cplx coeff = 1.0) {
  FermionOperator f;
  f.add_term(std::vector<Ladder>(ops), coeff);
  return f;
}

/// Spin-adapted singles shared by the singlet UCCSD variants.
inline std::vector<ExcitationGenerator> singlet_singles(std::size_t n_occ, std::size_t n_spatial) {
  std::vector<ExcitationGenerator> out;
  for (std::size_t i = 0; i < n_occ; ++i)
    for (std::size_t a = n_occ; a < n_spatial; ++a) {
      ExcitationGenerator g;
      g.kind = ExcitationKind::Single;
      g.creation = {alpha_orbital(a), beta_orbital(a)};
      g.annihilation = {alpha_orbital(i), beta_orbital(i)};
      g.excitation = excitation_term({create(alpha_orbital(a)), annihilate(alpha_orbital(i))}) +
                     excitation_term({create(beta_orbital(a)), annihilate(beta_orbital(i))});
      g.param_name = index_name("s", {i, a});
      out.push_back(std::move(g));
    }
  return out;
}

inline std::uint32_t spin_orbital(std::size_t spatial, int spin) {
  return spin == 0 ? alpha_orbital(spatial) : beta_orbital(spatial);
}

}  // namespace detail

/// Singlet UCCSD: singles and doubles keyed by spatial excitations, with
/// amplitudes shared across spin channels.
inline std::vector<ExcitationGenerator> uccsd_singlet_generators(std::size_t n_qubits, std::size_t n_electrons) {
  detail::check_closed_shell(n_qubits, n_electrons);
  const std::size_t n_spatial = n_qubits / 2, n_occ = n_electrons / 2;
  auto gens = detail::singlet_singles(n_occ, n_spatial);
  std::vector<std::pair<std::size_t, std::size_t>> ia;
  for (std::size_t a = n_occ; a < n_spatial; ++a)
    for (std::size_t i = 0; i < n_occ; ++i) ia.emplace_back(i, a);
  std::sort(ia.begin(), ia.end());

  // Same spatial excitation applied to both spin channels.
  for (const auto& [i, a] : ia) {
    ExcitationGenerator g;
    g.kind = ExcitationKind::Double;
    for (int s = 0; s < 2; ++s) {
      const int t = 1 - s;
      g.excitation += detail::excitation_term({create(detail::spin_orbital(a, s)), annihilate(detail::spin_orbital(i, s)),
                                               create(detail::spin_orbital(a, t)), annihilate(detail::spin_orbital(i, t))});
    }
    g.creation = {alpha_orbital(a), beta_orbital(a)};
    g.annihilation = {alpha_orbital(i), beta_orbital(i)};
    g.param_name = detail::index_name("d", {i, a, i, a});
    gens.push_back(std::move(g));
  }
  // Two distinct spatial excitations, all four spin combinations.
  for (std::size_t k = 0; k < ia.size(); ++k)
    for (std::size_t l = k + 1; l < ia.size(); ++l) {
      const auto [i, a] = ia[k];
      const auto [j, b] = ia[l];
      ExcitationGenerator g;
      g.kind = ExcitationKind::Double;
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
          const auto A = detail::spin_orbital(a, s), I = detail::spin_orbital(i, s);
          const auto B = detail::spin_orbital(b, t), J = detail::spin_orbital(j, t);
          if (A == B || I == J) continue;
          g.excitation += detail::excitation_term({create(A), annihilate(I), create(B), annihilate(J)});
        }
      g.creation = {alpha_orbital(a), alpha_orbital(b)};
      g.annihilation = {alpha_orbital(i), alpha_orbital(j)};
      g.param_name = detail::index_name("d", {i, a, j, b});
      gens.push_back(std::move(g));
    }
  return gens;
}

inline AnsatzBuild build_uccsd_singlet(std::size_t n_qubits, std::size_t n_electrons) {
  return detail::finish("UCCSD", uccsd_singlet_generators(n_qubits, n_electrons), n_qubits, n_electrons,
                        InitPolicy::zeros(), 1, true);
}

namespace detail {

/// Creation part of the singlet pair on spatial orbitals (p, q).
inline FermionOperator singlet_pair(std::size_t p, std::size_t q) {
  if (p == q) return excitation_term({create(alpha_orbital(p)), create(beta_orbital(p))});
  const double r = 1.0 / std::sqrt(2.0);
  return excitation_term({create(alpha_orbital(p)), create(beta_orbital(q))}, r) +
         excitation_term({create(alpha_orbital(q)), create(beta_orbital(p))}, r);
}

/// The three M components of the triplet pair creator on (p, q), p != q.
inline std::array<FermionOperator, 3> triplet_pair(std::size_t p, std::size_t q) {
  const double r = 1.0 / std::sqrt(2.0);
  return {excitation_term({create(alpha_orbital(p)), create(alpha_orbital(q))}),
          excitation_term({create(alpha_orbital(p)), create(beta_orbital(q))}, r) +
              excitation_term({create(alpha_orbital(q)), create(beta_orbital(p))}, -r),
          excitation_term({create(beta_orbital(p)), create(beta_orbital(q))})};
}

}  // namespace detail

/// UCCSD0: singlet singles plus doubles split into singlet-pair (sigma) and
/// triplet-pair (pi) channels, T2 = sum sigma P+_ab P_ij + sum pi Q+_ab . Q_ij.
inline std::vector<ExcitationGenerator> uccsd0_generators(std::size_t n_qubits, std::size_t n_electrons) {
  detail::check_closed_shell(n_qubits, n_electrons);
  const std::size_t n_spatial = n_qubits / 2, n_occ = n_electrons / 2;
  auto gens = detail::singlet_singles(n_occ, n_spatial);
  for (std::size_t i = 0; i < n_occ; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t a = n_occ; a < n_spatial; ++a)
        for (std::size_t b = n_occ; b <= a; ++b) {
          ExcitationGenerator g;
          g.kind = ExcitationKind::Double;
          g.excitation = fermion_multiply(detail::singlet_pair(a, b), detail::singlet_pair(i, j).adjoint());
          g.creation = {alpha_orbital(a), beta_orbital(b)};
          g.annihilation = {alpha_orbital(i), beta_orbital(j)};
          g.param_name = detail::index_name("sigma", {i, j, a, b});
          gens.push_back(std::move(g));
        }
  for (std::size_t i = 0; i < n_occ; ++i)
    for (std::size_t j = 0; j < i; ++j)
      for (std::size_t a = n_occ; a < n_spatial; ++a)
        for (std::size_t b = n_occ; b < a; ++b) {
          ExcitationGenerator g;
          g.kind = ExcitationKind::Double;
          const auto up = detail::triplet_pair(a, b);
          const auto down = detail::triplet_pair(i, j);
          for (std::size_t m = 0; m < 3; ++m) g.excitation += fermion_multiply(up[m], down[m].adjoint());
          g.creation = {alpha_orbital(a), alpha_orbital(b)};
          g.annihilation = {alpha_orbital(i), alpha_orbital(j)};
          g.param_name = detail::index_name("pi", {i, j, a, b});
          gens.push_back(std::move(g));
        }
  return gens;
}

inline AnsatzBuild build_uccsd0(std::size_t n_qubits, std::size_t n_electrons) {
  return detail::finish("UCCSD0", uccsd0_generators(n_qubits, n_electrons), n_qubits, n_electrons,
                        InitPolicy::zeros(), 1, true);
}

inline constexpr std::size_t kDefaultGeneralizedRestarts = 5;

/// k blocks of spin-shared generalized singles and paired doubles over all
/// spatial orbital pairs P < Q, each block with its own parameters.
inline AnsatzBuild build_kupccgsd(std::size_t n_qubits, std::size_t n_electrons, std::size_t k,
                                  std::size_t restarts = kDefaultGeneralizedRestarts) {
  if (k == 0) throw InputError("k-UpCCGSD requires k >= 1");
  detail::check_closed_shell(n_qubits, n_electrons);
  const std::size_t n_spatial = n_qubits / 2;
  std::vector<ExcitationGenerator> gens;
  for (std::size_t block = 0; block < k; ++block) {
    const std::string tag = "k" + std::to_string(block);
    for (std::size_t p = 0; p < n_spatial; ++p)
      for (std::size_t q = p + 1; q < n_spatial; ++q) {
        ExcitationGenerator g;
        g.kind = ExcitationKind::GeneralizedSingle;
        g.excitation = detail::excitation_term({create(alpha_orbital(q)), annihilate(alpha_orbital(p))}) +
                       detail::excitation_term({create(beta_orbital(q)), annihilate(beta_orbital(p))});
        g.creation = {alpha_orbital(q), beta_orbital(q)};
        g.annihilation = {alpha_orbital(p), beta_orbital(p)};
        g.param_name = detail::index_name(tag + "_s", {p, q});
        gens.push_back(std::move(g));
      }
    for (std::size_t p = 0; p < n_spatial; ++p)
      for (std::size_t q = p + 1; q < n_spatial; ++q) {
        ExcitationGenerator g;
        g.kind = ExcitationKind::PairedDouble;
        g.excitation = detail::excitation_term(
            {create(alpha_orbital(q)), create(beta_orbital(q)), annihilate(beta_orbital(p)), annihilate(alpha_orbital(p))});
        g.creation = {alpha_orbital(q), beta_orbital(q)};
        g.annihilation = {alpha_orbital(p), beta_orbital(p)};
        g.param_name = detail::index_name(tag + "_d", {p, q});
        gens.push_back(std::move(g));
      }
  }
  return detail::finish(std::to_string(k) + "-UpCCGSD", std::move(gens), n_qubits, n_electrons,
                        InitPolicy::uniform(0.0, 2.0 * std::numbers::pi), restarts, true);
}

/// Qubit coupled cluster: spin-resolved singles and doubles built from qubit
/// raising/lowering operators, so no Z chains appear.
inline std::vector<ExcitationGenerator> qucc_generators(std::size_t n_qubits, std::size_t n_electrons) {
  detail::check_closed_shell(n_qubits, n_electrons);
  std::vector<ExcitationGenerator> gens;
  const auto spin = [](std::uint32_t q) { return q % 2; };
  const auto ne = static_cast<std::uint32_t>(n_electrons), nq = static_cast<std::uint32_t>(n_qubits);
  for (std::uint32_t i = 0; i < ne; ++i)
    for (std::uint32_t a = ne; a < nq; ++a) {
      if (spin(i) != spin(a)) continue;
      ExcitationGenerator g;
      g.kind = ExcitationKind::QubitSingle;
      g.creation = {a};
      g.annihilation = {i};
      g.param_name = detail::index_name("q", {i, a});
      gens.push_back(std::move(g));
    }
  for (std::uint32_t i = 0; i < ne; ++i)
    for (std::uint32_t j = i + 1; j < ne; ++j)
      for (std::uint32_t a = ne; a < nq; ++a)
        for (std::uint32_t b = a + 1; b < nq; ++b) {
          if (spin(i) + spin(j) != spin(a) + spin(b)) continue;
          ExcitationGenerator g;
          g.kind = ExcitationKind::QubitDouble;
          g.creation = {a, b};
          g.annihilation = {i, j};
          g.param_name = detail::index_name("q", {i, j, a, b});
          gens.push_back(std::move(g));
        }
  return gens;
}

inline AnsatzBuild build_qucc(std::size_t n_qubits, std::size_t n_electrons) {
  return detail::finish("QUCC", qucc_generators(n_qubits, n_electrons), n_qubits, n_electrons, InitPolicy::zeros(),
                        1, true);
}

}  // namespace vqebench
