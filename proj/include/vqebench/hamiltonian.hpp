#pragma once

// Molecular Hamiltonians from integrals, Hartree-Fock references and exact
// (FCI) ground energies.
//
// Spin orbitals are interleaved: spatial orbital p maps to qubit 2p (alpha)
// and 2p + 1 (beta).

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "vqebench/errors.hpp"
#include "vqebench/fcidump.hpp"
#include "vqebench/operators.hpp"
#include "vqebench/statevector.hpp"

namespace vqebench {

inline std::uint32_t alpha_orbital(std::size_t spatial) { return static_cast<std::uint32_t>(2 * spatial); }
inline std::uint32_t beta_orbital(std::size_t spatial) { return static_cast<std::uint32_t>(2 * spatial + 1); }

/// sum h_pq a+_p a_q + 1/2 sum (pq|rs) a+_p a+_r a_s a_q + E_core over spin orbitals.
inline FermionOperator build_fermionic_hamiltonian(const IntegralData& d) {
  const std::size_t n = d.n_spatial;
  FermionOperator h = FermionOperator::identity(d.core_energy);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const double v = d.one_body(p, q);
      if (v == 0.0) continue;
      for (std::uint32_t s = 0; s < 2; ++s)
        h.add_term({create(2 * p + s), annihilate(2 * q + s)}, v);
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const double v = d.two_body(p, q, r, s);
          if (v == 0.0) continue;
          for (std::uint32_t a = 0; a < 2; ++a)
            for (std::uint32_t b = 0; b < 2; ++b) {
              const auto P = static_cast<std::uint32_t>(2 * p + a), Q = static_cast<std::uint32_t>(2 * q + a);
              const auto R = static_cast<std::uint32_t>(2 * r + b), S = static_cast<std::uint32_t>(2 * s + b);
              if (P == R || Q == S) continue;
              h.add_term({create(P), create(R), annihilate(S), annihilate(Q)}, 0.5 * v);
            }
        }
  return h;
}

/// Jordan-Wigner qubit Hamiltonian; imaginary residue from the transform is
/// dropped after checking it is negligible.
inline QubitOperator build_qubit_hamiltonian(const IntegralData& d) {
  const QubitOperator raw = jordan_wigner(build_fermionic_hamiltonian(d), d.n_qubits());
  QubitOperator h;
  for (const auto& [p, c] : raw.terms()) {
    if (std::abs(c.imag()) > 1e-10) throw NumericalError("qubit Hamiltonian has complex coefficient");
    h.add_term(p, c.real());
  }
  return h;
}

/// Basis index with the lowest `n_electrons` spin orbitals occupied.
inline std::uint64_t hf_state_index(std::size_t n_qubits, std::size_t n_electrons) {
  if (n_electrons > n_qubits) throw InputError("more electrons than spin orbitals");
  if (n_electrons >= 64) throw InputError("too many electrons");
  return (std::uint64_t{1} << n_electrons) - 1;
}

struct Sector {
  std::size_t n_electrons = 0;
  std::optional<int> ms2;

  [[nodiscard]] bool contains(std::uint64_t x) const {
    if (static_cast<std::size_t>(std::popcount(x)) != n_electrons) return false;
    if (!ms2) return true;
    const int na = std::popcount(x & 0x5555555555555555ull);
    const int nb = std::popcount(x & 0xAAAAAAAAAAAAAAAAull);
    return na - nb == *ms2;
  }
};

enum class DiagonalizationMethod { Auto, Dense, Lanczos };

inline constexpr std::size_t kMaxExactQubits = 20;
inline constexpr std::size_t kDenseDimensionLimit = 2048;

namespace detail {

struct SectorBasis {
  std::vector<std::uint64_t> states;
  std::vector<std::int32_t> position;  // index -> row, -1 outside
};

inline SectorBasis sector_basis(std::size_t n_qubits, const std::optional<Sector>& sector) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  SectorBasis b;
  b.position.assign(dim, -1);
  for (std::uint64_t x = 0; x < dim; ++x) {
    if (sector && !sector->contains(x)) continue;
    b.position[x] = static_cast<std::int32_t>(b.states.size());
    b.states.push_back(x);
  }
  return b;
}

inline Eigen::SparseMatrix<cplx, Eigen::RowMajor> sector_matrix(const QubitOperator& h, const SectorBasis& b) {
  std::vector<Eigen::Triplet<cplx>> trips;
  for (std::size_t col = 0; col < b.states.size(); ++col) {
    const std::uint64_t x = b.states[col];
    for (const auto& [p, c] : h.terms()) {
      const std::int32_t row = b.position[x ^ p.x];
      if (row < 0) continue;
      trips.emplace_back(row, static_cast<int>(col), c * pauli_phase(p, i_power(p.y_count()), x));
    }
  }
  const auto n = static_cast<int>(b.states.size());
  Eigen::SparseMatrix<cplx, Eigen::RowMajor> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

/// Restarted Lanczos with full reorthogonalization; restarts from the Ritz
/// vector until the residual norm drops below `tol`.
inline double lanczos_lowest(const Eigen::SparseMatrix<cplx, Eigen::RowMajor>& m, double tol) {
  const Eigen::Index n = m.rows();
  if (n == 0) throw NumericalError("empty sector");
  if (n == 1) return m.coeff(0, 0).real();
  const Eigen::Index krylov = std::min<Eigen::Index>(n, 80);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(u(rng), u(rng));
  v.normalize();
  double best = 0.0;
  for (int restart = 0; restart < 500; ++restart) {
    Eigen::MatrixXcd basis(n, krylov);
    std::vector<double> alpha, beta;
    basis.col(0) = v;
    Eigen::Index used = 0;
    double last_beta = 0.0;
    for (Eigen::Index j = 0; j < krylov; ++j) {
      Eigen::VectorXcd w = m * basis.col(j);
      const double a = basis.col(j).dot(w).real();
      alpha.push_back(a);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index k = 0; k <= j; ++k) w -= basis.col(k) * basis.col(k).dot(w);
      const double bnorm = w.norm();
      used = j + 1;
      last_beta = bnorm;
      if (j + 1 == krylov || bnorm < 1e-14) break;
      beta.push_back(bnorm);
      basis.col(j + 1) = w / bnorm;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
    for (Eigen::Index i = 0; i < used; ++i) t(i, i) = alpha[i];
    for (Eigen::Index i = 0; i + 1 < used; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    best = es.eigenvalues()[0];
    const Eigen::VectorXd s = es.eigenvectors().col(0);
    const double residual = std::abs(last_beta * s[used - 1]);
    v = basis.leftCols(used) * s.cast<cplx>();
    v.normalize();
    if (residual < tol) return best;
  }
  throw NumericalError("Lanczos did not converge");
}

}  // namespace detail

/// Lowest eigenvalue of `h`, optionally restricted to an electron-number
/// (and spin-z) sector.
inline double exact_ground_energy(const QubitOperator& h, std::size_t n_qubits,
                                  const std::optional<Sector>& sector = std::nullopt,
                                  DiagonalizationMethod method = DiagonalizationMethod::Auto) {
  if (!hermiticity_check(h, 1e-10)) throw NumericalError("exact_ground_energy requires a Hermitian operator");
  if (n_qubits > kMaxExactQubits) throw NumericalError("dimension overflow: exact diagonalization limited to 20 qubits");
  if (h.min_qubits() > n_qubits) throw InputError("operator acts beyond n_qubits");
  const auto basis = detail::sector_basis(n_qubits, sector);
  if (basis.states.empty()) throw InputError("sector contains no basis states");
  const auto m = detail::sector_matrix(h, basis);
  const bool dense = method == DiagonalizationMethod::Dense ||
                     (method == DiagonalizationMethod::Auto && basis.states.size() <= kDenseDimensionLimit);
  if (dense) {
    Eigen::MatrixXcd full = Eigen::MatrixXcd(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(full, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
  }
  return detail::lanczos_lowest(m, 1e-9);
}

inline double hf_energy(const QubitOperator& h, std::size_t n_qubits, std::size_t n_electrons) {
  return expectation(h, StateVector(n_qubits, hf_state_index(n_qubits, n_electrons)));
}

}  // namespace vqebench
