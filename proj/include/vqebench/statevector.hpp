#pragma once

// Dense statevector simulation: gates, parameterized circuits, Pauli-sum
// expectation values and analytic gradients.
//
// Bit convention: qubit i is bit i of the basis index (qubit 0 least
// significant).

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vqebench/errors.hpp"
#include "vqebench/operators.hpp"

namespace vqebench {

inline constexpr std::size_t kMaxSimQubits = 30;

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::size_t n_qubits, std::uint64_t basis_index = 0) : n_qubits_(n_qubits) {
    if (n_qubits > kMaxSimQubits) throw InputError("statevector limited to 30 qubits");
    amps_.assign(std::size_t{1} << n_qubits, cplx{});
    if (basis_index >= amps_.size()) throw InputError("basis index out of range");
    amps_[basis_index] = 1.0;
  }

  [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
  [[nodiscard]] std::size_t dimension() const { return amps_.size(); }
  [[nodiscard]] std::span<cplx> amplitudes() { return amps_; }
  [[nodiscard]] std::span<const cplx> amplitudes() const { return amps_; }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

  [[nodiscard]] double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  void reset(std::uint64_t basis_index) {
    std::fill(amps_.begin(), amps_.end(), cplx{});
    amps_.at(basis_index) = 1.0;
  }

 private:
  std::size_t n_qubits_ = 0;
  std::vector<cplx> amps_;
};

inline cplx inner_product(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

namespace detail {

inline double parity_sign(std::uint64_t bits) { return (std::popcount(bits) & 1) ? -1.0 : 1.0; }

/// P|x> = phase(x) |x ^ p.x>, phase(x) = i^{#Y} (-1)^{|x & p.z|}.
inline cplx pauli_phase(const PauliString& p, cplx y_phase, std::uint64_t x) {
  return y_phase * parity_sign(x & p.z);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Compiled Pauli sums
// ---------------------------------------------------------------------------

/// A QubitOperator regrouped by X-mask for fast application to statevectors.
/// Each group stores its diagonal phase vector when memory allows.
class CompiledOperator {
 public:
  CompiledOperator() = default;

  CompiledOperator(const QubitOperator& op, std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (op.min_qubits() > n_qubits) throw InputError("operator acts on qubits beyond register size");
    std::map<std::uint64_t, std::size_t> by_mask;
    for (const auto& [p, c] : op.terms()) {
      auto [it, fresh] = by_mask.try_emplace(p.x, groups_.size());
      if (fresh) groups_.push_back(Group{p.x, {}, {}});
      groups_[it->second].terms.push_back({p.z, c * i_power(p.y_count())});
    }
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (groups_.size() * dim <= kDiagonalBudget) {
      for (auto& g : groups_) {
        g.diagonal.resize(dim);
        for (std::size_t x = 0; x < dim; ++x) g.diagonal[x] = group_value(g, x);
      }
    }
  }

  [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }

  /// out = op * in.
  void apply(std::span<const cplx> in, std::span<cplx> out) const {
    std::fill(out.begin(), out.end(), cplx{});
    for (const auto& g : groups_) {
      if (!g.diagonal.empty()) {
        for (std::size_t x = 0; x < in.size(); ++x) out[x ^ g.xmask] += g.diagonal[x] * in[x];
      } else {
        for (std::size_t x = 0; x < in.size(); ++x) out[x ^ g.xmask] += group_value(g, x) * in[x];
      }
    }
  }

  /// <psi|op|psi> without forming op|psi>.
  [[nodiscard]] cplx expectation(std::span<const cplx> psi) const {
    cplx s{};
    for (const auto& g : groups_) {
      cplx gs{};
      if (!g.diagonal.empty()) {
        for (std::size_t x = 0; x < psi.size(); ++x) gs += std::conj(psi[x ^ g.xmask]) * g.diagonal[x] * psi[x];
      } else {
        for (std::size_t x = 0; x < psi.size(); ++x) gs += std::conj(psi[x ^ g.xmask]) * group_value(g, x) * psi[x];
      }
      s += gs;
    }
    return s;
  }

 private:
  static constexpr std::size_t kDiagonalBudget = std::size_t{1} << 22;

  struct Term {
    std::uint64_t zmask;
    cplx coeff;  // includes i^{#Y}
  };
  struct Group {
    std::uint64_t xmask;
    std::vector<Term> terms;
    std::vector<cplx> diagonal;
  };

  static cplx group_value(const Group& g, std::uint64_t x) {
    cplx v{};
    for (const auto& t : g.terms) v += t.coeff * detail::parity_sign(x & t.zmask);
    return v;
  }

  std::size_t n_qubits_ = 0;
  std::vector<Group> groups_;
};

inline constexpr double kExpectationImagTolerance = 1e-9;

inline double expectation(const CompiledOperator& h, const StateVector& s) {
  if (h.n_qubits() != s.n_qubits()) throw InputError("operator/state qubit count mismatch");
  const cplx e = h.expectation(s.amplitudes());
  if (std::abs(e.imag()) > kExpectationImagTolerance)
    throw NumericalError("expectation has imaginary part " + std::to_string(e.imag()) + "; operator not Hermitian");
  return e.real();
}

inline double expectation(const QubitOperator& h, const StateVector& s) {
  if (h.min_qubits() > s.n_qubits()) throw InputError("operator qubit index out of range for state");
  return expectation(CompiledOperator(h, s.n_qubits()), s);
}

inline StateVector apply_operator(const QubitOperator& op, const StateVector& s) {
  StateVector out = s;
  CompiledOperator(op, s.n_qubits()).apply(s.amplitudes(), out.amplitudes());
  return out;
}

// ---------------------------------------------------------------------------
// Gates and circuits
// ---------------------------------------------------------------------------

enum class GateKind { RX, RY, RZ, CNOT, PauliEvolution, GivensRotation, SqrtISwap, X, H };

inline bool is_parameterized(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ || k == GateKind::PauliEvolution ||
         k == GateKind::GivensRotation;
}

struct ParamBinding {
  std::string name;
  double prefactor = 1.0;
};

/// One circuit element. Rotation angle = prefactor * value(name) when bound,
/// otherwise `angle`. Conventions: RX/RY/RZ(t) = exp(-i t sigma/2);
/// PauliEvolution(t) = exp(+i t P); GivensRotation(t) mixes |01>,|10> of
/// (a, b) with [[cos t, -sin t], [sin t, cos t]], with the sine sign flipped
/// by the parity of any qubits strictly between a and b.
struct Gate {
  GateKind kind = GateKind::X;
  std::vector<std::uint32_t> targets;
  PauliString generator;
  std::optional<ParamBinding> binding;
  double angle = 0.0;
  std::size_t param_index = static_cast<std::size_t>(-1);  // set by ParamCircuit::add

  [[nodiscard]] bool is_bound() const { return binding.has_value(); }
};

namespace gates {

inline Gate rotation(GateKind kind, std::uint32_t q, double angle) {
  Gate g;
  g.kind = kind;
  g.targets = {q};
  g.angle = angle;
  return g;
}
inline Gate rotation(GateKind kind, std::uint32_t q, ParamBinding b) {
  Gate g = rotation(kind, q, 0.0);
  g.binding = std::move(b);
  return g;
}
inline Gate rx(std::uint32_t q, ParamBinding b) { return rotation(GateKind::RX, q, std::move(b)); }
inline Gate ry(std::uint32_t q, ParamBinding b) { return rotation(GateKind::RY, q, std::move(b)); }
inline Gate rz(std::uint32_t q, ParamBinding b) { return rotation(GateKind::RZ, q, std::move(b)); }
inline Gate rx(std::uint32_t q, double a) { return rotation(GateKind::RX, q, a); }
inline Gate ry(std::uint32_t q, double a) { return rotation(GateKind::RY, q, a); }
inline Gate rz(std::uint32_t q, double a) { return rotation(GateKind::RZ, q, a); }

inline Gate pauli_evolution(const PauliString& p, ParamBinding b) {
  Gate g;
  g.kind = GateKind::PauliEvolution;
  g.generator = p;
  for (std::uint64_t s = p.support(); s; s &= s - 1) g.targets.push_back(static_cast<std::uint32_t>(std::countr_zero(s)));
  g.binding = std::move(b);
  return g;
}
inline Gate pauli_evolution(const PauliString& p, double angle) {
  Gate g = pauli_evolution(p, ParamBinding{});
  g.binding.reset();
  g.angle = angle;
  return g;
}

inline Gate givens(std::uint32_t a, std::uint32_t b, ParamBinding binding) {
  Gate g;
  g.kind = GateKind::GivensRotation;
  g.targets = {a, b};
  g.binding = std::move(binding);
  return g;
}
inline Gate givens(std::uint32_t a, std::uint32_t b, double angle) {
  Gate g;
  g.kind = GateKind::GivensRotation;
  g.targets = {a, b};
  g.angle = angle;
  return g;
}

inline Gate cnot(std::uint32_t control, std::uint32_t target) {
  Gate g;
  g.kind = GateKind::CNOT;
  g.targets = {control, target};
  return g;
}
inline Gate sqrt_iswap(std::uint32_t a, std::uint32_t b) {
  Gate g;
  g.kind = GateKind::SqrtISwap;
  g.targets = {a, b};
  return g;
}
inline Gate x(std::uint32_t q) {
  Gate g;
  g.kind = GateKind::X;
  g.targets = {q};
  return g;
}
inline Gate h(std::uint32_t q) {
  Gate g;
  g.kind = GateKind::H;
  g.targets = {q};
  return g;
}

}  // namespace gates

class ParamCircuit {
 public:
  ParamCircuit() = default;
  explicit ParamCircuit(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
  [[nodiscard]] const std::vector<Gate>& gates() const { return gates_; }
  [[nodiscard]] const std::vector<std::string>& param_names() const { return names_; }
  [[nodiscard]] std::size_t n_params() const { return names_.size(); }

  /// Registers a parameter name; returns its index (existing names are reused).
  std::size_t add_parameter(const std::string& name) {
    auto [it, fresh] = index_.try_emplace(name, names_.size());
    if (fresh) names_.push_back(name);
    return it->second;
  }

  [[nodiscard]] std::optional<std::size_t> parameter_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  void add(Gate g) {
    const std::size_t arity = (g.kind == GateKind::CNOT || g.kind == GateKind::SqrtISwap ||
                               g.kind == GateKind::GivensRotation)
                                  ? 2
                                  : (g.kind == GateKind::PauliEvolution ? g.targets.size() : 1);
    if (g.targets.size() != arity) throw InputError("gate has wrong number of targets");
    for (auto t : g.targets)
      if (t >= n_qubits_) throw InputError("gate qubit index " + std::to_string(t) + " out of range");
    if (arity == 2 && g.targets[0] == g.targets[1]) throw InputError("two-qubit gate needs distinct qubits");
    if (g.binding && !is_parameterized(g.kind)) throw InputError("non-parametric gate cannot carry a binding");
    if (g.kind == GateKind::PauliEvolution && g.generator.min_qubits() > n_qubits_)
      throw InputError("Pauli generator exceeds register");
    if (g.binding) g.param_index = add_parameter(g.binding->name);
    gates_.push_back(std::move(g));
  }

  void append(const ParamCircuit& other) {
    if (other.n_qubits_ != n_qubits_) throw InputError("circuit width mismatch");
    for (const auto& g : other.gates_) add(g);
  }

  /// Orders a name->value map by param_names(); throws on a missing name.
  [[nodiscard]] std::vector<double> values_from_map(const std::map<std::string, double>& values) const {
    std::vector<double> v(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
      auto it = values.find(names_[i]);
      if (it == values.end()) throw InputError("missing value for parameter '" + names_[i] + "'");
      v[i] = it->second;
    }
    return v;
  }

  [[nodiscard]] std::map<std::string, double> values_to_map(std::span<const double> v) const {
    std::map<std::string, double> m;
    for (std::size_t i = 0; i < names_.size(); ++i) m[names_[i]] = v[i];
    return m;
  }

  [[nodiscard]] double gate_angle(const Gate& g, std::span<const double> values) const {
    return g.binding ? g.binding->prefactor * values[g.param_index] : g.angle;
  }

  [[nodiscard]] std::size_t count(GateKind k) const {
    return static_cast<std::size_t>(std::count_if(gates_.begin(), gates_.end(), [k](const Gate& g) { return g.kind == k; }));
  }

  friend bool operator==(const ParamCircuit& a, const ParamCircuit& b) {
    if (a.n_qubits_ != b.n_qubits_ || a.names_ != b.names_ || a.gates_.size() != b.gates_.size()) return false;
    for (std::size_t i = 0; i < a.gates_.size(); ++i) {
      const auto &x = a.gates_[i], &y = b.gates_[i];
      if (x.kind != y.kind || x.targets != y.targets || x.generator != y.generator || x.angle != y.angle ||
          x.binding.has_value() != y.binding.has_value())
        return false;
      if (x.binding && (x.binding->name != y.binding->name || x.binding->prefactor != y.binding->prefactor))
        return false;
    }
    return true;
  }

 private:
  std::size_t n_qubits_ = 0;
  std::vector<Gate> gates_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

namespace kernels {

inline void single_qubit(std::span<cplx> a, std::uint32_t q, cplx m00, cplx m01, cplx m10, cplx m11) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t base = 0; base < a.size(); base += 2 * bit) {
    for (std::size_t i = base; i < base + bit; ++i) {
      const cplx v0 = a[i];
      const cplx v1 = a[i | bit];
      a[i] = m00 * v0 + m01 * v1;
      a[i | bit] = m10 * v0 + m11 * v1;
    }
  }
}

inline void rz(std::span<cplx> a, std::uint32_t q, double theta) {
  const std::size_t bit = std::size_t{1} << q;
  const cplx p0 = std::polar(1.0, -theta / 2), p1 = std::polar(1.0, theta / 2);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= (i & bit) ? p1 : p0;
}

inline void pauli_evolution(std::span<cplx> a, const PauliString& p, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const cplx yph = i_power(p.y_count());
  const cplx is{0.0, s};
  if (p.x == 0) {
    for (std::size_t x = 0; x < a.size(); ++x) a[x] *= c + is * detail::pauli_phase(p, yph, x);
    return;
  }
  const std::uint64_t xm = p.x;
  for (std::size_t x = 0; x < a.size(); ++x) {
    const std::size_t y = x ^ xm;
    if (y < x) continue;
    const cplx ax = a[x], ay = a[y];
    a[x] = c * ax + is * detail::pauli_phase(p, yph, y) * ay;
    a[y] = c * ay + is * detail::pauli_phase(p, yph, x) * ax;
  }
}

inline std::uint64_t between_mask(std::uint32_t a, std::uint32_t b) {
  const auto lo = std::min(a, b), hi = std::max(a, b);
  return ((std::uint64_t{1} << hi) - 1) & ~((std::uint64_t{1} << (lo + 1)) - 1);
}

inline void givens(std::span<cplx> amp, std::uint32_t a, std::uint32_t b, double theta) {
  const std::size_t ba = std::size_t{1} << a, bb = std::size_t{1} << b;
  const std::uint64_t mid = between_mask(a, b);
  const double c = std::cos(theta), s = std::sin(theta);
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if ((i & ba) || !(i & bb)) continue;  // i has a=0, b=1
    const std::size_t j = (i ^ bb) | ba;  // a=1, b=0
    const double ss = s * detail::parity_sign(i & mid);
    const cplx v01 = amp[i], v10 = amp[j];
    amp[i] = c * v01 - ss * v10;
    amp[j] = ss * v01 + c * v10;
  }
}

inline void sqrt_iswap(std::span<cplx> amp, std::uint32_t a, std::uint32_t b, bool inverse) {
  const std::size_t ba = std::size_t{1} << a, bb = std::size_t{1} << b;
  const double r = 1.0 / std::numbers::sqrt2;
  const cplx off{0.0, inverse ? -r : r};
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if ((i & ba) || !(i & bb)) continue;
    const std::size_t j = (i ^ bb) | ba;
    const cplx v01 = amp[i], v10 = amp[j];
    amp[i] = r * v01 + off * v10;
    amp[j] = off * v01 + r * v10;
  }
}

inline void cnot(std::span<cplx> amp, std::uint32_t control, std::uint32_t target) {
  const std::size_t bc = std::size_t{1} << control, bt = std::size_t{1} << target;
  for (std::size_t i = 0; i < amp.size(); ++i)
    if ((i & bc) && !(i & bt)) std::swap(amp[i], amp[i | bt]);
}

}  // namespace kernels

/// Applies `g` with rotation angle `theta` (ignored for fixed gates). With
/// `inverse`, applies the adjoint.
inline void apply_gate(std::span<cplx> amp, const Gate& g, double theta, bool inverse = false) {
  if (inverse) theta = -theta;
  const auto q = g.targets.empty() ? 0u : g.targets[0];
  switch (g.kind) {
    case GateKind::RX: {
      const double c = std::cos(theta / 2), s = std::sin(theta / 2);
      kernels::single_qubit(amp, q, c, {0, -s}, {0, -s}, c);
      break;
    }
    case GateKind::RY: {
      const double c = std::cos(theta / 2), s = std::sin(theta / 2);
      kernels::single_qubit(amp, q, c, -s, s, c);
      break;
    }
    case GateKind::RZ: kernels::rz(amp, q, theta); break;
    case GateKind::PauliEvolution: kernels::pauli_evolution(amp, g.generator, theta); break;
    case GateKind::GivensRotation: kernels::givens(amp, g.targets[0], g.targets[1], theta); break;
    case GateKind::SqrtISwap: kernels::sqrt_iswap(amp, g.targets[0], g.targets[1], inverse); break;
    case GateKind::CNOT: kernels::cnot(amp, g.targets[0], g.targets[1]); break;
    case GateKind::X: kernels::single_qubit(amp, q, 0, 1, 1, 0); break;
    case GateKind::H: {
      const double r = 1.0 / std::numbers::sqrt2;
      kernels::single_qubit(amp, q, r, r, r, -r);
      break;
    }
  }
}

namespace detail {

/// <lambda| G |psi> where dU/dtheta = G U for the gate's own angle.
inline cplx generator_overlap(const Gate& g, std::span<const cplx> lambda, std::span<const cplx> psi) {
  auto pauli_overlap = [&](const PauliString& p, cplx scale) {
    const cplx yph = i_power(p.y_count());
    cplx s{};
    for (std::size_t x = 0; x < psi.size(); ++x) s += std::conj(lambda[x ^ p.x]) * pauli_phase(p, yph, x) * psi[x];
    return scale * s;
  };
  const cplx half_minus_i{0.0, -0.5};
  switch (g.kind) {
    case GateKind::RX: return pauli_overlap(PauliString::single(g.targets[0], PauliAxis::X), half_minus_i);
    case GateKind::RY: return pauli_overlap(PauliString::single(g.targets[0], PauliAxis::Y), half_minus_i);
    case GateKind::RZ: return pauli_overlap(PauliString::single(g.targets[0], PauliAxis::Z), half_minus_i);
    case GateKind::PauliEvolution: return pauli_overlap(g.generator, cplx{0.0, 1.0});
    case GateKind::GivensRotation: {
      const auto a = g.targets[0], b = g.targets[1];
      const std::size_t ba = std::size_t{1} << a, bb = std::size_t{1} << b;
      const std::uint64_t mid = kernels::between_mask(a, b);
      cplx s{};
      for (std::size_t i = 0; i < psi.size(); ++i) {
        if ((i & ba) || !(i & bb)) continue;
        const std::size_t j = (i ^ bb) | ba;
        const double sg = parity_sign(i & mid);
        s += std::conj(lambda[i]) * (-sg * psi[j]) + std::conj(lambda[j]) * (sg * psi[i]);
      }
      return s;
    }
    default: return {};
  }
}

}  // namespace detail

inline void apply_circuit_inplace(const ParamCircuit& c, std::span<const double> values, StateVector& s) {
  if (values.size() != c.n_params()) throw InputError("parameter vector size mismatch");
  if (s.n_qubits() != c.n_qubits()) throw InputError("state/circuit qubit count mismatch");
  for (const auto& g : c.gates()) apply_gate(s.amplitudes(), g, c.gate_angle(g, values));
}

inline StateVector apply_circuit(const ParamCircuit& c, std::span<const double> values, std::uint64_t initial) {
  StateVector s(c.n_qubits(), initial);
  apply_circuit_inplace(c, values, s);
  return s;
}

inline StateVector apply_circuit(const ParamCircuit& c, const std::map<std::string, double>& values,
                                 std::uint64_t initial) {
  return apply_circuit(c, c.values_from_map(values), initial);
}

inline StateVector apply_pauli_evolution(StateVector s, const PauliString& p, double theta) {
  if (p.min_qubits() > s.n_qubits()) throw InputError("Pauli string exceeds register");
  kernels::pauli_evolution(s.amplitudes(), p, theta);
  return s;
}

struct EnergyGradient {
  double energy = 0.0;
  std::vector<double> gradient;  // ordered like ParamCircuit::param_names()
};

/// Energy and full gradient from one forward pass and one reverse sweep.
inline EnergyGradient adjoint_gradient(const ParamCircuit& c, const CompiledOperator& h, std::span<const double> values,
                                       std::uint64_t initial) {
  StateVector psi = apply_circuit(c, values, initial);
  StateVector lambda(c.n_qubits());
  h.apply(psi.amplitudes(), lambda.amplitudes());
  const cplx e = inner_product(psi.amplitudes(), lambda.amplitudes());
  if (std::abs(e.imag()) > kExpectationImagTolerance) throw NumericalError("energy has imaginary part; operator not Hermitian");
  EnergyGradient out{e.real(), std::vector<double>(c.n_params(), 0.0)};
  const auto& gs = c.gates();
  for (std::size_t k = gs.size(); k-- > 0;) {
    const Gate& g = gs[k];
    const double theta = c.gate_angle(g, values);
    if (g.binding) {
      const cplx ov = detail::generator_overlap(g, lambda.amplitudes(), psi.amplitudes());
      out.gradient[g.param_index] += g.binding->prefactor * 2.0 * ov.real();
    }
    if (k == 0) break;
    apply_gate(psi.amplitudes(), g, theta, true);
    apply_gate(lambda.amplitudes(), g, theta, true);
  }
  return out;
}

inline std::pair<double, std::map<std::string, double>> adjoint_gradient(const ParamCircuit& c, const QubitOperator& h,
                                                                        const std::map<std::string, double>& values,
                                                                        std::uint64_t initial) {
  const auto v = c.values_from_map(values);
  const auto eg = adjoint_gradient(c, CompiledOperator(h, c.n_qubits()), v, initial);
  return {eg.energy, c.values_to_map(eg.gradient)};
}

inline double energy(const ParamCircuit& c, const CompiledOperator& h, std::span<const double> values,
                     std::uint64_t initial) {
  return expectation(h, apply_circuit(c, values, initial));
}

/// dE/dvalue(name) as sum over bound gates of prefactor * (E(+pi/4) - E(-pi/4)).
/// Every gate bound to `name` must be a Pauli evolution.
inline double parameter_shift_gradient(const ParamCircuit& c, const CompiledOperator& h, std::span<const double> values,
                                       std::uint64_t initial, const std::string& name) {
  const auto idx = c.parameter_index(name);
  if (!idx) throw InputError("unknown parameter '" + name + "'");
  const auto& gs = c.gates();
  for (const auto& g : gs)
    if (g.binding && g.param_index == *idx && g.kind != GateKind::PauliEvolution)
      throw InputError("parameter '" + name + "' is bound to a gate not eligible for the shift rule");
  auto shifted_energy = [&](std::size_t target, double shift) {
    StateVector s(c.n_qubits(), initial);
    for (std::size_t k = 0; k < gs.size(); ++k) {
      double theta = c.gate_angle(gs[k], values);
      if (k == target) theta += shift;
      apply_gate(s.amplitudes(), gs[k], theta);
    }
    return expectation(h, s);
  };
  constexpr double kShift = std::numbers::pi / 4;
  double grad = 0.0;
  for (std::size_t k = 0; k < gs.size(); ++k) {
    const auto& g = gs[k];
    if (!g.binding || g.param_index != *idx) continue;
    grad += g.binding->prefactor * (shifted_energy(k, kShift) - shifted_energy(k, -kShift));
  }
  return grad;
}

/// Derivative at theta = 0 of <s|exp(-theta A) H exp(theta A)|s> for an
/// anti-Hermitian generator A, i.e. <s|[H, A]|s> = 2 Re <Hs|As>. For a Pauli
/// evolution exp(i theta P) pass A = i P.
inline double commutator_gradient(const CompiledOperator& h, const CompiledOperator& generator, const StateVector& s) {
  StateVector hs(s.n_qubits()), as(s.n_qubits());
  h.apply(s.amplitudes(), hs.amplitudes());
  generator.apply(s.amplitudes(), as.amplitudes());
  return 2.0 * inner_product(hs.amplitudes(), as.amplitudes()).real();
}

inline double commutator_gradient(const QubitOperator& h, const QubitOperator& generator, const StateVector& s) {
  return commutator_gradient(CompiledOperator(h, s.n_qubits()), CompiledOperator(generator, s.n_qubits()), s);
}

}  // namespace vqebench
