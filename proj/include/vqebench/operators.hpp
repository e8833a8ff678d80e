#pragma once

// Sparse fermionic and Pauli-string operator algebra, plus the Jordan-Wigner
// transform between the two.

#include <algorithm>
#include <bit>
#include <charconv>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vqebench/errors.hpp"

namespace vqebench {

using cplx = std::complex<double>;

/// Coefficients with magnitude below this are dropped on insertion.
inline constexpr double kPruneTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Fermionic operators
// ---------------------------------------------------------------------------

struct Ladder {
  std::uint32_t mode = 0;
  bool dagger = false;

  friend auto operator<=>(const Ladder&, const Ladder&) = default;
};

inline Ladder create(std::uint32_t mode) { return {mode, true}; }
inline Ladder annihilate(std::uint32_t mode) { return {mode, false}; }

using FermionTerm = std::vector<Ladder>;

namespace detail {

// Bubble the ladder sequence into canonical order: creations left of
// annihilations, descending mode index within each group. Contractions from
// {a_i, a+_j} = delta_ij are emitted recursively into `out`.
template <typename Sink>
void normal_order_into(FermionTerm term, cplx coeff, Sink& out) {
  for (std::size_t i = 1; i < term.size(); ++i) {
    for (std::size_t j = i; j > 0; --j) {
      const Ladder right = term[j];
      const Ladder left = term[j - 1];
      if (right.dagger && !left.dagger) {
        term[j - 1] = right;
        term[j] = left;
        coeff = -coeff;
        if (right.mode == left.mode) {
          FermionTerm contracted;
          contracted.reserve(term.size() - 2);
          contracted.insert(contracted.end(), term.begin(), term.begin() + (j - 1));
          contracted.insert(contracted.end(), term.begin() + (j + 1), term.end());
          normal_order_into(std::move(contracted), -coeff, out);
        }
      } else if (right.dagger == left.dagger) {
        if (right.mode == left.mode) return;  // a a = a+ a+ = 0
        if (right.mode > left.mode) {
          term[j - 1] = right;
          term[j] = left;
          coeff = -coeff;
        }
      }
    }
  }
  out(std::move(term), coeff);
}

template <typename Key>
void accumulate(std::map<Key, cplx>& terms, Key key, cplx coeff) {
  auto [it, inserted] = terms.try_emplace(std::move(key), coeff);
  if (!inserted) it->second += coeff;
  if (std::abs(it->second) < kPruneTolerance) terms.erase(it);
}

}  // namespace detail

/// Linear combination of normal-ordered products of ladder operators.
class FermionOperator {
 public:
  using TermMap = std::map<FermionTerm, cplx>;

  FermionOperator() = default;

  static FermionOperator identity(cplx coeff = 1.0) {
    FermionOperator op;
    op.add_term({}, coeff);
    return op;
  }

  static FermionOperator term(FermionTerm ladders, cplx coeff = 1.0) {
    FermionOperator op;
    op.add_term(std::move(ladders), coeff);
    return op;
  }

  /// Normal-orders `ladders` and merges the result into this operator.
  void add_term(FermionTerm ladders, cplx coeff) {
    if (std::abs(coeff) < kPruneTolerance) return;
    auto sink = [this](FermionTerm t, cplx c) { detail::accumulate(terms_, std::move(t), c); };
    detail::normal_order_into(std::move(ladders), coeff, sink);
  }

  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] bool empty() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }

  [[nodiscard]] std::uint32_t max_mode() const {
    std::uint32_t m = 0;
    for (const auto& [t, c] : terms_)
      for (const auto& l : t) m = std::max(m, l.mode + 1);
    return m;
  }

  [[nodiscard]] FermionOperator adjoint() const {
    FermionOperator out;
    for (const auto& [t, c] : terms_) {
      FermionTerm rev(t.rbegin(), t.rend());
      for (auto& l : rev) l.dagger = !l.dagger;
      out.add_term(std::move(rev), std::conj(c));
    }
    return out;
  }

  FermionOperator& operator+=(const FermionOperator& other) {
    for (const auto& [t, c] : other.terms_) detail::accumulate(terms_, t, c);
    return *this;
  }
  FermionOperator& operator-=(const FermionOperator& other) {
    for (const auto& [t, c] : other.terms_) detail::accumulate(terms_, t, -c);
    return *this;
  }
  FermionOperator& operator*=(cplx s) {
    if (std::abs(s) < kPruneTolerance) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      it = std::abs(it->second) < kPruneTolerance ? terms_.erase(it) : std::next(it);
    }
    return *this;
  }

  friend FermionOperator operator+(FermionOperator a, const FermionOperator& b) { return a += b; }
  friend FermionOperator operator-(FermionOperator a, const FermionOperator& b) { return a -= b; }
  friend FermionOperator operator*(FermionOperator a, cplx s) { return a *= s; }
  friend FermionOperator operator*(cplx s, FermionOperator a) { return a *= s; }

  /// Normal-ordered operator product.
  friend FermionOperator operator*(const FermionOperator& a, const FermionOperator& b) {
    FermionOperator out;
    for (const auto& [ta, ca] : a.terms_) {
      for (const auto& [tb, cb] : b.terms_) {
        FermionTerm joined = ta;
        joined.insert(joined.end(), tb.begin(), tb.end());
        out.add_term(std::move(joined), ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const FermionOperator&, const FermionOperator&) = default;

 private:
  TermMap terms_;
};

inline FermionOperator fermion_multiply(const FermionOperator& a, const FermionOperator& b) {
  return a * b;
}

/// Sum over modes of a+_i a_i.
inline FermionOperator number_operator(std::uint32_t n_modes) {
  FermionOperator n;
  for (std::uint32_t i = 0; i < n_modes; ++i) n.add_term({create(i), annihilate(i)}, 1.0);
  return n;
}

// ---------------------------------------------------------------------------
// Pauli strings
// ---------------------------------------------------------------------------

enum class PauliAxis : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Tensor product of single-qubit Paulis in symplectic form: qubit q carries
/// X if only bit q of `x` is set, Z if only bit q of `z`, Y if both.
/// Supports up to 64 qubits.
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  static constexpr std::size_t kMaxQubits = 64;

  static PauliString single(std::size_t qubit, PauliAxis axis) {
    PauliString p;
    p.set(qubit, axis);
    return p;
  }

  [[nodiscard]] PauliAxis axis(std::size_t q) const {
    const bool bx = (x >> q) & 1u;
    const bool bz = (z >> q) & 1u;
    if (bx && bz) return PauliAxis::Y;
    if (bx) return PauliAxis::X;
    if (bz) return PauliAxis::Z;
    return PauliAxis::I;
  }

  void set(std::size_t q, PauliAxis a) {
    if (q >= kMaxQubits) throw InputError("qubit index " + std::to_string(q) + " exceeds 63");
    const std::uint64_t bit = std::uint64_t{1} << q;
    x &= ~bit;
    z &= ~bit;
    if (a == PauliAxis::X || a == PauliAxis::Y) x |= bit;
    if (a == PauliAxis::Z || a == PauliAxis::Y) z |= bit;
  }

  [[nodiscard]] std::uint64_t support() const { return x | z; }
  [[nodiscard]] bool is_identity() const { return support() == 0; }
  [[nodiscard]] int weight() const { return std::popcount(support()); }
  [[nodiscard]] int y_count() const { return std::popcount(x & z); }
  [[nodiscard]] int z_count() const { return std::popcount(z & ~x); }
  /// One past the highest qubit acted on.
  [[nodiscard]] std::size_t min_qubits() const {
    return support() == 0 ? 0 : 64 - static_cast<std::size_t>(std::countl_zero(support()));
  }

  /// The qubit -> axis map, ascending by qubit.
  [[nodiscard]] std::map<std::size_t, PauliAxis> ops() const {
    std::map<std::size_t, PauliAxis> m;
    for (std::uint64_t s = support(); s; s &= s - 1) {
      const auto q = static_cast<std::size_t>(std::countr_zero(s));
      m.emplace(q, axis(q));
    }
    return m;
  }

  [[nodiscard]] bool commutes_with(const PauliString& o) const {
    return ((std::popcount(x & o.z) + std::popcount(z & o.x)) & 1) == 0;
  }

  friend auto operator<=>(const PauliString&, const PauliString&) = default;
};

/// Product of two Pauli strings: returns (k, p) with a*b = i^k * p.
inline std::pair<int, PauliString> pauli_product(const PauliString& a, const PauliString& b) {
  int k = 0;
  for (std::uint64_t both = a.support() & b.support(); both; both &= both - 1) {
    const auto q = static_cast<std::size_t>(std::countr_zero(both));
    const int sa = static_cast<int>(a.axis(q));
    const int sb = static_cast<int>(b.axis(q));
    if (sa == sb) continue;
    // X->Y->Z->X cyclic products carry +i, anticyclic -i.
    k += ((sb - sa + 3) % 3 == 1) ? 1 : 3;
  }
  return {k & 3, PauliString{a.x ^ b.x, a.z ^ b.z}};
}

inline cplx i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline std::string serialize_pauli_string(const PauliString& p) {
  static constexpr char kNames[] = {'I', 'X', 'Y', 'Z'};
  std::string out;
  for (const auto& [q, a] : p.ops()) {
    if (!out.empty()) out += ' ';
    out += kNames[static_cast<int>(a)];
    out += std::to_string(q);
  }
  return out;
}

/// Parses "X0 Z3"-style text. An empty string or a lone "I" is the identity.
inline PauliString parse_pauli_string(std::string_view text) {
  PauliString p;
  std::uint64_t seen = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t') ++end;
    const std::string_view token = text.substr(pos, end - pos);
    pos = end;
    if (token == "I") continue;
    PauliAxis axis;
    switch (token[0]) {
      case 'X': axis = PauliAxis::X; break;
      case 'Y': axis = PauliAxis::Y; break;
      case 'Z': axis = PauliAxis::Z; break;
      default: throw InputError("malformed Pauli token '" + std::string(token) + "'");
    }
    std::size_t q = 0;
    const auto digits = token.substr(1);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), q);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size())
      throw InputError("malformed Pauli token '" + std::string(token) + "'");
    if (q >= PauliString::kMaxQubits) throw InputError("qubit index too large in '" + std::string(token) + "'");
    if ((seen >> q) & 1u) throw InputError("duplicate qubit index " + std::to_string(q));
    seen |= std::uint64_t{1} << q;
    p.set(q, axis);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Qubit operators
// ---------------------------------------------------------------------------

class QubitOperator {
 public:
  using TermMap = std::map<PauliString, cplx>;

  QubitOperator() = default;

  static QubitOperator identity(cplx coeff = 1.0) { return term(PauliString{}, coeff); }

  static QubitOperator term(const PauliString& p, cplx coeff = 1.0) {
    QubitOperator op;
    op.add_term(p, coeff);
    return op;
  }

  static QubitOperator term(std::string_view pauli_text, cplx coeff = 1.0) {
    return term(parse_pauli_string(pauli_text), coeff);
  }

  void add_term(const PauliString& p, cplx coeff) {
    if (std::abs(coeff) < kPruneTolerance) return;
    detail::accumulate(terms_, p, coeff);
  }

  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] bool empty() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }

  [[nodiscard]] cplx coefficient(const PauliString& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? cplx{} : it->second;
  }

  [[nodiscard]] std::size_t min_qubits() const {
    std::size_t n = 0;
    for (const auto& [p, c] : terms_) n = std::max(n, p.min_qubits());
    return n;
  }

  [[nodiscard]] QubitOperator adjoint() const {
    QubitOperator out;
    for (const auto& [p, c] : terms_) out.terms_.emplace(p, std::conj(c));
    return out;
  }

  QubitOperator& operator+=(const QubitOperator& o) {
    for (const auto& [p, c] : o.terms_) detail::accumulate(terms_, p, c);
    return *this;
  }
  QubitOperator& operator-=(const QubitOperator& o) {
    for (const auto& [p, c] : o.terms_) detail::accumulate(terms_, p, -c);
    return *this;
  }
  QubitOperator& operator*=(cplx s) {
    if (std::abs(s) < kPruneTolerance) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      it = std::abs(it->second) < kPruneTolerance ? terms_.erase(it) : std::next(it);
    }
    return *this;
  }

  friend QubitOperator operator+(QubitOperator a, const QubitOperator& b) { return a += b; }
  friend QubitOperator operator-(QubitOperator a, const QubitOperator& b) { return a -= b; }
  friend QubitOperator operator*(QubitOperator a, cplx s) { return a *= s; }
  friend QubitOperator operator*(cplx s, QubitOperator a) { return a *= s; }

  friend QubitOperator operator*(const QubitOperator& a, const QubitOperator& b) {
    QubitOperator out;
    for (const auto& [pa, ca] : a.terms_) {
      for (const auto& [pb, cb] : b.terms_) {
        const auto [k, p] = pauli_product(pa, pb);
        detail::accumulate(out.terms_, p, ca * cb * i_power(k));
      }
    }
    return out;
  }

  friend bool operator==(const QubitOperator&, const QubitOperator&) = default;

 private:
  TermMap terms_;
};

inline QubitOperator pauli_multiply(const QubitOperator& a, const QubitOperator& b) { return a * b; }

inline QubitOperator commutator(const QubitOperator& a, const QubitOperator& b) {
  // Anticommuting pairs contribute 2ab; commuting pairs cancel exactly.
  QubitOperator out;
  for (const auto& [pa, ca] : a.terms()) {
    for (const auto& [pb, cb] : b.terms()) {
      if (pa.commutes_with(pb)) continue;
      const auto [k, p] = pauli_product(pa, pb);
      out.add_term(p, 2.0 * ca * cb * i_power(k));
    }
  }
  return out;
}

inline bool hermiticity_check(const QubitOperator& q, double tol) {
  return std::all_of(q.terms().begin(), q.terms().end(),
                     [tol](const auto& kv) { return std::abs(kv.second.imag()) <= tol; });
}

/// One term per line: `<re> <im> <pauli-string>`, identity spelled `I`.
inline std::string to_text(const QubitOperator& op) {
  std::string out;
  char buf[64];
  for (const auto& [p, c] : op.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g ", c.real(), c.imag());
    out += buf;
    out += p.is_identity() ? std::string("I") : serialize_pauli_string(p);
    out += '\n';
  }
  return out;
}

inline QubitOperator qubit_operator_from_text(std::istream& in) {
  QubitOperator op;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream ls(line);
    double re = 0, im = 0;
    if (!(ls >> re >> im)) throw InputError("line " + std::to_string(lineno) + ": expected '<re> <im> <pauli>'");
    std::string rest;
    std::getline(ls, rest);
    if (!rest.empty() && rest.back() == '\r') rest.pop_back();
    op.add_term(parse_pauli_string(rest), {re, im});
  }
  return op;
}

inline QubitOperator qubit_operator_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return qubit_operator_from_text(in);
}

// ---------------------------------------------------------------------------
// Jordan-Wigner
// ---------------------------------------------------------------------------

/// a+_i -> (X_i - iY_i)/2 Z_{i-1}...Z_0 and a_i -> (X_i + iY_i)/2 Z_{i-1}...Z_0.
inline QubitOperator jordan_wigner(const Ladder& l) {
  const std::uint64_t bit = std::uint64_t{1} << l.mode;
  const std::uint64_t chain = bit - 1;
  const PauliString px{bit, chain};
  const PauliString py{bit, chain | bit};
  QubitOperator op;
  op.add_term(px, 0.5);
  op.add_term(py, l.dagger ? cplx{0.0, -0.5} : cplx{0.0, 0.5});
  return op;
}

inline QubitOperator jordan_wigner(const FermionOperator& f, std::size_t n_qubits) {
  if (n_qubits > PauliString::kMaxQubits) throw InputError("at most 64 qubits supported");
  if (f.max_mode() > n_qubits)
    throw InputError("mode index " + std::to_string(f.max_mode() - 1) + " out of range for " +
                     std::to_string(n_qubits) + " qubits");
  QubitOperator out;
  for (const auto& [term, coeff] : f.terms()) {
    QubitOperator prod = QubitOperator::identity(coeff);
    for (const auto& l : term) prod = prod * jordan_wigner(l);
    out += prod;
  }
  return out;
}

}  // namespace vqebench
