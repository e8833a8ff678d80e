#pragma once

// FCIDUMP reader. Header namelist (&FCI NORB=..,NELEC=..,MS2=.. &END) followed
// by `value i j k l` lines with 1-based orbital indices.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vqebench/errors.hpp"

namespace vqebench {

struct IntegralData {
  std::size_t n_spatial = 0;
  std::size_t n_electrons = 0;
  int ms2 = 0;
  double core_energy = 0.0;
  std::vector<double> h1;  // row-major n x n
  std::vector<double> g2;  // chemists' (pq|rs), row-major n^4

  IntegralData() = default;
  IntegralData(std::size_t n, std::size_t n_elec, int ms2_ = 0)
      : n_spatial(n), n_electrons(n_elec), ms2(ms2_), h1(n * n, 0.0), g2(n * n * n * n, 0.0) {}

  [[nodiscard]] double& one_body(std::size_t p, std::size_t q) { return h1[p * n_spatial + q]; }
  [[nodiscard]] double one_body(std::size_t p, std::size_t q) const { return h1[p * n_spatial + q]; }

  [[nodiscard]] std::size_t g2_index(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return ((p * n_spatial + q) * n_spatial + r) * n_spatial + s;
  }
  [[nodiscard]] double& two_body(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return g2[g2_index(p, q, r, s)];
  }
  [[nodiscard]] double two_body(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return g2[g2_index(p, q, r, s)];
  }

  /// Writes `value` into every real-orbital symmetry partner of (pq|rs).
  void set_two_body_symmetric(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double value) {
    const std::size_t idx[8][4] = {{p, q, r, s}, {q, p, r, s}, {p, q, s, r}, {q, p, s, r},
                                   {r, s, p, q}, {s, r, p, q}, {r, s, q, p}, {s, r, q, p}};
    for (const auto& i : idx) two_body(i[0], i[1], i[2], i[3]) = value;
  }

  [[nodiscard]] std::size_t n_qubits() const { return 2 * n_spatial; }
};

namespace detail {

inline double parse_fortran_double(std::string token, std::size_t lineno) {
  for (auto& ch : token)
    if (ch == 'D' || ch == 'd') ch = 'E';
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != token.size() || !std::isfinite(v))
    throw InputError("FCIDUMP line " + std::to_string(lineno) + ": non-numeric value '" + token + "'");
  return v;
}

inline std::map<std::string, std::string> parse_namelist(const std::string& header) {
  // KEY=value,value,... pairs; a value runs until the next KEY= token.
  std::map<std::string, std::string> out;
  std::string cleaned;
  for (char c : header) cleaned += (c == ',' || c == '\n' || c == '\r' || c == '\t') ? ' ' : c;
  std::istringstream in(cleaned);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) {
    // Split glued tokens like "NORB=4" or "NORB=" "4".
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      tokens.push_back(t);
    } else {
      tokens.push_back(t.substr(0, eq + 1));
      if (eq + 1 < t.size()) tokens.push_back(t.substr(eq + 1));
    }
  }
  std::string key;
  for (const auto& t : tokens) {
    if (!t.empty() && t.back() == '=') {
      key.clear();
      for (char c : t.substr(0, t.size() - 1)) key += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      out[key];
    } else if (!key.empty()) {
      auto& v = out[key];
      if (!v.empty()) v += ' ';
      v += t;
    }
  }
  return out;
}

inline long header_int(const std::map<std::string, std::string>& nl, const std::string& key) {
  auto it = nl.find(key);
  if (it == nl.end() || it->second.empty()) throw InputError("FCIDUMP header missing " + key);
  std::istringstream in(it->second);
  long v = 0;
  if (!(in >> v)) throw InputError("FCIDUMP header value for " + key + " is not an integer");
  return v;
}

}  // namespace detail

inline IntegralData parse_fcidump(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string header;
  std::size_t lineno = 0;
  bool header_done = false;
  bool header_started = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string upper;
    for (char c : line) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (!header_started) {
      if (upper.find_first_not_of(" \t\r") == std::string::npos) continue;
      if (upper.find("&FCI") == std::string::npos) throw InputError("FCIDUMP missing &FCI header");
      header_started = true;
      upper.erase(0, upper.find("&FCI") + 4);
    }
    const auto end_pos = upper.find("&END");
    const auto slash_pos = upper.find('/');
    if (end_pos != std::string::npos || slash_pos != std::string::npos) {
      header += upper.substr(0, std::min(end_pos, slash_pos)) + ' ';
      header_done = true;
      break;
    }
    header += upper + ' ';
  }
  if (!header_done) throw InputError("FCIDUMP header not terminated by &END or /");

  const auto nl = detail::parse_namelist(header);
  const long norb = detail::header_int(nl, "NORB");
  const long nelec = detail::header_int(nl, "NELEC");
  const long ms2 = nl.count("MS2") ? detail::header_int(nl, "MS2") : 0;
  if (norb <= 0) throw InputError("FCIDUMP NORB must be positive");
  if (nelec < 0 || nelec > 2 * norb) throw InputError("FCIDUMP NELEC out of range");

  const auto n = static_cast<std::size_t>(norb);
  IntegralData d(n, static_cast<std::size_t>(nelec), static_cast<int>(ms2));
  std::vector<char> g2_set(d.g2.size(), 0);
  std::vector<char> h1_set(d.h1.size(), 0);
  constexpr double kConflictTol = 1e-10;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string value_tok;
    if (!(ls >> value_tok)) continue;
    const double value = detail::parse_fortran_double(value_tok, lineno);
    long idx[4];
    for (auto& i : idx) {
      std::string tok;
      if (!(ls >> tok)) throw InputError("FCIDUMP line " + std::to_string(lineno) + ": expected four indices");
      std::size_t used = 0;
      try {
        i = std::stol(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != tok.size())
        throw InputError("FCIDUMP line " + std::to_string(lineno) + ": non-numeric index '" + tok + "'");
      if (i < 0 || i > norb)
        throw InputError("FCIDUMP line " + std::to_string(lineno) + ": index " + tok + " exceeds NORB");
    }
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      d.core_energy = value;
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      const std::size_t p = i - 1, q = j - 1, r = k - 1, s = l - 1;
      const std::size_t at = d.g2_index(p, q, r, s);
      if (g2_set[at] && std::abs(d.g2[at] - value) > kConflictTol)
        throw InputError("FCIDUMP line " + std::to_string(lineno) + ": two-electron integral violates 8-fold symmetry");
      d.set_two_body_symmetric(p, q, r, s, value);
      const std::size_t perms[8][4] = {{p, q, r, s}, {q, p, r, s}, {p, q, s, r}, {q, p, s, r},
                                       {r, s, p, q}, {s, r, p, q}, {r, s, q, p}, {s, r, q, p}};
      for (const auto& pm : perms) g2_set[d.g2_index(pm[0], pm[1], pm[2], pm[3])] = 1;
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      const std::size_t p = i - 1, q = j - 1;
      if (h1_set[p * n + q] && std::abs(d.one_body(p, q) - value) > kConflictTol)
        throw InputError("FCIDUMP line " + std::to_string(lineno) + ": one-electron integrals not symmetric");
      d.one_body(p, q) = value;
      d.one_body(q, p) = value;
      h1_set[p * n + q] = h1_set[q * n + p] = 1;
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // Orbital energy; not needed to build the Hamiltonian.
    } else {
      throw InputError("FCIDUMP line " + std::to_string(lineno) + ": unrecognised index pattern");
    }
  }
  return d;
}

inline IntegralData load_fcidump(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open FCIDUMP file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_fcidump(ss.str());
}

}  // namespace vqebench
