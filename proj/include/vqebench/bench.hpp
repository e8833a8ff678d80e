#pragma once

// Benchmark data files, molecule sweeps, and comparison tables.
//
// A data file is `<data-dir>/<molecule>.json`: sorted keys, 2-space indent,
// every per-ansatz list aligned with `bond_lengths` (nulls for missing points).

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "vqebench/ansatz_adaptive.hpp"
#include "vqebench/ansatz_fixed.hpp"
#include "vqebench/ansatz_layered.hpp"
#include "vqebench/errors.hpp"
#include "vqebench/fcidump.hpp"
#include "vqebench/hamiltonian.hpp"
#include "vqebench/vqe.hpp"

#ifndef VQEBENCH_VERSION
#define VQEBENCH_VERSION "0.0.0"
#endif

namespace vqebench {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr double kBondTolerance = 1e-9;

using Series = std::vector<std::optional<double>>;
using CountSeries = std::vector<std::optional<std::size_t>>;

struct RunMetadata {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string version = VQEBENCH_VERSION;
  std::string timestamp;

  bool operator==(const RunMetadata&) const = default;
};

struct BenchRecord {
  int schema_version = kSchemaVersion;
  std::string molecule;
  std::vector<double> bond_lengths;
  std::map<std::string, Series> energies;
  Series fci;
  Series hf;
  std::optional<Series> ccsd;
  std::map<std::string, Series> runtimes;
  std::map<std::string, CountSeries> n_params;
  std::map<std::string, std::vector<json>> traces;  // adaptive families only; null for missing points
  RunMetadata metadata;

  bool operator==(const BenchRecord&) const = default;

  /// Index of `bond` in bond_lengths; throws InputError when absent.
  [[nodiscard]] std::size_t bond_index(double bond) const {
    for (std::size_t i = 0; i < bond_lengths.size(); ++i)
      if (std::abs(bond_lengths[i] - bond) <= kBondTolerance) return i;
    throw InputError("bond length " + std::to_string(bond) + " is not in the record for " + molecule);
  }
};

inline BenchRecord make_record(std::string molecule, std::vector<double> bond_lengths) {
  if (molecule.empty()) throw InputError("molecule name is empty");
  if (bond_lengths.empty()) throw InputError("no bond lengths given");
  for (std::size_t i = 0; i < bond_lengths.size(); ++i) {
    if (!(bond_lengths[i] > 0.0) || !std::isfinite(bond_lengths[i])) throw InputError("bond lengths must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(bond_lengths[i] - bond_lengths[j]) <= kBondTolerance) throw InputError("duplicate bond length");
  }
  BenchRecord r;
  r.molecule = std::move(molecule);
  r.bond_lengths = std::move(bond_lengths);
  r.fci.assign(r.bond_lengths.size(), std::nullopt);
  r.hf.assign(r.bond_lengths.size(), std::nullopt);
  return r;
}

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---- JSON mapping ----

namespace detail {

template <class T>
json series_to_json(const std::vector<std::optional<T>>& s) {
  json a = json::array();
  for (const auto& v : s) a.push_back(v ? json(*v) : json(nullptr));
  return a;
}

template <class T>
std::vector<std::optional<T>> series_from_json(const json& j, std::size_t expected, const std::string& what) {
  if (!j.is_array()) throw DataFileError(what + " must be a list");
  if (j.size() != expected) throw DataFileError(what + " has " + std::to_string(j.size()) + " entries, expected " +
                                                std::to_string(expected));
  std::vector<std::optional<T>> out;
  for (const auto& v : j) {
    if (v.is_null()) {
      out.emplace_back(std::nullopt);
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw DataFileError(what + " holds a non-numeric entry");
      out.emplace_back(v.get<double>());
    } else {
      if (!v.is_number_unsigned()) throw DataFileError(what + " holds a non-count entry");
      out.emplace_back(v.get<T>());
    }
  }
  return out;
}

template <class T>
json series_map_to_json(const std::map<std::string, std::vector<std::optional<T>>>& m) {
  json o = json::object();
  for (const auto& [k, s] : m) o[k] = series_to_json(s);
  return o;
}

template <class T>
std::map<std::string, std::vector<std::optional<T>>> series_map_from_json(const json& j, std::size_t expected,
                                                                         const std::string& what) {
  if (!j.is_object()) throw DataFileError(what + " must be an object");
  std::map<std::string, std::vector<std::optional<T>>> out;
  for (const auto& [k, v] : j.items()) out[k] = series_from_json<T>(v, expected, what + "." + k);
  return out;
}

inline const json& require(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw DataFileError(std::string("data file is missing key '") + key + "'");
  return *it;
}

}  // namespace detail

inline json record_to_json(const BenchRecord& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["molecule"] = r.molecule;
  j["bond_lengths"] = r.bond_lengths;
  j["energies"] = detail::series_map_to_json(r.energies);
  j["fci"] = detail::series_to_json(r.fci);
  j["hf"] = detail::series_to_json(r.hf);
  if (r.ccsd) j["ccsd"] = detail::series_to_json(*r.ccsd);
  j["runtimes"] = detail::series_map_to_json(r.runtimes);
  j["n_params"] = detail::series_map_to_json(r.n_params);
  json traces = json::object();
  for (const auto& [k, v] : r.traces) traces[k] = v;
  j["traces"] = traces;
  j["metadata"] = {{"seed", r.metadata.seed},
                   {"threads", r.metadata.threads},
                   {"version", r.metadata.version},
                   {"timestamp", r.metadata.timestamp}};
  return j;
}

/// Validates and converts a parsed data file. Throws DataFileError on any
/// schema violation, including misaligned lists.
inline BenchRecord record_from_json(const json& j) {
  if (!j.is_object()) throw DataFileError("data file root must be an object");
  BenchRecord r;
  const json& version = detail::require(j, "schema_version");
  if (!version.is_number_integer()) throw DataFileError("schema_version must be an integer");
  r.schema_version = version.get<int>();
  if (r.schema_version != kSchemaVersion)
    throw DataFileError("unsupported schema_version " + std::to_string(r.schema_version));
  const json& molecule = detail::require(j, "molecule");
  if (!molecule.is_string()) throw DataFileError("molecule must be a string");
  r.molecule = molecule.get<std::string>();
  const json& bonds = detail::require(j, "bond_lengths");
  if (!bonds.is_array()) throw DataFileError("bond_lengths must be a list");
  for (const auto& b : bonds) {
    if (!b.is_number()) throw DataFileError("bond_lengths holds a non-numeric entry");
    r.bond_lengths.push_back(b.get<double>());
  }
  const std::size_t n = r.bond_lengths.size();
  r.energies = detail::series_map_from_json<double>(detail::require(j, "energies"), n, "energies");
  r.fci = detail::series_from_json<double>(detail::require(j, "fci"), n, "fci");
  r.hf = detail::series_from_json<double>(detail::require(j, "hf"), n, "hf");
  if (const auto it = j.find("ccsd"); it != j.end()) r.ccsd = detail::series_from_json<double>(*it, n, "ccsd");
  r.runtimes = detail::series_map_from_json<double>(detail::require(j, "runtimes"), n, "runtimes");
  r.n_params = detail::series_map_from_json<std::size_t>(detail::require(j, "n_params"), n, "n_params");
  const json& traces = detail::require(j, "traces");
  if (!traces.is_object()) throw DataFileError("traces must be an object");
  for (const auto& [k, v] : traces.items()) {
    if (!v.is_array() || v.size() != n) throw DataFileError("traces." + k + " must be a list aligned with bond_lengths");
    r.traces[k] = v.get<std::vector<json>>();
  }
  const json& meta = detail::require(j, "metadata");
  if (!meta.is_object()) throw DataFileError("metadata must be an object");
  try {
    r.metadata.seed = detail::require(meta, "seed").get<std::uint64_t>();
    r.metadata.threads = detail::require(meta, "threads").get<std::size_t>();
    r.metadata.version = detail::require(meta, "version").get<std::string>();
    r.metadata.timestamp = detail::require(meta, "timestamp").get<std::string>();
  } catch (const json::exception& e) {
    throw DataFileError(std::string("malformed metadata: ") + e.what());
  }
  return r;
}

inline std::string serialize_record(const BenchRecord& r) { return record_to_json(r).dump(2) + "\n"; }

inline BenchRecord parse_record(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataFileError(std::string("data file is not valid JSON: ") + e.what());
  }
  return record_from_json(j);
}

// ---- files ----

inline std::filesystem::path data_file_path(const std::filesystem::path& data_dir, const std::string& molecule) {
  return data_dir / (molecule + ".json");
}

/// Advisory lock: `<file>.lock` created exclusively, removed on destruction.
class DataFileLock {
 public:
  explicit DataFileLock(std::filesystem::path file) : path_(file.string() + ".lock") {
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
      if (errno == EEXIST)
        throw DataFileError("data file is locked by another process (" + path_.string() + " exists)");
      throw DataFileError("cannot create lock file " + path_.string());
    }
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] const auto written = ::write(fd, pid.data(), pid.size());
    ::close(fd);
  }
  DataFileLock(const DataFileLock&) = delete;
  DataFileLock& operator=(const DataFileLock&) = delete;
  ~DataFileLock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }

 private:
  std::filesystem::path path_;
};

inline BenchRecord read_record(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFileError("cannot read data file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_record(ss.str());
  } catch (const DataFileError& e) {
    throw DataFileError(path.string() + ": " + e.what());
  }
}

/// Writes to a sibling temporary file, flushes it, and renames it over `path`.
inline void write_record_atomic(const std::filesystem::path& path, const BenchRecord& r) {
  const std::string text = serialize_record(r);
  const std::filesystem::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  const int fd = ::open(tmp.c_str(), O_CREAT | O_TRUNC | O_WRONLY, 0644);
  if (fd < 0) throw DataFileError("cannot write " + tmp.string());
  std::size_t done = 0;
  while (done < text.size()) {
    const auto n = ::write(fd, text.data() + done, text.size() - done);
    if (n <= 0) {
      ::close(fd);
      ::unlink(tmp.c_str());
      throw DataFileError("short write to " + tmp.string());
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    ::unlink(tmp.c_str());
    throw DataFileError("cannot flush " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    ::unlink(tmp.c_str());
    throw DataFileError("cannot replace " + path.string() + ": " + ec.message());
  }
}

/// Creates the skeleton data file. Refuses to replace an existing file
/// unless `force`.
inline BenchRecord initdata(const std::filesystem::path& path, const std::string& molecule,
                            std::vector<double> bond_lengths, bool force = false) {
  BenchRecord r = make_record(molecule, std::move(bond_lengths));
  r.metadata.timestamp = utc_timestamp();
  if (!path.parent_path().empty()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw DataFileError("cannot create directory " + path.parent_path().string());
  }
  DataFileLock lock(path);
  if (std::filesystem::exists(path) && !force)
    throw DataFileError(path.string() + " already exists (use --force to overwrite)");
  write_record_atomic(path, r);
  return r;
}

/// One ansatz result at one bond length.
struct PointResult {
  std::optional<double> energy;
  std::optional<double> runtime;
  std::optional<std::size_t> n_params;
  std::optional<json> trace;
};

namespace detail {

template <class T>
std::vector<std::optional<T>>& slot_list(std::map<std::string, std::vector<std::optional<T>>>& m, const std::string& key,
                                         std::size_t n) {
  auto& list = m[key];
  if (list.empty()) list.assign(n, std::nullopt);
  return list;
}

}  // namespace detail

/// The name under which an externally supplied CCSD energy is stored.
inline constexpr const char* kCcsdName = "CCSD";

/// Updates the aligned slots for (ansatz, bond) in memory. Absent fields of
/// `p` leave the existing slot untouched.
inline void store_point(BenchRecord& r, const std::string& ansatz, double bond, const PointResult& p) {
  if (ansatz.empty()) throw InputError("ansatz name is empty");
  const std::size_t i = r.bond_index(bond);
  const std::size_t n = r.bond_lengths.size();
  if (ansatz == kCcsdName) {
    if (!r.ccsd) r.ccsd = Series(n, std::nullopt);
    if (p.energy) (*r.ccsd)[i] = p.energy;
    return;
  }
  if (p.energy) detail::slot_list(r.energies, ansatz, n)[i] = p.energy;
  if (p.runtime) detail::slot_list(r.runtimes, ansatz, n)[i] = p.runtime;
  if (p.n_params) detail::slot_list(r.n_params, ansatz, n)[i] = p.n_params;
  if (p.trace) {
    auto& list = r.traces[ansatz];
    if (list.empty()) list.assign(n, json(nullptr));
    list[i] = *p.trace;
  }
}

/// Read-modify-write of one point under the file lock. A malformed
/// existing file is reported and left untouched.
inline BenchRecord savedata(const std::filesystem::path& path, const std::string& ansatz, double bond,
                            const PointResult& p) {
  DataFileLock lock(path);
  BenchRecord r = read_record(path);
  store_point(r, ansatz, bond, p);
  write_record_atomic(path, r);
  return r;
}

/// Round half to even at `decimals` places.
inline double round_half_even(double v, int decimals) {
  if (decimals < 0) throw InputError("decimals must be non-negative");
  if (!std::isfinite(v)) return v;
  const double scale = std::pow(10.0, decimals);
  return std::nearbyint(v * scale) / scale;
}

/// Rounds every stored energy (ansatz, FCI, HF, CCSD). Runtimes are kept.
inline BenchRecord rounddata(BenchRecord r, int decimals) {
  auto round_series = [decimals](Series& s) {
    for (auto& v : s)
      if (v) v = round_half_even(*v, decimals);
  };
  if (decimals < 0) throw InputError("decimals must be non-negative");
  for (auto& [_, s] : r.energies) round_series(s);
  round_series(r.fci);
  round_series(r.hf);
  if (r.ccsd) round_series(*r.ccsd);
  return r;
}

// ---- ansatz registry ----

struct PointProblem {
  QubitOperator h;
  std::size_t n_qubits = 0;
  std::size_t n_electrons = 0;
  double fci = 0.0;
};

struct AnsatzRunOptions {
  std::uint64_t seed = 0;
  std::optional<std::size_t> restarts;  // overrides the family default
  OptimizerConfig optimizer;
};

inline const std::vector<std::string>& registered_ansatz_names() {
  static const std::vector<std::string> names = {"UCCSD", "UCCSD0", "1-UpCCGSD", "2-UpCCGSD", "QUCC",       "HEA",
                                                 "LDCA",  "BRC",    "ADAPT",     "qubit-ADAPT", "QCC"};
  return names;
}

inline constexpr std::size_t kLdcaCycles = 2;

namespace detail {

inline std::optional<std::size_t> upccgsd_order(const std::string& name) {
  static const std::regex re(R"(^([1-9][0-9]*)-UpCCGSD$)");
  std::smatch m;
  if (!std::regex_match(name, m, re)) return std::nullopt;
  return std::stoul(m[1].str());
}

inline json trace_to_json(const AdaptiveTrace& t) {
  json its = json::array();
  for (const auto& it : t.iterations)
    its.push_back({{"operator", it.label},
                   {"gradient_norm", it.gradient_norm},
                   {"energy", it.energy},
                   {"n_params", it.n_params},
                   {"wall_time", it.wall_time}});
  return {{"initial_energy", t.initial_energy},
          {"iterations", its},
          {"final_gradient_norm", t.final_gradient_norm},
          {"converged", t.converged},
          {"truncated", t.truncated}};
}

}  // namespace detail

/// True for the fixed names above and any `<k>-UpCCGSD` with k >= 1.
inline bool is_known_ansatz(const std::string& name) {
  const auto& names = registered_ansatz_names();
  return std::find(names.begin(), names.end(), name) != names.end() || detail::upccgsd_order(name).has_value();
}

/// Builds and optimizes the named ansatz. Energy, parameter count, and wall
/// time are always filled; adaptive families also return their trace.
inline PointResult run_ansatz(const std::string& name, const PointProblem& p, const AnsatzRunOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = p.n_qubits, ne = p.n_electrons;
  const std::uint64_t hf = hf_state_index(n, ne);
  PointResult out;
  auto fixed = [&](const AnsatzBuild& b) {
    VqeOptions v;
    v.seed = opts.seed;
    v.restarts = opts.restarts;
    v.optimizer = opts.optimizer;
    const auto r = run_vqe(b, p.h, v);
    out.energy = r.energy;
    out.n_params = b.n_params();
  };
  auto adaptive = [&](const AdaptiveResult& r) {
    out.energy = r.energy;
    out.n_params = r.ansatz.n_params();
    out.trace = detail::trace_to_json(r.trace);
  };

  if (name == "UCCSD") {
    fixed(build_uccsd_singlet(n, ne));
  } else if (name == "UCCSD0") {
    fixed(build_uccsd0(n, ne));
  } else if (const auto k = detail::upccgsd_order(name)) {
    fixed(build_kupccgsd(n, ne, *k));
  } else if (name == "QUCC") {
    fixed(build_qucc(n, ne));
  } else if (name == "LDCA") {
    fixed(build_ldca(n, kLdcaCycles, hf));
  } else if (name == "BRC") {
    fixed(build_brc_closed_shell(n, ne));
  } else if (name == "HEA") {
    LayerGrowthOptions g;
    g.seed = opts.seed;
    g.optimizer = opts.optimizer;
    if (opts.restarts) g.restarts = *opts.restarts;
    const auto r = run_hea_layer_growth(p.h, n, hf, p.fci, g);
    out.energy = r.best.energy;
    out.n_params = build_hea(n, r.depth, hf).n_params();
  } else if (name == "ADAPT") {
    AdaptOptions a;
    a.optimizer = opts.optimizer;
    adaptive(adapt_vqe(p.h, n, ne, build_fermionic_pool(n, ne), a));
  } else if (name == "qubit-ADAPT") {
    AdaptOptions a;
    a.optimizer = opts.optimizer;
    adaptive(qubit_adapt_vqe(p.h, n, ne, build_qubit_pool(build_fermionic_pool(n, ne), n), a));
  } else if (name == "QCC") {
    QccOptions q;
    q.optimizer = opts.optimizer;
    q.reference_energy = p.fci;
    adaptive(qcc_optimize(p.h, n, ne, as_qcc_pool(build_qubit_pool(build_fermionic_pool(n, ne), n)), q));
  } else {
    throw InputError("unknown ansatz '" + name + "'");
  }
  out.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// ---- sweeps ----

struct MoleculeSpec {
  std::string name;
  std::vector<double> bond_lengths;
  std::filesystem::path fixtures_dir = VQEBENCH_FIXTURES_DIR;

  [[nodiscard]] std::filesystem::path fixture_path(double bond) const {
    return fixtures_dir / name / (format_double(bond) + ".fcidump");
  }
};

struct SweepConfig {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::optional<std::size_t> restarts;
  OptimizerConfig optimizer;
  std::ostream* log = nullptr;  // diagnostics for failed points
};

/// Loads the fixture at `bond` and computes the FCI reference.
inline PointProblem load_point(const MoleculeSpec& spec, double bond) {
  const IntegralData d = load_fcidump(spec.fixture_path(bond).string());
  PointProblem p;
  p.h = build_qubit_hamiltonian(d);
  p.n_qubits = d.n_qubits();
  p.n_electrons = d.n_electrons;
  p.fci = exact_ground_energy(p.h, p.n_qubits, Sector{d.n_electrons, d.ms2});
  return p;
}

/// Runs every ansatz at every bond length. Bond-length points run in
/// parallel; a failing point is stored as nulls and logged, and the sweep
/// continues.
inline BenchRecord run_sweep(const MoleculeSpec& spec, const std::vector<std::string>& ansatzes,
                             const SweepConfig& cfg = {}) {
  for (const auto& a : ansatzes)
    if (!is_known_ansatz(a)) throw InputError("unknown ansatz '" + a + "'");
  BenchRecord r = make_record(spec.name, spec.bond_lengths);
  r.metadata.seed = cfg.seed;
  r.metadata.threads = cfg.threads;
  r.metadata.timestamp = utc_timestamp();
  const std::size_t n = spec.bond_lengths.size();
  std::vector<std::map<std::string, PointResult>> results(n);
  std::vector<std::vector<std::string>> diagnostics(n);

  detail::parallel_for(n, cfg.threads, [&](std::size_t i) {
    const double bond = spec.bond_lengths[i];
    PointProblem p;
    try {
      p = load_point(spec, bond);
      r.fci[i] = p.fci;
      r.hf[i] = hf_energy(p.h, p.n_qubits, p.n_electrons);
    } catch (const std::exception& e) {
      diagnostics[i].push_back(spec.name + " @ " + format_double(bond) + ": " + e.what());
      return;
    }
    for (const auto& a : ansatzes) {
      AnsatzRunOptions o;
      o.seed = derive_seed(cfg.seed, a + "@" + format_double(bond));
      o.restarts = cfg.restarts;
      o.optimizer = cfg.optimizer;
      try {
        results[i][a] = run_ansatz(a, p, o);
      } catch (const std::exception& e) {
        diagnostics[i].push_back(spec.name + " @ " + format_double(bond) + " " + a + ": " + e.what());
      }
    }
  });

  for (const auto& a : ansatzes) {
    r.energies[a].assign(n, std::nullopt);
    r.runtimes[a].assign(n, std::nullopt);
    r.n_params[a].assign(n, std::nullopt);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [a, pr] : results[i]) store_point(r, a, spec.bond_lengths[i], pr);
    if (cfg.log)
      for (const auto& d : diagnostics[i]) *cfg.log << "point failed: " << d << "\n";
  }
  return r;
}

/// Copies every series of `src` into `dst` for matching bond lengths.
/// Per-ansatz slots are overwritten only where `src` has a value.
inline void merge_record(BenchRecord& dst, const BenchRecord& src) {
  if (dst.molecule != src.molecule) throw InputError("cannot merge records of different molecules");
  std::set<std::string> names;
  for (const auto& [a, _] : src.energies) names.insert(a);
  for (const auto& [a, _] : src.n_params) names.insert(a);
  for (std::size_t i = 0; i < src.bond_lengths.size(); ++i) {
    const double bond = src.bond_lengths[i];
    const std::size_t j = dst.bond_index(bond);
    if (src.fci[i]) dst.fci[j] = src.fci[i];
    if (src.hf[i]) dst.hf[j] = src.hf[i];
    for (const auto& a : names) {
      PointResult p;
      if (auto it = src.energies.find(a); it != src.energies.end()) p.energy = it->second[i];
      if (auto it = src.runtimes.find(a); it != src.runtimes.end()) p.runtime = it->second[i];
      if (auto it = src.n_params.find(a); it != src.n_params.end()) p.n_params = it->second[i];
      if (auto it = src.traces.find(a); it != src.traces.end() && !it->second[i].is_null()) p.trace = it->second[i];
      store_point(dst, a, bond, p);
    }
  }
  dst.metadata = src.metadata;
}

// ---- comparison tables ----

enum class CompareKind { Errors, Runtimes, Params };
enum class OutputFormat { Csv, Json };

inline constexpr const char* kBandLowerColumn = "chem_acc_lower";
inline constexpr const char* kBandUpperColumn = "chem_acc_upper";

struct ComparisonTable {
  CompareKind kind = CompareKind::Errors;
  std::vector<std::string> columns;  // first column is bond_length
  std::vector<std::vector<std::optional<double>>> rows;
};

inline CompareKind parse_compare_kind(const std::string& s) {
  if (s == "errors") return CompareKind::Errors;
  if (s == "runtimes") return CompareKind::Runtimes;
  if (s == "params") return CompareKind::Params;
  throw InputError("unknown comparison kind '" + s + "' (errors, runtimes, params)");
}

inline OutputFormat parse_output_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw InputError("unknown format '" + s + "' (csv, json)");
}

inline const char* to_string(CompareKind k) {
  switch (k) {
    case CompareKind::Errors: return "errors";
    case CompareKind::Runtimes: return "runtimes";
    case CompareKind::Params: return "params";
  }
  return "";
}

/// Rows per bond length, one column per ansatz in sorted order. `only`
/// restricts the ansatz columns when non-empty.
inline ComparisonTable comparison_table(const BenchRecord& r, CompareKind kind,
                                        const std::vector<std::string>& only = {}) {
  ComparisonTable t;
  t.kind = kind;
  std::map<std::string, Series> source;
  if (kind == CompareKind::Errors) {
    source = r.energies;
    if (r.ccsd) source[kCcsdName] = *r.ccsd;
  } else if (kind == CompareKind::Runtimes) {
    source = r.runtimes;
  } else {
    for (const auto& [a, s] : r.n_params) {
      Series d;
      for (const auto& v : s) d.push_back(v ? std::optional<double>(static_cast<double>(*v)) : std::nullopt);
      source[a] = d;
    }
  }
  if (!only.empty()) {
    std::map<std::string, Series> kept;
    for (const auto& a : only) {
      const auto it = source.find(a);
      if (it == source.end()) throw InputError("no " + std::string(to_string(kind)) + " data for ansatz '" + a + "'");
      kept.insert(*it);
    }
    source = std::move(kept);
  }
  if (kind == CompareKind::Errors)
    for (std::size_t i = 0; i < r.bond_lengths.size(); ++i)
      if (!r.fci[i]) throw DataFileError("FCI reference missing at bond length " + format_double(r.bond_lengths[i]));

  t.columns.push_back("bond_length");
  for (const auto& [a, _] : source) t.columns.push_back(a);
  if (kind == CompareKind::Errors) {
    t.columns.push_back(kBandLowerColumn);
    t.columns.push_back(kBandUpperColumn);
  }
  for (std::size_t i = 0; i < r.bond_lengths.size(); ++i) {
    std::vector<std::optional<double>> row{r.bond_lengths[i]};
    for (const auto& [_, s] : source) {
      if (!s[i]) {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(kind == CompareKind::Errors ? *s[i] - *r.fci[i] : *s[i]);
      }
    }
    if (kind == CompareKind::Errors) {
      row.emplace_back(-kChemicalAccuracy);
      row.emplace_back(kChemicalAccuracy);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// RFC-4180 field quoting.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string emit_table(const ComparisonTable& t, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + csv_field(t.columns[c]);
    out += "\r\n";
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ",";
        if (row[c]) out += format_double(*row[c]);
      }
      out += "\r\n";
    }
    return out;
  }
  json rows = json::array();
  for (const auto& row : t.rows) {
    json jr = json::array();
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!row[c]) {
        jr.push_back(nullptr);
      } else if (t.kind == CompareKind::Params && c > 0) {
        jr.push_back(static_cast<std::size_t>(*row[c]));
      } else {
        jr.push_back(*row[c]);
      }
    }
    rows.push_back(jr);
  }
  return json{{"kind", to_string(t.kind)}, {"columns", t.columns}, {"rows", rows}}.dump(2) + "\n";
}

inline std::string emit_comparison(const BenchRecord& r, CompareKind kind, OutputFormat format,
                                   const std::vector<std::string>& only = {}) {
  return emit_table(comparison_table(r, kind, only), format);
}

}  // namespace vqebench
