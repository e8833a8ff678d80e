// vqe-bench: molecule sweeps, data-file management, and comparison tables.
//
// Exit codes: 0 success, 1 usage error, 2 data-file error, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vqebench/vqebench.hpp"

namespace fs = std::filesystem;
using namespace vqebench;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct Args {
  std::string molecule;
  std::vector<std::string> ansatzes;
  std::vector<double> bond_lengths;
  std::uint64_t seed = 0;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> restarts;
  std::string data_dir = "data";
  std::string fixtures_dir = VQEBENCH_FIXTURES_DIR;
  bool force = false;
  bool save = false;
  std::string format;
  std::string kind = "errors";
  std::string output;
  double energy = 0.0;
  std::optional<double> runtime;
  std::optional<std::size_t> n_params;
  int decimals = 6;
};

std::size_t resolve_threads(const std::optional<std::size_t>& flag) {
  if (flag) {
    if (*flag == 0) throw InputError("--threads must be positive");
    return *flag;
  }
  if (const char* env = std::getenv("VQE_BENCH_THREADS"); env && *env) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(env, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != std::string(env).size() || v <= 0) throw InputError("VQE_BENCH_THREADS must be a positive integer");
    return static_cast<std::size_t>(v);
  }
  return 1;
}

fs::path data_path(const Args& a) { return data_file_path(a.data_dir, a.molecule); }

/// Bond lengths with a fixture file, ascending.
std::vector<double> fixture_bonds(const MoleculeSpec& spec) {
  const fs::path dir = spec.fixtures_dir / spec.name;
  if (!fs::is_directory(dir)) throw InputError("no fixtures for molecule '" + spec.name + "' in " + dir.string());
  std::vector<double> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".fcidump") continue;
    try {
      out.push_back(std::stod(e.path().stem().string()));
    } catch (const std::exception&) {
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

MoleculeSpec molecule_spec(const Args& a) {
  MoleculeSpec spec;
  spec.name = a.molecule;
  spec.fixtures_dir = a.fixtures_dir;
  spec.bond_lengths = a.bond_lengths.empty() ? fixture_bonds(spec) : a.bond_lengths;
  return spec;
}

void write_output(const Args& a, const std::string& text) {
  if (a.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(a.output, std::ios::binary);
  if (!out || !(out << text)) throw DataFileError("cannot write " + a.output);
}

int cmd_init(const Args& a) {
  if (a.bond_lengths.empty()) throw InputError("init needs --bond-lengths");
  const auto path = data_path(a);
  initdata(path, a.molecule, a.bond_lengths, a.force);
  std::cout << "initialized " << path.string() << "\n";
  return 0;
}

int cmd_run(const Args& a) {
  for (const auto& n : a.ansatzes)
    if (!is_known_ansatz(n)) throw InputError("unknown ansatz '" + n + "'");
  const auto path = data_path(a);
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  DataFileLock lock(path);
  std::optional<BenchRecord> existing;
  if (fs::exists(path)) existing = read_record(path);

  Args effective = a;
  if (effective.bond_lengths.empty() && existing) effective.bond_lengths = existing->bond_lengths;
  const MoleculeSpec spec = molecule_spec(effective);
  if (existing)
    for (double b : spec.bond_lengths) static_cast<void>(existing->bond_index(b));

  SweepConfig cfg;
  cfg.seed = a.seed;
  cfg.threads = resolve_threads(a.threads);
  cfg.restarts = a.restarts;
  cfg.log = &std::cerr;
  const BenchRecord swept = run_sweep(spec, a.ansatzes, cfg);
  BenchRecord out = swept;
  if (existing) {
    out = *existing;
    merge_record(out, swept);
  }
  write_record_atomic(path, out);

  std::cout << "bond_length,ansatz,energy,error,n_params,runtime\n";
  bool any_failed = false;
  for (std::size_t i = 0; i < swept.bond_lengths.size(); ++i) {
    for (const auto& n : a.ansatzes) {
      const auto& e = swept.energies.at(n)[i];
      const auto& k = swept.n_params.at(n)[i];
      const auto& t = swept.runtimes.at(n)[i];
      any_failed = any_failed || !e;
      std::cout << format_double(swept.bond_lengths[i]) << "," << n << "," << (e ? format_double(*e) : "") << ","
                << (e && swept.fci[i] ? format_double(*e - *swept.fci[i]) : "") << ","
                << (k ? std::to_string(*k) : "") << "," << (t ? format_double(*t) : "") << "\n";
    }
  }
  std::cout.flush();
  std::cerr << "wrote " << path.string() << "\n";
  return any_failed ? kExitNumerical : 0;
}

int cmd_record(const Args& a) {
  if (a.ansatzes.size() != 1) throw InputError("record needs exactly one --ansatz");
  if (a.bond_lengths.size() != 1) throw InputError("record needs exactly one --bond-lengths value");
  if (!std::isfinite(a.energy)) throw InputError("--energy must be finite");
  PointResult p;
  p.energy = a.energy;
  p.runtime = a.runtime;
  p.n_params = a.n_params;
  savedata(data_path(a), a.ansatzes[0], a.bond_lengths[0], p);
  return 0;
}

int cmd_round(const Args& a) {
  const auto path = data_path(a);
  DataFileLock lock(path);
  write_record_atomic(path, rounddata(read_record(path), a.decimals));
  return 0;
}

int cmd_compare(const Args& a) {
  const BenchRecord r = read_record(data_path(a));
  const auto format = parse_output_format(a.format.empty() ? "csv" : a.format);
  write_output(a, emit_comparison(r, parse_compare_kind(a.kind), format, a.ansatzes));
  return 0;
}

int cmd_fci(const Args& a) {
  const MoleculeSpec spec = molecule_spec(a);
  std::optional<DataFileLock> lock;
  std::optional<BenchRecord> record;
  if (a.save) {
    lock.emplace(data_path(a));
    record = read_record(data_path(a));
  }
  std::cout << "bond_length,fci,hf\n";
  for (double b : spec.bond_lengths) {
    const PointProblem p = load_point(spec, b);
    const double hf = hf_energy(p.h, p.n_qubits, p.n_electrons);
    std::cout << format_double(b) << "," << format_double(p.fci) << "," << format_double(hf) << "\n";
    if (record) {
      const std::size_t i = record->bond_index(b);
      record->fci[i] = p.fci;
      record->hf[i] = hf;
    }
  }
  if (record) write_record_atomic(data_path(a), *record);
  return 0;
}

int cmd_dump_hamiltonian(const Args& a) {
  if (a.bond_lengths.size() != 1) throw InputError("dump-hamiltonian needs exactly one --bond-lengths value");
  MoleculeSpec spec;
  spec.name = a.molecule;
  spec.fixtures_dir = a.fixtures_dir;
  const IntegralData d = load_fcidump(spec.fixture_path(a.bond_lengths[0]).string());
  const QubitOperator h = build_qubit_hamiltonian(d);
  if (a.format.empty() || a.format == "text") {
    write_output(a, to_text(h));
    return 0;
  }
  if (a.format != "json") throw InputError("dump-hamiltonian format must be text or json");
  json terms = json::array();
  for (const auto& [p, c] : h.terms())
    terms.push_back({{"pauli", p.is_identity() ? std::string("I") : serialize_pauli_string(p)},
                     {"re", c.real()},
                     {"im", c.imag()}});
  write_output(a, json{{"molecule", a.molecule},
                       {"bond_length", a.bond_lengths[0]},
                       {"n_qubits", d.n_qubits()},
                       {"n_electrons", d.n_electrons},
                       {"terms", terms}}
                      .dump(2) +
                      "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark variational ansatzes on molecular Hamiltonians."};
  app.require_subcommand(1);
  Args a;

  auto add_molecule = [&](CLI::App* c) { c->add_option("--molecule", a.molecule, "Molecule name")->required(); };
  auto add_bonds = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("--bond-lengths", a.bond_lengths, "Comma-separated bond lengths in Angstrom")
                  ->delimiter(',');
    if (required) o->required();
  };
  auto add_data_dir = [&](CLI::App* c) { c->add_option("--data-dir", a.data_dir, "Directory of data files")->capture_default_str(); };
  auto add_fixtures_dir = [&](CLI::App* c) {
    c->add_option("--fixtures-dir", a.fixtures_dir, "Directory of <molecule>/<bond>.fcidump files")->capture_default_str();
  };

  auto* init = app.add_subcommand("init", "Create an empty data file");
  add_molecule(init);
  add_bonds(init, true);
  add_data_dir(init);
  init->add_flag("--force", a.force, "Overwrite an existing file");

  auto* run = app.add_subcommand("run", "Run a sweep and store the results");
  add_molecule(run);
  run->add_option("--ansatz", a.ansatzes, "Ansatz name (repeatable)")->required();
  add_bonds(run, false);
  run->add_option("--seed", a.seed, "Master seed");
  run->add_option("--threads", a.threads, "Worker threads (default: VQE_BENCH_THREADS or 1)");
  run->add_option("--restarts", a.restarts, "Override the restart count of random-init families");
  add_data_dir(run);
  add_fixtures_dir(run);

  auto* record = app.add_subcommand("record", "Store one externally computed energy");
  add_molecule(record);
  record->add_option("--ansatz", a.ansatzes, "Ansatz name (CCSD stores into the ccsd list)")->required();
  add_bonds(record, true);
  record->add_option("--energy", a.energy, "Energy in Hartree")->required();
  record->add_option("--runtime", a.runtime, "Runtime in seconds");
  record->add_option("--n-params", a.n_params, "Number of variational parameters");
  add_data_dir(record);

  auto* round = app.add_subcommand("round", "Round stored energies half-to-even");
  add_molecule(round);
  round->add_option("--decimals", a.decimals, "Decimal places")->capture_default_str()->check(CLI::NonNegativeNumber);
  add_data_dir(round);

  auto* compare = app.add_subcommand("compare", "Emit a comparison table");
  add_molecule(compare);
  compare->add_option("--kind", a.kind, "errors, runtimes or params")->capture_default_str();
  compare->add_option("--format", a.format, "csv or json (default csv)");
  compare->add_option("--ansatz", a.ansatzes, "Restrict to these ansatzes (repeatable)");
  compare->add_option("--output", a.output, "Write to a file instead of stdout");
  add_data_dir(compare);

  auto* fci = app.add_subcommand("fci", "Print FCI and HF reference energies");
  add_molecule(fci);
  add_bonds(fci, false);
  add_fixtures_dir(fci);
  add_data_dir(fci);
  fci->add_flag("--save", a.save, "Also store the references in the data file");

  auto* dump = app.add_subcommand("dump-hamiltonian", "Print the qubit Hamiltonian");
  add_molecule(dump);
  add_bonds(dump, true);
  add_fixtures_dir(dump);
  dump->add_option("--format", a.format, "text or json (default text)");
  dump->add_option("--output", a.output, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*init) return cmd_init(a);
    if (*run) return cmd_run(a);
    if (*record) return cmd_record(a);
    if (*round) return cmd_round(a);
    if (*compare) return cmd_compare(a);
    if (*fci) return cmd_fci(a);
    if (*dump) return cmd_dump_hamiltonian(a);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataFileError& e) {
    std::cerr << "data file error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data file error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
