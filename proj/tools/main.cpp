#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "config.hpp"
#include "fermlap/laplacian.hpp"
#include "fermlap/oracle.hpp"
#include "fermlap/potential.hpp"

namespace fs = std::filesystem;
using namespace fermlap;
using namespace fermlap::cli;

namespace {

constexpr int kPass = 0;
constexpr int kVerifyFail = 1;
constexpr int kConfigError = 2;
constexpr int kResourceError = 3;

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw ResourceError("cannot write " + (dir / name).string());
  return out;
}

std::string tuple_text(std::span<const Key> t) {
  std::string s = "(";
  for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + std::to_string(t[k]);
  return s + ")";
}

// Flags shared by every subcommand; each maps onto a config key.
struct Flags {
  std::string config;
  std::map<std::string, std::string> values;
  bool include_diagonal = false;
  bool export_matrix = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "flat key=value config file");
    for (const char* key : {"A", "n", "D", "mode", "code", "comparator", "Q", "potential", "potential-kind",
                            "strength", "softening", "center", "kinetic-coefficient", "sweep", "out-dir", "seed",
                            "cap-qubits", "cap-basis", "fault", "spectral-tol", "gap-steps"})
      app->add_option(std::string("--") + key, values[key]);
    app->add_flag("--include-diagonal", include_diagonal, "add the -2D diagonal per particle");
    app->add_flag("--export-matrix", export_matrix, "write the coordinate matrix of H");
  }

  Settings merged(const CLI::App* app) const {
    Settings s = config.empty() ? Settings{} : read_config(config);
    for (const auto& [flag, value] : values)
      if (app->count("--" + flag)) {
        std::string key = flag;
        std::replace(key.begin(), key.end(), '-', '_');
        s[key] = value;
      }
    if (include_diagonal) s["include_diagonal"] = "true";
    if (export_matrix) s["export_matrix"] = "true";
    return s;
  }
};

void write_manifest(std::ostream& os, const ProblemSpec& spec, const SystemHamiltonian& h) {
  os << "mode=" << to_string(spec.mode) << '\n'
     << "code=" << to_string(spec.code) << '\n'
     << "A=" << spec.A << "\nn=" << spec.n << "\nD=" << spec.D << '\n'
     << "qubits=" << h.layout.size() << '\n'
     << "base_qubits=" << spec.base_qubits() << '\n'
     << "ancillas=" << h.layout.size() - spec.base_qubits() << '\n'
     << "Q=" << fmt(h.Q) << '\n'
     << "kinetic_terms=" << h.kinetic.size() << '\n'
     << "potential_terms=" << h.potential.size() << '\n'
     << "penalty_terms=" << h.penalty.size() << '\n'
     << "terms=" << h.H.size() << '\n'
     << "max_weight=" << h.H.max_weight() << '\n'
     << "hermitian=" << (is_hermitian(h.H) ? "yes" : "no") << '\n';
  for (const auto& [w, count] : h.H.weight_histogram()) os << "terms_weight_" << w << '=' << count << '\n';
}

int run_synth(const RunConfig& rc) {
  const auto& spec = rc.spec;
  if (spec.mode == SynthesisMode::inline_ && spec.base_qubits() > spec.cap_qubits)
    throw ResourceError("inline synthesis needs " + std::to_string(spec.base_qubits()) +
                        " base qubits, above cap_qubits=" + std::to_string(spec.cap_qubits));
  const auto h = assemble_hamiltonian(spec, {.flip_relocation_sign = rc.flip_relocation_sign});
  {
    auto out = open_out(rc.out_dir, "terms.txt");
    write_term_list(out, h.H);
  }
  {
    auto out = open_out(rc.out_dir, "manifest.txt");
    write_manifest(out, spec, h);
  }
  {
    auto out = open_out(rc.out_dir, "layout.txt");
    h.layout.dump(out);
  }
  {
    auto out = open_out(rc.out_dir, "gadgets.txt");
    write_gadget_report(out, h.reports);
  }
  if (rc.export_matrix) {
    if (h.layout.size() > std::min(20U, spec.cap_qubits))
      throw ResourceError("matrix export needs " + std::to_string(h.layout.size()) + " qubits");
    auto out = open_out(rc.out_dir, "matrix.coo");
    write_coordinate_matrix(out, h.H, h.layout.size());
  }
  std::cout << "synth " << to_string(spec.mode) << " A=" << spec.A << " n=" << spec.n << " D=" << spec.D
            << " qubits=" << h.layout.size() << " terms=" << h.H.size() << " max_weight=" << h.H.max_weight()
            << '\n';
  if (!is_hermitian(h.H)) {
    std::cerr << "emitted Hamiltonian fails the adjoint check\n";
    return kVerifyFail;
  }
  return kPass;
}

int run_verify(const RunConfig& rc) {
  const auto& spec = rc.spec;
  if (spec.mode != SynthesisMode::inline_) throw ConfigError("verify runs in inline mode");
  if (spec.base_qubits() > spec.cap_qubits)
    throw ResourceError("verify needs " + std::to_string(spec.base_qubits()) + " qubits, above cap_qubits=" +
                        std::to_string(spec.cap_qubits));
  if (binomial(spec.sites(), spec.A) > spec.cap_basis) throw ResourceError("fermion basis exceeds cap_basis");

  const auto h = assemble_hamiltonian(spec, {.flip_relocation_sign = rc.flip_relocation_sign});
  const auto o = build_oracle(spec);
  const unsigned qubits = h.layout.size();
  bool pass = true;
  std::ostringstream report;
  std::ostringstream kv;
  kv << "A=" << spec.A << "\nn=" << spec.n << "\nD=" << spec.D << "\ncode=" << to_string(spec.code)
     << "\nQ=" << fmt(h.Q) << '\n';

  const bool hermitian = is_hermitian(h.H);
  pass &= hermitian;
  report << "hermitian: " << (hermitian ? "yes" : "NO") << '\n';
  kv << "hermitian=" << (hermitian ? "yes" : "no") << '\n';

  const auto sub = compare_subspace(h.kinetic + h.potential, o.matrix(), o.basis, spec, qubits, 1e-10);
  const bool exact = sub.discrepancies.empty();
  pass &= exact;
  report << "subspace: compared=" << sub.compared << " max_discrepancy=" << sub.max_discrepancy
         << " leakage_elements=" << sub.leakage_elements << (exact ? " ok" : " FAIL") << '\n';
  kv << "subspace_max_discrepancy=" << fmt(sub.max_discrepancy) << "\nsubspace_pass=" << exact << '\n';
  if (!exact) {
    auto out = open_out(rc.out_dir, "discrepancies.txt");
    out << "row col synthesized expected\n";
    for (const auto& d : sub.discrepancies)
      out << tuple_text(o.basis.state(d.row)) << ' ' << tuple_text(o.basis.state(d.col)) << ' '
          << fmt(d.synthesized.real()) << ' ' << fmt(d.expected) << '\n';
    std::cerr << sub.discrepancies.size() << " subspace discrepancies, first: "
              << tuple_text(o.basis.state(sub.discrepancies[0].row)) << " <- "
              << tuple_text(o.basis.state(sub.discrepancies[0].col)) << '\n';
  }

  const auto valid = representative_indices(o.basis, spec);
  const std::size_t k = std::min<std::size_t>(o.basis.size(), 8);
  const auto exact_levels = lowest_eigenvalues(o.matrix(), k);
  const auto spec_report = penalized_spectrum(h.H, qubits, valid, k, spec.seed);
  double err = 0.0;
  bool levels_ok = spec_report.valid_eigenvalues.size() == k;
  for (std::size_t e = 0; levels_ok && e < k; ++e)
    err = std::max(err, std::abs(spec_report.valid_eigenvalues[e] - exact_levels[e]));
  const bool spectral = levels_ok && err <= rc.spectral_tol;
  pass &= spectral;
  report << "spectrum: levels=" << k << " max_error=" << err << " tol=" << rc.spectral_tol
         << (spectral ? " ok" : " FAIL") << '\n';
  kv << "spectrum_max_error=" << fmt(err) << "\nspectrum_pass=" << spectral << '\n';
  {
    auto out = open_out(rc.out_dir, "spectrum.csv");
    out << "k,eigenvalue,valid_weight\n";
    for (std::size_t e = 0; e < spec_report.eigenvalues.size(); ++e)
      out << e << ',' << fmt(spec_report.eigenvalues[e]) << ',' << fmt(spec_report.valid_weight[e]) << '\n';
  }

  if (spec.potential.kind != PotentialSpec::Kind::none) {
    try {
      const auto flow = gap_flow(h.kinetic + h.Q * h.penalty, h.potential, qubits, valid, rc.gap_steps, k);
      auto out = open_out(rc.out_dir, "gap_flow.csv");
      write_gap_flow_csv(out, flow);
      report << "gap_flow: free_gap=" << flow.free_gap << " min_gap=" << flow.min_gap
             << " at s=" << flow.min_gap_s << '\n';
      kv << "free_gap=" << fmt(flow.free_gap) << "\nmin_gap=" << fmt(flow.min_gap) << '\n';
    } catch (const std::runtime_error& e) {
      report << "gap_flow: skipped (" << e.what() << ")\n";
    }
  }

  if (!rc.sweep.empty()) {
    const auto r = parse_sweep(rc.sweep, spec);
    const auto rows = term_count_audit(r.A, r.n, r.D);
    auto out = open_out(rc.out_dir, "audit.csv");
    write_audit_csv(out, rows);
    report << "sweep: " << rows.size() << " rows in audit.csv\n";
  }

  report << (pass ? "PASS" : "FAIL") << '\n';
  kv << "pass=" << pass << '\n';
  {
    auto out = open_out(rc.out_dir, "verify_report.txt");
    out << report.str();
  }
  {
    auto out = open_out(rc.out_dir, "verify.kv");
    out << kv.str();
  }
  std::cout << report.str();
  return pass ? kPass : kVerifyFail;
}

int run_audit(const RunConfig& rc) {
  const auto r = parse_sweep(rc.sweep.empty() ? "A=1..3;n=2..4" : rc.sweep, rc.spec);
  const auto rows = term_count_audit(r.A, r.n, r.D);
  auto out = open_out(rc.out_dir, "audit.csv");
  write_audit_csv(out, rows);
  write_audit_csv(std::cout, rows);
  return kPass;
}

int run_layout(const RunConfig& rc) {
  if (rc.spec.mode == SynthesisMode::gadget) {
    gadget_system(rc.spec).layout.dump(std::cout);
  } else {
    QubitLayout(rc.spec.A, rc.spec.n, rc.spec.D).dump(std::cout);
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fermlap: fermionic lattice Laplacian synthesis and verification"};
  app.require_subcommand(1, 1);
  struct Command {
    CLI::App* app;
    Flags flags;
    SynthesisMode mode_default;
    int (*run)(const RunConfig&);
  };
  std::vector<Command> commands;
  commands.reserve(4);
  commands.push_back({app.add_subcommand("synth", "emit term list, manifest and layout"), {}, SynthesisMode::gadget, run_synth});
  commands.push_back({app.add_subcommand("verify", "compare against the brute-force oracle"), {}, SynthesisMode::inline_, run_verify});
  commands.push_back({app.add_subcommand("audit", "term-count scaling table"), {}, SynthesisMode::gadget, run_audit});
  commands.push_back({app.add_subcommand("layout", "print the qubit layout"), {}, SynthesisMode::gadget, run_layout});
  for (auto& c : commands) c.flags.attach(c.app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  for (auto& c : commands) {
    if (!c.app->parsed()) continue;
    try {
      const auto rc = make_run_config(c.flags.merged(c.app), c.mode_default);
      return c.run(rc);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kConfigError;
    } catch (const std::invalid_argument& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kConfigError;
    } catch (const ResourceError& e) {
      std::cerr << "resource error: " << e.what() << '\n';
      return kResourceError;
    } catch (const std::length_error& e) {
      std::cerr << "resource error: " << e.what() << '\n';
      return kResourceError;
    } catch (const std::bad_alloc&) {
      std::cerr << "resource error: out of memory\n";
      return kResourceError;
    }
  }
  return kConfigError;
}
