// Acceptance run: one line per criterion.
#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "fermlap/laplacian.hpp"
#include "fermlap/oracle.hpp"
#include "fermlap/potential.hpp"

using namespace fermlap;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, 0 = none
  std::function<Outcome()> run;
};

std::string num(double v, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

ProblemSpec make_spec(unsigned A, unsigned n, unsigned D) {
  ProblemSpec s;
  s.A = A;
  s.n = n;
  s.D = D;
  return s;
}

std::vector<Qubit> iota_qubits(unsigned count) {
  std::vector<Qubit> q(count);
  std::iota(q.begin(), q.end(), Qubit{0});
  return q;
}

// Value of a diagonal Pauli sum on every basis state of `qubits` qubits.
std::vector<double> diagonal_values(const PauliSum& s, unsigned qubits) {
  std::vector<double> out(std::size_t{1} << qubits, 0.0);
  const auto terms = to_masked(s);
  for (std::uint64_t v = 0; v < out.size(); ++v)
    for (const auto& t : terms) out[v] += ((std::popcount(v & t.z_mask) & 1) ? -1.0 : 1.0) * t.coefficient.real();
  return out;
}

std::uint64_t bits_of(std::uint64_t state, std::span<const Qubit> reg) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < reg.size(); ++k) v |= ((state >> reg[k]) & 1U) << k;
  return v;
}

// Exhaustive ground space of a diagonal penalty: zero set over all 2^q states.
std::vector<std::uint64_t> zero_set(const PauliSum& penalty, unsigned qubits, double* min_value = nullptr) {
  const auto values = diagonal_values(penalty, qubits);
  std::vector<std::uint64_t> zeros;
  double lo = 0.0;
  for (std::uint64_t v = 0; v < values.size(); ++v) {
    lo = std::min(lo, values[v]);
    if (std::abs(values[v]) < 1e-9) zeros.push_back(v);
  }
  if (min_value) *min_value = lo;
  return zeros;
}

// 1. Ring Laplacian exactness.
Outcome ring_exactness() {
  double worst = 0.0;
  for (unsigned n = 2; n <= 4; ++n) {
    const auto reg = iota_qubits(n);
    const auto m = to_dense(brgc_laplacian_1p(n, reg), n);
    const std::uint64_t N = std::uint64_t{1} << n;
    Eigen::MatrixXcd ring = Eigen::MatrixXcd::Zero(N, N);
    for (std::uint64_t x = 0; x < N; ++x)
      for (std::uint64_t y : {(x + 1) % N, (x + N - 1) % N}) ring(brgc_encode(y, n), brgc_encode(x, n)) += 1.0;
    worst = std::max(worst, (m - ring).cwiseAbs().maxCoeff());
  }
  return {worst == 0.0, "n=2..4 max_error=" + num(worst)};
}

// 2. Subspace exactness in inline mode.
Outcome subspace_exactness() {
  std::ostringstream d;
  bool pass = true;
  for (auto [A, n, D] : std::vector<std::tuple<unsigned, unsigned, unsigned>>{
           {2, 2, 1}, {2, 3, 1}, {3, 2, 1}, {2, 2, 2}, {3, 2, 2}, {2, 2, 3}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = make_spec(A, n, D);
    QubitLayout l(A, n, D);
    const auto L = fermionic_laplacian(s, l);
    const auto o = build_oracle(s);
    const auto r = compare_subspace(L, o.laplacian, o.basis, s, s.base_qubits());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = r.max_discrepancy <= 1e-12 && secs < 60.0;
    pass &= ok;
    d << " (" << A << ',' << n << ',' << D << "):" << num(r.max_discrepancy) << '/' << num(secs, 2) << 's';
  }
  return {pass, "max_error/time" + d.str()};
}

// 3. Penalized spectrum convergence.
Outcome penalized_spectrum_check() {
  auto s = make_spec(2, 2, 1);
  const auto o = build_oracle(s);
  const auto exact = lowest_eigenvalues(o.laplacian, 6);
  const std::vector<double> derived{-2, -2, 0, 0, 2, 2};
  double oracle_gap = 0.0;
  for (std::size_t k = 0; k < 6; ++k) oracle_gap = std::max(oracle_gap, std::abs(exact[k] - derived[k]));
  const auto valid = representative_indices(o.basis, s);
  std::vector<double> errors;
  for (double Q : {1e3, 1e4}) {
    s.Q = Q;
    const auto h = assemble_hamiltonian(s);
    const auto r = penalized_spectrum(h.H, 4, valid, 6);
    if (r.valid_eigenvalues.size() != 6) return {false, "fewer than 6 valid-dominant levels at Q=" + num(Q)};
    double err = 0.0;
    for (std::size_t k = 0; k < 6; ++k) err = std::max(err, std::abs(r.valid_eigenvalues[k] - derived[k]));
    errors.push_back(err);
  }
  const double order = std::log10(errors[0] / errors[1]);
  const bool pass = oracle_gap < 1e-12 && errors[0] <= 5e-2 && order >= 1.0 - 1e-2;
  return {pass, "err(Q=1e3)=" + num(errors[0]) + " err(Q=1e4)=" + num(errors[1]) + " order=" + num(order, 4) +
                    " oracle_vs_derived=" + num(oracle_gap)};
}

// 4. Gadget ground spaces by exhaustive enumeration.
Outcome gadget_ground_spaces() {
  std::ostringstream d;
  bool pass = true;
  auto note = [&](const std::string& name, bool ok) {
    pass &= ok;
    d << ' ' << name << (ok ? ":ok" : ":BAD");
  };

  {
    const auto g = swap_gadget(0, 1, 2, 3);
    double lo = 0.0;
    const auto z = zero_set(g.penalty, 4, &lo);
    std::set<std::uint64_t> want;
    for (std::uint64_t a = 0; a < 2; ++a)
      for (std::uint64_t b = 0; b < 2; ++b) want.insert(a | (b << 1) | (b << 2) | (a << 3));
    note("swap", lo > -1e-12 && std::set<std::uint64_t>(z.begin(), z.end()) == want);
  }
  for (unsigned n = 1; n <= 3; ++n) {
    std::vector<Qubit> b = iota_qubits(n), g(n);
    for (unsigned k = 0; k < n; ++k) g[k] = n + k;
    const auto gadget = binary_to_brgc_gadget(b, g);
    double lo = 0.0;
    const auto z = zero_set(gadget.penalty, 2 * n, &lo);
    bool ok = lo > -1e-12 && z.size() == (std::size_t{1} << n);
    for (auto v : z) ok &= bits_of(v, g) == (bits_of(v, b) ^ (bits_of(v, b) >> 1));
    note("b2g(n=" + std::to_string(n) + ")", ok);
  }
  for (auto mode : {ComparatorMode::serial, ComparatorMode::tree})
    for (unsigned m = 1; m <= 4; ++m) {
      QubitLayout l(1, m, 2);
      std::vector<Qubit> a(m), b(m);
      for (unsigned k = 0; k < m; ++k) {
        a[k] = k;
        b[k] = m + k;
      }
      const auto cmp = less_than_comparator(l, a, b, mode);
      double lo = 0.0;
      const auto z = zero_set(cmp.penalty, l.size(), &lo);
      // One zero state per input pair, flag equal to a < b.
      std::set<std::uint64_t> inputs;
      bool ok = lo > -1e-12 && z.size() == (std::size_t{1} << (2 * m));
      for (auto v : z) {
        inputs.insert(v & ((std::uint64_t{1} << (2 * m)) - 1));
        ok &= (((v >> *cmp.output) & 1U) == 1) == (bits_of(v, a) < bits_of(v, b));
      }
      ok &= inputs.size() == z.size();
      note(std::string(mode == ComparatorMode::serial ? "cmp" : "cmp_tree") + "(m=" + std::to_string(m) + ")", ok);
    }
  for (unsigned k = 2; k <= 8; ++k) {
    QubitLayout l(1, 1, k);
    std::vector<int> target(k);
    for (unsigned i = 0; i < k; ++i) target[i] = (i % 3) == 1;
    const auto q = iota_qubits(k);
    const auto tree = reduce_projector_tree(l, q, target);
    double lo = 0.0;
    const auto z = zero_set(tree.penalty, l.size(), &lo);
    std::uint64_t tv = 0;
    for (unsigned i = 0; i < k; ++i) tv |= std::uint64_t(target[i]) << i;
    std::set<std::uint64_t> inputs;
    bool ok = lo > -1e-12 && z.size() == (std::size_t{1} << k);
    for (auto v : z) {
      inputs.insert(v & ((std::uint64_t{1} << k) - 1));
      ok &= (((v >> *tree.output) & 1U) == 0) == ((v & ((std::uint64_t{1} << k) - 1)) == tv);
    }
    ok &= inputs.size() == z.size();
    note("tree(k=" + std::to_string(k) + ")", ok);
  }
  return {pass, d.str().substr(1)};
}

// 5. Gadget/inline equivalence on the penalty kernel.
Outcome gadget_inline_equivalence() {
  auto s = make_spec(2, 2, 1);
  s.mode = SynthesisMode::gadget;
  s.code = PositionCode::binary;
  const auto sys = gadget_system(s);
  const unsigned q = sys.layout.size();
  const auto kernel = diagonal_kernel(sys.penalty.components, iota_qubits(q));

  auto inline_spec = make_spec(2, 2, 1);
  inline_spec.code = PositionCode::binary;
  QubitLayout il(2, 2, 1);
  const auto L = fermionic_laplacian(inline_spec, il);

  const std::uint64_t base_mask = (std::uint64_t{1} << s.base_qubits()) - 1;
  std::map<std::uint64_t, std::uint64_t> full_of;  // base state -> kernel state
  for (auto v : kernel) full_of[v & base_mask] = v;
  std::map<std::pair<std::uint64_t, std::uint64_t>, Complex> eff, want;
  for (const auto& e : matrix_columns(sys.kinetic, q, kernel)) {
    const auto it = full_of.find(e.row & base_mask);
    if (it != full_of.end() && it->second == e.row) eff[{e.row & base_mask, e.col & base_mask}] += e.value;
  }
  std::vector<std::uint64_t> base_states;
  for (const auto& [b, v] : full_of) base_states.push_back(b);
  for (const auto& e : matrix_columns(L, s.base_qubits(), base_states))
    if (full_of.count(e.row)) want[{e.row, e.col}] += e.value;
  double worst = 0.0;
  std::set<std::pair<std::uint64_t, std::uint64_t>> keys;
  for (const auto& [k, v] : eff) keys.insert(k);
  for (const auto& [k, v] : want) keys.insert(k);
  for (const auto& k : keys) {
    const Complex a = eff.count(k) ? eff.at(k) : Complex{};
    const Complex b = want.count(k) ? want.at(k) : Complex{};
    worst = std::max(worst, std::abs(a - b));
  }
  std::size_t nonzero = 0;
  for (const auto& [k, v] : eff) nonzero += std::abs(v) > 1e-12;
  return {kernel.size() == 6 && worst <= 1e-10,
          "kernel=" + std::to_string(kernel.size()) + " qubits=" + std::to_string(q) + " max_error=" + num(worst) +
              " effective_nonzeros=" + std::to_string(nonzero) + " inline_nonzeros=" + std::to_string(want.size())};
}

// 6. Term-count scaling audit.
Outcome scaling_audit() {
  std::ostringstream d;
  bool pass = true;
  for (unsigned D : {1u, 2u}) {
    std::vector<double> x, y;
    for (unsigned n = 2; n <= 8; ++n) {
      x.push_back(n);
      y.push_back(static_cast<double>(audit_instance(2, n, D).terms));
    }
    const auto f = linear_fit(x, y);
    pass &= f.r2 >= 0.99;
    d << " n-fit(A=2,D=" << D << ") R2=" << num(f.r2, 5);
  }
  for (unsigned D : {1u, 2u, 3u}) {
    const unsigned n = D == 1 ? 3 : 2;
    const unsigned top = D == 1 ? 6 : (D == 2 ? 5 : 4);
    std::vector<double> x, y;
    for (unsigned A = 2; A <= top; ++A) {
      x.push_back(A);
      y.push_back(static_cast<double>(audit_instance(A, n, D).terms));
    }
    const auto f = linear_fit(x, y);
    pass &= f.r2 >= 0.99;
    d << " A-fit(n=" << n << ",D=" << D << ") R2=" << num(f.r2, 5);
  }
  std::vector<double> family;
  for (unsigned D = 1; D <= 3; ++D) {
    const auto row = audit_instance(2, 2, D);
    family.push_back(static_cast<double>(row.terms) / (2.0 * 2.0 * std::pow(2.0, D)));
  }
  const double spread = *std::max_element(family.begin(), family.end()) / *std::min_element(family.begin(), family.end());
  pass &= spread <= 2.0;
  d << " D-family c/(A n 2^D)=" << num(family[0]) << ',' << num(family[1]) << ',' << num(family[2])
    << " spread=" << num(spread);
  return {pass, d.str().substr(1)};
}

// 7. Species factors against explicit pair sums.
Outcome potential_factors() {
  // First-quantized configurations x_0 + N x_1 + N^2 x_2 ..., pair table V.
  const unsigned n = 2, D = 1;
  const std::uint64_t N = 4;
  std::vector<double> V(N * N);
  for (std::uint64_t a = 0; a < N; ++a)
    for (std::uint64_t b = 0; b < N; ++b) V[a + b * N] = 1.0 / (1.0 + ring_distance(a, b, N)) + 0.1 * (a + b);
  auto key = [&](std::uint64_t c, unsigned k) { return (c / static_cast<std::uint64_t>(std::pow(N, k))) % N; };

  double worst = 0.0;
  bool factors_ok = true;
  for (unsigned A : {2u, 3u}) {
    auto s = make_spec(A, n, D);
    s.potential.kind = PotentialSpec::Kind::two_body;
    s.potential.builtin = "table";
    s.potential.table = V;
    const auto o = build_oracle(s);
    const auto W = slater_isometry(s, o.basis);
    const auto dim = W.rows();
    Eigen::VectorXd pairs = Eigen::VectorXd::Zero(dim), first = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
      for (unsigned a = 0; a < A; ++a)
        for (unsigned b = a + 1; b < A; ++b) pairs(c) += V[key(c, a) + key(c, b) * N];
      first(c) = V[key(c, 0) + key(c, 1) * N];
    }
    const Eigen::MatrixXd lhs = W.transpose() * pairs.asDiagonal() * W;
    const Eigen::MatrixXd rhs = same_species_factor(A) * (W.transpose() * first.asDiagonal() * W);
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    worst = std::max(worst, (lhs - Eigen::MatrixXd(o.potential)).cwiseAbs().maxCoeff());
    factors_ok &= same_species_factor(A) == A * (A - 1) / 2.0;
  }
  // Two species: Slater vectors of each species, product basis.
  for (auto [An, Ap] : std::vector<std::pair<unsigned, unsigned>>{{1, 1}, {2, 1}, {1, 2}}) {
    const auto sn = make_spec(An, n, D), sp = make_spec(Ap, n, D);
    const auto Wn = slater_isometry(sn, enumerate_basis(sn));
    const auto Wp = slater_isometry(sp, enumerate_basis(sp));
    const Eigen::Index dn = Wn.rows(), dp = Wp.rows();
    Eigen::MatrixXd W(dn * dp, Wn.cols() * Wp.cols());
    for (Eigen::Index i = 0; i < Wn.cols(); ++i)
      for (Eigen::Index j = 0; j < Wp.cols(); ++j)
        for (Eigen::Index cp = 0; cp < dp; ++cp)
          W.col(i * Wp.cols() + j).segment(cp * dn, dn) = Wp(cp, j) * Wn.col(i);
    Eigen::VectorXd cross = Eigen::VectorXd::Zero(dn * dp), first = Eigen::VectorXd::Zero(dn * dp);
    for (Eigen::Index cp = 0; cp < dp; ++cp)
      for (Eigen::Index cn = 0; cn < dn; ++cn) {
        const Eigen::Index c = cn + cp * dn;
        for (unsigned i = 0; i < An; ++i)
          for (unsigned j = 0; j < Ap; ++j) cross(c) += V[key(cn, i) + key(cp, j) * N];
        first(c) = V[key(cn, 0) + key(cp, 0) * N];
      }
    const Eigen::MatrixXd lhs = W.transpose() * cross.asDiagonal() * W;
    const Eigen::MatrixXd rhs = cross_species_factor(An, Ap) * (W.transpose() * first.asDiagonal() * W);
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    factors_ok &= cross_species_factor(An, Ap) == An * Ap;
  }
  return {factors_ok && worst <= 1e-12, "max_error=" + num(worst)};
}

// 8. Hermiticity of every emitted Hamiltonian.
Outcome hermiticity_gate() {
  std::size_t checked = 0, failed = 0;
  auto check = [&](ProblemSpec s) {
    const auto h = assemble_hamiltonian(s);
    ++checked;
    failed += !is_hermitian(h.H);
  };
  for (auto [A, n, D] : std::vector<std::tuple<unsigned, unsigned, unsigned>>{
           {1, 3, 1}, {2, 2, 1}, {2, 3, 1}, {3, 2, 1}, {2, 2, 2}, {3, 2, 2}, {2, 2, 3}}) {
    auto s = make_spec(A, n, D);
    check(s);
    s.potential.kind = PotentialSpec::Kind::one_body;
    s.potential.builtin = "harmonic";
    s.potential.center.assign(D, 1);
    check(s);
    if (A >= 2 && n * D <= 4) {
      s.potential.kind = PotentialSpec::Kind::two_body;
      s.potential.builtin = "coulomb-softened";
      check(s);
    }
  }
  for (auto [A, n, D] : std::vector<std::tuple<unsigned, unsigned, unsigned>>{
           {1, 2, 1}, {2, 2, 1}, {3, 2, 1}, {2, 3, 1}, {2, 2, 2}, {3, 2, 2}, {2, 2, 3}, {4, 3, 1}}) {
    auto s = make_spec(A, n, D);
    s.mode = SynthesisMode::gadget;
    s.code = PositionCode::binary;
    check(s);
    s.potential.kind = PotentialSpec::Kind::one_body;
    s.potential.builtin = "well";
    s.potential.center.assign(D, 0);
    check(s);
  }
  return {failed == 0, std::to_string(checked) + " Hamiltonians, " + std::to_string(failed) + " non-Hermitian"};
}

// 9. Gap flow with a weak single-site well.
Outcome gap_flow_check() {
  auto s = make_spec(2, 2, 1);
  s.Q = 1e3;
  s.potential.kind = PotentialSpec::Kind::one_body;
  s.potential.builtin = "well";
  s.potential.center = {0};
  s.potential.strength = 0.2;
  const auto h = assemble_hamiltonian(s);
  const auto o = build_oracle(s);
  const auto valid = representative_indices(o.basis, s);
  const auto r = gap_flow(h.kinetic + h.Q * h.penalty, h.potential, 4, valid, 11, 6);
  std::cout << "  gap flow table (ground multiplicity " << r.ground_multiplicity << ")\n";
  std::cout << "    s      gap       E0        E1        E2\n";
  for (const auto& row : r.rows) {
    char line[128];
    std::snprintf(line, sizeof line, "    %.1f  %8.5f  %8.5f  %8.5f  %8.5f\n", row.s, row.gap, row.levels[0],
                  row.levels[1], row.levels[2]);
    std::cout << line;
  }
  const double ratio = r.min_gap / r.free_gap;
  return {std::abs(1.0 - ratio) <= 0.25,
          "free_gap=" + num(r.free_gap, 5) + " min_gap=" + num(r.min_gap, 5) + " at s=" + num(r.min_gap_s) +
              " ratio=" + num(ratio, 4)};
}

}  // namespace

int main(int argc, char** argv) {
  // Criteria listed here still print FAIL; they only stop failing the exit code.
  std::vector<int> known;
  CLI::App app{"acceptance run"};
  app.add_option("--known-failures", known, "criteria whose failure is documented")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  const std::vector<Criterion> criteria{
      {1, "ring Laplacian exactness", 1.0, ring_exactness},
      {2, "inline subspace exactness", 0.0, subspace_exactness},
      {3, "penalized spectrum", 10.0, penalized_spectrum_check},
      {4, "gadget ground spaces", 60.0, gadget_ground_spaces},
      {5, "gadget/inline equivalence", 0.0, gadget_inline_equivalence},
      {6, "scaling audit", 60.0, scaling_audit},
      {7, "potential factors", 0.0, potential_factors},
      {8, "hermiticity gate", 0.0, hermiticity_gate},
      {9, "gap flow", 10.0, gap_flow_check},
  };
  int failures = 0, unexpected = 0;
  std::vector<int> known_hit;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit == 0.0 || secs < c.time_limit;
    const bool pass = out.pass && in_time;
    failures += !pass;
    if (!pass) {
      if (std::find(known.begin(), known.end(), c.id) != known.end())
        known_hit.push_back(c.id);
      else
        ++unexpected;
    }
    std::cout << "criterion " << c.id << " [" << c.title << "]: " << (pass ? "PASS" : "FAIL") << "  " << out.detail
              << "  (" << num(secs, 3) << " s" << (in_time ? "" : ", over time limit") << ")" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail");
  if (!known_hit.empty()) {
    std::cout << " (known:";
    for (int id : known_hit) std::cout << ' ' << id;
    std::cout << ')';
  }
  std::cout << '\n';
  return unexpected == 0 ? 0 : 1;
}
