#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "fermlap/laplacian.hpp"
#include "fermlap/oracle.hpp"
#include "fermlap/potential.hpp"

using namespace fermlap;

namespace {

ProblemSpec make_spec(unsigned A, unsigned n, unsigned D) {
  ProblemSpec s;
  s.A = A;
  s.n = n;
  s.D = D;
  return s;
}

}  // namespace

TEST_CASE("oracle hops") {
  const std::vector<Key> t{1, 2};
  // Blocked by the neighbour.
  CHECK_FALSE(oracle_hop(t, 0, 0, +1, 2, 1).has_value());
  const auto down = oracle_hop(t, 0, 0, -1, 2, 1);
  REQUIRE(down);
  CHECK(down->target == std::vector<Key>{0, 2});
  CHECK(down->sign == +1);

  // Wrapping past a neighbour reorders the tuple.
  const std::vector<Key> w{1, 3};
  const auto wrap = oracle_hop(w, 1, 0, +1, 2, 1);
  REQUIRE(wrap);
  CHECK(wrap->target == std::vector<Key>{0, 1});
  CHECK(wrap->sign == -1);

  // Three particles, the last wraps past two: even permutation.
  const std::vector<Key> w3{1, 2, 3};
  const auto wrap3 = oracle_hop(w3, 2, 0, +1, 2, 1);
  REQUIRE(wrap3);
  CHECK(wrap3->target == std::vector<Key>{0, 1, 2});
  CHECK(wrap3->sign == +1);

  // Two dimensions: (1,0) -> (2,0) moves key 1 to key 4 past keys 2, 3.
  const std::vector<Key> two_d{1, 2, 3, 5};
  const auto carry = oracle_hop(two_d, 0, 0, +1, 2, 2);
  REQUIRE(carry);
  CHECK(carry->target == std::vector<Key>{2, 3, 4, 5});
  CHECK(carry->sign == +1);
  const std::vector<Key> two_d3{1, 2, 5};
  CHECK(oracle_hop(two_d3, 0, 0, +1, 2, 2)->sign == -1);
}

TEST_CASE("oracle matrix shape") {
  const auto o = build_oracle(make_spec(2, 2, 1));
  CHECK(o.basis.size() == 6);
  const Eigen::MatrixXd m(o.laplacian);
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  // (0,1) couples to (0,2) and, via the wrap, to (1,3) with a minus sign.
  const std::vector<Key> a{0, 1}, b{0, 2}, c{1, 3}, d{0, 3}, e{1, 2};
  CHECK(m(*o.basis.index_of(b), *o.basis.index_of(a)) == 1.0);
  CHECK(m(*o.basis.index_of(c), *o.basis.index_of(a)) == -1.0);
  CHECK(m(*o.basis.index_of(d), *o.basis.index_of(c)) == 1.0);
  CHECK(m(*o.basis.index_of(a), *o.basis.index_of(d)) == 0.0);
  CHECK(m(*o.basis.index_of(e), *o.basis.index_of(a)) == 0.0);
  CHECK(Eigen::MatrixXd(m.cwiseAbs()).sum() == 2 * 8);
}

TEST_CASE("oracle agrees with antisymmetrized first quantization") {
  for (auto [A, n, D] : std::vector<std::tuple<unsigned, unsigned, unsigned>>{
           {2, 2, 1}, {3, 2, 1}, {2, 3, 1}, {2, 1, 2}, {2, 2, 2}, {3, 1, 2}, {2, 1, 3}}) {
    auto s = make_spec(A, n, D);
    s.include_diagonal = (A + n + D) % 2 == 0;
    const auto o = build_oracle(s);
    const Eigen::MatrixXd L1 = first_quantized_laplacian(s);
    const auto W = slater_isometry(s, o.basis);
    CHECK((W.transpose() * W - Eigen::MatrixXd::Identity(W.cols(), W.cols())).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::MatrixXd proj = W.transpose() * L1 * W;
    CHECK((proj - Eigen::MatrixXd(o.laplacian)).cwiseAbs().maxCoeff() < 1e-12);
    // The antisymmetric subspace is invariant.
    CHECK((L1 * W - W * proj).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("first-quantized size guard") {
  CHECK_THROWS_AS(first_quantized_laplacian(make_spec(4, 4, 1)), std::length_error);
}

TEST_CASE("subspace comparison reports mismatches") {
  const auto s = make_spec(2, 2, 1);
  const auto o = build_oracle(s);
  QubitLayout l(2, 2, 1);
  const auto L = fermionic_laplacian(s, l);
  auto r = compare_subspace(L, o.laplacian, o.basis, s, 4);
  CHECK(r.max_discrepancy == 0.0);
  CHECK(r.compared > 0);

  r = compare_subspace(L + PauliSum::identity(0.5), o.laplacian, o.basis, s, 4);
  CHECK(r.max_discrepancy == doctest::Approx(0.5));
  CHECK(r.discrepancies.size() == 6);
  CHECK_THROWS_AS(compare_subspace(L, o.laplacian, o.basis, s, 3), std::invalid_argument);
}

TEST_CASE("oracle potential is the configuration energy") {
  auto s = make_spec(2, 2, 1);
  s.potential.kind = PotentialSpec::Kind::one_body;
  s.potential.builtin = "table";
  s.potential.table = {1, 2, 4, 8};
  const auto o = build_oracle(s);
  const std::vector<Key> t{1, 3};
  const auto k = *o.basis.index_of(t);
  CHECK(o.potential.coeff(k, k) == 10.0);
}

TEST_CASE("lowest eigenvalues of the free oracle") {
  // Two fermions on a ring of four: single-particle energies 2cos(2pi m/4).
  const auto o = build_oracle(make_spec(2, 2, 1));
  const auto e = lowest_eigenvalues(o.laplacian, 6);
  REQUIRE(e.size() == 6);
  CHECK(e.back() == doctest::Approx(2.0));
  CHECK(e.front() == doctest::Approx(-2.0));
}

TEST_CASE("penalized spectrum approaches the oracle") {
  auto s = make_spec(2, 2, 1);
  const auto o = build_oracle(s);
  const auto exact = lowest_eigenvalues(o.laplacian, 6);
  const auto valid = representative_indices(o.basis, s);
  double prev = 1e9;
  for (double Q : {10.0, 100.0, 1000.0}) {
    s.Q = Q;
    const auto h = assemble_hamiltonian(s);
    const auto r = penalized_spectrum(h.H, 4, valid, 6);
    CHECK(r.dense);
    REQUIRE(r.valid_eigenvalues.size() == 6);
    double err = 0.0;
    for (std::size_t k = 0; k < 6; ++k) err = std::max(err, std::abs(r.valid_eigenvalues[k] - exact[k]));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("Krylov path agrees with the exact spectrum") {
  // 13 qubits forces the iterative solver. Independent spins: each qubit
  // contributes -sqrt(a^2 + b^2) or +sqrt(a^2 + b^2).
  PauliSum h;
  std::vector<double> w;
  for (Qubit q = 0; q < 13; ++q) {
    const double a = 1.0 + 0.1 * q, b = 0.3 + 0.05 * q;
    h += PauliSum::single(q, Pauli::Z, a) + PauliSum::single(q, Pauli::X, b);
    w.push_back(std::hypot(a, b));
  }
  const std::vector<std::uint64_t> none;
  const auto big = penalized_spectrum(h, 13, none, 4, 1);
  CHECK_FALSE(big.dense);
  const double ground = -std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> want{ground, ground + 2 * w[0], ground + 2 * w[1], ground + 2 * w[2]};
  REQUIRE(big.eigenvalues.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(big.eigenvalues[k] == doctest::Approx(want[k]).epsilon(1e-8));
}

TEST_CASE("gap flow on a small instance") {
  auto s = make_spec(2, 2, 1);
  s.Q = 1000.0;
  s.potential.kind = PotentialSpec::Kind::one_body;
  s.potential.builtin = "well";
  s.potential.center = {0};
  const auto h = assemble_hamiltonian(s);
  const auto o = build_oracle(s);
  const auto valid = representative_indices(o.basis, s);
  const auto T = h.kinetic + h.Q * h.penalty;
  const auto r = gap_flow(T, h.potential, 4, valid, 5, 6);
  REQUIRE(r.rows.size() == 5);
  CHECK(r.ground_multiplicity == 2);
  CHECK(r.free_gap == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(r.min_gap <= r.free_gap);
  std::ostringstream os;
  write_gap_flow_csv(os, r);
  const auto csv = os.str();
  CHECK(csv.rfind("s,gap,lowest_gap,E0", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK_THROWS_AS(gap_flow(T, h.potential, 4, valid, 1), std::invalid_argument);
}

TEST_CASE("term-count audit") {
  const std::vector<unsigned> As{2, 3}, ns{2}, Ds{1};
  const auto rows = term_count_audit(As, ns, Ds);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ancillas == 21 - 4);
  CHECK(rows[0].relocations == 2);
  CHECK(rows[1].terms > rows[0].terms);
  for (const auto& r : rows) CHECK(r.max_weight <= 4);
  std::ostringstream os;
  write_audit_csv(os, rows);
  CHECK(os.str().rfind("A,n,D,terms,max_weight,ancillas,relocations\n2,2,1,", 0) == 0);
}

TEST_CASE("linear fit") {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  const std::vector<double> bent{1, 4, 9, 16};
  CHECK(linear_fit(x, bent).r2 < 1.0);
  const std::vector<double> flat{1, 1};
  CHECK_THROWS_AS(linear_fit(flat, flat), std::invalid_argument);
}

TEST_CASE("coordinate export") {
  std::ostringstream os;
  write_coordinate_matrix(os, PauliSum::single(0, Pauli::X), 1);
  CHECK(os.str() == "1 0 1 0\n0 1 1 0\n");
}
