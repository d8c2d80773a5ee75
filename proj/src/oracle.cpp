#include "fermlap/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "fermlap/laplacian.hpp"
#include "fermlap/potential.hpp"

namespace fermlap {

namespace {

constexpr std::size_t kDenseLimit = 4096;

int sort_with_parity(std::vector<Key>& v) {
  int swaps = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
      std::swap(v[j - 1], v[j]);
      ++swaps;
    }
  return swaps % 2 ? -1 : +1;
}

std::uint64_t checked_power(std::uint64_t base, unsigned exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (unsigned k = 0; k < exp; ++k) {
    if (r > cap / base) throw std::length_error("first-quantized space exceeds the dense limit");
    r *= base;
  }
  return r;
}

double diagonal_potential(std::span<const Key> tuple, const std::vector<double>& one,
                          const std::vector<double>& two, std::uint64_t N) {
  double v = 0.0;
  for (std::size_t a = 0; a < tuple.size(); ++a) {
    v += one[tuple[a]];
    for (std::size_t b = a + 1; b < tuple.size(); ++b) v += two[tuple[a] + tuple[b] * N];
  }
  return v;
}

// Lowest k eigenpairs of a Hermitian sparse matrix by block Krylov
// projection with full reorthogonalization and Rayleigh-Ritz extraction.
template <typename Scalar>
std::pair<Eigen::VectorXd, Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> krylov_lowest(
    const Eigen::SparseMatrix<Scalar>& m, std::size_t k, std::uint64_t seed) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index dim = m.rows();
  const Eigen::Index block = static_cast<Eigen::Index>(k) + 2;
  const Eigen::Index max_basis = std::min<Eigen::Index>(dim, std::max<Eigen::Index>(30 * block, 400));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Mat start(dim, block);
  for (Eigen::Index c = 0; c < block; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) start(r, c) = Scalar(normal(rng));

  Mat basis(dim, 0);
  Mat next = start;
  while (basis.cols() < max_basis) {
    for (int pass = 0; pass < 2; ++pass)
      if (basis.cols() > 0) next -= basis * (basis.adjoint() * next);
    Eigen::HouseholderQR<Mat> qr(next);
    Mat q = qr.householderQ() * Mat::Identity(dim, next.cols());
    const Mat r = qr.matrixQR().template triangularView<Eigen::Upper>();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < r.cols() && c < r.rows(); ++c)
      if (std::abs(r(c, c)) > 1e-10) keep.push_back(c);
    if (keep.empty()) break;
    const Eigen::Index add = std::min<Eigen::Index>(static_cast<Eigen::Index>(keep.size()), max_basis - basis.cols());
    Mat grown(dim, basis.cols() + add);
    grown << basis, q(Eigen::all, std::vector<Eigen::Index>(keep.begin(), keep.begin() + add));
    basis = std::move(grown);
    next = m * basis.rightCols(add);
  }
  const Mat projected = basis.adjoint() * (m * basis);
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (projected + projected.adjoint()));
  const Eigen::Index take = std::min<Eigen::Index>(static_cast<Eigen::Index>(k), eig.eigenvalues().size());
  return {eig.eigenvalues().head(take), basis * eig.eigenvectors().leftCols(take)};
}

}  // namespace

std::optional<Hop> oracle_hop(std::span<const Key> tuple, unsigned particle, unsigned axis, int step, unsigned n,
                              unsigned D) {
  const std::uint64_t size = std::uint64_t{1} << n;
  LatticePoint p = point_from_key(tuple[particle], n, D);
  p.coords[axis] = (p.coords[axis] + size + step) % size;
  const Key moved = interleave_key(p, n, D);
  for (std::size_t b = 0; b < tuple.size(); ++b)
    if (b != particle && tuple[b] == moved) return std::nullopt;
  Hop hop{std::vector<Key>(tuple.begin(), tuple.end()), +1};
  hop.target[particle] = moved;
  hop.sign = sort_with_parity(hop.target);
  return hop;
}

OracleHamiltonian build_oracle(const ProblemSpec& spec) {
  spec.validate();
  FermionBasis basis = enumerate_basis(spec);
  const auto one = one_body_table(spec);
  const auto two = two_body_table(spec);
  const std::uint64_t N = spec.sites();
  const auto dim = static_cast<Eigen::Index>(basis.size());
  std::vector<Eigen::Triplet<double>> lap;
  std::vector<Eigen::Triplet<double>> pot;
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const auto tuple = basis.state(s);
    for (unsigned a = 0; a < spec.A; ++a)
      for (unsigned d = 0; d < spec.D; ++d)
        for (int step : {+1, -1}) {
          const auto hop = oracle_hop(tuple, a, d, step, spec.n, spec.D);
          if (!hop) continue;
          const auto t = basis.index_of(hop->target);
          if (!t) throw std::logic_error("oracle hop left the basis");
          lap.emplace_back(static_cast<int>(*t), static_cast<int>(s), hop->sign);
        }
    if (spec.include_diagonal) lap.emplace_back(static_cast<int>(s), static_cast<int>(s), -2.0 * spec.D * spec.A);
    const double v = diagonal_potential(tuple, one, two, N);
    if (v != 0.0) pot.emplace_back(static_cast<int>(s), static_cast<int>(s), v);
  }
  OracleHamiltonian o{std::move(basis), Eigen::SparseMatrix<double>(dim, dim), Eigen::SparseMatrix<double>(dim, dim), spec};
  o.laplacian.setFromTriplets(lap.begin(), lap.end());
  o.potential.setFromTriplets(pot.begin(), pot.end());
  return o;
}

Eigen::MatrixXd first_quantized_laplacian(const ProblemSpec& spec) {
  const std::uint64_t N = spec.sites();
  const std::uint64_t dim = checked_power(N, spec.A, kDenseLimit);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const std::uint64_t size = spec.axis_size();
  for (std::uint64_t c = 0; c < dim; ++c) {
    std::vector<Key> keys(spec.A);
    std::uint64_t rest = c;
    for (auto& k : keys) {
      k = rest % N;
      rest /= N;
    }
    for (unsigned a = 0; a < spec.A; ++a)
      for (unsigned d = 0; d < spec.D; ++d)
        for (int step : {+1, -1}) {
          LatticePoint p = point_from_key(keys[a], spec.n, spec.D);
          p.coords[d] = (p.coords[d] + size + step) % size;
          auto moved = keys;
          moved[a] = interleave_key(p, spec.n, spec.D);
          std::uint64_t r = 0;
          for (unsigned b = spec.A; b-- > 0;) r = r * N + moved[b];
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += 1.0;
        }
    if (spec.include_diagonal) m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) -= 2.0 * spec.D * spec.A;
  }
  return m;
}

Eigen::MatrixXd slater_isometry(const ProblemSpec& spec, const FermionBasis& basis) {
  const std::uint64_t N = spec.sites();
  const std::uint64_t dim = checked_power(N, spec.A, kDenseLimit);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(basis.size()));
  std::vector<unsigned> perm(spec.A);
  double count = 1.0;
  for (unsigned a = 2; a <= spec.A; ++a) count *= a;
  const double norm = 1.0 / std::sqrt(count);
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const auto tuple = basis.state(s);
    std::iota(perm.begin(), perm.end(), 0U);
    do {
      std::vector<Key> keys(spec.A);
      for (unsigned a = 0; a < spec.A; ++a) keys[a] = tuple[perm[a]];
      int inversions = 0;
      for (unsigned a = 0; a < spec.A; ++a)
        for (unsigned b = a + 1; b < spec.A; ++b) inversions += perm[a] > perm[b];
      std::uint64_t r = 0;
      for (unsigned b = spec.A; b-- > 0;) r = r * N + keys[b];
      w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = (inversions % 2 ? -norm : norm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return w;
}

std::vector<std::uint64_t> representative_indices(const FermionBasis& basis, const ProblemSpec& spec) {
  std::vector<std::uint64_t> out(basis.size());
  for (std::size_t s = 0; s < basis.size(); ++s) out[s] = basis_state_index(basis.state(s), spec.n, spec.D, spec.code);
  return out;
}

SubspaceReport compare_subspace(const PauliSum& op, const Eigen::SparseMatrix<double>& oracle,
                                const FermionBasis& basis, const ProblemSpec& spec, unsigned num_qubits,
                                double tol) {
  if (static_cast<std::size_t>(oracle.rows()) != basis.size() || oracle.rows() != oracle.cols())
    throw std::invalid_argument("compare_subspace: oracle dimension does not match the basis");
  if (num_qubits < spec.base_qubits()) throw std::invalid_argument("compare_subspace: register too small");
  const auto reps = representative_indices(basis, spec);
  std::unordered_map<std::uint64_t, std::size_t> slot;
  for (std::size_t s = 0; s < reps.size(); ++s) slot.emplace(reps[s], s);

  SubspaceReport report;
  std::map<std::pair<std::size_t, std::size_t>, Complex> synth;
  for (const auto& e : matrix_columns(op, num_qubits, reps)) {
    const auto r = slot.find(e.row);
    if (r == slot.end()) {
      ++report.leakage_elements;
      continue;
    }
    synth[{r->second, slot.at(e.col)}] += e.value;
  }
  std::map<std::pair<std::size_t, std::size_t>, double> expected;
  for (int c = 0; c < oracle.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(oracle, c); it; ++it)
      if (it.value() != 0.0) expected[{static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col())}] += it.value();
  std::set<std::pair<std::size_t, std::size_t>> keys;
  for (const auto& [k, v] : synth) keys.insert(k);
  for (const auto& [k, v] : expected) keys.insert(k);
  for (const auto& k : keys) {
    const Complex got = synth.count(k) ? synth.at(k) : Complex{};
    const double want = expected.count(k) ? expected.at(k) : 0.0;
    const double diff = std::abs(got - want);
    ++report.compared;
    report.max_discrepancy = std::max(report.max_discrepancy, diff);
    if (diff > tol) report.discrepancies.push_back({k.first, k.second, got, want});
  }
  return report;
}

SpectralReport penalized_spectrum(const PauliSum& H, unsigned num_qubits, std::span<const std::uint64_t> valid,
                                  std::size_t k, std::uint64_t seed) {
  if (!is_hermitian(H, 1e-10)) throw std::invalid_argument("penalized_spectrum: operator is not Hermitian");
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  if (num_qubits > 24) throw std::length_error("penalized_spectrum: register exceeds the matrix cap");
  k = std::min<std::size_t>(k, dim);
  SpectralReport report;
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  if (dim <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(to_dense(H, num_qubits));
    values = eig.eigenvalues().head(static_cast<Eigen::Index>(k));
    vectors = eig.eigenvectors().leftCols(static_cast<Eigen::Index>(k));
  } else {
    report.dense = false;
    std::tie(values, vectors) = krylov_lowest<Complex>(to_matrix(H, num_qubits), k, seed);
  }
  for (Eigen::Index e = 0; e < values.size(); ++e) {
    double w = 0.0;
    for (std::uint64_t v : valid) w += std::norm(vectors(static_cast<Eigen::Index>(v), e));
    report.eigenvalues.push_back(values(e));
    report.valid_weight.push_back(w);
    if (w >= 0.5) report.valid_eigenvalues.push_back(values(e));
  }
  return report;
}

std::vector<double> lowest_eigenvalues(const Eigen::SparseMatrix<double>& m, std::size_t k) {
  Eigen::VectorXd values;
  if (static_cast<std::size_t>(m.rows()) <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(m)};
    values = eig.eigenvalues().head(std::min<Eigen::Index>(static_cast<Eigen::Index>(k), m.rows()));
  } else {
    values = krylov_lowest<double>(m, k, 0).first;
  }
  return {values.data(), values.data() + values.size()};
}

GapFlowReport gap_flow(const PauliSum& T, const PauliSum& V, unsigned num_qubits,
                       std::span<const std::uint64_t> valid, std::size_t steps, std::size_t levels) {
  if (steps < 2) throw std::invalid_argument("gap_flow: needs at least two schedule points");
  GapFlowReport report;
  for (std::size_t k = 0; k < steps; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(steps - 1);
    const auto spec = penalized_spectrum(T + s * V, num_qubits, valid, std::min(levels, valid.size()));
    GapFlowRow row;
    row.s = s;
    row.levels = spec.valid_eigenvalues;
    if (row.levels.size() < 2) throw std::runtime_error("gap_flow: fewer than two valid-dominant levels");
    if (k == 0) {
      const double scale = std::max(1.0, std::abs(row.levels.back() - row.levels.front()));
      std::size_t g = 1;
      while (g < row.levels.size() && row.levels[g] - row.levels[0] <= 1e-2 * scale) ++g;
      if (g == row.levels.size()) throw std::runtime_error("gap_flow: ground manifold fills all tracked levels");
      report.ground_multiplicity = g;
    }
    const std::size_t g = report.ground_multiplicity;
    row.gap = row.levels[g] - row.levels[g - 1];
    row.lowest_gap = row.levels[1] - row.levels[0];
    if (k == 0) {
      report.free_gap = row.gap;
      report.min_gap = row.gap;
    }
    if (row.gap < report.min_gap) {
      report.min_gap = row.gap;
      report.min_gap_s = s;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_gap_flow_csv(std::ostream& os, const GapFlowReport& r) {
  os << "s,gap,lowest_gap";
  const std::size_t width = r.rows.empty() ? 0 : r.rows.front().levels.size();
  for (std::size_t k = 0; k < width; ++k) os << ",E" << k;
  os << '\n';
  for (const auto& row : r.rows) {
    os << row.s << ',' << row.gap << ',' << row.lowest_gap;
    for (std::size_t k = 0; k < width; ++k) {
      os << ',';
      if (k < row.levels.size()) os << row.levels[k];
    }
    os << '\n';
  }
}

AuditRow audit_instance(unsigned A, unsigned n, unsigned D) {
  ProblemSpec spec;
  spec.A = A;
  spec.n = n;
  spec.D = D;
  spec.mode = SynthesisMode::gadget;
  spec.code = PositionCode::binary;
  const auto sys = gadget_system(spec);
  const PauliSum all = sys.kinetic + sys.penalty.penalty;
  AuditRow row{A, n, D, all.size(), all.max_weight(), sys.layout.size() - spec.base_qubits(), 0};
  std::set<std::pair<unsigned, unsigned>> moves;
  for (const auto& [piece, targets] : relocation_plan(spec))
    for (unsigned j : targets)
      if (j != std::get<0>(piece)) moves.emplace(std::get<0>(piece), j);
  row.relocations = moves.size();
  return row;
}

std::vector<AuditRow> term_count_audit(std::span<const unsigned> As, std::span<const unsigned> ns,
                                       std::span<const unsigned> Ds) {
  std::vector<AuditRow> rows;
  for (unsigned D : Ds)
    for (unsigned n : ns)
      for (unsigned A : As) rows.push_back(audit_instance(A, n, D));
  return rows;
}

void write_audit_csv(std::ostream& os, std::span<const AuditRow> rows) {
  os << "A,n,D,terms,max_weight,ancillas,relocations\n";
  for (const auto& r : rows)
    os << r.A << ',' << r.n << ',' << r.D << ',' << r.terms << ',' << r.max_weight << ',' << r.ancillas << ','
       << r.relocations << '\n';
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need two or more points");
  const double m = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double e = y[k] - (fit.intercept + fit.slope * x[k]);
    ss_res += e * e;
  }
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

void write_coordinate_matrix(std::ostream& os, const PauliSum& s, unsigned num_qubits) {
  if (num_qubits > 20) throw std::length_error("coordinate export capped at 20 qubits");
  std::vector<std::uint64_t> cols(std::size_t{1} << num_qubits);
  std::iota(cols.begin(), cols.end(), std::uint64_t{0});
  const auto old = os.precision(17);
  for (const auto& e : matrix_columns(s, num_qubits, cols))
    os << e.row << ' ' << e.col << ' ' << e.value.real() << ' ' << e.value.imag() << '\n';
  os.precision(old);
}

}  // namespace fermlap
