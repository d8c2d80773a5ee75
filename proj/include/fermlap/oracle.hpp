#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <vector>

#include "fermlap/encoding.hpp"
#include "fermlap/pauli.hpp"

namespace fermlap {

/// Brute-force antisymmetric lattice Hamiltonian on ordered key tuples.
struct OracleHamiltonian {
  FermionBasis basis;
  Eigen::SparseMatrix<double> laplacian;  // includes -2DA when include_diagonal
  Eigen::SparseMatrix<double> potential;  // diagonal
  ProblemSpec spec;

  Eigen::SparseMatrix<double> matrix() const { return spec.kinetic_coefficient * laplacian + potential; }
};

OracleHamiltonian build_oracle(const ProblemSpec& spec);

/// Sign and target of one hop from an ordered tuple: nullopt on collision.
struct Hop {
  std::vector<Key> target;
  int sign = +1;
};
std::optional<Hop> oracle_hop(std::span<const Key> tuple, unsigned particle, unsigned axis, int step,
                              unsigned n, unsigned D);

/// First-quantized distinguishable-particle torus Laplacian on all N^A
/// configurations; index = sum_a key_a N^a.
Eigen::MatrixXd first_quantized_laplacian(const ProblemSpec& spec);
/// Columns are the normalized Slater vectors of the ordered tuples of `basis`.
Eigen::MatrixXd slater_isometry(const ProblemSpec& spec, const FermionBasis& basis);

struct Discrepancy {
  std::size_t row = 0;  // oracle basis indices
  std::size_t col = 0;
  Complex synthesized;
  double expected = 0.0;
};

struct SubspaceReport {
  double max_discrepancy = 0.0;
  std::vector<Discrepancy> discrepancies;
  /// Nonzero elements from valid representatives into invalid states.
  std::size_t leakage_elements = 0;
  std::size_t compared = 0;
};

/// Compares <t|op|s> on every pair of valid representatives against the
/// oracle matrix. Columns are evaluated directly, so `num_qubits` may
/// exceed what fits in a dense matrix.
SubspaceReport compare_subspace(const PauliSum& op, const Eigen::SparseMatrix<double>& oracle,
                                const FermionBasis& basis, const ProblemSpec& spec, unsigned num_qubits,
                                double tol = 1e-12);

/// Basis indices of the valid representatives in the spec's code.
std::vector<std::uint64_t> representative_indices(const FermionBasis& basis, const ProblemSpec& spec);

struct SpectralReport {
  std::vector<double> eigenvalues;
  std::vector<double> valid_weight;  // per eigenvalue
  std::vector<double> valid_eigenvalues;  // those with valid_weight >= 0.5
  bool dense = true;
};

/// Lowest k eigenpairs of a Hermitian Pauli sum on num_qubits qubits and the
/// weight of each eigenvector on the listed valid basis states. Dense below
/// dimension 4096, block Krylov above.
SpectralReport penalized_spectrum(const PauliSum& H, unsigned num_qubits, std::span<const std::uint64_t> valid,
                                  std::size_t k, std::uint64_t seed = 0);

/// Lowest k eigenvalues of a real symmetric sparse matrix.
std::vector<double> lowest_eigenvalues(const Eigen::SparseMatrix<double>& m, std::size_t k);

struct GapFlowRow {
  double s = 0.0;
  std::vector<double> levels;  // lowest valid-dominant levels
  double gap = 0.0;            // above the free ground manifold
  double lowest_gap = 0.0;     // levels[1] - levels[0]
};

struct GapFlowReport {
  std::vector<GapFlowRow> rows;
  std::size_t ground_multiplicity = 1;
  double free_gap = 0.0;
  double min_gap = 0.0;
  double min_gap_s = 0.0;
};

/// Spectra of T + s V for s = 0, 1/(steps-1), ..., 1 on the valid-dominant
/// sector. The tracked gap separates the ground manifold of T from the next
/// level; its multiplicity is fixed at s = 0, counting levels within 1% of
/// the tracked spectral width as degenerate (penalty leakage splits exact
/// degeneracies by O(1/Q)).
GapFlowReport gap_flow(const PauliSum& T, const PauliSum& V, unsigned num_qubits,
                       std::span<const std::uint64_t> valid, std::size_t steps, std::size_t levels = 8);
void write_gap_flow_csv(std::ostream& os, const GapFlowReport& r);

struct AuditRow {
  unsigned A = 0, n = 0, D = 0;
  std::size_t terms = 0;
  std::size_t max_weight = 0;
  std::size_t ancillas = 0;
  std::size_t relocations = 0;
};

AuditRow audit_instance(unsigned A, unsigned n, unsigned D);
std::vector<AuditRow> term_count_audit(std::span<const unsigned> As, std::span<const unsigned> ns,
                                       std::span<const unsigned> Ds);
void write_audit_csv(std::ostream& os, std::span<const AuditRow> rows);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Coordinate export: `row col re im` per nonzero.
void write_coordinate_matrix(std::ostream& os, const PauliSum& s, unsigned num_qubits);

}  // namespace fermlap
