#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

namespace fermlap {

using Qubit = std::uint32_t;
using Complex = std::complex<double>;

enum class Pauli : std::uint8_t { X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);

/// Tensor product of single-qubit Pauli letters, identity implied on every
/// qubit not listed. Letters are kept sorted by qubit index.
class PauliString {
 public:
  using Letter = std::pair<Qubit, Pauli>;

  PauliString() = default;
  explicit PauliString(std::vector<Letter> letters);

  static PauliString single(Qubit q, Pauli p) { return PauliString({{q, p}}); }

  std::span<const Letter> letters() const { return letters_; }
  std::size_t weight() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  Qubit max_qubit() const { return letters_.empty() ? 0 : letters_.back().first; }

  /// Canonical order: qubit index sequence first, letters second.
  friend bool operator<(const PauliString& a, const PauliString& b);
  friend bool operator==(const PauliString& a, const PauliString& b) = default;

  std::string to_string() const;
  std::size_t hash() const;

 private:
  std::vector<Letter> letters_;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& s) const { return s.hash(); }
};

/// Product of two strings: returns phase and the resulting string.
std::pair<Complex, PauliString> multiply(const PauliString& a, const PauliString& b);

struct PauliTerm {
  Complex coefficient;
  PauliString string;
};

/// Sum of weighted Pauli strings kept in canonical form: one entry per
/// distinct string, coefficients with magnitude below the pruning threshold
/// dropped.
class PauliSum {
 public:
  static constexpr double kZeroThreshold = 1e-14;

  PauliSum() = default;
  PauliSum(Complex c, PauliString s);

  static PauliSum identity(Complex c = 1.0) { return {c, PauliString{}}; }
  static PauliSum single(Qubit q, Pauli p, Complex c = 1.0) {
    return {c, PauliString::single(q, p)};
  }

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Terms in canonical order.
  std::vector<PauliTerm> terms() const;
  Complex coefficient(const PauliString& s) const;

  void add(const PauliString& s, Complex c);
  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(Complex c);

  std::size_t max_weight() const;
  /// Highest qubit index touched plus one (0 for pure identity / empty sums).
  Qubit qubit_span() const;
  /// Histogram of term counts keyed by Pauli weight.
  std::map<std::size_t, std::size_t> weight_histogram() const;
  /// Sum of coefficient magnitudes; an upper bound on the spectral norm.
  double one_norm() const;

  PauliSum adjoint() const;

  const std::unordered_map<PauliString, Complex, PauliStringHash>& raw() const {
    return terms_;
  }

 private:
  std::unordered_map<PauliString, Complex, PauliStringHash> terms_;
};

PauliSum operator+(PauliSum a, const PauliSum& b);
PauliSum operator-(PauliSum a, const PauliSum& b);
PauliSum operator*(Complex c, PauliSum a);
PauliSum operator*(const PauliSum& a, const PauliSum& b);
PauliSum multiply(const PauliSum& a, const PauliSum& b);

/// Equality of canonical forms up to an absolute coefficient tolerance.
bool approx_equal(const PauliSum& a, const PauliSum& b, double tol = 1e-12);
bool is_hermitian(const PauliSum& s, double tol = 1e-12);

/// Computational-basis projector: product of P^bit over the assigned qubits.
struct Projector {
  std::map<Qubit, int> assignments;
};

/// Expanded product of (1 +- Z)/2 factors; 2^k terms of magnitude 2^-k.
PauliSum expand_projector(const Projector& p);
/// Projector onto `value` written over `qubits`, bit k of value on qubits[k].
PauliSum projector_on(std::span<const Qubit> qubits, std::uint64_t value);

/// Exchange operator chi_{i,j} = (II + XX + YY + ZZ) / 2.
PauliSum swap_sum(Qubit i, Qubit j);

/// Term list text format: `re im X0 Z3`, identity written as `I`.
void write_term_list(std::ostream& os, const PauliSum& s);
PauliSum read_term_list(std::istream& is);

/// Compact x/z mask form of a term for fast basis-state action. Requires all
/// qubits < 64.
struct MaskedTerm {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  int y_count = 0;
  Complex coefficient;
};

std::vector<MaskedTerm> to_masked(const PauliSum& s);

/// Sparse 2^m x 2^m realization; qubit 0 is the least significant bit of the
/// basis index.
Eigen::SparseMatrix<Complex> to_matrix(const PauliSum& s, unsigned num_qubits);
Eigen::MatrixXcd to_dense(const PauliSum& s, unsigned num_qubits);

struct MatrixElement {
  std::uint64_t row = 0;
  std::uint64_t col = 0;
  Complex value;
};

/// Nonzero elements <row|s|col> for the listed columns only, duplicates
/// summed. Works up to 64 qubits since nothing of size 2^m is allocated.
std::vector<MatrixElement> matrix_columns(const PauliSum& s, unsigned num_qubits,
                                          std::span<const std::uint64_t> cols);

}  // namespace fermlap
