#include "fermlap/transform.hpp"

#include <cmath>
#include <map>

namespace fermlap {

namespace {

PauliString string_from_masks(std::uint64_t x_mask, std::uint64_t z_mask,
                              std::span<const Qubit> reg) {
  std::vector<PauliString::Letter> letters;
  for (std::size_t k = 0; k < reg.size(); ++k) {
    const bool x = (x_mask >> k) & 1U;
    const bool z = (z_mask >> k) & 1U;
    if (x && z)
      letters.emplace_back(reg[k], Pauli::Y);
    else if (x)
      letters.emplace_back(reg[k], Pauli::X);
    else if (z)
      letters.emplace_back(reg[k], Pauli::Z);
  }
  return PauliString(std::move(letters));
}

// Coefficients of X^f Z^z components from a table g[x] = <x^f|M|x>; a string
// with y Y-letters equals i^y X^f Z^z, hence the (-i)^y correction.
void emit_flip_group(std::uint64_t flip, std::vector<Complex>& table,
                     std::span<const Qubit> reg, PauliSum& out) {
  walsh_hadamard(std::span<Complex>(table));
  const double norm = 1.0 / static_cast<double>(table.size());
  for (std::uint64_t z = 0; z < table.size(); ++z) {
    if (std::abs(table[z]) * norm <= PauliSum::kZeroThreshold) continue;
    Complex c = table[z] * norm;
    switch (std::popcount(flip & z) % 4) {
      case 1: c *= Complex(0, -1); break;
      case 2: c *= -1.0; break;
      case 3: c *= Complex(0, 1); break;
      default: break;
    }
    out.add(string_from_masks(flip, z, reg), c);
  }
}

}  // namespace

PauliSum diagonal_to_zsum(std::span<const double> values, std::span<const Qubit> reg) {
  if (!std::has_single_bit(values.size()))
    throw std::invalid_argument("diagonal_to_zsum: table length must be a power of two");
  if (values.size() != (std::size_t{1} << reg.size()))
    throw std::invalid_argument("diagonal_to_zsum: table length does not match register width");
  std::vector<double> coeff(values.begin(), values.end());
  walsh_hadamard(std::span<double>(coeff));
  const double norm = 1.0 / static_cast<double>(coeff.size());
  PauliSum out;
  for (std::uint64_t z = 0; z < coeff.size(); ++z)
    if (std::abs(coeff[z] * norm) > PauliSum::kZeroThreshold)
      out.add(string_from_masks(0, z, reg), coeff[z] * norm);
  return out;
}

PauliSum operator_to_pauli(const Eigen::SparseMatrix<Complex>& op, std::span<const Qubit> reg) {
  const std::size_t dim = std::size_t{1} << reg.size();
  if (static_cast<std::size_t>(op.rows()) != dim || static_cast<std::size_t>(op.cols()) != dim)
    throw std::invalid_argument("operator_to_pauli: matrix size does not match register");
  std::map<std::uint64_t, std::vector<Complex>> groups;
  for (int col = 0; col < op.outerSize(); ++col)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(op, col); it; ++it) {
      const std::uint64_t flip = static_cast<std::uint64_t>(it.row()) ^ static_cast<std::uint64_t>(it.col());
      auto& table = groups[flip];
      if (table.empty()) table.assign(dim, Complex{});
      table[static_cast<std::size_t>(it.col())] += it.value();
    }
  PauliSum out;
  for (auto& [flip, table] : groups) emit_flip_group(flip, table, reg, out);
  return out;
}

PauliSum permutation_to_pauli(std::span<const std::uint64_t> image, std::span<const Qubit> reg) {
  const std::size_t dim = std::size_t{1} << reg.size();
  if (image.size() != dim) throw std::invalid_argument("permutation_to_pauli: table size mismatch");
  std::map<std::uint64_t, std::vector<Complex>> groups;
  for (std::uint64_t x = 0; x < dim; ++x) {
    if (image[x] >= dim) throw std::out_of_range("permutation_to_pauli: image out of range");
    auto& table = groups[x ^ image[x]];
    if (table.empty()) table.assign(dim, Complex{});
    table[x] += 1.0;
  }
  PauliSum out;
  for (auto& [flip, table] : groups) emit_flip_group(flip, table, reg, out);
  return out;
}

}  // namespace fermlap
