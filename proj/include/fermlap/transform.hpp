#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>

#include "fermlap/pauli.hpp"

namespace fermlap {

/// In-place unnormalized Walsh-Hadamard transform:
/// out[x] = sum_z (-1)^{popcount(x & z)} in[z].
template <typename Scalar>
void walsh_hadamard(std::span<Scalar> v) {
  const std::size_t n = v.size();
  if (!std::has_single_bit(n)) throw std::invalid_argument("walsh_hadamard: length must be 2^m");
  for (std::size_t h = 1; h < n; h <<= 1)
    for (std::size_t i = 0; i < n; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const Scalar a = v[j];
        const Scalar b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
}

/// Exact Z-product expansion of diag(values) on `reg` (bit k of the table
/// index lives on reg[k]).
PauliSum diagonal_to_zsum(std::span<const double> values, std::span<const Qubit> reg);

/// Exact Pauli expansion of an arbitrary 2^m x 2^m operator on `reg`.
PauliSum operator_to_pauli(const Eigen::SparseMatrix<Complex>& op, std::span<const Qubit> reg);

/// Pauli expansion of the map |x> -> |image[x]> on `reg`.
PauliSum permutation_to_pauli(std::span<const std::uint64_t> image, std::span<const Qubit> reg);

}  // namespace fermlap
