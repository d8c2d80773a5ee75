#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fermlap/pauli.hpp"
#include "fermlap/problem.hpp"

namespace fermlap {

/// Interleaved position key: bit (i*D + d) is bit i of coordinate d.
using Key = std::uint64_t;

std::uint64_t brgc_encode(std::uint64_t x, unsigned n);
std::uint64_t brgc_decode(std::uint64_t g, unsigned n);

struct LatticePoint {
  std::vector<std::uint64_t> coords;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

Key interleave_key(const LatticePoint& p, unsigned n, unsigned D);
LatticePoint point_from_key(Key key, unsigned n, unsigned D);

/// Bits stored in one particle block: per-axis codes interleaved like the key.
std::uint64_t encode_block(Key key, unsigned n, unsigned D, PositionCode code);
Key decode_block(std::uint64_t bits, unsigned n, unsigned D, PositionCode code);

enum class Register { base, gray_copy, comparator_anc, swap_anc_L, swap_anc_R, gadget_anc };

std::string to_string(Register r);

struct QubitRole {
  Register reg = Register::base;
  int a = -1;
  int i = -1;
  int d = -1;
};

/// Registry of qubit roles. Base qubit q_{a,i,d} sits at a*n*D + i*D + d, so
/// the particle block read little-endian is the interleaved key; ancillas are
/// appended in allocation order.
class QubitLayout {
 public:
  QubitLayout(unsigned A, unsigned n, unsigned D);

  unsigned A() const { return A_; }
  unsigned n() const { return n_; }
  unsigned D() const { return D_; }
  unsigned size() const { return static_cast<unsigned>(roles_.size()); }

  Qubit base(unsigned a, unsigned i, unsigned d) const;
  /// Block of particle a, least significant key bit first.
  std::vector<Qubit> particle_block(unsigned a) const;
  /// Bits of coordinate d of particle a, least significant first.
  std::vector<Qubit> axis_register(unsigned a, unsigned d) const;

  Qubit allocate(Register reg, int a = -1, int i = -1, int d = -1);
  std::vector<Qubit> allocate_many(std::size_t count, Register reg, int a = -1, int d = -1);

  const QubitRole& role(Qubit q) const { return roles_.at(q); }
  std::size_t count(Register reg) const;

  /// One line per qubit: `<index> <register> <a> <i> <d>`.
  void dump(std::ostream& os) const;

 private:
  unsigned A_;
  unsigned n_;
  unsigned D_;
  std::vector<QubitRole> roles_;
};

/// Antisymmetric basis: ascending key tuples, sorted lexicographically.
class FermionBasis {
 public:
  FermionBasis(unsigned A, std::vector<Key> flat_keys);

  unsigned particles() const { return A_; }
  std::size_t size() const { return keys_.size() / A_; }
  std::span<const Key> state(std::size_t k) const { return {keys_.data() + k * A_, A_}; }
  std::optional<std::size_t> index_of(std::span<const Key> tuple) const;

 private:
  unsigned A_;
  std::vector<Key> keys_;
};

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

FermionBasis enumerate_basis(const ProblemSpec& spec);

/// Computational basis index of an ordered tuple with each particle's key
/// written into its block in the given code.
std::uint64_t basis_state_index(std::span<const Key> tuple, unsigned n, unsigned D,
                                PositionCode code);

/// Keys held by each particle block of a computational basis index.
std::vector<Key> decode_keys(std::uint64_t index, unsigned A, unsigned n, unsigned D,
                             PositionCode code);

bool strictly_ordered(std::span<const Key> keys);

}  // namespace fermlap
