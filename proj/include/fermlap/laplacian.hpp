#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "fermlap/encoding.hpp"
#include "fermlap/gadgets.hpp"
#include "fermlap/pauli.hpp"

namespace fermlap {

/// Ring Laplacian of one 2^n-site axis in Gray code, by the recursion
/// L(n) = L(n-1) + (X_{n-1} - X_{n-2}) prod_{i<n-2} P0_i from X_0 + X_1.
PauliSum brgc_laplacian_1p(unsigned n, std::span<const Qubit> reg);

/// Image table of the one-step ring shift x -> x + sign (mod 2^n) written in
/// the given code: image[code(x)] = code(x + sign).
std::vector<std::uint64_t> ring_shift_image(unsigned n, int sign, PositionCode code);

/// Exact Pauli form of the ring shift on one axis register.
PauliSum shift_piece(std::span<const Qubit> reg, int sign, PositionCode code);

/// Ancillas used by the bounded-weight Gray shift: `parity` holds the XOR of
/// the register, prefix[k] the OR of bits 0..k. For small registers these are
/// register qubits themselves rather than fresh ancillas.
struct ShiftAncillas {
  Qubit parity = 0;
  std::vector<Qubit> prefix;
  GadgetEmission gadget;
};

ShiftAncillas shift_ancillas(QubitLayout& layout, std::span<const Qubit> reg);

/// Gray-code shift with every term of weight <= 4, reading the parity and
/// prefix information from the ancillas.
PauliSum gray_shift_gadget(std::span<const Qubit> reg, int sign, const ShiftAncillas& anc);

struct LaplacianPiece {
  unsigned particle = 0;
  unsigned direction = 0;
  int sign = +1;
  PauliSum sum;
};

/// One-directional ring shifts L_{a,d,+-} on the base registers of every
/// particle, in the spec's position code. Sum over pieces is the
/// distinguishable-particle Laplacian without its diagonal.
std::vector<LaplacianPiece> distinguishable_laplacian(const ProblemSpec& spec, const QubitLayout& layout);

enum class Handedness { L, R };

/// Cyclic relabeling of a window of particle blocks. R moves the content of
/// the last block to the first and every other block up by one; L is its
/// inverse. Windows may wrap past the last particle.
struct RotationOperator {
  unsigned first = 0;
  unsigned size = 0;
  Handedness handedness = Handedness::R;
  /// Block-swap layers as (window position, window position) pairs; the first
  /// layer acts first on kets.
  std::vector<std::pair<unsigned, unsigned>> first_layer;
  std::vector<std::pair<unsigned, unsigned>> second_layer;
  PauliSum sum;
};

/// Qubitwise swap of two particle blocks.
PauliSum block_swap(const QubitLayout& layout, unsigned a, unsigned b);

/// `with_sum = false` fills only the swap layers; the Pauli expansion grows
/// exponentially with the block width.
RotationOperator local_rotation(const QubitLayout& layout, unsigned first, unsigned size, Handedness h,
                                bool with_sum = true);

/// 1 - chi_{0,1} for two particles, 1 + (-1)^{A+1}(R_L + R_R) over all
/// particles otherwise.
PauliSum wrap_rotation(const ProblemSpec& spec, const QubitLayout& layout);

/// Moving the particle in slot `from` into slot `to` shifts the blocks in
/// between by one; the relabeling is a cycle of |to - from| + 1 blocks.
struct Relocation {
  unsigned from = 0;
  unsigned to = 0;

  int sign() const { return ((from > to ? from - to : to - from) % 2) ? -1 : +1; }
  Handedness handedness() const { return to > from ? Handedness::L : Handedness::R; }
  friend auto operator<=>(const Relocation&, const Relocation&) = default;
};

/// Rotation operator realizing a relocation.
RotationOperator relocation_rotation(const QubitLayout& layout, Relocation r, bool with_sum = true);

/// For every piece (a, d, sign) the target slots at which the moved particle
/// can land in some ordered configuration. Exhaustive over lattice points; a
/// slot is listed iff at least one ordered state needs it.
using RelocationPlan = std::map<std::tuple<unsigned, unsigned, int>, std::vector<unsigned>>;
RelocationPlan relocation_plan(const ProblemSpec& spec);

struct RotationWindow {
  unsigned first = 0;
  unsigned size = 0;
  Handedness handedness = Handedness::R;
  friend auto operator<=>(const RotationWindow&, const RotationWindow&) = default;
};

/// Distinct relabelings used by the plan. Rotations that coincide as
/// permutations (both handednesses of a two-block window) are kept once.
std::vector<RotationWindow> prune_redundant_rotations(const ProblemSpec& spec);

/// Window sizes of the nominal bounded-hop construction: neighbour swaps for
/// D >= 2, three- and four-block rotations for D = 3, plus the full wrap.
std::vector<unsigned> nominal_window_sizes(unsigned A, unsigned D);

struct FermionicOptions {
  /// Fault injection: negate every term that relabels particles.
  bool flip_relocation_sign = false;
};

/// Inline fermionic Laplacian on the base registers: sum over pieces and
/// their planned relocations of sign * Rot * L_{a,d,s}, plus -2DA when
/// spec.include_diagonal is set. The ordering penalty is not included.
PauliSum fermionic_laplacian(const ProblemSpec& spec, const QubitLayout& layout,
                             const FermionicOptions& options = {});

/// Complete gadget-mode system: binary base registers, Gray copies, ordering
/// comparators, swap-gadget copies for each relocation, bounded-weight
/// shifts on the copies.
struct GadgetSystem {
  QubitLayout layout;
  PauliSum kinetic;
  GadgetEmission penalty;
  std::vector<GadgetReport> reports;
};

GadgetSystem gadget_system(const ProblemSpec& spec);

}  // namespace fermlap
