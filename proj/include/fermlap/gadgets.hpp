#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fermlap/encoding.hpp"
#include "fermlap/pauli.hpp"

namespace fermlap {

/// Penalty (in units of Q) that pins ancillas to a function of other qubits,
/// plus the ancillas it allocated.
struct GadgetEmission {
  std::string name;
  PauliSum penalty;
  /// Diagonal positive-semidefinite pieces summing to `penalty`, each on a
  /// handful of qubits; used for exhaustive ground-space enumeration.
  std::vector<PauliSum> components;
  std::vector<Qubit> ancillas;
  std::optional<Qubit> output;

  void add_component(PauliSum c);
  GadgetEmission& absorb(GadgetEmission other);
};

struct GadgetReport {
  std::string name;
  std::size_t ancillas = 0;
  std::size_t terms = 0;
  std::size_t max_weight = 0;
};

GadgetReport report(const GadgetEmission& g);
/// `name ancillas=.. terms=.. max_weight=..` per line.
void write_gadget_report(std::ostream& os, std::span<const GadgetReport> reports);

/// Diagonal penalty that is zero iff output == f(inputs) and one otherwise.
/// f receives the input bits packed little-endian (inputs[0] is bit 0).
PauliSum truth_table_penalty(std::span<const Qubit> inputs, Qubit output,
                             const std::function<bool(std::uint64_t)>& f);

/// Projector-reduction gadget: ancilla a = (i != vi) | (j != vj), so that
/// P^0_a stands in for P^{vi vj}_{i,j}. With vi = vj = 0 the penalty is the
/// eight-row table pairing a with P^0_i P^0_j.
GadgetEmission reduce_projector_pair(QubitLayout& layout, Qubit i, Qubit j, int vi = 0, int vj = 0);

/// Bottom-up tree of pair reductions; the output's 0-state marks "every qubit
/// equals its target bit". Uses |qubits| - 1 ancillas.
GadgetEmission reduce_projector_tree(QubitLayout& layout, std::span<const Qubit> qubits,
                                     std::span<const int> target);

/// Depth of the reduction tree for k inputs.
unsigned reduction_tree_layers(std::size_t k);

/// Copy gadget for a swap: zero exactly when c = b and d = a, i.e. |c,d>
/// holds chi_{a,b}|a,b>.
GadgetEmission swap_gadget(Qubit a, Qubit b, Qubit c, Qubit d);
/// Literal one-sided product (P^{01}_{c,a}+P^{10}_{c,a}+P^{01}_{d,b}+P^{10}_{d,b}) chi_{a,b}.
PauliSum swap_gadget_one_sided(Qubit a, Qubit b, Qubit c, Qubit d);
/// Copy gadget c = a.
GadgetEmission equality_gadget(Qubit a, Qubit c);

/// Pins g to the Gray code of b (both least significant bit first).
GadgetEmission binary_to_brgc_gadget(std::span<const Qubit> b_reg, std::span<const Qubit> g_reg);

/// Unsigned comparison a < b on equal-width registers (LSB first). The
/// output ancilla's 1-state is the comparison result.
GadgetEmission less_than_comparator(QubitLayout& layout, std::span<const Qubit> a_reg,
                                    std::span<const Qubit> b_reg, ComparatorMode mode);

/// Ordering penalty U. Inline mode: the exact diagonal projector onto
/// unordered base configurations, no ancillas. Gadget mode: comparators on
/// adjacent particle keys, a conjunction tree, and a unit penalty on the
/// violation flag; the returned penalty includes all consistency terms.
GadgetEmission ordering_penalty_U(QubitLayout& layout, const ProblemSpec& spec);

/// Exhaustive ground-space enumeration of a sum of diagonal PSD components
/// over `qubits`: every assignment (bit k on qubits[k]) with zero total
/// penalty. Branches are cut only once a fully assigned component is
/// positive, which is exact because no component can go negative.
std::vector<std::uint64_t> diagonal_kernel(std::span<const PauliSum> components,
                                           std::span<const Qubit> qubits, double tol = 1e-12);

/// Minimum of a diagonal sum over all assignments of its support (small
/// supports only); used to confirm components are positive semidefinite.
double diagonal_minimum(const PauliSum& diagonal);

}  // namespace fermlap
