#pragma once

#include <filesystem>
#include <vector>

#include "fermlap/encoding.hpp"
#include "fermlap/gadgets.hpp"
#include "fermlap/laplacian.hpp"
#include "fermlap/pauli.hpp"

namespace fermlap {

double same_species_factor(unsigned A);
double cross_species_factor(unsigned A_n, unsigned A_p);

/// Minimum-image displacement on a ring of `size` sites.
double ring_distance(std::uint64_t x, std::uint64_t y, std::uint64_t size);

/// One-body values indexed by lattice key (length 2^{nD}). Zero for
/// two-body or absent potentials.
std::vector<double> one_body_table(const ProblemSpec& spec);
/// Two-body values indexed by key0 + key1 * 2^{nD}; symmetric. Zero for
/// one-body or absent potentials.
std::vector<double> two_body_table(const ProblemSpec& spec);

/// Largest |V| over ordered configurations (one-body values summed over A
/// particles, two-body over all pairs).
double potential_sup_norm(const ProblemSpec& spec);

/// Reads `index value` lines into a table of the given length.
std::vector<double> load_potential_table(const std::filesystem::path& path, std::size_t length);

/// Diagonal potential on the base registers, in the code those registers
/// use: sum over particles of one-body diagonals plus, for two-body
/// potentials, the explicit sum over all block pairs.
PauliSum potential_operator(const ProblemSpec& spec, const QubitLayout& layout);

/// Two-body diagonal on blocks (0, 1) alone, times A(A-1)/2.
PauliSum two_body_representative(const ProblemSpec& spec, const QubitLayout& layout);

/// 100 * (coefficient 1-norm of the kinetic term + sup |V|).
double default_penalty(const PauliSum& kinetic, double potential_sup);

struct SystemHamiltonian {
  QubitLayout layout;
  PauliSum kinetic;    // kinetic_coefficient already applied
  PauliSum potential;
  PauliSum penalty;    // unit weight
  double Q = 0.0;
  PauliSum H;
  std::vector<GadgetReport> reports;
};

/// H = kinetic_coefficient * L + V + Q * penalties in the spec's mode.
SystemHamiltonian assemble_hamiltonian(const ProblemSpec& spec, const FermionicOptions& options = {});

}  // namespace fermlap
