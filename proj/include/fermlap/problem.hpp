#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fermlap {

enum class SynthesisMode { inline_, gadget };
enum class PositionCode { binary, brgc };
enum class ComparatorMode { serial, tree };

std::string to_string(SynthesisMode m);
std::string to_string(PositionCode c);
std::string to_string(ComparatorMode c);

struct Species {
  std::string label;
  unsigned count = 0;
};

/// Potential description. Tabulated one-body values are indexed by the
/// interleaved lattice key; two-body tables by key0 + key1 * 2^{nD}.
struct PotentialSpec {
  enum class Kind { none, one_body, two_body };

  Kind kind = Kind::none;
  std::string builtin;          // well | harmonic | coulomb-softened | table
  std::vector<double> table;    // used when builtin == "table"
  double strength = 1.0;        // well depth, harmonic omega^2, coulomb charge product
  double softening = 1.0;       // coulomb-softened length
  std::vector<long> center;     // well site / harmonic centre, one coordinate per axis
  std::vector<Species> species;
};

/// Parameters of one synthesis/verification run.
struct ProblemSpec {
  unsigned A = 2;
  unsigned n = 2;
  unsigned D = 1;
  SynthesisMode mode = SynthesisMode::inline_;
  PositionCode code = PositionCode::brgc;
  ComparatorMode comparator = ComparatorMode::serial;
  std::optional<double> Q;  // unset means automatic
  double kinetic_coefficient = 1.0;
  bool include_diagonal = false;
  PotentialSpec potential;
  unsigned cap_qubits = 24;
  std::uint64_t cap_basis = std::uint64_t{1} << 20;
  std::uint64_t seed = 0;

  unsigned bits_per_particle() const { return n * D; }
  unsigned base_qubits() const { return A * n * D; }
  std::uint64_t sites() const { return std::uint64_t{1} << (n * D); }
  std::uint64_t axis_size() const { return std::uint64_t{1} << n; }

  /// Throws std::invalid_argument on structurally invalid parameters.
  void validate() const;
};

}  // namespace fermlap
