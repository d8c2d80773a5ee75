#include "fermlap/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fermlap/gadgets.hpp"
#include "fermlap/laplacian.hpp"
#include "fermlap/transform.hpp"

namespace fermlap {

namespace {

std::uint64_t center_coord(const PotentialSpec& p, unsigned d, std::uint64_t size) {
  if (p.center.empty()) return 0;
  if (p.center.size() <= d) throw std::invalid_argument("potential centre has too few coordinates");
  const long s = static_cast<long>(size);
  return static_cast<std::uint64_t>(((p.center[d] % s) + s) % s);
}

void check_finite(const std::vector<double>& t) {
  for (double v : t)
    if (!std::isfinite(v)) throw std::invalid_argument("potential table contains a non-finite value");
}

}  // namespace

double same_species_factor(unsigned A) {
  if (A < 2) throw std::invalid_argument("same_species_factor: needs at least two particles");
  return 0.5 * A * (A - 1.0);
}

double cross_species_factor(unsigned A_n, unsigned A_p) {
  if (A_n == 0 || A_p == 0) throw std::invalid_argument("cross_species_factor: species counts must be positive");
  return static_cast<double>(A_n) * A_p;
}

double ring_distance(std::uint64_t x, std::uint64_t y, std::uint64_t size) {
  const std::uint64_t d = x > y ? x - y : y - x;
  return static_cast<double>(std::min(d, size - d));
}

std::vector<double> one_body_table(const ProblemSpec& spec) {
  const auto& p = spec.potential;
  const std::uint64_t N = spec.sites();
  std::vector<double> t(N, 0.0);
  if (p.kind != PotentialSpec::Kind::one_body) return t;
  if (p.builtin == "table") {
    if (p.table.size() != N) throw std::invalid_argument("one-body table must have 2^{nD} entries");
    t = p.table;
  } else if (p.builtin == "well") {
    std::vector<std::uint64_t> c(spec.D);
    for (unsigned d = 0; d < spec.D; ++d) c[d] = center_coord(p, d, spec.axis_size());
    t[interleave_key(LatticePoint{c}, spec.n, spec.D)] = -p.strength;
  } else if (p.builtin == "harmonic") {
    for (Key k = 0; k < N; ++k) {
      const auto pt = point_from_key(k, spec.n, spec.D);
      double r2 = 0.0;
      for (unsigned d = 0; d < spec.D; ++d) {
        const double dx = ring_distance(pt.coords[d], center_coord(p, d, spec.axis_size()), spec.axis_size());
        r2 += dx * dx;
      }
      t[k] = 0.5 * p.strength * r2;
    }
  } else {
    throw std::invalid_argument("unknown one-body potential '" + p.builtin + "'");
  }
  check_finite(t);
  return t;
}

std::vector<double> two_body_table(const ProblemSpec& spec) {
  const auto& p = spec.potential;
  const std::uint64_t N = spec.sites();
  if (p.kind != PotentialSpec::Kind::two_body) return std::vector<double>(N * N, 0.0);
  std::vector<double> t(N * N, 0.0);
  if (p.builtin == "table") {
    if (p.table.size() != N * N) throw std::invalid_argument("two-body table must have 2^{2nD} entries");
    t = p.table;
    for (Key a = 0; a < N; ++a)
      for (Key b = 0; b < a; ++b)
        if (std::abs(t[a + b * N] - t[b + a * N]) > 1e-12)
          throw std::invalid_argument("two-body table is not symmetric under exchange");
  } else if (p.builtin == "coulomb-softened") {
    if (p.softening <= 0.0) throw std::invalid_argument("coulomb softening must be positive");
    for (Key a = 0; a < N; ++a)
      for (Key b = 0; b < N; ++b) {
        const auto pa = point_from_key(a, spec.n, spec.D);
        const auto pb = point_from_key(b, spec.n, spec.D);
        double r2 = 0.0;
        for (unsigned d = 0; d < spec.D; ++d) {
          const double dx = ring_distance(pa.coords[d], pb.coords[d], spec.axis_size());
          r2 += dx * dx;
        }
        t[a + b * N] = p.strength / std::sqrt(r2 + p.softening * p.softening);
      }
  } else {
    throw std::invalid_argument("unknown two-body potential '" + p.builtin + "'");
  }
  check_finite(t);
  return t;
}

double potential_sup_norm(const ProblemSpec& spec) {
  auto sup = [](const std::vector<double>& t) {
    double m = 0.0;
    for (double v : t) m = std::max(m, std::abs(v));
    return m;
  };
  switch (spec.potential.kind) {
    case PotentialSpec::Kind::none: return 0.0;
    case PotentialSpec::Kind::one_body: return spec.A * sup(one_body_table(spec));
    case PotentialSpec::Kind::two_body: return 0.5 * spec.A * (spec.A - 1.0) * sup(two_body_table(spec));
  }
  return 0.0;
}

std::vector<double> load_potential_table(const std::filesystem::path& path, std::size_t length) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open potential table " + path.string());
  std::vector<double> t(length, 0.0);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::uint64_t index;
    double value;
    if (!(ls >> index)) continue;
    if (!(ls >> value)) throw std::invalid_argument("malformed potential line: " + line);
    if (index >= length) throw std::out_of_range("potential index out of range: " + std::to_string(index));
    t[index] = value;
  }
  check_finite(t);
  return t;
}

namespace {

PauliSum pair_diagonal(const std::vector<double>& coded, const QubitLayout& layout, unsigned a, unsigned b) {
  auto reg = layout.particle_block(a);
  const auto rb = layout.particle_block(b);
  reg.insert(reg.end(), rb.begin(), rb.end());
  return diagonal_to_zsum(coded, reg);
}

// Two-body table over the joint code of two blocks, first block in the low bits.
std::vector<double> coded_pair_table(const ProblemSpec& spec) {
  const unsigned w = spec.bits_per_particle();
  if (2 * w > 20) throw std::length_error("two-body diagonal exceeds 2^20 entries");
  const std::uint64_t N = spec.sites();
  const auto t = two_body_table(spec);
  std::vector<double> coded(N * N);
  for (Key a = 0; a < N; ++a)
    for (Key b = 0; b < N; ++b)
      coded[encode_block(a, spec.n, spec.D, spec.code) | (encode_block(b, spec.n, spec.D, spec.code) << w)] =
          t[a + b * N];
  return coded;
}

}  // namespace

PauliSum potential_operator(const ProblemSpec& spec, const QubitLayout& layout) {
  const auto& p = spec.potential;
  if (p.kind == PotentialSpec::Kind::none) return {};
  if (p.species.size() > 1)
    throw std::invalid_argument("operator-level potentials support a single species");
  PauliSum out;
  if (p.kind == PotentialSpec::Kind::one_body) {
    const std::uint64_t N = spec.sites();
    const auto t = one_body_table(spec);
    std::vector<double> coded(N);
    for (Key k = 0; k < N; ++k) coded[encode_block(k, spec.n, spec.D, spec.code)] = t[k];
    for (unsigned a = 0; a < spec.A; ++a) out += diagonal_to_zsum(coded, layout.particle_block(a));
    return out;
  }
  const auto coded = coded_pair_table(spec);
  for (unsigned a = 0; a < spec.A; ++a)
    for (unsigned b = a + 1; b < spec.A; ++b) out += pair_diagonal(coded, layout, a, b);
  return out;
}

PauliSum two_body_representative(const ProblemSpec& spec, const QubitLayout& layout) {
  if (spec.potential.kind != PotentialSpec::Kind::two_body) throw std::invalid_argument("not a two-body potential");
  if (spec.A < 2) throw std::invalid_argument("two-body potential needs two particles");
  return same_species_factor(spec.A) * pair_diagonal(coded_pair_table(spec), layout, 0, 1);
}

double default_penalty(const PauliSum& kinetic, double potential_sup) {
  return 100.0 * (kinetic.one_norm() + potential_sup);
}

SystemHamiltonian assemble_hamiltonian(const ProblemSpec& spec, const FermionicOptions& options) {
  spec.validate();
  SystemHamiltonian h{QubitLayout(spec.A, spec.n, spec.D), {}, {}, {}, 0.0, {}, {}};
  if (spec.mode == SynthesisMode::gadget) {
    auto sys = gadget_system(spec);
    h.layout = std::move(sys.layout);
    h.kinetic = spec.kinetic_coefficient * sys.kinetic;
    h.penalty = std::move(sys.penalty.penalty);
    h.reports = std::move(sys.reports);
  } else if (spec.A == 1) {
    for (const auto& piece : distinguishable_laplacian(spec, h.layout)) h.kinetic += piece.sum;
    if (spec.include_diagonal) h.kinetic += PauliSum::identity(-2.0 * spec.D);
    h.kinetic *= spec.kinetic_coefficient;
  } else {
    h.kinetic = spec.kinetic_coefficient * fermionic_laplacian(spec, h.layout, options);
    auto u = ordering_penalty_U(h.layout, spec);
    h.reports.push_back(report(u));
    h.penalty = std::move(u.penalty);
  }
  h.potential = potential_operator(spec, h.layout);
  h.Q = spec.Q ? *spec.Q : default_penalty(h.kinetic, potential_sup_norm(spec));
  h.H = h.kinetic + h.potential + h.Q * h.penalty;
  return h;
}

}  // namespace fermlap
