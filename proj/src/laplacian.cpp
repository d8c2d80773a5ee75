#include "fermlap/laplacian.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "fermlap/transform.hpp"

namespace fermlap {

namespace {

PauliSum p0(Qubit q) { return expand_projector({{{q, 0}}}); }
PauliSum p1(Qubit q) { return expand_projector({{{q, 1}}}); }
PauliSum x(Qubit q) { return PauliSum::single(q, Pauli::X); }

std::uint64_t coded(std::uint64_t v, unsigned n, PositionCode code) {
  return code == PositionCode::brgc ? brgc_encode(v, n) : v;
}

Qubit tracked_gate(QubitLayout& layout, GadgetEmission& acc, std::vector<Qubit> inputs,
                   const std::function<bool(std::uint64_t)>& f) {
  const Qubit out = layout.allocate(Register::gadget_anc);
  acc.ancillas.push_back(out);
  acc.add_component(truth_table_penalty(inputs, out, f));
  return out;
}

// Rotates the low w bits of v so that bit k moves to bit k + 1 (R) or k - 1 (L).
std::uint64_t rotate_bits(std::uint64_t v, unsigned w, Handedness h) {
  const std::uint64_t mask = (std::uint64_t{1} << w) - 1;
  if (h == Handedness::R) return ((v << 1) | (v >> (w - 1))) & mask;
  return ((v >> 1) | (v << (w - 1))) & mask;
}

std::vector<std::pair<unsigned, unsigned>> reversal(unsigned lo, unsigned hi) {
  std::vector<std::pair<unsigned, unsigned>> out;
  while (lo < hi) out.emplace_back(lo++, hi--);
  return out;
}

}  // namespace

PauliSum brgc_laplacian_1p(unsigned n, std::span<const Qubit> reg) {
  if (n < 2) throw std::invalid_argument("brgc_laplacian_1p: n must be at least 2");
  if (reg.size() != n) throw std::invalid_argument("brgc_laplacian_1p: register width mismatch");
  PauliSum lap = x(reg[0]) + x(reg[1]);
  for (unsigned m = 3; m <= n; ++m) {
    PauliSum prefix = PauliSum::identity();
    for (unsigned i = 0; i + 2 < m; ++i) prefix = prefix * p0(reg[i]);
    lap += (x(reg[m - 1]) - x(reg[m - 2])) * prefix;
  }
  return lap;
}

std::vector<std::uint64_t> ring_shift_image(unsigned n, int sign, PositionCode code) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("ring_shift_image: sign must be +-1");
  const std::uint64_t N = std::uint64_t{1} << n;
  std::vector<std::uint64_t> image(N);
  for (std::uint64_t v = 0; v < N; ++v) image[coded(v, n, code)] = coded((v + N + sign) % N, n, code);
  return image;
}

PauliSum shift_piece(std::span<const Qubit> reg, int sign, PositionCode code) {
  const auto image = ring_shift_image(static_cast<unsigned>(reg.size()), sign, code);
  return permutation_to_pauli(image, reg);
}

ShiftAncillas shift_ancillas(QubitLayout& layout, std::span<const Qubit> reg) {
  if (reg.empty()) throw std::invalid_argument("shift_ancillas: empty register");
  ShiftAncillas anc;
  anc.gadget.name = "shift_ancillas";
  auto xor2 = [](std::uint64_t v) { return ((v ^ (v >> 1)) & 1U) != 0; };
  auto or2 = [](std::uint64_t v) { return (v & 3U) != 0; };
  anc.parity = reg[0];
  for (std::size_t k = 1; k < reg.size(); ++k) anc.parity = tracked_gate(layout, anc.gadget, {anc.parity, reg[k]}, xor2);
  anc.prefix.push_back(reg[0]);
  for (std::size_t k = 1; k + 1 < reg.size(); ++k)
    anc.prefix.push_back(tracked_gate(layout, anc.gadget, {anc.prefix.back(), reg[k]}, or2));
  return anc;
}

PauliSum gray_shift_gadget(std::span<const Qubit> reg, int sign, const ShiftAncillas& anc) {
  const std::size_t n = reg.size();
  if (n == 0 || anc.prefix.size() + 1 < n) throw std::invalid_argument("gray_shift_gadget: ancillas do not match register");
  const bool up = sign > 0;
  // Lowest set bit is k - 1 and all bits below it clear.
  auto lowest_at = [&](std::size_t k) {
    PauliSum p = p1(reg[k - 1]);
    if (k >= 2) p = p * p0(anc.prefix[k - 2]);
    return p;
  };
  PauliSum out = x(reg[0]) * (up ? p0(anc.parity) : p1(anc.parity));
  for (std::size_t k = 1; k < n; ++k) out += x(reg[k]) * (up ? p1(anc.parity) : p0(anc.parity)) * lowest_at(k);
  PauliSum edge = up ? p1(reg[n - 1]) : p0(reg[n - 1]);
  if (n >= 2) edge = edge * p0(anc.prefix[n - 2]);
  out += x(reg[n - 1]) * edge;
  return out;
}

std::vector<LaplacianPiece> distinguishable_laplacian(const ProblemSpec& spec, const QubitLayout& layout) {
  std::vector<LaplacianPiece> pieces;
  for (unsigned a = 0; a < spec.A; ++a)
    for (unsigned d = 0; d < spec.D; ++d) {
      const auto reg = layout.axis_register(a, d);
      for (int s : {+1, -1}) pieces.push_back({a, d, s, shift_piece(reg, s, spec.code)});
    }
  return pieces;
}

PauliSum block_swap(const QubitLayout& layout, unsigned a, unsigned b) {
  if (a == b) throw std::invalid_argument("block_swap: blocks must differ");
  const auto qa = layout.particle_block(a);
  const auto qb = layout.particle_block(b);
  PauliSum out = PauliSum::identity();
  for (std::size_t k = 0; k < qa.size(); ++k) out = out * swap_sum(qa[k], qb[k]);
  return out;
}

RotationOperator local_rotation(const QubitLayout& layout, unsigned first, unsigned size, Handedness h,
                                bool with_sum) {
  if (size < 2) throw std::invalid_argument("local_rotation: window needs at least two blocks");
  if (size > layout.A()) throw std::invalid_argument("local_rotation: window exceeds particle count");
  RotationOperator rot;
  rot.first = first % layout.A();
  rot.size = size;
  rot.handedness = h;
  if (h == Handedness::R)
    rot.first_layer = reversal(0, size - 2);
  else
    rot.first_layer = reversal(1, size - 1);
  rot.second_layer = reversal(0, size - 1);
  if (!with_sum) return rot;

  std::vector<std::uint64_t> image(std::size_t{1} << size);
  for (std::uint64_t v = 0; v < image.size(); ++v) image[v] = rotate_bits(v, size, h);
  const unsigned width = layout.n() * layout.D();
  rot.sum = PauliSum::identity();
  for (unsigned b = 0; b < width; ++b) {
    std::vector<Qubit> reg;
    for (unsigned k = 0; k < size; ++k) reg.push_back(layout.particle_block((rot.first + k) % layout.A())[b]);
    rot.sum = rot.sum * permutation_to_pauli(image, reg);
  }
  return rot;
}

PauliSum wrap_rotation(const ProblemSpec& spec, const QubitLayout& layout) {
  if (spec.A < 2) throw std::invalid_argument("wrap_rotation: needs at least two particles");
  if (spec.A == 2) return PauliSum::identity() - block_swap(layout, 0, 1);
  const double sign = (spec.A % 2 == 1) ? 1.0 : -1.0;
  const auto rl = local_rotation(layout, 0, spec.A, Handedness::L);
  const auto rr = local_rotation(layout, 0, spec.A, Handedness::R);
  return PauliSum::identity() + sign * (rl.sum + rr.sum);
}

RotationOperator relocation_rotation(const QubitLayout& layout, Relocation r, bool with_sum) {
  if (r.from == r.to) throw std::invalid_argument("relocation_rotation: trivial relocation");
  const unsigned first = std::min(r.from, r.to);
  const unsigned size = (r.from > r.to ? r.from - r.to : r.to - r.from) + 1;
  return local_rotation(layout, first, size, r.handedness(), with_sum);
}

RelocationPlan relocation_plan(const ProblemSpec& spec) {
  spec.validate();
  const unsigned A = spec.A;
  const std::int64_t N = static_cast<std::int64_t>(spec.sites());
  const std::uint64_t axis = spec.axis_size();
  std::map<std::tuple<unsigned, unsigned, int>, std::set<unsigned>> slots;
  for (unsigned d = 0; d < spec.D; ++d)
    for (int s : {+1, -1})
      for (std::int64_t kp = 0; kp < N; ++kp) {
        LatticePoint p = point_from_key(static_cast<Key>(kp), spec.n, spec.D);
        p.coords[d] = (p.coords[d] + axis + s) % axis;
        const auto kq = static_cast<std::int64_t>(interleave_key(p, spec.n, spec.D));
        // Other particles: `a` below the source, |j - a| strictly between
        // source and destination, the rest above both.
        for (unsigned a = 0; a < A; ++a) {
          if (kq > kp) {
            if (a > kp) continue;
            for (unsigned j = a; j < A && static_cast<std::int64_t>(j - a) <= kq - kp - 1; ++j)
              if (static_cast<std::int64_t>(A - 1 - j) <= N - 1 - kq) slots[{a, d, s}].insert(j);
          } else {
            if (static_cast<std::int64_t>(A - 1 - a) > N - 1 - kp) continue;
            for (unsigned j = a + 1; j-- > 0;) {
              if (static_cast<std::int64_t>(a - j) > kp - kq - 1) break;
              if (j <= kq) slots[{a, d, s}].insert(j);
            }
          }
        }
      }
  RelocationPlan plan;
  for (auto& [key, set] : slots) plan[key] = {set.begin(), set.end()};
  return plan;
}

std::vector<RotationWindow> prune_redundant_rotations(const ProblemSpec& spec) {
  std::set<RotationWindow> windows;
  for (const auto& [piece, targets] : relocation_plan(spec))
    for (unsigned j : targets) {
      const unsigned a = std::get<0>(piece);
      if (j == a) continue;
      const Relocation r{a, j};
      const unsigned first = std::min(a, j);
      const unsigned size = (a > j ? a - j : j - a) + 1;
      // A two-block cycle is its own inverse.
      const Handedness h = size == 2 ? Handedness::R : r.handedness();
      windows.insert({first, size, h});
    }
  return {windows.begin(), windows.end()};
}

std::vector<unsigned> nominal_window_sizes(unsigned A, unsigned D) {
  std::set<unsigned> sizes;
  if (A >= 2) sizes.insert(A);
  if (D >= 2 && A >= 2) sizes.insert(2);
  if (D >= 3) {
    if (A >= 3) sizes.insert(3);
    if (A >= 4) sizes.insert(4);
  }
  return {sizes.begin(), sizes.end()};
}

PauliSum fermionic_laplacian(const ProblemSpec& spec, const QubitLayout& layout, const FermionicOptions& options) {
  spec.validate();
  if (spec.A < 2) throw std::invalid_argument("fermionic_laplacian: needs at least two particles");
  const auto plan = relocation_plan(spec);
  std::map<Relocation, PauliSum> rotations;
  PauliSum out;
  for (const auto& piece : distinguishable_laplacian(spec, layout)) {
    const auto it = plan.find({piece.particle, piece.direction, piece.sign});
    if (it == plan.end()) continue;
    for (unsigned j : it->second) {
      if (j == piece.particle) {
        out += piece.sum;
        continue;
      }
      const Relocation r{piece.particle, j};
      auto rot = rotations.find(r);
      if (rot == rotations.end()) rot = rotations.emplace(r, relocation_rotation(layout, r).sum).first;
      double sign = r.sign();
      if (options.flip_relocation_sign) sign = -sign;
      out += sign * (rot->second * piece.sum);
    }
  }
  if (spec.include_diagonal) out += PauliSum::identity(-2.0 * spec.D * spec.A);
  return out;
}

GadgetSystem gadget_system(const ProblemSpec& spec) {
  spec.validate();
  if (spec.mode != SynthesisMode::gadget) throw std::invalid_argument("gadget_system: spec is not in gadget mode");
  const unsigned A = spec.A, n = spec.n, D = spec.D;
  GadgetSystem sys{QubitLayout(A, n, D), {}, {}, {}};
  auto& layout = sys.layout;
  sys.penalty.name = "system";

  // gray[a][d] : Gray copy of particle a's axis-d coordinate.
  std::vector<std::vector<std::vector<Qubit>>> gray(A, std::vector<std::vector<Qubit>>(D));
  GadgetEmission conversions;
  conversions.name = "binary_to_brgc";
  for (unsigned a = 0; a < A; ++a)
    for (unsigned d = 0; d < D; ++d) {
      gray[a][d] = layout.allocate_many(n, Register::gray_copy, static_cast<int>(a), static_cast<int>(d));
      conversions.absorb(binary_to_brgc_gadget(layout.axis_register(a, d), gray[a][d]));
    }
  sys.reports.push_back(report(conversions));
  sys.penalty.absorb(std::move(conversions));

  auto ordering = ordering_penalty_U(layout, spec);
  sys.reports.push_back(report(ordering));
  sys.penalty.absorb(std::move(ordering));

  // Block b of the window holds the Gray copies of one particle, bit i*D + d.
  auto gray_block = [&](unsigned a) {
    std::vector<Qubit> block;
    for (unsigned i = 0; i < n; ++i)
      for (unsigned d = 0; d < D; ++d) block.push_back(gray[a][d][i]);
    return block;
  };
  auto axis_of = [&](const std::vector<Qubit>& block, unsigned d) {
    std::vector<Qubit> reg;
    for (unsigned i = 0; i < n; ++i) reg.push_back(block[i * D + d]);
    return reg;
  };

  GadgetEmission copies;
  copies.name = "swap_copies";
  GadgetEmission shifts;
  shifts.name = "shift_ancillas";
  std::map<std::vector<Qubit>, ShiftAncillas> shift_cache;
  auto shift_for = [&](const std::vector<Qubit>& reg) -> const ShiftAncillas& {
    auto it = shift_cache.find(reg);
    if (it == shift_cache.end()) {
      auto anc = shift_ancillas(layout, reg);
      shifts.absorb(anc.gadget);
      it = shift_cache.emplace(reg, std::move(anc)).first;
    }
    return it->second;
  };

  // Keyed by the permutation, so both orientations of a two-block swap share copies.
  std::map<RotationWindow, std::vector<std::vector<Qubit>>> final_blocks;
  auto copy_window = [&](Relocation r) -> const std::vector<std::vector<Qubit>>& {
    auto rot = relocation_rotation(layout, r, false);
    if (rot.size == 2) rot = local_rotation(layout, rot.first, 2, Handedness::R, false);
    const RotationWindow key{rot.first, rot.size, rot.handedness};
    auto it = final_blocks.find(key);
    if (it != final_blocks.end()) return it->second;
    const Register reg = rot.handedness == Handedness::L ? Register::swap_anc_L : Register::swap_anc_R;
    std::vector<std::vector<Qubit>> current;
    for (unsigned k = 0; k < rot.size; ++k) current.push_back(gray_block(rot.first + k));
    for (const auto* layer : {&rot.first_layer, &rot.second_layer}) {
      if (layer->empty()) continue;
      std::vector<std::vector<Qubit>> next;
      for (unsigned k = 0; k < rot.size; ++k) {
        next.push_back(layout.allocate_many(n * D, reg, static_cast<int>(rot.first + k)));
        copies.ancillas.insert(copies.ancillas.end(), next.back().begin(), next.back().end());
      }
      std::vector<bool> moved(rot.size, false);
      for (const auto& [u, v] : *layer) {
        moved[u] = moved[v] = true;
        for (unsigned b = 0; b < n * D; ++b)
          copies.absorb(swap_gadget(current[u][b], current[v][b], next[u][b], next[v][b]));
      }
      for (unsigned k = 0; k < rot.size; ++k)
        if (!moved[k])
          for (unsigned b = 0; b < n * D; ++b) copies.absorb(equality_gadget(current[k][b], next[k][b]));
      current = std::move(next);
    }
    return final_blocks.emplace(key, std::move(current)).first->second;
  };

  for (const auto& [piece, targets] : relocation_plan(spec)) {
    const auto [a, d, s] = piece;
    for (unsigned j : targets) {
      if (j == a) {
        sys.kinetic += gray_shift_gadget(gray[a][d], s, shift_for(gray[a][d]));
        continue;
      }
      const Relocation r{a, j};
      const auto& blocks = copy_window(r);
      const auto reg = axis_of(blocks[j - std::min(a, j)], d);
      sys.kinetic += static_cast<double>(r.sign()) * gray_shift_gadget(reg, s, shift_for(reg));
    }
  }
  // Copy-register shifts of a relocation and of its reverse land on different
  // copy blocks, so the raw sum is not self-adjoint; keep its Hermitian part.
  sys.kinetic = 0.5 * (sys.kinetic + sys.kinetic.adjoint());
  if (spec.include_diagonal) sys.kinetic += PauliSum::identity(-2.0 * D * A);

  sys.reports.push_back(report(copies));
  sys.reports.push_back(report(shifts));
  sys.penalty.absorb(std::move(copies));
  sys.penalty.absorb(std::move(shifts));
  return sys;
}

}  // namespace fermlap
