#include "fermlap/gadgets.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <ostream>
#include <stdexcept>

#include "fermlap/transform.hpp"

namespace fermlap {

namespace {

// Diagonal term in local coordinates for kernel enumeration.
struct LocalTerm {
  std::uint64_t z_mask;
  double coefficient;
};

struct LocalComponent {
  std::vector<LocalTerm> terms;
  std::size_t last = 0;  // highest local position in the support
};

LocalComponent localize(const PauliSum& c, const std::map<Qubit, std::size_t>& position) {
  LocalComponent out;
  for (const auto& [s, coeff] : c.raw()) {
    std::uint64_t mask = 0;
    for (const auto& [q, p] : s.letters()) {
      if (p != Pauli::Z) throw std::invalid_argument("diagonal_kernel: component is not diagonal");
      const auto it = position.find(q);
      if (it == position.end()) throw std::out_of_range("diagonal_kernel: component touches unlisted qubit");
      mask |= std::uint64_t{1} << it->second;
      out.last = std::max(out.last, it->second);
    }
    out.terms.push_back({mask, coeff.real()});
  }
  return out;
}

double evaluate(const LocalComponent& c, std::uint64_t x) {
  double v = 0.0;
  for (const auto& t : c.terms) v += (std::popcount(x & t.z_mask) & 1) ? -t.coefficient : t.coefficient;
  return v;
}

GadgetEmission gate(QubitLayout& layout, Register reg, const std::string& name,
                    std::vector<Qubit> inputs, const std::function<bool(std::uint64_t)>& f) {
  GadgetEmission g;
  g.name = name;
  const Qubit out = layout.allocate(reg);
  g.ancillas.push_back(out);
  g.output = out;
  g.add_component(truth_table_penalty(inputs, out, f));
  return g;
}

bool bit(std::uint64_t v, unsigned k) { return (v >> k) & 1U; }

GadgetEmission and_gate(QubitLayout& l, Qubit x, bool negate_x, Qubit y, bool negate_y) {
  return gate(l, Register::comparator_anc, "and", {x, y}, [=](std::uint64_t v) {
    return (bit(v, 0) != negate_x) && (bit(v, 1) != negate_y);
  });
}

GadgetEmission or_gate(QubitLayout& l, Qubit x, Qubit y) {
  return gate(l, Register::comparator_anc, "or", {x, y},
              [](std::uint64_t v) { return bit(v, 0) || bit(v, 1); });
}

GadgetEmission xor_gate(QubitLayout& l, Qubit x, Qubit y, bool negate = false) {
  return gate(l, Register::comparator_anc, negate ? "xnor" : "xor", {x, y},
              [=](std::uint64_t v) { return (bit(v, 0) != bit(v, 1)) != negate; });
}

struct EqLt {
  std::optional<Qubit> eq;
  Qubit lt;
};

// Tree comparator over bits [lo, hi) of the LSB-first registers.
EqLt tree_compare(QubitLayout& l, std::span<const Qubit> a, std::span<const Qubit> b, std::size_t lo,
                  std::size_t hi, bool need_eq, GadgetEmission& acc) {
  if (hi - lo == 1) {
    EqLt r{};
    if (need_eq) {
      auto e = xor_gate(l, a[lo], b[lo], true);
      r.eq = *e.output;
      acc.absorb(std::move(e));
    }
    auto t = and_gate(l, a[lo], true, b[lo], false);  // P^{01}_{a,b}
    r.lt = *t.output;
    acc.absorb(std::move(t));
    return r;
  }
  const std::size_t split = lo + (hi - lo) / 2;
  const EqLt upper = tree_compare(l, a, b, split, hi, true, acc);
  const EqLt lower = tree_compare(l, a, b, lo, split, need_eq, acc);
  EqLt r{};
  if (need_eq) {
    auto e = and_gate(l, *upper.eq, false, *lower.eq, false);
    r.eq = *e.output;
    acc.absorb(std::move(e));
  }
  auto t1 = and_gate(l, *upper.eq, false, lower.lt, false);
  auto t2 = and_gate(l, *upper.eq, true, upper.lt, false);
  auto o = or_gate(l, *t1.output, *t2.output);
  r.lt = *o.output;
  acc.absorb(std::move(t1));
  acc.absorb(std::move(t2));
  acc.absorb(std::move(o));
  return r;
}

}  // namespace

void GadgetEmission::add_component(PauliSum c) {
  penalty += c;
  components.push_back(std::move(c));
}

GadgetEmission& GadgetEmission::absorb(GadgetEmission other) {
  penalty += other.penalty;
  for (auto& c : other.components) components.push_back(std::move(c));
  ancillas.insert(ancillas.end(), other.ancillas.begin(), other.ancillas.end());
  return *this;
}

GadgetReport report(const GadgetEmission& g) {
  return {g.name, g.ancillas.size(), g.penalty.size(), g.penalty.max_weight()};
}

void write_gadget_report(std::ostream& os, std::span<const GadgetReport> reports) {
  for (const auto& r : reports)
    os << r.name << " ancillas=" << r.ancillas << " terms=" << r.terms << " max_weight=" << r.max_weight
       << '\n';
}

PauliSum truth_table_penalty(std::span<const Qubit> inputs, Qubit output,
                             const std::function<bool(std::uint64_t)>& f) {
  std::vector<Qubit> qubits(inputs.begin(), inputs.end());
  qubits.push_back(output);
  const unsigned k = static_cast<unsigned>(inputs.size());
  std::vector<double> table(std::size_t{1} << (k + 1), 0.0);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
    const std::uint64_t wrong = f(v) ? 0 : 1;
    table[v | (wrong << k)] = 1.0;
  }
  return diagonal_to_zsum(table, qubits);
}

GadgetEmission reduce_projector_pair(QubitLayout& layout, Qubit i, Qubit j, int vi, int vj) {
  if (i == j) throw std::invalid_argument("reduce_projector_pair: qubits must differ");
  auto g = gate(layout, Register::gadget_anc, "projector_pair", {i, j}, [=](std::uint64_t v) {
    return (static_cast<int>(bit(v, 0)) != vi) || (static_cast<int>(bit(v, 1)) != vj);
  });
  return g;
}

unsigned reduction_tree_layers(std::size_t k) {
  unsigned layers = 0;
  while (k > 1) {
    k = (k + 1) / 2;
    ++layers;
  }
  return layers;
}

GadgetEmission reduce_projector_tree(QubitLayout& layout, std::span<const Qubit> qubits,
                                     std::span<const int> target) {
  if (qubits.size() < 2) throw std::invalid_argument("reduce_projector_tree: need at least two qubits");
  if (target.size() != qubits.size()) throw std::invalid_argument("reduce_projector_tree: target width mismatch");
  GadgetEmission tree;
  tree.name = "projector_tree";
  std::vector<std::pair<Qubit, int>> level;
  for (std::size_t k = 0; k < qubits.size(); ++k) level.emplace_back(qubits[k], target[k]);
  while (level.size() > 1) {
    std::vector<std::pair<Qubit, int>> next;
    for (std::size_t k = 0; k + 1 < level.size(); k += 2) {
      auto g = reduce_projector_pair(layout, level[k].first, level[k + 1].first, level[k].second,
                                     level[k + 1].second);
      next.emplace_back(*g.output, 0);
      tree.absorb(std::move(g));
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  tree.output = level.front().first;
  return tree;
}

GadgetEmission swap_gadget(Qubit a, Qubit b, Qubit c, Qubit d) {
  const std::vector<Qubit> all{a, b, c, d};
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = x + 1; y < 4; ++y)
      if (all[x] == all[y]) throw std::invalid_argument("swap_gadget: qubits must be distinct");
  GadgetEmission g;
  g.name = "swap";
  // chi (P^{01}_{c,a} + P^{10}_{c,a} + P^{01}_{d,b} + P^{10}_{d,b}) chi
  for (const auto& [x, y] : {std::pair{c, b}, std::pair{d, a}}) {
    PauliSum part = PauliSum::identity(0.5);
    part.add(PauliString({{x, Pauli::Z}, {y, Pauli::Z}}), -0.5);
    g.add_component(std::move(part));
  }
  return g;
}

PauliSum swap_gadget_one_sided(Qubit a, Qubit b, Qubit c, Qubit d) {
  PauliSum mismatch;
  for (const auto& [x, y] : {std::pair{c, a}, std::pair{d, b}}) {
    mismatch += expand_projector({{{x, 0}, {y, 1}}});
    mismatch += expand_projector({{{x, 1}, {y, 0}}});
  }
  return mismatch * swap_sum(a, b);
}

GadgetEmission equality_gadget(Qubit a, Qubit c) {
  if (a == c) throw std::invalid_argument("equality_gadget: qubits must differ");
  GadgetEmission g;
  g.name = "copy";
  PauliSum part = PauliSum::identity(0.5);
  part.add(PauliString({{a, Pauli::Z}, {c, Pauli::Z}}), -0.5);
  g.add_component(std::move(part));
  return g;
}

GadgetEmission binary_to_brgc_gadget(std::span<const Qubit> b_reg, std::span<const Qubit> g_reg) {
  if (b_reg.size() != g_reg.size() || b_reg.empty())
    throw std::invalid_argument("binary_to_brgc_gadget: registers must have equal nonzero width");
  GadgetEmission g;
  g.name = "binary_to_brgc";
  const std::size_t n = b_reg.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // P^{100} + P^{111} + P^{010} + P^{001} on (g_i, b_i, b_{i+1}): odd parity.
    const std::vector<Qubit> q{g_reg[i], b_reg[i], b_reg[i + 1]};
    PauliSum part;
    for (std::uint64_t v : {0b001U, 0b111U, 0b010U, 0b100U}) part += projector_on(q, v);
    g.add_component(std::move(part));
  }
  PauliSum msb = PauliSum::identity(0.5);
  msb.add(PauliString({{g_reg[n - 1], Pauli::Z}, {b_reg[n - 1], Pauli::Z}}), -0.5);
  g.add_component(std::move(msb));
  return g;
}

GadgetEmission less_than_comparator(QubitLayout& layout, std::span<const Qubit> a_reg,
                                    std::span<const Qubit> b_reg, ComparatorMode mode) {
  if (a_reg.size() != b_reg.size()) throw std::invalid_argument("less_than_comparator: width mismatch");
  if (a_reg.empty()) throw std::invalid_argument("less_than_comparator: empty registers");
  GadgetEmission cmp;
  cmp.name = mode == ComparatorMode::serial ? "comparator_serial" : "comparator_tree";
  if (mode == ComparatorMode::tree) {
    cmp.output = tree_compare(layout, a_reg, b_reg, 0, a_reg.size(), false, cmp).lt;
    return cmp;
  }
  auto base = and_gate(layout, a_reg[0], true, b_reg[0], false);
  Qubit lt = *base.output;
  cmp.absorb(std::move(base));
  for (std::size_t k = 1; k < a_reg.size(); ++k) {
    auto x = xor_gate(layout, a_reg[k], b_reg[k]);
    auto u = and_gate(layout, *x.output, false, b_reg[k], false);
    auto v = and_gate(layout, *x.output, true, lt, false);
    auto o = or_gate(layout, *u.output, *v.output);
    lt = *o.output;
    cmp.absorb(std::move(x));
    cmp.absorb(std::move(u));
    cmp.absorb(std::move(v));
    cmp.absorb(std::move(o));
  }
  cmp.output = lt;
  return cmp;
}

GadgetEmission ordering_penalty_U(QubitLayout& layout, const ProblemSpec& spec) {
  GadgetEmission u;
  u.name = "ordering_U";
  if (spec.A < 2) return u;
  if (spec.mode == SynthesisMode::inline_) {
    const unsigned m = spec.base_qubits();
    if (m > spec.cap_qubits) throw std::length_error("inline ordering projector exceeds qubit cap");
    std::vector<double> table(std::size_t{1} << m);
    for (std::uint64_t x = 0; x < table.size(); ++x)
      table[x] = strictly_ordered(decode_keys(x, spec.A, spec.n, spec.D, spec.code)) ? 0.0 : 1.0;
    std::vector<Qubit> reg(m);
    for (unsigned q = 0; q < m; ++q) reg[q] = q;
    u.add_component(diagonal_to_zsum(table, reg));
    return u;
  }
  std::vector<Qubit> flags;
  for (unsigned a = 0; a + 1 < spec.A; ++a) {
    const auto lhs = layout.particle_block(a);
    const auto rhs = layout.particle_block(a + 1);
    auto c = less_than_comparator(layout, lhs, rhs, spec.comparator);
    flags.push_back(*c.output);
    u.absorb(std::move(c));
  }
  Qubit violation_source = flags.front();
  int ordered_value = 1;
  if (flags.size() > 1) {
    const std::vector<int> all_true(flags.size(), 1);
    auto tree = reduce_projector_tree(layout, flags, all_true);
    violation_source = *tree.output;
    ordered_value = 0;
    u.absorb(std::move(tree));
  }
  u.add_component(expand_projector({{{violation_source, 1 - ordered_value}}}));
  u.output = violation_source;
  return u;
}

std::vector<std::uint64_t> diagonal_kernel(std::span<const PauliSum> components,
                                           std::span<const Qubit> qubits, double tol) {
  if (qubits.size() > 62) throw std::length_error("diagonal_kernel: too many qubits");
  std::map<Qubit, std::size_t> position;
  for (std::size_t k = 0; k < qubits.size(); ++k) position[qubits[k]] = k;
  // Components bucketed by the position at which they become fully assigned.
  std::vector<std::vector<LocalComponent>> decided(qubits.size());
  std::vector<LocalComponent> constant;
  for (const auto& c : components) {
    auto local = localize(c, position);
    const bool has_support = std::any_of(local.terms.begin(), local.terms.end(),
                                         [](const LocalTerm& t) { return t.z_mask != 0; });
    (has_support ? decided[local.last] : constant).push_back(std::move(local));
  }
  for (const auto& c : constant)
    if (evaluate(c, 0) > tol) return {};

  std::vector<std::uint64_t> kernel;
  const std::size_t depth = qubits.size();
  // Iterative DFS over assignments, low positions first.
  std::vector<std::uint64_t> stack{0};
  std::vector<std::size_t> level{0};
  while (!stack.empty()) {
    const std::uint64_t x = stack.back();
    const std::size_t k = level.back();
    stack.pop_back();
    level.pop_back();
    if (k == depth) {
      kernel.push_back(x);
      continue;
    }
    for (std::uint64_t b : {1U, 0U}) {
      const std::uint64_t y = x | (b << k);
      bool ok = true;
      for (const auto& c : decided[k])
        if (evaluate(c, y) > tol) {
          ok = false;
          break;
        }
      if (ok) {
        stack.push_back(y);
        level.push_back(k + 1);
      }
    }
  }
  std::sort(kernel.begin(), kernel.end());
  return kernel;
}

double diagonal_minimum(const PauliSum& diagonal) {
  std::vector<Qubit> support;
  for (const auto& [s, c] : diagonal.raw())
    for (const auto& [q, p] : s.letters()) support.push_back(q);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  if (support.size() > 20) throw std::length_error("diagonal_minimum: support too large");
  std::map<Qubit, std::size_t> position;
  for (std::size_t k = 0; k < support.size(); ++k) position[support[k]] = k;
  const auto local = localize(diagonal, position);
  double lo = evaluate(local, 0);
  for (std::uint64_t x = 1; x < (std::uint64_t{1} << support.size()); ++x) lo = std::min(lo, evaluate(local, x));
  return lo;
}

}  // namespace fermlap
