#include "fermlap/encoding.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace fermlap {

std::string to_string(SynthesisMode m) { return m == SynthesisMode::inline_ ? "inline" : "gadget"; }
std::string to_string(PositionCode c) { return c == PositionCode::binary ? "binary" : "brgc"; }
std::string to_string(ComparatorMode c) { return c == ComparatorMode::serial ? "serial" : "tree"; }

void ProblemSpec::validate() const {
  if (D < 1 || D > 3) throw std::invalid_argument("D must be 1, 2 or 3");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (A < 1) throw std::invalid_argument("A must be at least 1");
  if (n * D > 20) throw std::invalid_argument("n*D above 20 is not supported");
  if (A > 1 && static_cast<std::uint64_t>(A) > sites())
    throw std::invalid_argument("A exceeds the number of lattice sites");
  if (mode == SynthesisMode::gadget && code != PositionCode::binary)
    throw std::invalid_argument("gadget mode keeps binary base registers (code=binary)");
  if (Q && *Q <= 0.0) throw std::invalid_argument("Q must be positive");
}

std::uint64_t brgc_encode(std::uint64_t x, unsigned n) {
  if (n < 64 && x >= (std::uint64_t{1} << n)) throw std::out_of_range("brgc_encode: value out of range");
  return x ^ (x >> 1);
}

std::uint64_t brgc_decode(std::uint64_t g, unsigned n) {
  if (n < 64 && g >= (std::uint64_t{1} << n)) throw std::out_of_range("brgc_decode: value out of range");
  std::uint64_t x = g;
  for (unsigned shift = 1; shift < 64; shift <<= 1) x ^= x >> shift;
  return x;
}

Key interleave_key(const LatticePoint& p, unsigned n, unsigned D) {
  if (p.coords.size() != D) throw std::invalid_argument("lattice point has wrong dimension");
  Key key = 0;
  for (unsigned d = 0; d < D; ++d) {
    if (p.coords[d] >= (std::uint64_t{1} << n)) throw std::out_of_range("coordinate out of range");
    for (unsigned i = 0; i < n; ++i) key |= ((p.coords[d] >> i) & 1U) << (i * D + d);
  }
  return key;
}

LatticePoint point_from_key(Key key, unsigned n, unsigned D) {
  LatticePoint p{std::vector<std::uint64_t>(D, 0)};
  for (unsigned d = 0; d < D; ++d)
    for (unsigned i = 0; i < n; ++i) p.coords[d] |= ((key >> (i * D + d)) & 1U) << i;
  return p;
}

std::uint64_t encode_block(Key key, unsigned n, unsigned D, PositionCode code) {
  if (code == PositionCode::binary) return key;
  LatticePoint p = point_from_key(key, n, D);
  for (auto& c : p.coords) c = brgc_encode(c, n);
  return interleave_key(p, n, D);
}

Key decode_block(std::uint64_t bits, unsigned n, unsigned D, PositionCode code) {
  if (code == PositionCode::binary) return bits;
  LatticePoint p = point_from_key(bits, n, D);
  for (auto& c : p.coords) c = brgc_decode(c, n);
  return interleave_key(p, n, D);
}

std::string to_string(Register r) {
  switch (r) {
    case Register::base: return "base";
    case Register::gray_copy: return "gray_copy";
    case Register::comparator_anc: return "comparator_anc";
    case Register::swap_anc_L: return "swap_anc_L";
    case Register::swap_anc_R: return "swap_anc_R";
    case Register::gadget_anc: return "gadget_anc";
  }
  return "?";
}

QubitLayout::QubitLayout(unsigned A, unsigned n, unsigned D) : A_(A), n_(n), D_(D) {
  roles_.reserve(static_cast<std::size_t>(A) * n * D);
  for (unsigned a = 0; a < A; ++a)
    for (unsigned i = 0; i < n; ++i)
      for (unsigned d = 0; d < D; ++d)
        roles_.push_back({Register::base, static_cast<int>(a), static_cast<int>(i), static_cast<int>(d)});
}

Qubit QubitLayout::base(unsigned a, unsigned i, unsigned d) const {
  if (a >= A_ || i >= n_ || d >= D_) throw std::out_of_range("base qubit index out of range");
  return a * n_ * D_ + i * D_ + d;
}

std::vector<Qubit> QubitLayout::particle_block(unsigned a) const {
  std::vector<Qubit> out;
  for (unsigned i = 0; i < n_; ++i)
    for (unsigned d = 0; d < D_; ++d) out.push_back(base(a, i, d));
  return out;
}

std::vector<Qubit> QubitLayout::axis_register(unsigned a, unsigned d) const {
  std::vector<Qubit> out;
  for (unsigned i = 0; i < n_; ++i) out.push_back(base(a, i, d));
  return out;
}

Qubit QubitLayout::allocate(Register reg, int a, int i, int d) {
  roles_.push_back({reg, a, i, d});
  return static_cast<Qubit>(roles_.size() - 1);
}

std::vector<Qubit> QubitLayout::allocate_many(std::size_t count, Register reg, int a, int d) {
  std::vector<Qubit> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(allocate(reg, a, static_cast<int>(k), d));
  return out;
}

std::size_t QubitLayout::count(Register reg) const {
  return static_cast<std::size_t>(
      std::count_if(roles_.begin(), roles_.end(), [reg](const QubitRole& r) { return r.reg == reg; }));
}

void QubitLayout::dump(std::ostream& os) const {
  for (std::size_t q = 0; q < roles_.size(); ++q) {
    const auto& r = roles_[q];
    os << q << ' ' << to_string(r.reg) << ' ' << r.a << ' ' << r.i << ' ' << r.d << '\n';
  }
}

FermionBasis::FermionBasis(unsigned A, std::vector<Key> flat_keys) : A_(A), keys_(std::move(flat_keys)) {
  if (A_ == 0 || keys_.size() % A_ != 0) throw std::invalid_argument("FermionBasis: ragged key list");
}

std::optional<std::size_t> FermionBasis::index_of(std::span<const Key> tuple) const {
  if (tuple.size() != A_) return std::nullopt;
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto s = state(mid);
    if (std::lexicographical_compare(s.begin(), s.end(), tuple.begin(), tuple.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size() && std::equal(tuple.begin(), tuple.end(), state(lo).begin())) return lo;
  return std::nullopt;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    r = r * (n - k + j) / j;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

FermionBasis enumerate_basis(const ProblemSpec& spec) {
  const std::uint64_t sites = spec.sites();
  if (spec.A < 1 || spec.A > sites) throw std::invalid_argument("A too large for lattice");
  if (binomial(sites, spec.A) > spec.cap_basis)
    throw std::length_error("antisymmetric basis exceeds the configured cap");
  std::vector<Key> flat;
  std::vector<Key> tuple(spec.A);
  for (unsigned a = 0; a < spec.A; ++a) tuple[a] = a;
  // Lexicographic combinations.
  while (true) {
    flat.insert(flat.end(), tuple.begin(), tuple.end());
    int k = static_cast<int>(spec.A) - 1;
    while (k >= 0 && tuple[k] == sites - spec.A + k) --k;
    if (k < 0) break;
    ++tuple[k];
    for (unsigned j = k + 1; j < spec.A; ++j) tuple[j] = tuple[j - 1] + 1;
  }
  return FermionBasis(spec.A, std::move(flat));
}

std::uint64_t basis_state_index(std::span<const Key> tuple, unsigned n, unsigned D, PositionCode code) {
  std::uint64_t index = 0;
  const unsigned width = n * D;
  for (std::size_t a = 0; a < tuple.size(); ++a)
    index |= encode_block(tuple[a], n, D, code) << (a * width);
  return index;
}

std::vector<Key> decode_keys(std::uint64_t index, unsigned A, unsigned n, unsigned D, PositionCode code) {
  const unsigned width = n * D;
  const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
  std::vector<Key> keys(A);
  for (unsigned a = 0; a < A; ++a) keys[a] = decode_block((index >> (a * width)) & mask, n, D, code);
  return keys;
}

bool strictly_ordered(std::span<const Key> keys) {
  for (std::size_t k = 1; k < keys.size(); ++k)
    if (!(keys[k - 1] < keys[k])) return false;
  return true;
}

}  // namespace fermlap
