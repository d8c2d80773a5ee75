#include "fermlap/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fermlap/transform.hpp"

namespace fermlap {

namespace {

constexpr Complex kI{0.0, 1.0};

// Single-qubit product table: returns (phase, letter) with letter 0 meaning I.
std::pair<Complex, int> letter_product(Pauli a, Pauli b) {
  const int x = static_cast<int>(a);
  const int y = static_cast<int>(b);
  if (x == y) return {1.0, 0};
  const int r = 6 - x - y;  // the remaining letter
  // XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i.
  const bool cyclic = (y - x + 3) % 3 == 1;
  return {cyclic ? kI : -kI, r};
}

Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void check_span(const PauliSum& s, unsigned num_qubits) {
  if (num_qubits > 30) throw std::length_error("matrix realization capped at 30 qubits");
  if (s.qubit_span() > num_qubits)
    throw std::out_of_range("Pauli sum touches qubit " + std::to_string(s.qubit_span() - 1) +
                            " outside a " + std::to_string(num_qubits) + "-qubit register");
}

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

PauliString::PauliString(std::vector<Letter> letters) : letters_(std::move(letters)) {
  if (!std::is_sorted(letters_.begin(), letters_.end())) std::sort(letters_.begin(), letters_.end());
  for (std::size_t k = 1; k < letters_.size(); ++k)
    if (letters_[k].first == letters_[k - 1].first)
      throw std::invalid_argument("PauliString: duplicate qubit index");
}

bool operator<(const PauliString& a, const PauliString& b) {
  const auto& la = a.letters_;
  const auto& lb = b.letters_;
  const std::size_t n = std::min(la.size(), lb.size());
  for (std::size_t k = 0; k < n; ++k)
    if (la[k].first != lb[k].first) return la[k].first < lb[k].first;
  if (la.size() != lb.size()) return la.size() < lb.size();
  for (std::size_t k = 0; k < n; ++k)
    if (la[k].second != lb[k].second) return la[k].second < lb[k].second;
  return false;
}

std::string PauliString::to_string() const {
  if (letters_.empty()) return "I";
  std::string out;
  for (const auto& [q, p] : letters_) {
    if (!out.empty()) out += ' ';
    out += to_char(p);
    out += std::to_string(q);
  }
  return out;
}

std::size_t PauliString::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& [q, p] : letters_) {
    const std::size_t v = (static_cast<std::size_t>(q) << 2) | static_cast<std::size_t>(p);
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::pair<Complex, PauliString> multiply(const PauliString& a, const PauliString& b) {
  const auto la = a.letters();
  const auto lb = b.letters();
  std::vector<PauliString::Letter> out;
  out.reserve(la.size() + lb.size());
  Complex phase = 1.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < la.size() || j < lb.size()) {
    if (j == lb.size() || (i < la.size() && la[i].first < lb[j].first)) {
      out.push_back(la[i++]);
    } else if (i == la.size() || lb[j].first < la[i].first) {
      out.push_back(lb[j++]);
    } else {
      const auto [ph, letter] = letter_product(la[i].second, lb[j].second);
      phase *= ph;
      if (letter != 0) out.emplace_back(la[i].first, static_cast<Pauli>(letter));
      ++i;
      ++j;
    }
  }
  return {phase, PauliString(std::move(out))};
}

PauliSum::PauliSum(Complex c, PauliString s) { add(s, c); }

std::vector<PauliTerm> PauliSum::terms() const {
  std::vector<PauliTerm> out;
  out.reserve(terms_.size());
  for (const auto& [s, c] : terms_) out.push_back({c, s});
  std::sort(out.begin(), out.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
  return out;
}

Complex PauliSum::coefficient(const PauliString& s) const {
  const auto it = terms_.find(s);
  return it == terms_.end() ? Complex{} : it->second;
}

void PauliSum::add(const PauliString& s, Complex c) {
  auto [it, inserted] = terms_.try_emplace(s, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) <= kZeroThreshold) terms_.erase(it);
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  for (const auto& [s, c] : other.terms_) add(s, c);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  for (const auto& [s, c] : other.terms_) add(s, -c);
  return *this;
}

PauliSum& PauliSum::operator*=(Complex c) {
  if (std::abs(c) == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= c;
    if (std::abs(it->second) <= kZeroThreshold)
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

std::size_t PauliSum::max_weight() const {
  std::size_t w = 0;
  for (const auto& [s, c] : terms_) w = std::max(w, s.weight());
  return w;
}

Qubit PauliSum::qubit_span() const {
  Qubit span = 0;
  for (const auto& [s, c] : terms_)
    if (!s.is_identity()) span = std::max(span, s.max_qubit() + 1);
  return span;
}

std::map<std::size_t, std::size_t> PauliSum::weight_histogram() const {
  std::map<std::size_t, std::size_t> h;
  for (const auto& [s, c] : terms_) ++h[s.weight()];
  return h;
}

double PauliSum::one_norm() const {
  double n = 0.0;
  for (const auto& [s, c] : terms_) n += std::abs(c);
  return n;
}

PauliSum PauliSum::adjoint() const {
  // Pauli strings are Hermitian, so only coefficients conjugate.
  PauliSum out;
  out.terms_.reserve(terms_.size());
  for (const auto& [s, c] : terms_) out.terms_.emplace(s, std::conj(c));
  return out;
}

PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
PauliSum operator*(Complex c, PauliSum a) { return a *= c; }

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  PauliSum out;
  for (const auto& [sa, ca] : a.raw())
    for (const auto& [sb, cb] : b.raw()) {
      auto [phase, s] = multiply(sa, sb);
      out.add(s, phase * ca * cb);
    }
  return out;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) { return multiply(a, b); }

bool approx_equal(const PauliSum& a, const PauliSum& b, double tol) {
  for (const auto& [s, c] : a.raw())
    if (std::abs(c - b.coefficient(s)) > tol) return false;
  for (const auto& [s, c] : b.raw())
    if (std::abs(c - a.coefficient(s)) > tol) return false;
  return true;
}

bool is_hermitian(const PauliSum& s, double tol) {
  for (const auto& [str, c] : s.raw())
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

PauliSum expand_projector(const Projector& p) {
  PauliSum out = PauliSum::identity();
  for (const auto& [q, bit] : p.assignments) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("projector bit must be 0 or 1");
    PauliSum factor = PauliSum::identity(0.5);
    factor.add(PauliString::single(q, Pauli::Z), bit == 0 ? 0.5 : -0.5);
    out = out * factor;
  }
  return out;
}

PauliSum projector_on(std::span<const Qubit> qubits, std::uint64_t value) {
  Projector p;
  for (std::size_t k = 0; k < qubits.size(); ++k)
    p.assignments[qubits[k]] = static_cast<int>((value >> k) & 1U);
  return expand_projector(p);
}

PauliSum swap_sum(Qubit i, Qubit j) {
  if (i == j) throw std::invalid_argument("swap_sum: qubits must differ");
  PauliSum s = PauliSum::identity(0.5);
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) s.add(PauliString({{i, p}, {j, p}}), 0.5);
  return s;
}

void write_term_list(std::ostream& os, const PauliSum& s) {
  char buf[64];
  for (const auto& t : s.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g", t.coefficient.real() + 0.0,
                  t.coefficient.imag() + 0.0);
    os << buf << ' ' << t.string.to_string() << '\n';
  }
}

PauliSum read_term_list(std::istream& is) {
  PauliSum s;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double re = 0.0;
    double im = 0.0;
    if (!(ls >> re >> im)) throw std::runtime_error("term list: bad coefficient in '" + line + "'");
    std::vector<PauliString::Letter> letters;
    std::string tok;
    while (ls >> tok) {
      if (tok == "I") continue;
      Pauli p{};
      switch (tok[0]) {
        case 'X': p = Pauli::X; break;
        case 'Y': p = Pauli::Y; break;
        case 'Z': p = Pauli::Z; break;
        default: throw std::runtime_error("term list: bad letter '" + tok + "'");
      }
      letters.emplace_back(static_cast<Qubit>(std::stoul(tok.substr(1))), p);
    }
    s.add(PauliString(std::move(letters)), {re, im});
  }
  return s;
}

std::vector<MaskedTerm> to_masked(const PauliSum& s) {
  std::vector<MaskedTerm> out;
  out.reserve(s.size());
  for (const auto& [str, c] : s.raw()) {
    MaskedTerm m;
    m.coefficient = c;
    for (const auto& [q, p] : str.letters()) {
      if (q >= 64) throw std::out_of_range("masked terms support qubits < 64");
      const std::uint64_t bit = std::uint64_t{1} << q;
      if (p != Pauli::Z) m.x_mask |= bit;
      if (p != Pauli::X) m.z_mask |= bit;
      if (p == Pauli::Y) ++m.y_count;
    }
    out.push_back(m);
  }
  return out;
}

Eigen::SparseMatrix<Complex> to_matrix(const PauliSum& s, unsigned num_qubits) {
  check_span(s, num_qubits);
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;

  // Group by flip mask; within a group the diagonal factor is a Z-polynomial
  // evaluated on every basis state with one Walsh-Hadamard transform.
  std::map<std::uint64_t, std::vector<MaskedTerm>> groups;
  for (const auto& t : to_masked(s)) groups[t.x_mask].push_back(t);

  std::vector<Eigen::Triplet<Complex>> triplets;
  std::vector<Complex> table(dim);
  for (const auto& [flip, terms] : groups) {
    std::fill(table.begin(), table.end(), Complex{});
    for (const auto& t : terms) table[t.z_mask] += t.coefficient * i_power(t.y_count);
    walsh_hadamard(std::span<Complex>(table));
    for (std::uint64_t x = 0; x < dim; ++x)
      if (std::abs(table[x]) > PauliSum::kZeroThreshold)
        triplets.emplace_back(static_cast<int>(x ^ flip), static_cast<int>(x), table[x]);
  }
  Eigen::SparseMatrix<Complex> m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Eigen::MatrixXcd to_dense(const PauliSum& s, unsigned num_qubits) {
  if (num_qubits > 14) throw std::length_error("dense realization capped at 14 qubits");
  return Eigen::MatrixXcd(to_matrix(s, num_qubits));
}

std::vector<MatrixElement> matrix_columns(const PauliSum& s, unsigned num_qubits,
                                         std::span<const std::uint64_t> cols) {
  if (num_qubits > 64) throw std::length_error("basis indices are capped at 64 qubits");
  if (s.qubit_span() > num_qubits) throw std::out_of_range("Pauli sum touches a qubit outside the register");
  std::map<std::uint64_t, std::vector<MaskedTerm>> groups;
  for (auto t : to_masked(s)) {
    t.coefficient *= i_power(t.y_count);
    groups[t.x_mask].push_back(t);
  }
  std::vector<MatrixElement> out;
  for (const std::uint64_t c : cols)
    for (const auto& [flip, terms] : groups) {
      Complex v{};
      for (const auto& t : terms) v += (std::popcount(c & t.z_mask) & 1) ? -t.coefficient : t.coefficient;
      if (std::abs(v) > PauliSum::kZeroThreshold) out.push_back({c ^ flip, c, v});
    }
  return out;
}

}  // namespace fermlap
