#include "unitri/matrix.hpp"

#include <stdexcept>
#include <string>

namespace unitri {

namespace {

void check_same_shape(const UniTriMatrix& a, const UniTriMatrix& b,
                      const char* op) {
  if (a.dim() != b.dim() || a.modulus() != b.modulus())
    throw std::invalid_argument(std::string(op) +
                                ": dimension or modulus mismatch");
}

}  // namespace

UniTriMatrix::UniTriMatrix(int n, PrimeModulus p) : n_(n), p_(p) {
  if (n < 1) throw std::invalid_argument("UniTriMatrix: n must be >= 1");
  m_ = IntMat::Identity(n, n);
}

UniTriMatrix UniTriMatrix::elementary(int n, PrimeModulus p, int i, int j,
                                      std::int64_t c) {
  UniTriMatrix m(n, p);
  m.set(i, j, c);
  return m;
}

void UniTriMatrix::set(int i, int j, std::int64_t c) {
  if (i < 1 || j > n_ || i >= j)
    throw std::invalid_argument("UniTriMatrix::set: position (" +
                                std::to_string(i) + "," + std::to_string(j) +
                                ") is not strictly upper");
  m_(i - 1, j - 1) = mod_reduce(c, p_.p);
}

bool UniTriMatrix::is_identity() const {
  return m_ == IntMat::Identity(n_, n_);
}

UniTriMatrix mat_mul(const UniTriMatrix& a, const UniTriMatrix& b) {
  check_same_shape(a, b, "mat_mul");
  const int n = a.dim();
  const std::int64_t p = a.modulus().p;
  UniTriMatrix r(n, a.modulus());
  // Entries are < p < 2^15 and the inner sums have at most n terms, so the
  // plain integer product cannot overflow int64.
  IntMat prod = a.raw() * b.raw();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) r.raw()(i, j) = mod_reduce(prod(i, j), p);
  return r;
}

UniTriMatrix mat_inv(const UniTriMatrix& a) {
  const int n = a.dim();
  const std::int64_t p = a.modulus().p;
  // (I + N)^{-1} = I - N + N^2 - ... with N nilpotent of index <= n.
  IntMat nil = a.raw() - IntMat::Identity(n, n);
  IntMat acc = IntMat::Identity(n, n);
  IntMat pow = IntMat::Identity(n, n);
  std::int64_t sign = 1;
  for (int k = 1; k < n; ++k) {
    pow = (pow * nil).eval();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) pow(i, j) = mod_reduce(pow(i, j), p);
    sign = -sign;
    acc += sign * pow;
  }
  UniTriMatrix r(n, a.modulus());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) r.raw()(i, j) = mod_reduce(acc(i, j), p);
  return r;
}

UniTriMatrix commutator(const UniTriMatrix& x, const UniTriMatrix& y) {
  check_same_shape(x, y, "commutator");
  return mat_mul(mat_mul(mat_inv(x), mat_inv(y)), mat_mul(x, y));
}

std::uint64_t group_order(int n, PrimeModulus p) {
  const unsigned m = static_cast<unsigned>(n) * (n - 1) / 2;
  return pow_u64_checked(static_cast<std::uint64_t>(p.p), m);
}

std::vector<std::pair<int, int>> upper_cells(int n) {
  std::vector<std::pair<int, int>> cells;
  cells.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) cells.emplace_back(i, j);
  return cells;
}

std::uint64_t encode_index(const UniTriMatrix& m) {
  const std::uint64_t p = static_cast<std::uint64_t>(m.modulus().p);
  group_order(m.dim(), m.modulus());  // overflow guard
  std::uint64_t idx = 0, place = 1;
  for (auto [i, j] : upper_cells(m.dim())) {
    idx += static_cast<std::uint64_t>(m(i, j)) * place;
    place *= p;
  }
  return idx;
}

UniTriMatrix decode_index(std::uint64_t idx, int n, PrimeModulus p) {
  const std::uint64_t order = group_order(n, p);
  if (idx >= order)
    throw std::invalid_argument("decode_index: index out of range");
  UniTriMatrix m(n, p);
  const std::uint64_t pp = static_cast<std::uint64_t>(p.p);
  for (auto [i, j] : upper_cells(n)) {
    m.set(i, j, static_cast<std::int64_t>(idx % pp));
    idx /= pp;
  }
  return m;
}

}  // namespace unitri
