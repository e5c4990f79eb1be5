#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "unitri/prime.hpp"

namespace unitri {

using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Upper unitriangular n x n matrix over Z/pZ: ones on the diagonal, zeros
// below, entries reduced to [0, p).  Row/column indices are 1-based to
// match the usual matrix-unit notation E(i, j).
class UniTriMatrix {
 public:
  UniTriMatrix(int n, PrimeModulus p);  // identity

  // I + c * E(i, j) with i < j.
  static UniTriMatrix elementary(int n, PrimeModulus p, int i, int j,
                                 std::int64_t c);

  int dim() const { return n_; }
  PrimeModulus modulus() const { return p_; }

  std::int64_t operator()(int i, int j) const { return m_(i - 1, j - 1); }
  void set(int i, int j, std::int64_t c);  // strictly upper positions only

  const IntMat& raw() const { return m_; }
  IntMat& raw() { return m_; }

  bool is_identity() const;

  friend bool operator==(const UniTriMatrix& a, const UniTriMatrix& b) {
    return a.n_ == b.n_ && a.p_ == b.p_ && a.m_ == b.m_;
  }

 private:
  int n_;
  PrimeModulus p_;
  IntMat m_;
};

UniTriMatrix mat_mul(const UniTriMatrix& a, const UniTriMatrix& b);
UniTriMatrix mat_inv(const UniTriMatrix& a);

// [x, y] = x^{-1} y^{-1} x y.
UniTriMatrix commutator(const UniTriMatrix& x, const UniTriMatrix& y);

// |U_n(F_p)| = p^{n(n-1)/2}; throws CapacityError past uint64 range.
std::uint64_t group_order(int n, PrimeModulus p);

// Strictly upper entries in row-major order (1,2), (1,3), ..., (n-1,n) as
// base-p digits, least significant first.
std::uint64_t encode_index(const UniTriMatrix& m);
UniTriMatrix decode_index(std::uint64_t idx, int n, PrimeModulus p);

// The strictly upper cells of an n x n matrix in the row-major order used
// by encode_index.
std::vector<std::pair<int, int>> upper_cells(int n);

}  // namespace unitri
