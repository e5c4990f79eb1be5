#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "unitri/matrix.hpp"

namespace unitri {

// Label of a two-sided orbit: a non-attacking set D of strictly upper
// cells (at most one per row and at most one per column) together with a
// nonzero value phi on each cell.  Cells are kept sorted row-major.
struct SuperClassLabel {
  int n = 0;
  std::vector<std::pair<int, int>> cells;
  std::vector<std::int64_t> phi;  // parallel to cells, values in [1, p)

  friend bool operator==(const SuperClassLabel& a, const SuperClassLabel& b) {
    return a.n == b.n && a.cells == b.cells && a.phi == b.phi;
  }
  friend bool operator<(const SuperClassLabel& a, const SuperClassLabel& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.cells != b.cells) return a.cells < b.cells;
    return a.phi < b.phi;
  }
};

// All p^{n-2} elements of the conjugacy class C_i(x) of I + x E(i, i+1),
// x a nonzero residue, 1 <= i <= n-1.
std::vector<UniTriMatrix> conjugacy_class_elements(int i, std::int64_t x,
                                                   int n, PrimeModulus p);

// Streams every label in a fixed reproducible order: cell sets D in
// sequence-lexicographic order (row-major cell order, prefixes first),
// and for each D all value tuples with the last cell varying fastest.
void for_each_label(int n, PrimeModulus p,
                    const std::function<void(const SuperClassLabel&)>& fn);

std::vector<SuperClassLabel> enumerate_labels(int n, PrimeModulus p);

std::uint64_t count_labels(int n, PrimeModulus p);

// d(D) = sum over cells of (col - row - 1).
int d_statistic(const SuperClassLabel& label);

// Number of interleaved pairs (i,j), (k,l) in D with i < k < j < l.
int i_statistic(const SuperClassLabel& label);

// p^{2 d(D) - i(D)}, the squared-degree weight; the exponent is always
// nonnegative since i(D) <= d(D).
std::uint64_t degree_term(const SuperClassLabel& label, PrimeModulus p);

// Sum of degree_term over all labels; equals the group order.
std::uint64_t degree_identity_sum(int n, PrimeModulus p);

// Reduce m - I by row operations from below and column operations from
// the left (both stay inside the two-sided G x G action) until every
// column has a single entry and every such pivot has a clean row.  The
// surviving entries form the label of the orbit of m.
SuperClassLabel canonical_form(const UniTriMatrix& m);

}  // namespace unitri
