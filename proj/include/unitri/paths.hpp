#pragma once

#include <cstdint>
#include <vector>

#include "unitri/word.hpp"

namespace unitri {

struct WordStats {
  std::int64_t length = 0;
  int parity = 0;  // length mod 2
  // Step multiplicities indexed by 2*(row-1) + (0 for +, 1 for -).
  std::vector<std::int64_t> counts;
  std::int64_t max_multiplicity = 0;
};

WordStats word_stats(const GeneratorWord& w, int n);

// I + c E(i, i+1) in min(c, p-c) steps.
GeneratorWord word_superdiag_power(int i, std::int64_t c, int n,
                                   PrimeModulus p);

// I + b E(i, i+2) from commutators of superdiagonal powers: a square
// part of length 4*floor(sqrt(b)) plus a remainder part; even length,
// at most 12 floor(sqrt(b)) + 10 steps.
GeneratorWord word_second_diag(int i, std::int64_t b, int n, PrimeModulus p);

// Conjugation ladder: evaluates to I + sign*coeff*(E(1,i+1) + ... +
// E(i,i+1)) with coeff = a when times_a is set, else 1.  Odd length
// 2(i-1) + coeff.
GeneratorWord word_Ai(int i, int sign, bool times_a, int n, PrimeModulus p);

// Odd-length generator word evaluating exactly to the class element b of
// C_i(x), x = sign * (times_a ? a : 1); throws std::invalid_argument if
// b does not lie in that class.
GeneratorWord word_class_element(const UniTriMatrix& b, int i, int sign,
                                 bool times_a);

}  // namespace unitri
