#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "unitri/matrix.hpp"

namespace unitri {

// One generator of the simple walk: I + sign * E(row, row+1).
struct GeneratorStep {
  int row;   // 1 <= row <= n-1
  int sign;  // +1 or -1

  friend bool operator==(GeneratorStep a, GeneratorStep b) {
    return a.row == b.row && a.sign == b.sign;
  }
};

// Product of generators, evaluated left to right.
struct GeneratorWord {
  std::vector<GeneratorStep> steps;

  std::size_t length() const { return steps.size(); }
  void push(int row, int sign) { steps.push_back({row, sign}); }
  void push(GeneratorStep s) { steps.push_back(s); }
  void append(const GeneratorWord& w) {
    steps.insert(steps.end(), w.steps.begin(), w.steps.end());
  }
  void prepend(const GeneratorWord& w) {
    steps.insert(steps.begin(), w.steps.begin(), w.steps.end());
  }

  friend bool operator==(const GeneratorWord& a, const GeneratorWord& b) {
    return a.steps == b.steps;
  }
};

UniTriMatrix eval_word(const GeneratorWord& w, int n, PrimeModulus p);

// Reversed word with flipped signs; evaluates to the inverse.
GeneratorWord inverse_word(const GeneratorWord& w);

// count repetitions of the same step.
GeneratorWord repeated_step(int row, int sign, std::int64_t count);

// Serialization: whitespace-separated signed row tokens, e.g. "+1 -2 +1".
std::string format_word(const GeneratorWord& w);
GeneratorWord parse_word(std::string_view text);

}  // namespace unitri
