#include "unitri/paths.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace unitri {

WordStats word_stats(const GeneratorWord& w, int n) {
  WordStats s;
  s.length = static_cast<std::int64_t>(w.length());
  s.parity = static_cast<int>(s.length % 2);
  s.counts.assign(2 * static_cast<std::size_t>(n - 1), 0);
  for (const auto& step : w.steps) {
    if (step.row < 1 || step.row >= n)
      throw std::invalid_argument("word_stats: step row out of range");
    ++s.counts[2 * static_cast<std::size_t>(step.row - 1) +
               (step.sign < 0 ? 1 : 0)];
  }
  for (std::int64_t c : s.counts) s.max_multiplicity = std::max(s.max_multiplicity, c);
  return s;
}

GeneratorWord word_superdiag_power(int i, std::int64_t c, int n,
                                   PrimeModulus p) {
  if (i < 1 || i >= n)
    throw std::invalid_argument("word_superdiag_power: i out of range");
  c = mod_reduce(c, p.p);
  if (c == 0) return {};
  return c <= p.p - c ? repeated_step(i, 1, c)
                      : repeated_step(i, -1, p.p - c);
}

GeneratorWord word_second_diag(int i, std::int64_t b, int n, PrimeModulus p) {
  if (i < 1 || i + 2 > n)
    throw std::invalid_argument("word_second_diag: needs i + 2 <= n");
  b = mod_reduce(b, p.p);
  GeneratorWord w;
  if (b == 0) return w;
  const auto s = static_cast<std::int64_t>(isqrt_u64(static_cast<std::uint64_t>(b)));
  const std::int64_t r = b - s * s;
  // [I + s E(i+1,i+2), I - s E(i,i+1)] contributes s^2 to (i, i+2).
  w.append(repeated_step(i + 1, -1, s));
  w.append(repeated_step(i, 1, s));
  w.append(repeated_step(i + 1, 1, s));
  w.append(repeated_step(i, -1, s));
  if (r > 0) {
    // [I + E(i+1,i+2), I - r E(i,i+1)] contributes the remainder r.
    w.push(i + 1, -1);
    w.append(repeated_step(i, 1, r));
    w.push(i + 1, 1);
    w.append(repeated_step(i, -1, r));
  }
  return w;
}

GeneratorWord word_Ai(int i, int sign, bool times_a, int n, PrimeModulus p) {
  if (i < 1 || i >= n) throw std::invalid_argument("word_Ai: i out of range");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("word_Ai: sign must be +1 or -1");
  const std::int64_t seed = times_a ? closest_odd_sqrt(p) : 1;
  GeneratorWord w;
  for (int j = 1; j < i; ++j) w.push(j, 1);
  w.append(repeated_step(i, sign, seed));
  for (int j = i - 1; j >= 1; --j) w.push(j, -1);
  return w;
}

namespace {

// Word for I + c E(r, r+2): the plain construction for c or the inverse
// of the one for p - c, whichever is shorter.
GeneratorWord second_diag_signed(int r, std::int64_t c, int n,
                                 PrimeModulus p) {
  c = mod_reduce(c, p.p);
  if (c == 0) return {};
  GeneratorWord direct = word_second_diag(r, c, n, p);
  GeneratorWord flipped = word_second_diag(r, p.p - c, n, p);
  return direct.length() <= flipped.length() ? direct
                                             : inverse_word(flipped);
}

// Word under construction together with its running evaluation, so every
// coefficient below is computed from the actual current state.
class TrackedWord {
 public:
  TrackedWord(int n, PrimeModulus p) : n_(n), p_(p), m_(n, p) {}

  const UniTriMatrix& matrix() const { return m_; }
  const GeneratorWord& word() const { return word_; }
  std::int64_t entry(int i, int j) const { return m_(i, j); }

  void right_mul(const GeneratorWord& w) {
    m_ = mat_mul(m_, eval_word(w, n_, p_));
    word_.append(w);
  }
  void left_mul(const GeneratorWord& w) {
    m_ = mat_mul(eval_word(w, n_, p_), m_);
    word_.prepend(w);
  }
  // Conjugate the whole current word by I + c E(r, r+2).
  void conj_second_diag(int r, std::int64_t c) {
    GeneratorWord g = second_diag_signed(r, c, n_, p_);
    GeneratorWord ginv = second_diag_signed(r, -c, n_, p_);
    m_ = mat_mul(mat_mul(eval_word(g, n_, p_), m_), eval_word(ginv, n_, p_));
    word_.prepend(g);
    word_.append(ginv);
  }

 private:
  int n_;
  PrimeModulus p_;
  GeneratorWord word_;
  UniTriMatrix m_;
};

void require(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("word_class_element: ") + what);
}

// Fill the arithmetic progression of columns start_col, start_col + 2,
// ... with the multiples of the base column demanded by b; tw already
// holds the column start_col - 2 with an invertible multiplier.  Columns
// whose target is zero but that sit between nonzero targets are filled
// with a helper multiplier of one and cleared right to left afterwards.
void chain_fill(TrackedWord& tw, const UniTriMatrix& b, int i, int start_col,
                std::int64_t x) {
  const int n = b.dim();
  const std::int64_t p = b.modulus().p;
  const std::int64_t xinv = mod_inverse(x, p);

  int last = 0;
  for (int col = start_col; col <= n; col += 2)
    if (b(i, col) != 0) last = col;
  if (last == 0) return;

  std::vector<int> temp_cols;
  int prev_col = start_col - 2;
  for (int col = start_col; col <= last; col += 2) {
    const std::int64_t lambda = mod_reduce(b(i, col) * xinv, p);
    const std::int64_t desired = lambda != 0 ? lambda : 1;
    if (lambda == 0) temp_cols.push_back(col);
    // Conjugating by I + c E(prev_col, col) subtracts c times column
    // prev_col from column col.
    const std::int64_t prev_mult = mod_reduce(tw.entry(i, prev_col) * xinv, p);
    const std::int64_t c =
        mod_reduce(-desired * mod_inverse(prev_mult, p), p);
    tw.conj_second_diag(prev_col, c);
    require(tw.entry(i, col) == mod_reduce(desired * x, p),
            "column transfer missed its target");
    prev_col = col;
  }

  for (auto it = temp_cols.rbegin(); it != temp_cols.rend(); ++it) {
    const int col = *it;
    const std::int64_t left_mult =
        mod_reduce(tw.entry(i, col - 2) * xinv, p);
    tw.conj_second_diag(col - 2, mod_inverse(left_mult, p));
    require(tw.entry(i, col) == 0, "helper column did not clear");
  }
}

// Build I + mu * (v_1 E(1, i+2) + ... + v_i E(i, i+2)) where v_j is the
// column-(i+1) profile of b (v_i = x): seed the ladder at row i+1, adjust
// rows 1..i-1 by conjugation, fix row i by left multiplication, then
// clear the seed row.
void build_base(TrackedWord& tw, const UniTriMatrix& b, int i,
                std::int64_t mu, std::int64_t x) {
  const int n = b.dim();
  const PrimeModulus p = b.modulus();

  GeneratorWord ladder;
  for (int j = 1; j <= i; ++j) ladder.push(j, 1);
  ladder.push(i + 1, 1);
  for (int j = i; j >= 1; --j) ladder.push(j, -1);
  tw.right_mul(ladder);

  for (int j = 1; j <= i - 1; ++j) {
    const std::int64_t want = mod_reduce(mu * b(j, i + 1), p.p);
    const std::int64_t cur = tw.entry(j, i + 2);
    if (cur == want) continue;
    const std::int64_t ref = tw.entry(j + 2, i + 2);
    const std::int64_t c =
        mod_reduce((want - cur) * mod_inverse(ref, p.p), p.p);
    tw.conj_second_diag(j, c);
    require(tw.entry(j, i + 2) == want, "base column fill missed");
  }

  const std::int64_t want_i = mod_reduce(mu * x, p.p);
  tw.left_mul(second_diag_signed(i, want_i - tw.entry(i, i + 2), n, p));
  require(tw.entry(i, i + 2) == want_i, "base row fix missed");

  GeneratorWord clear;
  clear.push(i + 1, -1);
  tw.left_mul(clear);
  require(tw.entry(i + 1, i + 2) == 0, "seed row did not clear");
}

}  // namespace

GeneratorWord word_class_element(const UniTriMatrix& b, int i, int sign,
                                 bool times_a) {
  const int n = b.dim();
  const PrimeModulus p = b.modulus();
  if (n < 2 || i < 1 || i >= n)
    throw std::invalid_argument("word_class_element: bad (i, n)");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("word_class_element: sign must be +1 or -1");
  const std::int64_t a = closest_odd_sqrt(p);
  const std::int64_t x =
      mod_reduce(static_cast<std::int64_t>(sign) * (times_a ? a : 1), p.p);
  const std::int64_t xinv = mod_inverse(x, p.p);

  // Membership: b must match the class pattern determined by its column
  // i+1 and row i entries exactly.
  UniTriMatrix expected(n, p);
  expected.set(i, i + 1, x);
  for (int j = 1; j < i; ++j) expected.set(j, i + 1, b(j, i + 1));
  for (int c = i + 2; c <= n; ++c) expected.set(i, c, b(i, c));
  for (int j = 1; j < i; ++j)
    for (int c = i + 2; c <= n; ++c)
      expected.set(j, c, xinv * b(j, i + 1) % p.p * b(i, c));
  if (!(expected == b))
    throw std::invalid_argument(
        "word_class_element: matrix is not in the class C_" +
        std::to_string(i) + "(" + std::to_string(x) + ")");

  // First factor: column i+1 and the block columns i+3, i+5, ...
  TrackedWord b1(n, p);
  if (i == 1) {
    b1.right_mul(repeated_step(1, sign, times_a ? a : 1));
  } else {
    GeneratorWord ladder;
    for (int j = 1; j < i; ++j) ladder.push(j, 1);
    ladder.push(i, sign);
    for (int j = i - 1; j >= 1; --j) ladder.push(j, -1);
    b1.right_mul(ladder);

    for (int j = 1; j <= i - 2; ++j) {
      const std::int64_t want = b(j, i + 1);
      const std::int64_t cur = b1.entry(j, i + 1);
      if (cur == want) continue;
      const std::int64_t ref = b1.entry(j + 2, i + 1);
      const std::int64_t c =
          mod_reduce((want - cur) * mod_inverse(ref, p.p), p.p);
      b1.conj_second_diag(j, c);
      require(b1.entry(j, i + 1) == want, "column fill missed");
    }

    // Conjugating by powers of E(i-1, i+1) fixes nothing here, so row
    // i-1 is adjusted by left multiplication instead.
    const std::int64_t fix =
        mod_reduce(b(i - 1, i + 1) - b1.entry(i - 1, i + 1), p.p);
    if (fix != 0) b1.left_mul(second_diag_signed(i - 1, fix, n, p));

    if (times_a) {
      const std::int64_t lift = mod_reduce(x - b1.entry(i, i + 1), p.p);
      b1.left_mul(word_superdiag_power(i, lift, n, p));
      require(b1.entry(i, i + 1) == x, "superdiagonal lift missed");
    }
  }
  if (i + 3 <= n) chain_fill(b1, b, i, i + 3, x);

  // Second factor: the block columns i+2, i+4, ...
  TrackedWord b2(n, p);
  bool need_b2 = false;
  for (int col = i + 2; col <= n; col += 2)
    if (b(i, col) != 0) need_b2 = true;
  if (need_b2) {
    const std::int64_t lambda1 = mod_reduce(b(i, i + 2) * xinv, p.p);
    const bool temp_base = lambda1 == 0;
    build_base(b2, b, i, temp_base ? 1 : lambda1, x);
    chain_fill(b2, b, i, i + 4, x);
    if (temp_base) {
      // Undo the helper base column by appending its inverse profile.
      TrackedWord undo(n, p);
      build_base(undo, b, i, p.p - 1, x);
      b2.right_mul(undo.word());
      require(b2.entry(i, i + 2) == 0, "helper base column did not clear");
    }
  }

  GeneratorWord word = b1.word();
  word.append(b2.word());
  if (!(eval_word(word, n, p) == b))
    throw std::logic_error("word_class_element: evaluation mismatch");
  if (word.length() % 2 != 1)
    throw std::logic_error("word_class_element: even word length");
  return word;
}

}  // namespace unitri
