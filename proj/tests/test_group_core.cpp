#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "unitri/matrix.hpp"
#include "unitri/word.hpp"

using namespace unitri;

namespace {

UniTriMatrix random_element(int n, PrimeModulus p, std::mt19937_64& rng) {
  UniTriMatrix m(n, p);
  std::uniform_int_distribution<std::int64_t> dist(0, p.p - 1);
  for (auto [i, j] : upper_cells(n)) m.set(i, j, dist(rng));
  return m;
}

}  // namespace

TEST_CASE("prime modulus validation") {
  CHECK_NOTHROW(PrimeModulus(3));
  CHECK_NOTHROW(PrimeModulus(32749));
  CHECK_THROWS_AS(PrimeModulus(1), std::invalid_argument);
  CHECK_THROWS_AS(PrimeModulus(2), std::invalid_argument);
  CHECK_THROWS_AS(PrimeModulus(9), std::invalid_argument);
  CHECK_THROWS_AS(PrimeModulus(15), std::invalid_argument);
  CHECK_THROWS_AS(PrimeModulus(32767), std::invalid_argument);  // 7*31*151
}

TEST_CASE("modular helpers") {
  CHECK(mod_reduce(-1, 5) == 4);
  CHECK(mod_reduce(12, 5) == 2);
  CHECK(mod_symmetric(4, 5) == -1);
  CHECK(mod_symmetric(2, 5) == 2);
  for (std::int64_t p : {3, 5, 7, 11, 13})
    for (std::int64_t x = 1; x < p; ++x)
      CHECK(mod_reduce(x * mod_inverse(x, p), p) == 1);
}

TEST_CASE("closest odd sqrt") {
  CHECK(closest_odd_sqrt(PrimeModulus(3)) == 1);
  CHECK(closest_odd_sqrt(PrimeModulus(5)) == 3);
  CHECK(closest_odd_sqrt(PrimeModulus(7)) == 3);
  CHECK(closest_odd_sqrt(PrimeModulus(11)) == 3);
  CHECK(closest_odd_sqrt(PrimeModulus(13)) == 3);
  CHECK(closest_odd_sqrt(PrimeModulus(17)) == 5);
  CHECK(closest_odd_sqrt(PrimeModulus(23)) == 5);  // floor(sqrt 23) = 4
  CHECK(closest_odd_sqrt(PrimeModulus(29)) == 5);
  CHECK(closest_odd_sqrt(PrimeModulus(101)) == 11);
}

TEST_CASE("product of superdiagonal elementaries") {
  // (I + E(1,2)) (I + E(2,3)) over F_5 has the extra corner entry 1*1.
  PrimeModulus p(5);
  auto a = UniTriMatrix::elementary(3, p, 1, 2, 1);
  auto b = UniTriMatrix::elementary(3, p, 2, 3, 1);
  auto ab = mat_mul(a, b);
  CHECK(ab(1, 2) == 1);
  CHECK(ab(2, 3) == 1);
  CHECK(ab(1, 3) == 1);
  auto ba = mat_mul(b, a);
  CHECK(ba(1, 3) == 0);  // the group is not abelian
}

TEST_CASE("inverse and identity") {
  PrimeModulus p(7);
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    auto m = random_element(4, p, rng);
    CHECK(mat_mul(m, mat_inv(m)).is_identity());
    CHECK(mat_mul(mat_inv(m), m).is_identity());
  }
  CHECK(mat_inv(UniTriMatrix(4, p)).is_identity());
}

TEST_CASE("group axioms on random triples") {
  for (int n : {2, 3, 4, 5}) {
    for (std::int64_t pv : {3, 5, 7}) {
      PrimeModulus p(pv);
      std::mt19937_64 rng(static_cast<std::uint64_t>(100 * n + pv));
      for (int rep = 0; rep < 20; ++rep) {
        auto a = random_element(n, p, rng);
        auto b = random_element(n, p, rng);
        auto c = random_element(n, p, rng);
        CHECK(mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c)));
        CHECK(mat_mul(a, UniTriMatrix(n, p)) == a);
        CHECK(mat_mul(UniTriMatrix(n, p), a) == a);
        CHECK(mat_inv(mat_mul(a, b)) == mat_mul(mat_inv(b), mat_inv(a)));
      }
    }
  }
}

TEST_CASE("commutator of adjacent superdiagonal powers") {
  // [I + 3 E(2,3), I - 2 E(1,2)] = I + 6 E(1,3) over F_7.
  PrimeModulus p(7);
  auto x = UniTriMatrix::elementary(3, p, 2, 3, 3);
  auto y = UniTriMatrix::elementary(3, p, 1, 2, -2);
  auto c = commutator(x, y);
  CHECK(c == UniTriMatrix::elementary(3, p, 1, 3, 6));
}

TEST_CASE("four-matrix commutator product lands on the second diagonal") {
  // (I - E(3,4)) (I + E(2,3)) (I + E(3,4)) (I - E(2,3)) = I + E(2,4).
  PrimeModulus p(5);
  auto m = mat_mul(
      mat_mul(UniTriMatrix::elementary(4, p, 3, 4, -1),
              UniTriMatrix::elementary(4, p, 2, 3, 1)),
      mat_mul(UniTriMatrix::elementary(4, p, 3, 4, 1),
              UniTriMatrix::elementary(4, p, 2, 3, -1)));
  CHECK(m == UniTriMatrix::elementary(4, p, 2, 4, 1));
  CHECK(m == commutator(UniTriMatrix::elementary(4, p, 3, 4, 1),
                        UniTriMatrix::elementary(4, p, 2, 3, -1)));
}

TEST_CASE("mismatched shapes are rejected") {
  PrimeModulus p5(5), p7(7);
  UniTriMatrix a(3, p5), b(4, p5), c(3, p7);
  CHECK_THROWS_AS(mat_mul(a, b), std::invalid_argument);
  CHECK_THROWS_AS(mat_mul(a, c), std::invalid_argument);
  CHECK_THROWS_AS(commutator(a, b), std::invalid_argument);
}

TEST_CASE("index encoding example") {
  // n = 3, p = 3 with entries (1,2) = 1, (1,3) = 2, (2,3) = 0:
  // digits least significant first give 1 + 2*3 + 0*9 = 7.
  PrimeModulus p(3);
  UniTriMatrix m(3, p);
  m.set(1, 2, 1);
  m.set(1, 3, 2);
  CHECK(encode_index(m) == 7);
  CHECK(decode_index(7, 3, p) == m);
}

TEST_CASE("index encoding is a bijection") {
  PrimeModulus p(3);
  const std::uint64_t order = group_order(3, p);
  CHECK(order == 27);
  for (std::uint64_t idx = 0; idx < order; ++idx)
    CHECK(encode_index(decode_index(idx, 3, p)) == idx);
  CHECK_THROWS_AS(decode_index(order, 3, p), std::invalid_argument);
}

TEST_CASE("group order") {
  CHECK(group_order(2, PrimeModulus(13)) == 13);
  CHECK(group_order(4, PrimeModulus(7)) == 117649);
  CHECK(group_order(6, PrimeModulus(7)) == 4747561509943ULL);  // 7^15
  CHECK_THROWS_AS(group_order(30, PrimeModulus(7)), CapacityError);
}

TEST_CASE("word evaluation matches elementary products") {
  PrimeModulus p(5);
  GeneratorWord w;
  w.push(1, 1);
  w.push(2, 1);
  w.push(1, -1);
  auto direct = mat_mul(
      mat_mul(UniTriMatrix::elementary(3, p, 1, 2, 1),
              UniTriMatrix::elementary(3, p, 2, 3, 1)),
      UniTriMatrix::elementary(3, p, 1, 2, -1));
  CHECK(eval_word(w, 3, p) == direct);
}

TEST_CASE("word evaluation is a homomorphism on concatenation") {
  PrimeModulus p(7);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> row(1, 3), coin(0, 1);
  for (int rep = 0; rep < 30; ++rep) {
    GeneratorWord u, v;
    for (int k = 0; k < 8; ++k) u.push(row(rng), coin(rng) ? 1 : -1);
    for (int k = 0; k < 5; ++k) v.push(row(rng), coin(rng) ? 1 : -1);
    GeneratorWord uv = u;
    uv.append(v);
    CHECK(eval_word(uv, 4, p) ==
          mat_mul(eval_word(u, 4, p), eval_word(v, 4, p)));
    CHECK(eval_word(inverse_word(u), 4, p) == mat_inv(eval_word(u, 4, p)));
  }
}

TEST_CASE("word round-trips through text") {
  GeneratorWord w;
  w.push(1, 1);
  w.push(3, -1);
  w.push(2, 1);
  CHECK(format_word(w) == "+1 -3 +2");
  CHECK(parse_word("+1 -3 +2") == w);
  CHECK(parse_word("  +1\t-3  +2 ") == w);
  CHECK(parse_word("").steps.empty());
  CHECK_THROWS_AS(parse_word("1 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("+x"), std::invalid_argument);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> row(1, 9), coin(0, 1);
  for (int rep = 0; rep < 20; ++rep) {
    GeneratorWord u;
    for (int k = 0; k < 12; ++k) u.push(row(rng), coin(rng) ? 1 : -1);
    CHECK(parse_word(format_word(u)) == u);
  }
}

TEST_CASE("word evaluation validates steps") {
  PrimeModulus p(5);
  GeneratorWord w;
  w.push(3, 1);
  CHECK_THROWS_AS(eval_word(w, 3, p), std::invalid_argument);
  GeneratorWord v;
  v.push(1, 2);
  CHECK_THROWS_AS(eval_word(v, 3, p), std::invalid_argument);
}
