#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

namespace unitri {

// Raised when a computation would exceed the configured state or memory
// budget (enumerations, dense distributions, exact-count denominators).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_odd_prime(std::int64_t p) {
  if (p < 3 || p % 2 == 0) return false;
  for (std::int64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

// An odd prime modulus.  Kept small (p < 2^15) so that entry products and
// the walk-engine index arithmetic stay comfortably inside int64.
struct PrimeModulus {
  std::int64_t p;

  explicit PrimeModulus(std::int64_t p_) : p(p_) {
    if (!is_odd_prime(p))
      throw std::invalid_argument("PrimeModulus: " + std::to_string(p) +
                                  " is not an odd prime");
    if (p >= (1 << 15))
      throw std::invalid_argument("PrimeModulus: p must be < 2^15");
  }

  friend bool operator==(PrimeModulus a, PrimeModulus b) { return a.p == b.p; }
  friend bool operator!=(PrimeModulus a, PrimeModulus b) { return a.p != b.p; }
};

// Canonical residue in [0, p).
inline std::int64_t mod_reduce(std::int64_t x, std::int64_t p) {
  std::int64_t r = x % p;
  return r < 0 ? r + p : r;
}

// Representative of x in (-p/2, p/2], used where the sign of a residue
// matters (parity bookkeeping, shortest-step counts).
inline std::int64_t mod_symmetric(std::int64_t x, std::int64_t p) {
  std::int64_t r = mod_reduce(x, p);
  return r > p / 2 ? r - p : r;
}

inline std::int64_t mod_inverse(std::int64_t x, std::int64_t p) {
  x = mod_reduce(x, p);
  if (x == 0) throw std::invalid_argument("mod_inverse of 0");
  // Extended Euclid on (x, p).
  std::int64_t a = x, b = p, u = 1, v = 0;
  while (b != 0) {
    std::int64_t q = a / b;
    a -= q * b;
    std::swap(a, b);
    u -= q * v;
    std::swap(u, v);
  }
  return mod_reduce(u, p);
}

inline std::uint64_t isqrt_u64(std::uint64_t v) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// floor(sqrt(p)) rounded up to the nearest odd integer.  Odd step counts
// are what make the comparison argument for the class walks go through.
inline std::int64_t closest_odd_sqrt(PrimeModulus p) {
  auto s = static_cast<std::int64_t>(isqrt_u64(static_cast<std::uint64_t>(p.p)));
  return (s % 2 == 1) ? s : s + 1;
}

// Cap on dense state spaces and label enumerations.  The environment
// variable UNITRI_BUDGET_STATES overrides the default of 10^7.
inline std::uint64_t state_budget() {
  static const std::uint64_t budget = [] {
    if (const char* env = std::getenv("UNITRI_BUDGET_STATES")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != nullptr && *end == '\0' && v > 0)
        return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{10000000};
  }();
  return budget;
}

// base^exp with overflow detection.
inline std::uint64_t pow_u64_checked(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned k = 0; k < exp; ++k) {
    if (base != 0 && r > UINT64_MAX / base)
      throw CapacityError("pow_u64_checked: overflow");
    r *= base;
  }
  return r;
}

}  // namespace unitri
