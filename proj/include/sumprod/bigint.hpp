#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace sumprod {

// Instance values are exact: tower products overflow 64 bits quickly.
using BigInt = mpz_class;

inline std::string to_string(const BigInt& x) { return x.get_str(); }

// mpz_class has no long long constructor; long is 64-bit here.
inline BigInt big(long long v) { return BigInt(static_cast<long>(v)); }

inline bool fits_i64(const BigInt& x) { return x.fits_slong_p(); }

inline std::optional<long long> to_i64(const BigInt& x) {
  if (!x.fits_slong_p()) return std::nullopt;
  return static_cast<long long>(x.get_si());
}

// Overflow-checked machine arithmetic for the bounded evaluation path.
inline bool checked_add(long long a, long long b, long long* out) {
  return !__builtin_add_overflow(a, b, out);
}
inline bool checked_mul(long long a, long long b, long long* out) {
  return !__builtin_mul_overflow(a, b, out);
}

}  // namespace sumprod
