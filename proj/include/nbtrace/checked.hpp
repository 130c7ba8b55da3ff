#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nbtrace {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error(std::string(what) + ": 64-bit overflow");
  }
  return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error(std::string(what) + ": 64-bit overflow");
  }
  return r;
}

inline std::uint64_t checked_pow(std::uint64_t base, unsigned exponent, const char* what) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exponent; ++i) r = checked_mul(r, base, what);
  return r;
}

}  // namespace nbtrace
