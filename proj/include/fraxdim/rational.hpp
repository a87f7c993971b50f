#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace fraxdim {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p", "p/q", "-1.25" and "3e-2". Throws Error("ParseError") otherwise.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

std::size_t hash_value(const Integer& z) noexcept;
std::size_t hash_value(const Rational& q) noexcept;

inline void hash_combine(std::size_t& seed, std::size_t v) noexcept {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace fraxdim
