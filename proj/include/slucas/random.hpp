#pragma once

/** @file random.hpp
 *  Seeded sampling of big integers from a 64-bit engine. The word layout is
 *  fixed so outputs are identical across runs and platforms.
 */

#include "natural.hpp"

#include <random>

namespace slucas {

using Rng = std::mt19937_64;

/// Uniform integer with `bits` random low bits.
inline Natural random_bits(unsigned bits, Rng& rng) {
    Natural out = 0;
    unsigned words = (bits + 63) / 64;
    for (unsigned w = 0; w < words; ++w) {
        Natural word = to_natural(rng());
        out += word << (64 * w);
    }
    mpz_fdiv_r_2exp(out.get_mpz_t(), out.get_mpz_t(), bits);
    return out;
}

/// Uniform in [0, n) by rejection on bit_length(n) bits.
inline Natural uniform_below(const Natural& n, Rng& rng) {
    if (n <= 0) throw argument_error("uniform_below: bound must be positive");
    unsigned bits = bit_length(n);
    for (;;) {
        Natural x = random_bits(bits, rng);
        if (x < n) return x;
    }
}

inline u64 uniform_below(u64 n, Rng& rng) {
    if (n == 0) throw argument_error("uniform_below: bound must be positive");
    unsigned bits = bit_length(n);
    u64 mask = bits == 64 ? ~u64{0} : (u64{1} << bits) - 1;
    for (;;) {
        u64 x = rng() & mask;
        if (x < n) return x;
    }
}

/// Uniform in [lo, hi].
inline Natural uniform_range(const Natural& lo, const Natural& hi, Rng& rng) {
    return lo + uniform_below(Natural(hi - lo + 1), rng);
}

/// Odd k-bit integer with the top and bottom bits forced.
inline Natural random_odd_kbit(unsigned k, Rng& rng) {
    if (k < 2) throw argument_error("bit size must be at least 2");
    Natural n = random_bits(k, rng);
    mpz_setbit(n.get_mpz_t(), k - 1);
    mpz_setbit(n.get_mpz_t(), 0);
    return n;
}

} // namespace slucas
