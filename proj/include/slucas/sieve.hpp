#pragma once

/** @file sieve.hpp
 *  Segmented sieve of Eratosthenes over odd numbers, prime counting, and
 *  trial-division factorization for n < 2^52.
 */

#include "natural.hpp"

#include <algorithm>
#include <mutex>
#include <ostream>
#include <vector>

namespace slucas {

inline constexpr u64 sieve_ceiling = u64{1} << 33;
inline constexpr u64 factorize_ceiling = u64{1} << 52;

namespace detail {

/// Primes <= limit by a plain sieve; used for the base primes of a segment.
inline std::vector<u64> simple_sieve(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i * i <= limit; ++i)
        if (!composite[i])
            for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    for (u64 i = 2; i <= limit; ++i)
        if (!composite[i]) out.push_back(i);
    return out;
}

/// Calls f(p) for each prime p in [lo, hi), segment by segment.
template <class F>
void for_each_prime(u64 lo, u64 hi, F&& f) {
    if (hi > sieve_ceiling + 1) throw capacity_error("sieve limit above 2^33");
    if (lo < 2) lo = 2;
    if (lo >= hi) return;
    if (lo == 2) { f(u64{2}); lo = 3; }
    if (lo >= hi) return;
    const std::vector<u64> base = simple_sieve(isqrt(hi) + 1);
    constexpr u64 seg_odds = u64{1} << 18;   // odd numbers per segment
    std::vector<unsigned char> seg(seg_odds);
    u64 start = lo | 1u;
    while (start < hi) {
        u64 end = std::min(hi, start + 2 * seg_odds);   // exclusive
        u64 count = (end - start + 1) / 2;
        std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(count), 1);
        for (std::size_t bi = 1; bi < base.size(); ++bi) {
            u64 p = base[bi];
            if (p * p >= end) break;
            u64 first = std::max(p * p, (start + p - 1) / p * p);
            if (!(first & 1u)) first += p;
            for (u64 j = first; j < end; j += 2 * p) seg[(j - start) / 2] = 0;
        }
        for (u64 i = 0; i < count; ++i)
            if (seg[i]) {
                u64 v = start + 2 * i;
                if (v > 1) f(v);
            }
        start = end | 1u;
    }
}

} // namespace detail

/// Ascending list of primes <= limit.
inline std::vector<u64> sieve_primes(u64 limit) {
    if (limit > sieve_ceiling) throw capacity_error("sieve limit above 2^33");
    std::vector<u64> out;
    detail::for_each_prime(2, limit + 1, [&](u64 p) { out.push_back(p); });
    return out;
}

/// Number of primes in [lo, hi).
inline u64 count_primes(u64 lo, u64 hi) {
    u64 c = 0;
    detail::for_each_prime(lo, hi, [&](u64) { ++c; });
    return c;
}

/// Newline-delimited decimal export.
inline void write_primes(std::ostream& os, const std::vector<u64>& primes) {
    for (u64 p : primes) os << p << '\n';
}

/// The i-th odd prime, 1-based: odd_prime(1) = 3.
inline u64 odd_prime(unsigned i) {
    static const std::vector<u64> table = detail::simple_sieve(1u << 16);
    if (i == 0 || i + 1 >= table.size()) throw argument_error("odd_prime index out of range");
    return table[i];
}

// ===== factorization

struct PrimePower {
    u64 prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    std::vector<PrimePower> factors;   ///< ascending by prime

    std::size_t omega() const { return factors.size(); }
    unsigned big_omega() const {
        unsigned s = 0;
        for (const auto& f : factors) s += f.exponent;
        return s;
    }
    Natural product() const {
        Natural n = 1;
        for (const auto& f : factors) {
            Natural pp;
            mpz_ui_pow_ui(pp.get_mpz_t(), f.prime, f.exponent);
            n *= pp;
        }
        return n;
    }
    u64 value() const { return to_u64(product()); }
    bool is_prime() const { return factors.size() == 1 && factors[0].exponent == 1; }
    friend bool operator==(const Factorization&, const Factorization&) = default;
};

namespace detail {

inline const std::vector<u64>& trial_primes_small() {
    static const std::vector<u64> t = simple_sieve(u64{1} << 16);
    return t;
}

inline const std::vector<u64>& trial_primes_large() {
    static std::once_flag once;
    static std::vector<u64> t;
    std::call_once(once, [] { t = sieve_primes(u64{1} << 26); });
    return t;
}

} // namespace detail

/// Trial division by sieved primes up to sqrt(n).
inline Factorization factorize(u64 n) {
    if (n < 2) throw argument_error("factorize: n must be >= 2");
    if (n >= factorize_ceiling) throw capacity_error("factorize: n must be below 2^52");
    Factorization f;
    const auto& primes = n < (u64{1} << 32) ? detail::trial_primes_small() : detail::trial_primes_large();
    for (u64 p : primes) {
        if (p * p > n) break;
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        f.factors.push_back({p, e});
    }
    if (n > 1) f.factors.push_back({n, 1});
    return f;
}

inline Factorization factorize(const Natural& n) {
    if (n < 2) throw argument_error("factorize: n must be >= 2");
    if (!fits_u64(n)) throw capacity_error("factorize: n must be below 2^52");
    return factorize(to_u64(n));
}

} // namespace slucas
