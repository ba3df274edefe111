#pragma once

/** @file natural.hpp
 *  Big-integer type, error types, text conversion and the modular helpers
 *  shared by every algorithm. Each helper is overloaded for std::uint64_t
 *  (fast path through 128-bit products) and for Natural (GMP).
 */

#include <gmpxx.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace slucas {

using Natural = mpz_class;   ///< nonnegative by convention
using Integer = mpz_class;   ///< signed
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// ===== errors

struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct capacity_error : std::length_error {
    using std::length_error::length_error;
};

/// Thrown by mod_inv; carries gcd(a, n).
struct not_invertible : std::domain_error {
    Natural gcd;
    explicit not_invertible(Natural g)
        : std::domain_error("not invertible: gcd = " + g.get_str()), gcd(std::move(g)) {}
};

// ===== text conversion

/// Parses decimal or 0x-prefixed hexadecimal. No sign, no whitespace.
inline Natural parse_natural(std::string_view s) {
    int base = 10;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        base = 16;
        s.remove_prefix(2);
    }
    if (s.empty()) throw argument_error("empty integer literal");
    for (char c : s) {
        bool ok = base == 10 ? (c >= '0' && c <= '9')
                             : ((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
                                (c >= 'A' && c <= 'F'));
        if (!ok) throw argument_error("bad integer literal: " + std::string(s));
    }
    return Natural(std::string(s), base);
}

/// Parses an optionally negative decimal or hex literal.
inline Integer parse_integer(std::string_view s) {
    if (!s.empty() && s[0] == '-') return -parse_natural(s.substr(1));
    return parse_natural(s);
}

inline std::string to_decimal(const Integer& v) { return v.get_str(10); }

inline std::string to_hex(const Natural& v) {
    if (v < 0) return "-0x" + Natural(-v).get_str(16);
    return "0x" + v.get_str(16);
}

// ===== conversions between the two representations

inline bool fits_u64(const Natural& v) { return v >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64; }

inline u64 to_u64(const Natural& v) {
    if (!fits_u64(v)) throw capacity_error("value does not fit in 64 bits");
    u64 out = 0;
    mpz_export(&out, nullptr, -1, sizeof(u64), 0, 0, v.get_mpz_t());
    return out;
}

inline Natural to_natural(u64 v) {
    Natural out;
    mpz_import(out.get_mpz_t(), 1, -1, sizeof(u64), 0, 0, &v);
    return out;
}

inline Natural to_natural(const Natural& v) { return v; }

/// Reduces a signed big integer into [0, n).
inline u64 residue(const Integer& a, u64 n) {
    Natural nn = to_natural(n);
    Natural r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), nn.get_mpz_t());
    return to_u64(r);
}

inline Natural residue(const Integer& a, const Natural& n) {
    Natural r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    return r;
}

// ===== bit access

inline unsigned bit_length(u64 x) { return 64u - static_cast<unsigned>(std::countl_zero(x)); }
inline unsigned bit_length(const Natural& x) {
    return x == 0 ? 0u : static_cast<unsigned>(mpz_sizeinbase(x.get_mpz_t(), 2));
}

inline bool test_bit(u64 x, unsigned i) { return (x >> i) & 1u; }
inline bool test_bit(const Natural& x, unsigned i) { return mpz_tstbit(x.get_mpz_t(), i) != 0; }

inline bool is_odd(u64 x) { return x & 1u; }
inline bool is_odd(const Natural& x) { return mpz_odd_p(x.get_mpz_t()) != 0; }

inline unsigned trailing_zeros(u64 x) { return static_cast<unsigned>(std::countr_zero(x)); }
inline unsigned trailing_zeros(const Natural& x) {
    return static_cast<unsigned>(mpz_scan1(x.get_mpz_t(), 0));
}

inline u64 shift_right(u64 x, unsigned k) { return k >= 64 ? 0 : x >> k; }
inline Natural shift_right(const Natural& x, unsigned k) {
    Natural r;
    mpz_fdiv_q_2exp(r.get_mpz_t(), x.get_mpz_t(), k);
    return r;
}

/// x mod m for a word-sized m.
inline unsigned long mod_small(u64 x, unsigned long m) { return static_cast<unsigned long>(x % m); }
inline unsigned long mod_small(const Natural& x, unsigned long m) {
    return mpz_fdiv_ui(x.get_mpz_t(), m);
}

// ===== modular arithmetic, operands already reduced into [0, n)

inline u64 mod_add(u64 a, u64 b, u64 n) {
    u64 s = a + b;
    if (s < a || s >= n) s -= n;
    return s;
}
inline Natural mod_add(const Natural& a, const Natural& b, const Natural& n) {
    Natural s = a + b;
    if (s >= n) s -= n;
    return s;
}

inline u64 mod_sub(u64 a, u64 b, u64 n) { return a >= b ? a - b : a + (n - b); }
inline Natural mod_sub(const Natural& a, const Natural& b, const Natural& n) {
    Natural s = a - b;
    if (s < 0) s += n;
    return s;
}

inline u64 mod_mul(u64 a, u64 b, u64 n) { return static_cast<u64>(static_cast<u128>(a) * b % n); }
inline Natural mod_mul(const Natural& a, const Natural& b, const Natural& n) {
    Natural r = a * b;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline u64 mod_sqr(u64 a, u64 n) { return mod_mul(a, a, n); }
inline Natural mod_sqr(const Natural& a, const Natural& n) { return mod_mul(a, a, n); }

/// x/2 mod n for odd n, as (x + n*(x mod 2))/2.
inline u64 half_mod(u64 x, u64 n) {
    if (!(x & 1u)) return x >> 1;
    return static_cast<u64>((static_cast<u128>(x) + n) >> 1);
}
inline Natural half_mod(const Natural& x, const Natural& n) {
    Natural r = is_odd(x) ? Natural(x + n) : x;
    mpz_fdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), 1);
    return r;
}

/// base^e mod n by left-to-right square and multiply.
inline u64 mod_exp(u64 base, u64 e, u64 n) {
    if (n == 1) return 0;
    u64 b = base % n, r = 1;
    for (unsigned i = bit_length(e); i-- > 0;) {
        r = mod_sqr(r, n);
        if (test_bit(e, i)) r = mod_mul(r, b, n);
    }
    return r;
}
inline Natural mod_exp(const Natural& base, const Natural& e, const Natural& n) {
    if (e < 0) throw argument_error("negative exponent");
    Natural r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }
inline Natural gcd(const Natural& a, const Natural& b) {
    Natural g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Natural mod_inv(const Natural& a, const Natural& n) {
    if (n < 1) throw argument_error("modulus must be positive");
    Natural r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t()) == 0) {
        if (n == 1) return 0;
        throw not_invertible(gcd(a, n));
    }
    return r;
}

inline u64 mod_inv(u64 a, u64 n) {
    if (n == 0) throw argument_error("modulus must be positive");
    if (n == 1) return 0;
    // extended Euclid on signed 128-bit coefficients
    __int128 r0 = n, r1 = a % n, s0 = 0, s1 = 1;
    while (r1 != 0) {
        __int128 q = r0 / r1;
        __int128 t = r0 - q * r1; r0 = r1; r1 = t;
        t = s0 - q * s1; s0 = s1; s1 = t;
    }
    if (r0 != 1) throw not_invertible(to_natural(static_cast<u64>(r0)));
    if (s0 < 0) s0 += n;
    return static_cast<u64>(s0);
}

/// Integer square root, floor(sqrt(x)). Independent of the Newton screen.
inline Natural isqrt(const Natural& x) {
    Natural r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

inline u64 isqrt(u64 x) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(x)));
    while (r > 0 && static_cast<u128>(r) * r > x) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= x) ++r;
    return r;
}

} // namespace slucas
