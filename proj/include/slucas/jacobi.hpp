#pragma once

/** @file jacobi.hpp
 *  Jacobi symbol by the binary algorithm, and the Newton perfect-square test.
 */

#include "natural.hpp"

#include <type_traits>
#include <utility>

namespace slucas {

/// (a/n) for a >= 0 and odd n >= 1; T is u64 or Natural.
template <class T>
int jacobi_nonneg(T a, T n) {
    if (!is_odd(n)) throw argument_error("jacobi: modulus must be odd and positive");
    if (a >= n) a = a % n;
    int sign = 1;
    while (a != 0) {
        unsigned z = trailing_zeros(a);
        a = shift_right(a, z);
        unsigned long r8 = mod_small(n, 8);
        if ((z & 1u) && (r8 == 3 || r8 == 5)) sign = -sign;
        // reciprocity: flip when both are 3 mod 4
        if (mod_small(a, 4) == 3 && r8 % 4 == 3) sign = -sign;
        std::swap(a, n);
        a = a % n;
    }
    return n == 1 ? sign : 0;
}

/// (a/n) for signed a, using (-1/n) = (-1)^((n-1)/2).
inline int jacobi(const Integer& a, const Natural& n) {
    if (n <= 0 || !is_odd(n)) throw argument_error("jacobi: modulus must be odd and positive");
    if (a >= 0) return jacobi_nonneg<Natural>(a, n);
    int j = jacobi_nonneg<Natural>(Natural(-a), n);
    return mod_small(n, 4) == 3 ? -j : j;
}

inline int jacobi(i64 a, u64 n) {
    if (n == 0 || !is_odd(n)) throw argument_error("jacobi: modulus must be odd and positive");
    if (a >= 0) return jacobi_nonneg<u64>(static_cast<u64>(a), n);
    u64 m = static_cast<u64>(-(a + 1)) + 1;
    int j = jacobi_nonneg<u64>(m, n);
    return n % 4 == 3 ? -j : j;
}

namespace detail {

/// Newton iteration from x0 = 2^m - 1, m = ceil(bits/2), stopping once
/// x^2 < 2^m + d; then d is a square iff d == x^2.
template <class T>
bool newton_square(const T& d) {
    if (d < 2) return true;
    unsigned m = (bit_length(d) + 1) / 2;
    T pm = T(1) << m;
    T x = pm - 1;
    if constexpr (std::is_same_v<T, u64>) {
        while (static_cast<u128>(x) * x >= static_cast<u128>(pm) + d) x = (x + d / x) / 2;
        return static_cast<u128>(x) * x == d;
    } else {
        while (x * x >= pm + d) x = (x + d / x) / 2;
        return x * x == d;
    }
}

} // namespace detail

inline bool is_perfect_square(u64 d) { return detail::newton_square<u64>(d); }
inline bool is_perfect_square(const Natural& d) { return detail::newton_square<Natural>(d); }

} // namespace slucas
