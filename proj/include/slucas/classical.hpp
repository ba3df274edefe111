#pragma once

/** @file classical.hpp
 *  Fermat and Miller-Rabin rounds and the Baillie-PSW test.
 */

#include "lucas.hpp"
#include "sieve.hpp"

namespace slucas {

namespace detail {

template <class T>
bool fermat_holds(const T& n, const T& a) {
    return mod_exp(a, T(n - 1), n) == T(1);
}

/// a^q = 1 or a^(2^i q) = -1 for some i < kappa, n - 1 = 2^kappa q.
template <class T>
bool strong_fermat_holds(const T& n, const T& a) {
    auto s = split_even_odd<T>(T(n - 1));
    T x = mod_exp(a, s.q, n);
    T minus_one = n - 1;
    if (x == 1 || x == minus_one) return true;
    for (unsigned i = 1; i < s.kappa; ++i) {
        x = mod_sqr(x, n);
        if (x == minus_one) return true;
        if (x == 1) return false;
    }
    return false;
}

template <class T>
void check_base(const T& n, const T& a) {
    if (!is_odd(n) || n < 5) throw argument_error("n must be odd and >= 5");
    if (a < 2 || a > n - 2) throw argument_error("base must lie in [2, n-2]");
}

template <class T>
RoundResult fermat_round(const T& n, const T& a) {
    check_base<T>(n, a);
    T g = gcd(a, n);
    if (g != 1) return {Verdict::composite, "gcd(a, n) = " + to_decimal(to_natural(g)), to_natural(g)};
    if (fermat_holds<T>(n, a)) return {Verdict::probable_prime, "", std::nullopt};
    return {Verdict::composite, "a^(n-1) is not 1 mod n", std::nullopt};
}

template <class T>
RoundResult miller_rabin_round(const T& n, const T& a) {
    check_base<T>(n, a);
    T g = gcd(a, n);
    if (g != 1) return {Verdict::composite, "gcd(a, n) = " + to_decimal(to_natural(g)), to_natural(g)};
    if (strong_fermat_holds<T>(n, a)) return {Verdict::probable_prime, "", std::nullopt};
    return {Verdict::composite, "strong Fermat condition fails", std::nullopt};
}

} // namespace detail

/// Predicates without range checks, used by the brute-force counters.
inline bool is_fermat_probable_prime(u64 n, u64 a) { return detail::fermat_holds<u64>(n, a); }
inline bool is_strong_probable_prime(u64 n, u64 a) { return detail::strong_fermat_holds<u64>(n, a); }
inline bool is_strong_probable_prime(const Natural& n, const Natural& a) {
    return detail::strong_fermat_holds<Natural>(n, a);
}

inline RoundResult fermat_round(u64 n, u64 a) { return detail::fermat_round<u64>(n, a); }
inline RoundResult fermat_round(const Natural& n, const Natural& a) {
    if (fits_u64(n)) return detail::fermat_round<u64>(to_u64(n), fits_u64(a) ? to_u64(a) : ~u64{0});
    return detail::fermat_round<Natural>(n, a);
}

inline RoundResult miller_rabin_round(u64 n, u64 a) { return detail::miller_rabin_round<u64>(n, a); }
inline RoundResult miller_rabin_round(const Natural& n, const Natural& a) {
    if (fits_u64(n)) return detail::miller_rabin_round<u64>(to_u64(n), fits_u64(a) ? to_u64(a) : ~u64{0});
    return detail::miller_rabin_round<Natural>(n, a);
}

struct BpswOptions {
    DMethod method = DMethod::A;
    bool strong = true;
    u64 trial_limit = 1000;
};

/// Trial division, base-2 (strong) Fermat, square rejection, (strong) Lucas.
inline Verdict baillie_psw(const Natural& n, const BpswOptions& opt = {}) {
    if (n < 2) return Verdict::composite;
    if (n == 2) return Verdict::probable_prime;
    if (!is_odd(n)) return Verdict::composite;
    // Below 37 the Lucas parameters can share a factor with a prime n.
    if (n < 37) {
        u64 v = to_u64(n);
        for (u64 p = 3; p * p <= v; p += 2)
            if (v % p == 0) return Verdict::composite;
        return Verdict::probable_prime;
    }
    for (u64 p : detail::trial_primes_small()) {
        if (p >= opt.trial_limit) break;
        if (mod_small(n, p) == 0) return n == p ? Verdict::probable_prime : Verdict::composite;
    }
    bool base2 = opt.strong ? is_strong_probable_prime(n, Natural(2))
                            : mod_exp(Natural(2), Natural(n - 1), n) == 1;
    if (!base2) return Verdict::composite;
    if (is_perfect_square(n)) return Verdict::composite;
    LucasParams prm = select_d(n, opt.method);
    RoundResult r = opt.strong ? strong_lucas_round(n, prm) : lucas_round(n, prm);
    return r.verdict == Verdict::probable_prime ? Verdict::probable_prime : Verdict::composite;
}

inline Verdict baillie_psw(u64 n, const BpswOptions& opt = {}) { return baillie_psw(to_natural(n), opt); }

} // namespace slucas
