#pragma once

/** @file counting.hpp
 *  Exact counts of fooling parameters: strong Lucas pairs SL(D,n), Fermat
 *  bases F(n), Lucas values L(D,n), strong Fermat bases; the alpha ratios;
 *  and brute-force counters used to validate each closed form.
 */

#include "classical.hpp"
#include "sieve.hpp"

#include <algorithm>

namespace slucas {

/// A count over a denominator, kept unreduced; `rational()` reduces.
struct AlphaValue {
    Natural numerator;
    Natural denominator;

    mpq_class rational() const {
        mpq_class r(numerator, denominator);
        r.canonicalize();
        return r;
    }
    double to_double() const { return rational().get_d(); }
};

namespace detail {

inline int eps_of(u64 m, const Integer& d) { return jacobi(d, to_natural(m)); }

inline u64 shifted(u64 m, int eps) { return eps == 1 ? m - 1 : m + 1; }

inline bool coprime_to_2d(u64 n, const Integer& d) {
    return (n & 1u) && gcd(residue(d, n), n) == 1;
}

} // namespace detail

/// phi_D(n) = prod p^(r-1) (p - eps_D(p)).
inline Natural phi_d(const Factorization& f, const Integer& d) {
    Natural out = 1;
    for (const auto& pp : f.factors) {
        int e = detail::eps_of(pp.prime, d);
        if (pp.prime == 2 || e == 0) throw argument_error("phi_d: n must be coprime to 2D");
        Natural term;
        mpz_ui_pow_ui(term.get_mpz_t(), pp.prime, pp.exponent - 1);
        out *= term * detail::shifted(pp.prime, e);
    }
    return out;
}

/// SL(D,n) = prod (gcd(q,q_i) - 1) + sum_{j<k_1} 2^(js) prod gcd(q,q_i),
/// with n - eps(n) = 2^kappa q and p_i - eps(p_i) = 2^(k_i) q_i.
inline Natural sl_count(const Factorization& f, const Integer& d) {
    u64 n = f.value();
    if (n < 3 || !detail::coprime_to_2d(n, d)) return 0;
    u64 q = split_even_odd<u64>(detail::shifted(n, detail::eps_of(n, d))).q;
    unsigned k1 = ~0u;
    Natural prod_minus = 1, prod = 1;
    for (const auto& pp : f.factors) {
        auto s = split_even_odd<u64>(detail::shifted(pp.prime, detail::eps_of(pp.prime, d)));
        k1 = std::min(k1, s.kappa);
        u64 g = gcd(q, s.q);
        prod_minus *= g - 1;
        prod *= g;
    }
    unsigned s = static_cast<unsigned>(f.omega());
    Natural geometric = 0;
    for (unsigned j = 0; j < k1; ++j) geometric += Natural(1) << (j * s);
    return prod_minus + geometric * prod;
}

/// F(n) = prod gcd(n-1, p_i-1): bases a mod n, units including +-1.
inline Natural fermat_count(const Factorization& f) {
    u64 n = f.value();
    if (n < 3 || !(n & 1u)) throw argument_error("fermat_count: n must be odd and >= 3");
    Natural out = 1;
    for (const auto& pp : f.factors) out *= gcd(n - 1, pp.prime - 1);
    return out;
}

/// L(D,n) = prod (gcd(n - eps(n), p_i - eps(p_i)) - 1).
inline Natural lucas_count(const Factorization& f, const Integer& d) {
    u64 n = f.value();
    if (n < 3 || !detail::coprime_to_2d(n, d)) throw argument_error("lucas_count: n must be coprime to 2D");
    u64 m = detail::shifted(n, detail::eps_of(n, d));
    Natural out = 1;
    for (const auto& pp : f.factors) out *= gcd(m, detail::shifted(pp.prime, detail::eps_of(pp.prime, d))) - 1;
    return out;
}

/// (1 + sum_{j<k_1} 2^(js)) prod gcd(q, p_i - 1), n - 1 = 2^kappa q,
/// p_i - 1 = 2^(l_i) s_i, k_1 = min l_i.
inline Natural mr_count(const Factorization& f) {
    u64 n = f.value();
    if (n < 3 || !(n & 1u)) throw argument_error("mr_count: n must be odd and >= 3");
    u64 q = split_even_odd<u64>(n - 1).q;
    unsigned k1 = ~0u;
    Natural prod = 1;
    for (const auto& pp : f.factors) {
        k1 = std::min(k1, split_even_odd<u64>(pp.prime - 1).kappa);
        prod *= gcd(q, pp.prime - 1);
    }
    unsigned s = static_cast<unsigned>(f.omega());
    Natural geometric = 1;
    for (unsigned j = 0; j < k1; ++j) geometric += Natural(1) << (j * s);
    return geometric * prod;
}

/// alpha-bar_D(n) = SL(D,n) / (n - eps_D(n) - 1).
inline AlphaValue alpha_bar(u64 n, const Factorization& f, const Integer& d) {
    if (!detail::coprime_to_2d(n, d)) throw argument_error("alpha_bar: n must be coprime to 2D");
    if (n < 5) throw argument_error("alpha_bar: n must be >= 5");
    return {sl_count(f, d), to_natural(detail::shifted(n, detail::eps_of(n, d)) - 1)};
}

/// alpha_D(n) = SL(D,n) / phi_D(n).
inline AlphaValue alpha_d(const Factorization& f, const Integer& d) {
    return {sl_count(f, d), phi_d(f, d)};
}

/// Given psp(b) and psp(c), P = b + c, Q = bc, D = (b - c)^2 make n a lpsp.
inline LucasParams psp_to_lpsp_compose(const Natural& n, const Natural& b, const Natural& c) {
    if (n < 5 || !is_odd(n)) throw argument_error("compose: n must be odd and >= 5");
    if (gcd(Natural(b * c * (b - c)), n) != 1) throw argument_error("compose: gcd(n, bc(b-c)) must be 1");
    if (mod_exp(b, Natural(n - 1), n) != 1) throw argument_error("compose: n is not a psp(b)");
    if (mod_exp(c, Natural(n - 1), n) != 1) throw argument_error("compose: n is not a psp(c)");
    Natural diff = residue(Integer(b - c), n);
    return {residue(Integer(b + c), n), mod_mul(residue(b, n), residue(c, n), n), mod_sqr(diff, n)};
}

// ===== brute-force counters

inline constexpr u64 bruteforce_ceiling = 10000;

namespace detail {

/// n | U_q or n | V_{2^i q} with n - eps = 2^kappa q, on residues.
inline bool strong_condition(u64 n, u64 p, u64 q, u64 dres, const EvenOddSplit<u64>& sp) {
    auto r = lucas_ladder<u64>(p, q, dres, sp.q, n);
    if (r.u == 0 || r.v == 0) return true;
    u64 v = r.v, qk = r.qm;
    for (unsigned i = 1; i < sp.kappa; ++i) {
        v = mod_sub(mod_sqr(v, n), mod_add(qk, qk, n), n);
        if (v == 0) return true;
        qk = mod_sqr(qk, n);
    }
    return false;
}

} // namespace detail

/// Pairs 0 <= P, Q < n with gcd(Q,n) = 1, P^2 - 4Q = D mod n, satisfying
/// the strong Lucas condition. Scans every (P, Q).
inline Natural slpsp_bruteforce(u64 n, const Integer& d) {
    if (n >= bruteforce_ceiling) throw capacity_error("slpsp_bruteforce: n must be below 10^4");
    if (n < 3 || !detail::coprime_to_2d(n, d)) return 0;
    u64 dres = residue(d, n);
    auto sp = split_even_odd<u64>(detail::shifted(n, detail::eps_of(n, d)));
    u64 count = 0;
    for (u64 p = 0; p < n; ++p) {
        u64 p2 = p * p % n;
        for (u64 q = 0; q < n; ++q) {
            if ((p2 + 4 * (n - q) + (n - dres)) % n != 0) continue;
            if (gcd(q, n) != 1) continue;
            if (detail::strong_condition(n, p, q, dres, sp)) ++count;
        }
    }
    return count;
}

/// Units a in [1, n) with a^(n-1) = 1 mod n.
inline Natural fermat_bruteforce(u64 n) {
    if (n >= bruteforce_ceiling) throw capacity_error("fermat_bruteforce: n must be below 10^4");
    u64 count = 0;
    for (u64 a = 1; a < n; ++a)
        if (gcd(a, n) == 1 && is_fermat_probable_prime(n, a)) ++count;
    return count;
}

/// Units a in [1, n) for which n passes the strong Fermat condition.
inline Natural mr_bruteforce(u64 n) {
    if (n >= bruteforce_ceiling) throw capacity_error("mr_bruteforce: n must be below 10^4");
    u64 count = 0;
    for (u64 a = 1; a < n; ++a)
        if (gcd(a, n) == 1 && is_strong_probable_prime(n, a)) ++count;
    return count;
}

/// Values P in [0, n) with Q = (P^2 - D)/4 mod n a unit and n | U_{n-eps}.
inline Natural lucas_bruteforce(u64 n, const Integer& d) {
    if (n >= bruteforce_ceiling) throw capacity_error("lucas_bruteforce: n must be below 10^4");
    if (n < 3 || !detail::coprime_to_2d(n, d)) return 0;
    u64 dres = residue(d, n);
    u64 inv4 = mod_inv(u64{4}, n);
    u64 m = detail::shifted(n, detail::eps_of(n, d));
    u64 count = 0;
    for (u64 p = 0; p < n; ++p) {
        u64 x = mod_sub(p * p % n, dres, n);
        if (gcd(x, n) != 1) continue;
        u64 q = mod_mul(x, inv4, n);
        if (lucas_ladder<u64>(p, q, dres, m, n).u == 0) ++count;
    }
    return count;
}

/// Twin-prime product p(p+2), decided from the factorization.
inline bool is_twin_prime_product(const Factorization& f) {
    return f.factors.size() == 2 && f.factors[0].exponent == 1 && f.factors[1].exponent == 1 &&
           f.factors[1].prime == f.factors[0].prime + 2;
}

} // namespace slucas
