#pragma once

/** @file lucas.hpp
 *  Lucas sequences U_m, V_m for parameters (P, Q), D = P^2 - 4Q; exact and
 *  modular evaluation, parameter selection, and the weak and strong rounds.
 */

#include "jacobi.hpp"
#include "random.hpp"

#include <optional>
#include <string>
#include <utility>

namespace slucas {

struct LucasParams {
    Integer p;
    Integer q;
    Integer d;   ///< D = P^2 - 4Q, exactly or modulo the working modulus
};

/// m = 2^kappa * q with q odd.
template <class T>
struct EvenOddSplit {
    unsigned kappa;
    T q;
};

template <class T>
EvenOddSplit<T> split_even_odd(const T& m) {
    if (m == 0) throw argument_error("split_even_odd: m must be positive");
    unsigned k = trailing_zeros(m);
    return {k, shift_right(m, k)};
}

enum class Verdict { probable_prime, composite, bad_params };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::probable_prime: return "probable prime";
        case Verdict::composite: return "composite";
        default: return "bad parameters";
    }
}

struct RoundResult {
    Verdict verdict;
    std::string reason;              ///< empty on probable_prime
    std::optional<Natural> factor;   ///< nontrivial factor when one was found
};

// ===== exact evaluation

/// (U_m, V_m) over the integers by the defining recurrence; reference only.
inline std::pair<Integer, Integer> lucas_uv_exact(const LucasParams& prm, unsigned m) {
    if (m > 10000) throw capacity_error("lucas_uv_exact: m above 10^4");
    if (m == 0) return {0, 2};
    Integer u0 = 0, u1 = 1, v0 = 2, v1 = prm.p;
    for (unsigned i = 1; i < m; ++i) {
        Integer u2 = prm.p * u1 - prm.q * u0;
        Integer v2 = prm.p * v1 - prm.q * v0;
        u0 = std::move(u1); u1 = std::move(u2);
        v0 = std::move(v1); v1 = std::move(v2);
    }
    return {u1, v1};
}

// ===== modular evaluation

template <class T>
struct LucasResidues {
    T u;    ///< U_m mod n
    T v;    ///< V_m mod n
    T qm;   ///< Q^m mod n
};

/// Binary ladder on residues p, q, d = p^2 - 4q already reduced mod odd n.
template <class T>
LucasResidues<T> lucas_ladder(const T& p, const T& q, const T& d, const T& m, const T& n) {
    T u = 0, v = T(2) % n, qk = T(1) % n;
    for (unsigned i = bit_length(m); i-- > 0;) {
        // index k -> 2k
        u = mod_mul(u, v, n);
        v = mod_sub(mod_sqr(v, n), mod_add(qk, qk, n), n);
        qk = mod_sqr(qk, n);
        if (test_bit(m, i)) {
            // index k -> k+1
            T nu = half_mod(mod_add(mod_mul(p, u, n), v, n), n);
            T nv = half_mod(mod_add(mod_mul(d, u, n), mod_mul(p, v, n), n), n);
            u = std::move(nu);
            v = std::move(nv);
            qk = mod_mul(qk, q, n);
        }
    }
    return {u, v, qk};
}

namespace detail {

template <class T>
LucasResidues<T> uv_mod(const LucasParams& prm, const T& m, const T& n) {
    if (!is_odd(n) || n < 3) throw argument_error("lucas_uv_mod: modulus must be odd and >= 3");
    T p = residue(prm.p, n);
    T q = residue(prm.q, n);
    T d = residue(Integer(prm.p * prm.p - 4 * prm.q), n);
    return lucas_ladder<T>(p, q, d, m, n);
}

} // namespace detail

/// (U_m mod n, V_m mod n, Q^m mod n) in O(log m) steps.
inline LucasResidues<u64> lucas_uv_mod(const LucasParams& prm, u64 m, u64 n) {
    return detail::uv_mod<u64>(prm, m, n);
}
inline LucasResidues<Natural> lucas_uv_mod(const LucasParams& prm, const Natural& m, const Natural& n) {
    return detail::uv_mod<Natural>(prm, m, n);
}

// ===== test rounds

namespace detail {

template <class T>
struct RoundSetup {
    T p, q, d;
    int eps;
    EvenOddSplit<T> split;
};

/// Shared screens of both rounds. Returns a result when the round is decided
/// before any sequence evaluation.
template <class T>
std::optional<RoundResult> prepare_round(const T& n, const LucasParams& prm, RoundSetup<T>& out) {
    if (!is_odd(n) || n < 5) throw argument_error("Lucas round: n must be odd and >= 5");
    if (residue(Integer(prm.p * prm.p - 4 * prm.q - prm.d), n) != 0)
        return RoundResult{Verdict::bad_params, "D is not P^2 - 4Q mod n", std::nullopt};
    out.p = residue(prm.p, n);
    out.q = residue(prm.q, n);
    out.d = residue(prm.d, n);
    T gq = gcd(out.q, n);
    if (gq == n) return RoundResult{Verdict::bad_params, "Q = 0 mod n", std::nullopt};
    if (gq != 1)
        return RoundResult{Verdict::composite, "gcd(Q, n) = " + to_decimal(to_natural(gq)), to_natural(gq)};
    out.eps = jacobi(Integer(prm.d), to_natural(n));
    if (out.eps == 0) {
        T gd = gcd(out.d, n);
        std::optional<Natural> f;
        if (gd != n) f = to_natural(gd);
        return RoundResult{Verdict::bad_params, "gcd(D, n) = " + to_decimal(to_natural(gd)), f};
    }
    T m = out.eps == 1 ? T(n - 1) : T(n + 1);
    out.split = split_even_odd<T>(m);
    return std::nullopt;
}

template <class T>
RoundResult strong_round(const T& n, const LucasParams& prm) {
    RoundSetup<T> s{};
    if (auto early = prepare_round<T>(n, prm, s)) return *early;
    auto r = lucas_ladder<T>(s.p, s.q, s.d, s.split.q, n);
    if (r.u == 0 || r.v == 0) return {Verdict::probable_prime, "", std::nullopt};
    T v = r.v, qk = r.qm;
    for (unsigned i = 1; i < s.split.kappa; ++i) {
        v = mod_sub(mod_sqr(v, n), mod_add(qk, qk, n), n);
        if (v == 0) return {Verdict::probable_prime, "", std::nullopt};
        qk = mod_sqr(qk, n);
    }
    return {Verdict::composite, "strong Lucas condition fails", std::nullopt};
}

template <class T>
RoundResult weak_round(const T& n, const LucasParams& prm) {
    RoundSetup<T> s{};
    if (auto early = prepare_round<T>(n, prm, s)) return *early;
    T m = s.eps == 1 ? T(n - 1) : T(n + 1);
    auto r = lucas_ladder<T>(s.p, s.q, s.d, m, n);
    if (r.u == 0) return {Verdict::probable_prime, "", std::nullopt};
    return {Verdict::composite, "U_{n-eps} is not 0 mod n", std::nullopt};
}

inline constexpr u64 fast_limit = u64{1} << 62;

} // namespace detail

/// One strong Lucas round: n | U_q or n | V_{2^i q} for some i < kappa,
/// where n - eps = 2^kappa q.
inline RoundResult strong_lucas_round(const Natural& n, const LucasParams& prm) {
    if (fits_u64(n) && to_u64(n) < detail::fast_limit) return detail::strong_round<u64>(to_u64(n), prm);
    return detail::strong_round<Natural>(n, prm);
}
inline RoundResult strong_lucas_round(u64 n, const LucasParams& prm) {
    if (n < detail::fast_limit) return detail::strong_round<u64>(n, prm);
    return detail::strong_round<Natural>(to_natural(n), prm);
}

/// One Lucas round: n | U_{n - eps}.
inline RoundResult lucas_round(const Natural& n, const LucasParams& prm) {
    if (fits_u64(n) && to_u64(n) < detail::fast_limit) return detail::weak_round<u64>(to_u64(n), prm);
    return detail::weak_round<Natural>(n, prm);
}
inline RoundResult lucas_round(u64 n, const LucasParams& prm) {
    if (n < detail::fast_limit) return detail::weak_round<u64>(n, prm);
    return detail::weak_round<Natural>(to_natural(n), prm);
}

// ===== parameter selection

inline constexpr int max_param_rejections = 128;

/// P uniform in [0, n), Q = (P^2 - D)/4 mod n; resamples while
/// gcd(P^2 - D, n) > 1 (equivalently gcd(Q, n) > 1).
inline LucasParams sample_params(const Natural& n, const Integer& d, Rng& rng) {
    if (!is_odd(n) || n < 5) throw argument_error("sample_params: n must be odd and >= 5");
    if (gcd(residue(d, n), n) != 1) throw argument_error("sample_params: gcd(n, 2D) must be 1");
    Natural inv4 = mod_inv(Natural(4), n);
    Natural dr = residue(d, n);
    for (int attempt = 0; attempt < max_param_rejections; ++attempt) {
        Natural p = uniform_below(n, rng);
        Natural x = mod_sub(mod_sqr(p, n), dr, n);
        if (gcd(x, n) != 1) continue;
        return {p, mod_mul(x, inv4, n), d};
    }
    throw std::runtime_error("sample_params: no admissible params after 128 draws");
}

enum class DMethod { A, B };

/// First D with (D/n) = -1 from 5, -7, 9, -11, ... (A) or 5, 9, 13, ... (B).
inline LucasParams select_d(const Natural& n, DMethod method) {
    if (!is_odd(n) || n < 3) throw argument_error("select_d: n must be odd and >= 3");
    for (int i = 0; i < 64; ++i) {
        Integer d;
        if (method == DMethod::A) {
            d = 5 + 2 * i;
            if (i % 2) d = -d;
        } else {
            d = 5 + 4 * i;
        }
        if (jacobi(d, n) != -1) continue;
        if (method == DMethod::A) return {1, Integer((1 - d) / 4), d};
        Integer p = isqrt(d) + 1;   // least integer above sqrt(D), D never square here
        if (!is_odd(p)) p += 1;
        return {p, Integer((p * p - d) / 4), d};
    }
    throw std::runtime_error("select_d: D-search overflow (n is probably a perfect square)");
}

} // namespace slucas
