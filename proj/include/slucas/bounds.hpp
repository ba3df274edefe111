#pragma once

/** @file bounds.hpp
 *  Closed-form error bounds for the uniform and incremental generators,
 *  the set-size and prime-count inputs they need, and the exact small-k
 *  enumeration of q_{k,1}.
 *
 *  Bound formulas are templates over a real type so the same code runs in
 *  double, long double, or a multiprecision float.
 */

#include "counting.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace slucas {

using HighReal = boost::multiprecision::cpp_bin_float_50;

namespace detail {

template <class Real>
Real pow2(const Real& x) {
    using std::pow;
    using boost::multiprecision::pow;
    return pow(Real(2), x);
}

template <class Real>
Real rpow(const Real& b, const Real& e) {
    using std::pow;
    using boost::multiprecision::pow;
    return pow(b, e);
}

template <class Real>
Real rsqrt(const Real& x) {
    using std::sqrt;
    using boost::multiprecision::sqrt;
    return sqrt(x);
}

} // namespace detail

// ===== basic quantities

/// rho_l = 1 + 1/p_{l+1}, p_i the i-th odd prime.
inline mpq_class rho(unsigned l) {
    if (l < 1) throw argument_error("rho: l must be >= 1");
    u64 p = odd_prime(l + 1);
    mpq_class r(to_natural(p + 1), to_natural(p));
    r.canonicalize();
    return r;
}

template <class Real = double>
Real rho_real(unsigned l) {
    return Real(1) + Real(1) / Real(odd_prime(l + 1));
}

/// 0.71867 * 2^k / k, a lower bound for the number of k-bit primes.
template <class Real = double>
Real prime_lower_bound(int k) {
    return Real(0.71867) * detail::pow2<Real>(Real(k)) / Real(k);
}

inline constexpr int exact_size_ceiling = 29;

/// pi(2^k) - pi(2^(k-1)) by sieving.
inline u64 prime_count_exact(int k) {
    if (k < 2 || k > exact_size_ceiling) throw capacity_error("prime_count_exact: k must be in [2, 29]");
    return count_primes(u64{1} << (k - 1), u64{1} << k);
}

/// Odd k-bit integers coprime to the first l odd primes, by inclusion-exclusion.
inline u64 count_m_tilde(int k, unsigned l) {
    if (k < 2 || k > 62) throw capacity_error("count_m_tilde: k must be in [2, 62]");
    if (l > 20) throw argument_error("count_m_tilde: l must be <= 20");
    const u64 lo = u64{1} << (k - 1), hi = u64{1} << k;
    // odd multiples of odd d in [1, x]
    auto odd_multiples = [](u64 x, u64 d) { return (x / d + 1) / 2; };
    i64 total = 0;
    for (u64 mask = 0; mask < (u64{1} << l); ++mask) {
        u64 d = 1;
        bool overflow = false;
        for (unsigned i = 0; i < l; ++i)
            if (mask >> i & 1u) {
                d *= odd_prime(i + 1);
                if (d >= hi) { overflow = true; break; }
            }
        if (overflow) continue;
        i64 c = static_cast<i64>(odd_multiples(hi - 1, d)) - static_cast<i64>(odd_multiples(lo - 1, d));
        total += (std::popcount(mask) % 2 ? -c : c);
    }
    return static_cast<u64>(total);
}

/// Twin-prime products p(p+2) in the k-bit range with p above the l-th odd prime.
inline u64 count_twin_products(int k, unsigned l) {
    if (k < 2 || k > 62) throw capacity_error("count_twin_products: k must be in [2, 62]");
    const u64 lo = u64{1} << (k - 1), hi = u64{1} << k;
    const u64 pmin = odd_prime(l + 1);
    u64 count = 0;
    u64 prev = 0;
    detail::for_each_prime(pmin, isqrt(hi) + 3, [&](u64 p) {
        if (prev && p == prev + 2) {
            u64 n = prev * p;
            if (n >= lo && n < hi) ++count;
        }
        prev = p;
    });
    return count;
}

enum class SizeMode {
    analytic,       ///< 2^(k - 2.9)
    exact_m,       ///< |M_{k,l}|, twin-prime products excluded
    exact_m_tilde  ///< |M~_{k,l}|, twin-prime products kept
};

struct SetSizes {
    int k;
    unsigned l;
    double analytic_lower;     ///< 2^(k-2.92)
    double analytic_upper;     ///< 2^(k-2.9)
    u64 m_kl;                ///< exact |M_{k,l}|
    u64 m_tilde_kl;          ///< exact |M~_{k,l}|
    u64 m_tilde_k2;          ///< exact |M~_{k,2}|
    u64 prime_count;         ///< pi(2^k) - pi(2^(k-1)), 0 when k > 29
};

/// Analytic bounds of |M~_{k,2}| and the exact counts for the given l.
inline SetSizes m_tilde_sizes(int k, unsigned l = 2) {
    SetSizes s{};
    s.k = k;
    s.l = l;
    s.analytic_lower = std::pow(2.0, k - 2.92);
    s.analytic_upper = std::pow(2.0, k - 2.9);
    s.m_tilde_kl = count_m_tilde(k, l);
    s.m_tilde_k2 = count_m_tilde(k, 2);
    s.m_kl = s.m_tilde_kl - count_twin_products(k, l);
    s.prime_count = k <= exact_size_ceiling ? prime_count_exact(k) : 0;
    return s;
}

template <class Real = double>
Real set_size(int k, unsigned l, SizeMode mode) {
    switch (mode) {
        case SizeMode::analytic: return detail::pow2<Real>(Real(k) - Real(2.9));
        case SizeMode::exact_m: return Real(count_m_tilde(k, l) - count_twin_products(k, l));
        default: return Real(count_m_tilde(k, l));
    }
}

// ===== reports

template <class Real = double>
struct BoundReport {
    Real value = 0;                                   ///< sum of the terms
    int m = 0;                                        ///< split parameter used
    std::vector<std::pair<std::string, Real>> terms;  ///< labeled addends
    std::string source;

    void add(std::string label, Real v) {
        value += v;
        terms.emplace_back(std::move(label), std::move(v));
    }
};

/// Admissible split parameters: 3 <= M <= 2 sqrt(k-1) - 1.
inline std::pair<int, int> m_range(int k) {
    int hi = static_cast<int>(std::floor(2.0 * std::sqrt(static_cast<double>(k - 1)) - 1.0));
    return {3, hi};
}

inline void check_m(int k, int m) {
    auto [lo, hi] = m_range(k);
    if (m < lo || m > hi) throw argument_error("M must satisfy 3 <= M <= 2 sqrt(k-1) - 1");
}

/// q_{k,r} <= N / (N + P).
template <class Real = double>
Real qkr_upper(const Real& n, const Real& p) {
    if (n < 0 || p <= 0) throw argument_error("qkr_upper: need N >= 0 and P > 0");
    return n / (n + p);
}

/// q_{k,t} <= (4/15)^(t-r) q_r / (1 - q_r).
template <class Real = double>
Real chain_rule(const Real& q_r, int r, int t) {
    if (q_r < 0 || q_r >= 1) throw argument_error("chain_rule: q_r must lie in [0, 1)");
    if (r >= t) throw argument_error("chain_rule: need r < t");
    return detail::rpow<Real>(Real(4) / Real(15), Real(t - r)) * q_r / (Real(1) - q_r);
}

/// q_{k,1} <= 4/19 gives q_{k,t} <= (4/15)^t for every t.
inline bool all_t_bound(const mpq_class& q1) { return q1 <= mpq_class(4, 19); }
inline bool all_t_bound(double q1) { return q1 <= 4.0 / 19.0; }

// ===== sum bounds for the uniform generator

enum class SimpleBoundForm {
    tabulated,   ///< second term 2^(k - 2 sqrt(k-1)) rho^M M(M-1)
    displayed    ///< same with exponent + 1
};

template <class Real = double>
BoundReport<Real> sum_bound_simple(int k, unsigned l, int m, SimpleBoundForm form = SimpleBoundForm::tabulated) {
    check_m(k, m);
    const Real r = rho_real<Real>(l);
    const Real kk(k), mm(m);
    BoundReport<Real> rep;
    rep.m = m;
    rep.source = form == SimpleBoundForm::tabulated ? "simple sum bound, tabulated form" : "simple sum bound, displayed form";
    rep.add("tail", detail::pow2<Real>(kk - Real(1.9) - mm) * detail::rpow<Real>(r, mm + 1) / (Real(2) - r));
    Real e = kk - Real(2) * detail::rsqrt<Real>(kk - 1) + (form == SimpleBoundForm::displayed ? Real(1) : Real(0));
    rep.add("head", detail::pow2<Real>(e) * detail::rpow<Real>(r, mm) * mm * (mm - 1));
    return rep;
}

/// |C_{m,D} cap M_{k,l}| <= 2^k sum_{j=2}^m (2^(m+1-j) - 1)/(2^((k-1)/j) - 1).
template <class Real = double>
Real c_md_bound(int k, int m) {
    Real s = 0;
    for (int j = 2; j <= m; ++j)
        s += (detail::pow2<Real>(Real(m + 1 - j)) - 1) / (detail::pow2<Real>(Real(k - 1) / Real(j)) - 1);
    return detail::pow2<Real>(Real(k)) * s;
}

template <class Real = double>
BoundReport<Real> sum_bound_refined(int k, unsigned l, int m, const Real& m_size) {
    check_m(k, m);
    const Real r = rho_real<Real>(l);
    BoundReport<Real> rep;
    rep.m = m;
    rep.source = "refined sum bound";
    rep.add("tail", detail::pow2<Real>(Real(1 - m)) * detail::rpow<Real>(r, Real(m + 1)) / (Real(2) - r) * m_size);
    Real head = 0;
    for (int mi = 2; mi <= m; ++mi) head += detail::rpow<Real>(r / 2, Real(mi)) * c_md_bound<Real>(k, mi);
    rep.add("head", head);
    return rep;
}

enum class ProductSpan {
    j_primes,         ///< prod_{i=1}^{j} p_{l+i}
    j_minus_1_primes  ///< prod_{i=1}^{j-1} p_{l+i}
};

/// Cardinality bounds for the two halves of C_{m,D} cap M_{k,l}.
template <class Real = double>
std::pair<Real, Real> cmd_bounds(int k, unsigned l, int m, ProductSpan span = ProductSpan::j_primes) {
    if (m < 2 || Real(m + 1) > Real(2) * detail::rsqrt<Real>(Real(k - 1)))
        throw argument_error("cmd_bounds: need 2 <= m and m + 1 <= 2 sqrt(k-1)");
    const Real two_k = detail::pow2<Real>(Real(k));
    Real d1 = 0, d2 = 0;
    Real prod = 1;
    if (span == ProductSpan::j_primes) prod *= Real(odd_prime(l + 1));
    for (int j = 2; j <= m; ++j) {
        prod *= Real(odd_prime(l + static_cast<unsigned>(j) - (span == ProductSpan::j_primes ? 0u : 1u)));
        Real denom = detail::pow2<Real>(Real(k - 1) / Real(j)) + 1;
        d1 += Real(3) / prod / denom;
        if (j <= m - 2) d2 += (detail::pow2<Real>(Real(m + 1 - j)) - 4) / denom;
    }
    return {two_k * d1, two_k * d2};
}

/// N_r = 2^(r(1-M)) |M| rho^((M+1)r)/(2^r - rho^r)
///     + 2^r sum_{m=2}^M (rho/2)^(mr) (d1(m) + d2(m)).
template <class Real = double>
BoundReport<Real> sum_bound_split(int k, unsigned l, int m, int r, const Real& m_size,
                                     ProductSpan span = ProductSpan::j_primes) {
    check_m(k, m);
    if (r < 1) throw argument_error("sum_bound_split: r must be >= 1");
    const Real rh = rho_real<Real>(l);
    const Real rr(r);
    BoundReport<Real> rep;
    rep.m = m;
    rep.source = std::string("split sum bound (r-normalized, ") +
                 (span == ProductSpan::j_primes ? "j-prime product)" : "(j-1)-prime product)");
    rep.add("tail", detail::pow2<Real>(rr * Real(1 - m)) * m_size * detail::rpow<Real>(rh, Real(m + 1) * rr) /
                        (detail::pow2<Real>(rr) - detail::rpow<Real>(rh, rr)));
    Real s1 = 0, s2 = 0;
    for (int mi = 2; mi <= m; ++mi) {
        auto [d1, d2] = cmd_bounds<Real>(k, l, mi, span);
        Real w = detail::rpow<Real>(rh / 2, Real(mi) * rr);
        s1 += w * d1;
        s2 += w * d2;
    }
    rep.add("d1", detail::pow2<Real>(rr) * s1);
    rep.add("d2", detail::pow2<Real>(rr) * s2);
    return rep;
}

// ===== M optimization

template <class Real = double>
struct OptimizedBound {
    Real q;                    ///< N / (N + P) at the best M
    BoundReport<Real> n;       ///< the sum bound at the best M
    std::vector<Real> by_m;    ///< q for every admissible M, starting at M = 3
};

/// Minimizes N(M)/(N(M) + P) over the admissible M range.
template <class Real = double>
OptimizedBound<Real> optimize_m(int k, const Real& p, const std::function<BoundReport<Real>(int)>& n_of_m) {
    auto [lo, hi] = m_range(k);
    if (hi < lo) throw argument_error("optimize_m: empty M range");
    OptimizedBound<Real> best{};
    bool have = false;
    for (int m = lo; m <= hi; ++m) {
        BoundReport<Real> rep = n_of_m(m);
        Real q = qkr_upper<Real>(rep.value, p);
        best.by_m.push_back(q);
        if (!have || q < best.q) {
            best.q = q;
            best.n = std::move(rep);
            have = true;
        }
    }
    return best;
}

// ===== analytic bound

/// q_{k,1} < k^2 4^(1.8 - sqrt k) rho^(2 sqrt(k-1) - 2).
template <class Real = double>
Real qk1_analytic(int k, unsigned l) {
    if (k < 2) throw argument_error("qk1_analytic: k must be >= 2");
    Real kk(k);
    return kk * kk * detail::rpow<Real>(Real(4), Real(1.8) - detail::rsqrt<Real>(kk)) *
           detail::rpow<Real>(rho_real<Real>(l), Real(2) * detail::rsqrt<Real>(kk - 1) - 2);
}

// ===== incremental search

/// y_{k,t,s} <= 2^(3.42+t) (ck)^2 sum_{m=3}^{ceil(1.2M)} 2^(m(1-t))
///              sum_{j=2}^m 2^(-j-(k-1)/j) + 0.7 ck 2^(-tM),  s = c ln(2^k).
template <class Real = double>
BoundReport<Real> ykts_bound(int k, int t, double c, int m) {
    check_m(k, m);
    const Real kk(k), tt(t), ck = Real(c) * kk;
    const int top = static_cast<int>(std::ceil(1.2 * m));
    Real s = 0;
    for (int mi = 3; mi <= top; ++mi) {
        Real inner = 0;
        for (int j = 2; j <= mi; ++j) inner += detail::pow2<Real>(Real(-j) - (kk - 1) / Real(j));
        s += detail::pow2<Real>(Real(mi) * (1 - tt)) * inner;
    }
    BoundReport<Real> rep;
    rep.m = m;
    rep.source = "incremental-search bound";
    rep.add("sum", detail::pow2<Real>(Real(3.42) + tt) * ck * ck * s);
    rep.add("tail", Real(0.7) * ck * detail::pow2<Real>(-tt * Real(m)));
    return rep;
}

template <class Real = double>
BoundReport<Real> ykts_optimized(int k, int t, double c) {
    auto [lo, hi] = m_range(k);
    BoundReport<Real> best;
    bool have = false;
    for (int m = lo; m <= hi; ++m) {
        auto rep = ykts_bound<Real>(k, t, c, m);
        if (!have || rep.value < best.value) { best = std::move(rep); have = true; }
    }
    return best;
}

/// floor(-log2 y), clamped to 0 when y >= 1.
inline int neg_log2_floor(double y) {
    if (y >= 1) return 0;
    return static_cast<int>(std::floor(-std::log2(y)));
}

/// Y_{k,t,s} <= k^2 y_{k,t,s} + (1 - 5.3/k)^(k^2).
inline double Ykts_total(int k, int t, double c) {
    if (k < 6) throw argument_error("Ykts_total: k must be >= 6");
    double y = ykts_optimized<double>(k, t, c).value;
    double kk = k;
    return kk * kk * y + std::exp(kk * kk * std::log1p(-5.3 / kk));
}

struct AsymptoticCheck {
    bool holds;
    double lambda;
    double max_ratio;   ///< max over the grid of y / (k^3 2^(-sqrt k))
};

/// Checks y_{k,t,s} <= lambda k^3 2^(-sqrt k) on a grid; default lambda = 2c^2 + 1.
inline AsymptoticCheck asymptotic_check(const std::vector<int>& ks, int t, double c,
                                        std::optional<double> lambda = std::nullopt) {
    double lam = lambda.value_or(2 * c * c + 1);
    AsymptoticCheck out{true, lam, 0.0};
    for (int k : ks) {
        if (k < 18) throw argument_error("asymptotic_check: k must be >= 18");
        double y = ykts_optimized<double>(k, t, c).value;
        double ref = std::pow(static_cast<double>(k), 3) * std::pow(2.0, -std::sqrt(static_cast<double>(k)));
        out.max_ratio = std::max(out.max_ratio, y / ref);
        if (y > lam * ref) out.holds = false;
    }
    return out;
}

// ===== exact small-k enumeration

struct ExactEntry {
    u64 n;
    bool prime;
    u64 sl;      ///< SL(D,n) for composites
    u64 denom;   ///< n - eps_D(n) - 1 for composites
};

struct ExactPerD {
    i64 d;
    double q;
    HighReal sum_alpha;   ///< sum over composites of alpha-bar^r
    u64 composites;
    u64 primes;
};

struct ExactQResult {
    int k;
    int r;
    std::vector<ExactPerD> per_d;
    std::size_t argmax = 0;              ///< index into per_d with the largest sum
    std::vector<ExactEntry> transcript;  ///< entries for the maximizing D
    u64 crosschecks = 0;                 ///< sampled brute-force comparisons run
    u64 crosscheck_mismatches = 0;

    double max_q() const { return per_d.empty() ? 0.0 : per_d[argmax].q; }
};

/// Nonsquare D with |D| <= bound and D = 0, 1 mod 4.
inline std::vector<i64> default_d_scan(i64 bound = 100) {
    std::vector<i64> out;
    for (i64 d = -bound; d <= bound; ++d) {
        if (d == 0) continue;
        i64 r = ((d % 4) + 4) % 4;
        if (r != 0 && r != 1) continue;
        if (d > 0 && is_perfect_square(static_cast<u64>(d))) continue;
        out.push_back(d);
    }
    return out;
}

/// q from a transcript: sum alpha-bar^r over composites divided by that sum
/// plus the prime count.
inline std::pair<HighReal, double> q_from_transcript(const std::vector<ExactEntry>& tr, int r) {
    HighReal sum = 0;
    u64 primes = 0;
    for (const auto& e : tr) {
        if (e.prime) { ++primes; continue; }
        HighReal a = HighReal(e.sl) / HighReal(e.denom);
        sum += boost::multiprecision::pow(a, r);
    }
    if (sum == 0) return {sum, 0.0};
    HighReal q = sum / (sum + HighReal(primes));
    return {sum, q.convert_to<double>()};
}

/// Enumerates the odd k-bit integers coprime to 15 (twin-prime products
/// optionally excluded) and evaluates q_{k,r} for each D in the scan.
inline ExactQResult exact_qk1(int k, int r = 1, std::vector<i64> d_scan = default_d_scan(),
                              bool exclude_twins = true) {
    if (k < 2 || k > 16) throw capacity_error("exact_qk1: k must be in [2, 16]");
    if (r < 1) throw argument_error("exact_qk1: r must be >= 1");
    for (i64 d : d_scan) {
        i64 m4 = ((d % 4) + 4) % 4;
        if (d == 0 || (d > 0 && is_perfect_square(static_cast<u64>(d)))) throw argument_error("exact_qk1: D must be nonsquare");
        if (m4 != 0 && m4 != 1) throw argument_error("exact_qk1: D must be 0 or 1 mod 4");
    }
    struct Member { u64 n; Factorization f; };
    std::vector<Member> members;
    const u64 lo = u64{1} << (k - 1), hi = u64{1} << k;
    for (u64 n = lo | 1u; n < hi; n += 2) {
        if (n % 3 == 0 || n % 5 == 0) continue;
        Factorization f = factorize(n);
        if (exclude_twins && is_twin_prime_product(f)) continue;
        members.push_back({n, std::move(f)});
    }
    ExactQResult res{k, r, {}, 0, {}, 0, 0};
    std::size_t composite_index = 0;
    for (std::size_t di = 0; di < d_scan.size(); ++di) {
        Integer d(static_cast<long>(d_scan[di]));
        std::vector<ExactEntry> tr;
        for (const auto& mb : members) {
            if (!detail::coprime_to_2d(mb.n, d)) continue;
            if (mb.f.is_prime()) { tr.push_back({mb.n, true, 0, 0}); continue; }
            u64 sl = to_u64(sl_count(mb.f, d));
            int eps = jacobi(d, to_natural(mb.n));
            tr.push_back({mb.n, false, sl, detail::shifted(mb.n, eps) - 1});
        }
        auto [sum, q] = q_from_transcript(tr, r);
        u64 comps = 0, primes = 0;
        for (const auto& e : tr) (e.prime ? primes : comps)++;
        res.per_d.push_back({d_scan[di], q, sum, comps, primes});
        if (sum > res.per_d[res.argmax].sum_alpha) {
            res.argmax = res.per_d.size() - 1;
            res.transcript = tr;
        } else if (res.per_d.size() == 1) {
            res.transcript = tr;
        }
    }
    // sampled cross-check: every 100th composite, D taken round-robin from the scan
    for (const auto& mb : members) {
        if (mb.f.is_prime() || mb.n >= bruteforce_ceiling || d_scan.empty()) continue;
        if (composite_index++ % 100 != 0) continue;
        Integer d(static_cast<long>(d_scan[(composite_index / 100) % d_scan.size()]));
        ++res.crosschecks;
        if (sl_count(mb.f, d) != slpsp_bruteforce(mb.n, d)) ++res.crosscheck_mismatches;
    }
    return res;
}

} // namespace slucas
