#pragma once

/** @file generation.hpp
 *  Probable-prime generation: uniform choice with strong Lucas rounds, and
 *  incremental search from a random start with a remainder table.
 */

#include "counting.hpp"
#include "random.hpp"

#include "json.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace slucas {

struct GenConfig {
    unsigned k = 64;                  ///< bit size, >= 5
    unsigned t = 1;                   ///< strong Lucas rounds, >= 1
    std::optional<Integer> d;         ///< fixed D; empty selects D per candidate by method A
    unsigned l = 8;                   ///< number of leading odd primes screened (uniform mode)
    u64 s = 1;                        ///< window size (incremental mode)
    u64 seed = 0;
    bool screen_eps = false;          ///< incremental: also require (D/n) = -1
    bool screen_square = false;       ///< incremental: also reject square n - eps
    u64 max_candidates = 1000000;     ///< uniform mode iteration cap
    bool record_transcript = true;
};

struct TranscriptEntry {
    Natural n;
    std::string stage;        ///< rejection stage, or "accepted"
    unsigned rounds_passed;
};

struct GenOutcome {
    std::optional<Natural> prime;   ///< empty means Fail
    u64 candidates_tested = 0;
    u64 rounds_run = 0;
    std::vector<TranscriptEntry> transcript;
};

inline void validate(const GenConfig& cfg) {
    if (cfg.k < 5) throw argument_error("GenConfig: k must be >= 5");
    if (cfg.t < 1) throw argument_error("GenConfig: t must be >= 1");
    if (cfg.s < 1) throw argument_error("GenConfig: s must be >= 1");
    if (cfg.l < 2) throw argument_error("GenConfig: l must be >= 2");
    if (cfg.d) {
        unsigned long r4 = mod_small(Natural(*cfg.d >= 0 ? Integer(*cfg.d) : Integer(-*cfg.d)), 4);
        bool ok = *cfg.d >= 0 ? (r4 == 0 || r4 == 1) : (r4 == 0 || r4 == 3);
        if (!ok) throw argument_error("GenConfig: D must be 0 or 1 mod 4");
        if (*cfg.d >= 0 && is_perfect_square(Natural(*cfg.d))) throw argument_error("GenConfig: D must not be a square");
    }
}

/// One JSON object per candidate: {"n": hex, "stage": ..., "rounds_passed": r}.
inline void write_transcript(std::ostream& os, const std::vector<TranscriptEntry>& tr) {
    for (const auto& e : tr) {
        nlohmann::json j{{"n", to_hex(e.n)}, {"stage", e.stage}, {"rounds_passed", e.rounds_passed}};
        os << j.dump() << '\n';
    }
}

// ===== remainder table

/// Residues of n0 + 2i modulo a fixed prime list, advanced by additions only.
class RemainderTable {
public:
    RemainderTable(const Natural& n0, std::vector<u64> primes) : primes_(std::move(primes)) {
        residues_.reserve(primes_.size());
        for (u64 p : primes_) residues_.push_back(mod_small(n0, p));
    }

    void advance() {
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            u64 r = residues_[i] + 2;
            residues_[i] = r >= primes_[i] ? r - primes_[i] : r;
        }
    }

    bool passes() const {
        for (u64 r : residues_)
            if (r == 0) return false;
        return true;
    }

    const std::vector<u64>& residues() const { return residues_; }
    const std::vector<u64>& primes() const { return primes_; }

private:
    std::vector<u64> primes_;
    std::vector<u64> residues_;
};

// ===== shared per-candidate steps

namespace detail {

inline void note(GenOutcome& out, const GenConfig& cfg, const Natural& n, const char* stage, unsigned rounds) {
    if (cfg.record_transcript) out.transcript.push_back({n, stage, rounds});
}

/// Runs up to t strong Lucas rounds with fresh parameters. Returns rounds passed.
inline unsigned run_rounds(const Natural& n, const Integer& d, unsigned t, Rng& rng, GenOutcome& out) {
    for (unsigned i = 0; i < t; ++i) {
        LucasParams prm = sample_params(n, d, rng);
        ++out.rounds_run;
        if (strong_lucas_round(n, prm).verdict != Verdict::probable_prime) return i;
    }
    return t;
}

} // namespace detail

/// Uniform choice: draw odd k-bit n; require (D/n) = -1; reject if
/// gcd(D,n) > 1, divisible by one of the first l odd primes, or n + 1 square;
/// then t strong Lucas rounds.
inline GenOutcome strong_luc_generate(const GenConfig& cfg, Rng& rng) {
    validate(cfg);
    std::vector<u64> small;
    for (unsigned i = 1; i <= cfg.l; ++i) small.push_back(odd_prime(i));
    GenOutcome out;
    while (out.candidates_tested < cfg.max_candidates) {
        Natural n = random_odd_kbit(cfg.k, rng);
        ++out.candidates_tested;
        Integer d;
        if (cfg.d) {
            d = *cfg.d;
            if (jacobi(d, n) != -1) { detail::note(out, cfg, n, "jacobi", 0); continue; }
            if (gcd(residue(d, n), n) != 1) { detail::note(out, cfg, n, "gcd", 0); continue; }
        } else {
            if (is_perfect_square(n)) { detail::note(out, cfg, n, "square", 0); continue; }
            d = select_d(n, DMethod::A).d;
        }
        bool divisible = false;
        for (u64 p : small)
            if (mod_small(n, p) == 0) { divisible = true; break; }
        if (divisible) { detail::note(out, cfg, n, "trial_division", 0); continue; }
        if (is_perfect_square(Natural(n + 1))) { detail::note(out, cfg, n, "square", 0); continue; }
        unsigned passed = detail::run_rounds(n, d, cfg.t, rng, out);
        if (passed < cfg.t) { detail::note(out, cfg, n, "lucas_round", passed); continue; }
        detail::note(out, cfg, n, "accepted", passed);
        out.prime = n;
        return out;
    }
    throw std::runtime_error("strong_luc_generate: candidate cap reached");
}

inline GenOutcome strong_luc_generate(const GenConfig& cfg) {
    Rng rng(cfg.seed);
    return strong_luc_generate(cfg, rng);
}

/// Incremental search over n0, n0 + 2, ..., n0 + 2(s-1) from a given start.
inline GenOutcome prime_inc_luc_from(const GenConfig& cfg, const Natural& n0, Rng& rng) {
    validate(cfg);
    if (!is_odd(n0) || n0 < 5) throw argument_error("prime_inc_luc: n0 must be odd and >= 5");
    RemainderTable table(n0, {3, 5});
    GenOutcome out;
    Natural n = n0;
    for (u64 i = 0; i < cfg.s; ++i, n += 2, table.advance()) {
        ++out.candidates_tested;
        if (!is_odd(n)) throw std::logic_error("prime_inc_luc: even candidate");
        if (!table.passes()) {
            // 3 and 5 themselves are prime
            if (n != 3 && n != 5) { detail::note(out, cfg, n, "trial_division", 0); continue; }
        }
        Integer d;
        int eps;
        if (cfg.d) {
            d = *cfg.d;
            eps = jacobi(d, n);
            if (eps == 0) { detail::note(out, cfg, n, "gcd", 0); continue; }
        } else {
            if (is_perfect_square(n)) { detail::note(out, cfg, n, "square", 0); continue; }
            d = select_d(n, DMethod::A).d;
            eps = -1;
        }
        if (cfg.screen_eps && eps != -1) { detail::note(out, cfg, n, "jacobi", 0); continue; }
        if (cfg.screen_square && is_perfect_square(Natural(eps == 1 ? Natural(n - 1) : Natural(n + 1)))) {
            detail::note(out, cfg, n, "square", 0);
            continue;
        }
        unsigned passed = detail::run_rounds(n, d, cfg.t, rng, out);
        if (passed < cfg.t) { detail::note(out, cfg, n, "lucas_round", passed); continue; }
        detail::note(out, cfg, n, "accepted", passed);
        out.prime = n;
        return out;
    }
    return out;
}

/// Incremental search from a uniformly drawn odd k-bit n0.
inline GenOutcome prime_inc_luc(const GenConfig& cfg, Rng& rng) {
    validate(cfg);
    Natural n0 = random_odd_kbit(cfg.k, rng);
    return prime_inc_luc_from(cfg, n0, rng);
}

inline GenOutcome prime_inc_luc(const GenConfig& cfg) {
    Rng rng(cfg.seed);
    return prime_inc_luc(cfg, rng);
}

} // namespace slucas
