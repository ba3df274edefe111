#include "slucas/slucas.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace slucas;

namespace {

// Deterministic Miller-Rabin for n < 2^64 on plain 128-bit arithmetic.
bool oracle_prime(u64 n) {
    if (n < 2) return false;
    const u64 bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : bases)
        if (n % p == 0) return n == p;
    u64 d = n - 1;
    int s = 0;
    while (!(d & 1)) { d >>= 1; ++s; }
    auto mulm = [n](u64 a, u64 b) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % n); };
    for (u64 a : bases) {
        u64 x = 1, b = a, e = d;
        for (; e; e >>= 1, b = mulm(b, b))
            if (e & 1) x = mulm(x, b);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s && composite; ++i) {
            x = mulm(x, x);
            if (x == n - 1) composite = false;
        }
        if (composite) return false;
    }
    return true;
}

GenConfig base_config(unsigned k, unsigned t, u64 seed) {
    GenConfig c;
    c.k = k;
    c.t = t;
    c.seed = seed;
    return c;
}

void expect_same(const GenOutcome& a, const GenOutcome& b) {
    EXPECT_EQ(a.prime, b.prime);
    EXPECT_EQ(a.candidates_tested, b.candidates_tested);
    EXPECT_EQ(a.rounds_run, b.rounds_run);
    ASSERT_EQ(a.transcript.size(), b.transcript.size());
    for (std::size_t i = 0; i < a.transcript.size(); ++i) {
        EXPECT_EQ(a.transcript[i].n, b.transcript[i].n);
        EXPECT_EQ(a.transcript[i].stage, b.transcript[i].stage);
        EXPECT_EQ(a.transcript[i].rounds_passed, b.transcript[i].rounds_passed);
    }
}

} // namespace

TEST(Oracle, AgreesWithSieve) {
    auto primes = sieve_primes(200000);
    std::size_t j = 0;
    for (u64 n = 0; n < 200000; ++n) {
        bool p = j < primes.size() && primes[j] == n;
        if (p) ++j;
        ASSERT_EQ(oracle_prime(n), p) << n;
    }
    EXPECT_FALSE(oracle_prime(3215031751ull));   // strong pseudoprime to bases 2, 3, 5, 7
    EXPECT_TRUE(oracle_prime(18446744073709551557ull));
}

TEST(Config, Validation) {
    GenConfig c;
    c.k = 4;
    EXPECT_THROW(validate(c), argument_error);
    c = GenConfig{};
    c.t = 0;
    EXPECT_THROW(validate(c), argument_error);
    c = GenConfig{};
    c.s = 0;
    EXPECT_THROW(validate(c), argument_error);
    c = GenConfig{};
    c.l = 1;
    EXPECT_THROW(validate(c), argument_error);
    c = GenConfig{};
    c.d = Integer(7);
    EXPECT_THROW(validate(c), argument_error);
    c.d = Integer(9);
    EXPECT_THROW(validate(c), argument_error);
    c.d = Integer(-7);
    EXPECT_NO_THROW(validate(c));
    c.d = Integer(5);
    EXPECT_NO_THROW(validate(c));
}

TEST(Uniform, OutputsArePrimeAtK32) {
    for (u64 seed = 0; seed < 1000; ++seed) {
        GenConfig c = base_config(32, 2, seed);
        c.record_transcript = false;
        GenOutcome out = strong_luc_generate(c);
        ASSERT_TRUE(out.prime);
        u64 n = to_u64(*out.prime);
        ASSERT_TRUE(oracle_prime(n)) << n;
        ASSERT_EQ(bit_length(n), 32u);
    }
}

TEST(Uniform, FixedDScreens) {
    for (u64 seed = 0; seed < 300; ++seed) {
        GenConfig c = base_config(24, 1, seed);
        c.d = Integer(5);
        GenOutcome out = strong_luc_generate(c);
        Natural n = *out.prime;
        EXPECT_TRUE(is_odd(n));
        EXPECT_EQ(bit_length(n), 24u);
        for (u64 p : {3, 5, 7, 11, 13, 17, 19, 23}) EXPECT_NE(mod_small(n, p), 0u) << n;
        EXPECT_EQ(jacobi(Integer(5), n), -1);
        for (const auto& e : out.transcript) {
            if (e.stage == "accepted" || e.stage == "jacobi") continue;
            // every candidate past the Jacobi screen has (5/n) = -1
            EXPECT_EQ(jacobi(Integer(5), e.n), -1);
            if (e.stage == "lucas_round") { EXPECT_LT(e.rounds_passed, 1u); }
        }
        EXPECT_EQ(out.transcript.size(), out.candidates_tested);
        EXPECT_EQ(out.transcript.back().stage, "accepted");
    }
}

TEST(Uniform, NeverOutputsTwinPrimeProducts) {
    // at k = 8 twin-prime products are common enough to be drawn; none is output.
    // A single round lets some other composites through, at a rate near q_{8,1}.
    int square_rejects = 0, composites = 0;
    for (u64 seed = 0; seed < 2000; ++seed) {
        GenConfig c = base_config(8, 1, seed);
        c.d = Integer(-7);
        c.l = 2;
        GenOutcome out = strong_luc_generate(c);
        u64 n = to_u64(*out.prime);
        EXPECT_FALSE(is_twin_prime_product(factorize(n))) << n;
        composites += !oracle_prime(n);
        for (const auto& e : out.transcript) square_rejects += e.stage == "square";
    }
    EXPECT_GT(square_rejects, 0);
    EXPECT_LT(composites, 2000 / 10);
}

TEST(Uniform, SeededDeterminism) {
    GenConfig c = base_config(96, 3, 77);
    expect_same(strong_luc_generate(c), strong_luc_generate(c));
    c.d = Integer(13);
    expect_same(strong_luc_generate(c), strong_luc_generate(c));
}

TEST(Uniform, LargeBitSize) {
    GenConfig c = base_config(1024, 1, 5);
    c.record_transcript = false;
    GenOutcome out = strong_luc_generate(c);
    ASSERT_TRUE(out.prime);
    EXPECT_EQ(bit_length(*out.prime), 1024u);
    EXPECT_EQ(baillie_psw(*out.prime), Verdict::probable_prime);
}

TEST(Sampler, LowBitsChiSquare) {
    // odd 20-bit values: bit 0 is forced, so the low 8 bits take 128 classes
    Rng rng(123);
    std::vector<int> counts(256, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        Natural n = random_odd_kbit(20, rng);
        ASSERT_EQ(bit_length(n), 20u);
        ++counts[mod_small(n, 256)];
    }
    double expected = draws / 128.0, chi2 = 0;
    for (int r = 0; r < 256; ++r) {
        if (r % 2 == 0) {
            EXPECT_EQ(counts[r], 0);
            continue;
        }
        EXPECT_GT(counts[r], 0);
        chi2 += (counts[r] - expected) * (counts[r] - expected) / expected;
    }
    // 127 degrees of freedom; the 0.999 quantile is about 181.99
    EXPECT_LT(chi2, 181.99);
}

TEST(Incremental, OutputsArePrimeAtK32) {
    const u64 s = static_cast<u64>(std::ceil(32 * std::log(2.0))) * 10;
    int fails = 0;
    for (u64 seed = 0; seed < 1000; ++seed) {
        GenConfig c = base_config(32, 2, seed);
        c.s = s;
        GenOutcome out = prime_inc_luc(c);
        ASSERT_LE(out.candidates_tested, s);
        ASSERT_LE(out.transcript.size(), s);
        if (!out.prime) { ++fails; continue; }
        ASSERT_TRUE(oracle_prime(to_u64(*out.prime))) << *out.prime;
    }
    EXPECT_LT(fails, 5);
}

TEST(Incremental, PrimeGapWindowFails) {
    // 113 and 127 are consecutive primes
    GenConfig c = base_config(7, 2, 0);
    c.s = 2;
    Rng rng(1);
    GenOutcome out = prime_inc_luc_from(c, Natural(115), rng);
    EXPECT_FALSE(out.prime);
    EXPECT_EQ(out.candidates_tested, 2u);
    ASSERT_EQ(out.transcript.size(), 2u);
    EXPECT_EQ(out.transcript[0].stage, "trial_division");   // 115 = 5 * 23
    EXPECT_EQ(out.transcript[1].stage, "trial_division");   // 117 = 9 * 13
    c.s = 6;
    out = prime_inc_luc_from(c, Natural(115), rng);
    EXPECT_FALSE(out.prime);
    c.s = 7;
    out = prime_inc_luc_from(c, Natural(115), rng);
    ASSERT_TRUE(out.prime);
    EXPECT_EQ(*out.prime, 127);
}

TEST(Incremental, FixedDAndOptInScreens) {
    GenConfig c = base_config(40, 2, 3);
    c.s = 1000;
    c.d = Integer(5);
    c.screen_eps = true;
    c.screen_square = true;
    for (u64 seed = 0; seed < 100; ++seed) {
        c.seed = seed;
        GenOutcome out = prime_inc_luc(c);
        if (!out.prime) continue;
        EXPECT_EQ(jacobi(Integer(5), *out.prime), -1);
        EXPECT_EQ(baillie_psw(*out.prime), Verdict::probable_prime);
    }
}

TEST(Incremental, SeededDeterminism) {
    GenConfig c = base_config(128, 2, 11);
    c.s = 500;
    expect_same(prime_inc_luc(c), prime_inc_luc(c));
}

TEST(RemainderTableTest, MatchesDirectResidues) {
    std::vector<u64> primes;
    for (u64 p : sieve_primes(100))
        if (p > 2) primes.push_back(p);
    Rng rng(6);
    Natural n = random_odd_kbit(200, rng);
    RemainderTable table(n, primes);
    for (int step = 0; step < 1000; ++step, n += 2, table.advance()) {
        bool divisible = false;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            ASSERT_EQ(table.residues()[i], mod_small(n, primes[i]));
            divisible = divisible || mod_small(n, primes[i]) == 0;
        }
        ASSERT_EQ(table.passes(), !divisible);
    }
}

TEST(RemainderTableTest, FlagsMultiplesOfThreeAndFive) {
    RemainderTable t(Natural(21), {3, 5});
    EXPECT_FALSE(t.passes());   // 21
    t.advance();
    EXPECT_TRUE(t.passes());    // 23
    t.advance();
    EXPECT_FALSE(t.passes());   // 25
    EXPECT_EQ(t.residues()[0], 1u);
    EXPECT_EQ(t.residues()[1], 0u);
}

TEST(Transcript, JsonLines) {
    GenConfig c = base_config(32, 1, 4);
    GenOutcome out = strong_luc_generate(c);
    std::ostringstream os;
    write_transcript(os, out.transcript);
    std::istringstream is(os.str());
    std::string line;
    std::size_t lines = 0;
    while (std::getline(is, line)) {
        auto j = nlohmann::json::parse(line);
        EXPECT_EQ(parse_natural(j["n"].get<std::string>()), out.transcript[lines].n);
        EXPECT_EQ(j["stage"], out.transcript[lines].stage);
        ++lines;
    }
    EXPECT_EQ(lines, out.transcript.size());
}
