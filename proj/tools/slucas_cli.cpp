// Command-line front end: primality tests, prime generation, pseudoprime
// counts and bound tables. Exit codes: 0 probable prime / success,
// 1 composite / fail, 2 usage error.

#include "slucas/slucas.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace slucas;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::optional<Integer> parse_d(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_integer(s);
}

void print_round(int i, const LucasParams& prm, const RoundResult& r) {
    std::cout << "round=" << i << " P=" << prm.p << " Q=" << prm.q << " D=" << prm.d
              << " result=" << (r.verdict == Verdict::probable_prime ? "pass" : "fail") << '\n';
}

// ----- test

struct TestArgs {
    std::string n;
    std::string method = "bpsw";
    unsigned rounds = 1;
    std::string d;
    u64 seed = 0;
    std::string bpsw_method = "A";
    bool weak = false;
    u64 trial_limit = 1000;
};

int run_test(const TestArgs& a) {
    Natural n = parse_natural(a.n);
    if (n < 5 || !is_odd(n)) throw UsageError("n must be odd and at least 5");
    Rng rng(a.seed);
    auto finish = [](bool prime, const std::string& reason) {
        std::cout << (prime ? "probable prime" : "composite") << '\n';
        if (!reason.empty()) std::cout << "reason=" << reason << '\n';
        return prime ? exit_ok : exit_negative;
    };

    if (a.method == "bpsw") {
        BpswOptions opt;
        opt.method = a.bpsw_method == "B" ? DMethod::B : DMethod::A;
        opt.strong = !a.weak;
        opt.trial_limit = a.trial_limit;
        Verdict v = baillie_psw(n, opt);
        std::cout << to_string(v) << '\n';
        std::cout << "method=bpsw\nrounds=1\nd_method=" << a.bpsw_method << "\nstrong=" << (opt.strong ? 1 : 0)
                  << "\ntrial_limit=" << opt.trial_limit << '\n';
        if (!is_perfect_square(n) && v == Verdict::probable_prime) {
            LucasParams prm = select_d(n, opt.method);
            std::cout << "P=" << prm.p << " Q=" << prm.q << " D=" << prm.d << '\n';
        }
        return v == Verdict::probable_prime ? exit_ok : exit_negative;
    }

    if (a.method == "fermat" || a.method == "miller-rabin") {
        bool mr = a.method == "miller-rabin";
        for (unsigned i = 1; i <= a.rounds; ++i) {
            Natural base = uniform_range(Natural(2), Natural(n - 2), rng);
            RoundResult r = mr ? miller_rabin_round(n, base) : fermat_round(n, base);
            std::cout << "round=" << i << " a=" << base
                      << " result=" << (r.verdict == Verdict::probable_prime ? "pass" : "fail") << '\n';
            if (r.verdict != Verdict::probable_prime) {
                std::cout << "method=" << a.method << "\nrounds=" << i << '\n';
                return finish(false, r.reason);
            }
        }
        std::cout << "method=" << a.method << "\nrounds=" << a.rounds << '\n';
        return finish(true, "");
    }

    if (a.method == "lucas" || a.method == "strong-lucas") {
        bool strong = a.method == "strong-lucas";
        Integer d;
        if (auto dd = parse_d(a.d)) {
            d = *dd;
            Natural g = gcd(residue(d, n), n);
            if (g != 1) {
                std::cout << "method=" << a.method << "\nrounds=0\nD=" << d << '\n';
                if (g == n) throw UsageError("D is divisible by n");
                return finish(false, "gcd(D, n) = " + g.get_str());
            }
        } else {
            if (is_perfect_square(n)) {
                std::cout << "method=" << a.method << "\nrounds=0\n";
                return finish(false, "perfect square");
            }
            d = select_d(n, DMethod::A).d;
        }
        for (unsigned i = 1; i <= a.rounds; ++i) {
            LucasParams prm = sample_params(n, d, rng);
            RoundResult r = strong ? strong_lucas_round(n, prm) : lucas_round(n, prm);
            print_round(static_cast<int>(i), prm, r);
            if (r.verdict != Verdict::probable_prime) {
                std::cout << "method=" << a.method << "\nrounds=" << i << '\n';
                return finish(false, r.reason);
            }
        }
        std::cout << "method=" << a.method << "\nrounds=" << a.rounds << '\n';
        return finish(true, "");
    }
    throw UsageError("unknown method: " + a.method);
}

// ----- generate

struct GenerateArgs {
    unsigned bits = 64;
    unsigned rounds = 1;
    std::string mode = "uniform";
    u64 window = 0;
    u64 seed = 0;
    std::string d;
    unsigned l = 8;
    bool screen_eps = false;
    bool screen_square = false;
    std::string transcript;
};

int run_generate(const GenerateArgs& a) {
    GenConfig cfg;
    cfg.k = a.bits;
    cfg.t = a.rounds;
    cfg.d = parse_d(a.d);
    cfg.l = a.l;
    cfg.seed = a.seed;
    cfg.screen_eps = a.screen_eps;
    cfg.screen_square = a.screen_square;
    cfg.s = a.window ? a.window : static_cast<u64>(std::ceil(std::log(2.0) * a.bits)) * 10;
    GenOutcome out;
    if (a.mode == "uniform") out = strong_luc_generate(cfg);
    else if (a.mode == "incremental") out = prime_inc_luc(cfg);
    else throw UsageError("unknown mode: " + a.mode);
    if (!a.transcript.empty()) {
        std::ofstream f(a.transcript);
        if (!f) throw std::runtime_error("cannot open transcript file " + a.transcript);
        write_transcript(f, out.transcript);
    }
    std::cerr << "candidates=" << out.candidates_tested << " rounds=" << out.rounds_run << '\n';
    if (!out.prime) {
        std::cout << "FAIL\n";
        return exit_negative;
    }
    std::cout << *out.prime << '\n';
    return exit_ok;
}

// ----- count

struct CountArgs {
    std::string n;
    std::string what = "sl";
    std::string d = "5";
};

int run_count(const CountArgs& a) {
    Natural nn = parse_natural(a.n);
    if (nn < 3 || !is_odd(nn)) throw UsageError("n must be odd and at least 3");
    if (nn >= factorize_ceiling) throw UsageError("n must be below 2^52");
    u64 n = to_u64(nn);
    Factorization f = factorize(n);
    Integer d = parse_integer(a.d);
    if (a.what == "sl") std::cout << sl_count(f, d) << '\n';
    else if (a.what == "f") std::cout << fermat_count(f) << '\n';
    else if (a.what == "l") std::cout << lucas_count(f, d) << '\n';
    else if (a.what == "mr") std::cout << mr_count(f) << '\n';
    else if (a.what == "alpha" || a.what == "alpha-d") {
        AlphaValue v = a.what == "alpha" ? alpha_bar(n, f, d) : alpha_d(f, d);
        mpq_class q = v.rational();
        std::cout << q.get_num() << '/' << q.get_den() << '\n' << fixed6(q.get_d()) << '\n';
    } else throw UsageError("unknown count: " + a.what);
    return exit_ok;
}

// ----- bounds

struct BoundsArgs {
    int table = 0;
    std::vector<int> single;
    unsigned l = 8;
    std::vector<double> c;
    std::string format = "tsv";
    std::string out;
};

std::string single_bound(int k, int t, const BoundsArgs& a) {
    TableOptions opt;
    opt.l = a.l;
    nlohmann::json j;
    j["k"] = k;
    j["t"] = t;
    double q;
    std::optional<int> m;
    std::string route;
    if (k < 2 || t < 1) throw UsageError("need k >= 2 and t >= 1");
    if (k <= 16) {
        auto r = exact_qk1(k, t);
        q = r.max_q();
        route = "exact enumeration";
    } else if (t == 1 && k >= 60) {
        auto r = simple_row(k, opt);
        q = r.q; m = r.m_opt; route = "simple sum bound";
    } else if (t == 1 && k >= 42) {
        auto r = refined_row(k, opt);
        q = r.q; m = r.m_opt; route = "refined sum bound";
    } else if (k >= 30) {
        auto r = split_row_analytic(k, t, opt);
        q = r.q; m = r.m_opt; route = "split sum bound, analytic sizes";
    } else {
        auto r = split_row_exact(k, t, opt);
        q = r.q; m = r.m_opt; route = "split sum bound, exact sizes";
    }
    if (a.format == "json") {
        j["value"] = q;
        j["route"] = route;
        if (m) j["M_opt"] = *m;
        return j.dump(2) + "\n";
    }
    std::string s = fixed6(q) + "\n";
    if (m) s += "M_opt=" + std::to_string(*m) + "\n";
    s += "route=" + route + "\n";
    return s;
}

int run_bounds(const BoundsArgs& a) {
    std::string text;
    if (a.table) {
        TableOptions opt;
        opt.l = a.l;
        if (!a.c.empty()) opt.c_values = a.c;
        Table t = emit_table(a.table, opt);
        text = a.format == "json" ? t.to_json() : t.to_tsv();
    } else if (a.single.size() == 2) {
        text = single_bound(a.single[0], a.single[1], a);
    } else {
        throw UsageError("give --table N or --single k t");
    }
    if (a.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(a.out);
        if (!f) throw std::runtime_error("cannot open output file " + a.out);
        f << text;
    }
    return exit_ok;
}

// ----- qk1

struct Qk1Args {
    int k = 6;
    int r = 1;
    long d_bound = 100;
    bool keep_twins = false;
};

int run_qk1(const Qk1Args& a) {
    auto res = exact_qk1(a.k, a.r, default_d_scan(a.d_bound), !a.keep_twins);
    nlohmann::json j;
    j["k"] = a.k;
    j["r"] = a.r;
    j["max_q"] = res.max_q();
    j["argmax_D"] = res.per_d.empty() ? 0 : res.per_d[res.argmax].d;
    j["crosschecks"] = res.crosschecks;
    j["crosscheck_mismatches"] = res.crosscheck_mismatches;
    j["per_D"] = nlohmann::json::array();
    for (const auto& p : res.per_d)
        j["per_D"].push_back({{"D", p.d}, {"q", p.q}, {"composites", p.composites}, {"primes", p.primes}});
    std::cout << j.dump(2) << '\n';
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strong Lucas primality tests, prime generation, pseudoprime counts and error bounds"};
    app.require_subcommand(1);

    TestArgs ta;
    auto* test = app.add_subcommand("test", "Run a primality test on n");
    test->add_option("n", ta.n, "Odd integer >= 5, decimal or 0x-hex")->required();
    test->add_option("--method", ta.method, "Test to run")
        ->check(CLI::IsMember({"lucas", "strong-lucas", "miller-rabin", "fermat", "bpsw"}));
    test->add_option("--rounds", ta.rounds, "Number of rounds")->check(CLI::PositiveNumber);
    test->add_option("--d", ta.d, "Discriminant D for Lucas rounds (default: method A selection)");
    test->add_option("--seed", ta.seed, "RNG seed");
    test->add_option("--bpsw-method", ta.bpsw_method, "D selection for bpsw")->check(CLI::IsMember({"A", "B"}));
    test->add_flag("--weak", ta.weak, "bpsw: Fermat and weak Lucas instead of the strong variants");
    test->add_option("--trial-limit", ta.trial_limit, "bpsw trial division bound");

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "Generate a probable prime");
    gen->add_option("--bits", ga.bits, "Bit size k")->check(CLI::Range(5u, 1u << 16));
    gen->add_option("--rounds", ga.rounds, "Strong Lucas rounds t")->check(CLI::PositiveNumber);
    gen->add_option("--mode", ga.mode, "uniform or incremental")->check(CLI::IsMember({"uniform", "incremental"}));
    gen->add_option("--window", ga.window, "Incremental window s (default 10 ceil(ln 2^k))");
    gen->add_option("--seed", ga.seed, "RNG seed");
    gen->add_option("--d", ga.d, "Fixed discriminant D (default: method A per candidate)");
    gen->add_option("--l", ga.l, "Number of leading odd primes screened (uniform mode)");
    gen->add_flag("--screen-eps", ga.screen_eps, "Incremental: require (D/n) = -1");
    gen->add_flag("--screen-square", ga.screen_square, "Incremental: reject square n - (D/n)");
    gen->add_option("--transcript", ga.transcript, "Write per-candidate JSON lines to this path");

    CountArgs ca;
    auto* cnt = app.add_subcommand("count", "Exact pseudoprime counts for n < 2^52");
    cnt->add_option("n", ca.n, "Odd integer")->required();
    cnt->add_option("--what", ca.what, "sl | f | l | mr | alpha | alpha-d")
        ->check(CLI::IsMember({"sl", "f", "l", "mr", "alpha", "alpha-d"}));
    cnt->add_option("--d", ca.d, "Discriminant D");

    BoundsArgs ba;
    auto* bnd = app.add_subcommand("bounds", "Error-bound tables and single values");
    auto* tab_opt = bnd->add_option("--table", ba.table, "Table id 1..6")->check(CLI::Range(1, 6));
    auto* single_opt = bnd->add_option("--single", ba.single, "k t")->expected(2);
    tab_opt->excludes(single_opt);
    bnd->add_option("--l", ba.l, "Screen depth l")->check(CLI::Range(1u, 20u));
    bnd->add_option("--c", ba.c, "Window constants for table 6");
    bnd->add_option("--format", ba.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
    bnd->add_option("--out", ba.out, "Output path (default stdout)");

    Qk1Args qa;
    auto* qk1 = app.add_subcommand("qk1", "Exact q_{k,r} by enumeration, per-D JSON");
    qk1->add_option("--k", qa.k, "Bit size 2..16")->check(CLI::Range(2, 16));
    qk1->add_option("--r", qa.r, "Rounds")->check(CLI::PositiveNumber);
    qk1->add_option("--d-bound", qa.d_bound, "Scan nonsquare D = 0,1 mod 4 with |D| <= bound");
    qk1->add_flag("--keep-twins", qa.keep_twins, "Keep twin-prime products in the enumeration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*test) return run_test(ta);
        if (*gen) return run_generate(ga);
        if (*cnt) return run_count(ca);
        if (*bnd) return run_bounds(ba);
        if (*qk1) return run_qk1(qa);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const argument_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const capacity_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
