#pragma once

/** @file tables.hpp
 *  Regenerates the six numeric reports (prime counts, three uniform-generator
 *  bound tables, the exact-size bound table, incremental-search exponents)
 *  and writes them as TSV or JSON.
 */

#include "bounds.hpp"

#include "json.hpp"

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace slucas {

struct Table {
    int id = 0;
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_tsv() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "\t" : "") << columns[i];
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "\t" : "") << row[i];
            os << '\n';
        }
        return os.str();
    }

    std::string to_json() const {
        nlohmann::json j;
        j["table"] = id;
        j["title"] = title;
        j["columns"] = columns;
        j["rows"] = nlohmann::json::array();
        for (const auto& row : rows) {
            nlohmann::json r = nlohmann::json::object();
            for (std::size_t i = 0; i < row.size() && i < columns.size(); ++i) r[columns[i]] = row[i];
            j["rows"].push_back(r);
        }
        return j.dump(2) + "\n";
    }
};

struct TableOptions {
    unsigned l = 8;
    SimpleBoundForm simple_form = SimpleBoundForm::tabulated;
    ProductSpan span = ProductSpan::j_primes;
    SizeMode exact_size_mode = SizeMode::exact_m_tilde;   ///< sizing of the exact-size table
    std::vector<double> c_values{1, 5, 10};
    std::vector<int> t6_ks{100, 200, 400, 512, 1024, 2048, 4096};
};

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

/// One optimized row of a uniform-generator bound table.
struct BoundRow {
    int k;
    int m_opt;
    double q;
};

inline BoundRow simple_row(int k, const TableOptions& opt = {}) {
    auto best = optimize_m<double>(k, prime_lower_bound<double>(k),
                                   [&](int m) { return sum_bound_simple<double>(k, opt.l, m, opt.simple_form); });
    return {k, best.n.m, best.q};
}

inline BoundRow refined_row(int k, const TableOptions& opt = {}) {
    double size = set_size<double>(k, opt.l, SizeMode::analytic);
    auto best = optimize_m<double>(k, prime_lower_bound<double>(k),
                                   [&](int m) { return sum_bound_refined<double>(k, opt.l, m, size); });
    return {k, best.n.m, best.q};
}

/// Split bound with analytic sizing and the prime lower bound.
inline BoundRow split_row_analytic(int k, int r, const TableOptions& opt = {}) {
    double size = set_size<double>(k, opt.l, SizeMode::analytic);
    auto best = optimize_m<double>(k, prime_lower_bound<double>(k),
                                   [&](int m) { return sum_bound_split<double>(k, opt.l, m, r, size, opt.span); });
    return {k, best.n.m, best.q};
}

/// Split bound with exact set sizes and the exact prime count.
inline BoundRow split_row_exact(int k, int r, const TableOptions& opt = {}) {
    double size = set_size<double>(k, opt.l, opt.exact_size_mode);
    double primes = static_cast<double>(prime_count_exact(k));
    auto best = optimize_m<double>(
        k, primes, [&](int m) { return sum_bound_split<double>(k, opt.l, m, r, size, opt.span); });
    return {k, best.n.m, best.q};
}

/// floor(-log2 y) at the optimal M for window s = c ln(2^k).
inline int incremental_cell(int k, int t, double c) {
    return neg_log2_floor(ykts_optimized<double>(k, t, c).value);
}

inline Table emit_table(int which, const TableOptions& opt = {}) {
    Table tb;
    tb.id = which;
    switch (which) {
        case 1: {
            tb.title = "k-bit prime counts and the lower bound 0.71867*2^k/k";
            tb.columns = {"k", "pi(2^k)-pi(2^(k-1))", "floor(0.71867*2^k/k)"};
            for (int k = 8; k <= 20; ++k)
                tb.rows.push_back({std::to_string(k), std::to_string(prime_count_exact(k)),
                                   std::to_string(static_cast<long long>(std::floor(prime_lower_bound<double>(k))))});
            break;
        }
        case 2: {
            tb.title = "q_{k,1} bound from the simple sum bound, 60 <= k <= 100";
            tb.columns = {"k", "M_opt", "u_k"};
            for (int k = 60; k <= 100; ++k) {
                auto r = simple_row(k, opt);
                tb.rows.push_back({std::to_string(k), std::to_string(r.m_opt), fixed6(r.q)});
            }
            break;
        }
        case 3: {
            tb.title = "q_{k,1} bound from the refined sum bound, 42 <= k <= 59";
            tb.columns = {"k", "M_opt", "u_k"};
            for (int k = 42; k <= 59; ++k) {
                auto r = refined_row(k, opt);
                tb.rows.push_back({std::to_string(k), std::to_string(r.m_opt), fixed6(r.q)});
            }
            break;
        }
        case 4:
        case 5: {
            bool exact = which == 5;
            tb.title = exact ? "q_{k,1}, q_{k,2} bounds from the split sum bound with exact sizes, 17 <= k <= 29"
                             : "q_{k,1}, q_{k,2} bounds from the split sum bound with analytic sizes, 30 <= k <= 41";
            tb.columns = {"k", "M_opt_1", "v_k1", "M_opt_2", "v_k2"};
            int lo = exact ? 17 : 30, hi = exact ? 29 : 41, r2_hi = exact ? 26 : 33;
            for (int k = lo; k <= hi; ++k) {
                auto r1 = exact ? split_row_exact(k, 1, opt) : split_row_analytic(k, 1, opt);
                std::vector<std::string> row{std::to_string(k), std::to_string(r1.m_opt), fixed6(r1.q), "", ""};
                if (k <= r2_hi) {
                    auto r2 = exact ? split_row_exact(k, 2, opt) : split_row_analytic(k, 2, opt);
                    row[3] = std::to_string(r2.m_opt);
                    row[4] = fixed6(r2.q);
                }
                tb.rows.push_back(row);
            }
            break;
        }
        case 6: {
            tb.title = "floor(-log2 y_{k,t,s}) with s = c ln(2^k)";
            tb.columns = {"c", "k"};
            for (int t = 1; t <= 10; ++t) tb.columns.push_back("t=" + std::to_string(t));
            for (double c : opt.c_values)
                for (int k : opt.t6_ks) {
                    std::ostringstream cs;
                    cs << c;
                    std::vector<std::string> row{cs.str(), std::to_string(k)};
                    for (int t = 1; t <= 10; ++t) row.push_back(std::to_string(incremental_cell(k, t, c)));
                    tb.rows.push_back(row);
                }
            break;
        }
        default: throw argument_error("emit_table: table id must be 1..6");
    }
    return tb;
}

} // namespace slucas
