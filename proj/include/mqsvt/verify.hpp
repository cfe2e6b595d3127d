#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "mqsvt/benchmarks.hpp"
#include "mqsvt/moments.hpp"
#include "mqsvt/paulipath.hpp"
#include "mqsvt/rational.hpp"

namespace mqsvt {

struct MomentCaseResult {
    std::string block;
    std::string selector;
    std::string value_class;   // representative tuple of the class
    int tuple_count = 0;
    Rational exact;            // Weingarten-sum value (authoritative)
    Rational table;            // frozen hard-coded table value
    std::int64_t printed_num;  // numerator over 2^8*Delta as printed
    bool table_matches_exact = false;
    bool matches_printed = false;
    double mc_estimate = 0;
    double mc_stderr = 0;
    bool mc_pass = false;      // |mc - exact| <= 3 stderr (skipped => true)
};

struct MomentsVerifyResult {
    std::vector<MomentCaseResult> t2_rows;
    std::vector<MomentCaseResult> t4_rows;
    bool engine_consistent = true;   // frozen table == Weingarten sum everywhere
    bool mc_consistent = true;       // every MC within 3 sigma of exact
    bool printed_consistent = true;  // published constants reproduced
};

namespace detail {
inline std::string tuple_str(const std::array<int, 4>& ins, const std::array<int, 4>& outs) {
    auto nm = [](int c) { return pauli2(c).str(); };
    return nm(ins[0]) + "," + nm(ins[1]) + "," + nm(ins[2]) + "," + nm(ins[3]) + ";" + nm(outs[0]) +
           "," + nm(outs[1]) + "," + nm(outs[2]) + "," + nm(outs[3]);
}
}  // namespace detail

/// Exhaustive table-vs-Weingarten equality over every tuple of every
/// published case, Monte-Carlo cross-check per value class, and a
/// comparison against the published constants.
inline MomentsVerifyResult moments_verify(std::int64_t mc_samples, std::uint64_t seed, bool exact_only,
                                          int workers = 1) {
    MomentsVerifyResult res;

    // order-2 cases (these match the published values)
    struct T2Row {
        const char* name;
        std::array<int, 2> ins, outs;
        Rational expect;
    };
    const int ii = 0, zi = pauli2_code("ZI"), zz = pauli2_code("ZZ"), xy = pauli2_code("XY");
    const std::vector<T2Row> t2rows = {
        {"s=st=s'=st'=II -> 1", {ii, ii}, {ii, ii}, Rational(1)},
        {"s=st=ZZ, s'=st'=XY -> 1/15", {zz, zz}, {xy, xy}, rational(1, 15)},
        {"s != st -> 0", {zz, zi}, {zi, zi}, Rational(0)},
        {"exactly one of s,s' is II -> 0", {ii, ii}, {zz, zz}, Rational(0)},
        {"exactly one of st,st' is II -> 0", {zz, zz}, {ii, ii}, Rational(0)},
    };
    std::uint64_t case_id = 0;
    for (const auto& row : t2rows) {
        MomentCaseResult r;
        r.block = "t2";
        r.selector = row.name;
        r.value_class = "-";
        r.tuple_count = 1;
        r.exact = moment_t2(row.ins[0], row.ins[1], row.outs[0], row.outs[1]);
        r.table = row.expect;
        r.printed_num = 0;
        r.table_matches_exact = (r.exact == r.table);
        r.matches_printed = true;  // the order-2 table is reproduced as published
        if (!exact_only) {
            const std::array<int, 2> i2 = row.ins, o2 = row.outs;
            const auto mc = moment_mc(std::span<const int>(i2.data(), 2), std::span<const int>(o2.data(), 2), 2,
                                      mc_samples, derive_seed(seed, {0xE0u, case_id}), workers);
            r.mc_estimate = mc.estimate;
            r.mc_stderr = mc.stderr_;
            r.mc_pass = std::abs(mc.estimate - to_double(r.exact)) <= 3 * mc.stderr_ + 1e-12;
        } else {
            r.mc_pass = true;
        }
        res.engine_consistent = res.engine_consistent && r.table_matches_exact;
        res.mc_consistent = res.mc_consistent && r.mc_pass;
        res.t2_rows.push_back(r);
        ++case_id;
    }

    // order-4 cases: exhaustive equality per tuple, MC per value class
    for (const auto& c : t4_cases()) {
        std::map<std::int64_t, std::pair<int, std::pair<std::array<int, 4>, std::array<int, 4>>>> classes;
        bool engine_ok = true;
        for (const auto& [ins, outs] : c.tuples) {
            const Rational w = moment_t4_weingarten(ins, outs);
            const std::int64_t frozen = c.frozen_num(ins, outs);
            if (w != Rational(BigInt(frozen), BigInt(kT4Denominator))) engine_ok = false;
            auto it = classes.find(frozen);
            if (it == classes.end()) {
                classes[frozen] = {1, {ins, outs}};
            } else {
                it->second.first += 1;
            }
        }
        for (const auto& [num, info] : classes) {
            MomentCaseResult r;
            r.block = c.block;
            r.selector = c.selector;
            r.value_class = detail::tuple_str(info.second.first, info.second.second);
            r.tuple_count = info.first;
            r.exact = moment_t4_weingarten(info.second.first, info.second.second);
            r.table = Rational(BigInt(num), BigInt(kT4Denominator));
            r.printed_num = c.printed_num;
            r.table_matches_exact = engine_ok && (r.exact == r.table);
            r.matches_printed = (classes.size() == 1) && (num == c.printed_num);
            if (!exact_only) {
                const auto& [ins, outs] = info.second;
                const auto mc = moment_mc(std::span<const int>(ins.data(), 4), std::span<const int>(outs.data(), 4),
                                          4, mc_samples, derive_seed(seed, {0xE0u, case_id}), workers);
                r.mc_estimate = mc.estimate;
                r.mc_stderr = mc.stderr_;
                r.mc_pass = std::abs(mc.estimate - to_double(r.exact)) <= 3 * mc.stderr_ + 1e-12;
            } else {
                r.mc_pass = true;
            }
            res.engine_consistent = res.engine_consistent && r.table_matches_exact;
            res.mc_consistent = res.mc_consistent && r.mc_pass;
            res.printed_consistent = res.printed_consistent && r.matches_printed;
            res.t4_rows.push_back(r);
            ++case_id;
        }
    }
    return res;
}

inline nlohmann::ordered_json to_json(const MomentsVerifyResult& res) {
    nlohmann::ordered_json j;
    j["quantity"] = "moments_verify";
    j["code_version"] = kCodeVersion;
    auto rows = nlohmann::ordered_json::array();
    auto emit = [&](const MomentCaseResult& r) {
        rows.push_back({{"block", r.block},
                        {"case", r.selector},
                        {"value_class", r.value_class},
                        {"tuples", r.tuple_count},
                        {"exact", to_string(r.exact)},
                        {"exact_float", to_double(r.exact)},
                        {"table", to_string(r.table)},
                        {"printed_numerator_over_2^8Delta", r.printed_num},
                        {"table_matches_exact", r.table_matches_exact},
                        {"matches_printed", r.matches_printed},
                        {"mc_estimate", r.mc_estimate},
                        {"stderr", r.mc_stderr},
                        {"pass", r.table_matches_exact && r.mc_pass}});
    };
    for (const auto& r : res.t2_rows) emit(r);
    for (const auto& r : res.t4_rows) emit(r);
    j["cases"] = std::move(rows);
    j["engine_consistent"] = res.engine_consistent;
    j["mc_consistent"] = res.mc_consistent;
    j["printed_constants_reproduced"] = res.printed_consistent;
    return j;
}

struct PathSumCheckResult {
    int n_plus_1 = 0, d_u = 0, circuits = 0;
    double max_error = 0;
    double tolerance = 1e-9;
    bool pass = false;
    std::vector<double> errors;
};

/// Tiny-instance completeness: enumerated sum of F over all paths vs
/// the exact simulator probability, per circuit and output.
inline PathSumCheckResult path_sum_check(int n_plus_1, int d_u, int circuits, double tol,
                                         std::uint64_t seed) {
    PathSumCheckResult res;
    res.n_plus_1 = n_plus_1;
    res.d_u = d_u;
    res.circuits = circuits;
    res.tolerance = tol;
    for (int c = 0; c < circuits; ++c) {
        const MqsvtCircuit circ = sample_circuit(n_plus_1, d_u, 1, seed, static_cast<std::uint64_t>(c));
        const StateVector s = evolve(circ);
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << (n_plus_1 - 1)); ++x) {
            const double p = std::norm(s.amp[x]);
            const double sum = enumerate_path_sum(circ, x);
            res.errors.push_back(std::abs(p - sum));
            res.max_error = std::max(res.max_error, std::abs(p - sum));
        }
    }
    res.pass = res.max_error < tol;
    return res;
}

inline nlohmann::ordered_json to_json(const PathSumCheckResult& r) {
    nlohmann::ordered_json j;
    j["quantity"] = "path_sum_check";
    j["code_version"] = kCodeVersion;
    j["n_plus_1"] = r.n_plus_1;
    j["d_U"] = r.d_u;
    j["circuits"] = r.circuits;
    j["max_error"] = r.max_error;
    j["tolerance"] = r.tolerance;
    j["verdict"] = r.pass ? "pass" : "fail";
    return j;
}

}  // namespace mqsvt
