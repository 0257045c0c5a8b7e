#pragma once

#include <cinttypes>
#include <cstdio>

#include "orddist/census.hpp"
#include "orddist/densities.hpp"

namespace orddist {

// count/denom rounded half-even to 6 decimals, computed in integers so the
// string is exact and platform-independent.
inline std::string freq6(u64 count, u64 denom) {
    if (denom == 0) throw ArgumentError("freq6: zero denominator");
    const u128 scaled = u128(count) * 1000000;
    u64 q = static_cast<u64>(scaled / denom);
    const u64 r = static_cast<u64>(scaled % denom);
    if (2 * u128(r) > denom || (2 * u128(r) == denom && (q & 1))) ++q;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%" PRIu64 ".%06" PRIu64, q / 1000000, q % 1000000);
    return buf;
}

// 6-decimal rendering of a double; glibc converts correctly rounded, so the
// output is deterministic for a given bit pattern.
inline std::string fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline std::string method_name(DensityMethod m) {
    switch (m) {
        case DensityMethod::DegenerateSum: return "sum";
        case DensityMethod::PrimeAverage: return "prime-average";
        case DensityMethod::ClosedFormMod4: return "mod4";
    }
    return "?";
}

// ---- census output --------------------------------------------------------

// Rows are the unconditioned order cells, ordered by (d, a). Frequencies are
// normalized by pi(x) (not pi(x) - #skipped).
inline nlohmann::json census_to_json(const CensusAccumulator& acc) {
    const CensusSpec& spec = acc.spec();
    nlohmann::json j;
    j["g"] = spec.g.str();
    j["x"] = std::to_string(spec.x);
    j["pi"] = std::to_string(acc.pi());
    j["legendre_3mod4"] = std::to_string(acc.legendre_3mod4());
    j["spec"] = spec.canonical();
    nlohmann::json rows = nlohmann::json::array();
    for (u32 d : spec.order_moduli) {
        if (!acc.has_all_condition()) break;
        for (u32 a = 0; a < d; ++a) {
            nlohmann::json row;
            row["g"] = spec.g.str();
            row["a"] = a;
            row["d"] = d;
            row["count"] = std::to_string(acc.count(a, d));
            row["freq"] = freq6(acc.count(a, d), acc.pi());
            rows.push_back(row);
        }
    }
    j["rows"] = rows;
    nlohmann::json joint = nlohmann::json::array();
    for (const auto& [key, counts] : acc.joint()) {
        const auto [a1, d1, d2] = key;
        if (d1 == 1) continue;
        for (u32 a2 = 0; a2 < d2; ++a2) {
            nlohmann::json row;
            row["a1"] = a1;
            row["d1"] = d1;
            row["a2"] = a2;
            row["d2"] = d2;
            row["count"] = std::to_string(counts[a2]);
            joint.push_back(row);
        }
    }
    j["joint"] = joint;
    nlohmann::json skipped = nlohmann::json::array();
    for (u64 p : acc.skipped()) skipped.push_back(std::to_string(p));
    j["skipped"] = skipped;
    return j;
}

inline std::string census_to_tsv(const CensusAccumulator& acc) {
    std::ostringstream os;
    os << "g\ta\td\tcount\tfreq\n";
    const nlohmann::json j = census_to_json(acc);
    for (const auto& row : j["rows"])
        os << row["g"].get<std::string>() << "\t" << row["a"].get<u64>() << "\t"
           << row["d"].get<u64>() << "\t" << row["count"].get<std::string>() << "\t"
           << row["freq"].get<std::string>() << "\n";
    return os.str();
}

// ---- theory output --------------------------------------------------------

inline nlohmann::json theory_to_json(const std::vector<DensityEstimate>& rows,
                                     const std::string& g = "") {
    nlohmann::json j;
    if (!g.empty()) j["g"] = g;
    nlohmann::json arr = nlohmann::json::array();
    for (const DensityEstimate& e : rows) {
        nlohmann::json row;
        row["a"] = e.a;
        row["d"] = e.d;
        row["method"] = method_name(e.method);
        row["center"] = e.center;
        row["radius"] = e.radius;
        row["certified"] = e.certified;
        if (e.trunc_t) row["T"] = e.trunc_t;
        if (e.trunc_n) row["N"] = e.trunc_n;
        if (e.bound_x) row["x"] = e.bound_x;
        arr.push_back(row);
    }
    j["rows"] = arr;
    return j;
}

inline std::string theory_to_tsv(const std::vector<DensityEstimate>& rows) {
    std::ostringstream os;
    os << "a\td\tmethod\tcenter\tradius\tcertified\tparams\n";
    for (const DensityEstimate& e : rows) {
        os << e.a << "\t" << e.d << "\t" << method_name(e.method) << "\t" << fixed6(e.center)
           << "\t";
        char rbuf[32];
        std::snprintf(rbuf, sizeof(rbuf), "%.3e", e.radius);
        os << rbuf << "\t" << (e.certified ? "yes" : "heuristic") << "\t";
        if (e.trunc_t) os << "T=" << e.trunc_t << ",N=" << e.trunc_n;
        if (e.bound_x) os << "x=" << e.bound_x;
        os << "\n";
    }
    return os.str();
}

// ---- comparison -----------------------------------------------------------

// One (g, a, d) cell pairing an empirical frequency with a theoretical
// density. sigma is the binomial heuristic sqrt(center(1-center)/pi); the
// underlying counting model is not binomial, this is a diagnostic scale only.
struct CompareRow {
    std::string g;
    i64 a = 0;
    u64 d = 1;
    double empirical = 0.0;
    double center = 0.0;
    double radius = 0.0;
    double deviation = 0.0;
    double sigma = 0.0;
    double bound = 0.0;  // modulus-d closeness bound for |delta_g - delta|
    bool has_theory = false;
    bool has_bound = false;
    bool within_bound = false;
    bool bound_vacuous = false;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    double max_sigma_deviation = 0.0;
};

inline CompareReport compare_census_theory(const nlohmann::json& census,
                                           const nlohmann::json& theory) {
    CompareReport rep;
    const u64 pi = std::stoull(census.at("pi").get<std::string>());
    const std::string gstr = census.at("g").get<std::string>();

    std::map<std::pair<u64, u64>, nlohmann::json> theory_cells;
    for (const auto& row : theory.at("rows")) {
        const i64 a = row.at("a").get<i64>();
        const u64 d = row.at("d").get<u64>();
        theory_cells[{static_cast<u64>(((a % i64(d)) + i64(d)) % i64(d)), d}] = row;
    }

    for (const auto& row : census.at("rows")) {
        CompareRow c;
        c.g = gstr;
        c.a = row.at("a").get<i64>();
        c.d = row.at("d").get<u64>();
        c.empirical = double(std::stoull(row.at("count").get<std::string>())) / double(pi);
        auto it = theory_cells.find({static_cast<u64>(c.a), c.d});
        if (it != theory_cells.end()) {
            c.has_theory = true;
            c.center = it->second.at("center").get<double>();
            c.radius = it->second.at("radius").get<double>();
            c.deviation = std::abs(c.empirical - c.center);
            if (pi > 0 && c.center > 0 && c.center < 1)
                c.sigma = std::sqrt(c.center * (1.0 - c.center) / double(pi));
            if (it->second.at("method").get<std::string>() == "sum") {
                try {
                    const ClosenessBound b = closeness_bound(RationalBase::parse(gstr), c.d);
                    c.has_bound = true;
                    c.bound = b.value;
                    c.bound_vacuous = b.vacuous;
                    c.within_bound = c.deviation < b.value;
                } catch (const HypothesisError&) {
                } catch (const ArgumentError&) {
                }
            }
            if (c.sigma > 0)
                rep.max_sigma_deviation = std::max(rep.max_sigma_deviation, c.deviation / c.sigma);
        }
        rep.rows.push_back(c);
    }
    return rep;
}

inline std::string compare_to_tsv(const CompareReport& rep) {
    std::ostringstream os;
    os << "g\ta\td\tempirical\ttheory\tradius\tdeviation\tsigma\tflags\n";
    for (const CompareRow& c : rep.rows) {
        os << c.g << "\t" << c.a << "\t" << c.d << "\t" << fixed6(c.empirical) << "\t";
        if (!c.has_theory) {
            os << "-\t-\t-\t-\tno-theory\n";
            continue;
        }
        char rbuf[32], dbuf[32];
        std::snprintf(rbuf, sizeof(rbuf), "%.3e", c.radius);
        std::snprintf(dbuf, sizeof(dbuf), "%.3e", c.deviation);
        os << fixed6(c.center) << "\t" << rbuf << "\t" << dbuf << "\t" << fixed6(c.sigma) << "\t";
        std::string flags;
        if (c.has_bound) {
            flags += c.within_bound ? "within-bound" : "exceeds-bound";
            if (c.bound_vacuous) flags += ";vacuous-bound";
            char bbuf[32];
            std::snprintf(bbuf, sizeof(bbuf), ";bound=%.4f", c.bound);
            flags += bbuf;
        }
        os << (flags.empty() ? "-" : flags) << "\n";
    }
    char sbuf[64];
    std::snprintf(sbuf, sizeof(sbuf), "%.3f", rep.max_sigma_deviation);
    os << "# max |deviation|/sigma = " << sbuf << "\n";
    return os.str();
}

}  // namespace orddist
