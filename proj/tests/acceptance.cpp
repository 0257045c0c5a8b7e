// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <iostream>

#include "orddist/census.hpp"
#include "orddist/constants.hpp"
#include "orddist/densities.hpp"
#include "orddist/prime_average.hpp"

using namespace orddist;

namespace {

int g_failures = 0;

void report(int id, const std::string& what, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

CensusAccumulator run(i64 gnum, u64 x, std::vector<u32> mods,
                      std::vector<std::pair<u32, u32>> conds) {
    CensusSpec spec(RationalBase(gnum), x);
    spec.order_moduli = std::move(mods);
    spec.prime_conds = std::move(conds);
    return run_census(spec);
}

bool exact_identities(const CensusAccumulator& acc) {
    return acc.v_identity_holds() && acc.partition_holds();
}

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    u32 n_used = 0;
    const ErrorInterval A = constant_A(Real("1e-10"), &n_used);
    const double secs = seconds_since(t0);
    const bool contains = A.contains(Real("0.3739558136"));
    const bool radius_ok = A.radius_upper() <= Real("1e-9");
    const bool time_ok = secs < 1.0;
    report(1, "universal constant A (mod 1, n >= 31)", contains && radius_ok && time_ok,
           fmt("center %.13f radius %.2e (<= 1e-9: %s), contains 0.3739558136: %s, %.2fs (< 1s)",
               A.center_double(), double(A.radius_upper()), radius_ok ? "yes" : "NO",
               contains ? "yes" : "NO", secs));
}

void criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    const DirichletCharacter psi = CharacterGroup::psi();
    const ErrorInterval a64 = a_chi(psi, 64);
    const ErrorInterval oracle = naive_a_chi(psi, 1000000);
    const double secs = seconds_since(t0);
    const Real paper("0.643650679662525");
    const bool contains = a64.contains(paper);
    const bool radius_ok = a64.radius_upper() <= Real("1e-12");
    const bool oracle_ok = abs(a64.re - oracle.re) <= Real("1e-5");
    const bool time_ok = secs < 10.0;
    report(2, "A_psi at n = 64 vs 0.643650679662525", contains && radius_ok && oracle_ok && time_ok,
           fmt("center %.15f (|center-ref| = %.1e), radius %.2e (<= 1e-12: %s; the n=64 tail "
               "window alone is ~1.6e-10), contains ref: %s, naive P=1e6 gap %.2e (<= 1e-5: %s), "
               "%.2fs (< 10s)",
               a64.center_double(), double(abs(a64.re - paper)), double(a64.radius_upper()),
               radius_ok ? "yes" : "NO", contains ? "yes" : "NO",
               double(abs(a64.re - oracle.re)), oracle_ok ? "yes" : "NO", secs));
}

void criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    const double table[5] = {5.0 / 24.0, 0.235421, 0.177993, 0.234003, 0.144248};
    bool contain_ok = true, radius_ok = true;
    double worst_gap = 0.0, worst_radius = 0.0;
    for (i64 a = 0; a < 5; ++a) {
        const DensityEstimate e = average_density_sum(a, 5);  // default T = N = 2e5
        const double gap = std::abs(e.center - table[a]);
        contain_ok = contain_ok && gap <= e.radius + 1e-6;
        radius_ok = radius_ok && e.radius <= 5e-4;
        worst_gap = std::max(worst_gap, gap);
        worst_radius = std::max(worst_radius, e.radius);
    }
    const double secs = seconds_since(t0);
    const bool time_ok = secs < 600.0;
    report(3, "degenerate sum for d = 5 at default truncation",
           contain_ok && radius_ok && time_ok,
           fmt("max |center-table| %.2e (within radius+1e-6: %s), max radius %.2e (<= 5e-4: %s), "
               "%.1fs (< 600s)",
               worst_gap, contain_ok ? "yes" : "NO", worst_radius, radius_ok ? "yes" : "NO",
               secs));
}

void criterion4() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    primes_in_range(2, 200).for_each([&](u64 p) {
        for (u64 d = 1; d <= 12; ++d) {
            for (i64 a = 0; a < static_cast<i64>(d); ++a) {
                const u64 am = static_cast<u64>(a);
                u64 cnt = 0;
                for (u64 x = 1; x < p; ++x) {
                    u64 v = x, k = 1;
                    while (v != 1) {
                        v = mulmod(v, x, p);
                        ++k;
                    }
                    if (k % d == am) ++cnt;
                }
                if (local_density(p, a, d) != Rat(i64(cnt), i64(p - 1))) ok = false;
            }
        }
    });
    const double secs = seconds_since(t0);
    report(4, "local density vs brute-force enumeration (p <= 200, d <= 12, exact)",
           ok && secs < 10.0, fmt("rational equality on all cells: %s, %.2fs (< 10s)",
                                  ok ? "yes" : "NO", secs));
}

struct CensusSet {
    std::map<i64, CensusAccumulator> by_g;
    bool identities = true;

    const CensusAccumulator& at(i64 g) const { return by_g.at(g); }
    void add(i64 g, CensusAccumulator acc) {
        identities = identities && exact_identities(acc);
        by_g.emplace(g, std::move(acc));
    }
};

void criterion5(const CensusSet& set, double census_secs_max) {
    const std::map<i64, std::array<double, 5>> table = {
        {2, {0.208333, 0.240673, 0.178706, 0.229270, 0.143017}},
        {-11, {0.208347, 0.235422, 0.178007, 0.233974, 0.144250}},
        {-5, {0.208348, 0.264146, 0.194858, 0.233282, 0.099365}},
        {5, {0.208348, 0.232581, 0.292840, 0.054488, 0.211742}},
    };
    bool ok = true;
    double worst = 0.0;
    for (const auto& [g, row] : table) {
        const CensusAccumulator& acc = set.at(g);
        for (u32 a = 0; a < 5; ++a) {
            const double freq = double(acc.count(a, 5)) / double(acc.pi());
            const double gap = std::abs(freq - row[a]);
            worst = std::max(worst, gap);
            ok = ok && gap <= 0.004;
        }
    }
    const bool time_ok = census_secs_max < 300.0;
    report(5, "census x = 1e7 vs reference empirical table, d = 5, g in {2,-11,-5,5}",
           ok && time_ok,
           fmt("max |freq - table| %.2e (<= 0.004: %s), slowest census %.1fs (< 300s per g)",
               worst, ok ? "yes" : "NO", census_secs_max));
}

void criterion6(const CensusSet& set) {
    bool ok = true;
    std::string detail;
    {
        const CensusAccumulator& acc = set.at(5);
        const double f1 = double(acc.count(1, 4)) / double(acc.pi());
        const double f3 = double(acc.count(3, 4)) / double(acc.pi());
        const double g1 = std::abs(f1 - 1.0 / 6.0), g3 = std::abs(f3 - 1.0 / 6.0);
        ok = ok && g1 <= 0.004 && g3 <= 0.004;
        detail += fmt("g=5: |freq-1/6| = %.2e, %.2e; ", g1, g3);
    }
    {
        const CensusAccumulator& acc = set.at(2);
        const double f1 = double(acc.count(1, 4)) / double(acc.pi());
        const double f3 = double(acc.count(3, 4)) / double(acc.pi());
        const double g1 = std::abs(f1 - 0.065377), g3 = std::abs(f3 - 0.226290);
        ok = ok && g1 <= 0.004 && g3 <= 0.004;
        detail += fmt("g=2: gaps to closed form = %.2e, %.2e", g1, g3);
    }
    report(6, "census vs closed form for d = 4 (g = 5 generic, g = 2 exceptional)", ok,
           detail + " (all <= 0.004)");
}

void criterion7(const CensusSet& set) {
    bool ok = set.identities;
    std::string detail = fmt("V-identity and partition on %zu censuses: %s; ",
                             set.by_g.size(), ok ? "hold exactly" : "VIOLATED");

    // 8-way split vs single run, and 1 vs 2 worker threads, bit-exact
    CensusSpec spec(RationalBase(2), 1000000);
    spec.order_moduli = {4, 5};
    spec.prime_conds = {{0, 1}, {1, 4}, {3, 4}};
    spec.threads = 1;
    const CensusAccumulator single = run_census(spec);
    bool split_ok = true;
    {
        CensusAccumulator merged(spec);
        const u64 step = (spec.x - 2 + 8) / 8;
        bool first = true;
        for (u64 lo = 2; lo <= spec.x; lo += step) {
            CensusAccumulator part =
                run_census_range(spec, lo, std::min(spec.x, lo + step - 1));
            if (first) {
                merged = std::move(part);
                first = false;
            } else {
                merged.merge(part);
            }
        }
        split_ok = merged == single;
    }
    CensusSpec threaded = spec;
    threaded.threads = 2;
    threaded.segment_size = 1 << 16;
    const bool thread_ok = run_census(threaded) == single;
    ok = ok && split_ok && thread_ok;
    report(7, "exact identities and partition determinism", ok,
           detail + fmt("8-way split == single: %s; 2 threads == 1 thread: %s",
                        split_ok ? "yes" : "NO", thread_ok ? "yes" : "NO"));
}

void criterion8(const CensusSet& set) {
    bool ok = true;
    std::string detail;

    // order-pair sum: (N_g(3,4;a,4) + N_{-g}(3,4;a,4)) / pi = 1/4 within 0.005
    double worst_pair = 0.0;
    for (i64 g : {2, 3, 5}) {
        const CensusAccumulator& pos = set.at(g);
        const CensusAccumulator& neg = set.at(-g);
        for (u32 a : {1u, 3u}) {
            const double s = (double(pos.joint_count(3, 4, a, 4)) +
                              double(neg.joint_count(3, 4, a, 4))) /
                             double(pos.pi());
            worst_pair = std::max(worst_pair, std::abs(s - 0.25));
        }
    }
    ok = ok && worst_pair <= 0.005;
    detail += fmt("max |pair-sum - 1/4| = %.2e (<= 0.005); ", worst_pair);

    // 4-sigma equality band for the p = 1 (mod 4) cells, g in {2, 3, 5}
    double worst_band = 0.0;
    for (i64 g : {2, 3, 5}) {
        const CensusAccumulator& acc = set.at(g);
        const double n1 = double(acc.joint_count(1, 4, 1, 4));
        const double n3 = double(acc.joint_count(1, 4, 3, 4));
        const double band = std::abs(n1 - n3) / (4.0 * std::sqrt(n1 + n3));
        worst_band = std::max(worst_band, band);
    }
    ok = ok && worst_band <= 1.0;
    detail += fmt("max |N(1,4;1,4)-N(1,4;3,4)| / 4sqrt(sum) = %.2f (<= 1); ", worst_band);

    // peel-off: delta(a,45) vs delta(a,15)/3 within combined radii
    bool peel_ok = true;
    for (i64 a : {0, 1, 2}) {
        const DensityEstimate big = average_density_sum(a, 45);
        const DensityEstimate red = average_density_sum(a, 15);
        peel_ok = peel_ok &&
                  std::abs(big.center - red.center / 3.0) <= big.radius + red.radius / 3.0;
    }
    ok = ok && peel_ok;
    detail += fmt("peel-off d=45 vs d=15/3: %s; ", peel_ok ? "consistent" : "INCONSISTENT");

    // partition of unity for both theoretical estimators
    double sum_c = 0.0, sum_r = 0.0;
    for (i64 a = 0; a < 5; ++a) {
        const DensityEstimate e = average_density_sum(a, 5);
        sum_c += e.center;
        sum_r += e.radius;
    }
    const bool unity_sum = std::abs(sum_c - 1.0) <= sum_r;
    const PrimeAverageResult pa = prime_average_local_density(5, 10000000);
    double pa_sum = 0.0;
    for (double c : pa.centers) pa_sum += c;
    const bool unity_avg = pa.unity_exact && std::abs(pa_sum - 1.0) <= 1e-12;
    ok = ok && unity_sum && unity_avg;
    detail += fmt("partition of unity: sum |%.1e| <= %.1e, prime-average exact: %s",
                  std::abs(sum_c - 1.0), sum_r, unity_avg ? "yes" : "NO");

    report(8, "property suite (order pairs, 4-sigma bands, peel-off, unity)", ok, detail);
}

void criterion9() {
    const PrimeAverageResult pa = prime_average_local_density(5, 10000000);
    bool ok = true;
    double worst = 0.0;
    for (i64 a = 0; a < 5; ++a) {
        const DensityEstimate s = average_density_sum(a, 5);
        const double gap = std::abs(s.center - pa.centers[a]);
        worst = std::max(worst, gap);
        ok = ok && gap <= s.radius + 5e-3;
    }
    report(9, "cross-estimator agreement at x = 1e7, all a mod 5", ok,
           fmt("max |sum - prime-average| = %.2e (<= radius + 5e-3)", worst));
}

}  // namespace

int main() {
    std::printf("orddist acceptance suite\n");
    criterion1();
    criterion2();
    criterion3();
    criterion4();

    // shared censuses at x = 1e7 for criteria 5-8
    const u64 x = 10000000;
    CensusSet set;
    double census_secs_max = 0.0;
    struct RunSpec {
        i64 g;
        std::vector<u32> mods;
    };
    const std::vector<RunSpec> runs = {
        {2, {4, 5}}, {-2, {4}}, {3, {4}}, {-3, {4}}, {5, {4, 5}}, {-5, {4, 5}}, {-11, {5}},
    };
    for (const RunSpec& r : runs) {
        const auto t0 = std::chrono::steady_clock::now();
        set.add(r.g, run(r.g, x, r.mods, {{0, 1}, {1, 4}, {3, 4}}));
        census_secs_max = std::max(census_secs_max, seconds_since(t0));
    }

    criterion5(set, census_secs_max);
    criterion6(set);
    criterion7(set);
    criterion8(set);
    criterion9();

    std::printf("%d of 9 criteria passed\n", 9 - g_failures);
    return g_failures;
}
