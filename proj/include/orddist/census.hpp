#pragma once

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "orddist/rational_base.hpp"

namespace orddist {

// What to count over the primes p <= x for a fixed base g.
struct CensusSpec {
    RationalBase g;
    u64 x;
    std::vector<u32> order_moduli;                 // d2 values for ord_p(g) mod d2
    std::vector<std::pair<u32, u32>> prime_conds;  // (a1, d1) conditions on p; (0,1) = all
    u32 t_max = 64;
    u64 segment_size = u64(1) << 22;
    unsigned threads = 0;  // 0 = hardware concurrency

    CensusSpec(RationalBase base, u64 bound) : g(base), x(bound) {}

    void validate() const {
        if (x < 3) throw ArgumentError("census: x must be >= 3");
        if (x >= (u64(1) << 62))
            throw CapacityError(
                "census: x too large for 64-bit sieving (reduce x, or run ranges "
                "separately with smaller --segments and merge checkpoints)");
        if (order_moduli.empty()) throw ArgumentError("census: need at least one order modulus");
        for (u32 d : order_moduli)
            if (d == 0) throw ArgumentError("census: order modulus must be >= 1");
        for (auto [a1, d1] : prime_conds) {
            if (d1 == 0) throw ArgumentError("census: condition modulus must be >= 1");
            if (a1 >= d1) throw ArgumentError("census: condition residue must be < modulus");
        }
        if (t_max == 0) throw ArgumentError("census: t_max must be >= 1");
        if (segment_size < 1024 || segment_size > (u64(1) << 30))
            throw CapacityError("census: segment size out of range");
    }

    // Canonical text form; hashed into checkpoints so that mismatched
    // accumulators refuse to merge.
    std::string canonical() const {
        std::ostringstream os;
        os << "g=" << g.str() << ";x=" << x << ";mod=";
        for (u32 d : order_moduli) os << d << ",";
        os << ";cond=";
        for (auto [a1, d1] : prime_conds) os << a1 << ":" << d1 << ",";
        os << ";tmax=" << t_max;
        return os.str();
    }

    u64 hash() const {  // FNV-1a
        u64 h = 14695981039346656037ull;
        for (char c : canonical()) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        return h;
    }
};

// Joint counters N_g(a1,d1; a2,d2)(x), index counters V_g(a,d;t)(x) with an
// overflow bucket at t > t_max, pi(x), the Legendre-condition counter, and
// the explicit list of skipped primes (nu_p(g) != 0). Mergeable across
// disjoint prime ranges; all counts are exact integers, so merging is
// associative, commutative, and bit-exact regardless of worker count.
class CensusAccumulator {
public:
    CensusAccumulator(const CensusSpec& spec) : spec_(spec) {
        spec_.validate();
        for (auto [a1, d1] : spec_.prime_conds)
            for (u32 d2 : spec_.order_moduli) joint_[key3(a1, d1, d2)] = std::vector<u64>(d2, 0);
        for (u32 d2 : spec_.order_moduli)
            v_counts_[d2] = std::vector<u64>(u64(d2) * (spec_.t_max + 1), 0);
    }

    const CensusSpec& spec() const { return spec_; }
    u64 pi() const { return pi_; }
    u64 legendre_3mod4() const { return legendre_3mod4_; }
    const std::vector<u64>& skipped() const { return skipped_; }
    const std::vector<std::pair<u64, u64>>& ranges() const { return ranges_; }

    u64 joint_count(u32 a1, u32 d1, u32 a2, u32 d2) const {
        auto it = joint_.find(key3(a1, d1, d2));
        if (it == joint_.end()) throw ArgumentError("census: cell not configured");
        return it->second.at(a2);
    }
    // N_g(a2, d2) = N_g(0,1; a2,d2) when the all-primes condition is present.
    u64 count(u32 a2, u32 d2) const { return joint_count(0, 1, a2, d2); }

    u64 v_count(u32 a2, u32 d2, u32 t) const {  // t in [1, t_max]
        auto it = v_counts_.find(d2);
        if (it == v_counts_.end()) throw ArgumentError("census: modulus not configured");
        if (t == 0 || t > spec_.t_max) throw ArgumentError("census: t out of range");
        return it->second.at(u64(a2) * (spec_.t_max + 1) + (t - 1));
    }
    u64 v_overflow(u32 a2, u32 d2) const {
        auto it = v_counts_.find(d2);
        if (it == v_counts_.end()) throw ArgumentError("census: modulus not configured");
        return it->second.at(u64(a2) * (spec_.t_max + 1) + spec_.t_max);
    }

    void add_prime(u64 p, u64 ord, u64 r) {
        ++pi_;
        for (auto& [key, counts] : joint_) {
            const u32 a1 = std::get<0>(key), d1 = std::get<1>(key), d2 = std::get<2>(key);
            if (p % d1 != a1 % d1) continue;
            ++counts[ord % d2];
        }
        for (auto& [d2, vc] : v_counts_) {
            const u64 a2 = ord % d2;
            const u64 slot = (r <= spec_.t_max) ? r - 1 : spec_.t_max;
            ++vc[a2 * (spec_.t_max + 1) + slot];
        }
        if (p % 4 == 3 && r % 2 == 0) ++legendre_3mod4_;  // (g/p) = 1 iff r_p is even
    }

    // Skipped primes still count toward pi(x); they are excluded from every
    // order cell, which is exactly what the partition invariant records.
    void add_skipped(u64 p) {
        ++pi_;
        skipped_.push_back(p);
    }

    void note_range(u64 lo, u64 hi) {
        ranges_.push_back({lo, hi});
        coalesce();
    }

    void merge(const CensusAccumulator& o) {
        if (spec_.canonical() != o.spec_.canonical())
            throw ArgumentError("census merge: spec mismatch");
        for (const auto& [lo, hi] : o.ranges_)
            for (const auto& [mlo, mhi] : ranges_)
                if (lo <= mhi && mlo <= hi) throw ArgumentError("census merge: overlapping ranges");
        pi_ += o.pi_;
        legendre_3mod4_ += o.legendre_3mod4_;
        for (auto& [key, counts] : joint_) {
            const auto& oc = o.joint_.at(key);
            for (size_t i = 0; i < counts.size(); ++i) counts[i] += oc[i];
        }
        for (auto& [d2, vc] : v_counts_) {
            const auto& ov = o.v_counts_.at(d2);
            for (size_t i = 0; i < vc.size(); ++i) vc[i] += ov[i];
        }
        skipped_.insert(skipped_.end(), o.skipped_.begin(), o.skipped_.end());
        std::sort(skipped_.begin(), skipped_.end());
        for (const auto& r : o.ranges_) ranges_.push_back(r);
        coalesce();
    }

    // Exact finite form of the index identity: for each configured d the
    // V-counters plus overflow reproduce every order cell.
    bool v_identity_holds() const {
        for (const auto& [d2, vc] : v_counts_) {
            for (u32 a2 = 0; a2 < d2; ++a2) {
                u64 s = 0;
                for (u32 slot = 0; slot <= spec_.t_max; ++slot)
                    s += vc[u64(a2) * (spec_.t_max + 1) + slot];
                if (has_all_condition() && s != count(a2, d2)) return false;
            }
        }
        return true;
    }

    bool partition_holds() const {
        if (!has_all_condition()) return true;
        for (u32 d2 : spec_.order_moduli) {
            u64 s = 0;
            for (u32 a2 = 0; a2 < d2; ++a2) s += count(a2, d2);
            if (s + skipped_.size() != pi_) return false;
        }
        return true;
    }

    bool has_all_condition() const {
        for (auto [a1, d1] : spec_.prime_conds)
            if (d1 == 1) return true;
        return false;
    }

    bool operator==(const CensusAccumulator& o) const {
        return spec_.canonical() == o.spec_.canonical() && pi_ == o.pi_ &&
               legendre_3mod4_ == o.legendre_3mod4_ && joint_ == o.joint_ &&
               v_counts_ == o.v_counts_ && skipped_ == o.skipped_ && ranges_ == o.ranges_;
    }

    using JointKey = std::tuple<u32, u32, u32>;  // (a1, d1, d2)
    const std::map<JointKey, std::vector<u64>>& joint() const { return joint_; }
    const std::map<u32, std::vector<u64>>& v_counts() const { return v_counts_; }

    // Checkpoint restore hooks; counters must already be configured.
    void restore_pi(u64 v) { pi_ = v; }
    void restore_legendre(u64 v) { legendre_3mod4_ = v; }
    void restore_joint(u32 a1, u32 d1, u32 a2, u32 d2, u64 v) {
        auto it = joint_.find(key3(a1, d1, d2));
        if (it == joint_.end() || a2 >= d2)
            throw CheckpointError("checkpoint: record does not match spec");
        it->second[a2] = v;
    }
    void restore_v(u32 a2, u32 d2, u32 t, u64 v) {
        auto it = v_counts_.find(d2);
        if (it == v_counts_.end() || a2 >= d2 || t == 0 || t > spec_.t_max)
            throw CheckpointError("checkpoint: record does not match spec");
        it->second[u64(a2) * (spec_.t_max + 1) + (t - 1)] = v;
    }
    void restore_v_overflow(u32 a2, u32 d2, u64 v) {
        auto it = v_counts_.find(d2);
        if (it == v_counts_.end() || a2 >= d2)
            throw CheckpointError("checkpoint: record does not match spec");
        it->second[u64(a2) * (spec_.t_max + 1) + spec_.t_max] = v;
    }

private:
    static JointKey key3(u32 a1, u32 d1, u32 d2) { return {a1, d1, d2}; }

    void coalesce() {
        std::sort(ranges_.begin(), ranges_.end());
        std::vector<std::pair<u64, u64>> out;
        for (const auto& r : ranges_) {
            if (!out.empty() && r.first <= out.back().second + 1)
                out.back().second = std::max(out.back().second, r.second);
            else
                out.push_back(r);
        }
        ranges_ = std::move(out);
    }

    CensusSpec spec_;
    u64 pi_ = 0;
    u64 legendre_3mod4_ = 0;
    std::map<JointKey, std::vector<u64>> joint_;
    std::map<u32, std::vector<u64>> v_counts_;  // d2 -> [a2][t-1 | overflow]
    std::vector<u64> skipped_;
    std::vector<std::pair<u64, u64>> ranges_;
};

namespace detail {

// Process primes in [lo, hi]: factor p-1, compute ord and r, accumulate.
inline void census_range(const CensusSpec& spec, const FactorEngine& engine,
                         const std::vector<u32>& base_primes, u64 lo, u64 hi,
                         CensusAccumulator& acc) {
    std::vector<std::uint8_t> comp;
    PrimeFactorization f;
    const u64 gnum_abs = static_cast<u64>(spec.g.num() < 0 ? -spec.g.num() : spec.g.num());
    const u64 gden = static_cast<u64>(spec.g.den());
    for (u64 seg_lo = std::max<u64>(lo, 2); seg_lo <= hi;) {
        u64 seg_hi = seg_lo + spec.segment_size - 1;
        if (seg_hi > hi || seg_hi < seg_lo) seg_hi = hi;
        PrimeRange::sieve_segment(base_primes, seg_lo, seg_hi, comp);
        for (u64 i = 0; i <= seg_hi - seg_lo; ++i) {
            if (comp[i]) continue;
            const u64 p = seg_lo + i;
            if (gnum_abs % p == 0 || gden % p == 0) {
                acc.add_skipped(p);
                continue;
            }
            engine.factorize_into(p - 1, f);
            const u64 ord = multiplicative_order(spec.g, p, &f);
            acc.add_prime(p, ord, (p - 1) / ord);
        }
        if (seg_hi == hi) break;
        seg_lo = seg_hi + 1;
    }
    acc.note_range(lo, hi);
}

}  // namespace detail

// Run the census over [lo, hi] (defaults to [2, x]). Work is split into
// segments handed to a small thread pool; each worker owns a private
// accumulator and the results are merged at the end, so the outcome is
// independent of scheduling.
inline CensusAccumulator run_census_range(const CensusSpec& spec, u64 lo, u64 hi) {
    spec.validate();
    const FactorEngine engine(hi < 3 ? 3 : hi,
                              std::min<u64>(hi + 1, u64(1) << 24));
    const std::vector<u32> base = small_primes(static_cast<u32>(isqrt_u64(hi)));

    unsigned nthreads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
    if (nthreads == 0) nthreads = 1;
    const u64 span = hi >= lo ? hi - lo + 1 : 0;
    if (nthreads > 1 && span / spec.segment_size < 2) nthreads = 1;

    if (nthreads == 1) {
        CensusAccumulator acc(spec);
        detail::census_range(spec, engine, base, lo, hi, acc);
        return acc;
    }

    std::atomic<u64> next_seg{0};
    const u64 nsegs = (span + spec.segment_size - 1) / spec.segment_size;
    std::vector<CensusAccumulator> partials;
    partials.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) partials.emplace_back(spec);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            for (;;) {
                const u64 s = next_seg.fetch_add(1);
                if (s >= nsegs) break;
                const u64 slo = lo + s * spec.segment_size;
                const u64 shi = std::min(hi, slo + spec.segment_size - 1);
                detail::census_range(spec, engine, base, slo, shi, partials[t]);
            }
        });
    }
    for (auto& th : pool) th.join();
    CensusAccumulator acc = std::move(partials[0]);
    for (unsigned t = 1; t < nthreads; ++t)
        if (!partials[t].ranges().empty()) acc.merge(partials[t]);
    return acc;
}

inline CensusAccumulator run_census(const CensusSpec& spec) {
    return run_census_range(spec, 2, spec.x);
}

// ---- checkpoint file format ----------------------------------------------
//
// Line-delimited JSON. First line is a header object
//   {"format_version":"1","g":"num/den","x":"...","spec_hash":"...",
//    "spec":"...","lo":"...","hi":"..."}
// followed by one record per counter
//   {"kind":"...","a1":"..","d1":"..","a2":"..","d2":"..","t":"..","count":".."}
// in canonical sort order. All integers are decimal strings.

namespace detail {

inline nlohmann::json record(const char* kind, u64 a1, u64 d1, u64 a2, u64 d2, u64 t, u64 count) {
    nlohmann::json j;
    j["kind"] = kind;
    j["a1"] = std::to_string(a1);
    j["d1"] = std::to_string(d1);
    j["a2"] = std::to_string(a2);
    j["d2"] = std::to_string(d2);
    j["t"] = std::to_string(t);
    j["count"] = std::to_string(count);
    return j;
}

inline u64 ru64(const nlohmann::json& j, const char* key) {
    const std::string s = j.at(key).get<std::string>();
    size_t pos = 0;
    const u64 v = std::stoull(s, &pos);
    if (pos != s.size()) throw CheckpointError("checkpoint: malformed integer field");
    return v;
}

}  // namespace detail

inline void checkpoint_write(const CensusAccumulator& acc, const std::string& path) {
    if (acc.ranges().size() != 1)
        throw CheckpointError("checkpoint: accumulator does not cover one contiguous range");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw CheckpointError("checkpoint: cannot open for writing: " + path);
    const CensusSpec& spec = acc.spec();
    nlohmann::json hdr;
    hdr["format_version"] = "1";
    hdr["g"] = std::to_string(spec.g.num()) + "/" + std::to_string(spec.g.den());
    hdr["x"] = std::to_string(spec.x);
    std::ostringstream hx;
    hx << std::hex << spec.hash();
    hdr["spec_hash"] = hx.str();
    hdr["spec"] = spec.canonical();
    hdr["lo"] = std::to_string(acc.ranges()[0].first);
    hdr["hi"] = std::to_string(acc.ranges()[0].second);
    out << hdr.dump() << "\n";

    out << detail::record("pi", 0, 0, 0, 0, 0, acc.pi()).dump() << "\n";
    out << detail::record("legendre_3mod4", 0, 0, 0, 0, 0, acc.legendre_3mod4()).dump() << "\n";
    for (const auto& [key, counts] : acc.joint()) {
        const auto [a1, d1, d2] = key;
        for (u32 a2 = 0; a2 < d2; ++a2)
            out << detail::record("N", a1, d1, a2, d2, 0, counts[a2]).dump() << "\n";
    }
    for (const auto& [d2, vc] : acc.v_counts()) {
        for (u32 a2 = 0; a2 < d2; ++a2) {
            for (u32 t = 1; t <= spec.t_max; ++t)
                out << detail::record("V", 0, 1, a2, d2, t,
                                      vc[u64(a2) * (spec.t_max + 1) + (t - 1)])
                           .dump()
                    << "\n";
            out << detail::record("V_overflow", 0, 1, a2, d2, 0,
                                  vc[u64(a2) * (spec.t_max + 1) + spec.t_max])
                       .dump()
                << "\n";
        }
    }
    for (u64 p : acc.skipped())
        out << detail::record("skipped", 0, 0, 0, 0, 0, p).dump() << "\n";
    if (!out) throw CheckpointError("checkpoint: write failed: " + path);
}

// Reads a checkpoint written by checkpoint_write. The caller supplies the
// spec (flags define it); the file's spec hash must match.
inline CensusAccumulator checkpoint_read(const CensusSpec& spec, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("checkpoint: cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw CheckpointError("checkpoint: empty file");
    nlohmann::json hdr;
    try {
        hdr = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
        throw CheckpointError("checkpoint: corrupt header");
    }
    if (!hdr.contains("format_version") || hdr["format_version"].get<std::string>() != "1")
        throw CheckpointError("checkpoint: unsupported format_version");
    std::ostringstream hx;
    hx << std::hex << spec.hash();
    if (hdr.at("spec_hash").get<std::string>() != hx.str())
        throw CheckpointError("checkpoint: spec hash mismatch");

    CensusAccumulator acc(spec);
    u64 pi = 0;
    try {
        const u64 lo = detail::ru64(hdr, "lo"), hi = detail::ru64(hdr, "hi");
        std::map<CensusAccumulator::JointKey, std::vector<u64>> joint;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const nlohmann::json j = nlohmann::json::parse(line);
            const std::string kind = j.at("kind").get<std::string>();
            const u64 count = detail::ru64(j, "count");
            if (kind == "pi") {
                pi = count;
            } else if (kind == "legendre_3mod4") {
                acc.restore_legendre(count);
            } else if (kind == "N") {
                acc.restore_joint(static_cast<u32>(detail::ru64(j, "a1")),
                                  static_cast<u32>(detail::ru64(j, "d1")),
                                  static_cast<u32>(detail::ru64(j, "a2")),
                                  static_cast<u32>(detail::ru64(j, "d2")), count);
            } else if (kind == "V") {
                acc.restore_v(static_cast<u32>(detail::ru64(j, "a2")),
                              static_cast<u32>(detail::ru64(j, "d2")),
                              static_cast<u32>(detail::ru64(j, "t")), count);
            } else if (kind == "V_overflow") {
                acc.restore_v_overflow(static_cast<u32>(detail::ru64(j, "a2")),
                                       static_cast<u32>(detail::ru64(j, "d2")), count);
            } else if (kind == "skipped") {
                acc.add_skipped(count);
            } else {
                throw CheckpointError("checkpoint: unknown record kind: " + kind);
            }
        }
        acc.restore_pi(pi);
        acc.note_range(lo, hi);
    } catch (const nlohmann::json::exception&) {
        throw CheckpointError("checkpoint: corrupt record");
    } catch (const std::logic_error&) {
        throw CheckpointError("checkpoint: corrupt record");
    }
    return acc;
}

}  // namespace orddist
