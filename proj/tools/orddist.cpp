// Command-line front end: run order censuses, evaluate theoretical
// densities and constants, and compare the two side by side.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "orddist/census.hpp"
#include "orddist/constants.hpp"
#include "orddist/prime_average.hpp"
#include "orddist/report.hpp"

using namespace orddist;

namespace {

// Accepts "2038074743", "1e7", "2.5e9"; the value must be an exact integer.
u64 parse_scientific_u64(const std::string& s) {
    std::string mant = s;
    i64 exp10 = 0;
    const auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        mant = s.substr(0, epos);
        const std::string es = s.substr(epos + 1);
        size_t pos = 0;
        exp10 = std::stoll(es, &pos);
        if (pos != es.size() || es.empty()) throw ArgumentError("bad exponent in '" + s + "'");
    }
    const auto dot = mant.find('.');
    if (dot != std::string::npos) {
        exp10 -= static_cast<i64>(mant.size() - dot - 1);
        mant.erase(dot, 1);
    }
    if (mant.empty() || mant.find_first_not_of("0123456789") != std::string::npos)
        throw ArgumentError("cannot parse integer '" + s + "'");
    if (exp10 < 0) throw ArgumentError("'" + s + "' is not an integer");
    u128 v = 0;
    for (char c : mant) {
        v = v * 10 + (c - '0');
        if (v > UINT64_MAX) throw ArgumentError("'" + s + "' out of range");
    }
    for (i64 i = 0; i < exp10; ++i) {
        v *= 10;
        if (v > UINT64_MAX) throw ArgumentError("'" + s + "' out of range");
    }
    return static_cast<u64>(v);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw ArgumentError("cannot open output path: " + path);
    f << content;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError("cannot parse " + path + ": " + e.what());
    }
}

struct CensusArgs {
    std::string g, x, checkpoint, out, format = "tsv";
    std::vector<std::string> mods, conds;
    u32 tmax = 64;
    u64 segment = u64(1) << 22;
    unsigned threads = 0;
};

int run_census_cmd(const CensusArgs& args) {
    CensusSpec spec(RationalBase::parse(args.g), parse_scientific_u64(args.x));
    for (const std::string& m : args.mods)
        spec.order_moduli.push_back(static_cast<u32>(parse_scientific_u64(m)));
    spec.prime_conds = {{0, 1}};
    for (const std::string& c : args.conds) {
        const auto colon = c.find(':');
        if (colon == std::string::npos) throw ArgumentError("--cond expects a:d, got '" + c + "'");
        spec.prime_conds.push_back(
            {static_cast<u32>(parse_scientific_u64(c.substr(0, colon))),
             static_cast<u32>(parse_scientific_u64(c.substr(colon + 1)))});
    }
    spec.t_max = args.tmax;
    spec.segment_size = args.segment;
    spec.threads = args.threads;
    spec.validate();

    CensusAccumulator acc(spec);
    if (!args.checkpoint.empty() && std::filesystem::exists(args.checkpoint)) {
        acc = checkpoint_read(spec, args.checkpoint);
        const auto [lo, hi] = acc.ranges().at(0);
        if (lo != 2) throw CheckpointError("checkpoint does not start at 2");
        if (hi < spec.x) acc.merge(run_census_range(spec, hi + 1, spec.x));
    } else {
        acc = run_census(spec);
    }
    if (!args.checkpoint.empty()) checkpoint_write(acc, args.checkpoint);

    if (args.format == "tsv")
        write_output(args.out, census_to_tsv(acc));
    else if (args.format == "json")
        write_output(args.out, census_to_json(acc).dump(2) + "\n");
    else
        throw ArgumentError("--format must be tsv or json");
    return 0;
}

struct TheoryArgs {
    std::string method = "sum", a = "all", g, out, format = "tsv";
    u64 mod = 0;
    u32 T = kDefaultDensityTruncation, N = kDefaultDensityTruncation;
    std::string x;
};

int run_theory_cmd(const TheoryArgs& args) {
    std::vector<i64> as;
    u64 d = args.mod;
    if (args.method == "mod4") {
        if (d == 0) d = 4;
        if (d != 4) throw ArgumentError("--method mod4 requires --mod 4");
    }
    if (d == 0) throw ArgumentError("--mod is required");
    if (args.a == "all") {
        for (i64 a = 0; a < static_cast<i64>(d); ++a) as.push_back(a);
    } else {
        std::stringstream ss(args.a);
        std::string tok;
        while (std::getline(ss, tok, ',')) as.push_back(std::stoll(tok));
    }

    std::vector<DensityEstimate> rows;
    if (args.method == "sum") {
        for (i64 a : as) rows.push_back(average_density_sum(a, d, args.T, args.N));
    } else if (args.method == "prime-average") {
        if (args.x.empty()) throw ArgumentError("--method prime-average requires --x");
        const u64 x = parse_scientific_u64(args.x);
        const PrimeAverageResult r = prime_average_local_density(d, x);
        for (i64 a : as) {
            DensityEstimate e;
            e.a = a;
            e.d = d;
            e.method = DensityMethod::PrimeAverage;
            e.center = r.centers[static_cast<u64>(((a % i64(d)) + i64(d)) % i64(d))];
            e.certified = false;
            e.bound_x = x;
            rows.push_back(e);
        }
    } else if (args.method == "mod4") {
        if (args.g.empty()) throw ArgumentError("--method mod4 requires --g");
        const RationalBase g = RationalBase::parse(args.g);
        if (args.a == "all") as = {1, 3};
        for (i64 a : as) rows.push_back(delta_g_mod4(g, a));
    } else {
        throw ArgumentError("--method must be sum, prime-average, or mod4");
    }

    if (args.format == "tsv")
        write_output(args.out, theory_to_tsv(rows));
    else if (args.format == "json")
        write_output(args.out, theory_to_json(rows, args.g).dump(2) + "\n");
    else
        throw ArgumentError("--format must be tsv or json");
    return 0;
}

struct ConstantsArgs {
    u64 mod = 1;
    u32 n = 64;
    u32 oracle_cutoff = 100000;
    std::string out, format = "tsv";
};

int run_constants_cmd(const ConstantsArgs& args) {
    if (args.n < 31) throw ArgumentError("--n must be at least 31 (so that p_n >= 127)");
    u32 n_used = 0;
    const ErrorInterval A = constant_A(Real("1e-10"), &n_used);
    nlohmann::json rows = nlohmann::json::array();
    {
        nlohmann::json r;
        r["kind"] = "A";
        r["center"] = A.re.str(17);
        r["radius"] = A.radius_upper().str(3);
        r["n"] = n_used;
        rows.push_back(r);
    }
    CharacterGroup G(args.mod);
    for (const auto& chi : G.characters()) {
        const ErrorInterval a = a_chi(chi, args.n);
        const ErrorInterval nv = naive_a_chi(chi, args.oracle_cutoff);
        const bool agree =
            abs(a.re - nv.re) <= a.rre + nv.rre && abs(a.im - nv.im) <= a.rim + nv.rim;
        nlohmann::json r;
        r["kind"] = "A_chi";
        r["modulus"] = args.mod;
        r["index"] = chi.index();
        r["order"] = chi.order();
        r["center_re"] = a.re.str(17);
        r["center_im"] = a.im.str(17);
        r["radius"] = a.radius_upper().str(3);
        r["naive_re"] = nv.re.str(17);
        r["naive_im"] = nv.im.str(17);
        r["naive_radius"] = nv.radius_upper().str(3);
        r["agree"] = agree;
        r["n"] = args.n;
        rows.push_back(r);
    }

    if (args.format == "json") {
        nlohmann::json j;
        j["rows"] = rows;
        write_output(args.out, j.dump(2) + "\n");
        return 0;
    }
    if (args.format != "tsv") throw ArgumentError("--format must be tsv or json");
    std::ostringstream os;
    os << "kind\tmodulus\tindex\torder\tcenter_re\tcenter_im\tradius\tnaive_re\tnaive_im\t"
          "naive_radius\tagree\tn\n";
    for (const auto& r : rows) {
        if (r["kind"] == "A") {
            os << "A\t-\t-\t-\t" << r["center"].get<std::string>() << "\t0\t"
               << r["radius"].get<std::string>() << "\t-\t-\t-\t-\t" << r["n"].get<u32>() << "\n";
        } else {
            os << "A_chi\t" << r["modulus"].get<u64>() << "\t" << r["index"].get<u64>() << "\t"
               << r["order"].get<u64>() << "\t" << r["center_re"].get<std::string>() << "\t"
               << r["center_im"].get<std::string>() << "\t" << r["radius"].get<std::string>()
               << "\t" << r["naive_re"].get<std::string>() << "\t"
               << r["naive_im"].get<std::string>() << "\t"
               << r["naive_radius"].get<std::string>() << "\t"
               << (r["agree"].get<bool>() ? "yes" : "NO") << "\t" << r["n"].get<u32>() << "\n";
        }
    }
    write_output(args.out, os.str());
    return 0;
}

int run_compare_cmd(const std::string& census_path, const std::string& theory_path,
                    const std::string& out) {
    const nlohmann::json census = load_json(census_path);
    const nlohmann::json theory = load_json(theory_path);
    if (!census.contains("rows") || !census.contains("pi"))
        throw ArgumentError(census_path + " is not a census JSON file");
    if (!theory.contains("rows")) throw ArgumentError(theory_path + " is not a theory JSON file");
    const CompareReport rep = compare_census_theory(census, theory);
    bool any = false;
    for (const CompareRow& r : rep.rows) any = any || r.has_theory;
    if (!any) throw ArgumentError("no matching (a, d) cells between census and theory");
    write_output(out, compare_to_tsv(rep));
    return 0;
}

// Brute-force oracle sweep over p <= 200; exit code 4 on any mismatch.
int run_selftest() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    {
        bool ok = true;
        const std::vector<RationalBase> gs{RationalBase(2), RationalBase(3), RationalBase(5),
                                           RationalBase(-2), RationalBase(-5), RationalBase(1, 2),
                                           RationalBase(3, 2)};
        primes_in_range(2, 200).for_each([&](u64 p) {
            for (const auto& g : gs) {
                if (g.divides_num_or_den(p)) continue;
                const u64 gb = g.mod_p(p);
                u64 v = gb, k = 1;
                while (v != 1) {
                    v = mulmod(v, gb, p);
                    ++k;
                }
                if (multiplicative_order(g, p) != k) ok = false;
                if (residual_index(g, p) * k != p - 1) ok = false;
            }
        });
        check("multiplicative order vs naive powering, p <= 200", ok);
    }
    {
        bool ok = true;
        primes_in_range(2, 200).for_each([&](u64 p) {
            for (u64 d = 1; d <= 12; ++d) {
                Rat sum(0);
                for (i64 a = 0; a < static_cast<i64>(d); ++a) {
                    const Rat ld = local_density(p, a, d);
                    sum += ld;
                    // brute enumeration of element orders
                    u64 cnt = 0;
                    for (u64 x = 1; x < p; ++x) {
                        u64 v = x, k = 1;
                        while (v != 1) {
                            v = mulmod(v, x, p);
                            ++k;
                        }
                        if (k % d == static_cast<u64>(a)) ++cnt;
                    }
                    if (ld != Rat(static_cast<i64>(cnt), static_cast<i64>(p - 1))) ok = false;
                }
                if (sum != Rat(1)) ok = false;
            }
        });
        check("local density vs element enumeration, p <= 200, d <= 12", ok);
    }
    {
        bool ok = true;
        primes_in_range(3, 200).for_each([&](u64 p) {
            for (i64 g : {2, 3, 5, -5, 7}) {
                const RationalBase rb(g);
                if (rb.divides_num_or_den(p)) continue;
                const int euler = powmod(rb.mod_p(p), (p - 1) / 2, p) == 1 ? 1 : -1;
                if (kronecker_symbol(rb, p) != euler) ok = false;
            }
        });
        check("kronecker symbol vs Euler criterion, p <= 200", ok);
    }
    {
        bool ok = kernels(45).k2 == 15 && kernels(12).k2 == 12 && kernels(16).k2 == 8;
        for (u64 d = 1; d <= 1000; ++d) {
            const Kernels ks = kernels(d);
            if (ks.k2 % ks.k != 0 || ks.k1 % ks.k2 != 0) ok = false;
        }
        check("modulus kernels", ok);
    }
    {
        bool ok = true;
        for (u64 d = 1; d <= 20; ++d) {
            const CharacterGroup G(d);
            for (const auto& chi : G.characters()) {
                if (chi.is_trivial()) continue;
                const u32 o = static_cast<u32>(chi.order());
                CyclotomicInt sum(o);
                for (i64 m = 1; m <= static_cast<i64>(d); ++m)
                    sum = sum + CyclotomicInt::from_rot(o, chi.eval(m));
                if (sum != CyclotomicInt(o, 0)) ok = false;
            }
        }
        check("character orthogonality, d <= 20", ok);
    }
    return failures ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distribution of multiplicative orders: census, theory, constants"};
    app.require_subcommand(1);

    CensusArgs census;
    CLI::App* c = app.add_subcommand("census", "count order residues over primes p <= x");
    c->add_option("--g", census.g, "base g as integer or fraction, e.g. 2 or -3/7")->required();
    c->add_option("--x", census.x, "upper bound (scientific notation ok, e.g. 1e7)")->required();
    c->add_option("--mod", census.mods, "order moduli d2")->required()->delimiter(',');
    c->add_option("--cond", census.conds, "prime conditions a1:d1")->delimiter(',');
    c->add_option("--tmax", census.tmax, "index counter cutoff (default 64)");
    c->add_option("--segments", census.segment, "segment size in numbers (default 2^22)");
    c->add_option("--threads", census.threads, "worker threads (default: hardware)");
    c->add_option("--checkpoint", census.checkpoint, "checkpoint file (resumed if present)");
    c->add_option("--out", census.out, "output path (default stdout)");
    c->add_option("--format", census.format, "tsv or json");

    TheoryArgs theory;
    CLI::App* t = app.add_subcommand("theory", "theoretical density estimates");
    t->add_option("--method", theory.method, "sum | prime-average | mod4");
    t->add_option("--mod", theory.mod, "modulus d");
    t->add_option("--a", theory.a, "residues: comma list or 'all'");
    t->add_option("--T", theory.T, "t-truncation for --method sum");
    t->add_option("--N", theory.N, "n-truncation for --method sum");
    t->add_option("--x", theory.x, "prime bound for --method prime-average");
    t->add_option("--g", theory.g, "base for --method mod4");
    t->add_option("--out", theory.out, "output path");
    t->add_option("--format", theory.format, "tsv or json");

    ConstantsArgs constants;
    CLI::App* k = app.add_subcommand("constants", "Euler-product constants with error bounds");
    k->add_option("--mod", constants.mod, "character modulus (default 1)");
    k->add_option("--n", constants.n, "prime count in the finite product (>= 31)");
    k->add_option("--oracle-cutoff", constants.oracle_cutoff, "naive product cutoff P");
    k->add_option("--out", constants.out, "output path");
    k->add_option("--format", constants.format, "tsv or json");

    std::string cmp_census, cmp_theory, cmp_out;
    CLI::App* m = app.add_subcommand("compare", "empirical vs theoretical table");
    m->add_option("census_json", cmp_census, "census output in json format")->required();
    m->add_option("theory_json", cmp_theory, "theory output in json format")->required();
    m->add_option("--out", cmp_out, "output path");

    app.add_subcommand("selftest", "run brute-force oracles for p <= 200");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (c->parsed()) return run_census_cmd(census);
        if (t->parsed()) return run_theory_cmd(theory);
        if (k->parsed()) return run_constants_cmd(constants);
        if (m->parsed()) return run_compare_cmd(cmp_census, cmp_theory, cmp_out);
        return run_selftest();
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
