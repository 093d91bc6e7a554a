#include "goldbach/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include <json.hpp>

#include "goldbach/pool.hpp"
#include "goldbach/sieve.hpp"
#include "goldbach/verifier.hpp"

namespace goldbach {

namespace {

uint64_t parse_u64(const std::string& what, std::string_view text) {
    uint64_t v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc::result_out_of_range)
        throw UsageError(what + ": value out of range (the ceiling is 2^64 - 1)");
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
        throw UsageError(what + ": expected a number, got '" +
                         std::string(text) + "'");
    return v;
}

int64_t parse_i64(const std::string& what, std::string_view text) {
    int64_t v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
        throw UsageError(what + ": expected an integer, got '" +
                         std::string(text) + "'");
    return v;
}

// Upper bound on pi(x) (Rosser-Schoenfeld flavor); estimation only.
uint64_t pi_upper(uint64_t x) {
    if (x < 17) return 8;
    double d = static_cast<double>(x);
    return static_cast<uint64_t>(1.26 * d / std::log(d)) + 1;
}

uint64_t isqrt_u64(uint64_t x) {
    if (x == 0) return 0;
    auto s = static_cast<uint64_t>(std::sqrt(static_cast<long double>(x)));
    while (s > 1 && s > x / s) --s;
    while ((s + 1) <= x / (s + 1)) ++s;
    return s;
}

// MemAvailable reflects what the kernel can actually hand out; total RAM is
// the fallback when /proc is not readable.
uint64_t available_memory_bytes() {
    std::ifstream meminfo("/proc/meminfo");
    std::string key;
    uint64_t kb = 0;
    while (meminfo >> key >> kb) {
        if (key == "MemAvailable:") return kb * 1024;
        meminfo.ignore(256, '\n');
    }
    long pages = sysconf(_SC_PHYS_PAGES);
    long page_size = sysconf(_SC_PAGE_SIZE);
    if (pages > 0 && page_size > 0)
        return static_cast<uint64_t>(pages) * static_cast<uint64_t>(page_size);
    return ~uint64_t{0};
}

std::string format_bytes(uint64_t bytes) {
    static const char* units[] = {"B", "KiB", "MiB", "GiB", "TiB"};
    double v = static_cast<double>(bytes);
    int u = 0;
    while (v >= 1024.0 && u < 4) {
        v /= 1024.0;
        ++u;
    }
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(1) << v << ' ' << units[u];
    return ss.str();
}

void print_human_summary(std::ostream& out, const Config& cfg,
                         unsigned workers, const RunResult& res) {
    out << "goldbach verification summary\n"
        << "  range                    : [" << cfg.start << ", " << cfg.limit
        << "]\n"
        << "  workers                  : " << workers << "\n"
        << "  segments                 : " << res.segments << "\n"
        << "  evens checked            : " << res.evens_checked << "\n"
        << "  unverified after phase 1 : " << res.unverified_total << "\n"
        << "  phase 2 resolved         : " << res.phase2_total << "\n"
        << "  max p_min                : " << res.min_prime.p << " at n = "
        << res.min_prime.n << "\n";
    out << "  counterexamples          : ";
    if (res.counterexamples.empty()) {
        out << "none\n";
    } else {
        for (size_t i = 0; i < res.counterexamples.size(); ++i)
            out << (i ? " " : "") << res.counterexamples[i];
        out << "\n";
    }
    out << "  wall time                : " << std::fixed
        << std::setprecision(2) << res.wall_seconds << " s\n"
        << "  result                   : "
        << (res.counterexamples.empty() ? "VERIFIED" : "COUNTEREXAMPLE FOUND")
        << "\n";
}

void print_json_summary(std::ostream& out, const Config& cfg, unsigned workers,
                        const RunResult& res) {
    nlohmann::ordered_json j;
    j["limit"] = cfg.limit;
    j["start"] = cfg.start;
    j["workers_used"] = workers;
    j["seg_size"] = cfg.seg_size;
    j["p_small"] = cfg.p_small;
    j["batch_size"] = cfg.batch_size;
    j["phase2_limit"] = cfg.phase2_limit;
    j["total_evens"] = res.evens_checked;
    j["unverified_total"] = res.unverified_total;
    j["phase2_total"] = res.phase2_total;
    j["counterexamples"] = res.counterexamples;
    j["max_min_prime"] = res.min_prime.p;
    j["max_min_prime_n"] = res.min_prime.n;
    j["segments"] = res.segments;
    j["per_worker_segments"] = res.per_worker_segments;
    j["wall_seconds"] = res.wall_seconds;
    j["verified"] = res.counterexamples.empty();
    out << j.dump() << "\n";
}

} // namespace

Config parse_args(const std::vector<std::string>& args, std::ostream& warn) {
    Config cfg;
    bool saw_limit = false;

    auto value_of = [&](size_t& i, const std::string& flag,
                        std::optional<std::string>& inline_val) {
        if (inline_val) return *inline_val;
        if (i + 1 >= args.size())
            throw UsageError(flag + ": missing value");
        return args[++i];
    };

    for (size_t i = 0; i < args.size(); ++i) {
        const std::string& tok = args[i];
        if (tok == "-h" || tok == "--help") {
            cfg.help = true;
            continue;
        }
        if (tok.rfind("--", 0) == 0) {
            std::string flag = tok;
            std::optional<std::string> val;
            if (auto eq = tok.find('='); eq != std::string::npos) {
                flag = tok.substr(0, eq);
                val = tok.substr(eq + 1);
            }
            if (flag == "--progress" || flag == "--json") {
                if (val) throw UsageError(flag + " takes no value");
                (flag == "--json" ? cfg.json : cfg.progress) = true;
            } else if (flag == "--start") {
                cfg.start = parse_u64(flag, value_of(i, flag, val));
            } else if (flag == "--workers" || flag == "--gpus") {
                cfg.workers = parse_i64(flag, value_of(i, flag, val));
            } else if (flag == "--seg-size") {
                cfg.seg_size = parse_u64(flag, value_of(i, flag, val));
            } else if (flag == "--p-small") {
                cfg.p_small = parse_u64(flag, value_of(i, flag, val));
            } else if (flag == "--batch-size") {
                cfg.batch_size = parse_u64(flag, value_of(i, flag, val));
            } else if (flag == "--phase2-limit") {
                cfg.phase2_limit = parse_u64(flag, value_of(i, flag, val));
            } else if (flag == "--mem-cap") {
                cfg.mem_cap = parse_u64(flag, value_of(i, flag, val));
            } else if (flag == "--inject-fail") {
                cfg.inject_fail = parse_u64(flag, value_of(i, flag, val));
            } else {
                throw UsageError("unknown flag '" + flag + "'");
            }
        } else {
            if (saw_limit)
                throw UsageError("unexpected extra argument '" + tok + "'");
            cfg.limit = parse_u64("LIMIT", tok);
            saw_limit = true;
        }
    }

    if (cfg.help) return cfg;
    if (!saw_limit) throw UsageError("missing LIMIT argument");

    if (cfg.limit & 1) {
        warn << "warning: odd limit " << cfg.limit << " rounded down to "
             << cfg.limit - 1 << "\n";
        cfg.limit -= 1;
    }
    if (cfg.start & 1) {
        warn << "warning: odd start " << cfg.start << " rounded down to "
             << cfg.start - 1 << "\n";
        cfg.start -= 1;
    }

    if (cfg.limit < 4) throw UsageError("limit must be at least 4");
    if (cfg.start < 4) throw UsageError("start must be at least 4");
    if (cfg.start > cfg.limit) throw UsageError("start exceeds limit");
    if (cfg.workers == 0 || cfg.workers < -1)
        throw UsageError("workers must be >= 1, or -1 for all logical cores");
    if (cfg.workers > 4096)
        throw UsageError("workers value is too large (max 4096)");
    if (cfg.seg_size == 0 || cfg.seg_size > 0xFFFFFFFFull)
        throw UsageError("seg-size must be in [1, 4294967295] so the "
                         "per-segment unverified counter fits 32 bits");
    if (cfg.p_small < 3) throw UsageError("p-small must be at least 3");
    if (cfg.batch_size == 0) throw UsageError("batch-size must be at least 1");
    if (cfg.mem_cap && *cfg.mem_cap == 0)
        throw UsageError("mem-cap must be positive");
    return cfg;
}

std::string usage_text() {
    return
        "usage: goldbach [OPTIONS] LIMIT\n"
        "\n"
        "Exhaustively verifies Goldbach's conjecture for every even integer\n"
        "in [--start, LIMIT], both bounds inclusive. Odd bounds are rounded\n"
        "down with a warning. The hard ceiling is 2^64 - 1.\n"
        "\n"
        "options:\n"
        "  --start=N         first even integer to check (default 4)\n"
        "  --workers=N       worker threads; -1 = all logical cores (default 1)\n"
        "  --gpus=N          accepted alias of --workers\n"
        "  --seg-size=N      even integers per work segment (default 200000000)\n"
        "  --p-small=N       phase 1 tries partition primes p <= N (default 1000000)\n"
        "  --batch-size=N    primes scanned per phase 1 chunk (default 2000000)\n"
        "  --phase2-limit=N  phase 2 lookup table covers primes <= N; 0 disables\n"
        "                    the table (default 100000000)\n"
        "  --mem-cap=BYTES   fail before spawning workers if the estimated\n"
        "                    footprint exceeds BYTES\n"
        "  --progress        print a progress line to stderr every second\n"
        "  --json            print the summary as a single JSON object\n"
        "  --inject-fail=N   self-test hook: treat even N as a counterexample\n"
        "  --help            show this help\n"
        "\n"
        "exit codes: 0 = range fully verified, 1 = usage/resource/internal\n"
        "error, 2 = counterexample found\n";
}

unsigned resolve_workers(int64_t workers) {
    if (workers == -1) {
        unsigned hw = std::thread::hardware_concurrency();
        return hw ? hw : 1;
    }
    if (workers < 1 || workers > 4096)
        throw UsageError("workers must be >= 1, or -1 for all logical cores");
    return static_cast<unsigned>(workers);
}

MemoryEstimate validate_resources(const Config& cfg) {
    MemoryEstimate est;
    est.workers = resolve_workers(cfg.workers);

    uint64_t seg_span = 2 * cfg.seg_size;
    uint64_t qbits = (seg_span + cfg.p_small) / 16 + 64;
    uint64_t verified = cfg.seg_size / 8 + 64;
    uint64_t tile = TileSpec{}.odds_per_tile / 8;
    uint64_t sqrt_bound = isqrt_u64(cfg.limit) + 1;
    // striding-prime cursor state inside the tiled sieve, ~12 B per prime
    uint64_t stride_state =
        std::min(pi_upper(sqrt_bound), pi_upper(seg_span / 2 + 2)) * 12;
    est.per_worker_bytes = qbits + verified + tile + stride_state;

    uint64_t small_table = pi_upper(cfg.p_small) * 8;
    uint64_t phase2_table =
        cfg.phase2_limit >= 2 ? pi_upper(cfg.phase2_limit) * 8 : 0;
    uint64_t base_table = pi_upper(sqrt_bound) * 4;
    // transient peaks while tables are sieved
    uint64_t scratch = std::max(cfg.p_small, cfg.phase2_limit) / 8 +
                       sqrt_bound / 16;
    est.shared_bytes = small_table + phase2_table + base_table + scratch;
    est.total_bytes = est.per_worker_bytes * est.workers + est.shared_bytes;

    uint64_t budget = cfg.mem_cap ? *cfg.mem_cap : available_memory_bytes();
    if (est.total_bytes > budget)
        throw ResourceError(
            "estimated footprint " + format_bytes(est.total_bytes) +
            " exceeds " + (cfg.mem_cap ? "--mem-cap " : "available memory ") +
            format_bytes(budget) +
            " (reduce --seg-size, --phase2-limit, or --workers)");
    return est;
}

double efficiency(double t1_seconds, unsigned k, double tk_seconds) {
    if (k < 1) throw ParamError("efficiency: k must be >= 1");
    if (tk_seconds <= 0.0)
        throw ParamError("efficiency: tk must be positive");
    return t1_seconds / (static_cast<double>(k) * tk_seconds);
}

int run(const Config& cfg, std::ostream& out, std::ostream& err) {
    Logger log(err);
    MemoryEstimate est = validate_resources(cfg);
    log.logf("memory estimate: ", format_bytes(est.total_bytes), " (",
             est.workers, " worker(s) x ", format_bytes(est.per_worker_bytes),
             " + shared ", format_bytes(est.shared_bytes), ")");

    SmallPrimeTable small = SmallPrimeTable::build(cfg.p_small);
    Phase2Table phase2 = Phase2Table::build(cfg.phase2_limit);
    BasePrimes base = build_base_primes(cfg.limit);

    VerifyContext ctx;
    ctx.small = &small;
    ctx.phase2 = &phase2;
    ctx.base = &base;
    ctx.batch_size = cfg.batch_size;
    ctx.inject_fail = cfg.inject_fail;

    WorkPool pool(cfg.start, cfg.limit, cfg.seg_size);
    RunOptions opt;
    opt.workers = est.workers;
    opt.progress = cfg.progress;
    RunResult res = run_workers(pool, ctx, opt, log);

    if (cfg.json)
        print_json_summary(out, cfg, est.workers, res);
    else
        print_human_summary(out, cfg, est.workers, res);
    return res.counterexamples.empty() ? 0 : 2;
}

} // namespace goldbach
