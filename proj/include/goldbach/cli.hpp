#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "goldbach/errors.hpp"

namespace goldbach {

// Malformed command line; main prints the usage text for these.
struct UsageError : ParamError {
    using ParamError::ParamError;
};

struct Config {
    uint64_t limit = 0;               // positional; inclusive ceiling
    uint64_t start = 4;
    int64_t workers = 1;              // -1 = all logical cores
    uint64_t seg_size = 200'000'000;  // even integers per segment
    uint64_t p_small = 1'000'000;
    uint64_t batch_size = 2'000'000;
    uint64_t phase2_limit = 100'000'000; // 0 disables the lookup table
    bool progress = false;
    bool json = false;
    std::optional<uint64_t> mem_cap;  // bytes
    uint64_t inject_fail = 0;         // self-test hook; 0 = off
    bool help = false;
};

// argv without the program name. Warnings (odd bounds rounded down) go to
// warn; violations throw UsageError.
Config parse_args(const std::vector<std::string>& args, std::ostream& warn);

std::string usage_text();

// -1 resolves to the logical core count (minimum 1).
unsigned resolve_workers(int64_t workers);

struct MemoryEstimate {
    uint64_t per_worker_bytes = 0;
    uint64_t shared_bytes = 0;
    uint64_t total_bytes = 0;
    unsigned workers = 0;
};

// Estimates the peak footprint (per-worker bitsets + shared tables) and
// throws ResourceError when it exceeds mem_cap, or available memory when no
// cap is given. Runs before any table is built or worker spawned.
MemoryEstimate validate_resources(const Config& cfg);

// Parallel efficiency t1 / (k * tk).
double efficiency(double t1_seconds, unsigned k, double tk_seconds);

// Builds tables, drains the pool, prints the summary to out (human text or
// one JSON object with --json). Progress and logs go to err. Returns 0 when
// the range verified, 2 on a counterexample; errors propagate as exceptions
// and main maps them to exit 1.
int run(const Config& cfg, std::ostream& out, std::ostream& err);

} // namespace goldbach
