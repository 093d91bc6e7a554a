#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "goldbach/verifier.hpp"

namespace goldbach {

// Lock-free segment dispenser. Claiming is one fetch_add on the shared
// cursor; each even integer in [start, limit] lands in exactly one job.
class WorkPool {
public:
    // seg_size counts evens per segment, so the cursor advances by
    // 2 * seg_size per claim.
    WorkPool(uint64_t start, uint64_t limit, uint64_t seg_size);

    // nullopt once the range is exhausted. Overshooting claims by other
    // threads are benign; a cursor that wrapped past 2^64 reads as below
    // start and is treated as exhausted too.
    std::optional<SegmentJob> claim_next();

    uint64_t start() const { return start_; }
    uint64_t limit() const { return limit_; }
    uint64_t seg_span() const { return seg_span_; }
    uint64_t total_evens() const { return ((limit_ - start_) >> 1) + 1; }

private:
    uint64_t start_;
    uint64_t limit_;
    uint64_t seg_span_;
    std::atomic<uint64_t> next_start_;
};

// Serializes whole lines onto one stream so concurrent workers never
// interleave mid-line.
class Logger {
public:
    explicit Logger(std::ostream& out) : out_(&out) {}

    void log(std::string_view msg);

    template <class... Args>
    void logf(Args&&... args) {
        std::ostringstream ss;
        (ss << ... << args);
        log(ss.str());
    }

private:
    std::mutex mu_;
    std::ostream* out_;
};

// Shared counters the monitor reads without ever blocking the workers.
class ProgressCounters {
public:
    explicit ProgressCounters(unsigned workers)
        : per_worker_(new std::atomic<uint64_t>[workers]), workers_(workers) {
        for (unsigned i = 0; i < workers; ++i) per_worker_[i] = 0;
    }

    void add_evens(uint64_t n) {
        evens_done_.fetch_add(n, std::memory_order_relaxed);
    }
    void add_segment(unsigned worker) {
        per_worker_[worker].fetch_add(1, std::memory_order_relaxed);
    }

    uint64_t evens_done() const {
        return evens_done_.load(std::memory_order_relaxed);
    }
    unsigned workers() const { return workers_; }
    uint64_t worker_segments(unsigned w) const {
        return per_worker_[w].load(std::memory_order_relaxed);
    }

private:
    std::atomic<uint64_t> evens_done_{0};
    std::unique_ptr<std::atomic<uint64_t>[]> per_worker_;
    unsigned workers_;
};

struct ProgressSnapshot {
    uint64_t evens_done = 0;
    double throughput = 0.0;                // evens per second
    std::optional<double> eta_seconds;      // nullopt until measurable
    std::vector<uint64_t> per_worker_segments;
};

ProgressSnapshot progress_snapshot(const ProgressCounters& counters,
                                   uint64_t total_evens,
                                   double elapsed_seconds);

// "progress: <evens> evens, <rate>/s, eta <hh:mm:ss>" with --:--:-- while
// the ETA is still undefined.
std::string format_progress_line(const ProgressSnapshot& snap);

struct RunOptions {
    unsigned workers = 1;
    bool progress = false;
    std::chrono::milliseconds progress_interval{1000};
};

struct RunResult {
    uint64_t evens_checked = 0;
    uint64_t unverified_total = 0;
    uint64_t phase2_total = 0;
    std::vector<uint64_t> counterexamples; // sorted ascending
    MinPrimeMax min_prime;
    uint64_t segments = 0;
    std::vector<uint64_t> per_worker_segments;
    double wall_seconds = 0.0;
};

// Spawns the workers, drains the pool, joins, merges. A counterexample or a
// worker error stops claiming; in-flight segments finish first, then the
// first error (if any) is rethrown after every thread has joined.
RunResult run_workers(WorkPool& pool, const VerifyContext& ctx,
                      const RunOptions& opt, Logger& log);

} // namespace goldbach
