#include "goldbach/pool.hpp"

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <iomanip>
#include <thread>

#include "goldbach/errors.hpp"

namespace goldbach {

WorkPool::WorkPool(uint64_t start, uint64_t limit, uint64_t seg_size)
    : start_(start), limit_(limit), seg_span_(2 * seg_size),
      next_start_(start) {
    if ((start & 1) || (limit & 1))
        throw ParamError("WorkPool: start and limit must be even");
    if (start < 4 || start > limit)
        throw ParamError("WorkPool: need 4 <= start <= limit");
    if (seg_size == 0 || seg_size > 0xFFFFFFFFull)
        throw ParamError("WorkPool: seg_size must be in [1, 2^32 - 1]");
}

std::optional<SegmentJob> WorkPool::claim_next() {
    uint64_t a = next_start_.fetch_add(seg_span_, std::memory_order_relaxed);
    // a > limit: range exhausted. a < start: the cursor wrapped past 2^64
    // on an overshooting claim near the ceiling -- equally exhausted.
    if (a < start_ || a > limit_) return std::nullopt;
    uint64_t b = a + std::min(limit_ - a, seg_span_ - 2);
    return SegmentJob{a, b, (a - start_) / seg_span_};
}

void Logger::log(std::string_view msg) {
    std::lock_guard lock(mu_);
    *out_ << msg << '\n';
    out_->flush();
}

ProgressSnapshot progress_snapshot(const ProgressCounters& counters,
                                   uint64_t total_evens,
                                   double elapsed_seconds) {
    ProgressSnapshot snap;
    snap.evens_done = counters.evens_done();
    snap.per_worker_segments.reserve(counters.workers());
    for (unsigned w = 0; w < counters.workers(); ++w)
        snap.per_worker_segments.push_back(counters.worker_segments(w));
    if (elapsed_seconds > 0.0 && snap.evens_done > 0) {
        snap.throughput = static_cast<double>(snap.evens_done) / elapsed_seconds;
        uint64_t remaining =
            total_evens > snap.evens_done ? total_evens - snap.evens_done : 0;
        snap.eta_seconds = static_cast<double>(remaining) / snap.throughput;
    }
    return snap;
}

std::string format_progress_line(const ProgressSnapshot& snap) {
    std::ostringstream ss;
    ss << "progress: " << snap.evens_done << " evens, "
       << static_cast<uint64_t>(snap.throughput + 0.5) << "/s, eta ";
    if (snap.eta_seconds) {
        auto t = static_cast<uint64_t>(*snap.eta_seconds + 0.5);
        ss << std::setfill('0') << std::setw(2) << t / 3600 << ':'
           << std::setw(2) << (t % 3600) / 60 << ':' << std::setw(2) << t % 60;
    } else {
        ss << "--:--";
    }
    return ss.str();
}

RunResult run_workers(WorkPool& pool, const VerifyContext& ctx,
                      const RunOptions& opt, Logger& log) {
    unsigned k = std::max(1u, opt.workers);
    ProgressCounters counters(k);
    std::atomic<bool> stop{false};
    std::mutex err_mu;
    std::exception_ptr first_error;

    struct Local {
        uint64_t evens = 0;
        uint64_t unverified = 0;
        uint64_t phase2 = 0;
        uint64_t segments = 0;
        std::vector<uint64_t> counterexamples;
        MinPrimeMax min_prime;
    };
    std::vector<Local> locals(k);

    auto t0 = std::chrono::steady_clock::now();

    auto worker = [&](unsigned w) {
        try {
            while (!stop.load(std::memory_order_relaxed)) {
                auto job = pool.claim_next();
                if (!job) break;
                SegmentReport rep = verify_segment(*job, ctx);
                Local& mine = locals[w];
                mine.evens += rep.evens_checked;
                mine.unverified += rep.unverified_after_phase1;
                mine.phase2 += rep.phase2_resolved;
                mine.segments += 1;
                mine.min_prime.merge(rep.min_prime);
                counters.add_evens(rep.evens_checked);
                counters.add_segment(w);
                if (!rep.counterexamples.empty()) {
                    for (uint64_t n : rep.counterexamples) {
                        mine.counterexamples.push_back(n);
                        log.logf("counterexample: n = ", n,
                                 " has no prime partition");
                    }
                    stop.store(true, std::memory_order_relaxed);
                }
            }
        } catch (...) {
            {
                std::lock_guard lock(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
            stop.store(true, std::memory_order_relaxed);
        }
    };

    std::mutex monitor_mu;
    std::condition_variable monitor_cv;
    bool finished = false;
    std::thread monitor;
    if (opt.progress) {
        monitor = std::thread([&] {
            std::unique_lock lock(monitor_mu);
            while (!monitor_cv.wait_for(lock, opt.progress_interval,
                                        [&] { return finished; })) {
                double elapsed = std::chrono::duration<double>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count();
                log.log(format_progress_line(
                    progress_snapshot(counters, pool.total_evens(), elapsed)));
            }
        });
    }

    std::vector<std::thread> threads;
    threads.reserve(k);
    for (unsigned w = 0; w < k; ++w) threads.emplace_back(worker, w);
    for (auto& t : threads) t.join();

    if (monitor.joinable()) {
        {
            std::lock_guard lock(monitor_mu);
            finished = true;
        }
        monitor_cv.notify_all();
        monitor.join();
    }

    auto t1 = std::chrono::steady_clock::now();

    // Everything is joined and released; only now surface a worker failure.
    if (first_error) std::rethrow_exception(first_error);

    RunResult res;
    res.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    res.per_worker_segments.reserve(k);
    for (const Local& mine : locals) {
        res.evens_checked += mine.evens;
        res.unverified_total += mine.unverified;
        res.phase2_total += mine.phase2;
        res.segments += mine.segments;
        res.min_prime.merge(mine.min_prime);
        res.counterexamples.insert(res.counterexamples.end(),
                                   mine.counterexamples.begin(),
                                   mine.counterexamples.end());
        res.per_worker_segments.push_back(mine.segments);
    }
    std::sort(res.counterexamples.begin(), res.counterexamples.end());
    return res;
}

} // namespace goldbach
