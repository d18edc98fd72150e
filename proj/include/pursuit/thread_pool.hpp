#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pursuit {

// Small fork-join pool used to fan independent per-agent decisions out
// across cores within one simulation step. Indices are claimed from a
// single atomic counter, so scheduling never changes which work runs.
class ThreadPool {
  public:
    explicit ThreadPool(unsigned threads) {
        const unsigned extra = threads > 1 ? threads - 1 : 0;
        workers_.reserve(extra);
        for (unsigned i = 0; i < extra; ++i) workers_.emplace_back([this] { worker_loop(); });
    }

    ~ThreadPool() {
        {
            std::lock_guard lk(mu_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& w : workers_) w.join();
    }

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    unsigned thread_count() const { return static_cast<unsigned>(workers_.size()) + 1; }

    // Runs fn(0) .. fn(count-1), blocking until all have finished. The
    // calling thread participates.
    void parallel_for(size_t count, const std::function<void(size_t)>& fn) {
        if (count == 0) return;
        if (workers_.empty() || count == 1) {
            for (size_t i = 0; i < count; ++i) fn(i);
            return;
        }
        {
            std::lock_guard lk(mu_);
            job_ = &fn;
            limit_ = count;
            next_.store(0, std::memory_order_relaxed);
            pending_.store(count, std::memory_order_relaxed);
            ++generation_;
        }
        cv_.notify_all();
        run_available();
        std::unique_lock lk(mu_);
        done_cv_.wait(lk, [this] { return pending_.load(std::memory_order_acquire) == 0; });
        job_ = nullptr;
    }

  private:
    void run_available() {
        while (true) {
            const size_t i = next_.fetch_add(1, std::memory_order_relaxed);
            if (i >= limit_) break;
            (*job_)(i);
            if (pending_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
                std::lock_guard lk(mu_);
                done_cv_.notify_one();
            }
        }
    }

    void worker_loop() {
        std::uint64_t seen = 0;
        std::unique_lock lk(mu_);
        while (true) {
            cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
            lk.unlock();
            run_available();
            lk.lock();
        }
    }

    std::vector<std::thread> workers_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable done_cv_;
    const std::function<void(size_t)>* job_ = nullptr;
    size_t limit_ = 0;
    std::atomic<size_t> next_{0};
    std::atomic<size_t> pending_{0};
    std::uint64_t generation_ = 0;
    bool stop_ = false;
};

}  // namespace pursuit
