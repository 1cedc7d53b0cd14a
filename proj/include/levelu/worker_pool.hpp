#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace levelu {

/// Fixed set of workers that run one batch of indexed tasks at a time.
/// Each call to run() is a full barrier: it returns after every task of the
/// batch finished. The calling thread acts as worker 0.
class WorkerPool {
public:
    using Task = std::function<void(std::size_t task, std::size_t worker)>;

    explicit WorkerPool(std::size_t workers);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    std::size_t size() const { return threads_.size() + 1; }

    /// Runs body(t, w) for every t in [0, count) using at most `concurrency`
    /// workers. The first exception thrown by a task is rethrown here after
    /// the batch drains; remaining tasks are skipped.
    void run(std::size_t count, std::size_t concurrency, const Task& body);

private:
    void worker_loop(std::size_t id);
    void drain(std::size_t id);

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable start_;
    std::condition_variable done_;
    std::size_t generation_ = 0;
    bool stop_ = false;

    const Task* body_ = nullptr;
    std::size_t count_ = 0;
    std::size_t concurrency_ = 0;
    std::size_t pending_workers_ = 0;
    std::atomic<std::size_t> next_{0};
    std::atomic<bool> failed_{false};
    std::exception_ptr error_;
};

}  // namespace levelu
