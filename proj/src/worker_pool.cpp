#include "levelu/worker_pool.hpp"

#include <algorithm>

namespace levelu {

WorkerPool::WorkerPool(std::size_t workers)
{
    const std::size_t extra = workers > 1 ? workers - 1 : 0;
    threads_.reserve(extra);
    for (std::size_t id = 1; id <= extra; ++id) {
        threads_.emplace_back([this, id] { worker_loop(id); });
    }
}

WorkerPool::~WorkerPool()
{
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    start_.notify_all();
    for (auto& t : threads_) {
        t.join();
    }
}

void WorkerPool::drain(std::size_t id)
{
    for (std::size_t t = next_.fetch_add(1); t < count_; t = next_.fetch_add(1)) {
        if (failed_.load(std::memory_order_relaxed)) {
            break;
        }
        try {
            (*body_)(t, id);
        } catch (...) {
            std::lock_guard lock(mutex_);
            if (!error_) {
                error_ = std::current_exception();
            }
            failed_.store(true, std::memory_order_relaxed);
        }
    }
}

void WorkerPool::worker_loop(std::size_t id)
{
    std::size_t seen = 0;
    for (;;) {
        std::unique_lock lock(mutex_);
        start_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) {
            return;
        }
        seen = generation_;
        if (id >= concurrency_) {
            continue;
        }
        lock.unlock();
        drain(id);
        lock.lock();
        if (--pending_workers_ == 0) {
            done_.notify_one();
        }
    }
}

void WorkerPool::run(std::size_t count, std::size_t concurrency, const Task& body)
{
    if (count == 0) {
        return;
    }
    const std::size_t used = std::clamp<std::size_t>(std::min(concurrency, count), 1, size());
    if (used == 1) {
        for (std::size_t t = 0; t < count; ++t) {
            body(t, 0);
        }
        return;
    }
    {
        std::lock_guard lock(mutex_);
        body_ = &body;
        count_ = count;
        concurrency_ = used;
        pending_workers_ = used - 1;
        next_.store(0);
        failed_.store(false);
        error_ = nullptr;
        ++generation_;
    }
    start_.notify_all();
    drain(0);

    std::unique_lock lock(mutex_);
    done_.wait(lock, [&] { return pending_workers_ == 0; });
    body_ = nullptr;
    if (error_) {
        auto e = error_;
        error_ = nullptr;
        std::rethrow_exception(e);
    }
}

}  // namespace levelu
