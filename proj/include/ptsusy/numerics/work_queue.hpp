#pragma once

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace ptsusy::numerics {

/// Fixed pool of workers draining a FIFO of independent jobs. Results come
/// back through futures; exceptions thrown by a job surface at get().
class WorkQueue {
public:
    explicit WorkQueue(unsigned workers = std::max(1u, std::thread::hardware_concurrency())) {
        for (unsigned i = 0; i < std::max(1u, workers); ++i)
            threads_.emplace_back([this](std::stop_token st) { run(st); });
    }

    WorkQueue(const WorkQueue&) = delete;
    WorkQueue& operator=(const WorkQueue&) = delete;

    ~WorkQueue() {
        for (auto& t : threads_) t.request_stop();
        cv_.notify_all();
    }

    template <class F>
    auto submit(F&& f) -> std::future<std::invoke_result_t<F>> {
        using R = std::invoke_result_t<F>;
        auto task = std::make_shared<std::packaged_task<R()>>(std::forward<F>(f));
        auto fut = task->get_future();
        {
            std::lock_guard lock(mu_);
            jobs_.emplace_back([task] { (*task)(); });
        }
        cv_.notify_one();
        return fut;
    }

    std::size_t workers() const noexcept { return threads_.size(); }

private:
    void run(std::stop_token st) {
        for (;;) {
            std::function<void()> job;
            {
                std::unique_lock lock(mu_);
                cv_.wait(lock, st, [this] { return !jobs_.empty(); });
                // Pending jobs are still drained after a stop request so no future is left dangling.
                if (jobs_.empty()) return;
                job = std::move(jobs_.front());
                jobs_.pop_front();
            }
            job();
        }
    }

    std::mutex mu_;
    std::condition_variable_any cv_;
    std::deque<std::function<void()>> jobs_;
    std::vector<std::jthread> threads_;  // last member: joined before the queue is destroyed
};

/// Runs f over items on a pool and returns results in input order.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, F f, unsigned workers = 0) {
    using R = std::invoke_result_t<F, const T&>;
    WorkQueue q(workers ? workers : std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<R>> futs;
    futs.reserve(items.size());
    for (const auto& it : items) futs.push_back(q.submit([&f, &it] { return f(it); }));
    std::vector<R> out;
    out.reserve(items.size());
    for (auto& fu : futs) out.push_back(fu.get());
    return out;
}

}  // namespace ptsusy::numerics
