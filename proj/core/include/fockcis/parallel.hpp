#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fockcis
{

/// Worker count used by parallel_for when none is given; 0 means hardware concurrency.
void set_default_threads(unsigned threads) noexcept;
unsigned default_threads() noexcept;

/// Calls fn(i) for i in [0, n) on contiguous chunks. fn must only write to slot i of
/// its own output, so results do not depend on the thread count. The first
/// exception (lowest chunk) is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads = 0)
{
    if (threads == 0)
        threads = default_threads();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
        {
            const std::size_t lo = n * t / threads;
            const std::size_t hi = n * (t + 1) / threads;
            pool.emplace_back([&fn, &errors, t, lo, hi] {
                try
                {
                    for (std::size_t i = lo; i < hi; ++i)
                        fn(i);
                }
                catch (...)
                {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace fockcis
