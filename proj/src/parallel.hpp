// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef STEKLOV_PARALLEL_HPP
#define STEKLOV_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace steklov::detail
{

// Worker cap: STEKLOV_THREADS if set to a positive integer, else the hardware
// concurrency.
inline int WorkerCount()
{
  if (const char *env = std::getenv("STEKLOV_THREADS"))
  {
    const int n = std::atoi(env);
    if (n > 0)
    {
      return n;
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n). The first exception thrown by any task is rethrown
// after all workers have joined.
template <typename Fn>
void ParallelFor(std::size_t n, Fn &&fn)
{
  const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(WorkerCount()));
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < n; i++)
    {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&]()
  {
    for (std::size_t i = next++; i < n; i = next++)
    {
      try
      {
        fn(i);
      }
      catch (...)
      {
        std::lock_guard lock(error_mutex);
        if (!error)
        {
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; w++)
  {
    pool.emplace_back(work);
  }
  work();
  for (auto &t : pool)
  {
    t.join();
  }
  if (error)
  {
    std::rethrow_exception(error);
  }
}

}  // namespace steklov::detail

#endif  // STEKLOV_PARALLEL_HPP
