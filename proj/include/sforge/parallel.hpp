#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sforge {

// Process-wide worker count used by the summation helpers.
inline int& default_threads() {
  static int n = 1;
  return n;
}

inline constexpr std::size_t sum_chunk = 256;

namespace detail {

// Runs body(c) for c in [0, count) on up to `threads` workers; rethrows the
// exception of the lowest failing index.
template <class Body>
void run_indexed(std::size_t count, int threads, Body&& body) {
  std::size_t workers = std::min<std::size_t>(threads < 1 ? 1 : threads, count);
  if (workers <= 1) {
    for (std::size_t c = 0; c < count; ++c) body(c);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t c = t; c < count; c += workers) {
        try {
          body(c);
        } catch (...) {
          errors[c] = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

// Sum of f(0..n-1). Terms are grouped in fixed chunks and partial sums combined
// pairwise in a fixed tree, so the result does not depend on the thread count.
template <class T, class F>
T deterministic_sum(std::size_t n, F&& f, const T& zero, int threads = default_threads()) {
  std::size_t chunks = (n + sum_chunk - 1) / sum_chunk;
  if (chunks == 0) return zero;
  std::vector<T> partial(chunks, zero);
  detail::run_indexed(chunks, threads, [&](std::size_t c) {
    T s = zero;
    std::size_t end = std::min(n, (c + 1) * sum_chunk);
    for (std::size_t i = c * sum_chunk; i < end; ++i) s += f(i);
    partial[c] = s;
  });
  for (std::size_t width = 1; width < chunks; width *= 2)
    for (std::size_t i = 0; i + width < chunks; i += 2 * width) partial[i] += partial[i + width];
  return partial[0];
}

// Applies f to 0..n-1; results stored by index.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& f, int threads = default_threads()) {
  std::vector<R> out(n);
  detail::run_indexed(n, threads, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

}  // namespace sforge
