#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace lsv {

/// Trials per block. Block boundaries do not depend on the worker count, and
/// block tallies are folded in block order, so floating-point accumulations
/// come out bit-identical for any number of workers.
inline constexpr std::uint64_t kTrialBlock = 256;

/// LSV_LAB_WORKERS when set to a positive integer.
inline std::optional<unsigned> env_workers() {
  if (const char* env = std::getenv("LSV_LAB_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

/// Worker count: LSV_LAB_WORKERS if set, else the hardware concurrency.
inline unsigned default_workers() {
  return env_workers().value_or(std::max(1u, std::thread::hardware_concurrency()));
}

/// The environment overrides an explicit request; 0 means "no preference".
inline unsigned effective_workers(unsigned requested) {
  if (const auto env = env_workers()) return *env;
  return requested > 0 ? requested : default_workers();
}

/// Run body(trial, tally) for every trial in [0, trials), sharded across
/// workers. Each block starts from a copy of `init`; merge(acc, block) folds
/// block tallies into the result in block order.
template <class Tally, class Body, class Merge>
Tally run_trials(std::uint64_t trials, unsigned workers, const Tally& init, Body&& body,
                 Merge&& merge) {
  const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<Tally> partial(blocks, init);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        const std::uint64_t end = std::min(trials, (b + 1) * kTrialBlock);
        for (std::uint64_t t = b * kTrialBlock; t < end; ++t) body(t, partial[b]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
        return;
      }
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), std::max<std::uint64_t>(blocks, 1)));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  Tally result = init;
  for (const auto& p : partial) merge(result, p);
  return result;
}

}  // namespace lsv
