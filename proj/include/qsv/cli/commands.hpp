#pragma once

// qsvlab subcommands: verify, tradeoff, variable-round, crossover.

#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "qsv/cli/config.hpp"

namespace qsv::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Runs the CLI on `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_verify(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_tradeoff(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_variable_round(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_crossover(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

int resolve_jobs(int requested);

/// results[i] = fn(i), computed on up to `jobs` threads. The first exception
/// thrown by any task is rethrown after all workers stop.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, int jobs, Fn fn) {
  std::vector<T> results(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace qsv::cli
