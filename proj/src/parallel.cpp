#include "qbl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qbl::par {

namespace {

std::atomic<int> g_default_threads{0};

int env_threads() {
  const char* value = std::getenv("QBL_THREADS");
  if (value == nullptr) return 0;
  const int parsed = std::atoi(value);
  return parsed > 0 ? parsed : 0;
}

}  // namespace

int default_threads() {
  const int configured = g_default_threads.load();
  if (configured > 0) return configured;
  const int from_env = env_threads();
  if (from_env > 0) return from_env;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_default_threads(int threads) { g_default_threads.store(threads > 0 ? threads : 0); }

int resolve_threads(int requested) { return requested > 0 ? requested : default_threads(); }

void run_chunks(std::size_t total, int threads,
                const std::function<void(int, std::size_t, std::size_t)>& body) {
  if (total == 0) return;
  const int workers = resolve_threads(threads);
  const std::size_t chunks =
      std::min<std::size_t>(static_cast<std::size_t>(workers > 0 ? workers : 1), total);
  const std::size_t step = (total + chunks - 1) / chunks;

  if (chunks == 1) {
    body(0, 0, total);
    return;
  }

  std::vector<std::thread> team;
  team.reserve(chunks);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = c * step;
    const std::size_t end = std::min(total, begin + step);
    team.emplace_back([&, c, begin, end] {
      try {
        body(static_cast<int>(c), begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : team) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void run_tasks(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const int workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), count));

  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> team;
  team.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    team.emplace_back([&] {
      for (;;) {
        const std::size_t index = next.fetch_add(1);
        if (index >= count) return;
        try {
          body(index);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : team) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qbl::par
