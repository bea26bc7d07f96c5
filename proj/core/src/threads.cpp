#include "gridstealth/threads.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace gridstealth {
namespace {
std::atomic<unsigned> requested_workers{0};
}

void set_worker_threads(unsigned count) noexcept { requested_workers.store(count); }

unsigned worker_threads() noexcept {
  const unsigned n = requested_workers.load();
  return n ? n : std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace gridstealth
