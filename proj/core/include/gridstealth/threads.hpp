#pragma once

namespace gridstealth {

/// Worker threads used by Monte Carlo loops. 0 (the default) means
/// std::thread::hardware_concurrency(). Results never depend on this value.
void set_worker_threads(unsigned count) noexcept;
unsigned worker_threads() noexcept;

}  // namespace gridstealth
