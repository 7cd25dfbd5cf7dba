#pragma once

#include <cstddef>
#include <functional>

namespace pinndarts {

// Runs job(0) .. job(count - 1) on up to `workers` threads. Jobs must write
// their results by index; with one worker they run inline in index order.
// The first exception thrown by a job is rethrown after all workers stop.
void run_jobs(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job);

}  // namespace pinndarts
