#pragma once

#include <cstdint>
#include <functional>

namespace percolab {

// Replicas are scheduled in fixed-size blocks; block boundaries never depend on
// the worker count, which is what makes merged results worker-independent.
inline constexpr std::uint64_t kReplicaBlock = 64;

// requested > 0 wins; otherwise PERCOLAB_WORKERS; otherwise hardware threads.
unsigned resolve_workers(unsigned requested = 0);

// Calls body(worker, block, begin, end) once per block of [0, n). Workers pull
// blocks from a shared counter; `worker` is in [0, workers) and lets callers
// keep per-thread scratch. The first exception thrown by any body is rethrown
// after all workers stop.
void parallel_blocks(std::uint64_t n, std::uint64_t block_size, unsigned workers,
                     const std::function<void(unsigned, std::uint64_t, std::uint64_t, std::uint64_t)>& body);

}  // namespace percolab
