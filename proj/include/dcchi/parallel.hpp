// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

namespace dcchi {

/// Worker cap: DCCHI_THREADS if set (>= 1), else hardware concurrency.
int max_threads();

/// Runs fn(begin, end) over disjoint contiguous chunks of [0, n). Each index
/// is visited by exactly one worker, so writes keyed by index stay
/// deterministic. Falls back to a single inline call when the range is
/// smaller than two grains or only one worker is available.
void parallel_for(std::int64_t n, std::int64_t grain,
                  const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace dcchi
