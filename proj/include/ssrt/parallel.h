// Copyright 2026 The ssr-telescopy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SSRT_PARALLEL_H
#define SSRT_PARALLEL_H

#include <cstddef>
#include <exception>
#include <functional>

namespace ssrt {

/// Worker count: SSR_TELESCOPY_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, n). Each index runs exactly once; callers write
/// results into per-index slots so the reduction order never depends on
/// scheduling. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ssrt

#endif  // SSRT_PARALLEL_H
