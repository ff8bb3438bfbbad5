// Copyright 2026 The lisa-match Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <new>
#include <vector>

namespace lisa {

// Bytes held by work buffers on the calling thread. Matchers allocate every
// scratch vector through TrackingAllocator so tests can bound their
// auxiliary memory.
struct WorkspaceStats {
  std::size_t current = 0;
  std::size_t peak = 0;
};

inline WorkspaceStats& workspace_stats() noexcept {
  thread_local WorkspaceStats stats;
  return stats;
}

template <class T>
struct TrackingAllocator {
  using value_type = T;

  TrackingAllocator() noexcept = default;
  template <class U>
  TrackingAllocator(const TrackingAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) {
    T* p = std::allocator<T>{}.allocate(count);
    auto& stats = workspace_stats();
    stats.current += count * sizeof(T);
    stats.peak = std::max(stats.peak, stats.current);
    return p;
  }

  void deallocate(T* p, std::size_t count) noexcept {
    workspace_stats().current -= count * sizeof(T);
    std::allocator<T>{}.deallocate(p, count);
  }

  template <class U>
  bool operator==(const TrackingAllocator<U>&) const noexcept {
    return true;
  }
};

template <class T>
using WorkVector = std::vector<T, TrackingAllocator<T>>;

// Measures the peak workspace growth between construction and peak_bytes().
class WorkspaceProbe {
 public:
  WorkspaceProbe() noexcept
      : base_(workspace_stats().current), saved_peak_(workspace_stats().peak) {
    workspace_stats().peak = base_;
  }
  ~WorkspaceProbe() {
    auto& stats = workspace_stats();
    stats.peak = std::max(stats.peak, saved_peak_);
  }
  WorkspaceProbe(const WorkspaceProbe&) = delete;
  WorkspaceProbe& operator=(const WorkspaceProbe&) = delete;

  std::size_t peak_bytes() const noexcept {
    return workspace_stats().peak - base_;
  }

 private:
  std::size_t base_;
  std::size_t saved_peak_;
};

}  // namespace lisa
