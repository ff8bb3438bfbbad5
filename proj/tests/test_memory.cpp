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

// Counts every heap byte through replaced global operator new/delete to bound
// the auxiliary memory of the LiSA pipeline.

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <new>

#include "lisa/graphgen.hpp"
#include "lisa/matchers.hpp"

namespace {

std::atomic<std::size_t> g_current{0};
std::atomic<std::size_t> g_peak{0};
constexpr std::size_t kHeader = alignof(std::max_align_t);

void* counted_alloc(std::size_t size) {
  void* raw = std::malloc(size + kHeader);
  if (!raw) throw std::bad_alloc();
  *static_cast<std::size_t*>(raw) = size;
  const std::size_t now = g_current += size;
  std::size_t peak = g_peak.load();
  while (now > peak && !g_peak.compare_exchange_weak(peak, now)) {
  }
  return static_cast<char*>(raw) + kHeader;
}

void counted_free(void* p) noexcept {
  if (!p) return;
  void* raw = static_cast<char*>(p) - kHeader;
  g_current -= *static_cast<std::size_t*>(raw);
  std::free(raw);
}

// Peak heap growth above the level at construction.
class HeapProbe {
 public:
  HeapProbe() : base_(g_current.load()) { g_peak = base_; }
  std::size_t peak_bytes() const { return g_peak.load() - base_; }

 private:
  std::size_t base_;
};

}  // namespace

void* operator new(std::size_t size) { return counted_alloc(size); }
void* operator new[](std::size_t size) { return counted_alloc(size); }
void operator delete(void* p) noexcept { counted_free(p); }
void operator delete[](void* p) noexcept { counted_free(p); }
void operator delete(void* p, std::size_t) noexcept { counted_free(p); }
void operator delete[](void* p, std::size_t) noexcept { counted_free(p); }

namespace {

using lisa::GraphKind;

TEST(Memory, LisaAuxiliaryHeapIsLinear) {
  for (std::size_t n : {500u, 2000u}) {
    for (auto kind : {GraphKind::dense_weighted, GraphKind::sparse_binary}) {
      const auto inst = lisa::make_instance(kind, n, 17);
      HeapProbe heap;
      lisa::WorkspaceProbe work;
      const auto r = lisa::lisa_match(inst.a, inst.b);
      EXPECT_EQ(r.matching, *inst.ground_truth);
      // A handful of length-n vectors; an n x n object would be n * n * 8 bytes.
      const std::size_t linear = 16 * n * sizeof(double) + 4096;
      EXPECT_LE(heap.peak_bytes(), linear) << "n=" << n;
      EXPECT_LE(work.peak_bytes(), linear) << "n=" << n;
      EXPECT_GT(work.peak_bytes(), 0u);
    }
  }
}

TEST(Memory, BaselinesAccountTheirQuadraticBuffers) {
  const auto inst = lisa::make_instance(GraphKind::dense_weighted, 40, 3);
  {
    lisa::WorkspaceProbe work;
    lisa::smkb_match(inst.a, inst.b);
    EXPECT_GE(work.peak_bytes(), 3 * 40 * 40 * sizeof(double));
  }
  {
    lisa::WorkspaceProbe work;
    lisa::sm_match(inst.a, inst.b);
    const std::size_t order = 40 * 40;
    EXPECT_GE(work.peak_bytes(), order * (order + 1) / 2 * sizeof(double));
  }
}

}  // namespace
