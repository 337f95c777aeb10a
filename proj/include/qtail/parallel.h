// Copyright 2026 The qtail Authors
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

#ifndef QTAIL_PARALLEL_H
#define QTAIL_PARALLEL_H

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace qtail {

/// Work is cut into chunks of this many indices no matter how many threads run, so the reduction tree
/// (and every floating point sum) is the same for any thread count.
constexpr int64_t kChunkSize = 4096;

/// threads <= 0 means one per hardware thread.
inline int resolve_threads(int threads) {
    if (threads > 0) {
        return threads;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates body(acc, i) for i in [0, n) and folds the per-chunk accumulators in chunk order with
/// merge(total, chunk). If bodies throw, the exception from the lowest failing chunk is rethrown.
template <typename Acc, typename Body, typename Merge>
Acc parallel_reduce(int64_t n, int threads, const Acc &init, Body body, Merge merge) {
    int64_t chunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<Acc> partial(static_cast<size_t>(chunks), init);
    std::vector<std::exception_ptr> errors(static_cast<size_t>(chunks));
    std::atomic<int64_t> next{0};
    auto worker = [&] {
        while (true) {
            int64_t c = next.fetch_add(1);
            if (c >= chunks) {
                return;
            }
            try {
                int64_t end = std::min(n, (c + 1) * kChunkSize);
                for (int64_t i = c * kChunkSize; i < end; i++) {
                    body(partial[c], i);
                }
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };
    int workers = static_cast<int>(std::min<int64_t>(resolve_threads(threads), std::max<int64_t>(chunks, 1)));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; w++) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    Acc total = init;
    for (const auto &p : partial) {
        merge(total, p);
    }
    return total;
}

/// Fills out[i] = f(i) in parallel.
template <typename T, typename F>
std::vector<T> parallel_map(int64_t n, int threads, F f) {
    std::vector<T> out(static_cast<size_t>(n));
    parallel_reduce(
        n, threads, 0, [&](int &, int64_t i) { out[i] = f(i); }, [](int &, int) {});
    return out;
}

}  // namespace qtail

#endif
