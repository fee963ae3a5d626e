// SPDX-License-Identifier: Apache-2.0
//
// df-eval: deterministic evaluation of direction finding antenna systems
// Copyright (C) 2026 The df-eval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "dfeval/types.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dfeval
{
    // Worker count from DF_EVAL_THREADS, else hardware concurrency (at least 1)
    unsigned default_worker_count();

    // Runs body(i) for i in [0, n). Every index is processed exactly once by exactly one
    // worker; callers write results into per-index slots, so output never depends on the
    // worker count. The first exception thrown by any worker is rethrown.
    template <typename Body>
    void parallel_for(Index n, unsigned workers, Body &&body)
    {
        workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<Index>(n, 1))));
        if (workers == 1)
        {
            for (Index i = 0; i < n; ++i)
                body(i);
            return;
        }

        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
        {
            pool.emplace_back([&, w]
                              {
                                  try
                                  {
                                      for (Index i = w; i < n; i += workers)
                                          body(i);
                                  }
                                  catch (...)
                                  {
                                      std::lock_guard<std::mutex> lock(error_mutex);
                                      if (!error)
                                          error = std::current_exception();
                                  } });
        }
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }

} // namespace dfeval
