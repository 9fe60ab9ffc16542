/*
 * Copyright 2026 The Tascade Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Sequential reference implementations used to verify simulated results.
// They share no code with the task handlers.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tascade/common.hpp"
#include "tascade/graph.hpp"

namespace tascade::reference {

/// Dijkstra distances from `source`; unreachable vertices hold kInfinity.
/// Unweighted graphs use weight 1.
std::vector<Word> sssp(const CsrGraph& g, std::uint64_t source);

/// Breadth-first levels from `source`.
std::vector<Word> bfs(const CsrGraph& g, std::uint64_t source);

/// Union-find over the edges taken as undirected; label = smallest vertex id
/// in the component.
std::vector<Word> wcc(const CsrGraph& g);

/// Fixed-point (Q16.16) PageRank, `epochs` synchronous iterations.
std::vector<Word> pagerank(const CsrGraph& g, std::uint32_t epochs, std::uint32_t damping_pct);

/// Row scatter y[c] += A[r][c] * x[r] over CSR rows, mod 2^32.
std::vector<Word> spmv(const CsrGraph& g, std::span<const Word> x);

std::vector<Word> histogram(std::span<const std::uint64_t> input, std::uint64_t bins);

/// Index of the first element where the arrays differ (size mismatch counts
/// at the shorter length), or nullopt when equal.
std::optional<std::size_t> first_divergence(std::span<const Word> got, std::span<const Word> want);

}  // namespace tascade::reference
