#pragma once

#include <cstdint>
#include <functional>

namespace symtan {

// Global worker budget for embarrassingly parallel loops. Results must be
// written to per-index slots so the outcome is independent of the budget.
void set_thread_budget(int n);
int thread_budget();

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body);

// Deterministic per-task seed derivation.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace symtan
