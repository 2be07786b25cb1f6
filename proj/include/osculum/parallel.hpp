#pragma once

#include <cstdint>

namespace osculum {

// Execution policy for the sampling kernels. Every parallel kernel has a
// serial twin that produces identical results; per-task seeding and
// order-independent reductions keep the outcome independent of scheduling.
enum class Exec { Serial, Parallel };

// Number of OpenMP threads to use, honouring the OSCULUM_THREADS env var.
int thread_cap();

// Installs the cap process-wide (call once from entry points).
void apply_thread_cap();

// splitmix64-based mixing for reproducible per-task RNG seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

} // namespace osculum
