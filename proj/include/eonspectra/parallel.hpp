#pragma once

#include <cstddef>

namespace eonspectra {

// Selects between the OpenMP kernels and the serial reference loops. Both
// paths write each result into its own slot and reduce in index order, so
// they produce bitwise identical output.
enum class Execution { serial, parallel };

// Thread cap from EONSPECTRA_THREADS (unset or invalid: OpenMP default).
int thread_cap();

// Number of threads to use for a loop of `work_items` iterations.
int threads_for(Execution mode, std::size_t work_items);

}  // namespace eonspectra
