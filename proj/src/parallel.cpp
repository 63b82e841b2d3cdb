#include "eonspectra/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

#include "eonspectra/error.hpp"

namespace eonspectra {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse error";
    case ErrorCode::duplicate_edge: return "duplicate edge";
    case ErrorCode::nonpositive_weight: return "nonpositive weight";
    case ErrorCode::missing_node: return "missing node";
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::unreachable: return "unreachable";
    case ErrorCode::guard_exceeded: return "guard exceeded";
    case ErrorCode::internal: return "internal fault";
  }
  return "unknown";
}

int thread_cap() {
  const int fallback = omp_get_max_threads();
  const char* env = std::getenv("EONSPECTRA_THREADS");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (*end != '\0' || value < 1) return fallback;
  return static_cast<int>(std::min<long>(value, 1024));
}

int threads_for(Execution mode, std::size_t work_items) {
  if (mode == Execution::serial || work_items < 2) return 1;
  return std::max(1, std::min<int>(thread_cap(), static_cast<int>(work_items)));
}

}  // namespace eonspectra
