#include "eonspectra/runprob.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>

#include "eonspectra/error.hpp"

namespace eonspectra {

namespace {

constexpr int kOracleMaxSlots = 20;

void check_slots(int slots, int fiber_slots) {
  if (slots < 1) {
    throw Error(ErrorCode::invalid_argument, "run length must be at least 1");
  }
  if (fiber_slots < 0) {
    throw Error(ErrorCode::invalid_argument, "slot count must be nonnegative");
  }
}

// Fills table[0..fiber_slots] with Pr(slots, F, rho) for every F.
void extend_run_table(std::vector<double>& table, int slots, int fiber_slots,
                      double rho) {
  const auto first = static_cast<int>(table.size());
  if (first > fiber_slots) return;
  table.resize(static_cast<std::size_t>(fiber_slots) + 1);

  const long double r = rho;
  const long double q = 1.0L - r;
  // weight[j-1] = rho^{j-1} (1 - rho)
  std::vector<long double> weight(static_cast<std::size_t>(slots));
  long double pw = 1.0L;
  for (int j = 0; j < slots; ++j) {
    weight[static_cast<std::size_t>(j)] = pw * q;
    pw *= r;
  }
  const long double all_free = pw;

  for (int f = first; f <= fiber_slots; ++f) {
    if (f < slots) {
      table[static_cast<std::size_t>(f)] = 0.0;
      continue;
    }
    long double acc = all_free;
    for (int j = 1; j <= slots; ++j) {
      acc += table[static_cast<std::size_t>(f - j)] * weight[static_cast<std::size_t>(j - 1)];
    }
    double v = static_cast<double>(acc);
    table[static_cast<std::size_t>(f)] = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  }
}

// census[longest][free] = number of F-slot masks with that longest free run
// and that many free slots.
using Census = std::vector<std::vector<std::uint64_t>>;

Census build_census(int fiber_slots) {
  Census census(static_cast<std::size_t>(fiber_slots) + 1,
                std::vector<std::uint64_t>(static_cast<std::size_t>(fiber_slots) + 1, 0));
  const std::uint32_t masks = 1u << fiber_slots;
  for (std::uint32_t m = 0; m < masks; ++m) {
    int longest = 0;
    int run = 0;
    for (int b = 0; b < fiber_slots; ++b) {
      if (m & (1u << b)) {
        ++run;
        if (run > longest) longest = run;
      } else {
        run = 0;
      }
    }
    ++census[static_cast<std::size_t>(longest)][static_cast<std::size_t>(std::popcount(m))];
  }
  return census;
}

const Census& census_for(int fiber_slots) {
  static std::mutex mutex;
  static std::map<int, Census> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(fiber_slots);
  if (it == cache.end()) it = cache.emplace(fiber_slots, build_census(fiber_slots)).first;
  return it->second;
}

}  // namespace

double checked_probability(double p, const char* what) {
  if (std::isnan(p) || p < -1e-12 || p > 1.0 + 1e-12) {
    throw Error(ErrorCode::invalid_argument, std::string(what) + " outside [0,1]");
  }
  return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

double run_prob(int slots, int fiber_slots, double rho) {
  check_slots(slots, fiber_slots);
  rho = checked_probability(rho, "free-slot probability");
  if (fiber_slots < slots) return 0.0;
  std::vector<double> table;
  extend_run_table(table, slots, fiber_slots, rho);
  return table.back();
}

double run_prob_oracle(int slots, int fiber_slots, double rho) {
  check_slots(slots, fiber_slots);
  if (fiber_slots > kOracleMaxSlots) {
    throw Error(ErrorCode::guard_exceeded, "oracle enumeration limited to F <= 20");
  }
  rho = checked_probability(rho, "free-slot probability");
  if (fiber_slots < slots) return 0.0;

  // Masks with the same number of free slots have the same probability, so
  // the 2^F terms are summed per (longest run, free count) class.
  const Census& census = census_for(fiber_slots);
  long double total = 0.0L;
  for (int longest = slots; longest <= fiber_slots; ++longest) {
    for (int k = 0; k <= fiber_slots; ++k) {
      const std::uint64_t n = census[static_cast<std::size_t>(longest)][static_cast<std::size_t>(k)];
      if (n == 0) continue;
      total += static_cast<long double>(n) * std::pow(static_cast<long double>(rho), k) *
               std::pow(1.0L - rho, fiber_slots - k);
    }
  }
  return static_cast<double>(total);
}

RunProbTable::RunProbTable(double rho)
    : rho_(checked_probability(rho, "free-slot probability")) {}

double RunProbTable::operator()(int slots, int fiber_slots) {
  check_slots(slots, fiber_slots);
  if (fiber_slots < slots) return 0.0;
  std::vector<double>& table = by_slots_[slots];
  extend_run_table(table, slots, fiber_slots, rho_);
  return table[static_cast<std::size_t>(fiber_slots)];
}

}  // namespace eonspectra
