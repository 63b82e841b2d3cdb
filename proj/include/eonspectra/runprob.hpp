#pragma once

#include <unordered_map>
#include <vector>

namespace eonspectra {

// ramp(x) = max(x, 0).
inline double ramp(double x) { return x >= 0.0 ? x : 0.0; }

/// Probability that `fiber_slots` independent slots, each free with
/// probability `rho`, contain a run of at least `slots` consecutive free
/// slots. Evaluated with the first-failure recursion
///   Pr(S,F) = sum_{j=1..S} Pr(S,F-j) rho^{j-1} (1-rho) + rho^S,
///   Pr(S,F) = 0 for F < S,
/// accumulated in extended precision. `slots` must be >= 1; `rho` more than
/// 1e-12 outside [0,1] is rejected, anything closer is clamped.
double run_prob(int slots, int fiber_slots, double rho);

/// Exact enumeration of all 2^F slot masks (F <= 20). Independent of the
/// recursion above and used to check it.
double run_prob_oracle(int slots, int fiber_slots, double rho);

/// Memo of run_prob for one fixed rho, keyed by slot count. Each entry holds
/// the whole F-prefix so lookups for smaller F are free.
class RunProbTable {
 public:
  explicit RunProbTable(double rho);

  double rho() const { return rho_; }
  double operator()(int slots, int fiber_slots);

 private:
  double rho_;
  std::unordered_map<int, std::vector<double>> by_slots_;
};

// Validates and clamps a probability argument; throws Error(invalid_argument).
double checked_probability(double p, const char* what);

}  // namespace eonspectra
