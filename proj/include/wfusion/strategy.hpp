// strategy.hpp
// Closed-form success probabilities, published comparison constants, and the
// resource cost of growing |W_N> from Bell pairs.
//
// Cost model
// ----------
// A Bell pair (|W_2>) costs `bell_pair_cost` units and a single photon costs
// `ancilla_cost` units. FGF consumes one ancilla photon per attempt. FG cannot
// grow a state out of Bell pairs (2 + 2 - 2 = 2), so its |W_3> inputs come
// from the best prior W_3 source: one single photon plus one Bell pair, success
// 3/10, everything lost on failure.
//
// Growth is tracked on a "trunk": the W state held by the builder. To reach
// target T the pairing strategy fixes the planned trunk size n(T) and the
// partner size T + gain - k for a held trunk of size k >= n(T), where gain is 2
// for FG and 1 for FGF. Partners are always built from scratch.
//   balanced-tree: n(T) = ceil((T + gain) / 2), partner floor((T + gain) / 2)
//   incremental:   n(T) = T - 1, partner is the smallest unit that grows the
//                  trunk (a Bell pair for FGF, a |W_3> for FG)
// Failure destroys both inputs. On recycle the Discard policy drops both
// shrunken states; Reuse keeps the trunk's |W_{k-1}> and regrows it, while the
// partner's remainder is dropped.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wfusion/fusion.hpp"
#include "wfusion/rational.hpp"

namespace wfusion {

enum class RecyclePolicy { Discard, Reuse };
enum class PairingStrategy { BalancedTree, Incremental };

std::string_view to_string(RecyclePolicy p);
std::string_view to_string(PairingStrategy s);
RecyclePolicy parse_policy(std::string_view text);
PairingStrategy parse_strategy(std::string_view text);

/// (n+m-2)/(nm)
Rational p_fg(int n, int m);
/// (n+m-1)/(nm)
Rational p_fgf(int n, int m);
Rational p_success(int n, int m, GateKind gate);

struct LiteratureConstant {
    std::string key;
    std::string description;
    std::int64_t numerator = 0;
    std::int64_t denominator = 1;

    Rational value() const { return {numerator, denominator}; }
    /// Unreduced, as published (3/27 stays 3/27).
    std::string quoted() const { return std::to_string(numerator) + "/" + std::to_string(denominator); }
};

/// Documented success probabilities for preparing |W_3>; never simulated.
const std::vector<LiteratureConstant>& literature_constants();
const LiteratureConstant& literature_constant(std::string_view key);

/// Source of |W_3> states for FG: single photon + Bell pair, 3/10.
const LiteratureConstant& fg_seed_scheme();

struct CostModel {
    RecyclePolicy recycle_policy = RecyclePolicy::Discard;
    double bell_pair_cost = 1.0;
    double ancilla_cost = 0.1;

    /// Throws std::invalid_argument on negative costs.
    void validate() const;
};

struct Resources {
    double bell_pairs = 0.0;
    double ancillas = 0.0;
    double attempts = 0.0;

    Resources& operator+=(const Resources& o) {
        bell_pairs += o.bell_pairs;
        ancillas += o.ancillas;
        attempts += o.attempts;
        return *this;
    }
    friend Resources operator+(Resources a, const Resources& b) { return a += b; }
    friend Resources operator*(double s, Resources a) {
        a.bell_pairs *= s;
        a.ancillas *= s;
        a.attempts *= s;
        return a;
    }
    double cost_units(const CostModel& model) const {
        return bell_pairs * model.bell_pair_cost + ancillas * model.ancilla_cost;
    }
};

struct CostResult {
    int target_size = 0;
    std::string strategy_name;
    GateKind gate = GateKind::FG;
    RecyclePolicy policy = RecyclePolicy::Discard;
    double expected_bell_pairs = 0.0;
    double expected_ancillas = 0.0;
    double expected_attempts = 0.0;  // fusion attempts plus W_3 seeding attempts
    double expected_cost_units = 0.0;
    bool reachable = true;  // false when the expectation diverges or overflows
    int iterations = 0;     // value-iteration sweeps (Reuse only)
};

inline constexpr int kMaxCostTarget = 512;
inline constexpr int kMaxMonteCarloTarget = 32;
inline constexpr double kValueIterationTolerance = 1e-10;

/// Size of the trunk the strategy fuses to reach `target`, and the partner
/// size used with it. Throws for targets that are primitives (2, or 3 for FG).
std::pair<int, int> fusion_inputs(int target, GateKind gate, PairingStrategy strategy);

/// Analytic expected resources. Discard uses the closed recursion
/// C(T) = (C(n) + C(m) + step) / p(n, m); Reuse solves the trunk Markov chain by
/// value iteration.
CostResult expected_cost(int target, GateKind gate, const CostModel& model,
                         PairingStrategy strategy = PairingStrategy::BalancedTree);

/// The trunk-chain value iteration for either policy. For Discard it must
/// agree with the closed recursion.
CostResult expected_cost_value_iteration(int target, GateKind gate, const CostModel& model,
                                         PairingStrategy strategy);

struct McStats {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t fusion_attempts = 0;
    std::uint64_t fusion_successes = 0;
    double success_rate = 0.0;  // per fusion-gate attempt
    double mean_bell_pairs = 0.0;
    double var_bell_pairs = 0.0;
    double mean_ancillas = 0.0;
    double var_ancillas = 0.0;
    double mean_attempts = 0.0;
    double var_attempts = 0.0;
    double mean_cost_units = 0.0;
    double var_cost_units = 0.0;
    double confidence_halfwidth_95 = 0.0;  // on mean_cost_units

    double cost_standard_error() const;

    friend bool operator==(const McStats&, const McStats&) = default;
};

/// Trials are split into fixed blocks; block b draws from a generator seeded
/// by (seed, b), so results do not depend on the number of worker threads.
inline constexpr std::uint64_t kTrialsPerBlock = 1024;

/// Samples complete growth runs using the simulated fusion branch
/// probabilities. `threads == 0` uses the hardware concurrency.
McStats monte_carlo_growth(int target, GateKind gate, const CostModel& model, PairingStrategy strategy,
                           std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

/// (MC mean cost - analytic cost) / standard error of the MC mean.
double discrepancy_in_standard_errors(const CostResult& analytic, const McStats& mc);

/// Generator seed for block `block` of a run seeded with `seed`.
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block);

}  // namespace wfusion
