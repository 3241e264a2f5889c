#include "wfusion/strategy.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace wfusion {

std::string_view to_string(RecyclePolicy p) { return p == RecyclePolicy::Discard ? "discard" : "reuse"; }

std::string_view to_string(PairingStrategy s) {
    return s == PairingStrategy::BalancedTree ? "balanced-tree" : "incremental";
}

namespace {

std::string lowered(std::string_view text) {
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

RecyclePolicy parse_policy(std::string_view text) {
    const auto s = lowered(text);
    if (s == "discard") return RecyclePolicy::Discard;
    if (s == "reuse") return RecyclePolicy::Reuse;
    throw std::invalid_argument("unknown recycle policy '" + std::string(text) + "' (expected discard or reuse)");
}

PairingStrategy parse_strategy(std::string_view text) {
    const auto s = lowered(text);
    if (s == "balanced-tree" || s == "balanced") return PairingStrategy::BalancedTree;
    if (s == "incremental") return PairingStrategy::Incremental;
    throw std::invalid_argument("unknown strategy '" + std::string(text) +
                                "' (expected balanced-tree or incremental)");
}

// ---------- closed forms ----------

namespace {

void check_domain(int n, int m) {
    if (n < 2 || m < 2) {
        throw std::invalid_argument("success probability needs n, m >= 2 (minimum size 2)");
    }
}

}  // namespace

Rational p_fg(int n, int m) {
    check_domain(n, m);
    return {static_cast<std::int64_t>(n) + m - 2, static_cast<std::int64_t>(n) * m};
}

Rational p_fgf(int n, int m) {
    check_domain(n, m);
    return {static_cast<std::int64_t>(n) + m - 1, static_cast<std::int64_t>(n) * m};
}

Rational p_success(int n, int m, GateKind gate) { return gate == GateKind::FG ? p_fg(n, m) : p_fgf(n, m); }

const std::vector<LiteratureConstant>& literature_constants() {
    static const std::vector<LiteratureConstant> table{
        {"fock-state", "W3 from a single photon and a Fock state", 3, 16},
        {"single-photon-bell-pair", "W3 from a single photon and a Bell pair", 3, 10},
        {"two-bell-experimental", "W3 from two Bell states (experimental)", 3, 27},
        {"fredkin-fusion", "W3 from two Bell states and one ancilla photon via Fredkin-assisted fusion", 3, 4},
    };
    return table;
}

const LiteratureConstant& literature_constant(std::string_view key) {
    for (const auto& c : literature_constants()) {
        if (c.key == key) return c;
    }
    throw std::invalid_argument("unknown literature constant '" + std::string(key) + "'");
}

const LiteratureConstant& fg_seed_scheme() { return literature_constant("single-photon-bell-pair"); }

void CostModel::validate() const {
    if (!(bell_pair_cost >= 0.0) || !(ancilla_cost >= 0.0)) {
        throw std::invalid_argument("primitive costs must be nonnegative");
    }
}

// ---------- growth plan ----------

namespace {

int gain(GateKind gate) { return gate == GateKind::FG ? 2 : 1; }

// Smallest state that can serve as a trunk or partner and still grow.
int unit_size(GateKind gate) { return gate == GateKind::FG ? 3 : 2; }

bool is_primitive(int target, GateKind gate) { return target <= unit_size(gate); }

struct BranchProbs {
    double success = 0.0;
    double recycle = 0.0;
};

BranchProbs closed_form_probs(int n, int m, GateKind gate) {
    const double ps = to_double(p_success(n, m, gate));
    const double pr = static_cast<double>(n - 1) * (m - 1) / (static_cast<double>(n) * m);
    return {ps, pr};
}

const Resources kBellPair{1.0, 0.0, 0.0};
const Resources kFreshSeedAttempt{1.0, 1.0, 1.0};  // Bell pair + photon
const Resources kHeldSeedAttempt{0.0, 1.0, 1.0};   // photon only, Bell pair already held

Resources fusion_step(GateKind gate) { return {0.0, gate == GateKind::FGF ? 1.0 : 0.0, 1.0}; }

double seed_probability() { return to_double(fg_seed_scheme().value()); }

void check_target(int target, int limit) {
    if (target < 3) throw std::invalid_argument("target size must be at least 3");
    if (target > limit) {
        throw std::invalid_argument("target size above " + std::to_string(limit) + " is not supported");
    }
}

CostResult make_result(int target, GateKind gate, const CostModel& model, PairingStrategy strategy,
                       const Resources& r) {
    CostResult out;
    out.target_size = target;
    out.strategy_name = std::string(to_string(strategy));
    out.gate = gate;
    out.policy = model.recycle_policy;
    out.expected_bell_pairs = r.bell_pairs;
    out.expected_ancillas = r.ancillas;
    out.expected_attempts = r.attempts;
    out.expected_cost_units = r.cost_units(model);
    out.reachable = std::isfinite(out.expected_cost_units) && std::isfinite(out.expected_attempts);
    return out;
}

}  // namespace

std::pair<int, int> fusion_inputs(int target, GateKind gate, PairingStrategy strategy) {
    if (is_primitive(target, gate)) {
        throw std::invalid_argument("size " + std::to_string(target) + " is a primitive for gate " +
                                    std::string(to_string(gate)));
    }
    const int g = gain(gate);
    if (strategy == PairingStrategy::BalancedTree) {
        const int total = target + g;
        return {(total + 1) / 2, total / 2};
    }
    return {target - 1, unit_size(gate)};
}

// ---------- Discard: closed recursion ----------

namespace {

class DiscardRecursion {
public:
    DiscardRecursion(GateKind gate, PairingStrategy strategy) : gate_(gate), strategy_(strategy) {}

    Resources cost(int size) {
        if (auto it = memo_.find(size); it != memo_.end()) return it->second;
        Resources r;
        if (size == 2) {
            r = kBellPair;
        } else if (gate_ == GateKind::FG && size == 3) {
            r = (1.0 / seed_probability()) * kFreshSeedAttempt;
        } else {
            const auto [n, m] = fusion_inputs(size, gate_, strategy_);
            const double p = to_double(p_success(n, m, gate_));
            r = (1.0 / p) * (cost(n) + cost(m) + fusion_step(gate_));
        }
        memo_.emplace(size, r);
        return r;
    }

private:
    GateKind gate_;
    PairingStrategy strategy_;
    std::map<int, Resources> memo_;
};

// ---------- trunk chain, solved by value iteration ----------

class TrunkChain {
public:
    TrunkChain(GateKind gate, PairingStrategy strategy, RecyclePolicy policy)
        : gate_(gate), strategy_(strategy), policy_(policy) {}

    /// Expected resources to go from holding W_k (k = 0: nothing) to W_target.
    const std::vector<Resources>& values(int target) {
        if (auto it = chains_.find(target); it != chains_.end()) return it->second;
        solve(target);
        return chains_.at(target);
    }

    bool converged() const { return converged_; }
    int sweeps() const { return sweeps_; }

private:
    Resources from_scratch(int size) {
        if (size == 2) return kBellPair;
        return values(size)[0];
    }

    void solve(int target) {
        const int trunk_min = unit_size(gate_);
        const bool primitive = is_primitive(target, gate_);
        int planned = target;
        if (!primitive) {
            planned = fusion_inputs(target, gate_, strategy_).first;
            if (planned > trunk_min) values(planned);
            for (int k = planned; k < target; ++k) {
                const int partner = target + gain(gate_) - k;
                if (partner > 2) values(partner);
            }
        }
        const std::vector<Resources>* grow_to_planned = (!primitive && planned > trunk_min) ? &chains_.at(planned) : nullptr;

        std::vector<Resources> v(static_cast<std::size_t>(target) + 1);
        const Resources step = fusion_step(gate_);
        const double q = seed_probability();
        constexpr int kMaxSweeps = 1'000'000;
        int sweep = 0;
        bool done = false;
        for (; sweep < kMaxSweeps && !done; ++sweep) {
            double worst = 0.0;
            for (int k = 0; k < target; ++k) {
                Resources next;
                if (k < trunk_min) {
                    if (gate_ == GateKind::FGF) {
                        next = kBellPair + v[2];
                    } else {
                        const Resources& pay = (k == 2) ? kHeldSeedAttempt : kFreshSeedAttempt;
                        next = pay + q * v[3] + (1.0 - q) * v[0];
                    }
                } else if (k < planned) {
                    next = (*grow_to_planned)[static_cast<std::size_t>(k)] + v[static_cast<std::size_t>(planned)];
                } else {
                    const int partner = target + gain(gate_) - k;
                    const BranchProbs p = closed_form_probs(k, partner, gate_);
                    const double pf = 1.0 - p.success - p.recycle;
                    const Resources& after_recycle =
                        policy_ == RecyclePolicy::Reuse ? v[static_cast<std::size_t>(k - 1)] : v[0];
                    next = from_scratch(partner) + step + p.recycle * after_recycle + pf * v[0];
                }
                auto& cur = v[static_cast<std::size_t>(k)];
                for (auto [a, b] : {std::pair{cur.bell_pairs, next.bell_pairs}, std::pair{cur.ancillas, next.ancillas},
                                    std::pair{cur.attempts, next.attempts}}) {
                    if (b != 0.0) worst = std::max(worst, std::abs(b - a) / std::abs(b));
                }
                cur = next;
                if (!std::isfinite(cur.bell_pairs) || cur.bell_pairs > 1e300 || !std::isfinite(cur.attempts)) {
                    converged_ = false;
                    done = true;
                    break;
                }
            }
            if (worst < kValueIterationTolerance) done = true;
        }
        if (!done) converged_ = false;
        sweeps_ = std::max(sweeps_, sweep);
        chains_.emplace(target, std::move(v));
    }

    GateKind gate_;
    PairingStrategy strategy_;
    RecyclePolicy policy_;
    std::map<int, std::vector<Resources>> chains_;
    bool converged_ = true;
    int sweeps_ = 0;
};

}  // namespace

CostResult expected_cost_value_iteration(int target, GateKind gate, const CostModel& model,
                                         PairingStrategy strategy) {
    model.validate();
    check_target(target, kMaxCostTarget);
    TrunkChain chain(gate, strategy, model.recycle_policy);
    const Resources r = chain.values(target)[0];
    CostResult out = make_result(target, gate, model, strategy, r);
    out.iterations = chain.sweeps();
    if (!chain.converged()) out.reachable = false;
    return out;
}

CostResult expected_cost(int target, GateKind gate, const CostModel& model, PairingStrategy strategy) {
    model.validate();
    check_target(target, kMaxCostTarget);
    if (model.recycle_policy == RecyclePolicy::Reuse) {
        return expected_cost_value_iteration(target, gate, model, strategy);
    }
    DiscardRecursion rec(gate, strategy);
    return make_result(target, gate, model, strategy, rec.cost(target));
}

// ---------- Monte Carlo ----------

double McStats::cost_standard_error() const {
    return trials > 0 ? std::sqrt(var_cost_units / static_cast<double>(trials)) : 0.0;
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
    // splitmix64 finalizer over (seed, block)
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (block + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

struct RunningStats {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& o) {
        if (o.count == 0.0) return;
        const double total = count + o.count;
        const double d = o.mean - mean;
        mean += d * o.count / total;
        m2 += o.m2 + d * d * count * o.count / total;
        count = total;
    }

    double variance() const { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }
};

struct BlockResult {
    RunningStats bell, ancillas, attempts, cost;
    std::uint64_t fusion_attempts = 0;
    std::uint64_t fusion_successes = 0;
};

using BranchTable = std::map<std::pair<int, int>, BranchProbs>;

// Every (trunk, partner) pair the chain can fuse on the way to `target`.
void collect_pairs(int target, GateKind gate, PairingStrategy strategy, std::set<int>& seen,
                   std::set<std::pair<int, int>>& pairs) {
    if (is_primitive(target, gate) || !seen.insert(target).second) return;
    const int planned = fusion_inputs(target, gate, strategy).first;
    collect_pairs(planned, gate, strategy, seen, pairs);
    for (int k = planned; k < target; ++k) {
        const int partner = target + gain(gate) - k;
        pairs.insert({k, partner});
        collect_pairs(partner, gate, strategy, seen, pairs);
    }
}

BranchTable simulated_branch_table(int target, GateKind gate, PairingStrategy strategy) {
    std::set<int> seen;
    std::set<std::pair<int, int>> pairs;
    collect_pairs(target, gate, strategy, seen, pairs);
    BranchTable table;
    for (const auto& [n, m] : pairs) {
        const FusionReport r = fuse(n, m, gate);
        table.emplace(std::pair{n, m}, BranchProbs{r.p_success, r.p_recycle});
    }
    return table;
}

class GrowthSampler {
public:
    GrowthSampler(GateKind gate, PairingStrategy strategy, RecyclePolicy policy, const BranchTable& table,
                  std::uint64_t seed)
        : gate_(gate), strategy_(strategy), policy_(policy), table_(table), rng_(seed) {}

    void grow(int target, int held, Resources& spent) {
        const int trunk_min = unit_size(gate_);
        int k = held;
        while (k < target) {
            if (k < trunk_min) {
                if (gate_ == GateKind::FGF) {
                    spent += kBellPair;
                    k = 2;
                } else {
                    spent += (k == 2) ? kHeldSeedAttempt : kFreshSeedAttempt;
                    k = uniform() < seed_probability() ? 3 : 0;
                }
                continue;
            }
            const int planned = fusion_inputs(target, gate_, strategy_).first;
            if (k < planned) {
                grow(planned, k, spent);
                k = planned;
                continue;
            }
            const int partner = target + gain(gate_) - k;
            grow(partner, 0, spent);
            spent += fusion_step(gate_);
            ++attempts_;
            const BranchProbs& p = table_.at({k, partner});
            const double u = uniform();
            if (u < p.success) {
                ++successes_;
                k = target;
            } else if (u < p.success + p.recycle && policy_ == RecyclePolicy::Reuse) {
                k = k - 1;
            } else {
                k = 0;
            }
        }
    }

    std::uint64_t attempts() const { return attempts_; }
    std::uint64_t successes() const { return successes_; }

private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    GateKind gate_;
    PairingStrategy strategy_;
    RecyclePolicy policy_;
    const BranchTable& table_;
    std::mt19937_64 rng_;
    std::uint64_t attempts_ = 0;
    std::uint64_t successes_ = 0;
};

}  // namespace

McStats monte_carlo_growth(int target, GateKind gate, const CostModel& model, PairingStrategy strategy,
                           std::uint64_t trials, std::uint64_t seed, unsigned threads) {
    model.validate();
    if (trials == 0) throw std::invalid_argument("Monte Carlo needs at least one trial");
    check_target(target, kMaxMonteCarloTarget);

    const BranchTable table = simulated_branch_table(target, gate, strategy);
    const std::uint64_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
    std::vector<BlockResult> results(blocks);

    const auto run_block = [&](std::uint64_t b) {
        GrowthSampler sampler(gate, strategy, model.recycle_policy, table, block_seed(seed, b));
        BlockResult& out = results[b];
        const std::uint64_t begin = b * kTrialsPerBlock;
        const std::uint64_t end = std::min(trials, begin + kTrialsPerBlock);
        for (std::uint64_t t = begin; t < end; ++t) {
            Resources spent;
            sampler.grow(target, 0, spent);
            out.bell.add(spent.bell_pairs);
            out.ancillas.add(spent.ancillas);
            out.attempts.add(spent.attempts);
            out.cost.add(spent.cost_units(model));
        }
        out.fusion_attempts = sampler.attempts();
        out.fusion_successes = sampler.successes();
    };

    unsigned workers = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t b = next++; b < blocks; b = next++) run_block(b);
            });
        }
    }

    // Merge in block order so the result is independent of scheduling.
    BlockResult total;
    for (const auto& r : results) {
        total.bell.merge(r.bell);
        total.ancillas.merge(r.ancillas);
        total.attempts.merge(r.attempts);
        total.cost.merge(r.cost);
        total.fusion_attempts += r.fusion_attempts;
        total.fusion_successes += r.fusion_successes;
    }

    McStats s;
    s.trials = trials;
    s.seed = seed;
    s.fusion_attempts = total.fusion_attempts;
    s.fusion_successes = total.fusion_successes;
    s.success_rate = total.fusion_attempts > 0
                         ? static_cast<double>(total.fusion_successes) / static_cast<double>(total.fusion_attempts)
                         : 0.0;
    s.mean_bell_pairs = total.bell.mean;
    s.var_bell_pairs = total.bell.variance();
    s.mean_ancillas = total.ancillas.mean;
    s.var_ancillas = total.ancillas.variance();
    s.mean_attempts = total.attempts.mean;
    s.var_attempts = total.attempts.variance();
    s.mean_cost_units = total.cost.mean;
    s.var_cost_units = total.cost.variance();
    s.confidence_halfwidth_95 = 1.96 * s.cost_standard_error();
    return s;
}

double discrepancy_in_standard_errors(const CostResult& analytic, const McStats& mc) {
    const double se = mc.cost_standard_error();
    const double diff = mc.mean_cost_units - analytic.expected_cost_units;
    if (se == 0.0) return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
    return diff / se;
}

}  // namespace wfusion
