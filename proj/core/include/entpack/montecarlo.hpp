#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "entpack/actions.hpp"
#include "entpack/dp.hpp"
#include "entpack/statespace.hpp"

namespace entpack {

/// Counter-based generator: output i of stream k is a SplitMix64 finalizer
/// applied to key(seed, k) + i * golden-gamma. Streams for distinct episode
/// indices are independent of execution order.
class CounterRng {
public:
    static constexpr const char* kName = "splitmix64-counter";

    CounterRng(std::uint64_t master_seed, std::uint64_t stream) noexcept;

    std::uint64_t next() noexcept;
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Action choice during simulation, from a raw (unreduced) canonical state.
class EpisodePolicy {
public:
    virtual ~EpisodePolicy() = default;
    virtual std::size_t choose(std::span<const int> descending_ttls, CounterRng& rng) const = 0;
};

/// Looks a state up in a policy table; reduced-space tables are keyed by the viable projection.
class TablePolicy final : public EpisodePolicy {
public:
    TablePolicy(Policy policy, StateIndexer indexer);
    std::size_t choose(std::span<const int> descending_ttls, CounterRng& rng) const override;

private:
    Policy policy_;
    StateIndexer indexer_;
};

/// The heuristic rule evaluated on the fly, without a materialized state space.
class HeuristicRule final : public EpisodePolicy {
public:
    HeuristicRule(int n, ActionSpace actions, std::size_t empty_action);
    std::size_t choose(std::span<const int> descending_ttls, CounterRng& rng) const override;

private:
    int n_;
    ActionSpace actions_;
    std::size_t empty_action_;
};

struct SimOptions {
    std::int64_t step_cap = 10'000'000'000;
    int workers = 0;
    bool keep_histogram = false;
};

struct SimResult {
    std::int64_t episodes = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double ci3 = 0.0;   ///< three standard errors
    std::uint64_t seed = 0;
    std::string generator = CounterRng::kName;
    std::map<std::int64_t, std::int64_t> histogram;
};

/// Runs one episode from the empty state; returns the completion time.
/// Throws StepCapError after `step_cap` steps.
std::int64_t simulate_episode(const EpisodePolicy& policy, const ActionSpace& actions, int n, CounterRng& rng,
                              std::int64_t step_cap = SimOptions{}.step_cap);

/// Mean completion time over `episodes` independent episodes. Episode k uses
/// stream k of `seed`; the result is identical for any worker count.
SimResult estimate(const EpisodePolicy& policy, const ActionSpace& actions, int n, std::int64_t episodes,
                   std::uint64_t seed, const SimOptions& options = {});

}  // namespace entpack
