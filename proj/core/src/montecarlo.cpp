#include "entpack/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <vector>

#include "entpack/error.hpp"
#include "entpack/parallel.hpp"
#include "entpack/policies.hpp"
#include "entpack/transitions.hpp"

namespace entpack {

__extension__ typedef unsigned __int128 u128;

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::int64_t kBlock = 1024;

}  // namespace

CounterRng::CounterRng(std::uint64_t master_seed, std::uint64_t stream) noexcept
    : key_(mix64(mix64(master_seed) ^ mix64(stream * kGolden + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t CounterRng::next() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

TablePolicy::TablePolicy(Policy policy, StateIndexer indexer)
    : policy_(std::move(policy)), indexer_(std::move(indexer)) {
    if (policy_.size() != indexer_.size()) {
        throw ContractViolation("policy size does not match the state indexer");
    }
}

std::size_t TablePolicy::choose(std::span<const int> ttls, CounterRng& rng) const {
    if (indexer_.reduced()) ttls = ttls.first(static_cast<std::size_t>(viable_count(ttls, indexer_.n())));
    const std::size_t id = indexer_.rank(ttls);
    if (policy_.is_deterministic()) return static_cast<std::size_t>(policy_.actions()[id]);
    const auto dist = policy_.distribution(id);
    const double u = rng.uniform();
    double cumulative = 0.0;
    for (std::size_t a = 0; a < dist.size(); ++a) {
        cumulative += dist[a];
        if (u < cumulative) return a;
    }
    // Rounding left u above the final cumulative sum.
    for (std::size_t a = dist.size(); a-- > 0;) {
        if (dist[a] > 0.0) return a;
    }
    return 0;
}

HeuristicRule::HeuristicRule(int n, ActionSpace actions, std::size_t empty_action)
    : n_(n), actions_(std::move(actions)), empty_action_(empty_action) {
    if (empty_action_ >= actions_.size()) throw ContractViolation("empty action out of range");
}

std::size_t HeuristicRule::choose(std::span<const int> ttls, CounterRng&) const {
    return heuristic_action(ttls, n_, actions_, empty_action_);
}

std::int64_t simulate_episode(const EpisodePolicy& policy, const ActionSpace& actions, int n, CounterRng& rng,
                              std::int64_t step_cap) {
    std::vector<int> links;
    links.reserve(static_cast<std::size_t>(n) + 1);
    for (std::int64_t t = 1; t <= step_cap; ++t) {
        const Action& a = actions[policy.choose(links, rng)];
        const bool success = rng.uniform() < a.p;
        age_links(links);
        if (success) {
            insert_link(links, a.ttl);
            if (static_cast<int>(links.size()) >= n) return t;
        }
    }
    throw StepCapError("episode exceeded the step cap of " + std::to_string(step_cap), 0);
}

SimResult estimate(const EpisodePolicy& policy, const ActionSpace& actions, int n, std::int64_t episodes,
                   std::uint64_t seed, const SimOptions& options) {
    if (episodes < 2) throw DomainError("estimate needs at least 2 episodes");

    const auto blocks = static_cast<std::size_t>((episodes + kBlock - 1) / kBlock);
    struct BlockTally {
        std::uint64_t sum = 0;
        u128 sum_sq = 0;
        std::int64_t completed = 0;
        bool capped = false;
        std::map<std::int64_t, std::int64_t> histogram;
    };
    std::vector<BlockTally> tallies(blocks);
    std::atomic<bool> abort{false};

    parallel_chunks(blocks, blocks, options.workers, [&](std::size_t b, std::size_t, std::size_t) {
        BlockTally& tally = tallies[b];
        const std::int64_t first = static_cast<std::int64_t>(b) * kBlock;
        const std::int64_t last = std::min(episodes, first + kBlock);
        for (std::int64_t e = first; e < last && !abort.load(std::memory_order_relaxed); ++e) {
            CounterRng rng(seed, static_cast<std::uint64_t>(e));
            std::int64_t t = 0;
            try {
                t = simulate_episode(policy, actions, n, rng, options.step_cap);
            } catch (const StepCapError&) {
                tally.capped = true;
                abort.store(true, std::memory_order_relaxed);
                return;
            }
            const auto ut = static_cast<std::uint64_t>(t);
            tally.sum += ut;
            tally.sum_sq += static_cast<u128>(ut) * ut;
            ++tally.completed;
            if (options.keep_histogram) ++tally.histogram[t];
        }
    });

    // Exact integer accumulation keeps the result independent of scheduling.
    u128 sum = 0;
    u128 sum_sq = 0;
    std::int64_t completed = 0;
    bool capped = false;
    SimResult result;
    for (const BlockTally& tally : tallies) {
        sum += tally.sum;
        sum_sq += tally.sum_sq;
        completed += tally.completed;
        capped = capped || tally.capped;
        for (const auto& [t, c] : tally.histogram) result.histogram[t] += c;
    }
    if (capped) {
        throw StepCapError("an episode exceeded the step cap of " + std::to_string(options.step_cap) + " after " +
                               std::to_string(completed) + " completed episodes",
                           completed);
    }

    const auto count = static_cast<long double>(episodes);
    const long double mean = static_cast<long double>(sum) / count;
    const long double centered = static_cast<long double>(sum_sq) - static_cast<long double>(sum) * mean;
    const long double variance = std::max<long double>(0.0L, centered / (count - 1.0L));

    result.episodes = episodes;
    result.mean = static_cast<double>(mean);
    result.std_error = static_cast<double>(std::sqrt(variance / count));
    result.ci3 = 3.0 * result.std_error;
    result.seed = seed;
    return result;
}

}  // namespace entpack
