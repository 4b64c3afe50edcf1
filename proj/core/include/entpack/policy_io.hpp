#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entpack/actions.hpp"
#include "entpack/dp.hpp"
#include "entpack/statespace.hpp"

namespace entpack {

/// Everything needed to rebuild and re-evaluate a stored policy.
struct PolicyMeta {
    std::string regime = "custom";
    double gamma = 0.0;
    double lambda = 0.0;
    double f_app = 0.5;
    std::optional<double> q;
    int n = 2;
    int t_max = 0;
    bool reduced = false;
    std::string method;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    std::vector<Action> actions;
    std::optional<double> expected_time;
    std::string evaluation_kind;
    std::optional<std::size_t> empty_action;
    bool empty_action_tie = false;
};

struct PolicyFile {
    PolicyMeta meta;
    Policy policy;

    StateSpace space() const { return StateSpace::enumerate(meta.n, meta.t_max, meta.reduced); }
    ActionSpace action_space() const { return ActionSpace::synthetic(meta.actions, meta.lambda); }
};

/// JSON document {"meta": {...}, "policy": {state key: action id | [probabilities]}}.
/// Keys are comma-joined descending TTLs, "" for the empty state.
std::string policy_to_json(const PolicyFile& file, const StateSpace& space);
/// Parses a document; every state of the described space must be present.
PolicyFile policy_from_json(std::string_view text);

void write_policy_file(const std::filesystem::path& path, const PolicyFile& file, const StateSpace& space);
PolicyFile read_policy_file(const std::filesystem::path& path);

}  // namespace entpack
