#include "entpack/policy_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "entpack/error.hpp"

namespace entpack {

using ordered_json = nlohmann::ordered_json;

std::string policy_to_json(const PolicyFile& file, const StateSpace& space) {
    const PolicyMeta& m = file.meta;
    if (file.policy.size() != space.size()) throw ContractViolation("policy does not match the state space");

    ordered_json meta;
    meta["regime"] = m.regime;
    meta["gamma"] = m.gamma;
    meta["lambda"] = m.lambda;
    meta["f_app"] = m.f_app;
    meta["q"] = m.q ? ordered_json(*m.q) : ordered_json(nullptr);
    meta["n"] = m.n;
    meta["t_max"] = m.t_max;
    meta["reduced"] = m.reduced;
    meta["method"] = m.method;
    meta["kind"] = file.policy.is_deterministic() ? "deterministic" : "stochastic";
    meta["tol"] = m.tol;
    meta["seed"] = m.seed;
    meta["expected_time"] = m.expected_time ? ordered_json(*m.expected_time) : ordered_json(nullptr);
    meta["evaluation_kind"] = m.evaluation_kind;
    meta["empty_action"] = m.empty_action ? ordered_json(*m.empty_action) : ordered_json(nullptr);
    meta["empty_action_tie"] = m.empty_action_tie;
    ordered_json actions = ordered_json::array();
    for (const Action& a : m.actions) actions.push_back({{"p", a.p}, {"f", a.f}, {"ttl", a.ttl}});
    meta["actions"] = std::move(actions);

    ordered_json table = ordered_json::object();
    for (std::size_t s = 0; s < space.size(); ++s) {
        const std::string key = space.state(s).key();
        if (file.policy.is_deterministic()) {
            table[key] = file.policy.action(s);
        } else {
            const auto dist = file.policy.distribution(s);
            table[key] = std::vector<double>(dist.begin(), dist.end());
        }
    }
    ordered_json doc;
    doc["meta"] = std::move(meta);
    doc["policy"] = std::move(table);
    return doc.dump(2);
}

PolicyFile policy_from_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("policy file is not valid JSON: ") + e.what());
    }
    try {
        const auto& meta = doc.at("meta");
        PolicyFile file;
        PolicyMeta& m = file.meta;
        m.regime = meta.value("regime", std::string("custom"));
        m.gamma = meta.at("gamma").get<double>();
        m.lambda = meta.at("lambda").get<double>();
        m.f_app = meta.at("f_app").get<double>();
        if (meta.contains("q") && !meta["q"].is_null()) m.q = meta["q"].get<double>();
        m.n = meta.at("n").get<int>();
        m.t_max = meta.at("t_max").get<int>();
        m.reduced = meta.value("reduced", false);
        m.method = meta.value("method", std::string());
        m.tol = meta.value("tol", 1e-10);
        m.seed = meta.value("seed", std::uint64_t{0});
        if (meta.contains("expected_time") && !meta["expected_time"].is_null()) {
            m.expected_time = meta["expected_time"].get<double>();
        }
        m.evaluation_kind = meta.value("evaluation_kind", std::string());
        if (meta.contains("empty_action") && !meta["empty_action"].is_null()) {
            m.empty_action = meta["empty_action"].get<std::size_t>();
        }
        m.empty_action_tie = meta.value("empty_action_tie", false);
        for (const auto& a : meta.at("actions")) {
            m.actions.push_back(Action{a.at("p").get<double>(), a.at("f").get<double>(), a.at("ttl").get<int>()});
        }
        const bool stochastic = meta.value("kind", std::string("deterministic")) == "stochastic";

        const StateSpace space = file.space();
        const auto& table = doc.at("policy");
        if (table.size() != space.size()) {
            throw DomainError("policy lists " + std::to_string(table.size()) + " states, space has " +
                              std::to_string(space.size()));
        }
        const std::size_t actions = m.actions.size();
        std::vector<std::int32_t> chosen(space.size(), -1);
        std::vector<double> rows(stochastic ? space.size() * actions : 0);
        std::vector<bool> seen(space.size(), false);
        for (const auto& [key, value] : table.items()) {
            const auto id = space.find(State::from_key(key));
            if (!id) throw DomainError("state key '" + key + "' is not in the described space");
            seen[*id] = true;
            if (stochastic) {
                const auto dist = value.get<std::vector<double>>();
                if (dist.size() != actions) throw DomainError("distribution for '" + key + "' has wrong length");
                std::copy(dist.begin(), dist.end(), rows.begin() + static_cast<std::ptrdiff_t>(*id * actions));
            } else {
                chosen[*id] = value.get<std::int32_t>();
            }
        }
        file.policy = stochastic ? Policy::stochastic(std::move(rows), actions)
                                 : Policy::deterministic(std::move(chosen), actions);
        return file;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed policy file: ") + e.what());
    }
}

void write_policy_file(const std::filesystem::path& path, const PolicyFile& file, const StateSpace& space) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << policy_to_json(file, space) << '\n';
}

PolicyFile read_policy_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return policy_from_json(buffer.str());
}

}  // namespace entpack
