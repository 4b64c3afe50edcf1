#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "entpack/model.hpp"

namespace entpack {

/// Named parameter regime with the raw hardware quantities it derives from:
/// gamma = 2M / N and lambda = 1 / (2 p_det M).
struct RegimePreset {
    std::string name;
    double memory_lifetime = 0.0;  ///< N, in single-click executions
    double p_det = 0.0;            ///< photon detection probability
    int batch_size = 0;            ///< M, executions per time step
    double f_app = 0.5;
    double gamma = 0.0;
    double lambda = 0.0;
    std::optional<double> q;

    double derived_gamma() const { return 2.0 * batch_size / memory_lifetime; }
    double derived_lambda() const { return 1.0 / (2.0 * p_det * batch_size); }
    bool has_raw_parameters() const { return memory_lifetime > 0.0 && p_det > 0.0 && batch_size > 0; }

    ModelParams params(int n) const { return ModelParams{gamma, f_app, n, lambda, q}; }
    int t_max() const { return max_ttl(gamma, f_app); }
};

/// gamma = 0.19, lambda = 2, f_app = 1/2 (t_max = 6).
RegimePreset near_term();
/// gamma = 0.1, lambda = 1, f_app = 1/2 (t_max = 11).
RegimePreset far_term();
/// Derives gamma and lambda from raw hardware parameters.
RegimePreset custom_regime(double memory_lifetime, double p_det, int batch_size, double f_app);
/// Custom regime given directly by its rates.
RegimePreset custom_rates(double gamma, double lambda, double f_app);

/// "near-term" or "far-term"; throws DomainError otherwise.
RegimePreset regime_by_name(std::string_view name);

}  // namespace entpack
