#include "entpack/model.hpp"

#include <cmath>
#include <string>

#include "entpack/error.hpp"

namespace entpack {
namespace {

void check_rate(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError("decoherence rate must be positive, got " + std::to_string(gamma));
    }
}

void check_f_app(double f_app) {
    if (!(f_app > 0.25 && f_app < 1.0)) {
        throw DomainError("f_app must lie in (1/4, 1), got " + std::to_string(f_app));
    }
}

}  // namespace

void validate(const ModelParams& params) {
    check_rate(params.gamma);
    check_f_app(params.f_app);
    if (!(params.lambda > 0.0) || !std::isfinite(params.lambda)) {
        throw DomainError("lambda must be positive");
    }
    if (params.q) {
        const double q_sup = -std::expm1((params.f_app - 1.0) / params.lambda);
        if (!(*params.q > 0.0 && *params.q < q_sup)) {
            throw DomainError("q must lie in (0, " + std::to_string(q_sup) + "), got " +
                              std::to_string(*params.q));
        }
    }
    if (params.n < 2) {
        throw DomainError("n must be at least 2, got " + std::to_string(params.n));
    }
    const int t_max = max_ttl(params.gamma, params.f_app);
    if (params.n > t_max) {
        throw InfeasibleError("n = " + std::to_string(params.n) + " exceeds t_max = " +
                              std::to_string(t_max));
    }
}

double fidelity_after(double f, std::int64_t t, double gamma) {
    if (!(f > 0.25 && f <= 1.0)) {
        throw DomainError("fidelity must lie in (1/4, 1], got " + std::to_string(f));
    }
    check_rate(gamma);
    if (t < 0) {
        throw DomainError("elapsed steps must be non-negative");
    }
    return std::exp(-gamma * static_cast<double>(t)) * (f - 0.25) + 0.25;
}

double decay_time(double f, double gamma, double f_app) {
    check_rate(gamma);
    check_f_app(f_app);
    if (!(f > 0.25 && f <= 1.0)) {
        throw DomainError("fidelity must lie in (1/4, 1], got " + std::to_string(f));
    }
    return std::log((f - 0.25) / (f_app - 0.25)) / gamma;
}

int ttl_of_fidelity(double f, double gamma, double f_app) {
    check_f_app(f_app);
    if (!(f > f_app)) {
        throw DomainError("fidelity " + std::to_string(f) + " does not exceed f_app " +
                          std::to_string(f_app) + "; the link has no TTL");
    }
    double raw = decay_time(f, gamma, f_app);
    const double nearest = std::round(raw);
    if (std::abs(raw - nearest) <= kIntegerSnap) {
        raw = nearest;
    }
    const double ttl = std::ceil(raw);
    // f > f_app guarantees raw > 0, but snapping can pull a tiny raw to zero.
    return ttl < 1.0 ? 1 : static_cast<int>(ttl);
}

int ttl_of_fidelity(double f, const ModelParams& params) {
    return ttl_of_fidelity(f, params.gamma, params.f_app);
}

int max_ttl(double gamma, double f_app) { return ttl_of_fidelity(1.0, gamma, f_app); }

int max_ttl(const ModelParams& params) { return max_ttl(params.gamma, params.f_app); }

}  // namespace entpack
