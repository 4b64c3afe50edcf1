#pragma once

#include <cstdint>
#include <optional>

namespace entpack {

/// Physical parameters of the link-generation process.
///
/// `q` caps the success probability of generated links. When unset, the cap
/// is the supremum 1 - exp((f_app - 1) / lambda), i.e. every fidelity above
/// f_app is reachable.
struct ModelParams {
    double gamma = 0.0;    ///< decoherence rate per time step
    double f_app = 0.5;    ///< minimum fidelity an application accepts
    int n = 2;             ///< links required simultaneously
    double lambda = 1.0;   ///< batched single-click trade-off parameter
    std::optional<double> q;
};

/// Throws DomainError on out-of-range fields and InfeasibleError if n > max_ttl.
void validate(const ModelParams& params);

/// Fidelity of a link of initial fidelity `f` after `t` steps of depolarizing decay.
double fidelity_after(double f, std::int64_t t, double gamma);

/// Real-valued time until fidelity `f` decays to `f_app`.
double decay_time(double f, double gamma, double f_app);

/// Integer time-to-live of a fresh link with fidelity f > f_app.
///
/// Decay times within 1e-9 of an integer are snapped to it before the
/// ceiling is applied.
int ttl_of_fidelity(double f, double gamma, double f_app);
int ttl_of_fidelity(double f, const ModelParams& params);

/// TTL of a perfect (f = 1) link: the largest TTL any action can produce.
int max_ttl(const ModelParams& params);
int max_ttl(double gamma, double f_app);

inline constexpr double kIntegerSnap = 1e-9;

}  // namespace entpack
