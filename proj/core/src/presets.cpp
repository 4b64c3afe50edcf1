#include "entpack/presets.hpp"

#include <cmath>

#include "entpack/error.hpp"

namespace entpack {
namespace {

void check_consistent(const RegimePreset& r) {
    if (std::abs(r.derived_gamma() - r.gamma) > 1e-12 || std::abs(r.derived_lambda() - r.lambda) > 1e-12) {
        throw ContractViolation("regime '" + r.name + "' rates disagree with its raw parameters");
    }
}

}  // namespace

RegimePreset near_term() {
    RegimePreset r;
    r.name = "near-term";
    // N = 2M / gamma exactly; the commonly quoted lifetime is ~5263.
    r.memory_lifetime = 1.0e5 / 19.0;
    r.p_det = 5e-4;
    r.batch_size = 500;
    r.f_app = 0.5;
    r.gamma = 0.19;
    r.lambda = 2.0;
    check_consistent(r);
    return r;
}

RegimePreset far_term() {
    RegimePreset r;
    r.name = "far-term";
    r.memory_lifetime = 20000.0;
    r.p_det = 5e-4;
    r.batch_size = 1000;
    r.f_app = 0.5;
    r.gamma = 0.1;
    r.lambda = 1.0;
    check_consistent(r);
    return r;
}

RegimePreset custom_regime(double memory_lifetime, double p_det, int batch_size, double f_app) {
    if (!(memory_lifetime > 0.0) || !(p_det > 0.0 && p_det <= 1.0) || batch_size < 1) {
        throw DomainError("custom regime needs N > 0, p_det in (0, 1] and M >= 1");
    }
    RegimePreset r;
    r.name = "custom";
    r.memory_lifetime = memory_lifetime;
    r.p_det = p_det;
    r.batch_size = batch_size;
    r.f_app = f_app;
    r.gamma = r.derived_gamma();
    r.lambda = r.derived_lambda();
    return r;
}

RegimePreset custom_rates(double gamma, double lambda, double f_app) {
    RegimePreset r;
    r.name = "custom";
    r.gamma = gamma;
    r.lambda = lambda;
    r.f_app = f_app;
    return r;
}

RegimePreset regime_by_name(std::string_view name) {
    if (name == "near-term") return near_term();
    if (name == "far-term") return far_term();
    throw DomainError("unknown regime '" + std::string(name) + "' (expected near-term or far-term)");
}

}  // namespace entpack
