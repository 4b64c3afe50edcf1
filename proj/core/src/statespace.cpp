#include "entpack/statespace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

#include "entpack/error.hpp"

namespace entpack {

__extension__ typedef unsigned __int128 u128;


State State::canonical(std::vector<int> ttls, int t_max) {
    for (int t : ttls) {
        if (t < 1 || t > t_max) {
            throw DomainError("TTL " + std::to_string(t) + " outside [1, " +
                              std::to_string(t_max) + "]");
        }
    }
    std::sort(ttls.begin(), ttls.end(), std::greater<>{});
    return State(std::move(ttls));
}

State State::from_sorted(std::vector<int> ttls) {
    if (!std::is_sorted(ttls.begin(), ttls.end(), std::greater<>{})) {
        throw ContractViolation("State::from_sorted requires non-increasing TTLs");
    }
    if (!ttls.empty() && ttls.back() < 1) {
        throw DomainError("TTLs must be positive");
    }
    return State(std::move(ttls));
}

State State::from_key(std::string_view key) {
    std::vector<int> ttls;
    while (!key.empty()) {
        const auto comma = key.find(',');
        const auto token = key.substr(0, comma);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
            throw DomainError("malformed state key token '" + std::string(token) + "'");
        }
        ttls.push_back(value);
        if (comma == std::string_view::npos) {
            break;
        }
        key.remove_prefix(comma + 1);
        if (key.empty()) {
            throw DomainError("state key has a trailing comma");
        }
    }
    return from_sorted(std::move(ttls));
}

std::string State::key() const {
    std::string out;
    for (std::size_t i = 0; i < ttls_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(ttls_[i]);
    }
    return out;
}

State canonicalize(std::vector<int> ttls, int t_max) { return State::canonical(std::move(ttls), t_max); }

int viable_count(std::span<const int> descending_ttls, int n) {
    int count = 0;
    for (std::size_t i = 0; i < descending_ttls.size(); ++i) {
        const int j = static_cast<int>(i) + 1;
        if (descending_ttls[i] > n - j) {
            count = j;
        }
    }
    return count;
}

State viable_projection(const State& s, int n) {
    const int k = viable_count(s, n);
    return State::from_sorted(std::vector<int>(s.begin(), s.begin() + k));
}

Count binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    u128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // result * (n - k + i) is divisible by i at every step.
        result = result * (n - k + i) / i;
        if (result > std::numeric_limits<Count>::max()) {
            throw OverflowError("C(" + std::to_string(n) + ", " + std::to_string(k) +
                                ") exceeds 64 bits");
        }
    }
    return static_cast<Count>(result);
}

namespace {

void check_feasible(int n, int t_max) {
    if (n < 2) throw DomainError("n must be at least 2");
    if (n > t_max) {
        throw InfeasibleError("n = " + std::to_string(n) + " exceeds t_max = " +
                              std::to_string(t_max));
    }
}

Count checked_add(Count a, Count b) {
    Count out = 0;
    if (__builtin_add_overflow(a, b, &out)) throw OverflowError("state count exceeds 64 bits");
    return out;
}

}  // namespace

Count count_states(int n, int t_max) {
    check_feasible(n, t_max);
    return binomial(static_cast<std::uint64_t>(t_max + n - 1), static_cast<std::uint64_t>(n - 1));
}

Count count_reduced(int n, int t_max) {
    check_feasible(n, t_max);
    Count total = 1;
    for (int m = 1; m <= n - 1; ++m) {
        total = checked_add(total, binomial(static_cast<std::uint64_t>(t_max + 2 * m - n - 1),
                                            static_cast<std::uint64_t>(m)));
    }
    return total;
}

double state_count_lower_bound(int n, int t_max) {
    if (n < 2 || t_max < n - 1) {
        throw DomainError("lower bound requires n >= 2 and t_max >= n - 1");
    }
    const double k = n - 1;
    return std::pow(1.0 + t_max / k, k);
}

StateIndexer::StateIndexer(int n, int t_max, bool reduced) : n_(n), t_max_(t_max), reduced_(reduced) {
    check_feasible(n, t_max);
    const Count total = reduced ? count_reduced(n, t_max) : count_states(n, t_max);
    if (total > std::numeric_limits<std::size_t>::max()) throw OverflowError("state space too large");
    size_ = static_cast<std::size_t>(total);

    table_dim_ = t_max + n + 2;
    binom_.assign(static_cast<std::size_t>(table_dim_) * table_dim_, 0);
    for (int a = 0; a < table_dim_; ++a) {
        binom_[static_cast<std::size_t>(a) * table_dim_] = 1;
        for (int b = 1; b <= a; ++b) {
            const Count left = binom_[static_cast<std::size_t>(a - 1) * table_dim_ + b - 1];
            const Count up = binom_[static_cast<std::size_t>(a - 1) * table_dim_ + b];
            Count sum = 0;
            // Entries beyond 64 bits are never consulted for spaces that fit in memory.
            if (__builtin_add_overflow(left, up, &sum)) sum = std::numeric_limits<Count>::max();
            binom_[static_cast<std::size_t>(a) * table_dim_ + b] = sum;
        }
    }

    offset_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int m = 0; m < n; ++m) {
        Count block = 0;
        if (m == 0) {
            block = 1;
        } else {
            const int values = reduced ? t_max - (n - m) : t_max;
            block = choose(values + m - 1, m);
        }
        offset_[m + 1] = offset_[m] + static_cast<std::size_t>(block);
    }
}

Count StateIndexer::choose(int a, int b) const noexcept {
    if (a < 0 || b < 0 || b > a) return 0;
    return binom_[static_cast<std::size_t>(a) * table_dim_ + b];
}

std::size_t StateIndexer::rank(std::span<const int> ttls) const noexcept {
    const int m = static_cast<int>(ttls.size());
    const int shift = reduced_ ? n_ - m : 0;
    std::size_t r = offset_[m];
    for (int i = 1; i <= m; ++i) {
        const int t = ttls[i - 1] - shift;
        // Tuples agreeing on the first i-1 entries with a smaller i-th entry.
        r += static_cast<std::size_t>(choose(t - 1 + m - i, m - i + 1));
    }
    return r;
}

bool StateIndexer::contains(std::span<const int> ttls) const noexcept {
    const int m = static_cast<int>(ttls.size());
    if (m >= n_) return false;
    const int lo = reduced_ ? n_ - m + 1 : 1;
    for (std::size_t i = 0; i < ttls.size(); ++i) {
        if (ttls[i] < lo || ttls[i] > t_max_) return false;
        if (i > 0 && ttls[i] > ttls[i - 1]) return false;
    }
    return true;
}

std::optional<std::size_t> StateIndexer::find(std::span<const int> ttls) const noexcept {
    if (!contains(ttls)) return std::nullopt;
    return rank(ttls);
}

StateSpace StateSpace::enumerate(int n, int t_max, bool reduced) {
    StateIndexer indexer(n, t_max, reduced);
    std::vector<State> states;
    states.reserve(indexer.size());

    std::vector<int> buffer;
    // Lexicographically ascending non-increasing tuples of length m over [lo, t_max].
    std::function<void(int, int, int)> extend = [&](int remaining, int lo, int hi) {
        if (remaining == 0) {
            states.push_back(State::from_sorted(buffer));
            return;
        }
        for (int t = lo; t <= hi; ++t) {
            buffer.push_back(t);
            extend(remaining - 1, lo, t);
            buffer.pop_back();
        }
    };
    for (int m = 0; m < n; ++m) {
        const int lo = reduced ? n - m + 1 : 1;
        extend(m, lo, t_max);
    }
    if (states.size() != indexer.size()) {
        throw ContractViolation("enumeration length disagrees with the closed-form count");
    }
    return StateSpace(std::move(indexer), std::move(states));
}

StateSpace StateSpace::enumerate(const ModelParams& params, int t_max, bool reduced) {
    return enumerate(params.n, t_max, reduced);
}

std::optional<std::size_t> StateSpace::find(const State& s) const noexcept {
    return indexer_.find(s.ttls());
}

std::size_t StateSpace::index_of(const State& s) const {
    if (auto id = find(s)) return *id;
    throw ContractViolation("state {" + s.key() + "} is not a member of this state space");
}

std::size_t StateSpace::representative(const State& s) const {
    if (!reduced()) return index_of(s);
    const int k = viable_count(s, n());
    const auto prefix = s.ttls().first(static_cast<std::size_t>(k));
    if (auto id = indexer_.find(prefix)) return *id;
    throw ContractViolation("state {" + s.key() + "} has no representative in this space");
}

}  // namespace entpack
