#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causelab/errors.hpp"
#include "causelab/model.hpp"

namespace causelab {

/// Natural number extended with infinity. Infinity compares above every
/// finite rank.
class Rank {
public:
    constexpr Rank() = default;
    static constexpr Rank infinity() { return Rank(kInf); }
    static constexpr Rank finite(std::uint64_t v) { return Rank(v); }

    bool is_infinite() const { return raw_ == kInf; }
    std::uint64_t value() const { return raw_; }

    auto operator<=>(const Rank&) const = default;

private:
    static constexpr std::uint64_t kInf = ~std::uint64_t{0};
    constexpr explicit Rank(std::uint64_t raw) : raw_(raw) {}

    std::uint64_t raw_ = 0;
};

inline std::string to_string(Rank r) {
    return r.is_infinite() ? "inf" : std::to_string(r.value());
}

/// Grades how surprising each world (complete endogenous setting) is in a
/// fixed context. Unlisted worlds rank infinite; callers force the actual
/// world of their context to rank 0.
struct RankingFunction {
    std::map<World, Rank> ranks;

    Rank rank_of(const World& w) const {
        auto it = ranks.find(w);
        return it == ranks.end() ? Rank::infinity() : it->second;
    }

    /// Rank of a set of worlds: the minimum over members, infinite for the
    /// empty set.
    Rank rank_of(const std::vector<World>& ws) const {
        Rank best = Rank::infinity();
        for (const auto& w : ws) best = std::min(best, rank_of(w));
        return best;
    }

    bool operator==(const RankingFunction&) const = default;
};

}  // namespace causelab
