#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "eipsynth/mapping/hints.hpp"
#include "eipsynth/schema/types.hpp"

namespace eipsynth::schema {

/// Name-similarity score, kept in exact tenths (1.0, 0.8, 0.6, 0.2).
struct Score {
    int tenths = 0;

    double value() const noexcept { return tenths / 10.0; }
    Score& operator+=(Score other) noexcept
    {
        tenths += other.tenths;
        return *this;
    }
    friend Score operator+(Score a, Score b) noexcept { return a += b; }
    friend auto operator<=>(const Score&, const Score&) = default;
};

/// 1.0 case-insensitive equal; 0.8 equal after dropping non-alphanumerics;
/// 0.6 when the shorter normalized name (length >= 3) occurs inside the other; 0.2 otherwise.
Score name_similarity(std::string_view a, std::string_view b);

struct Correspondence {
    FieldPath source;
    FieldPath target;
    Score score;
    bool confirmed = false;

    friend bool operator==(const Correspondence&, const Correspondence&) = default;
};

/// Leaf correspondences of one subtype relation: injective on both sides, kind-preserving.
struct CorrespondenceSet {
    std::vector<Correspondence> pairs;
    /// More than one injection reaches the optimal total score.
    bool ambiguous = false;

    Score total() const noexcept
    {
        Score s;
        for (const auto& p : pairs)
            s += p.score;
        return s;
    }
    friend bool operator==(const CorrespondenceSet&, const CorrespondenceSet&) = default;
};

/// `sub` is contained in `sup`: every leaf of `sub` maps injectively onto a leaf of `sup`
/// with the same primitive kind. Returns the assignment maximizing the total name score
/// (confirm hints force a pair, reject hints forbid it); absent when no injection exists.
std::optional<CorrespondenceSet> subtype_of(const MessageSchema& sub, const MessageSchema& sup,
                                            const mapping::HintSet& hints = {});

bool equiv(const MessageSchema& a, const MessageSchema& b);

// ---------------------------------------------------------------------------
// Joint injection search shared by subtype_of and mapping contention.

/// One block of source leaves that is assigned as a whole (or, when optional, not at all).
struct InjectionGroup {
    /// options[source][target]: score, or empty when the pair is not allowed.
    std::vector<std::vector<std::optional<Score>>> options;
    /// (source, target) pairs that must be used; a group with forced pairs is never excluded.
    std::vector<std::pair<std::size_t, std::size_t>> forced;
    bool optional = false;
};

struct InjectionSolution {
    /// Per group: target index per source, or empty when the group is excluded.
    std::vector<std::optional<std::vector<std::size_t>>> assignment;
    Score total;
};

struct InjectionResult {
    /// Optimal solutions in search order (groups included before excluded, targets ascending);
    /// the first one is the preferred tie-break. At most `keep` are stored.
    std::vector<InjectionSolution> optima;
    std::size_t optimum_count = 0;
};

/// Exhaustive branch-and-bound over all injective assignments into `target_count` targets.
InjectionResult solve_injection(std::size_t target_count, std::vector<InjectionGroup> groups, std::size_t keep = 64);

/// Score matrix of `sub` leaves against `sup` leaves, honoring hints between the two messages.
InjectionGroup candidate_options(const MessageSchema& sub, const MessageSchema& sup, const mapping::HintSet& hints);

} // namespace eipsynth::schema
