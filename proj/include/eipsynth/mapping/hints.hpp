#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eipsynth/schema/types.hpp"

namespace eipsynth::mapping {

enum class Verdict { Confirm, Reject };

/// `Svc.op.msg#path.to.leaf`
struct QualifiedPath {
    schema::QName qname;
    schema::FieldPath path;

    static QualifiedPath parse(std::string_view text);
    std::string str() const { return qname.str() + "#" + path.str(); }

    friend auto operator<=>(const QualifiedPath&, const QualifiedPath&) = default;
};

struct Hint {
    QualifiedPath source;
    QualifiedPath target;
    Verdict verdict = Verdict::Confirm;

    friend auto operator<=>(const Hint&, const Hint&) = default;
};

/// User verdicts on leaf correlations. Entries are kept sorted and de-duplicated,
/// so the order of lines in a hints file never affects results.
/// A verdict applies to the leaf pair regardless of which side is written first.
class HintSet {
public:
    HintSet() = default;
    /// Throws InvalidHint if one pair is both confirmed and rejected.
    explicit HintSet(std::vector<Hint> entries);

    const std::vector<Hint>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

    std::optional<Verdict> verdict_for(const QualifiedPath& a, const QualifiedPath& b) const;

    /// Entries connecting messages `x` and `y` (either orientation).
    std::vector<Hint> between(const schema::QName& x, const schema::QName& y) const;

private:
    std::vector<Hint> entries_;
};

/// Line format: `confirm|reject <src-qname>#<path> -> <dst-qname>#<path>`.
/// Blank lines and lines starting with `#` are ignored.
HintSet parse_hints(std::string_view text);
std::string to_text(const HintSet& hints);

} // namespace eipsynth::mapping
