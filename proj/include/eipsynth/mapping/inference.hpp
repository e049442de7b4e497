#pragma once

#include "eipsynth/mapping/hints.hpp"
#include "eipsynth/mapping/interface.hpp"
#include "eipsynth/mapping/report.hpp"

namespace eipsynth::mapping {

/// Two messages are comparable when their operations have opposite directions and they are
/// both inputs or both outputs. Identical messages (same operation, message name and tree)
/// are bound directly. For the remaining pairs, every subtype relation found in either
/// direction becomes a candidate; candidates sharing a supertype message are then assigned
/// jointly and injectively into its leaves, and a candidate that loses that contention
/// is dropped.
///
/// Throws InvalidHint when a hint names a leaf that does not exist, confirms two leaves of
/// different kinds, or gives one leaf two confirmed partners.
MappingReport infer_mappings(const InterfaceSpec& service, const InterfaceSpec& counterpart,
                             const HintSet& hints = {});

/// Applies verdicts to an existing report. Rejecting a correspondence removes it and marks
/// the mapping rejected (its messages fall back to `unmapped` unless mapped elsewhere).
/// Confirming a correspondence marks it confirmed, narrows ambiguity alternatives, and
/// re-solves the mapping when the confirmed pair was not part of it. Idempotent.
MappingReport apply_hints(MappingReport report, const HintSet& hints);

} // namespace eipsynth::mapping
