#pragma once

#include <vector>

#include "augdem/core/types.hpp"

namespace augdem::core {

// Count how often each proposal beat each other proposal, display order
// ignored. Empty dataset yields an empty tally.
PairwiseTally tally(const PreferenceDataset& dataset);

// W_i = sum_j w_ij / sum_j (w_ij + w_ji); zero-appearance proposals are
// marked undefined rather than given a rate.
WinRateTable win_rates(const PairwiseTally& tally);

// Same, but with entries for every proposal in `universe`, so proposals that
// never appeared show up as undefined rows.
WinRateTable win_rates(const PairwiseTally& tally, const std::vector<ProposalId>& universe);

// Descending by win rate; ties broken by ascending proposal id. Throws
// UndefinedWinRate if any entry has zero appearances.
std::vector<ProposalId> rank(const WinRateTable& table);

}  // namespace augdem::core
