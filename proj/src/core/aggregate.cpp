#include "augdem/core/aggregate.hpp"

#include <algorithm>

#include "augdem/core/errors.hpp"

namespace augdem::core {

PairwiseTally tally(const PreferenceDataset& dataset) {
    PairwiseTally t;
    for (const auto& choice : dataset.choices) {
        const ProposalId winner = choice.chosen_id();
        const ProposalId loser = choice.rejected_id();
        t.counts[{winner, loser}] += 1;
        t.counts.try_emplace({loser, winner}, 0);
    }
    return t;
}

WinRateTable win_rates(const PairwiseTally& tally) {
    WinRateTable table;
    for (const auto& [pair, count] : tally.counts) {
        auto& winner = table.entries[pair.first];
        winner.wins += count;
        winner.appearances += count;
        table.entries[pair.second].appearances += count;
    }
    for (auto& [_, entry] : table.entries) {
        if (entry.appearances > 0)
            entry.win_rate = static_cast<double>(entry.wins) / static_cast<double>(entry.appearances);
    }
    return table;
}

WinRateTable win_rates(const PairwiseTally& tally, const std::vector<ProposalId>& universe) {
    WinRateTable table = win_rates(tally);
    for (const ProposalId id : universe) table.entries.try_emplace(id);
    return table;
}

std::vector<ProposalId> rank(const WinRateTable& table) {
    std::vector<ProposalId> ids;
    ids.reserve(table.entries.size());
    for (const auto& [id, entry] : table.entries) {
        if (!entry.win_rate)
            throw UndefinedWinRate("proposal " + std::to_string(id) + " has zero appearances");
        ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end(), [&table](ProposalId a, ProposalId b) {
        const double wa = *table.entries.at(a).win_rate;
        const double wb = *table.entries.at(b).win_rate;
        if (wa != wb) return wa > wb;
        return a < b;
    });
    return ids;
}

}  // namespace augdem::core
