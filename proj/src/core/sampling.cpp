#include "augdem/core/sampling.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "augdem/core/errors.hpp"
#include "augdem/core/rng.hpp"

namespace augdem::core {
namespace {

// Selects k distinct indices out of n, uniformly, via partial Fisher-Yates.
std::vector<std::size_t> draw_indices(std::size_t n, std::size_t k, SplitRng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_u64(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(std::min(k, n));
    return idx;
}

PreferenceDataset keep_participants(const PreferenceDataset& dataset,
                                    const std::unordered_set<std::size_t>& keep_index) {
    PreferenceDataset out;
    out.proposals = dataset.proposals;
    std::unordered_set<std::string> kept_ids;
    for (std::size_t i = 0; i < dataset.participants.size(); ++i) {
        if (keep_index.count(i)) {
            out.participants.push_back(dataset.participants[i]);
            kept_ids.insert(dataset.participants[i].id);
        }
    }
    for (const auto& choice : dataset.choices)
        if (kept_ids.count(choice.participant_id)) out.choices.push_back(choice);
    return out;
}

}  // namespace

PreferenceDataset sample_participants(const PreferenceDataset& dataset, const SampleSpec& spec) {
    if (!(spec.fraction > 0.0 && spec.fraction <= 1.0))
        throw ConfigError("sample fraction must be in (0, 1]");
    const std::size_t n = dataset.participants.size();
    if (n == 0) return dataset;
    std::size_t k = std::max<std::size_t>(1, round_half_up(spec.fraction * static_cast<double>(n)));
    k = std::min(k, n);
    SplitRng rng(spec.seed);
    const auto picked = draw_indices(n, k, rng);
    return keep_participants(dataset, {picked.begin(), picked.end()});
}

PreferenceDataset restrict_to_participants(const PreferenceDataset& dataset,
                                           const std::vector<ParticipantId>& ids) {
    std::unordered_set<std::string> wanted(ids.begin(), ids.end());
    std::unordered_set<std::size_t> keep;
    for (std::size_t i = 0; i < dataset.participants.size(); ++i)
        if (wanted.count(dataset.participants[i].id)) keep.insert(i);
    return keep_participants(dataset, keep);
}

std::pair<PreferenceDataset, PreferenceDataset> split_train_test(const PreferenceDataset& dataset,
                                                                 double fraction,
                                                                 std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw ConfigError("train fraction must be in (0, 1)");
    const std::size_t n = dataset.participants.size();
    const std::size_t k = round_half_up(fraction * static_cast<double>(n));
    SplitRng rng(seed);
    const auto order = draw_indices(n, n, rng);
    std::unordered_set<std::size_t> train_index(order.begin(), order.begin() + std::min(k, n));
    std::unordered_set<std::size_t> test_index;
    for (std::size_t i = 0; i < n; ++i)
        if (!train_index.count(i)) test_index.insert(i);
    return {keep_participants(dataset, train_index), keep_participants(dataset, test_index)};
}

std::pair<PreferenceDataset, PreferenceDataset> disjoint_pair(const PreferenceDataset& dataset,
                                                              std::size_t size,
                                                              std::uint64_t seed) {
    const std::size_t n = dataset.participants.size();
    if (2 * size > n)
        throw SizeTooLarge("two disjoint samples of " + std::to_string(size) +
                           " need at least " + std::to_string(2 * size) + " participants, have " +
                           std::to_string(n));
    SplitRng rng(seed);
    const auto picked = draw_indices(n, 2 * size, rng);
    std::unordered_set<std::size_t> first(picked.begin(), picked.begin() + size);
    std::unordered_set<std::size_t> second(picked.begin() + size, picked.end());
    return {keep_participants(dataset, first), keep_participants(dataset, second)};
}

PreferenceDataset balance_by_attribute(const PreferenceDataset& dataset, DemographicField field,
                                       std::uint64_t seed, bool observed_only) {
    // Group participant indices by category, dropping missing values.
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < dataset.participants.size(); ++i) {
        const auto category = category_of(dataset.participants[i].demographics, field);
        if (category) groups[*category].push_back(i);
    }

    if (!observed_only && is_enumerated(field)) {
        for (const auto& category : field_categories(field)) {
            if (!groups.count(category))
                throw EmptyCategory("no participants with " + field_name(field) + " = " +
                                    category);
        }
    }
    if (groups.empty())
        throw EmptyCategory("attribute " + field_name(field) + " is absent on all participants");

    std::size_t smallest = SIZE_MAX;
    for (const auto& [_, members] : groups) smallest = std::min(smallest, members.size());

    SplitRng rng(seed);
    std::unordered_set<std::size_t> keep;
    for (const auto& [category, members] : groups) {
        SplitRng category_rng = rng.split(category);
        if (members.size() == smallest) {
            keep.insert(members.begin(), members.end());
            continue;
        }
        std::vector<std::size_t> local(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) local[i] = i;
        for (std::size_t i = 0; i < smallest; ++i) {
            const std::size_t j =
                i + static_cast<std::size_t>(category_rng.uniform_u64(local.size() - i));
            std::swap(local[i], local[j]);
        }
        for (std::size_t i = 0; i < smallest; ++i) keep.insert(members[local[i]]);
    }
    return keep_participants(dataset, keep);
}

}  // namespace augdem::core
