#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "augdem/core/types.hpp"

namespace augdem::core {

// Uniform participant sample without replacement. Sample size is
// round_half_up(fraction * population) with a floor of 1; the proposal set is
// unchanged and the sampled participants keep all of their choices in the
// original order.
PreferenceDataset sample_participants(const PreferenceDataset& dataset, const SampleSpec& spec);

// Keep exactly the given participants (stable order), with their choices.
PreferenceDataset restrict_to_participants(const PreferenceDataset& dataset,
                                           const std::vector<ParticipantId>& ids);

// Random partition by participant; round-half-up of fraction goes to train.
std::pair<PreferenceDataset, PreferenceDataset> split_train_test(const PreferenceDataset& dataset,
                                                                 double fraction,
                                                                 std::uint64_t seed);

// Two disjoint uniform samples of exactly `size` participants each.
// Throws SizeTooLarge when 2 * size > population.
std::pair<PreferenceDataset, PreferenceDataset> disjoint_pair(const PreferenceDataset& dataset,
                                                              std::size_t size,
                                                              std::uint64_t seed);

// Drop participants missing the attribute, then downsample every category to
// the smallest category's size. With observed_only = false (default) an
// enumerated category with zero participants raises EmptyCategory; with true
// the balancing is restricted to the categories actually present.
PreferenceDataset balance_by_attribute(const PreferenceDataset& dataset, DemographicField field,
                                       std::uint64_t seed, bool observed_only = false);

}  // namespace augdem::core
