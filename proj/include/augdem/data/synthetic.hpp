#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "augdem/core/types.hpp"

namespace augdem::data {

// Ground-truth oracle population for pipeline testing. Each participant gets
// uniform demographics; proposal utilities are a shared base vector plus
// per-(category, proposal) offsets scaled by demographic_effect_strength.
// Choices pick the higher-utility proposal, flipped through a logistic link
// on the utility gap when noise_scale > 0.
struct SyntheticPopulationSpec {
    std::size_t participant_count = 0;
    std::size_t proposal_count = 0;
    double demographic_effect_strength = 0.0;
    double noise_scale = 0.0;
    std::size_t pairs_per_participant = 0;
    std::uint64_t seed = 0;
};

PreferenceDataset generate_synthetic(const SyntheticPopulationSpec& spec);

// The generating base utilities, for tests that compare recovered rankings
// against the known ground truth.
std::map<ProposalId, double> synthetic_base_utilities(const SyntheticPopulationSpec& spec);

}  // namespace augdem::data
