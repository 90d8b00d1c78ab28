#include "augdem/data/synthetic.hpp"

#include <cmath>

#include "augdem/core/errors.hpp"
#include "augdem/core/rng.hpp"

namespace augdem::data {
namespace {

const std::vector<DemographicField> kEnumeratedFields = {
    DemographicField::Age, DemographicField::Ideology, DemographicField::Zone,
    DemographicField::Education, DemographicField::Sex,
};

void set_category(Demographics& d, DemographicField field, const std::string& category) {
    if (field == DemographicField::Age)
        d.age = category == "Young" ? AgeBand::Young : AgeBand::Old;
    else if (field == DemographicField::Ideology)
        d.ideology = category == "Liberal"    ? Ideology::Liberal
                     : category == "Centrist" ? Ideology::Centrist
                                              : Ideology::Conservative;
    else if (field == DemographicField::Zone)
        d.zone = category == "Urban" ? Zone::Urban : Zone::Rural;
    else if (field == DemographicField::Education)
        d.education = category == "CollegeEducated" ? Education::CollegeEducated
                                                    : Education::NonCollegeEducated;
    else if (field == DemographicField::Sex)
        d.sex = category == "Male" ? Sex::Male : Sex::Female;
}

void validate(const SyntheticPopulationSpec& spec) {
    if (spec.participant_count == 0 || spec.proposal_count < 2 || spec.pairs_per_participant == 0)
        throw ConfigError("synthetic spec needs participants >= 1, proposals >= 2, pairs >= 1");
    if (!(spec.demographic_effect_strength >= 0.0) || !std::isfinite(spec.demographic_effect_strength) ||
        !(spec.noise_scale >= 0.0) || !std::isfinite(spec.noise_scale))
        throw ConfigError("synthetic effect strength and noise scale must be finite and >= 0");
}

std::string participant_label(std::size_t index, std::size_t total) {
    std::size_t width = 1;
    for (std::size_t v = total; v >= 10; v /= 10) ++width;
    std::string digits = std::to_string(index + 1);
    return "p" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

}  // namespace

std::map<ProposalId, double> synthetic_base_utilities(const SyntheticPopulationSpec& spec) {
    validate(spec);
    SplitRng base_rng = SplitRng(spec.seed).split("base");
    std::map<ProposalId, double> base;
    for (std::size_t p = 0; p < spec.proposal_count; ++p)
        base[static_cast<ProposalId>(p + 1)] = base_rng.normal();
    return base;
}

PreferenceDataset generate_synthetic(const SyntheticPopulationSpec& spec) {
    validate(spec);
    PreferenceDataset dataset;
    for (std::size_t p = 0; p < spec.proposal_count; ++p) {
        Proposal proposal;
        proposal.id = static_cast<ProposalId>(p + 1);
        proposal.text = "Synthetic policy proposal " + std::to_string(p + 1);
        dataset.proposals.push_back(std::move(proposal));
    }

    std::vector<double> base(spec.proposal_count);
    {
        SplitRng base_rng = SplitRng(spec.seed).split("base");
        for (auto& u : base) u = base_rng.normal();
    }

    // offsets[category][proposal]
    std::map<std::string, std::vector<double>> offsets;
    {
        SplitRng offset_rng = SplitRng(spec.seed).split("offsets");
        for (const auto field : kEnumeratedFields) {
            for (const auto& category : field_categories(field)) {
                auto& row = offsets[category];
                row.resize(spec.proposal_count);
                for (auto& v : row) v = offset_rng.normal() * spec.demographic_effect_strength;
            }
        }
    }

    const SplitRng participants_rng = SplitRng(spec.seed).split("participants");
    for (std::size_t i = 0; i < spec.participant_count; ++i) {
        SplitRng rng = participants_rng.split(static_cast<std::uint64_t>(i));

        Participant participant;
        participant.id = participant_label(i, spec.participant_count);
        std::vector<double> utility = base;
        for (const auto field : kEnumeratedFields) {
            const auto& categories = field_categories(field);
            const auto& category = categories[rng.uniform_u64(categories.size())];
            set_category(participant.demographics, field, category);
            const auto& row = offsets.at(category);
            for (std::size_t p = 0; p < spec.proposal_count; ++p) utility[p] += row[p];
        }
        dataset.participants.push_back(participant);

        for (std::size_t k = 0; k < spec.pairs_per_participant; ++k) {
            const std::size_t x = static_cast<std::size_t>(rng.uniform_u64(spec.proposal_count));
            std::size_t y = static_cast<std::size_t>(rng.uniform_u64(spec.proposal_count - 1));
            if (y >= x) ++y;

            bool choose_x;
            if (spec.noise_scale == 0.0) {
                choose_x = utility[x] != utility[y] ? utility[x] > utility[y] : x < y;
            } else {
                const double gap = (utility[x] - utility[y]) / spec.noise_scale;
                choose_x = rng.bernoulli(1.0 / (1.0 + std::exp(-gap)));
            }

            PairwiseChoice choice;
            choice.participant_id = participant.id;
            const bool x_first = rng.bernoulli(0.5);
            choice.proposal_a = static_cast<ProposalId>((x_first ? x : y) + 1);
            choice.proposal_b = static_cast<ProposalId>((x_first ? y : x) + 1);
            choice.chosen = (choose_x == x_first) ? Choice::A : Choice::B;
            dataset.choices.push_back(std::move(choice));
        }
    }
    return dataset;
}

}  // namespace augdem::data
