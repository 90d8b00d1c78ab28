#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace augdem {

using ProposalId = std::int64_t;
using ParticipantId = std::string;

struct Proposal {
    ProposalId id = 0;
    std::string text;
    std::optional<std::string> candidate_tag;

    bool operator==(const Proposal&) const = default;
};

enum class AgeBand { Young, Old };
enum class Ideology { Liberal, Centrist, Conservative };
enum class Zone { Urban, Rural };
enum class Education { CollegeEducated, NonCollegeEducated };
enum class Sex { Male, Female };

// Self-reporting was voluntary; every field may be absent.
struct Demographics {
    std::optional<AgeBand> age;
    std::optional<Ideology> ideology;
    std::optional<Zone> zone;
    std::optional<Education> education;
    std::optional<Sex> sex;
    std::optional<std::string> city;
    std::optional<std::string> state;

    bool operator==(const Demographics&) const = default;
};

struct Participant {
    ParticipantId id;
    Demographics demographics;

    bool operator==(const Participant&) const = default;
};

enum class Choice { A, B };

inline char choice_letter(Choice c) { return c == Choice::A ? 'A' : 'B'; }

// One elicitation event: the pair as displayed plus the selection.
struct PairwiseChoice {
    ParticipantId participant_id;
    ProposalId proposal_a = 0;  // first-displayed
    ProposalId proposal_b = 0;  // second-displayed
    Choice chosen = Choice::A;

    ProposalId chosen_id() const { return chosen == Choice::A ? proposal_a : proposal_b; }
    ProposalId rejected_id() const { return chosen == Choice::A ? proposal_b : proposal_a; }

    bool operator==(const PairwiseChoice&) const = default;
};

// Proposals, participants and the ordered elicitation log. Choice order is
// stable; duplicate (participant, pair) elicitations are separate events.
struct PreferenceDataset {
    std::vector<Proposal> proposals;
    std::vector<Participant> participants;
    std::vector<PairwiseChoice> choices;

    const Proposal* find_proposal(ProposalId id) const {
        for (const auto& p : proposals)
            if (p.id == id) return &p;
        return nullptr;
    }

    const Participant* find_participant(const ParticipantId& id) const {
        for (const auto& p : participants)
            if (p.id == id) return &p;
        return nullptr;
    }

    bool operator==(const PreferenceDataset&) const = default;
};

// counts[(i, j)] = number of times i was selected over j. Whenever a pair is
// recorded, the losing direction is materialized with an explicit zero.
struct PairwiseTally {
    std::map<std::pair<ProposalId, ProposalId>, std::uint64_t> counts;

    std::uint64_t total() const {
        std::uint64_t sum = 0;
        for (const auto& [_, c] : counts) sum += c;
        return sum;
    }
};

struct WinRateEntry {
    std::uint64_t wins = 0;
    std::uint64_t appearances = 0;
    std::optional<double> win_rate;  // undefined when appearances == 0
};

struct WinRateTable {
    std::map<ProposalId, WinRateEntry> entries;
};

struct SampleSpec {
    double fraction = 1.0;  // in (0, 1]
    std::uint64_t seed = 0;
};

// Demographic field handles used by balancing, bias reports and prompts.
enum class DemographicField { Age, Ideology, Zone, Education, Sex, City, State };

bool is_enumerated(DemographicField field);
std::string field_name(DemographicField field);
std::optional<DemographicField> parse_field_name(const std::string& name);

// Canonical category tokens for an enumerated field, in report order.
const std::vector<std::string>& field_categories(DemographicField field);

// The participant's category token for the field, if populated.
std::optional<std::string> category_of(const Demographics& d, DemographicField field);

// Display names used in comparison labels ("College-educated vs. non-College ed.").
std::string comparison_display_name(const std::string& category);

}  // namespace augdem
