#include "augdem/data/dataset_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "augdem/core/errors.hpp"
#include "augdem/data/csv.hpp"

namespace augdem::data {
namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// English and Brazilian Portuguese labels, matched case-insensitively.
template <typename T>
struct LabelSet {
    T value;
    std::vector<std::string> labels;
};

const std::vector<LabelSet<AgeBand>> kAgeLabels = {
    {AgeBand::Young, {"young", "jovem"}},
    {AgeBand::Old, {"old", "de terceira idade"}},
};
const std::vector<LabelSet<Ideology>> kIdeologyLabels = {
    {Ideology::Liberal, {"liberal", "esquerdista"}},
    {Ideology::Centrist, {"centrist", "centrista"}},
    {Ideology::Conservative, {"conservative", "conservador", "conservadora"}},
};
const std::vector<LabelSet<Zone>> kZoneLabels = {
    {Zone::Urban, {"urban", "urbana"}},
    {Zone::Rural, {"rural"}},
};
const std::vector<LabelSet<Education>> kEducationLabels = {
    {Education::CollegeEducated,
     {"college educated", "college-educated", "com curso superior"}},
    {Education::NonCollegeEducated,
     {"non-college educated", "non college educated", "non-college-educated",
      "sem curso superior"}},
};
const std::vector<LabelSet<Sex>> kSexLabels = {
    {Sex::Male, {"male", "masculino"}},
    {Sex::Female, {"female", "feminino"}},
};

template <typename T>
std::optional<T> match_label(const std::vector<LabelSet<T>>& sets, const std::string& raw) {
    const std::string needle = lower(raw);
    for (const auto& set : sets)
        for (const auto& label : set.labels)
            if (label == needle) return set.value;
    return std::nullopt;
}

template <typename T>
void assign_demographic(std::optional<T>& slot, const std::vector<LabelSet<T>>& sets,
                        const std::string& raw, const char* field, std::size_t line) {
    if (raw.empty()) return;
    const auto value = match_label(sets, raw);
    if (!value)
        throw MalformedDemographic("row " + std::to_string(line) + ": '" + raw +
                                   "' is not a recognized " + field + " value");
    slot = *value;
}

ProposalId parse_proposal_id(const std::string& raw, std::size_t line) {
    try {
        std::size_t consumed = 0;
        const long long value = std::stoll(raw, &consumed);
        if (consumed != raw.size()) throw std::invalid_argument(raw);
        return value;
    } catch (const std::exception&) {
        throw ParseError("'" + raw + "' is not a valid proposal id", line);
    }
}

const std::vector<DemographicField> kAllFields = {
    DemographicField::Age,      DemographicField::Ideology, DemographicField::Zone,
    DemographicField::Education, DemographicField::Sex,      DemographicField::City,
    DemographicField::State,
};

}  // namespace

DatasetManifest compute_manifest(const PreferenceDataset& dataset) {
    DatasetManifest m;
    m.participant_count = dataset.participants.size();
    m.proposal_count = dataset.proposals.size();
    m.choice_count = dataset.choices.size();
    for (const auto field : kAllFields) {
        if (!is_enumerated(field)) continue;
        auto& counts = m.demographic_counts[field_name(field)];
        for (const auto& category : field_categories(field)) counts[category] = 0;
        for (const auto& participant : dataset.participants) {
            const auto category = category_of(participant.demographics, field);
            if (category) counts[*category] += 1;
        }
    }
    return m;
}

std::vector<Proposal> load_proposals(std::istream& source) {
    const CsvTable table = read_csv(source);
    std::vector<Proposal> proposals;
    if (table.header.empty()) return proposals;
    const int id_col = table.require_column("id");
    const int text_col = table.require_column("text");
    const int candidate_col = table.column("candidate");

    std::unordered_set<long long> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.row_lines[r];
        Proposal p;
        p.id = parse_proposal_id(row[id_col], line);
        p.text = row[text_col];
        if (p.text.empty()) throw ParseError("proposal text is empty", line);
        if (candidate_col >= 0 && !row[candidate_col].empty())
            p.candidate_tag = row[candidate_col];
        if (!seen.insert(p.id).second)
            throw DuplicateId("proposal id " + std::to_string(p.id) + " appears twice");
        proposals.push_back(std::move(p));
    }
    return proposals;
}

std::vector<Proposal> load_proposals_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    return load_proposals(in);
}

Demographics parse_demographics_row(const std::vector<std::string>& fields,
                                    const std::vector<int>& field_columns, std::size_t line) {
    Demographics d;
    auto get = [&](std::size_t i) -> std::string {
        const int col = field_columns[i];
        return col >= 0 ? fields[col] : std::string();
    };
    assign_demographic(d.age, kAgeLabels, get(0), "age", line);
    assign_demographic(d.ideology, kIdeologyLabels, get(1), "ideology", line);
    assign_demographic(d.zone, kZoneLabels, get(2), "zone", line);
    assign_demographic(d.education, kEducationLabels, get(3), "education", line);
    assign_demographic(d.sex, kSexLabels, get(4), "sex", line);
    if (!get(5).empty()) d.city = get(5);
    if (!get(6).empty()) d.state = get(6);
    return d;
}

std::pair<PreferenceDataset, DatasetManifest> load_dataset(std::vector<Proposal> proposals,
                                                           std::istream& choices_source,
                                                           std::istream& demographics_source) {
    PreferenceDataset dataset;
    dataset.proposals = std::move(proposals);

    std::unordered_set<long long> proposal_ids;
    for (const auto& p : dataset.proposals) {
        if (!proposal_ids.insert(p.id).second)
            throw DuplicateId("proposal id " + std::to_string(p.id) + " appears twice");
    }

    const CsvTable demo = read_csv(demographics_source);
    std::unordered_set<std::string> participant_ids;
    if (!demo.header.empty()) {
        const int pid_col = demo.require_column("participant_id");
        std::vector<int> field_columns;
        for (const auto field : kAllFields) field_columns.push_back(demo.column(field_name(field)));
        for (std::size_t r = 0; r < demo.rows.size(); ++r) {
            const auto& row = demo.rows[r];
            const std::size_t line = demo.row_lines[r];
            Participant participant;
            participant.id = row[pid_col];
            if (participant.id.empty()) throw ParseError("participant id is empty", line);
            if (!participant_ids.insert(participant.id).second)
                throw DuplicateId("participant id '" + participant.id + "' appears twice");
            participant.demographics = parse_demographics_row(row, field_columns, line);
            dataset.participants.push_back(std::move(participant));
        }
    }

    const CsvTable choices = read_csv(choices_source);
    if (!choices.header.empty()) {
        const int pid_col = choices.require_column("participant_id");
        const int a_col = choices.require_column("proposal_a");
        const int b_col = choices.require_column("proposal_b");
        const int chosen_col = choices.require_column("chosen");
        for (std::size_t r = 0; r < choices.rows.size(); ++r) {
            const auto& row = choices.rows[r];
            const std::size_t line = choices.row_lines[r];
            PairwiseChoice choice;
            choice.participant_id = row[pid_col];
            if (!participant_ids.count(choice.participant_id))
                throw UnknownParticipant("row " + std::to_string(line) + ": participant '" +
                                         choice.participant_id + "' has no demographics row");
            choice.proposal_a = parse_proposal_id(row[a_col], line);
            choice.proposal_b = parse_proposal_id(row[b_col], line);
            if (choice.proposal_a == choice.proposal_b)
                throw ParseError("proposal_a equals proposal_b (" +
                                     std::to_string(choice.proposal_a) + ")",
                                 line);
            for (const ProposalId id : {choice.proposal_a, choice.proposal_b}) {
                if (!proposal_ids.count(id))
                    throw UnknownProposal("row " + std::to_string(line) + ": proposal " +
                                          std::to_string(id) + " is not in the proposal table");
            }
            const std::string chosen = row[chosen_col];
            if (chosen == "A" || chosen == "a") choice.chosen = Choice::A;
            else if (chosen == "B" || chosen == "b") choice.chosen = Choice::B;
            else throw ParseError("chosen must be A or B, found '" + chosen + "'", line);
            dataset.choices.push_back(std::move(choice));
        }
    }

    return {dataset, compute_manifest(dataset)};
}

std::pair<PreferenceDataset, DatasetManifest> load_dataset_files(
    const std::string& proposals_path, const std::string& choices_path,
    const std::string& demographics_path) {
    auto proposals = load_proposals_file(proposals_path);
    std::ifstream choices(choices_path, std::ios::binary);
    if (!choices) throw ParseError("cannot open file: " + choices_path);
    std::ifstream demographics(demographics_path, std::ios::binary);
    if (!demographics) throw ParseError("cannot open file: " + demographics_path);
    return load_dataset(std::move(proposals), choices, demographics);
}

std::string demographic_token(DemographicField field, const std::string& category) {
    if (field == DemographicField::Education) {
        if (category == "CollegeEducated") return "College educated";
        if (category == "NonCollegeEducated") return "Non-college educated";
    }
    return category;
}

void save_proposals(const PreferenceDataset& dataset, std::ostream& out) {
    write_csv_row(out, {"id", "text", "candidate"});
    for (const auto& p : dataset.proposals)
        write_csv_row(out, {std::to_string(p.id), p.text, p.candidate_tag.value_or("")});
}

void save_choices(const PreferenceDataset& dataset, std::ostream& out) {
    write_csv_row(out, {"participant_id", "proposal_a", "proposal_b", "chosen"});
    for (const auto& c : dataset.choices)
        write_csv_row(out, {c.participant_id, std::to_string(c.proposal_a),
                            std::to_string(c.proposal_b), std::string(1, choice_letter(c.chosen))});
}

void save_demographics(const PreferenceDataset& dataset, std::ostream& out) {
    std::vector<std::string> header = {"participant_id"};
    for (const auto field : kAllFields) header.push_back(field_name(field));
    write_csv_row(out, header);
    for (const auto& participant : dataset.participants) {
        std::vector<std::string> row = {participant.id};
        for (const auto field : kAllFields) {
            const auto category = category_of(participant.demographics, field);
            row.push_back(category ? (is_enumerated(field) ? demographic_token(field, *category)
                                                           : *category)
                                   : std::string());
        }
        write_csv_row(out, row);
    }
}

void save_dataset_files(const PreferenceDataset& dataset, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const auto write = [&](const std::string& name, auto&& fn) {
        std::ofstream out(dir + "/" + name, std::ios::binary);
        if (!out) throw ParseError("cannot write file: " + dir + "/" + name);
        fn(out);
    };
    write("proposals.csv", [&](std::ostream& o) { save_proposals(dataset, o); });
    write("choices.csv", [&](std::ostream& o) { save_choices(dataset, o); });
    write("demographics.csv", [&](std::ostream& o) { save_demographics(dataset, o); });
}

}  // namespace augdem::data
