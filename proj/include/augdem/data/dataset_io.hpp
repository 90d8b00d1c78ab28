#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "augdem/core/types.hpp"

namespace augdem::data {

struct DatasetManifest {
    std::size_t participant_count = 0;
    std::size_t proposal_count = 0;
    std::size_t choice_count = 0;
    // field name -> category token -> participant count (enumerated fields only).
    std::map<std::string, std::map<std::string, std::size_t>> demographic_counts;

    bool operator==(const DatasetManifest&) const = default;
};

DatasetManifest compute_manifest(const PreferenceDataset& dataset);

// Proposal table: columns id, text, candidate. Ids are ingested verbatim
// (no contiguity assumed); duplicates are an error.
std::vector<Proposal> load_proposals(std::istream& source);
std::vector<Proposal> load_proposals_file(const std::string& path);

// Demographic labels are accepted in English and Brazilian Portuguese and
// stored language-neutrally. Unknown labels raise MalformedDemographic.
Demographics parse_demographics_row(const std::vector<std::string>& fields,
                                    const std::vector<int>& field_columns, std::size_t line);

// choices: participant_id, proposal_a, proposal_b, chosen (A|B)
// demographics: participant_id plus one column per demographic field; empty = absent.
std::pair<PreferenceDataset, DatasetManifest> load_dataset(std::vector<Proposal> proposals,
                                                           std::istream& choices_source,
                                                           std::istream& demographics_source);
std::pair<PreferenceDataset, DatasetManifest> load_dataset_files(
    const std::string& proposals_path, const std::string& choices_path,
    const std::string& demographics_path);

void save_proposals(const PreferenceDataset& dataset, std::ostream& out);
void save_choices(const PreferenceDataset& dataset, std::ostream& out);
void save_demographics(const PreferenceDataset& dataset, std::ostream& out);

// Writes proposals.csv, choices.csv, demographics.csv under dir.
void save_dataset_files(const PreferenceDataset& dataset, const std::string& dir);

// Canonical on-disk token for one demographic value (Table-style English).
std::string demographic_token(DemographicField field, const std::string& category);

}  // namespace augdem::data
