#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "augdem/predictor/prompt.hpp"

namespace augdem::predictor {

enum class OrderVariant { Original, Reversed };

// One training example. Every source choice yields two records: the original
// display order and the reversed order with the label flipped so both encode
// the same underlying preference.
struct FineTuneRecord {
    std::string prompt_text;
    Choice completion_label = Choice::A;
    ParticipantId participant_id;
    ProposalId proposal_a = 0;  // as displayed in this record's prompt
    ProposalId proposal_b = 0;
    OrderVariant variant = OrderVariant::Original;
};

// 2 x |choices| records in dataset order, original before reversed.
std::vector<FineTuneRecord> export_finetune_dataset(const PreferenceDataset& train,
                                                    const PromptTemplate& tmpl);

// Training hyperparameters per backend family, emitted as the job sidecar.
struct FineTuneProfile {
    std::string name;
    std::string family;  // "hosted-chat" or "lora-adapter"
    // Ordered key/value pairs; values serialized as given.
    std::vector<std::pair<std::string, std::string>> hyperparameters;
};

const FineTuneProfile& finetune_profile(const std::string& backend_name);  // UnknownBackend
std::vector<std::string> finetune_backend_names();

struct FineTuneJobFiles {
    std::string training_file;        // chat-record lines (train.jsonl)
    std::string hyperparameter_file;  // sidecar (hyperparams.json)
    std::string records_file;         // metadata table (records.csv)
};

// Writes the training file, the hyperparameter sidecar for the named backend
// and the record metadata table under out_dir. header_comments are emitted as
// '#' provenance lines at the top of the metadata table; the training file
// stays strictly one {messages: [...]} object per line.
FineTuneJobFiles emit_finetune_job_spec(const std::string& backend_name,
                                        const std::vector<FineTuneRecord>& records,
                                        const std::string& out_dir,
                                        const std::optional<std::string>& system_message = {},
                                        const std::vector<std::string>& header_comments = {});

void write_chat_records(std::ostream& out, const std::vector<FineTuneRecord>& records,
                        const std::optional<std::string>& system_message);

struct ChatMessage {
    std::string role;
    std::string content;
};
struct ChatRecord {
    std::vector<ChatMessage> messages;
};

std::vector<ChatRecord> parse_chat_records(std::istream& in);

void write_finetune_records_csv(std::ostream& out, const std::vector<FineTuneRecord>& records);

// Recovers (participant, displayed pair, label, variant); prompt text is not
// stored in the metadata table.
std::vector<FineTuneRecord> parse_finetune_records_csv(std::istream& in);

}  // namespace augdem::predictor
