#include "augdem/predictor/finetune.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "json.hpp"

#include "augdem/core/errors.hpp"
#include "augdem/data/csv.hpp"

namespace augdem::predictor {
namespace {

// Adapter-family values shared by the 7B models; the hosted family only pins
// epochs and lets the provider choose the rest.
const std::vector<FineTuneProfile> kProfiles = {
    {"hosted-chat", "hosted-chat", {{"epochs", "3"}}},
    {"gpt-3.5-turbo", "hosted-chat", {{"epochs", "3"}}},
    {"adapter",
     "lora-adapter",
     {{"r", "64"},
      {"alpha", "16"},
      {"dropout", "0.1"},
      {"epochs", "3"},
      {"learning_rate", "0.0002"},
      {"weight_decay", "0.001"},
      {"max_grad_norm", "0.3"},
      {"warmup_ratio", "0.03"},
      {"lr_scheduler", "\"cosine\""},
      {"max_steps", "3000"}}},
    {"llama-2-7b",
     "lora-adapter",
     {{"r", "64"},
      {"alpha", "16"},
      {"dropout", "0.1"},
      {"epochs", "3"},
      {"learning_rate", "0.0002"},
      {"weight_decay", "0.001"},
      {"max_grad_norm", "0.3"},
      {"warmup_ratio", "0.03"},
      {"lr_scheduler", "\"cosine\""},
      {"max_steps", "3000"}}},
    {"falcon-7b",
     "lora-adapter",
     {{"r", "64"},
      {"alpha", "16"},
      {"dropout", "0.1"},
      {"epochs", "3"},
      {"learning_rate", "0.0002"},
      {"weight_decay", "0.001"},
      {"max_grad_norm", "0.3"},
      {"warmup_ratio", "0.03"},
      {"lr_scheduler", "\"cosine\""},
      {"max_steps", "3000"}}},
    {"mistral-7b",
     "lora-adapter",
     {{"r", "64"},
      {"alpha", "16"},
      {"dropout", "0.1"},
      {"epochs", "2"},
      {"learning_rate", "0.0002"},
      {"weight_decay", "0.001"},
      {"max_grad_norm", "0.3"},
      {"warmup_ratio", "0.03"},
      {"lr_scheduler", "\"constant\""},
      {"max_steps", "8250"}}},
};

Choice flipped(Choice c) { return c == Choice::A ? Choice::B : Choice::A; }

}  // namespace

std::vector<FineTuneRecord> export_finetune_dataset(const PreferenceDataset& train,
                                                    const PromptTemplate& tmpl) {
    std::unordered_map<std::string, const Participant*> participants;
    for (const auto& p : train.participants) participants[p.id] = &p;
    std::unordered_map<ProposalId, const Proposal*> proposals;
    for (const auto& p : train.proposals) proposals[p.id] = &p;

    std::vector<FineTuneRecord> records;
    records.reserve(2 * train.choices.size());
    for (const auto& choice : train.choices) {
        const auto participant = participants.find(choice.participant_id);
        if (participant == participants.end())
            throw UnknownParticipant("choice references unknown participant '" +
                                     choice.participant_id + "'");
        const auto a = proposals.find(choice.proposal_a);
        const auto b = proposals.find(choice.proposal_b);
        if (a == proposals.end() || b == proposals.end())
            throw UnknownProposal("choice references a proposal outside the dataset");

        PredictionQuery query;
        query.demographics = participant->second->demographics;
        query.first = *a->second;
        query.second = *b->second;

        FineTuneRecord original;
        original.prompt_text = build_prompt(query, tmpl);
        original.completion_label = choice.chosen;
        original.participant_id = choice.participant_id;
        original.proposal_a = choice.proposal_a;
        original.proposal_b = choice.proposal_b;
        original.variant = OrderVariant::Original;
        records.push_back(std::move(original));

        FineTuneRecord reversed;
        reversed.prompt_text = build_prompt(swap_order(query), tmpl);
        reversed.completion_label = flipped(choice.chosen);
        reversed.participant_id = choice.participant_id;
        reversed.proposal_a = choice.proposal_b;
        reversed.proposal_b = choice.proposal_a;
        reversed.variant = OrderVariant::Reversed;
        records.push_back(std::move(reversed));
    }
    return records;
}

const FineTuneProfile& finetune_profile(const std::string& backend_name) {
    for (const auto& profile : kProfiles)
        if (profile.name == backend_name) return profile;
    throw UnknownBackend("no fine-tune profile named '" + backend_name + "'");
}

std::vector<std::string> finetune_backend_names() {
    std::vector<std::string> names;
    for (const auto& profile : kProfiles) names.push_back(profile.name);
    return names;
}

void write_chat_records(std::ostream& out, const std::vector<FineTuneRecord>& records,
                        const std::optional<std::string>& system_message) {
    for (const auto& record : records) {
        nlohmann::ordered_json messages = nlohmann::ordered_json::array();
        if (system_message)
            messages.push_back({{"role", "system"}, {"content", *system_message}});
        messages.push_back({{"role", "user"}, {"content", record.prompt_text}});
        messages.push_back(
            {{"role", "assistant"},
             {"content", std::string(1, choice_letter(record.completion_label))}});
        nlohmann::ordered_json line;
        line["messages"] = std::move(messages);
        out << line.dump() << '\n';
    }
}

std::vector<ChatRecord> parse_chat_records(std::istream& in) {
    std::vector<ChatRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid chat record: ") + e.what(), line_no);
        }
        if (!parsed.contains("messages") || !parsed["messages"].is_array())
            throw ParseError("chat record lacks a messages array", line_no);
        ChatRecord record;
        for (const auto& message : parsed["messages"])
            record.messages.push_back(
                {message.at("role").get<std::string>(), message.at("content").get<std::string>()});
        records.push_back(std::move(record));
    }
    return records;
}

void write_finetune_records_csv(std::ostream& out, const std::vector<FineTuneRecord>& records) {
    data::write_csv_row(out, {"participant_id", "proposal_a", "proposal_b", "label", "variant"});
    for (const auto& record : records) {
        data::write_csv_row(
            out, {record.participant_id, std::to_string(record.proposal_a),
                  std::to_string(record.proposal_b),
                  std::string(1, choice_letter(record.completion_label)),
                  record.variant == OrderVariant::Original ? "original" : "reversed"});
    }
}

std::vector<FineTuneRecord> parse_finetune_records_csv(std::istream& in) {
    const data::CsvTable table = data::read_csv(in);
    std::vector<FineTuneRecord> records;
    if (table.header.empty()) return records;
    const int pid = table.require_column("participant_id");
    const int a = table.require_column("proposal_a");
    const int b = table.require_column("proposal_b");
    const int label = table.require_column("label");
    const int variant = table.require_column("variant");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        FineTuneRecord record;
        record.participant_id = row[pid];
        record.proposal_a = std::stoll(row[a]);
        record.proposal_b = std::stoll(row[b]);
        if (row[label] != "A" && row[label] != "B")
            throw ParseError("label must be A or B", table.row_lines[r]);
        record.completion_label = row[label] == "A" ? Choice::A : Choice::B;
        if (row[variant] != "original" && row[variant] != "reversed")
            throw ParseError("variant must be original or reversed", table.row_lines[r]);
        record.variant =
            row[variant] == "original" ? OrderVariant::Original : OrderVariant::Reversed;
        records.push_back(std::move(record));
    }
    return records;
}

FineTuneJobFiles emit_finetune_job_spec(const std::string& backend_name,
                                        const std::vector<FineTuneRecord>& records,
                                        const std::string& out_dir,
                                        const std::optional<std::string>& system_message,
                                        const std::vector<std::string>& header_comments) {
    const FineTuneProfile& profile = finetune_profile(backend_name);
    std::filesystem::create_directories(out_dir);

    FineTuneJobFiles files;
    files.training_file = out_dir + "/train.jsonl";
    files.hyperparameter_file = out_dir + "/hyperparams.json";
    files.records_file = out_dir + "/records.csv";

    {
        std::ofstream out(files.training_file, std::ios::binary);
        if (!out) throw ParseError("cannot write file: " + files.training_file);
        write_chat_records(out, records, system_message);
    }
    {
        std::ofstream out(files.hyperparameter_file, std::ios::binary);
        if (!out) throw ParseError("cannot write file: " + files.hyperparameter_file);
        out << "{\n";
        out << "  \"backend\": \"" << profile.name << "\",\n";
        out << "  \"family\": \"" << profile.family << "\",\n";
        out << "  \"hyperparameters\": {";
        for (std::size_t i = 0; i < profile.hyperparameters.size(); ++i) {
            if (i) out << ",";
            out << "\n    \"" << profile.hyperparameters[i].first
                << "\": " << profile.hyperparameters[i].second;
        }
        out << "\n  }\n}\n";
    }
    {
        std::ofstream out(files.records_file, std::ios::binary);
        if (!out) throw ParseError("cannot write file: " + files.records_file);
        for (const auto& comment : header_comments) out << "# " << comment << "\n";
        write_finetune_records_csv(out, records);
    }
    return files;
}

}  // namespace augdem::predictor
