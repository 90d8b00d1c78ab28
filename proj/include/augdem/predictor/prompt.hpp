#pragma once

#include <cstdint>
#include <string>

#include "augdem/core/types.hpp"

namespace augdem::predictor {

enum class PromptLanguage { English, BrazilianPortuguese };

std::string language_name(PromptLanguage language);

// What the predictor is asked about: one pair, framed for one person known
// only by demographics. subject_id / elicitation_ordinal are hints for
// ground-truth mock backends; prompt construction never reads them.
struct PredictionQuery {
    Demographics demographics;
    Proposal first;
    Proposal second;
    std::optional<ParticipantId> subject_id;
    std::size_t elicitation_ordinal = 0;
};

PredictionQuery swap_order(const PredictionQuery& query);

// Mad-libs skeleton. `{name}` slots take demographic values or the proposal
// texts ({first}, {second}); a `[[ ... ]]` segment is dropped whole when any
// slot inside it is unpopulated, which is the omission rule for voluntary
// demographics. {first} and {second} must each appear exactly once, outside
// optional segments.
class PromptTemplate {
public:
    static PromptTemplate default_for(PromptLanguage language);
    static PromptTemplate from_skeleton(PromptLanguage language, std::string skeleton);
    static PromptTemplate from_file(PromptLanguage language, const std::string& path);

    PromptLanguage language() const { return language_; }
    const std::string& skeleton() const { return skeleton_; }
    std::uint64_t hash() const;

private:
    PromptTemplate(PromptLanguage language, std::string skeleton);

    PromptLanguage language_ = PromptLanguage::English;
    std::string skeleton_;
};

std::string build_prompt(const PredictionQuery& query, const PromptTemplate& tmpl);

// Rendered label for one demographic value in the template's language.
std::string prompt_label(PromptLanguage language, DemographicField field,
                         const std::string& category);

}  // namespace augdem::predictor
