#include "augdem/predictor/prompt.hpp"

#include <fstream>
#include <sstream>

#include "augdem/core/errors.hpp"
#include "augdem/core/rng.hpp"

namespace augdem::predictor {
namespace {

constexpr const char* kEnglishSkeleton =
    "Consider a person[[ who is {age}]][[, politically {ideology}]][[, {sex}]][[, {education}]]"
    "[[, living in {city}]][[, {state}]][[, in a {zone} area]]."
    " This person was asked to choose between two policy proposals:\n"
    "A: {first}\n"
    "B: {second}\n"
    "Which proposal would this person choose? Answer with A or B.";

constexpr const char* kPortugueseSkeleton =
    "Considere uma pessoa[[ que é {age}]][[, politicamente {ideology}]][[, de sexo {sex}]]"
    "[[, {education}]][[, que mora em {city}]][[, {state}]][[, em zona {zone}]]."
    " Essa pessoa foi convidada a escolher entre duas propostas de política pública:\n"
    "A: {first}\n"
    "B: {second}\n"
    "Qual proposta essa pessoa escolheria? Responda com A ou B.";

struct Labels {
    const char* en;
    const char* pt;
};

// Prompt-facing value labels per language.
const std::pair<const char*, Labels> kPromptLabels[] = {
    {"Young", {"young", "jovem"}},
    {"Old", {"old", "de terceira idade"}},
    {"Liberal", {"liberal", "esquerdista"}},
    {"Centrist", {"centrist", "centrista"}},
    {"Conservative", {"conservative", "conservador"}},
    {"Urban", {"urban", "urbana"}},
    {"Rural", {"rural", "rural"}},
    {"CollegeEducated", {"college educated", "com curso superior"}},
    {"NonCollegeEducated", {"non-college educated", "sem curso superior"}},
    {"Male", {"male", "masculino"}},
    {"Female", {"female", "feminino"}},
};

std::optional<DemographicField> placeholder_field(const std::string& name) {
    return parse_field_name(name);
}

struct Segment {
    std::string text;    // literal with placeholders
    bool optional = false;
};

std::vector<Segment> split_segments(const std::string& skeleton) {
    std::vector<Segment> segments;
    std::size_t pos = 0;
    while (pos < skeleton.size()) {
        const std::size_t open = skeleton.find("[[", pos);
        if (open == std::string::npos) {
            segments.push_back({skeleton.substr(pos), false});
            break;
        }
        if (open > pos) segments.push_back({skeleton.substr(pos, open - pos), false});
        const std::size_t close = skeleton.find("]]", open + 2);
        if (close == std::string::npos)
            throw TemplateError("unterminated optional segment '[[' in template");
        segments.push_back({skeleton.substr(open + 2, close - open - 2), true});
        pos = close + 2;
    }
    return segments;
}

std::vector<std::string> placeholders_in(const std::string& text) {
    std::vector<std::string> names;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t open = text.find('{', pos);
        if (open == std::string::npos) break;
        const std::size_t close = text.find('}', open + 1);
        if (close == std::string::npos) throw TemplateError("unterminated placeholder '{'");
        names.push_back(text.substr(open + 1, close - open - 1));
        pos = close + 1;
    }
    return names;
}

std::optional<std::string> placeholder_value(const std::string& name,
                                             const PredictionQuery& query,
                                             PromptLanguage language) {
    if (name == "first") return query.first.text;
    if (name == "second") return query.second.text;
    const auto field = placeholder_field(name);
    if (!field) throw TemplateError("unknown placeholder '{" + name + "}'");
    const auto category = category_of(query.demographics, *field);
    if (!category) return std::nullopt;
    if (!is_enumerated(*field)) return category;  // city / state pass through
    return prompt_label(language, *field, *category);
}

std::string render_text(const std::string& text, const PredictionQuery& query,
                        PromptLanguage language) {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t open = text.find('{', pos);
        if (open == std::string::npos) {
            out += text.substr(pos);
            break;
        }
        out += text.substr(pos, open - pos);
        const std::size_t close = text.find('}', open + 1);
        const std::string name = text.substr(open + 1, close - open - 1);
        const auto value = placeholder_value(name, query, language);
        if (!value)
            throw TemplateError("placeholder '{" + name +
                                "}' is unresolved outside an optional segment");
        out += *value;
        pos = close + 1;
    }
    return out;
}

}  // namespace

std::string language_name(PromptLanguage language) {
    return language == PromptLanguage::English ? "en" : "pt-BR";
}

PredictionQuery swap_order(const PredictionQuery& query) {
    PredictionQuery swapped = query;
    std::swap(swapped.first, swapped.second);
    return swapped;
}

std::string prompt_label(PromptLanguage language, DemographicField, const std::string& category) {
    for (const auto& [token, labels] : kPromptLabels)
        if (category == token) return language == PromptLanguage::English ? labels.en : labels.pt;
    return category;
}

PromptTemplate::PromptTemplate(PromptLanguage language, std::string skeleton)
    : language_(language), skeleton_(std::move(skeleton)) {
    // Validate structure: known placeholders only, and exactly one {first}
    // and one {second}, both outside optional segments.
    std::size_t first_count = 0, second_count = 0;
    for (const auto& segment : split_segments(skeleton_)) {
        for (const auto& name : placeholders_in(segment.text)) {
            if (name == "first" || name == "second") {
                if (segment.optional)
                    throw TemplateError("proposal placeholder '{" + name +
                                        "}' cannot be inside an optional segment");
                (name == "first" ? first_count : second_count) += 1;
            } else if (!placeholder_field(name)) {
                throw TemplateError("unknown placeholder '{" + name + "}'");
            }
        }
    }
    if (first_count != 1 || second_count != 1)
        throw TemplateError("template must reference {first} and {second} exactly once each");
}

PromptTemplate PromptTemplate::default_for(PromptLanguage language) {
    return PromptTemplate(language, language == PromptLanguage::English ? kEnglishSkeleton
                                                                        : kPortugueseSkeleton);
}

PromptTemplate PromptTemplate::from_skeleton(PromptLanguage language, std::string skeleton) {
    return PromptTemplate(language, std::move(skeleton));
}

PromptTemplate PromptTemplate::from_file(PromptLanguage language, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TemplateError("cannot open template file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string skeleton = buffer.str();
    while (!skeleton.empty() && (skeleton.back() == '\n' || skeleton.back() == '\r'))
        skeleton.pop_back();
    return PromptTemplate(language, std::move(skeleton));
}

std::uint64_t PromptTemplate::hash() const {
    return SplitRng::hash_label(language_name(language_) + "\x1f" + skeleton_);
}

std::string build_prompt(const PredictionQuery& query, const PromptTemplate& tmpl) {
    if (query.first.id == query.second.id)
        throw ConfigError("prediction query needs two distinct proposals");
    std::string out;
    for (const auto& segment : split_segments(tmpl.skeleton())) {
        if (segment.optional) {
            bool all_present = true;
            for (const auto& name : placeholders_in(segment.text)) {
                if (!placeholder_value(name, query, tmpl.language())) {
                    all_present = false;
                    break;
                }
            }
            if (!all_present) continue;
        }
        out += render_text(segment.text, query, tmpl.language());
    }
    return out;
}

}  // namespace augdem::predictor
