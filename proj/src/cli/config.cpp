#include "augdem/cli/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"

#include "augdem/core/errors.hpp"
#include "augdem/core/rng.hpp"

namespace augdem::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void check_keys(const json& object, const std::set<std::string>& allowed,
                const std::string& where) {
    for (const auto& [key, _] : object.items()) {
        if (!allowed.count(key))
            throw ConfigError("unknown config key '" + key + "' in " + where);
    }
}

void require_file(const std::string& path, const std::string& key) {
    if (!std::filesystem::exists(path))
        throw ConfigError("config key '" + key + "' references a missing file: " + path);
}

predictor::PromptLanguage parse_language(const std::string& name) {
    if (name == "en" || name == "english") return predictor::PromptLanguage::English;
    if (name == "pt" || name == "pt-BR" || name == "portuguese")
        return predictor::PromptLanguage::BrazilianPortuguese;
    throw ConfigError("unknown prompt language '" + name + "' (use en or pt-BR)");
}

}  // namespace

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json parsed;
    try {
        parsed = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!parsed.is_object()) throw ConfigError("config root must be an object");

    check_keys(parsed,
               {"seed", "out", "data", "synthetic", "template", "backend", "remote", "inference",
                "ci", "fractions", "train_fractions", "augmentation", "adequacy", "bias",
                "finetune", "plots"},
               "config root");

    RunConfig config;
    if (parsed.contains("seed")) config.seed = parsed["seed"].get<std::uint64_t>();
    if (parsed.contains("out")) config.out_dir = parsed["out"].get<std::string>();

    if (parsed.contains("data")) {
        const auto& d = parsed["data"];
        check_keys(d, {"proposals", "choices", "demographics"}, "data");
        DataPaths paths;
        paths.proposals = d.at("proposals").get<std::string>();
        paths.choices = d.at("choices").get<std::string>();
        paths.demographics = d.at("demographics").get<std::string>();
        require_file(paths.proposals, "data.proposals");
        require_file(paths.choices, "data.choices");
        require_file(paths.demographics, "data.demographics");
        config.data = paths;
    }

    if (parsed.contains("synthetic")) {
        const auto& s = parsed["synthetic"];
        check_keys(s,
                   {"participants", "proposals", "effect_strength", "noise_scale",
                    "pairs_per_participant", "seed"},
                   "synthetic");
        data::SyntheticPopulationSpec spec;
        spec.participant_count = s.at("participants").get<std::size_t>();
        spec.proposal_count = s.at("proposals").get<std::size_t>();
        if (s.contains("effect_strength"))
            spec.demographic_effect_strength = s["effect_strength"].get<double>();
        if (s.contains("noise_scale")) spec.noise_scale = s["noise_scale"].get<double>();
        spec.pairs_per_participant = s.at("pairs_per_participant").get<std::size_t>();
        if (s.contains("seed")) {
            spec.seed = s["seed"].get<std::uint64_t>();
            config.synthetic_seed_explicit = true;
        }
        config.synthetic = spec;
    }

    if (parsed.contains("template")) {
        const auto& t = parsed["template"];
        check_keys(t, {"language", "path", "system_message"}, "template");
        if (t.contains("language")) config.language = parse_language(t["language"].get<std::string>());
        if (t.contains("path")) {
            config.template_path = t["path"].get<std::string>();
            require_file(*config.template_path, "template.path");
        }
        if (t.contains("system_message"))
            config.system_message = t["system_message"].get<std::string>();
    }

    if (parsed.contains("backend")) {
        const auto& b = parsed["backend"];
        check_keys(b, {"kind"}, "backend");
        config.backend_kind = b.at("kind").get<std::string>();
    }

    if (parsed.contains("remote")) {
        const auto& r = parsed["remote"];
        check_keys(r,
                   {"base_url", "path", "model", "auth_env", "auth_header", "timeout_ms",
                    "max_retries", "max_concurrent", "backoff_initial_ms"},
                   "remote");
        predictor::RemoteEndpointConfig remote;
        remote.base_url = r.at("base_url").get<std::string>();
        if (r.contains("path")) remote.path = r["path"].get<std::string>();
        remote.model = r.at("model").get<std::string>();
        if (r.contains("auth_env")) remote.auth_env = r["auth_env"].get<std::string>();
        if (r.contains("auth_header")) remote.auth_header = r["auth_header"].get<std::string>();
        if (r.contains("timeout_ms")) remote.timeout_ms = r["timeout_ms"].get<int>();
        if (r.contains("max_retries")) remote.max_retries = r["max_retries"].get<int>();
        if (r.contains("max_concurrent")) remote.max_concurrent = r["max_concurrent"].get<int>();
        if (r.contains("backoff_initial_ms"))
            remote.backoff_initial_ms = r["backoff_initial_ms"].get<int>();
        config.remote = remote;
    }

    if (parsed.contains("inference")) {
        const auto& i = parsed["inference"];
        check_keys(i, {"dual_order"}, "inference");
        if (i.contains("dual_order")) config.dual_order = i["dual_order"].get<bool>();
    }

    if (parsed.contains("ci")) {
        const auto& c = parsed["ci"];
        check_keys(c, {"level", "iterations"}, "ci");
        if (c.contains("level")) config.ci_level = c["level"].get<double>();
        if (c.contains("iterations")) config.ci_iterations = c["iterations"].get<std::size_t>();
    }

    if (parsed.contains("fractions"))
        config.fractions = parsed["fractions"].get<std::vector<double>>();
    if (parsed.contains("train_fractions"))
        config.train_fractions = parsed["train_fractions"].get<std::vector<double>>();

    if (parsed.contains("augmentation")) {
        const auto& a = parsed["augmentation"];
        check_keys(a, {"type", "extra_fraction", "repetitions"}, "augmentation");
        if (a.contains("type"))
            config.augmentation_type = augment::parse_augmentation_type(a["type"].get<std::string>());
        if (a.contains("extra_fraction")) config.extra_fraction = a["extra_fraction"].get<double>();
        if (a.contains("repetitions")) config.repetitions = a["repetitions"].get<std::size_t>();
    }

    if (parsed.contains("adequacy")) {
        const auto& a = parsed["adequacy"];
        check_keys(a, {"fractions", "repetitions"}, "adequacy");
        if (a.contains("fractions"))
            config.adequacy_fractions = a["fractions"].get<std::vector<double>>();
        if (a.contains("repetitions"))
            config.adequacy_repetitions = a["repetitions"].get<std::size_t>();
    }

    if (parsed.contains("bias")) {
        const auto& b = parsed["bias"];
        check_keys(b, {"attribute"}, "bias");
        if (b.contains("attribute")) config.bias_attribute = b["attribute"].get<std::string>();
    }

    if (parsed.contains("finetune")) {
        const auto& f = parsed["finetune"];
        check_keys(f, {"backend", "train_fraction"}, "finetune");
        if (f.contains("backend")) config.finetune_backend = f["backend"].get<std::string>();
        if (f.contains("train_fraction"))
            config.finetune_train_fraction = f["train_fraction"].get<double>();
    }

    if (parsed.contains("plots")) {
        const auto& p = parsed["plots"];
        check_keys(p, {"svg"}, "plots");
        if (p.contains("svg")) config.emit_svg = p["svg"].get<bool>();
    }

    return config;
}

std::string config_echo_json(const RunConfig& config) {
    ordered_json echo;
    echo["seed"] = config.seed ? ordered_json(*config.seed) : ordered_json(nullptr);
    echo["out"] = config.out_dir;
    if (config.data) {
        echo["data"] = {{"proposals", config.data->proposals},
                        {"choices", config.data->choices},
                        {"demographics", config.data->demographics}};
    }
    if (config.synthetic) {
        echo["synthetic"] = {{"participants", config.synthetic->participant_count},
                             {"proposals", config.synthetic->proposal_count},
                             {"effect_strength", config.synthetic->demographic_effect_strength},
                             {"noise_scale", config.synthetic->noise_scale},
                             {"pairs_per_participant", config.synthetic->pairs_per_participant},
                             {"seed", config.synthetic->seed},
                             {"seed_explicit", config.synthetic_seed_explicit}};
    }
    echo["template"] = {{"language", predictor::language_name(config.language)},
                        {"path", config.template_path ? ordered_json(*config.template_path)
                                                      : ordered_json(nullptr)},
                        {"system_message", config.system_message
                                               ? ordered_json(*config.system_message)
                                               : ordered_json(nullptr)}};
    echo["backend"] = {{"kind", config.backend_kind}};
    if (config.remote) {
        echo["remote"] = {{"base_url", config.remote->base_url},
                          {"path", config.remote->path},
                          {"model", config.remote->model},
                          {"auth_env", config.remote->auth_env},
                          {"auth_header", config.remote->auth_header},
                          {"timeout_ms", config.remote->timeout_ms},
                          {"max_retries", config.remote->max_retries},
                          {"max_concurrent", config.remote->max_concurrent},
                          {"backoff_initial_ms", config.remote->backoff_initial_ms},
                          {"temperature", predictor::RemoteEndpointConfig::temperature}};
    }
    echo["inference"] = {{"dual_order", config.dual_order}};
    echo["ci"] = {{"level", config.ci_level ? ordered_json(*config.ci_level) : ordered_json(nullptr)},
                  {"iterations", config.ci_iterations}};
    echo["fractions"] = config.fractions;
    echo["train_fractions"] = config.train_fractions;
    echo["augmentation"] = {{"type", augment::augmentation_type_name(config.augmentation_type)},
                            {"extra_fraction", config.extra_fraction},
                            {"repetitions", config.repetitions}};
    echo["adequacy"] = {{"fractions", config.adequacy_fractions},
                        {"repetitions", config.adequacy_repetitions}};
    echo["bias"] = {{"attribute", config.bias_attribute}};
    echo["finetune"] = {{"backend", config.finetune_backend},
                        {"train_fraction", config.finetune_train_fraction
                                               ? ordered_json(*config.finetune_train_fraction)
                                               : ordered_json(nullptr)}};
    echo["plots"] = {{"svg", config.emit_svg}};
    return echo.dump(2);
}

std::string config_fingerprint(const RunConfig& config) {
    const std::uint64_t h = SplitRng::hash_label(config_echo_json(config));
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
    return buffer;
}

std::uint64_t require_seed(const RunConfig& config) {
    if (!config.seed) throw ConfigError("a master seed is required (config 'seed' or --seed)");
    return *config.seed;
}

void require_one_data_source(const RunConfig& config) {
    if (config.data && config.synthetic)
        throw ConfigError("config must name exactly one data source; both 'data' and "
                          "'synthetic' are set");
    if (!config.data && !config.synthetic)
        throw ConfigError("config must name a data source: either 'data' files or a "
                          "'synthetic' population spec");
}

}  // namespace augdem::cli
