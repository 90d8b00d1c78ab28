#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "augdem/augment/augment.hpp"
#include "augdem/data/synthetic.hpp"
#include "augdem/predictor/prompt.hpp"
#include "augdem/predictor/remote.hpp"

namespace augdem::cli {

struct DataPaths {
    std::string proposals;
    std::string choices;
    std::string demographics;
};

// Resolved run configuration: one structured config file, every CLI flag
// overriding its key. Exactly one data source; the master seed is mandatory
// and every derived stream (per command, fraction, repetition) hangs off it.
struct RunConfig {
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";

    std::optional<DataPaths> data;
    std::optional<data::SyntheticPopulationSpec> synthetic;
    bool synthetic_seed_explicit = false;

    predictor::PromptLanguage language = predictor::PromptLanguage::English;
    std::optional<std::string> template_path;
    std::optional<std::string> system_message;

    std::string backend_kind = "nearest_neighbor";
    std::optional<predictor::RemoteEndpointConfig> remote;

    bool dual_order = true;

    std::optional<double> ci_level;  // required wherever intervals are emitted
    std::size_t ci_iterations = 100;

    std::vector<double> fractions = {0.05, 0.25, 0.5};
    std::vector<double> train_fractions = {0.05, 0.25, 0.5, 0.75};
    augment::AugmentationType augmentation_type = augment::AugmentationType::I_B;
    double extra_fraction = 0.2;
    std::size_t repetitions = 20;

    std::vector<double> adequacy_fractions = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45};
    std::size_t adequacy_repetitions = 50;

    std::string bias_attribute = "ideology";

    std::string finetune_backend = "hosted-chat";
    std::optional<double> finetune_train_fraction;

    bool emit_svg = false;
};

RunConfig load_config_file(const std::string& path);

// Stable fingerprint of the fully resolved config; stamped into every output.
std::string config_fingerprint(const RunConfig& config);

// Canonical JSON echo of the resolved config (the report bundle manifest).
std::string config_echo_json(const RunConfig& config);

std::uint64_t require_seed(const RunConfig& config);
void require_one_data_source(const RunConfig& config);

}  // namespace augdem::cli
