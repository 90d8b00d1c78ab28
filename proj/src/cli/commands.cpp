#include "augdem/cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "augdem/cli/report.hpp"
#include "augdem/core/aggregate.hpp"
#include "augdem/core/errors.hpp"
#include "augdem/core/rng.hpp"
#include "augdem/core/sampling.hpp"
#include "augdem/data/dataset_io.hpp"
#include "augdem/predictor/finetune.hpp"
#include "augdem/predictor/mock_backends.hpp"
#include "augdem/stats/stats.hpp"

namespace augdem::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string hex64(std::uint64_t value) {
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
    return buffer;
}

PreferenceDataset load_input(const RunConfig& config) {
    require_one_data_source(config);
    if (config.data)
        return data::load_dataset_files(config.data->proposals, config.data->choices,
                                        config.data->demographics)
            .first;
    data::SyntheticPopulationSpec spec = *config.synthetic;
    if (!config.synthetic_seed_explicit) spec.seed = require_seed(config);
    return data::generate_synthetic(spec);
}

predictor::PromptTemplate template_of(const RunConfig& config) {
    if (config.template_path)
        return predictor::PromptTemplate::from_file(config.language, *config.template_path);
    return predictor::PromptTemplate::default_for(config.language);
}

std::string backend_label(const RunConfig& config) {
    if (config.backend_kind == "remote")
        return config.remote ? "remote:" + config.remote->model : "remote";
    return "mock:" + config.backend_kind;
}

Provenance provenance_for(const RunConfig& config, const std::string& command,
                          bool with_backend) {
    Provenance p;
    p.emplace_back("config_hash", config_fingerprint(config));
    p.emplace_back("seed", std::to_string(require_seed(config)));
    p.emplace_back("command", command);
    if (with_backend) {
        p.emplace_back("backend", backend_label(config));
        p.emplace_back("inference", config.dual_order ? "dual_order" : "single_order");
    }
    p.emplace_back("template_hash", hex64(template_of(config).hash()));
    return p;
}

ordered_json provenance_json(const Provenance& provenance) {
    ordered_json out;
    for (const auto& [key, value] : provenance) out[key] = value;
    return out;
}

void write_config_echo(const RunConfig& config, const std::string& command) {
    ordered_json echo = ordered_json::parse(config_echo_json(config));
    ordered_json wrapped;
    wrapped["config_hash"] = config_fingerprint(config);
    wrapped["command"] = command;
    wrapped["config"] = std::move(echo);
    write_text_file(config.out_dir + "/run_config.json", wrapped.dump(2) + "\n");
}

augment::BackendFactory make_backend_factory(const RunConfig& config,
                                             const PreferenceDataset& full) {
    const std::string& kind = config.backend_kind;
    if (kind == "always_first") {
        return [](const PreferenceDataset&) {
            return std::make_unique<predictor::AlwaysFirstBackend>();
        };
    }
    if (kind == "oracle") {
        // Ground-truth device: conditioned on the full dataset, not the sample.
        return [&full](const PreferenceDataset&) {
            return std::make_unique<predictor::OracleBackend>(full);
        };
    }
    if (kind == "nearest_neighbor") {
        return [](const PreferenceDataset& sample) {
            return std::make_unique<predictor::NearestNeighborBackend>(sample);
        };
    }
    if (kind == "remote") {
        if (!config.remote)
            throw ConfigError("backend kind 'remote' needs a 'remote' endpoint config");
        predictor::RemoteEndpointConfig endpoint = *config.remote;
        endpoint.system_message = config.system_message;
        const predictor::PromptTemplate tmpl = template_of(config);
        // The served model is assumed fine-tuned offline on the sample
        // (export-finetune -> provider job -> endpoint).
        return [endpoint, tmpl](const PreferenceDataset&) {
            return std::make_unique<predictor::RemoteBackend>(endpoint, tmpl);
        };
    }
    throw ConfigError("unknown backend kind '" + kind +
                      "' (use always_first, oracle, nearest_neighbor or remote)");
}

struct HarnessResult {
    std::vector<stats::LabeledPrediction> labeled;
    std::vector<stats::CorrectnessRecord> correctness;
};

// Predicts every elicited choice of the test set from its participant's
// demographics, keyed by query index so fan-out order cannot matter.
HarnessResult predict_testset(predictor::PredictorBackend& backend,
                              const PreferenceDataset& test, bool dual_order,
                              const SplitRng& rng) {
    std::vector<predictor::PredictionQuery> queries;
    queries.reserve(test.choices.size());
    std::map<std::tuple<ParticipantId, ProposalId, ProposalId>, std::size_t> ordinals;
    for (const auto& choice : test.choices) {
        const Participant* participant = test.find_participant(choice.participant_id);
        const Proposal* first = test.find_proposal(choice.proposal_a);
        const Proposal* second = test.find_proposal(choice.proposal_b);
        if (!participant || !first || !second)
            throw ConfigError("test set has unresolved references");
        predictor::PredictionQuery query;
        query.demographics = participant->demographics;
        query.first = *first;
        query.second = *second;
        query.subject_id = choice.participant_id;
        const auto key = std::make_tuple(choice.participant_id,
                                         std::min(choice.proposal_a, choice.proposal_b),
                                         std::max(choice.proposal_a, choice.proposal_b));
        query.elicitation_ordinal = ordinals[key]++;
        queries.push_back(std::move(query));
    }

    std::vector<Choice> predicted(queries.size());
    if (dual_order) {
        const auto results = predictor::dual_order_predict_batch(backend, queries, rng);
        for (std::size_t i = 0; i < results.size(); ++i) predicted[i] = results[i].chosen;
    } else {
        for (std::size_t i = 0; i < queries.size(); ++i)
            predicted[i] = backend.predict(queries[i]).chosen;
    }

    HarnessResult result;
    result.labeled.reserve(queries.size());
    result.correctness.reserve(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const auto& choice = test.choices[i];
        const ProposalId picked =
            predicted[i] == Choice::A ? choice.proposal_a : choice.proposal_b;
        result.labeled.push_back({picked, choice.chosen_id()});
        result.correctness.push_back({choice.participant_id, picked == choice.chosen_id()});
    }
    return result;
}

double require_ci_level(const RunConfig& config) {
    if (!config.ci_level)
        throw ConfigError("ci.level is required for this command (e.g. 0.95 or 0.99); "
                          "no default is assumed");
    if (!(*config.ci_level > 0.0 && *config.ci_level < 1.0))
        throw ConfigError("ci.level must be in (0, 1)");
    return *config.ci_level;
}

DemographicField require_enumerated_attribute(const std::string& name) {
    const auto field = parse_field_name(name);
    if (!field || !is_enumerated(*field))
        throw ConfigError("attribute '" + name +
                          "' is not balanceable; use age, ideology, zone, education or sex");
    return *field;
}

std::string significance_stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.02) return "**";
    if (p < 0.05) return "*";
    return "";
}

std::string manifest_line(const data::DatasetManifest& manifest) {
    std::ostringstream line;
    line << manifest.participant_count << " participants, " << manifest.proposal_count
         << " proposals, " << manifest.choice_count << " choices";
    return line.str();
}

void write_manifest_json(const RunConfig& config, const std::string& command,
                         const data::DatasetManifest& manifest, const std::string& path) {
    ordered_json doc;
    doc["provenance"] = provenance_json(provenance_for(config, command, false));
    doc["participant_count"] = manifest.participant_count;
    doc["proposal_count"] = manifest.proposal_count;
    doc["choice_count"] = manifest.choice_count;
    doc["demographic_counts"] = manifest.demographic_counts;
    write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace

int cmd_ingest(const RunConfig& config, std::ostream& out) {
    require_seed(config);
    const PreferenceDataset dataset = load_input(config);
    const auto manifest = data::compute_manifest(dataset);
    write_config_echo(config, "ingest");
    write_manifest_json(config, "ingest", manifest, config.out_dir + "/manifest.json");
    out << manifest_line(manifest) << "\n";
    for (const auto& [field, counts] : manifest.demographic_counts) {
        out << "  " << field << ":";
        for (const auto& [category, count] : counts) out << " " << category << "=" << count;
        out << "\n";
    }
    verify_bundle(config.out_dir);
    return 0;
}

int cmd_winrates(const RunConfig& config, std::ostream& out) {
    require_seed(config);
    const PreferenceDataset dataset = load_input(config);
    std::vector<ProposalId> universe;
    for (const auto& p : dataset.proposals) universe.push_back(p.id);
    const WinRateTable table = core::win_rates(core::tally(dataset), universe);

    WinRateTable defined;
    std::vector<ProposalId> undefined;
    for (const auto& [id, entry] : table.entries) {
        if (entry.win_rate) defined.entries[id] = entry;
        else undefined.push_back(id);
    }
    const auto ranked = defined.entries.empty() ? std::vector<ProposalId>{} : core::rank(defined);

    std::vector<std::vector<std::string>> rows;
    std::size_t position = 1;
    for (const ProposalId id : ranked) {
        const auto& entry = table.entries.at(id);
        rows.push_back({std::to_string(position++), std::to_string(id),
                        std::to_string(entry.wins), std::to_string(entry.appearances),
                        format_double(*entry.win_rate), "ok"});
    }
    for (const ProposalId id : undefined) {
        const auto& entry = table.entries.at(id);
        rows.push_back({"", std::to_string(id), std::to_string(entry.wins),
                        std::to_string(entry.appearances), "", "undefined"});
    }

    write_config_echo(config, "winrates");
    write_table(config.out_dir + "/winrates.csv", provenance_for(config, "winrates", false),
                {"rank", "proposal_id", "wins", "appearances", "win_rate", "status"}, rows);
    out << "winrates: " << ranked.size() << " ranked proposals, " << undefined.size()
        << " undefined\n";
    verify_bundle(config.out_dir);
    return 0;
}

int cmd_adequacy(const RunConfig& config, std::ostream& out) {
    const std::uint64_t seed = require_seed(config);
    const PreferenceDataset dataset = load_input(config);
    const std::size_t population = dataset.participants.size();

    std::vector<std::size_t> sizes;
    for (const double fraction : config.adequacy_fractions) {
        if (!(fraction > 0.0 && fraction < 1.0))
            throw ConfigError("adequacy fractions must be in (0, 1)");
        const std::size_t size = round_half_up(fraction * static_cast<double>(population));
        if (size >= 1) sizes.push_back(size);
    }
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.empty()) throw ConfigError("no usable adequacy sizes");

    SplitRng rng = SplitRng(seed).split("command:adequacy");
    const auto points =
        stats::adequacy_curve(dataset, sizes, config.adequacy_repetitions, rng.next_u64());
    const auto fit = stats::fit_rational(points);

    std::vector<std::vector<std::string>> rows;
    for (const auto& p : points)
        rows.push_back({std::to_string(p.sample_size), format_double(p.fraction),
                        format_double(p.r_squared), std::to_string(p.repetitions)});
    write_config_echo(config, "adequacy");
    write_table(config.out_dir + "/adequacy.csv", provenance_for(config, "adequacy", false),
                {"sample_size", "fraction", "mean_r2", "repetitions"}, rows);

    ordered_json fit_doc;
    fit_doc["provenance"] = provenance_json(provenance_for(config, "adequacy", false));
    fit_doc["trend"] = "r2(x) = a*x / (b + x)";
    fit_doc["a"] = fit.a;
    fit_doc["b"] = fit.b;
    fit_doc["residual_sum_squares"] = fit.residual_sum_squares;
    write_text_file(config.out_dir + "/adequacy_fit.json", fit_doc.dump(2) + "\n");

    if (config.emit_svg) {
        ChartSeries data_series{"mean r2", {}};
        ChartSeries fit_series{"trend", {}};
        for (const auto& p : points) {
            data_series.points.emplace_back(p.fraction, p.r_squared);
            fit_series.points.emplace_back(p.fraction,
                                           fit.a * p.fraction / (fit.b + p.fraction));
        }
        write_line_chart_svg(config.out_dir + "/adequacy.svg", "Adequacy of disjoint samples",
                             {data_series, fit_series});
    }

    for (const auto& p : points)
        out << "size " << p.sample_size << " (" << format_double(p.fraction, 3)
            << "): mean r2 = " << format_double(p.r_squared, 4) << "\n";
    out << "trend a=" << format_double(fit.a, 6) << " b=" << format_double(fit.b, 6) << "\n";
    verify_bundle(config.out_dir);
    return 0;
}

int cmd_accuracy(const RunConfig& config, std::ostream& out) {
    const std::uint64_t seed = require_seed(config);
    const double level = require_ci_level(config);
    const PreferenceDataset dataset = load_input(config);
    const auto factory = make_backend_factory(config, dataset);
    const SplitRng rng = SplitRng(seed).split("command:accuracy");

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < config.train_fractions.size(); ++i) {
        const double fraction = config.train_fractions[i];
        SplitRng fraction_rng = rng.split(i);
        const auto [train, test] =
            core::split_train_test(dataset, fraction, fraction_rng.split("split").next_u64());
        if (test.choices.empty())
            throw ConfigError("test split has no choices at train fraction " +
                              format_double(fraction, 2));
        const auto backend = factory(train);
        const auto harness =
            predict_testset(*backend, test, config.dual_order, fraction_rng.split("predict"));

        std::vector<double> indicators;
        indicators.reserve(harness.correctness.size());
        for (const auto& record : harness.correctness)
            indicators.push_back(record.correct ? 1.0 : 0.0);
        const double acc = stats::accuracy(harness.labeled);
        const auto ci = stats::bootstrap_ci(indicators, level, config.ci_iterations,
                                            fraction_rng.split("bootstrap").next_u64());

        const std::string label =
            fraction == 0.5 ? "overall" : "train=" + format_double(fraction, 2);
        rows.push_back({label, format_double(fraction, 2), std::to_string(indicators.size()),
                        format_double(acc), format_double(ci.low), format_double(ci.high),
                        format_double(level, 2), std::to_string(config.ci_iterations)});
        out << label << ": accuracy " << format_double(acc, 4) << " [" << format_double(ci.low, 4)
            << ", " << format_double(ci.high, 4) << "] over " << indicators.size()
            << " predictions\n";
    }

    write_config_echo(config, "accuracy");
    write_table(config.out_dir + "/accuracy.csv", provenance_for(config, "accuracy", true),
                {"label", "train_fraction", "n_predictions", "accuracy", "ci_low", "ci_high",
                 "ci_level", "bootstrap_iterations"},
                rows);
    verify_bundle(config.out_dir);
    return 0;
}

int cmd_bias(const RunConfig& config, std::ostream& out) {
    const std::uint64_t seed = require_seed(config);
    const double level = require_ci_level(config);
    const DemographicField attribute = require_enumerated_attribute(config.bias_attribute);
    const PreferenceDataset dataset = load_input(config);
    const auto factory = make_backend_factory(config, dataset);
    const SplitRng rng = SplitRng(seed).split("command:bias");

    const auto [train, test] =
        core::split_train_test(dataset, 0.5, rng.split("split").next_u64());
    const PreferenceDataset balanced =
        core::balance_by_attribute(train, attribute, rng.split("balance").next_u64());
    const auto backend = factory(balanced);
    const auto harness =
        predict_testset(*backend, test, config.dual_order, rng.split("predict"));
    const auto analysis = stats::subgroup_accuracy_analysis(
        test, harness.correctness, attribute, level, config.ci_iterations,
        rng.split("bootstrap").next_u64());

    std::vector<std::vector<std::string>> accuracy_rows;
    for (const auto& report : analysis.reports) {
        accuracy_rows.push_back({field_name(attribute),
                                 comparison_display_name(report.subgroup),
                                 std::to_string(report.n_predictions),
                                 format_double(report.accuracy), format_double(report.interval.low),
                                 format_double(report.interval.high), format_double(level, 2)});
        out << comparison_display_name(report.subgroup) << ": accuracy "
            << format_double(report.accuracy, 4) << " ["
            << format_double(report.interval.low, 4) << ", "
            << format_double(report.interval.high, 4) << "] over " << report.n_predictions
            << " predictions\n";
    }

    std::vector<std::vector<std::string>> test_rows;
    for (const auto& cmp : analysis.comparisons) {
        const std::string label = comparison_display_name(cmp.group_a) + " vs. " +
                                  comparison_display_name(cmp.group_b);
        test_rows.push_back({backend_label(config), label,
                             format_double(cmp.t_statistic, 4),
                             format_double(cmp.degrees_of_freedom, 2),
                             format_double(cmp.p_value, 4),
                             significance_stars(cmp.p_value)});
        out << label << ": t = " << format_double(cmp.t_statistic, 2)
            << ", p = " << format_double(cmp.p_value, 4) << significance_stars(cmp.p_value)
            << "\n";
    }

    write_config_echo(config, "bias");
    write_table(config.out_dir + "/bias_accuracy.csv", provenance_for(config, "bias", true),
                {"attribute", "subgroup", "n_predictions", "accuracy", "ci_low", "ci_high",
                 "ci_level"},
                accuracy_rows);
    write_table(config.out_dir + "/bias_tests.csv", provenance_for(config, "bias", true),
                {"backend", "comparison", "t_statistic", "degrees_of_freedom", "p_value",
                 "significance"},
                test_rows);
    verify_bundle(config.out_dir);
    return 0;
}

int cmd_augment_eval(const RunConfig& config, std::ostream& out) {
    const std::uint64_t seed = require_seed(config);
    const double level = require_ci_level(config);
    augment::require_executable(config.augmentation_type);
    const PreferenceDataset dataset = load_input(config);
    const auto factory = make_backend_factory(config, dataset);

    augment::AugmentationPlan plan;
    plan.kind = config.augmentation_type;
    plan.extra_fraction = config.extra_fraction;
    SplitRng rng = SplitRng(seed).split("command:augment-eval");
    const auto result =
        augment::evaluate_augmentation(dataset, config.fractions, plan, factory,
                                       config.repetitions, rng.next_u64(), level,
                                       config.ci_iterations);

    std::vector<std::vector<std::string>> record_rows;
    for (const auto& r : result.records)
        record_rows.push_back({format_double(r.fraction), std::to_string(r.repetition),
                               format_double(r.plain_r2), format_double(r.augmented_r2),
                               std::to_string(r.synthetic_choice_count)});
    std::vector<std::vector<std::string>> summary_rows;
    for (const auto& s : result.summaries) {
        summary_rows.push_back({format_double(s.fraction), std::to_string(s.repetitions),
                                format_double(s.plain_mean), format_double(s.plain_low),
                                format_double(s.plain_high), format_double(s.augmented_mean),
                                format_double(s.augmented_low), format_double(s.augmented_high)});
        out << "fraction " << format_double(s.fraction, 2) << ": plain r2 "
            << format_double(s.plain_mean, 4) << ", augmented r2 "
            << format_double(s.augmented_mean, 4) << "\n";
    }

    write_config_echo(config, "augment-eval");
    write_table(config.out_dir + "/augment_curve.csv",
                provenance_for(config, "augment-eval", true),
                {"fraction", "repetition", "plain_r2", "augmented_r2", "synthetic_choice_count"},
                record_rows);
    write_table(config.out_dir + "/augment_summary.csv",
                provenance_for(config, "augment-eval", true),
                {"fraction", "repetitions", "plain_mean", "plain_low", "plain_high",
                 "augmented_mean", "augmented_low", "augmented_high"},
                summary_rows);

    if (config.emit_svg) {
        ChartSeries plain{"plain sample", {}};
        ChartSeries augmented{"augmented sample", {}};
        for (const auto& s : result.summaries) {
            plain.points.emplace_back(s.fraction, s.plain_mean);
            augmented.points.emplace_back(s.fraction, s.augmented_mean);
        }
        write_line_chart_svg(config.out_dir + "/augment_curve.svg",
                             "Plain vs augmented sample accuracy", {plain, augmented});
    }
    verify_bundle(config.out_dir);
    return 0;
}

int cmd_export_finetune(const RunConfig& config, std::ostream& out) {
    const std::uint64_t seed = require_seed(config);
    const PreferenceDataset dataset = load_input(config);
    PreferenceDataset train = dataset;
    if (config.finetune_train_fraction) {
        const SplitRng rng = SplitRng(seed).split("command:export-finetune");
        train = core::split_train_test(dataset, *config.finetune_train_fraction,
                                       rng.split("split").next_u64())
                    .first;
    }
    const auto tmpl = template_of(config);
    const auto records = predictor::export_finetune_dataset(train, tmpl);
    std::vector<std::string> comments;
    for (const auto& [key, value] : provenance_for(config, "export-finetune", false))
        comments.push_back(key + "=" + value);
    const auto files =
        predictor::emit_finetune_job_spec(config.finetune_backend, records,
                                          config.out_dir + "/finetune", config.system_message,
                                          comments);

    write_config_echo(config, "export-finetune");
    ordered_json doc;
    doc["provenance"] = provenance_json(provenance_for(config, "export-finetune", false));
    doc["backend"] = config.finetune_backend;
    doc["source_choices"] = train.choices.size();
    doc["records"] = records.size();
    doc["training_file"] = files.training_file;
    doc["hyperparameter_file"] = files.hyperparameter_file;
    doc["records_file"] = files.records_file;
    write_text_file(config.out_dir + "/finetune/job.json", doc.dump(2) + "\n");

    out << "exported " << records.size() << " chat records from " << train.choices.size()
        << " choices to " << files.training_file << "\n";
    verify_bundle(config.out_dir);
    return 0;
}

int cmd_synth(const RunConfig& config, std::ostream& out) {
    require_seed(config);
    if (!config.synthetic)
        throw ConfigError("synth needs a 'synthetic' population spec in the config");
    const PreferenceDataset dataset = load_input(config);
    const auto manifest = data::compute_manifest(dataset);

    data::save_dataset_files(dataset, config.out_dir + "/dataset");
    write_config_echo(config, "synth");
    write_manifest_json(config, "synth", manifest, config.out_dir + "/manifest.json");
    out << manifest_line(manifest) << "\n";
    verify_bundle(config.out_dir);
    return 0;
}

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pairwise preference aggregation and predictor-augmented sampling toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string backend_kind;
    double ci_level = 0.0;
    std::string attribute;
    std::string finetune_backend;
    double finetune_train_fraction = 0.0;
    bool svg = false;
    std::uint64_t synth_participants = 0, synth_proposals = 0, synth_pairs = 0;
    double synth_effect = -1.0, synth_noise = -1.0;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--seed", seed, "master seed (overrides config)");
    app.add_option("--out", out_dir, "output directory (overrides config)");

    auto* ingest = app.add_subcommand("ingest", "load and validate a dataset, print manifest");
    auto* winrates = app.add_subcommand("winrates", "aggregate win rates and ranking");
    auto* adequacy =
        app.add_subcommand("adequacy", "disjoint-sample agreement curve and rational trend");
    auto* accuracy =
        app.add_subcommand("accuracy", "train/test prediction accuracy with bootstrap intervals");
    auto* bias = app.add_subcommand("bias", "per-subgroup accuracy and two-sample tests");
    auto* augment_eval =
        app.add_subcommand("augment-eval", "plain vs augmented sample accuracy curves");
    auto* export_finetune =
        app.add_subcommand("export-finetune", "chat-record training file and hyperparameters");
    auto* synth = app.add_subcommand("synth", "generate and save a synthetic population");

    for (auto* sub : {ingest, winrates, adequacy, accuracy, bias, augment_eval, export_finetune,
                      synth})
        sub->fallthrough();

    for (auto* sub : {accuracy, bias, augment_eval})
        sub->add_option("--backend", backend_kind,
                        "backend kind: always_first | oracle | nearest_neighbor | remote");
    for (auto* sub : {accuracy, bias, augment_eval})
        sub->add_option("--level", ci_level, "confidence level, e.g. 0.95 or 0.99");
    bias->add_option("--attribute", attribute, "age | ideology | zone | education | sex");
    export_finetune->add_option("--backend-name", finetune_backend,
                                "fine-tune profile (see hyperparameter sidecar)");
    export_finetune->add_option("--train-fraction", finetune_train_fraction,
                                "export only the train half of a seeded split");
    for (auto* sub : {adequacy, augment_eval}) sub->add_flag("--svg", svg, "emit line charts");
    synth->add_option("--participants", synth_participants, "synthetic participant count");
    synth->add_option("--proposals", synth_proposals, "synthetic proposal count");
    synth->add_option("--pairs", synth_pairs, "pairs elicited per participant");
    synth->add_option("--effect", synth_effect, "demographic effect strength");
    synth->add_option("--noise", synth_noise, "choice noise scale");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        std::ostringstream buffer_out, buffer_err;
        const int code = app.exit(e, buffer_out, buffer_err);
        out << buffer_out.str();
        err << buffer_err.str();
        return code == 0 ? 0 : 1;
    }

    try {
        RunConfig config;
        if (!config_path.empty()) config = load_config_file(config_path);
        if (app.count("--seed")) config.seed = seed;
        if (app.count("--out")) config.out_dir = out_dir;
        auto counted = [&](const char* flag) {
            for (auto* sub : app.get_subcommands()) {
                const auto* option = sub->get_option_no_throw(flag);
                if (option && option->count()) return true;
            }
            return false;
        };
        if (counted("--backend")) config.backend_kind = backend_kind;
        if (counted("--level")) config.ci_level = ci_level;
        if (counted("--attribute")) config.bias_attribute = attribute;
        if (counted("--backend-name")) config.finetune_backend = finetune_backend;
        if (counted("--train-fraction")) config.finetune_train_fraction = finetune_train_fraction;
        if (counted("--svg")) config.emit_svg = svg;
        if (counted("--participants") || counted("--proposals") || counted("--pairs") ||
            counted("--effect") || counted("--noise")) {
            data::SyntheticPopulationSpec spec =
                config.synthetic.value_or(data::SyntheticPopulationSpec{});
            if (counted("--participants")) spec.participant_count = synth_participants;
            if (counted("--proposals")) spec.proposal_count = synth_proposals;
            if (counted("--pairs")) spec.pairs_per_participant = synth_pairs;
            if (counted("--effect")) spec.demographic_effect_strength = synth_effect;
            if (counted("--noise")) spec.noise_scale = synth_noise;
            config.synthetic = spec;
        }

        if (app.got_subcommand(ingest)) return cmd_ingest(config, out);
        if (app.got_subcommand(winrates)) return cmd_winrates(config, out);
        if (app.got_subcommand(adequacy)) return cmd_adequacy(config, out);
        if (app.got_subcommand(accuracy)) return cmd_accuracy(config, out);
        if (app.got_subcommand(bias)) return cmd_bias(config, out);
        if (app.got_subcommand(augment_eval)) return cmd_augment_eval(config, out);
        if (app.got_subcommand(export_finetune)) return cmd_export_finetune(config, out);
        if (app.got_subcommand(synth)) return cmd_synth(config, out);
        err << "no command selected\n";
        return 1;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return e.backend_fault() ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace augdem::cli
