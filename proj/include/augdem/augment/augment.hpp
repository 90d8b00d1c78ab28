#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "augdem/predictor/backend.hpp"

namespace augdem::augment {

enum class AugmentationType { I_A, I_B, II_A, II_B, II_C, III };

std::string augmentation_type_name(AugmentationType type);
AugmentationType parse_augmentation_type(const std::string& name);

// Throws NotImplemented, naming the type, for everything except I_B.
void require_executable(AugmentationType type);

struct AugmentationPlan {
    AugmentationType kind = AugmentationType::I_B;
    double extra_fraction = 0.0;  // of the remaining (out-of-sample) population
    std::uint64_t seed = 0;
};

// One pair to predict for an extra participant. The ordinal counts repeated
// elicitations of the same unordered pair, letting ground-truth backends
// replay duplicates faithfully.
struct ScheduledPair {
    ProposalId first = 0;
    ProposalId second = 0;
    std::size_t ordinal = 0;
};

using PairSchedule = std::map<ParticipantId, std::vector<ScheduledPair>>;

// Default schedule: each participant's actually-elicited pairs, in dataset
// order and with the recorded display order.
PairSchedule elicited_pair_schedule(const PreferenceDataset& dataset,
                                    const std::vector<Participant>& participants);

// Fallback for settings without platform pair assignments: pairs drawn
// uniformly at random, display order randomized.
PairSchedule random_pair_schedule(const std::vector<Proposal>& proposals,
                                  const std::vector<Participant>& participants,
                                  std::size_t pairs_per_participant, std::uint64_t seed);

struct AugmentedDataset {
    PreferenceDataset base;                       // the input sample, untouched
    std::vector<Participant> extra_participants;  // disjoint from base participants
    std::vector<PairwiseChoice> synthetic_choices;

    // Elicited + synthetic choices merged for downstream aggregation.
    PreferenceDataset combined() const;
};

enum class FailurePolicy { FailFast, SkipAndLog };

// Uniform seeded sample of round(extra_fraction * |population - sample|)
// participants from outside the sample.
std::vector<Participant> select_extras(const PreferenceDataset& full_population,
                                       const PreferenceDataset& sample,
                                       const AugmentationPlan& plan);

// Type I B: for every extra participant and scheduled pair, predict one
// choice via dual_order_predict using only that participant's demographics.
AugmentedDataset augment_type_ib(const PreferenceDataset& sample,
                                 const std::vector<Participant>& extras,
                                 const PairSchedule& schedule,
                                 predictor::PredictorBackend& backend, std::uint64_t seed,
                                 FailurePolicy on_failure = FailurePolicy::FailFast);

// Produces a backend conditioned on one sample. This is the seam between
// in-process mocks fitted on the sample and externally fine-tuned models
// reached through a remote endpoint.
using BackendFactory =
    std::function<std::unique_ptr<predictor::PredictorBackend>(const PreferenceDataset& sample)>;

struct CurveRecord {
    double fraction = 0.0;
    std::size_t repetition = 0;
    double plain_r2 = 0.0;
    double augmented_r2 = 0.0;
    std::size_t synthetic_choice_count = 0;
};

struct CurveSummary {
    double fraction = 0.0;
    std::size_t repetitions = 0;
    double plain_mean = 0.0;
    double plain_low = 0.0;
    double plain_high = 0.0;
    double augmented_mean = 0.0;
    double augmented_low = 0.0;
    double augmented_high = 0.0;
};

struct EvaluationResult {
    std::vector<CurveRecord> records;
    std::vector<CurveSummary> summaries;
};

// For each fraction and repetition: draw a sample, condition a backend on it,
// augment per plan, and score both the plain and the augmented sample against
// the full population by win-rate R2.
EvaluationResult evaluate_augmentation(const PreferenceDataset& full,
                                       const std::vector<double>& sample_fractions,
                                       const AugmentationPlan& plan,
                                       const BackendFactory& backend_factory,
                                       std::size_t repetitions, std::uint64_t seed,
                                       double ci_level = 0.95, std::size_t ci_iterations = 100);

}  // namespace augdem::augment
