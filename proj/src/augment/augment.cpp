#include "augdem/augment/augment.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "augdem/core/errors.hpp"
#include "augdem/core/rng.hpp"
#include "augdem/core/sampling.hpp"
#include "augdem/stats/stats.hpp"

namespace augdem::augment {

std::string augmentation_type_name(AugmentationType type) {
    switch (type) {
        case AugmentationType::I_A: return "I_A";
        case AugmentationType::I_B: return "I_B";
        case AugmentationType::II_A: return "II_A";
        case AugmentationType::II_B: return "II_B";
        case AugmentationType::II_C: return "II_C";
        case AugmentationType::III: return "III";
    }
    return "?";
}

AugmentationType parse_augmentation_type(const std::string& name) {
    for (const auto type : {AugmentationType::I_A, AugmentationType::I_B, AugmentationType::II_A,
                            AugmentationType::II_B, AugmentationType::II_C, AugmentationType::III})
        if (augmentation_type_name(type) == name) return type;
    throw ConfigError("unknown augmentation type '" + name + "'");
}

void require_executable(AugmentationType type) {
    if (type != AugmentationType::I_B)
        throw NotImplemented("augmentation type " + augmentation_type_name(type) +
                             " is recognized but not executable; only I_B is implemented");
}

PairSchedule elicited_pair_schedule(const PreferenceDataset& dataset,
                                    const std::vector<Participant>& participants) {
    std::unordered_set<std::string> wanted;
    for (const auto& p : participants) wanted.insert(p.id);

    PairSchedule schedule;
    for (const auto& p : participants) schedule[p.id];  // extras with no data get empty lists
    std::map<std::tuple<ParticipantId, ProposalId, ProposalId>, std::size_t> seen;
    for (const auto& choice : dataset.choices) {
        if (!wanted.count(choice.participant_id)) continue;
        const auto lo = std::min(choice.proposal_a, choice.proposal_b);
        const auto hi = std::max(choice.proposal_a, choice.proposal_b);
        ScheduledPair pair;
        pair.first = choice.proposal_a;
        pair.second = choice.proposal_b;
        pair.ordinal = seen[{choice.participant_id, lo, hi}]++;
        schedule[choice.participant_id].push_back(pair);
    }
    return schedule;
}

PairSchedule random_pair_schedule(const std::vector<Proposal>& proposals,
                                  const std::vector<Participant>& participants,
                                  std::size_t pairs_per_participant, std::uint64_t seed) {
    if (proposals.size() < 2) throw ConfigError("need at least 2 proposals to schedule pairs");
    SplitRng rng(seed);
    PairSchedule schedule;
    for (std::size_t i = 0; i < participants.size(); ++i) {
        SplitRng participant_rng = rng.split(i);
        auto& pairs = schedule[participants[i].id];
        std::map<std::pair<ProposalId, ProposalId>, std::size_t> seen;
        for (std::size_t k = 0; k < pairs_per_participant; ++k) {
            const std::size_t x =
                static_cast<std::size_t>(participant_rng.uniform_u64(proposals.size()));
            std::size_t y =
                static_cast<std::size_t>(participant_rng.uniform_u64(proposals.size() - 1));
            if (y >= x) ++y;
            ScheduledPair pair;
            const bool x_first = participant_rng.bernoulli(0.5);
            pair.first = proposals[x_first ? x : y].id;
            pair.second = proposals[x_first ? y : x].id;
            pair.ordinal = seen[{std::min(pair.first, pair.second),
                                 std::max(pair.first, pair.second)}]++;
            pairs.push_back(pair);
        }
    }
    return schedule;
}

PreferenceDataset AugmentedDataset::combined() const {
    PreferenceDataset out = base;
    out.participants.insert(out.participants.end(), extra_participants.begin(),
                            extra_participants.end());
    out.choices.insert(out.choices.end(), synthetic_choices.begin(), synthetic_choices.end());
    return out;
}

std::vector<Participant> select_extras(const PreferenceDataset& full_population,
                                       const PreferenceDataset& sample,
                                       const AugmentationPlan& plan) {
    require_executable(plan.kind);
    if (!(plan.extra_fraction >= 0.0 && plan.extra_fraction <= 1.0))
        throw ConfigError("extra_fraction must be in [0, 1]");

    std::unordered_set<std::string> in_sample;
    for (const auto& p : sample.participants) in_sample.insert(p.id);
    std::vector<const Participant*> remaining;
    for (const auto& p : full_population.participants)
        if (!in_sample.count(p.id)) remaining.push_back(&p);

    const std::size_t k =
        round_half_up(plan.extra_fraction * static_cast<double>(remaining.size()));
    SplitRng rng = SplitRng(plan.seed).split("extras");
    std::vector<std::size_t> idx(remaining.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < idx.size(); ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_u64(idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    std::vector<std::size_t> picked(idx.begin(), idx.begin() + std::min(k, idx.size()));
    std::sort(picked.begin(), picked.end());  // keep population order

    std::vector<Participant> extras;
    extras.reserve(picked.size());
    for (const std::size_t i : picked) extras.push_back(*remaining[i]);
    return extras;
}

AugmentedDataset augment_type_ib(const PreferenceDataset& sample,
                                 const std::vector<Participant>& extras,
                                 const PairSchedule& schedule,
                                 predictor::PredictorBackend& backend, std::uint64_t seed,
                                 FailurePolicy on_failure) {
    std::unordered_set<std::string> in_sample;
    for (const auto& p : sample.participants) in_sample.insert(p.id);
    std::unordered_map<ProposalId, const Proposal*> proposals;
    for (const auto& p : sample.proposals) proposals[p.id] = &p;

    AugmentedDataset out;
    out.base = sample;

    std::vector<predictor::PredictionQuery> queries;
    std::vector<std::pair<ProposalId, ProposalId>> displayed;
    for (const auto& extra : extras) {
        if (in_sample.count(extra.id))
            throw ConfigError("extra participant '" + extra.id + "' is already in the sample");
        out.extra_participants.push_back(extra);
        const auto scheduled = schedule.find(extra.id);
        if (scheduled == schedule.end()) continue;
        for (const auto& pair : scheduled->second) {
            const auto first = proposals.find(pair.first);
            const auto second = proposals.find(pair.second);
            if (first == proposals.end() || second == proposals.end())
                throw UnknownProposal("scheduled pair references a proposal outside the dataset");
            predictor::PredictionQuery query;
            query.demographics = extra.demographics;
            query.first = *first->second;
            query.second = *second->second;
            query.subject_id = extra.id;
            query.elicitation_ordinal = pair.ordinal;
            queries.push_back(std::move(query));
            displayed.emplace_back(pair.first, pair.second);
        }
    }

    const SplitRng fanout_rng = SplitRng(seed).split("type_ib");
    std::vector<predictor::PredictedChoice> predictions;
    if (on_failure == FailurePolicy::FailFast) {
        predictions = predictor::dual_order_predict_batch(backend, queries, fanout_rng);
    } else {
        predictions.resize(queries.size());
        std::vector<bool> ok(queries.size(), false);
        for (std::size_t i = 0; i < queries.size(); ++i) {
            try {
                predictions[i] = predictor::dual_order_predict(backend, queries[i],
                                                               fanout_rng.split(i));
                ok[i] = true;
            } catch (const Error&) {
                // skip-and-log policy: the query is dropped, count continues
            }
        }
        std::vector<predictor::PredictionQuery> kept_queries;
        std::vector<std::pair<ProposalId, ProposalId>> kept_displayed;
        std::vector<predictor::PredictedChoice> kept_predictions;
        for (std::size_t i = 0; i < queries.size(); ++i) {
            if (!ok[i]) continue;
            kept_queries.push_back(queries[i]);
            kept_displayed.push_back(displayed[i]);
            kept_predictions.push_back(predictions[i]);
        }
        queries = std::move(kept_queries);
        displayed = std::move(kept_displayed);
        predictions = std::move(kept_predictions);
    }

    for (std::size_t i = 0; i < queries.size(); ++i) {
        PairwiseChoice choice;
        choice.participant_id = *queries[i].subject_id;
        choice.proposal_a = displayed[i].first;
        choice.proposal_b = displayed[i].second;
        choice.chosen = predictions[i].chosen;
        out.synthetic_choices.push_back(std::move(choice));
    }
    return out;
}

EvaluationResult evaluate_augmentation(const PreferenceDataset& full,
                                       const std::vector<double>& sample_fractions,
                                       const AugmentationPlan& plan,
                                       const BackendFactory& backend_factory,
                                       std::size_t repetitions, std::uint64_t seed,
                                       double ci_level, std::size_t ci_iterations) {
    require_executable(plan.kind);
    if (repetitions == 0) throw ConfigError("repetitions must be >= 1");
    for (const double f : sample_fractions)
        if (!(f > 0.0 && f < 1.0)) throw ConfigError("sample fractions must be in (0, 1)");

    const SplitRng rng(seed);
    EvaluationResult result;
    for (std::size_t fi = 0; fi < sample_fractions.size(); ++fi) {
        const double fraction = sample_fractions[fi];
        const SplitRng fraction_rng = rng.split(fi);
        std::vector<double> plain_values, augmented_values;
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
            SplitRng rep_rng = fraction_rng.split(rep);
            const PreferenceDataset sample =
                core::sample_participants(full, {fraction, rep_rng.split("sample").next_u64()});

            const auto backend = backend_factory(sample);
            AugmentationPlan rep_plan = plan;
            rep_plan.seed = rep_rng.split("extras").next_u64();
            const auto extras = select_extras(full, sample, rep_plan);
            const auto schedule = elicited_pair_schedule(full, extras);
            const AugmentedDataset augmented =
                augment_type_ib(sample, extras, schedule, *backend,
                                rep_rng.split("predict").next_u64());

            CurveRecord record;
            record.fraction = fraction;
            record.repetition = rep;
            record.plain_r2 = stats::winrate_r2(full, sample);
            record.augmented_r2 = stats::winrate_r2(full, augmented.combined());
            record.synthetic_choice_count = augmented.synthetic_choices.size();
            plain_values.push_back(record.plain_r2);
            augmented_values.push_back(record.augmented_r2);
            result.records.push_back(record);
        }

        CurveSummary summary;
        summary.fraction = fraction;
        summary.repetitions = repetitions;
        summary.plain_mean = 0.0;
        for (const double v : plain_values) summary.plain_mean += v;
        summary.plain_mean /= static_cast<double>(plain_values.size());
        summary.augmented_mean = 0.0;
        for (const double v : augmented_values) summary.augmented_mean += v;
        summary.augmented_mean /= static_cast<double>(augmented_values.size());
        if (plain_values.size() >= 2) {
            const auto plain_ci = stats::bootstrap_ci(plain_values, ci_level, ci_iterations,
                                                      fraction_rng.split("ci_plain").next_u64());
            const auto aug_ci = stats::bootstrap_ci(augmented_values, ci_level, ci_iterations,
                                                    fraction_rng.split("ci_aug").next_u64());
            summary.plain_low = plain_ci.low;
            summary.plain_high = plain_ci.high;
            summary.augmented_low = aug_ci.low;
            summary.augmented_high = aug_ci.high;
        } else {
            summary.plain_low = summary.plain_high = summary.plain_mean;
            summary.augmented_low = summary.augmented_high = summary.augmented_mean;
        }
        result.summaries.push_back(summary);
    }
    return result;
}

}  // namespace augdem::augment
