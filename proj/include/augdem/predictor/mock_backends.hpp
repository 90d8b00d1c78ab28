#pragma once

#include <map>
#include <memory>
#include <unordered_map>

#include "augdem/predictor/backend.hpp"

namespace augdem::predictor {

// Always answers A, mirroring the positional bias of non-fine-tuned models
// at zero temperature.
class AlwaysFirstBackend final : public PredictorBackend {
public:
    std::string name() const override { return "mock:always_first"; }
    SingleOrderPrediction predict(const PredictionQuery&) override { return {Choice::A, ""}; }
    int max_concurrency() const override { return 8; }
};

// Replays recorded choices from a wrapped dataset, keyed by the query's
// subject hint and unordered pair; repeated elicitations of the same pair are
// replayed in dataset order via the elicitation ordinal.
class OracleBackend final : public PredictorBackend {
public:
    explicit OracleBackend(const PreferenceDataset& truth);

    std::string name() const override { return "mock:oracle"; }
    SingleOrderPrediction predict(const PredictionQuery& query) override;
    int max_concurrency() const override { return 8; }

private:
    // (participant, lo id, hi id) -> winning proposal id per elicitation, in order.
    std::map<std::tuple<ParticipantId, ProposalId, ProposalId>, std::vector<ProposalId>> recorded_;
};

// Demographic-neighborhood vote, order-insensitive by construction. Decision
// ladder per unordered pair:
//   1. direct votes of the k most-similar training participants on that pair,
//      when they amount to a real majority (at least min_votes, not tied);
//   2. win rates of the two proposals over all training elicitations weighted
//      by (1 + similarity)^gamma - with no demographics this degrades to the
//      plain global majority;
//   3. unweighted training win rates, then the lower proposal id.
// Similarity is the count of populated-and-equal demographic fields.
class NearestNeighborBackend final : public PredictorBackend {
public:
    explicit NearestNeighborBackend(const PreferenceDataset& training, std::size_t k = 5,
                                    int gamma = 8, std::uint64_t min_votes = 3);

    std::string name() const override { return "mock:nearest_neighbor"; }
    SingleOrderPrediction predict(const PredictionQuery& query) override;
    int max_concurrency() const override { return 8; }

    // The underlying pair decision, exposed for oracle-style verification.
    ProposalId preferred_of_pair(const Demographics& demographics, ProposalId x,
                                 ProposalId y) const;

private:
    struct TrainingParticipant {
        Demographics demographics;
        // (lo, hi) -> (wins for lo, total elicitations)
        std::map<std::pair<ProposalId, ProposalId>, std::pair<std::uint64_t, std::uint64_t>> votes;
        std::map<ProposalId, std::uint64_t> wins;
        std::map<ProposalId, std::uint64_t> appearances;
    };

    double weighted_rate(ProposalId id, const std::vector<double>& weights) const;

    std::vector<TrainingParticipant> participants_;
    std::map<ProposalId, double> win_rates_;
    std::size_t k_;
    int gamma_;
    std::uint64_t min_votes_;
};

int demographic_similarity(const Demographics& a, const Demographics& b);

}  // namespace augdem::predictor
