#include "augdem/predictor/mock_backends.hpp"

#include <algorithm>

#include "augdem/core/aggregate.hpp"
#include "augdem/core/errors.hpp"

namespace augdem::predictor {
namespace {

std::pair<ProposalId, ProposalId> ordered_pair(ProposalId x, ProposalId y) {
    return x < y ? std::make_pair(x, y) : std::make_pair(y, x);
}

double similarity_weight(int similarity, int gamma) {
    double w = 1.0;
    for (int i = 0; i < gamma; ++i) w *= 1.0 + similarity;
    return w;
}

}  // namespace

OracleBackend::OracleBackend(const PreferenceDataset& truth) {
    for (const auto& choice : truth.choices) {
        const auto pair = ordered_pair(choice.proposal_a, choice.proposal_b);
        recorded_[{choice.participant_id, pair.first, pair.second}].push_back(choice.chosen_id());
    }
}

SingleOrderPrediction OracleBackend::predict(const PredictionQuery& query) {
    if (!query.subject_id)
        throw ConfigError("oracle backend needs a subject hint on the query");
    const auto pair = ordered_pair(query.first.id, query.second.id);
    const auto it = recorded_.find({*query.subject_id, pair.first, pair.second});
    if (it == recorded_.end() || it->second.empty())
        throw UnknownParticipant("oracle has no recorded choice for participant '" +
                                 *query.subject_id + "' on pair (" + std::to_string(pair.first) +
                                 ", " + std::to_string(pair.second) + ")");
    const auto& replay = it->second;
    const std::size_t index = std::min(query.elicitation_ordinal, replay.size() - 1);
    const ProposalId winner = replay[index];
    return {winner == query.first.id ? Choice::A : Choice::B, ""};
}

int demographic_similarity(const Demographics& a, const Demographics& b) {
    int score = 0;
    score += a.age && b.age && *a.age == *b.age;
    score += a.ideology && b.ideology && *a.ideology == *b.ideology;
    score += a.zone && b.zone && *a.zone == *b.zone;
    score += a.education && b.education && *a.education == *b.education;
    score += a.sex && b.sex && *a.sex == *b.sex;
    score += a.city && b.city && *a.city == *b.city;
    score += a.state && b.state && *a.state == *b.state;
    return score;
}

NearestNeighborBackend::NearestNeighborBackend(const PreferenceDataset& training, std::size_t k,
                                               int gamma, std::uint64_t min_votes)
    : k_(k), gamma_(gamma), min_votes_(min_votes) {
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& participant : training.participants) {
        index[participant.id] = participants_.size();
        participants_.push_back({participant.demographics, {}, {}, {}});
    }
    for (const auto& choice : training.choices) {
        const auto pair = ordered_pair(choice.proposal_a, choice.proposal_b);
        auto& mine = participants_[index.at(choice.participant_id)];
        auto& vote = mine.votes[pair];
        vote.first += choice.chosen_id() == pair.first;
        vote.second += 1;
        mine.wins[choice.chosen_id()] += 1;
        mine.appearances[choice.proposal_a] += 1;
        mine.appearances[choice.proposal_b] += 1;
    }
    for (const auto& [id, entry] : core::win_rates(core::tally(training)).entries)
        if (entry.win_rate) win_rates_[id] = *entry.win_rate;
}

double NearestNeighborBackend::weighted_rate(ProposalId id,
                                             const std::vector<double>& weights) const {
    double wins = 0.0, appearances = 0.0;
    for (std::size_t i = 0; i < participants_.size(); ++i) {
        const auto& p = participants_[i];
        const auto w = p.wins.find(id);
        if (w != p.wins.end()) wins += weights[i] * static_cast<double>(w->second);
        const auto a = p.appearances.find(id);
        if (a != p.appearances.end()) appearances += weights[i] * static_cast<double>(a->second);
    }
    return appearances > 0.0 ? wins / appearances : -1.0;  // -1 marks "never appeared"
}

ProposalId NearestNeighborBackend::preferred_of_pair(const Demographics& demographics,
                                                     ProposalId x, ProposalId y) const {
    const auto pair = ordered_pair(x, y);

    std::vector<double> weights(participants_.size());
    std::vector<std::pair<int, std::size_t>> scored;
    scored.reserve(participants_.size());
    for (std::size_t i = 0; i < participants_.size(); ++i) {
        const int similarity = demographic_similarity(demographics, participants_[i].demographics);
        weights[i] = similarity_weight(similarity, gamma_);
        scored.emplace_back(-similarity, i);
    }

    // Stage 1: direct pair votes of the k nearest, ties in similarity broken
    // by training order.
    const std::size_t k = std::min(k_, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + k, scored.end());
    std::uint64_t lo_votes = 0, total = 0;
    for (std::size_t n = 0; n < k; ++n) {
        const auto& votes = participants_[scored[n].second].votes;
        const auto it = votes.find(pair);
        if (it == votes.end()) continue;
        lo_votes += it->second.first;
        total += it->second.second;
    }
    if (total >= min_votes_ && 2 * lo_votes != total)
        return 2 * lo_votes > total ? pair.first : pair.second;

    // Stage 2: similarity-weighted win rates over all training elicitations.
    const double lo_rate = weighted_rate(pair.first, weights);
    const double hi_rate = weighted_rate(pair.second, weights);
    if (lo_rate >= 0.0 && hi_rate >= 0.0 && lo_rate != hi_rate)
        return lo_rate > hi_rate ? pair.first : pair.second;

    // Stage 3: plain training win rates, then the lower id.
    const auto lo_global = win_rates_.find(pair.first);
    const auto hi_global = win_rates_.find(pair.second);
    if (lo_global != win_rates_.end() && hi_global != win_rates_.end() &&
        lo_global->second != hi_global->second)
        return lo_global->second > hi_global->second ? pair.first : pair.second;

    return pair.first;
}

SingleOrderPrediction NearestNeighborBackend::predict(const PredictionQuery& query) {
    const ProposalId winner =
        preferred_of_pair(query.demographics, query.first.id, query.second.id);
    return {winner == query.first.id ? Choice::A : Choice::B, ""};
}

}  // namespace augdem::predictor
