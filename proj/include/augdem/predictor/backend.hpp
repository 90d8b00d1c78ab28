#pragma once

#include <memory>
#include <string>
#include <vector>

#include "augdem/core/rng.hpp"
#include "augdem/predictor/prompt.hpp"

namespace augdem::predictor {

struct SingleOrderPrediction {
    Choice chosen = Choice::A;
    std::string raw_text;  // model response; empty for mocks
};

// Contract between the pipeline and anything that turns (demographics, pair)
// into a choice. Implementations must be deterministic given their own
// construction state; per-call randomness lives in the caller's rng.
class PredictorBackend {
public:
    virtual ~PredictorBackend() = default;
    virtual std::string name() const = 0;
    virtual SingleOrderPrediction predict(const PredictionQuery& query) = 0;
    // Number of in-flight predict() calls the backend tolerates.
    virtual int max_concurrency() const { return 1; }
};

struct PredictedChoice {
    Choice chosen = Choice::A;
    bool consistent_across_orders = false;
    std::vector<std::string> raw_responses;
};

// Queries both display orders to cancel positional bias. Agreement on the
// underlying proposal wins; disagreement falls to a seeded coin flip and is
// flagged consistent = false.
PredictedChoice dual_order_predict(PredictorBackend& backend, const PredictionQuery& query,
                                   SplitRng rng);

// Fan-out over many queries with order-independent aggregation: results are
// keyed by query index and per-query rngs are derived by index, so any
// completion order produces identical output. Runs up to
// backend.max_concurrency() worker threads.
std::vector<PredictedChoice> dual_order_predict_batch(PredictorBackend& backend,
                                                      const std::vector<PredictionQuery>& queries,
                                                      const SplitRng& base_rng);

// Maps a model response to a choice. Rules, in order: trimmed text equal to
// "A"/"B" case-insensitively; first standalone A/B token; exact containment
// of exactly one of the two proposal texts. Otherwise UnparseableResponse.
Choice parse_model_output(const std::string& text, const std::string& first_text,
                          const std::string& second_text);

}  // namespace augdem::predictor
