#include "augdem/predictor/backend.hpp"

#include <atomic>
#include <cctype>
#include <mutex>
#include <thread>

#include "augdem/core/errors.hpp"

namespace augdem::predictor {
namespace {

std::string trimmed(const std::string& s) {
    std::size_t begin = 0, end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

}  // namespace

PredictedChoice dual_order_predict(PredictorBackend& backend, const PredictionQuery& query,
                                   SplitRng rng) {
    const SingleOrderPrediction forward = backend.predict(query);
    const SingleOrderPrediction reversed = backend.predict(swap_order(query));

    const ProposalId forward_pick =
        forward.chosen == Choice::A ? query.first.id : query.second.id;
    const ProposalId reversed_pick =
        reversed.chosen == Choice::A ? query.second.id : query.first.id;

    PredictedChoice result;
    if (!forward.raw_text.empty()) result.raw_responses.push_back(forward.raw_text);
    if (!reversed.raw_text.empty()) result.raw_responses.push_back(reversed.raw_text);

    if (forward_pick == reversed_pick) {
        result.consistent_across_orders = true;
        result.chosen = forward_pick == query.first.id ? Choice::A : Choice::B;
    } else {
        result.consistent_across_orders = false;
        result.chosen = rng.bernoulli(0.5) ? Choice::A : Choice::B;
    }
    return result;
}

std::vector<PredictedChoice> dual_order_predict_batch(PredictorBackend& backend,
                                                      const std::vector<PredictionQuery>& queries,
                                                      const SplitRng& base_rng) {
    std::vector<PredictedChoice> results(queries.size());
    const int workers = std::max(1, std::min<int>(backend.max_concurrency(),
                                                  static_cast<int>(queries.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < queries.size(); ++i)
            results[i] = dual_order_predict(backend, queries[i], base_rng.split(i));
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= queries.size()) return;
            try {
                results[i] = dual_order_predict(backend, queries[i], base_rng.split(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(queries.size());
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

Choice parse_model_output(const std::string& text, const std::string& first_text,
                          const std::string& second_text) {
    const std::string t = trimmed(text);
    if (t.size() == 1) {
        if (t[0] == 'A' || t[0] == 'a') return Choice::A;
        if (t[0] == 'B' || t[0] == 'b') return Choice::B;
    }

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c != 'A' && c != 'a' && c != 'B' && c != 'b') continue;
        const bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
        const bool right_ok =
            i + 1 == text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 1]));
        if (left_ok && right_ok) return (c == 'A' || c == 'a') ? Choice::A : Choice::B;
    }

    const bool has_first = !first_text.empty() && text.find(first_text) != std::string::npos;
    const bool has_second = !second_text.empty() && text.find(second_text) != std::string::npos;
    if (has_first != has_second) return has_first ? Choice::A : Choice::B;

    throw UnparseableResponse("cannot extract a choice from: '" + text + "'");
}

}  // namespace augdem::predictor
