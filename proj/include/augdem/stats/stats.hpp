#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "augdem/core/types.hpp"

namespace augdem::stats {

struct ConfidenceInterval {
    double level = 0.0;
    double low = 0.0;
    double high = 0.0;
    double point_estimate = 0.0;
    std::size_t iterations = 0;
};

struct AccuracyReport {
    std::string subgroup;
    std::size_t n_predictions = 0;
    double accuracy = 0.0;
    ConfidenceInterval interval;
};

struct SubgroupComparison {
    std::string group_a;
    std::string group_b;
    double t_statistic = 0.0;
    double degrees_of_freedom = 0.0;
    double p_value = 0.0;
};

struct AdequacyPoint {
    std::size_t sample_size = 0;
    double fraction = 0.0;
    double r_squared = 0.0;
    std::size_t repetitions = 0;
};

// Least-squares parameters of r2(x) = a * x / (b + x).
struct RationalFit {
    double a = 0.0;
    double b = 0.0;
    double residual_sum_squares = 0.0;
};

struct LabeledPrediction {
    ProposalId predicted = 0;
    ProposalId truth = 0;
};

// Per-prediction correctness joined back to the participant, the unit for
// subgroup aggregation.
struct CorrectnessRecord {
    ParticipantId participant_id;
    bool correct = false;
};

double accuracy(std::span<const LabeledPrediction> predictions);

// Percentile bootstrap of the mean: resample with replacement `iterations`
// times and take the ((1-level)/2, 1-(1-level)/2) empirical quantiles.
ConfidenceInterval bootstrap_ci(std::span<const double> values, double level,
                                std::size_t iterations, std::uint64_t seed);

// Square of the sample Pearson correlation. Throws DegenerateInput on
// length < 2 or a constant vector.
double pearson_r2(std::span<const double> x, std::span<const double> y);

// Pearson R2 of win rates over proposals with defined rates on both sides;
// undefined proposals are excluded pairwise rather than imputed.
double winrate_r2(const WinRateTable& reference, const WinRateTable& candidate);
double winrate_r2(const PreferenceDataset& reference, const PreferenceDataset& candidate);

// Per size: `repetitions` disjoint equal-size sample pairs, winrate_r2 per
// pair, mean recorded.
std::vector<AdequacyPoint> adequacy_curve(const PreferenceDataset& dataset,
                                          const std::vector<std::size_t>& sizes,
                                          std::size_t repetitions, std::uint64_t seed);

// Deterministic fit over point fractions: profile least squares (closed-form
// a given b) on a coarse b grid, refined by golden-section search.
RationalFit fit_rational(const std::vector<AdequacyPoint>& points);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 0.0;
};

// Two-sample unequal-variance t-test: Welch statistic, Welch-Satterthwaite
// degrees of freedom, two-sided p via the regularized incomplete beta.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct SubgroupAnalysis {
    std::vector<AccuracyReport> reports;
    std::vector<SubgroupComparison> comparisons;
};

// Per-category accuracy with bootstrap CI, plus a Welch test over
// per-participant mean correctness for every category pair.
SubgroupAnalysis subgroup_accuracy_analysis(const PreferenceDataset& test,
                                            std::span<const CorrectnessRecord> correctness,
                                            DemographicField attribute, double ci_level,
                                            std::size_t ci_iterations, std::uint64_t seed);

// Regularized incomplete beta I_x(a, b); exposed for the t distribution.
double incomplete_beta(double a, double b, double x);

}  // namespace augdem::stats
