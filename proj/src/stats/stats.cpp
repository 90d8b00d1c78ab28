#include "augdem/stats/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "augdem/core/aggregate.hpp"
#include "augdem/core/errors.hpp"
#include "augdem/core/rng.hpp"
#include "augdem/core/sampling.hpp"

namespace augdem::stats {
namespace {

double mean_of(std::span<const double> values) {
    double sum = 0.0;
    for (const double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

// Unbiased sample variance (n - 1 denominator).
double variance_of(std::span<const double> values, double mean) {
    double sum = 0.0;
    for (const double v : values) sum += (v - mean) * (v - mean);
    return sum / static_cast<double>(values.size() - 1);
}

// Linear-interpolation empirical quantile over a sorted vector.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double w = h - static_cast<double>(lo);
    return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-14;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

struct ProfileFit {
    double a = 0.0;
    double rss = 0.0;
};

// Closed-form optimal `a` for fixed `b`, with the curve kept inside
// [0, 1.05] over the data range.
ProfileFit profile_fit(const std::vector<double>& xs, const std::vector<double>& ys, double b,
                       double x_max) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double g = xs[i] / (b + xs[i]);
        num += ys[i] * g;
        den += g * g;
    }
    double a = den > 0.0 ? num / den : 0.0;
    const double peak = x_max / (b + x_max);
    if (peak > 0.0) a = std::clamp(a, 0.0, 1.05 / peak);
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - a * xs[i] / (b + xs[i]);
        rss += r * r;
    }
    return {a, rss};
}

}  // namespace

double accuracy(std::span<const LabeledPrediction> predictions) {
    if (predictions.empty()) throw EmptyInput("accuracy over zero predictions");
    std::size_t correct = 0;
    for (const auto& p : predictions)
        if (p.predicted == p.truth) ++correct;
    return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

ConfidenceInterval bootstrap_ci(std::span<const double> values, double level,
                                std::size_t iterations, std::uint64_t seed) {
    if (values.empty()) throw EmptyInput("bootstrap over zero values");
    if (iterations < 1) throw ConfigError("bootstrap iterations must be >= 1");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence level must be in (0, 1)");

    SplitRng rng(seed);
    const std::size_t n = values.size();
    std::vector<double> means(iterations);
    for (std::size_t it = 0; it < iterations; ++it) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += values[rng.uniform_u64(n)];
        means[it] = sum / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());

    ConfidenceInterval ci;
    ci.level = level;
    ci.iterations = iterations;
    ci.point_estimate = mean_of(values);
    const double alpha = (1.0 - level) / 2.0;
    ci.low = quantile_sorted(means, alpha);
    ci.high = quantile_sorted(means, 1.0 - alpha);
    return ci;
}

double pearson_r2(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DegenerateInput("vector lengths differ");
    if (x.size() < 2) throw DegenerateInput("need at least 2 points");
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("constant vector has no correlation");
    const double r = sxy / std::sqrt(sxx * syy);
    return r * r;
}

double winrate_r2(const WinRateTable& reference, const WinRateTable& candidate) {
    std::vector<double> ref, cand;
    for (const auto& [id, entry] : reference.entries) {
        if (!entry.win_rate) continue;
        const auto it = candidate.entries.find(id);
        if (it == candidate.entries.end() || !it->second.win_rate) continue;
        ref.push_back(*entry.win_rate);
        cand.push_back(*it->second.win_rate);
    }
    if (ref.size() < 2)
        throw DegenerateInput("fewer than 2 proposals with defined win rates on both sides");
    return pearson_r2(ref, cand);
}

double winrate_r2(const PreferenceDataset& reference, const PreferenceDataset& candidate) {
    return winrate_r2(core::win_rates(core::tally(reference)),
                      core::win_rates(core::tally(candidate)));
}

std::vector<AdequacyPoint> adequacy_curve(const PreferenceDataset& dataset,
                                          const std::vector<std::size_t>& sizes,
                                          std::size_t repetitions, std::uint64_t seed) {
    if (repetitions == 0) throw ConfigError("adequacy repetitions must be >= 1");
    const std::size_t population = dataset.participants.size();
    std::vector<AdequacyPoint> points;
    SplitRng rng(seed);
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        const std::size_t size = sizes[s];
        if (2 * size > population)
            throw SizeTooLarge("adequacy size " + std::to_string(size) +
                               " exceeds half the population");
        SplitRng size_rng = rng.split(s);
        double sum = 0.0;
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
            const auto [left, right] =
                core::disjoint_pair(dataset, size, size_rng.split(rep).next_u64());
            sum += winrate_r2(left, right);
        }
        AdequacyPoint point;
        point.sample_size = size;
        point.fraction = static_cast<double>(size) / static_cast<double>(population);
        point.r_squared = sum / static_cast<double>(repetitions);
        point.repetitions = repetitions;
        points.push_back(point);
    }
    return points;
}

RationalFit fit_rational(const std::vector<AdequacyPoint>& points) {
    std::vector<double> xs, ys;
    for (const auto& p : points) {
        xs.push_back(p.fraction);
        ys.push_back(p.r_squared);
    }
    {
        std::vector<double> distinct = xs;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        if (distinct.size() < 2) throw DegenerateInput("need at least 2 distinct sizes");
    }
    const double x_max = *std::max_element(xs.begin(), xs.end());

    // Coarse log grid over b, then golden-section refinement around the best
    // bracket. The profile over a is exact, so only b is searched.
    constexpr int kGrid = 240;
    const double b_lo = 1e-9, b_hi = 50.0 * 1.0;
    double best_b = b_lo;
    double best_rss = std::numeric_limits<double>::infinity();
    std::vector<double> grid(kGrid);
    for (int i = 0; i < kGrid; ++i) {
        const double t = static_cast<double>(i) / (kGrid - 1);
        grid[i] = b_lo * std::pow(b_hi / b_lo, t);
        const double rss = profile_fit(xs, ys, grid[i], x_max).rss;
        if (rss < best_rss) {
            best_rss = rss;
            best_b = grid[i];
        }
    }

    double lo = best_b, hi = best_b;
    for (int i = 0; i < kGrid; ++i) {
        if (grid[i] == best_b) {
            lo = grid[std::max(0, i - 1)];
            hi = grid[std::min(kGrid - 1, i + 1)];
            break;
        }
    }
    constexpr double kGolden = 0.61803398874989484820;
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = profile_fit(xs, ys, x1, x_max).rss;
    double f2 = profile_fit(xs, ys, x2, x_max).rss;
    for (int iter = 0; iter < 200 && hi - lo > 1e-13 * (1.0 + hi); ++iter) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = profile_fit(xs, ys, x1, x_max).rss;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = profile_fit(xs, ys, x2, x_max).rss;
        }
    }
    const double refined_b = f1 < f2 ? x1 : x2;
    const double refined_rss = std::min(f1, f2);
    if (refined_rss < best_rss) {
        best_rss = refined_rss;
        best_b = refined_b;
    }

    const ProfileFit fit = profile_fit(xs, ys, best_b, x_max);
    return {fit.a, best_b, fit.rss};
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                               a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_continued_fraction(a, b, x) / a;
    return 1.0 - bt * beta_continued_fraction(b, a, 1.0 - x) / b;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw DegenerateInput("each sample needs >= 2 values");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double ma = mean_of(a), mb = mean_of(b);
    const double va = variance_of(a, ma), vb = variance_of(b, mb);
    const double sea = va / na, seb = vb / nb;
    const double se2 = sea + seb;
    if (se2 <= 0.0) {
        // Zero variance in both samples: equal means give t = 0, p = 1;
        // separated means are the degenerate all-correct vs all-wrong case.
        if (ma == mb) return {0.0, na + nb - 2.0, 1.0};
        return {ma > mb ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity(),
                na + nb - 2.0, 0.0};
    }
    WelchResult r;
    r.t = (ma - mb) / std::sqrt(se2);
    r.df = se2 * se2 / (sea * sea / (na - 1.0) + seb * seb / (nb - 1.0));
    r.p = incomplete_beta(r.df / 2.0, 0.5, r.df / (r.df + r.t * r.t));
    return r;
}

SubgroupAnalysis subgroup_accuracy_analysis(const PreferenceDataset& test,
                                            std::span<const CorrectnessRecord> correctness,
                                            DemographicField attribute, double ci_level,
                                            std::size_t ci_iterations, std::uint64_t seed) {
    if (!is_enumerated(attribute))
        throw ConfigError("subgroup analysis needs an enumerated attribute, got " +
                          field_name(attribute));

    // category -> participant -> per-prediction correctness
    std::map<std::string, std::map<ParticipantId, std::vector<double>>> by_category;
    std::map<std::string, std::vector<double>> flat;
    for (const auto& record : correctness) {
        const Participant* participant = test.find_participant(record.participant_id);
        if (!participant)
            throw UnknownParticipant("correctness record for unknown participant '" +
                                     record.participant_id + "'");
        const auto category = category_of(participant->demographics, attribute);
        if (!category) continue;
        by_category[*category][record.participant_id].push_back(record.correct ? 1.0 : 0.0);
        flat[*category].push_back(record.correct ? 1.0 : 0.0);
    }

    const auto& categories = field_categories(attribute);
    for (const auto& category : categories) {
        if (!by_category.count(category))
            throw EmptyCategory("no predictions for " + field_name(attribute) + " = " + category);
    }

    SubgroupAnalysis analysis;
    SplitRng rng(seed);
    for (const auto& category : categories) {
        const auto& values = flat.at(category);
        AccuracyReport report;
        report.subgroup = category;
        report.n_predictions = values.size();
        report.accuracy = mean_of(values);
        report.interval =
            bootstrap_ci(values, ci_level, ci_iterations, rng.split(category).next_u64());
        analysis.reports.push_back(std::move(report));
    }

    // Welch unit: per-participant mean correctness.
    auto participant_means = [&](const std::string& category) {
        std::vector<double> means;
        for (const auto& [_, values] : by_category.at(category)) means.push_back(mean_of(values));
        return means;
    };
    for (std::size_t i = 0; i < categories.size(); ++i) {
        for (std::size_t j = i + 1; j < categories.size(); ++j) {
            const auto va = participant_means(categories[i]);
            const auto vb = participant_means(categories[j]);
            const WelchResult w = welch_t_test(va, vb);
            SubgroupComparison cmp;
            cmp.group_a = categories[i];
            cmp.group_b = categories[j];
            cmp.t_statistic = w.t;
            cmp.degrees_of_freedom = w.df;
            cmp.p_value = w.p;
            analysis.comparisons.push_back(std::move(cmp));
        }
    }
    return analysis;
}

}  // namespace augdem::stats
