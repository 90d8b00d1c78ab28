#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "augdem/core/aggregate.hpp"
#include "augdem/core/errors.hpp"
#include "augdem/core/rng.hpp"
#include "augdem/core/sampling.hpp"
#include "augdem/data/synthetic.hpp"
#include "augdem/stats/stats.hpp"
#include "support/oracles.hpp"

using namespace augdem;

TEST_CASE("accuracy is the fraction of matching proposals") {
    std::vector<stats::LabeledPrediction> all_correct = {{1, 1}, {2, 2}};
    CHECK(stats::accuracy(all_correct) == 1.0);
    std::vector<stats::LabeledPrediction> all_wrong = {{1, 2}, {2, 1}};
    CHECK(stats::accuracy(all_wrong) == 0.0);
    std::vector<stats::LabeledPrediction> three_of_four = {{1, 1}, {2, 2}, {3, 3}, {4, 5}};
    CHECK(stats::accuracy(three_of_four) == 0.75);
    CHECK_THROWS_AS(stats::accuracy({}), EmptyInput);
}

TEST_CASE("bootstrap interval collapses on constant values") {
    const std::vector<double> values(25, 0.4);
    const auto ci = stats::bootstrap_ci(values, 0.95, 100, 3);
    CHECK(ci.low == ci.high);
    CHECK(ci.low == ci.point_estimate);
    CHECK(ci.low == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(ci.iterations == 100);
}

TEST_CASE("bootstrap is deterministic in the seed and bounded by the data") {
    SplitRng rng(99);
    std::vector<double> values;
    for (int i = 0; i < 60; ++i) values.push_back(rng.uniform01());
    const auto a = stats::bootstrap_ci(values, 0.99, 200, 5);
    const auto b = stats::bootstrap_ci(values, 0.99, 200, 5);
    CHECK(a.low == b.low);
    CHECK(a.high == b.high);
    const auto c = stats::bootstrap_ci(values, 0.99, 200, 6);
    CHECK((a.low != c.low || a.high != c.high));

    const double lo = *std::min_element(values.begin(), values.end());
    const double hi = *std::max_element(values.begin(), values.end());
    CHECK(a.low >= lo);
    CHECK(a.high <= hi);
    CHECK(a.low <= a.point_estimate);
    CHECK(a.high >= a.point_estimate);
}

TEST_CASE("bootstrap coverage on Bernoulli(0.7) indicators") {
    // 100 meta-trials of n=1000 at level 0.95; at least 90 must cover 0.7.
    SplitRng rng(2024);
    int covered = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> values(1000);
        for (auto& v : values) v = rng.bernoulli(0.7) ? 1.0 : 0.0;
        const auto ci = stats::bootstrap_ci(values, 0.95, 200, rng.next_u64());
        if (ci.low <= 0.7 && 0.7 <= ci.high) ++covered;
    }
    CHECK(covered >= 90);
}

TEST_CASE("pearson r2 golden values") {
    const std::vector<double> x = {1, 2, 3};
    const std::vector<double> y = {1, 2, 2};
    CHECK(stats::pearson_r2(x, y) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(stats::pearson_r2(x, y) ==
          doctest::Approx(testing::direct_formula_r2(x, y)).epsilon(1e-12));
    CHECK(stats::pearson_r2(x, x) == doctest::Approx(1.0).epsilon(1e-13));

    const std::vector<double> constant = {2, 2, 2};
    CHECK_THROWS_AS(stats::pearson_r2(x, constant), DegenerateInput);
    const std::vector<double> single = {1.0};
    CHECK_THROWS_AS(stats::pearson_r2(single, single), DegenerateInput);
}

TEST_CASE("pearson r2 is symmetric and affine invariant") {
    SplitRng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(12), y(12);
        for (auto& v : x) v = rng.normal();
        for (auto& v : y) v = rng.normal();
        const double base = stats::pearson_r2(x, y);
        CHECK(stats::pearson_r2(y, x) == doctest::Approx(base).epsilon(1e-12));

        const double slope = rng.uniform01() * 4.0 - 2.0;
        if (std::fabs(slope) < 1e-3) continue;
        const double shift = rng.normal() * 10.0;
        std::vector<double> mapped = x;
        for (auto& v : mapped) v = slope * v + shift;
        CHECK(stats::pearson_r2(mapped, y) == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("winrate r2 against itself is 1 and excludes undefined proposals") {
    data::SyntheticPopulationSpec spec;
    spec.participant_count = 60;
    spec.proposal_count = 12;
    spec.noise_scale = 0.8;
    spec.pairs_per_participant = 10;
    spec.seed = 21;
    const auto dataset = data::generate_synthetic(spec);
    CHECK(stats::winrate_r2(dataset, dataset) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stats::winrate_r2(dataset, core::sample_participants(dataset, {1.0, 5})) ==
          doctest::Approx(1.0).epsilon(1e-12));

    WinRateTable one_defined;
    one_defined.entries[1] = {1, 2, 0.5};
    one_defined.entries[2] = {0, 0, std::nullopt};
    CHECK_THROWS_AS(stats::winrate_r2(one_defined, one_defined), DegenerateInput);
}

TEST_CASE("welch golden values and antisymmetry") {
    const std::vector<double> a = {1, 2, 3, 4, 5};
    const std::vector<double> b = {2, 3, 4, 5, 6};
    const auto result = stats::welch_t_test(a, b);
    CHECK(result.t == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(result.df == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(result.p == doctest::Approx(0.3466).epsilon(1e-3));
    // Independent quadrature of the t density.
    CHECK(result.p ==
          doctest::Approx(testing::t_two_sided_p_by_quadrature(result.t, result.df))
              .epsilon(1e-7));

    const auto reversed = stats::welch_t_test(b, a);
    CHECK(reversed.t == -result.t);
    CHECK(reversed.p == result.p);
}

TEST_CASE("welch equal samples give t=0, p=1; df stays within classic bounds") {
    const std::vector<double> a = {3, 1, 4, 1, 5};
    const auto self = stats::welch_t_test(a, a);
    CHECK(self.t == 0.0);
    CHECK(self.p == doctest::Approx(1.0).epsilon(1e-12));

    SplitRng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t na = 2 + rng.uniform_u64(20), nb = 2 + rng.uniform_u64(20);
        std::vector<double> x(na), y(nb);
        for (auto& v : x) v = rng.normal();
        for (auto& v : y) v = rng.normal() * (1.0 + rng.uniform01());
        const auto r = stats::welch_t_test(x, y);
        const double lo = static_cast<double>(std::min(na, nb)) - 1.0;
        const double hi = static_cast<double>(na + nb) - 2.0;
        CHECK(r.df >= lo - 1e-9);
        CHECK(r.df <= hi + 1e-9);
        CHECK(r.p >= 0.0);
        CHECK(r.p <= 1.0);
    }
}

TEST_CASE("welch sign convention: lower first mean gives negative t") {
    const std::vector<double> low = {0.1, 0.2, 0.15, 0.12};
    const std::vector<double> high = {0.8, 0.9, 0.85, 0.88};
    CHECK(stats::welch_t_test(low, high).t < 0.0);
}

TEST_CASE("adequacy curve reports means per size and rejects oversized samples") {
    data::SyntheticPopulationSpec spec;
    spec.participant_count = 120;
    spec.proposal_count = 15;
    spec.noise_scale = 0.0;
    spec.pairs_per_participant = 40;
    spec.seed = 3;
    const auto dataset = data::generate_synthetic(spec);
    const auto points = stats::adequacy_curve(dataset, {20, 40}, 6, 17);
    REQUIRE(points.size() == 2);
    CHECK(points[0].sample_size == 20);
    CHECK(points[0].fraction == doctest::Approx(20.0 / 120.0));
    CHECK(points[0].repetitions == 6);
    // Zero-noise population: every sample reproduces the same preferences.
    CHECK(points[0].r_squared > 0.9);
    CHECK(points[1].r_squared > 0.95);

    CHECK_THROWS_AS(stats::adequacy_curve(dataset, {61}, 2, 1), SizeTooLarge);
}

TEST_CASE("rational fit recovers exact parameters") {
    std::vector<stats::AdequacyPoint> points;
    for (const double x : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        stats::AdequacyPoint p;
        p.fraction = x;
        p.r_squared = 1.0 * x / (0.1 + x);
        points.push_back(p);
    }
    const auto fit = stats::fit_rational(points);
    CHECK(fit.a == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.b == doctest::Approx(0.1).epsilon(1e-5));
    CHECK(fit.residual_sum_squares < 1e-12);
}

TEST_CASE("rational fit accepts a plateau with b near zero") {
    std::vector<stats::AdequacyPoint> points;
    for (const double x : {0.1, 0.2, 0.3, 0.4}) {
        stats::AdequacyPoint p;
        p.fraction = x;
        p.r_squared = 0.85;
        points.push_back(p);
    }
    const auto fit = stats::fit_rational(points);
    CHECK(fit.b < 1e-4);
    CHECK(fit.a == doctest::Approx(0.85).epsilon(1e-3));
    CHECK(fit.residual_sum_squares < 1e-6);

    std::vector<stats::AdequacyPoint> single(2, points[0]);
    CHECK_THROWS_AS(stats::fit_rational(single), DegenerateInput);
}

TEST_CASE("rational fit residual is at least as good as any grid point") {
    SplitRng rng(55);
    std::vector<stats::AdequacyPoint> points;
    for (const double x : {0.05, 0.1, 0.2, 0.35, 0.45}) {
        stats::AdequacyPoint p;
        p.fraction = x;
        p.r_squared = 0.9 * x / (0.08 + x) + rng.normal() * 0.02;
        points.push_back(p);
    }
    const auto fit = stats::fit_rational(points);
    auto rss_for = [&](double a, double b) {
        double rss = 0.0;
        for (const auto& p : points) {
            const double r = p.r_squared - a * p.fraction / (b + p.fraction);
            rss += r * r;
        }
        return rss;
    };
    CHECK(fit.residual_sum_squares <= rss_for(fit.a, fit.b) + 1e-12);
    for (double b = 1e-6; b < 5.0; b *= 2.0) {
        // profile-optimal a at this grid b
        double num = 0.0, den = 0.0;
        for (const auto& p : points) {
            const double g = p.fraction / (b + p.fraction);
            num += p.r_squared * g;
            den += g * g;
        }
        CHECK(fit.residual_sum_squares <= rss_for(num / den, b) + 1e-9);
    }
}

namespace {

PreferenceDataset subgroup_fixture() {
    PreferenceDataset d;
    d.proposals.push_back({1, "One", std::nullopt});
    d.proposals.push_back({2, "Two", std::nullopt});
    for (int i = 0; i < 8; ++i) {
        Participant p;
        p.id = "s" + std::to_string(i);
        p.demographics.sex = i < 4 ? Sex::Female : Sex::Male;
        d.participants.push_back(p);
    }
    return d;
}

}  // namespace

TEST_CASE("subgroup analysis: identical distributions give t = 0") {
    const auto d = subgroup_fixture();
    std::vector<stats::CorrectnessRecord> records;
    for (int i = 0; i < 8; ++i) {
        // Same correctness pattern in both categories.
        records.push_back({"s" + std::to_string(i), true});
        records.push_back({"s" + std::to_string(i), i % 2 == 0});
    }
    const auto analysis =
        stats::subgroup_accuracy_analysis(d, records, DemographicField::Sex, 0.95, 100, 7);
    REQUIRE(analysis.comparisons.size() == 1);
    CHECK(analysis.comparisons[0].group_a == "Female");
    CHECK(analysis.comparisons[0].group_b == "Male");
    CHECK(analysis.comparisons[0].t_statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(analysis.comparisons[0].p_value > 0.99);
}

TEST_CASE("subgroup analysis: all-correct vs all-wrong is maximally separated") {
    const auto d = subgroup_fixture();
    std::vector<stats::CorrectnessRecord> records;
    for (int i = 0; i < 8; ++i)
        for (int k = 0; k < 3; ++k) records.push_back({"s" + std::to_string(i), i < 4});
    const auto analysis =
        stats::subgroup_accuracy_analysis(d, records, DemographicField::Sex, 0.95, 100, 7);
    REQUIRE(analysis.reports.size() == 2);
    CHECK(analysis.reports[0].subgroup == "Female");
    CHECK(analysis.reports[0].accuracy == 1.0);
    CHECK(analysis.reports[1].accuracy == 0.0);
    CHECK(analysis.comparisons[0].p_value == doctest::Approx(0.0));
    CHECK(std::isinf(analysis.comparisons[0].t_statistic));
}

TEST_CASE("subgroup analysis emits every category pair in report order") {
    PreferenceDataset d;
    d.proposals.push_back({1, "One", std::nullopt});
    d.proposals.push_back({2, "Two", std::nullopt});
    SplitRng rng(5);
    for (int i = 0; i < 12; ++i) {
        Participant p;
        p.id = "q" + std::to_string(i);
        p.demographics.ideology =
            i % 3 == 0 ? Ideology::Liberal : (i % 3 == 1 ? Ideology::Centrist
                                                         : Ideology::Conservative);
        d.participants.push_back(p);
    }
    std::vector<stats::CorrectnessRecord> records;
    for (int i = 0; i < 12; ++i)
        for (int k = 0; k < 4; ++k)
            records.push_back({"q" + std::to_string(i), rng.bernoulli(0.6)});
    const auto analysis =
        stats::subgroup_accuracy_analysis(d, records, DemographicField::Ideology, 0.95, 100, 7);
    REQUIRE(analysis.comparisons.size() == 3);
    CHECK(analysis.comparisons[0].group_a == "Liberal");
    CHECK(analysis.comparisons[0].group_b == "Conservative");
    CHECK(analysis.comparisons[1].group_a == "Liberal");
    CHECK(analysis.comparisons[1].group_b == "Centrist");
    CHECK(analysis.comparisons[2].group_a == "Conservative");
    CHECK(analysis.comparisons[2].group_b == "Centrist");

    // A category with no predictions is an error.
    std::vector<stats::CorrectnessRecord> missing;
    for (int i = 0; i < 12; ++i)
        if (i % 3 != 0) missing.push_back({"q" + std::to_string(i), true});
    CHECK_THROWS_AS(
        stats::subgroup_accuracy_analysis(d, missing, DemographicField::Ideology, 0.95, 100, 7),
        EmptyCategory);
}
