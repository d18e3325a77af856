#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "reproj/errors.hpp"
#include "reproj/json_io.hpp"
#include "reproj/metrics.hpp"

using namespace reproj;
using reproj::testing::TestRng;

namespace {

DepthMap map_of(std::initializer_list<double> vals) {
    DepthMap m(static_cast<int>(vals.size()), 1);
    std::copy(vals.begin(), vals.end(), m.values.begin());
    return m;
}

}  // namespace

TEST_CASE("identity prediction scores perfectly") {
    TestRng rng(61);
    const DepthMap gt = reproj::testing::noise_depth(rng, 12, 9, 0.5, 70.0);
    const BinaryMask valid(12, 9, 1);
    const DepthMetrics m = depth_metrics(gt, gt, valid);
    CHECK(m.abs_rel == 0.0);
    CHECK(m.sq_rel == 0.0);
    CHECK(m.rmse == 0.0);
    CHECK(m.rmse_log == 0.0);
    CHECK(m.a1 == 1.0);
    CHECK(m.a2 == 1.0);
    CHECK(m.a3 == 1.0);
}

TEST_CASE("exact 1.25 ratio fails the strict first threshold") {
    // Ground truths whose 1.25 multiple is exactly representable.
    const DepthMap gt = map_of({1.0, 2.0, 4.0, 8.0, 16.0});
    DepthMap pred = gt;
    for (auto& v : pred.values) v *= 1.25;
    const BinaryMask valid(5, 1, 1);
    const DepthMetrics m = depth_metrics(pred, gt, valid);
    CHECK(m.a1 == 0.0);
    CHECK(m.a2 == 1.0);
    CHECK(m.a3 == 1.0);
}

TEST_CASE("two-pixel fixture matches hand evaluation") {
    const DepthMap pred = map_of({2.0, 4.0});
    const DepthMap gt = map_of({1.0, 4.0});
    const BinaryMask valid(2, 1, 1);
    const DepthMetrics m = depth_metrics(pred, gt, valid);
    CHECK(m.abs_rel == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.sq_rel == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.rmse == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(m.rmse_log == doctest::Approx(std::log(2.0) / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(m.a1 == 0.5);
    CHECK(m.a2 == 0.5);
    CHECK(m.a3 == 0.5);
}

TEST_CASE("cap excludes deep ground truth and errors are guarded") {
    const DepthMap gt = map_of({5.0, 100.0});
    const DepthMap pred = map_of({5.0, 1.0});
    const BinaryMask valid(2, 1, 1);
    const DepthMetrics m = depth_metrics(pred, gt, valid, 80.0);
    CHECK(m.abs_rel == 0.0);  // the gt=100 pixel is excluded

    CHECK_THROWS_AS(depth_metrics(pred, gt, BinaryMask(2, 1, 0)), InvalidInputError);
    const DepthMap bad = map_of({-1.0, 5.0});
    CHECK_THROWS_AS(depth_metrics(bad, map_of({2.0, 5.0}), valid), InvalidInputError);
}

TEST_CASE("constant-ratio predictions flip thresholds at exactly 1.25^i") {
    TestRng rng(62);
    const DepthMap gt = reproj::testing::noise_depth(rng, 10, 10, 1.0, 60.0);
    const BinaryMask valid(10, 10, 1);
    struct Case {
        double c, a1, a2, a3;
    };
    for (const Case t : {Case{1.24, 1, 1, 1}, Case{1.26, 0, 1, 1}, Case{1.57, 0, 0, 1},
                         Case{1.96, 0, 0, 0}}) {
        DepthMap pred = gt;
        for (auto& v : pred.values) v *= t.c;
        const DepthMetrics m = depth_metrics(pred, gt, valid);
        CHECK(m.a1 == t.a1);
        CHECK(m.a2 == t.a2);
        CHECK(m.a3 == t.a3);
    }
}

TEST_CASE("accuracies are ordered and permutation leaves metrics unchanged") {
    TestRng rng(63);
    const int w = 15, h = 7;
    DepthMap gt = reproj::testing::noise_depth(rng, w, h, 0.8, 75.0);
    DepthMap pred = gt;
    for (auto& v : pred.values) v *= rng.uniform(0.5, 2.0);
    const BinaryMask valid(w, h, 1);
    const DepthMetrics m = depth_metrics(pred, gt, valid);
    CHECK(m.a1 <= m.a2);
    CHECK(m.a2 <= m.a3);

    std::vector<size_t> order(gt.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng.gen);
    DepthMap gt_p(w, h), pred_p(w, h);
    for (size_t i = 0; i < order.size(); ++i) {
        gt_p.values[i] = gt.values[order[i]];
        pred_p.values[i] = pred.values[order[i]];
    }
    const DepthMetrics mp = depth_metrics(pred_p, gt_p, valid);
    CHECK(mp.abs_rel == doctest::Approx(m.abs_rel).epsilon(1e-12));
    CHECK(mp.rmse_log == doctest::Approx(m.rmse_log).epsilon(1e-12));
    CHECK(mp.a2 == m.a2);
}

TEST_CASE("median scaling recovers global factors and improves abs_rel") {
    TestRng rng(64);
    const DepthMap gt = reproj::testing::noise_depth(rng, 9, 9, 1.0, 40.0);
    const BinaryMask valid(9, 9, 1);
    CHECK(median_scaling(gt, gt, valid) == 1.0);

    DepthMap half = gt;
    for (auto& v : half.values) v *= 0.5;
    CHECK(median_scaling(half, gt, valid) == doctest::Approx(2.0).epsilon(1e-12));

    for (int trial = 0; trial < 20; ++trial) {
        DepthMap pred = gt;
        const double factor = rng.uniform(0.2, 5.0);
        for (auto& v : pred.values) v *= factor * rng.uniform(0.95, 1.05);
        const double scale = median_scaling(pred, gt, valid);
        DepthMap aligned = pred;
        for (auto& v : aligned.values) v *= scale;
        CHECK(depth_metrics(aligned, gt, valid).abs_rel <=
              depth_metrics(pred, gt, valid).abs_rel + 1e-12);
    }
}

TEST_CASE("metrics serialize to JSON and an aligned table") {
    DepthMetrics m;
    m.abs_rel = 0.113;
    m.a3 = 0.981;
    const std::string json = to_json(m);
    CHECK(json.find("\"abs_rel\":0.113") != std::string::npos);
    CHECK(json.find("\"a3\":0.981") != std::string::npos);

    const std::string table = metrics_table(m);
    CHECK(table.find("Abs Rel") != std::string::npos);
    CHECK(table.find("d<1.25^3") != std::string::npos);
    CHECK(table.find("0.113") != std::string::npos);

    DepthMetrics zero;
    zero.a1 = zero.a2 = zero.a3 = 1.0;
    CHECK(metrics_table(zero).find("0.000") != std::string::npos);
}
