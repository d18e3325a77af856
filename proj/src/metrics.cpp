#include "reproj/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "reproj/errors.hpp"

namespace reproj {

DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt, const BinaryMask& valid,
                           double cap) {
    if (pred.width != gt.width || pred.height != gt.height || valid.width != gt.width ||
        valid.height != gt.height)
        throw InvalidInputError("depth_metrics dimensions must agree");
    if (!(cap > 0.0)) throw InvalidInputError("depth cap must be positive");

    double abs_rel = 0, sq_rel = 0, sq = 0, sq_log = 0;
    size_t n = 0, n1 = 0, n2 = 0, n3 = 0;
    for (size_t i = 0; i < gt.values.size(); ++i) {
        if (!valid.values[i]) continue;
        const double g = gt.values[i];
        if (!(g > 0.0) || g > cap) continue;
        const double p = pred.values[i];
        if (!(p > 0.0)) throw InvalidInputError("predictions must be positive on the valid set");
        const double diff = p - g;
        abs_rel += std::abs(diff) / g;
        sq_rel += diff * diff / g;
        sq += diff * diff;
        const double lp = std::log(std::max(p, kLogDepthFloor));
        const double lg = std::log(g);
        sq_log += (lp - lg) * (lp - lg);
        const double delta = std::max(p / g, g / p);
        if (delta < 1.25) ++n1;
        if (delta < 1.25 * 1.25) ++n2;
        if (delta < 1.25 * 1.25 * 1.25) ++n3;
        ++n;
    }
    if (n == 0) throw InvalidInputError("depth_metrics: empty valid set");

    DepthMetrics m;
    const double dn = static_cast<double>(n);
    m.abs_rel = abs_rel / dn;
    m.sq_rel = sq_rel / dn;
    m.rmse = std::sqrt(sq / dn);
    m.rmse_log = std::sqrt(sq_log / dn);
    m.a1 = n1 / dn;
    m.a2 = n2 / dn;
    m.a3 = n3 / dn;
    return m;
}

double median_scaling(const DepthMap& pred, const DepthMap& gt, const BinaryMask& valid) {
    if (pred.width != gt.width || pred.height != gt.height || valid.width != gt.width ||
        valid.height != gt.height)
        throw InvalidInputError("median_scaling dimensions must agree");
    std::vector<double> ps, gs;
    for (size_t i = 0; i < gt.values.size(); ++i) {
        if (!valid.values[i]) continue;
        ps.push_back(pred.values[i]);
        gs.push_back(gt.values[i]);
    }
    if (ps.empty()) throw InvalidInputError("median_scaling: empty valid set");
    auto median = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        const size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    const double mp = median(ps);
    if (mp == 0.0) throw InvalidInputError("median_scaling: median prediction is zero");
    return median(gs) / mp;
}

std::string metrics_table(const DepthMetrics& m) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%9s %9s %9s %9s %9s %9s %9s\n", "Abs Rel", "Sq Rel",
                  "RMSE", "RMSE log", "d<1.25", "d<1.25^2", "d<1.25^3");
    out += buf;
    std::snprintf(buf, sizeof(buf), "%9.3f %9.3f %9.3f %9.3f %9.3f %9.3f %9.3f\n", m.abs_rel,
                  m.sq_rel, m.rmse, m.rmse_log, m.a1, m.a2, m.a3);
    out += buf;
    return out;
}

}  // namespace reproj
