#include "pda/roc.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>

#include "pda/errors.hpp"

namespace pda {

namespace {

void require_classes(std::span<const double> nominal, std::span<const double> anomalous) {
    if (nominal.empty() || anomalous.empty()) {
        throw UsageError("AUC needs at least one nominal and one anomalous score");
    }
}

}  // namespace

RocResult auc(std::span<const double> scores_nominal, std::span<const double> scores_anomalous) {
    require_classes(scores_nominal, scores_anomalous);
    std::vector<double> nominal(scores_nominal.begin(), scores_nominal.end());
    std::vector<double> anomalous(scores_anomalous.begin(), scores_anomalous.end());
    std::sort(nominal.begin(), nominal.end(), std::greater<>());
    std::sort(anomalous.begin(), anomalous.end(), std::greater<>());

    const auto n_nom = static_cast<std::uint64_t>(nominal.size());
    const auto n_anom = static_cast<std::uint64_t>(anomalous.size());

    RocResult roc;
    roc.points.emplace_back(0.0, 0.0);
    std::uint64_t fp = 0, tp = 0;
    // Twice the area in units of one (nominal, anomalous) pair.
    std::uint64_t twice_area = 0;
    std::size_t a = 0, b = 0;
    while (a < nominal.size() || b < anomalous.size()) {
        double threshold;
        if (a == nominal.size()) {
            threshold = anomalous[b];
        } else if (b == anomalous.size()) {
            threshold = nominal[a];
        } else {
            threshold = std::max(nominal[a], anomalous[b]);
        }
        const std::uint64_t fp_prev = fp, tp_prev = tp;
        while (a < nominal.size() && nominal[a] == threshold) ++a, ++fp;
        while (b < anomalous.size() && anomalous[b] == threshold) ++b, ++tp;
        twice_area += (fp - fp_prev) * (tp + tp_prev);
        roc.points.emplace_back(static_cast<double>(fp) / static_cast<double>(n_nom),
                                static_cast<double>(tp) / static_cast<double>(n_anom));
    }
    roc.auc = static_cast<double>(twice_area) / (2.0 * static_cast<double>(n_nom * n_anom));
    return roc;
}

double mann_whitney_auc(std::span<const double> scores_nominal,
                        std::span<const double> scores_anomalous) {
    require_classes(scores_nominal, scores_anomalous);
    struct Entry {
        double score;
        bool anomalous;
    };
    std::vector<Entry> all;
    all.reserve(scores_nominal.size() + scores_anomalous.size());
    for (double s : scores_nominal) all.push_back({s, false});
    for (double s : scores_anomalous) all.push_back({s, true});
    std::sort(all.begin(), all.end(), [](const Entry& x, const Entry& y) { return x.score < y.score; });

    // Rank sums doubled so midranks stay integral.
    std::uint64_t twice_rank_sum = 0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].score == all[i].score) ++j;
        const std::uint64_t twice_midrank = (i + 1) + j;  // ranks i+1..j
        for (std::size_t t = i; t < j; ++t) {
            if (all[t].anomalous) twice_rank_sum += twice_midrank;
        }
        i = j;
    }
    const auto n_anom = static_cast<std::uint64_t>(scores_anomalous.size());
    const auto n_nom = static_cast<std::uint64_t>(scores_nominal.size());
    const std::uint64_t twice_u = twice_rank_sum - n_anom * (n_anom + 1);
    return static_cast<double>(twice_u) / (2.0 * static_cast<double>(n_anom * n_nom));
}

}  // namespace pda
