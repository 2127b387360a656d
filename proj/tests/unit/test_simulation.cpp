#include <doctest.h>

#include <cmath>

#include "pda/errors.hpp"
#include "pda/simulation.hpp"

using namespace pda;

namespace {

SimulationConfig small_config() {
    SimulationConfig c;
    c.runs = 3;
    c.seed = 5;
    c.grid = 3;
    c.n_train = 60;
    c.n_test = 40;
    c.threads = 1;
    return c;
}

}  // namespace

TEST_SUITE("simulation") {
    TEST_CASE("test mixture follows the class probabilities") {
        SimulationConfig c;
        c.n_test = 100;
        std::size_t anomalies = 0, draws = 0;
        for (std::size_t run = 0; run < 200; ++run) {
            const auto data = draw_simulation_data(c, run);
            CHECK(data.training.size() == 300);
            REQUIRE(data.test.size() == 100);
            for (std::size_t i = 0; i < data.test.size(); ++i) {
                const int cls = data.test_class[i];
                ++draws;
                for (std::size_t d = 0; d < 4; ++d) {
                    const double v = data.test.samples[i].features[d];
                    if (cls == int(d) + 1) {
                        CHECK(v >= 1.0);
                        CHECK(v <= 1.1);
                    } else {
                        CHECK(v >= 0.0);
                        CHECK(v < 1.0);
                    }
                }
                anomalies += cls != 0;
            }
        }
        // Binomial(20000, 0.2): sd is about 57.
        CHECK(std::abs(double(anomalies) - 0.2 * double(draws)) < 300.0);
    }

    TEST_CASE("draws depend only on seed and run index") {
        const auto c = small_config();
        const auto a = draw_simulation_data(c, 2), b = draw_simulation_data(c, 2);
        CHECK(a.test_class == b.test_class);
        CHECK(a.training.samples[7].features == b.training.samples[7].features);
        CHECK(draw_simulation_data(c, 1).training.samples[0].features != a.training.samples[0].features);
    }

    TEST_CASE("reports are identical across thread counts") {
        auto c = small_config();
        const auto one = run_simulation(c);
        c.threads = 3;
        const auto three = run_simulation(c);
        CHECK(one.pda_mean_auc == three.pda_mean_auc);
        CHECK(one.pda_stderr == three.pda_stderr);
        REQUIRE(one.per_run.size() == three.per_run.size());
        for (std::size_t r = 0; r < one.per_run.size(); ++r) {
            CHECK(one.per_run[r].pda_auc == three.per_run[r].pda_auc);
            CHECK(one.per_run[r].baseline_auc == three.per_run[r].baseline_auc);
        }
        CHECK(one.weights.size() == 80);
        for (const auto& b : one.baselines) {
            CHECK(b.best_auc >= b.median_auc);
            CHECK(b.per_weight_mean.size() == 80);
            CHECK(b.per_weight_mean[b.best_weight] == b.best_auc);
        }
        CHECK(one.stderr_defined);
    }

    TEST_CASE("a single run reports zero standard error with a flag") {
        auto c = small_config();
        c.runs = 1;
        const auto r = run_simulation(c);
        CHECK_FALSE(r.stderr_defined);
        CHECK(r.pda_stderr == 0.0);
        c.runs = 0;
        CHECK_THROWS_AS(run_simulation(c), UsageError);
    }

    TEST_CASE("a far shift is separated by every method") {
        SimulationConfig c;
        c.runs = 2;
        c.seed = 3;
        c.grid = 2;
        c.anomaly_low = 10.0;
        c.anomaly_high = 10.1;
        c.threads = 1;
        const auto r = run_simulation(c);
        CHECK(r.pda_mean_auc >= 0.999);
        for (const auto& b : r.baselines) CHECK(b.best_auc >= 0.999);
    }

    TEST_CASE("mean and standard error") {
        const auto m = mean_and_stderr({1.0, 2.0, 3.0, 4.0});
        CHECK(m.mean == 2.5);
        CHECK(m.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
        CHECK(mean_and_stderr({7.0}).stderr_ == 0.0);
    }
}
