#include "oracles.hpp"

#include "koopmem/metrics.hpp"

#include <doctest.h>

using namespace koopmem;

namespace {

std::vector<ForecastRecord> predict(const std::vector<double>& values) {
    std::vector<ForecastRecord> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ForecastRecord r;
        r.t = i;
        r.target_t = i;
        r.prediction = values[i];
        out.push_back(r);
    }
    return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("median") {
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 3, 2}) == 2.5);
    CHECK_THROWS_AS(median({}), Error);
}

TEST_CASE("median relative error in percent") {
    const TimeSeries truth{{10, 10, 10}, 0};
    const auto s = median_relative_error(truth, predict({11, 12, 9}));
    CHECK(s.median_rel_error_pct == doctest::Approx(10.0));
    CHECK(s.median_abs_error == doctest::Approx(1.0));
    CHECK(s.n_points == 3);
    CHECK(s.n_excluded == 0);
}

TEST_CASE("near-zero targets are excluded from the relative median") {
    const TimeSeries truth{{0.0, 10, 1e-12, 20}, 0};
    const auto s = median_relative_error(truth, predict({5, 11, 1, 22}));
    CHECK(s.n_excluded == 2);
    CHECK(s.n_points == 2);
    CHECK(s.median_rel_error_pct == doctest::Approx(10.0));
    CHECK_THROWS_AS(median_relative_error(TimeSeries{{0.0}, 0}, predict({1})), Error);
}

TEST_CASE("improvement examples") {
    const std::vector<double> base{22.6}, mem{14.6};
    CHECK(improvement(base, mem).percent == doctest::Approx(54.794520547945226).epsilon(1e-12));
    const std::vector<double> b2{1, 7.5, 9}, m2{0.5, 1, 3};
    CHECK(improvement(b2, m2).percent == doctest::Approx(650.0));
    const std::vector<double> z{0, 0, 0}, one{1, 1, 1};
    CHECK(improvement(one, z).infinite);
    CHECK(std::isinf(improvement(one, z).percent));
    CHECK(improvement(z, z).percent == 0.0);
    CHECK_FALSE(improvement(z, z).infinite);
    CHECK_THROWS_AS(improvement(one, std::vector<double>{1, 1}), Error);
}

TEST_CASE("improvement is scale invariant") {
    std::mt19937_64 rng(17);
    std::lognormal_distribution<double> err(0.0, 1.0);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> b(31), m(31);
        for (auto& v : b) v = err(rng);
        for (auto& v : m) v = err(rng);
        const double c = scale(rng);
        auto bs = b, ms = m;
        for (auto& v : bs) v *= c;
        for (auto& v : ms) v *= c;
        CHECK(improvement(bs, ms).percent == doctest::Approx(improvement(b, m).percent).epsilon(1e-9));
    }
}

TEST_CASE("absolute errors follow record order") {
    const TimeSeries truth{{1, 2, 3}, 0};
    auto recs = predict({1.5, 2, 0});
    CHECK(absolute_errors(truth, recs) == std::vector<double>{0.5, 0, 3});
    recs[0].target_t = 3;
    CHECK_THROWS_AS(absolute_errors(truth, recs), Error);
}

}
