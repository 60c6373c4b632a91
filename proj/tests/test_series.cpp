#include "oracles.hpp"

#include "koopmem/series.hpp"

#include <doctest.h>

#include <cmath>

using namespace koopmem;

TEST_SUITE("series") {

TEST_CASE("csv by name and by index") {
    const auto path = oracle::temp_file("named.csv", "t,value,other\n0,1.5,9\n1,2.5,8\n2,-3,7\n");
    const auto by_name = load_csv(path, std::string("value"));
    CHECK(by_name.values == std::vector<double>{1.5, 2.5, -3.0});
    CHECK(by_name.start_index == 0);
    const auto by_index = load_csv(path, std::size_t{2});
    CHECK(by_index.values == std::vector<double>{9.0, 8.0, 7.0});
    CHECK_THROWS_AS(load_csv(path, std::string("nope")), Error);
    CHECK_THROWS_AS(load_csv(path, std::size_t{3}), Error);
}

TEST_CASE("csv delimiter and quoting") {
    const auto path = oracle::temp_file("semi.csv", "\"t\";\"value\"\n0;\"4\"\n1;5\n");
    CsvOptions opts;
    opts.delimiter = ';';
    CHECK(load_csv(path, std::string("value"), opts).values == std::vector<double>{4.0, 5.0});
}

TEST_CASE("missing values are an error by default") {
    const auto path = oracle::temp_file("gap.csv", "t,value\n0,1.5\n1,NA\n2,2.5\n");
    try {
        load_csv(path, std::string("value"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("missing value at row 2") != std::string::npos);
    }
}

TEST_CASE("interpolation fills interior gaps and trims the ends") {
    CsvOptions opts;
    opts.interpolate = true;
    const auto interior = oracle::temp_file("gap2.csv", "t,value\n0,1.5\n1,NA\n2,2.5\n");
    CHECK(load_csv(interior, std::string("value"), opts).values == std::vector<double>{1.5, 2.0, 2.5});

    const auto wide = oracle::temp_file("gap3.csv", "value\n\n0\n\nNA\n6\nNA\n");
    const auto s = load_csv(wide, std::string("value"), opts);
    CHECK(s.start_index == 1);
    REQUIRE(s.size() == 4);
    CHECK(s.values[1] == doctest::Approx(2.0));
    CHECK(s.values[2] == doctest::Approx(4.0));
    CHECK(s.values[3] == 6.0);
}

TEST_CASE("csv rejects garbage and near-empty input") {
    CHECK_THROWS_AS(load_csv(oracle::temp_file("bad.csv", "value\n1\nabc\n"), std::string("value")), Error);
    CHECK_THROWS_AS(load_csv(oracle::temp_file("one.csv", "value\n1\n"), std::string("value")), Error);
    CHECK_THROWS_AS(load_csv(oracle::temp_file("absent.csv") / "nope", std::string("value")), Error);
}

TEST_CASE("noiseless recursion") {
    const auto s = simulate_piecewise_exponential({0.99, 0.99, 0.99, 0.99}, 0.0, 1);
    REQUIRE(s.series.size() == 4);
    const double expected[] = {1.0, 0.99, 0.9801, 0.970299};
    for (int i = 0; i < 4; ++i) CHECK(s.series.values[i] == doctest::Approx(expected[i]).epsilon(1e-15));
}

TEST_CASE("regimes alternate sign on the switch grid") {
    const auto s = gen_piecewise_exponential(1000, 10, 0.01, 7);
    REQUIRE(s.series.size() == 1000);
    REQUIRE(s.lambda.size() == 1000);
    for (std::size_t t = 0; t < 1000; ++t) {
        const double a = std::abs(s.lambda[t]);
        CHECK((a == 0.99 || a == 1.0101));
        if (t % 10 != 0) CHECK(s.lambda[t] == s.lambda[t - 1]);
        else if (t > 0) CHECK(std::signbit(s.lambda[t]) != std::signbit(s.lambda[t - 1]));
    }
    CHECK(s.series.values[0] == 1.0);
}

TEST_CASE("generator is deterministic per seed") {
    const auto a = gen_piecewise_exponential(300, 10, 0.01, 3);
    const auto b = gen_piecewise_exponential(300, 10, 0.01, 3);
    const auto c = gen_piecewise_exponential(300, 10, 0.01, 4);
    CHECK(a.series.values == b.series.values);
    CHECK(a.lambda == b.lambda);
    CHECK(a.series.values != c.series.values);
    CHECK_THROWS_AS(gen_piecewise_exponential(0, 10, 0.01, 1), Error);
    CHECK_THROWS_AS(gen_piecewise_exponential(10, 0, 0.01, 1), Error);
}

TEST_CASE("delay embedding orders coordinates oldest first") {
    const TimeSeries s{{1, 2, 3, 4, 5}, 0};
    const auto e = delay_embed(s, 2);
    CHECK(e.size() == 3);
    CHECK(e.dim() == 3);
    CHECK(e.at(2) == Eigen::Vector3d(1, 2, 3));
    CHECK(e.at(4) == Eigen::Vector3d(3, 4, 5));
    CHECK_THROWS_AS(e.at(1), Error);
    CHECK_THROWS_AS(delay_embed(s, 5), Error);
}

TEST_CASE("window pair") {
    const TimeSeries s{{1, 2, 3, 4, 5}, 0};
    const auto e = delay_embed(s, 0);
    const auto p = window_pair(e, 4, 3);
    CHECK(p.x == Eigen::RowVector3d(2, 3, 4));
    CHECK(p.y == Eigen::RowVector3d(3, 4, 5));
    CHECK(p.omega() == 3);
    CHECK_THROWS_AS(window_pair(e, 2, 3), Error);
    CHECK_THROWS_AS(window_pair(e, 5, 3), Error);
    CHECK(window_raw_values(s, 4, 3, 0) == std::vector<double>{2, 3, 4, 5});
}

TEST_CASE("consecutive windows shift by one state") {
    const auto s = gen_piecewise_exponential(60, 10, 0.01, 2).series;
    const auto e = delay_embed(s, 2);
    for (std::size_t t = 7; t + 1 < s.size(); ++t) {
        const auto a = window_pair(e, t, 5);
        const auto b = window_pair(e, t + 1, 5);
        CHECK(a.y == b.x.leftCols(5).eval());
        CHECK(a.y.col(4) == e.at(t));
        CHECK(b.x.col(4) == e.at(t));
    }
}

TEST_CASE("written series reads back bitwise") {
    const auto s = gen_piecewise_exponential(200, 10, 0.01, 11);
    const auto path = oracle::temp_file("roundtrip.csv");
    write_series_csv(path, s.series, &s.lambda);
    CHECK(load_csv(path, std::string("value")).values == s.series.values);
    CHECK(load_csv(path, std::string("lambda")).values == s.lambda);
    CHECK(read_csv_header(path) == std::vector<std::string>{"t", "value", "lambda"});
}

}
