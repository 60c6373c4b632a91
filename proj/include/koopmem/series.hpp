#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace koopmem {

/// Base class for every error raised by the library. Callers that only care
/// about "the input was bad" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ordered scalar observations on a uniform integer time index.
struct TimeSeries {
    std::vector<double> values;
    std::int64_t start_index = 0;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Delay-embedded state, oldest coordinate first: [x_{t-d}, ..., x_t].
using EmbeddedState = Eigen::VectorXd;

/// One column per embedded state. Column k of `states` is the state ending at
/// raw index `n_delays + k`.
struct Embedding {
    Eigen::MatrixXd states;
    int n_delays = 0;

    std::size_t size() const { return static_cast<std::size_t>(states.cols()); }
    int dim() const { return static_cast<int>(states.rows()); }
    /// State ending at raw index t (t >= n_delays).
    EmbeddedState at(std::size_t t) const;
};

/// Window snapshot matrices. Y is X advanced by one step.
struct SnapshotPair {
    Eigen::MatrixXd x;
    Eigen::MatrixXd y;
    std::size_t t = 0;  ///< raw index of the last column of y

    int omega() const { return static_cast<int>(x.cols()); }
};

struct CsvOptions {
    char delimiter = ',';
    bool interpolate = false;
    std::vector<std::string> missing_markers{"", "NA"};
};

/// Column selector for load_csv: header name or zero-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

/// Reads one numeric column from a headed CSV file.
///
/// Missing markers are a hard error unless `opts.interpolate` is set, in which
/// case interior gaps are filled linearly and leading/trailing gaps trimmed.
/// Row numbers in messages count data rows from 1.
TimeSeries load_csv(const std::filesystem::path& path, const ColumnRef& column,
                    const CsvOptions& opts = {});

/// Header cells of a CSV file, trimmed and unquoted.
std::vector<std::string> read_csv_header(const std::filesystem::path& path, char delimiter = ',');

/// Writes `value` (and `lambda` when labels are given) with a header row.
void write_series_csv(const std::filesystem::path& path, const TimeSeries& series,
                      const std::vector<double>* labels = nullptr, char delimiter = ',');

struct SyntheticSeries {
    TimeSeries series;
    std::vector<double> lambda;  ///< multiplier applied at each step
};

/// Default observation noise of the synthetic generator.
inline constexpr double kDefaultNoise = 1e-4;

/// Multipliers available to the piecewise exponential generator.
inline constexpr double kRegimeMultipliers[4] = {-1.0101, -0.99, 0.99, 1.0101};

/// Piecewise exponential system x_t = lambda_t x_{t-1} (1 + eta xi), x_0 = 1.
///
/// lambda is redrawn uniformly every `switch_period` steps; a draw with the
/// same sign as the previous regime is rejected, so regimes alternate sign.
SyntheticSeries gen_piecewise_exponential(std::size_t steps, std::size_t switch_period,
                                          double eta, std::uint64_t seed);

/// Same recursion driven by an explicit multiplier schedule. lambda[0] labels
/// x_0 and is otherwise unused.
SyntheticSeries simulate_piecewise_exponential(std::vector<double> lambda, double eta,
                                               std::uint64_t seed);

Embedding delay_embed(const TimeSeries& series, int n_delays);

/// X holds states at raw indices t-omega..t-1, Y those at t-omega+1..t.
SnapshotPair window_pair(const Embedding& embedded, std::size_t t, int omega);

/// Raw values covered by window_pair(t, omega): indices t-omega-n_delays..t.
std::vector<double> window_raw_values(const TimeSeries& series, std::size_t t, int omega,
                                      int n_delays);

}  // namespace koopmem
