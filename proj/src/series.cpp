#include "koopmem/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

namespace koopmem {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') quoted = !quoted;
        if (c == delim && !quoted) {
            out.emplace_back(trim(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    out.emplace_back(trim(cell));
    return out;
}

std::optional<double> parse_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

}  // namespace

EmbeddedState Embedding::at(std::size_t t) const {
    if (t < static_cast<std::size_t>(n_delays) || t - n_delays >= size())
        throw Error("embedded state index " + std::to_string(t) + " out of range");
    return states.col(static_cast<Eigen::Index>(t - n_delays));
}

TimeSeries load_csv(const std::filesystem::path& path, const ColumnRef& column,
                    const CsvOptions& opts) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw Error(path.string() + ": missing header row");
    const auto header = split(line, opts.delimiter);

    std::size_t col = 0;
    if (const auto* name = std::get_if<std::string>(&column)) {
        auto it = std::find(header.begin(), header.end(), *name);
        if (it == header.end()) throw Error(path.string() + ": no column named '" + *name + "'");
        col = static_cast<std::size_t>(it - header.begin());
    } else {
        col = std::get<std::size_t>(column);
        if (col >= header.size())
            throw Error(path.string() + ": column index " + std::to_string(col) +
                        " out of range");
    }

    std::vector<std::optional<double>> cells;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty() && header.size() > 1) continue;
        ++row;
        const auto fields = split(line, opts.delimiter);
        const std::string cell = col < fields.size() ? fields[col] : std::string{};
        const bool missing = std::find(opts.missing_markers.begin(), opts.missing_markers.end(),
                                       cell) != opts.missing_markers.end();
        std::optional<double> v;
        if (!missing) {
            v = parse_real(cell);
            if (!v)
                throw Error(path.string() + ": non-numeric value '" + cell + "' at row " +
                            std::to_string(row));
        }
        if (v && !std::isfinite(*v)) v.reset();
        if (!v && !opts.interpolate)
            throw Error(path.string() + ": missing value at row " + std::to_string(row));
        cells.push_back(v);
    }

    auto first = std::find_if(cells.begin(), cells.end(), [](const auto& c) { return c.has_value(); });
    auto last = std::find_if(cells.rbegin(), cells.rend(), [](const auto& c) { return c.has_value(); });
    if (first == cells.end()) throw Error(path.string() + ": fewer than 2 valid rows");

    const auto lo = static_cast<std::size_t>(first - cells.begin());
    const auto hi = cells.size() - static_cast<std::size_t>(last - cells.rbegin());

    TimeSeries out;
    out.start_index = static_cast<std::int64_t>(lo);
    out.values.reserve(hi - lo);
    std::size_t prev = lo;
    for (std::size_t i = lo; i < hi; ++i) {
        if (cells[i]) {
            // fill the gap (prev, i) linearly
            for (std::size_t k = prev + 1; k < i; ++k) {
                const double w = static_cast<double>(k - prev) / static_cast<double>(i - prev);
                out.values.push_back((1.0 - w) * *cells[prev] + w * *cells[i]);
            }
            out.values.push_back(*cells[i]);
            prev = i;
        }
    }
    if (out.values.size() < 2) throw Error(path.string() + ": fewer than 2 valid rows");
    return out;
}

std::vector<std::string> read_csv_header(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error(path.string() + ": missing header row");
    return split(line, delimiter);
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series,
                      const std::vector<double>* labels, char delimiter) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "t" << delimiter << "value";
    if (labels) out << delimiter << "lambda";
    out << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.start_index + static_cast<std::int64_t>(i) << delimiter << series.values[i];
        if (labels) out << delimiter << (*labels)[i];
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path.string());
}

SyntheticSeries simulate_piecewise_exponential(std::vector<double> lambda, double eta,
                                               std::uint64_t seed) {
    if (lambda.empty()) throw Error("piecewise exponential: steps must be >= 1");
    if (!(eta >= 0.0)) throw Error("piecewise exponential: eta must be >= 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> xi(0.0, 1.0);

    SyntheticSeries out;
    out.series.values.resize(lambda.size());
    out.series.values[0] = 1.0;
    for (std::size_t t = 1; t < lambda.size(); ++t) {
        const double noise = xi(rng);
        out.series.values[t] = lambda[t] * out.series.values[t - 1] * (1.0 + eta * noise);
    }
    out.lambda = std::move(lambda);
    return out;
}

SyntheticSeries gen_piecewise_exponential(std::size_t steps, std::size_t switch_period,
                                          double eta, std::uint64_t seed) {
    if (steps < 1) throw Error("piecewise exponential: steps must be >= 1");
    if (switch_period < 1) throw Error("piecewise exponential: switch period must be >= 1");

    // regime draws and observation noise use independent streams
    std::seed_seq seq{seed, std::uint64_t{0x9e3779b97f4a7c15ULL}};
    std::mt19937_64 regime_rng(seq);
    std::uniform_int_distribution<int> pick(0, 3);

    std::vector<double> lambda(steps);
    double current = kRegimeMultipliers[pick(regime_rng)];
    for (std::size_t t = 0; t < steps; ++t) {
        if (t > 0 && t % switch_period == 0) {
            double next = current;
            while (std::signbit(next) == std::signbit(current)) next = kRegimeMultipliers[pick(regime_rng)];
            current = next;
        }
        lambda[t] = current;
    }
    return simulate_piecewise_exponential(std::move(lambda), eta, seed);
}

Embedding delay_embed(const TimeSeries& series, int n_delays) {
    if (n_delays < 0) throw Error("delay_embed: n_delays must be >= 0");
    const auto d = static_cast<std::size_t>(n_delays);
    if (series.size() <= d)
        throw Error("delay_embed: series of length " + std::to_string(series.size()) +
                    " too short for " + std::to_string(n_delays) + " delays");
    Embedding e;
    e.n_delays = n_delays;
    const auto count = series.size() - d;
    e.states.resize(n_delays + 1, static_cast<Eigen::Index>(count));
    for (std::size_t k = 0; k < count; ++k)
        for (std::size_t j = 0; j <= d; ++j)
            e.states(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = series.values[k + j];
    return e;
}

SnapshotPair window_pair(const Embedding& embedded, std::size_t t, int omega) {
    if (omega < 1) throw Error("window_pair: omega must be >= 1");
    const auto d = static_cast<std::size_t>(embedded.n_delays);
    const auto w = static_cast<std::size_t>(omega);
    if (t < w + d)
        throw Error("window_pair: insufficient history at t=" + std::to_string(t) +
                    " (need t >= omega + n_delays = " + std::to_string(w + d) + ")");
    if (t - d >= embedded.size())
        throw Error("window_pair: t=" + std::to_string(t) + " beyond end of series");

    // column index of the state ending at raw index r is r - d
    const auto first_x = static_cast<Eigen::Index>(t - w - d);
    SnapshotPair p;
    p.x = embedded.states.middleCols(first_x, omega);
    p.y = embedded.states.middleCols(first_x + 1, omega);
    p.t = t;
    return p;
}

std::vector<double> window_raw_values(const TimeSeries& series, std::size_t t, int omega,
                                      int n_delays) {
    const auto span = static_cast<std::size_t>(omega + n_delays);
    if (t < span || t >= series.size()) throw Error("window_raw_values: window out of range");
    return {series.values.begin() + static_cast<std::ptrdiff_t>(t - span),
            series.values.begin() + static_cast<std::ptrdiff_t>(t + 1)};
}

}  // namespace koopmem
