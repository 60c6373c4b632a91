#include "koopmem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace koopmem {

double median(std::vector<double> values) {
    if (values.empty()) throw Error("median of empty sequence");
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::vector<double> absolute_errors(const TimeSeries& truth, std::span<const ForecastRecord> records) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        if (r.target_t >= truth.size())
            throw Error("no ground truth for target index " + std::to_string(r.target_t));
        out.push_back(std::abs(truth.values[r.target_t] - r.prediction));
    }
    return out;
}

ErrorSummary median_relative_error(const TimeSeries& truth, std::span<const ForecastRecord> records,
                                   double rel_floor) {
    ErrorSummary s;
    const auto abs_err = absolute_errors(truth, records);
    std::vector<double> rel;
    rel.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double x = truth.values[records[i].target_t];
        if (std::abs(x) < rel_floor) {
            ++s.n_excluded;
            continue;
        }
        rel.push_back(100.0 * abs_err[i] / std::abs(x));
    }
    if (rel.empty()) throw Error("median_relative_error: no evaluable records");
    s.median_abs_error = median(abs_err);
    s.median_rel_error_pct = median(rel);
    s.n_points = rel.size();
    return s;
}

Improvement improvement(std::span<const double> errors_baseline, std::span<const double> errors_memory) {
    if (errors_baseline.empty() || errors_memory.empty()) throw Error("improvement: empty error sequence");
    if (errors_baseline.size() != errors_memory.size())
        throw Error("improvement: error sequences cover different index sets");
    const double base = median({errors_baseline.begin(), errors_baseline.end()});
    const double mem = median({errors_memory.begin(), errors_memory.end()});
    if (mem == 0.0) {
        if (base == 0.0) return {0.0, false};
        return {std::numeric_limits<double>::infinity(), true};
    }
    return {100.0 * (base / mem - 1.0), false};
}

}  // namespace koopmem
