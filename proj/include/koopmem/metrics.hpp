#pragma once

#include "koopmem/forecaster.hpp"

#include <span>

namespace koopmem {

struct ErrorSummary {
    double median_abs_error = 0.0;
    double median_rel_error_pct = 0.0;
    std::size_t n_points = 0;    ///< records entering the relative median
    std::size_t n_excluded = 0;  ///< targets with |truth| < rel_floor
};

double median(std::vector<double> values);

/// Absolute errors |truth[target_t] - prediction|, in record order.
std::vector<double> absolute_errors(const TimeSeries& truth, std::span<const ForecastRecord> records);

/// Median of |x - xhat| / |x| in percent. Targets with |x| < rel_floor are
/// left out of the relative median and counted in n_excluded.
ErrorSummary median_relative_error(const TimeSeries& truth, std::span<const ForecastRecord> records,
                                   double rel_floor = 1e-9);

struct Improvement {
    double percent = 0.0;
    bool infinite = false;  ///< memory median was zero
};

/// 100 * (median(baseline) / median(memory) - 1) on absolute errors.
Improvement improvement(std::span<const double> errors_baseline, std::span<const double> errors_memory);

}  // namespace koopmem
