#pragma once

#include "koopmem/memory.hpp"

#include <string_view>

namespace koopmem {

enum class Mode { sliding, memory };
enum class Source { sliding, memory };

std::string_view to_string(Mode m);
std::string_view to_string(Source s);
Mode parse_mode(std::string_view s);

struct ForecastConfig {
    int omega = 5;
    int delta = 5;
    int n_delays = 1;
    double eps_lambda = 0.05;
    std::optional<double> eps_v;      ///< unset: eps_lambda * (n_delays + 1)
    int n_rbf = 10;
    std::optional<int> n_keep;        ///< unset: min(omega, lifted_dim)
    bool rescale = false;
    std::optional<std::size_t> capacity;
    Mode mode = Mode::memory;

    double sigma_floor = 1e-8;
    bool include_identity = true;
    double rel_tol = 1e-10;
    double reconstruction_tol = 1e-6;
    double magnitude_cap = 1e12;
    double anchor_floor = 1e-12;

    double effective_eps_v() const { return eps_v.value_or(eps_lambda * (n_delays + 1)); }
    int lifted_dim() const { return n_rbf + (include_identity ? n_delays + 1 : 0); }
    int effective_n_keep() const { return n_keep.value_or(std::min(omega, lifted_dim())); }
    /// Shortest series a run accepts.
    std::size_t min_length() const { return static_cast<std::size_t>(omega + n_delays + delta + 1); }

    /// Throws Error naming the first offending field.
    void validate() const;
};

namespace flags {
inline constexpr unsigned overflow = 1u << 0;      ///< sliding prediction clamped
inline constexpr unsigned anchor_floor = 1u << 1;  ///< recalled anchor ~ 0, rescale skipped
inline constexpr unsigned eig_fallback = 1u << 2;  ///< window decomposition failed
}  // namespace flags

std::string flags_to_string(unsigned f);

struct ForecastRecord {
    std::size_t t = 0;
    std::size_t target_t = 0;
    double prediction = 0.0;
    Source source = Source::sliding;
    std::optional<MatchResult> match;
    unsigned flags = 0;
    double imag_residual = 0.0;

    bool overflow_flag() const { return (flags & flags::overflow) != 0; }
};

struct RecallPrediction {
    double value = 0.0;
    bool anchor_floored = false;
};

/// y[t_min + delta], times current_anchor / recalled_anchor when rescaling.
/// A recalled anchor below anchor_floor in magnitude forces the ratio to 1.
RecallPrediction recall_prediction(const TimeSeries& series, const MatchResult& match, int delta,
                                   double current_anchor, double recalled_anchor, bool rescale,
                                   double anchor_floor = 1e-12);

/// Windowed EDMD with (memory mode) or without (sliding mode) episodic recall.
///
/// Issues one record for each t in [omega + n_delays, m - delta - 1]. In memory
/// mode the window's signature is stored after its prediction is made, so a
/// window never matches itself. `bank`, when given, is used (and extended) in
/// memory mode and left untouched in sliding mode.
std::vector<ForecastRecord> run(const ForecastConfig& config, const TimeSeries& series,
                                MemoryBank* bank = nullptr);

}  // namespace koopmem
