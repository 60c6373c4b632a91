#include "koopmem/forecaster.hpp"

#include <algorithm>
#include <cmath>

namespace koopmem {

std::string_view to_string(Mode m) { return m == Mode::memory ? "memory" : "sliding"; }
std::string_view to_string(Source s) { return s == Source::memory ? "memory" : "sliding"; }

Mode parse_mode(std::string_view s) {
    if (s == "memory") return Mode::memory;
    if (s == "sliding") return Mode::sliding;
    throw Error("unknown mode '" + std::string(s) + "' (expected sliding or memory)");
}

std::string flags_to_string(unsigned f) {
    std::string out;
    auto add = [&](unsigned bit, const char* name) {
        if (!(f & bit)) return;
        if (!out.empty()) out += '|';
        out += name;
    };
    add(flags::overflow, "overflow");
    add(flags::anchor_floor, "anchor_floor");
    add(flags::eig_fallback, "eig_fallback");
    return out;
}

void ForecastConfig::validate() const {
    if (omega < 1) throw Error("omega must be >= 1");
    if (delta < 1) throw Error("delta must be >= 1");
    if (n_delays < 0) throw Error("n_delays must be >= 0");
    if (!(eps_lambda > 0.0)) throw Error("eps_lambda must be > 0");
    if (eps_v && !(*eps_v > 0.0)) throw Error("eps_v must be > 0");
    if (n_rbf < 0 || (n_rbf == 0 && !include_identity)) throw Error("n_rbf must be >= 1");
    if (n_keep && *n_keep < 1) throw Error("n_keep must be >= 1");
    if (capacity && *capacity < 1) throw Error("capacity must be >= 1");
    if (!(sigma_floor > 0.0)) throw Error("sigma_floor must be > 0");
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw Error("rel_tol must lie in (0, 1)");
    if (!(magnitude_cap > 0.0)) throw Error("magnitude_cap must be > 0");
    if (!(anchor_floor >= 0.0)) throw Error("anchor_floor must be >= 0");
}

RecallPrediction recall_prediction(const TimeSeries& series, const MatchResult& match, int delta,
                                   double current_anchor, double recalled_anchor, bool rescale,
                                   double anchor_floor) {
    const std::size_t idx = match.t_min + static_cast<std::size_t>(delta);
    if (delta < 1 || idx >= series.size()) throw Error("recall_prediction: recalled future out of range");
    RecallPrediction out{series.values[idx], false};
    if (!rescale) return out;
    if (std::abs(recalled_anchor) < anchor_floor) {
        out.anchor_floored = true;
        return out;
    }
    out.value *= current_anchor / recalled_anchor;
    return out;
}

std::vector<ForecastRecord> run(const ForecastConfig& config, const TimeSeries& series, MemoryBank* bank) {
    config.validate();
    if (series.size() < config.min_length())
        throw Error("series of length " + std::to_string(series.size()) + " is too short; need at least " +
                    std::to_string(config.min_length()) + " values");
    for (double v : series.values)
        if (!std::isfinite(v)) throw Error("series contains non-finite values");

    MemoryBank local(config.capacity);
    MemoryBank& memory = bank ? *bank : local;
    const bool use_memory = config.mode == Mode::memory;

    const DictionaryOptions dict_opts{config.n_rbf, config.sigma_floor, config.include_identity};
    EdmdOptions edmd_opts;
    edmd_opts.rel_tol = config.rel_tol;
    edmd_opts.reconstruction_tol = config.reconstruction_tol;
    const int n_keep = config.effective_n_keep();
    const double eps_v = config.effective_eps_v();

    const Embedding embedded = delay_embed(series, config.n_delays);
    const std::size_t first = static_cast<std::size_t>(config.omega + config.n_delays);
    const std::size_t last = series.size() - static_cast<std::size_t>(config.delta) - 1;

    std::vector<ForecastRecord> records;
    records.reserve(last - first + 1);
    std::optional<SpectralSignature> last_viable;

    for (std::size_t t = first; t <= last; ++t) {
        const auto raw = window_raw_values(series, t, config.omega, config.n_delays);
        const Dictionary dict = build_dictionary(raw, config.n_delays, dict_opts);
        const SnapshotPair pair = window_pair(embedded, t, config.omega);
        const KoopmanModel model = edmd_fit(pair, dict, edmd_opts);
        const EmbeddedState state = embedded.at(t);
        SpectralSignature sig = extract_signature(model, dict.lift(state), state, n_keep, edmd_opts);
        sig.t = t;
        sig.anchor = raw.front();

        ForecastRecord rec;
        rec.t = t;
        rec.target_t = t + static_cast<std::size_t>(config.delta);

        if (sig.fallback) {
            rec.flags |= flags::eig_fallback;
            if (last_viable) {
                // advance the last usable window's decomposition to the same target
                const auto steps = static_cast<int>(rec.target_t - last_viable->t);
                const auto p = predict_sliding(*last_viable, steps, config.magnitude_cap);
                rec.prediction = p.value;
                rec.imag_residual = p.imag_residual;
                if (p.overflow) rec.flags |= flags::overflow;
            } else {
                rec.prediction = series.values[t];
            }
            records.push_back(rec);
            continue;
        }
        last_viable = sig;

        if (use_memory) rec.match = memory.find_match(sig, t, config.delta, config.eps_lambda, eps_v);

        if (rec.match) {
            const auto& matched = *std::lower_bound(
                memory.records().begin(), memory.records().end(), rec.match->t_min,
                [](const MemoryRecord& r, std::size_t tp) { return r.t_prime < tp; });
            const auto recalled = recall_prediction(series, *rec.match, config.delta, sig.anchor,
                                                    matched.signature.anchor, config.rescale,
                                                    config.anchor_floor);
            rec.prediction = recalled.value;
            rec.source = Source::memory;
            if (recalled.anchor_floored) rec.flags |= flags::anchor_floor;
            memory.mark_matched(rec.match->t_min);
        } else {
            const auto p = predict_sliding(sig, config.delta, config.magnitude_cap);
            rec.prediction = p.value;
            rec.imag_residual = p.imag_residual;
            if (p.overflow) rec.flags |= flags::overflow;
        }
        records.push_back(rec);

        if (use_memory) memory.store(std::move(sig));
    }
    return records;
}

}  // namespace koopmem
