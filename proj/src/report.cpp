#include "koopmem/report.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace koopmem {

using nlohmann::json;

ForecastConfig profile_config(std::string_view name) {
    ForecastConfig c;
    if (name == "synthetic") {
        c.omega = 5;
        c.delta = 5;
        c.n_delays = 1;
        c.eps_lambda = 0.05;
        c.eps_v = 0.10;
        c.rescale = true;
    } else if (name == "flu") {
        c.omega = 3;
        c.delta = 1;
        c.n_delays = 4;
        c.eps_lambda = 0.05;
        c.eps_v = 0.25;
    } else if (name == "bike") {
        c.omega = 3;
        c.delta = 1;
        c.n_delays = 1;
        c.eps_lambda = 0.1;
        c.eps_v = 0.2;
    } else {
        throw Error("unknown profile '" + std::string(name) + "' (expected synthetic, flu or bike)");
    }
    return c;
}

std::vector<std::string> profile_names() { return {"synthetic", "flu", "bike"}; }

namespace {

std::string_view strip(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view v, const std::string& where) {
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw Error(where + ": cannot parse '" + std::string(v) + "'");
    return out;
}

bool parse_bool(std::string_view v, const std::string& where) {
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw Error(where + ": expected a boolean, got '" + std::string(v) + "'");
}

std::string fmt_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void apply_config_text(ForecastConfig& c, std::string_view text, const std::string& origin) {
    std::size_t lineno = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;

        const std::string where = origin + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw Error(where + ": expected key = value");
        const auto key = strip(line.substr(0, eq));
        const auto val = strip(line.substr(eq + 1));

        if (key == "omega") c.omega = parse_number<int>(val, where);
        else if (key == "delta") c.delta = parse_number<int>(val, where);
        else if (key == "n_delays") c.n_delays = parse_number<int>(val, where);
        else if (key == "eps_lambda") c.eps_lambda = parse_number<double>(val, where);
        else if (key == "eps_v") c.eps_v = parse_number<double>(val, where);
        else if (key == "n_rbf") c.n_rbf = parse_number<int>(val, where);
        else if (key == "n_keep") c.n_keep = parse_number<int>(val, where);
        else if (key == "rescale") c.rescale = parse_bool(val, where);
        else if (key == "capacity") c.capacity = parse_number<std::size_t>(val, where);
        else if (key == "mode") c.mode = parse_mode(val);
        else if (key == "sigma_floor") c.sigma_floor = parse_number<double>(val, where);
        else if (key == "include_identity") c.include_identity = parse_bool(val, where);
        else if (key == "rel_tol") c.rel_tol = parse_number<double>(val, where);
        else if (key == "reconstruction_tol") c.reconstruction_tol = parse_number<double>(val, where);
        else if (key == "magnitude_cap") c.magnitude_cap = parse_number<double>(val, where);
        else if (key == "anchor_floor") c.anchor_floor = parse_number<double>(val, where);
        else throw Error(where + ": unknown key '" + std::string(key) + "'");
    }
}

void apply_config_file(ForecastConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(config, ss.str(), path.string());
}

json config_to_json(const ForecastConfig& c) {
    json j = {
        {"mode", to_string(c.mode)},
        {"omega", c.omega},
        {"delta", c.delta},
        {"n_delays", c.n_delays},
        {"eps_lambda", c.eps_lambda},
        {"eps_v", c.effective_eps_v()},
        {"eps_v_derived", !c.eps_v.has_value()},
        {"n_rbf", c.n_rbf},
        {"n_keep", c.effective_n_keep()},
        {"rescale", c.rescale},
        {"capacity", c.capacity ? json(*c.capacity) : json(nullptr)},
        {"sigma_floor", c.sigma_floor},
        {"include_identity", c.include_identity},
        {"rel_tol", c.rel_tol},
        {"reconstruction_tol", c.reconstruction_tol},
        {"magnitude_cap", c.magnitude_cap},
        {"anchor_floor", c.anchor_floor},
    };
    return j;
}

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw Error("sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

void write_records_csv(const std::filesystem::path& path, const TimeSeries& series,
                       std::span<const ForecastRecord> records) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "t,target_t,truth,prediction,source,d_lambda,d_v,flags\n";
    for (const auto& r : records) {
        out << series.start_index + static_cast<std::int64_t>(r.t) << ','
            << series.start_index + static_cast<std::int64_t>(r.target_t) << ','
            << fmt_real(series.values.at(r.target_t)) << ',' << fmt_real(r.prediction) << ','
            << to_string(r.source) << ',';
        if (r.match) out << fmt_real(r.match->d_lambda) << ',' << fmt_real(r.match->d_v);
        else out << ',';
        out << ',' << flags_to_string(r.flags) << '\n';
    }
    if (!out) throw Error("write failed: " + path.string());
}

namespace {

json error_json(const ErrorSummary& e) {
    return {{"median_abs_error", e.median_abs_error},
            {"median_rel_error_pct", e.median_rel_error_pct},
            {"n_points", e.n_points},
            {"n_excluded", e.n_excluded}};
}

}  // namespace

json run_summary(const ForecastConfig& config, const TimeSeries& series, std::span<const ForecastRecord> records) {
    std::size_t overflow = 0, anchor = 0, fallback = 0, matches = 0;
    for (const auto& r : records) {
        overflow += (r.flags & flags::overflow) != 0;
        anchor += (r.flags & flags::anchor_floor) != 0;
        fallback += (r.flags & flags::eig_fallback) != 0;
        matches += r.match.has_value();
    }
    json j = {
        {"mode", to_string(config.mode)},
        {"n_records", records.size()},
        {"errors", error_json(median_relative_error(series, records))},
        {"flag_counts", {{"overflow", overflow}, {"anchor_floor", anchor}, {"eig_fallback", fallback}}},
    };
    if (config.mode == Mode::memory) {
        j["n_matches"] = matches;
        j["match_rate"] = records.empty() ? 0.0 : static_cast<double>(matches) / static_cast<double>(records.size());
    }
    return j;
}

void write_comparison_csv(const std::filesystem::path& path, const TimeSeries& series,
                          std::span<const ForecastRecord> baseline, std::span<const ForecastRecord> candidate) {
    if (baseline.size() != candidate.size()) throw Error("comparison: runs cover different index sets");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "t,target_t,truth,baseline,candidate,abs_err_baseline,abs_err_candidate,candidate_source\n";
    for (std::size_t i = 0; i < baseline.size(); ++i) {
        const auto& b = baseline[i];
        const auto& c = candidate[i];
        if (b.t != c.t) throw Error("comparison: runs cover different index sets");
        const double truth = series.values.at(b.target_t);
        out << series.start_index + static_cast<std::int64_t>(b.t) << ','
            << series.start_index + static_cast<std::int64_t>(b.target_t) << ',' << fmt_real(truth) << ','
            << fmt_real(b.prediction) << ',' << fmt_real(c.prediction) << ',' << fmt_real(std::abs(truth - b.prediction))
            << ',' << fmt_real(std::abs(truth - c.prediction)) << ',' << to_string(c.source) << '\n';
    }
    if (!out) throw Error("write failed: " + path.string());
}

json comparison_summary(const ForecastConfig& baseline_config, const ForecastConfig& candidate_config,
                        const TimeSeries& series, std::span<const ForecastRecord> baseline,
                        std::span<const ForecastRecord> candidate) {
    const auto imp = improvement(absolute_errors(series, baseline), absolute_errors(series, candidate));
    json j = {
        {"baseline", run_summary(baseline_config, series, baseline)},
        {"candidate", run_summary(candidate_config, series, candidate)},
        {"improvement_pct", imp.infinite ? json(nullptr) : json(imp.percent)},
        {"improvement_infinite", imp.infinite},
    };
    if (candidate_config.mode == Mode::memory) j["match_rate"] = j["candidate"]["match_rate"];
    return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace koopmem
