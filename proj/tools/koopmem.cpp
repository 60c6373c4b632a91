// koopmem: windowed EDMD forecasting with episodic memory.
//
//   koopmem generate --steps 1000 --switch 10 --seed 7 -o synth.csv
//   koopmem forecast --profile synthetic -i synth.csv --output-dir out
//   koopmem compare  --profile synthetic -i synth.csv --output-dir out

#include "koopmem/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace koopmem;

namespace {

struct InputFlags {
    std::string input;
    std::string column;
    char delimiter = ',';
    bool interpolate = false;
};

struct ConfigFlags {
    std::string profile;
    std::string config_file;
    std::optional<std::string> mode;
    std::optional<int> omega, delta, delays, n_rbf, n_keep;
    std::optional<double> eps_lambda, eps_v;
    std::optional<std::size_t> capacity;
    std::optional<std::string> rescale;
};

struct OutputFlags {
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    bool bank_snapshot = false;
};

void add_input_flags(CLI::App* cmd, InputFlags& f) {
    cmd->add_option("-i,--input", f.input, "Input CSV (header row required)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--column", f.column, "Column name or zero-based index (default: 'value', else last column)");
    cmd->add_option("--delimiter", f.delimiter, "Field delimiter");
    cmd->add_flag("--interpolate", f.interpolate, "Linearly interpolate interior missing values");
}

void add_config_flags(CLI::App* cmd, ConfigFlags& f, bool with_mode) {
    cmd->add_option("--profile", f.profile, "Preset: synthetic, flu, bike")
        ->check(CLI::IsMember({"synthetic", "flu", "bike"}));
    cmd->add_option("--config", f.config_file, "key = value configuration file")->check(CLI::ExistingFile);
    if (with_mode) cmd->add_option("--mode", f.mode, "sliding or memory")->check(CLI::IsMember({"sliding", "memory"}));
    cmd->add_option("--omega", f.omega, "Window length (snapshots)");
    cmd->add_option("--delta", f.delta, "Forecast horizon (steps)");
    cmd->add_option("--delays", f.delays, "Number of time delays in the embedding");
    cmd->add_option("--eps-lambda", f.eps_lambda, "Eigenvalue match threshold");
    cmd->add_option("--eps-v", f.eps_v, "Mode match threshold (default eps_lambda * (delays + 1))");
    cmd->add_option("--n-rbf", f.n_rbf, "Radial basis functions per window");
    cmd->add_option("--n-keep", f.n_keep, "Retained eigenpairs per signature");
    cmd->add_option("--capacity", f.capacity, "Memory bank capacity (default unbounded)");
    cmd->add_option("--rescale", f.rescale, "Rescale recalled values by window anchors (on/off)")
        ->check(CLI::IsMember({"on", "off", "true", "false", "1", "0"}));
}

void add_output_flags(CLI::App* cmd, OutputFlags& f) {
    cmd->add_option("--output-dir", f.output_dir, "Directory for outputs");
    cmd->add_option("--seed", f.seed, "Seed recorded in the manifest");
    cmd->add_flag("--bank-snapshot", f.bank_snapshot, "Write the final memory bank as JSON lines");
}

ForecastConfig resolve_config(const ConfigFlags& f) {
    ForecastConfig c = f.profile.empty() ? ForecastConfig{} : profile_config(f.profile);
    if (!f.config_file.empty()) apply_config_file(c, f.config_file);
    if (f.mode) c.mode = parse_mode(*f.mode);
    if (f.omega) c.omega = *f.omega;
    if (f.delta) c.delta = *f.delta;
    if (f.delays) c.n_delays = *f.delays;
    if (f.eps_lambda) c.eps_lambda = *f.eps_lambda;
    if (f.eps_v) c.eps_v = *f.eps_v;
    if (f.n_rbf) c.n_rbf = *f.n_rbf;
    if (f.n_keep) c.n_keep = *f.n_keep;
    if (f.capacity) c.capacity = *f.capacity;
    if (f.rescale) c.rescale = *f.rescale == "on" || *f.rescale == "true" || *f.rescale == "1";
    c.validate();
    return c;
}

TimeSeries load_input(const InputFlags& f, std::string& column_used) {
    CsvOptions opts;
    opts.delimiter = f.delimiter;
    opts.interpolate = f.interpolate;
    if (f.column.empty()) {
        const auto header = read_csv_header(f.input, f.delimiter);
        const bool has_value = std::find(header.begin(), header.end(), "value") != header.end();
        column_used = has_value ? "value" : header.back();
        return load_csv(f.input, column_used, opts);
    }
    column_used = f.column;
    if (std::all_of(f.column.begin(), f.column.end(), [](unsigned char ch) { return std::isdigit(ch); }))
        return load_csv(f.input, static_cast<std::size_t>(std::stoull(f.column)), opts);
    return load_csv(f.input, f.column, opts);
}

json manifest_json(const std::string& command, const InputFlags& in, const std::string& column,
                   const json& config, const OutputFlags& out, const fs::path& dir,
                   const std::vector<std::string>& outputs) {
    json files = json::array();
    for (const auto& name : outputs) files.push_back({{"path", name}, {"sha256", sha256_file(dir / name)}});
    return {
        {"tool", "koopmem"},
        {"version", kToolVersion},
        {"command", command},
        {"input", {{"path", in.input}, {"column", column}, {"sha256", sha256_file(in.input)}}},
        {"seed", out.seed},
        {"config", config},
        {"outputs", files},
    };
}

int cmd_generate(std::size_t steps, std::size_t switch_period, double eta, std::uint64_t seed, const std::string& path) {
    const auto synth = gen_piecewise_exponential(steps, switch_period, eta, seed);
    write_series_csv(path, synth.series, &synth.lambda);
    std::cout << "wrote " << steps << " rows to " << path << '\n';
    return 0;
}

int cmd_forecast(const InputFlags& in, const ConfigFlags& cf, const OutputFlags& out) {
    const ForecastConfig config = resolve_config(cf);
    std::string column;
    const TimeSeries series = load_input(in, column);

    MemoryBank bank(config.capacity);
    const auto records = run(config, series, &bank);

    const fs::path dir = out.output_dir;
    fs::create_directories(dir);
    std::vector<std::string> outputs{"predictions.csv", "summary.json"};
    write_records_csv(dir / "predictions.csv", series, records);

    json summary = run_summary(config, series, records);
    summary["config"] = config_to_json(config);
    summary["manifest"] = "manifest.json";
    write_json(dir / "summary.json", summary);

    if (out.bank_snapshot && config.mode == Mode::memory) {
        std::ofstream snap(dir / "bank.jsonl");
        bank.write_jsonl(snap);
        if (!snap) throw Error("write failed: bank.jsonl");
        outputs.emplace_back("bank.jsonl");
    }
    write_json(dir / "manifest.json",
               manifest_json("forecast", in, column, config_to_json(config), out, dir, outputs));

    const auto& err = summary["errors"];
    std::cout << to_string(config.mode) << ": " << records.size() << " forecasts, median relative error "
              << err["median_rel_error_pct"].get<double>() << "%";
    if (summary.contains("match_rate")) std::cout << ", match rate " << summary["match_rate"].get<double>();
    std::cout << '\n';
    return 0;
}

int cmd_compare(const InputFlags& in, const ConfigFlags& cf, const OutputFlags& out, const std::string& baseline_mode,
                const std::string& candidate_mode) {
    ForecastConfig base = resolve_config(cf);
    ForecastConfig cand = base;
    base.mode = parse_mode(baseline_mode);
    cand.mode = parse_mode(candidate_mode);
    std::string column;
    const TimeSeries series = load_input(in, column);

    MemoryBank bank(cand.capacity);
    const auto base_records = run(base, series);
    const auto cand_records = run(cand, series, &bank);

    const fs::path dir = out.output_dir;
    fs::create_directories(dir);
    std::vector<std::string> outputs{"baseline_predictions.csv", "candidate_predictions.csv", "comparison.csv",
                                     "compare_summary.json"};
    write_records_csv(dir / "baseline_predictions.csv", series, base_records);
    write_records_csv(dir / "candidate_predictions.csv", series, cand_records);
    write_comparison_csv(dir / "comparison.csv", series, base_records, cand_records);

    json summary = comparison_summary(base, cand, series, base_records, cand_records);
    summary["config"] = config_to_json(cand);
    summary["baseline_mode"] = baseline_mode;
    summary["candidate_mode"] = candidate_mode;
    summary["manifest"] = "manifest.json";
    write_json(dir / "compare_summary.json", summary);

    if (out.bank_snapshot && cand.mode == Mode::memory) {
        std::ofstream snap(dir / "bank.jsonl");
        bank.write_jsonl(snap);
        if (!snap) throw Error("write failed: bank.jsonl");
        outputs.emplace_back("bank.jsonl");
    }
    json config = config_to_json(cand);
    config["baseline_mode"] = baseline_mode;
    write_json(dir / "manifest.json", manifest_json("compare", in, column, config, out, dir, outputs));

    std::cout << baseline_mode << " vs " << candidate_mode << ": improvement ";
    if (summary["improvement_infinite"].get<bool>()) std::cout << "inf";
    else std::cout << summary["improvement_pct"].get<double>();
    std::cout << "%\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Windowed EDMD forecasting with episodic memory"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::size_t steps = 0, switch_period = 10;
    double eta = kDefaultNoise;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "Write a synthetic piecewise exponential series");
    gen->add_option("--steps", steps, "Number of samples")->required()->check(CLI::PositiveNumber);
    gen->add_option("--switch", switch_period, "Steps between regime switches")->check(CLI::PositiveNumber);
    gen->add_option("--eta", eta, "Multiplicative noise magnitude")->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("-o,--output", gen_out, "Output CSV")->required();

    InputFlags fc_in, cmp_in;
    ConfigFlags fc_cfg, cmp_cfg;
    OutputFlags fc_out, cmp_out;
    auto* fc = app.add_subcommand("forecast", "Run one forecasting mode");
    add_input_flags(fc, fc_in);
    add_config_flags(fc, fc_cfg, true);
    add_output_flags(fc, fc_out);

    std::string baseline_mode = "sliding", candidate_mode = "memory";
    auto* cmp = app.add_subcommand("compare", "Run two modes on the same input and report the improvement");
    add_input_flags(cmp, cmp_in);
    add_config_flags(cmp, cmp_cfg, false);
    add_output_flags(cmp, cmp_out);
    cmp->add_option("--baseline", baseline_mode, "Baseline mode")->check(CLI::IsMember({"sliding", "memory"}));
    cmp->add_option("--candidate", candidate_mode, "Candidate mode")->check(CLI::IsMember({"sliding", "memory"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return cmd_generate(steps, switch_period, eta, gen_seed, gen_out);
        if (*fc) return cmd_forecast(fc_in, fc_cfg, fc_out);
        if (*cmp) return cmd_compare(cmp_in, cmp_cfg, cmp_out, baseline_mode, candidate_mode);
    } catch (const std::exception& e) {
        std::cerr << "koopmem: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
