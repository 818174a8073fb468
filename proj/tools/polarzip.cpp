/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polarzip/bench.hpp"
#include "polarzip/container.hpp"
#include "polarzip/errors.hpp"

namespace {

using namespace polarzip;

std::vector<std::uint8_t> read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw parameter_error("cannot open input file: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw parameter_error("cannot open output file: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw parameter_error("short write to output file: " + path);
}

void emit_csv(const std::string& path, const std::string& csv)
{
    if (path.empty() || path == "-") {
        std::fwrite(csv.data(), 1, csv.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw parameter_error("cannot open CSV output file: " + path);
    out << csv;
}

std::vector<double> parse_double_list(const std::string& text)
{
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size())
            throw parameter_error("cannot parse number '" + item + "'");
        values.push_back(v);
        pos = comma + 1;
    }
    return values;
}

// "8:17" inclusive range, or a comma-separated list, or one value.
std::vector<int> parse_int_spec(const std::string& text)
{
    const std::size_t colon = text.find(':');
    if (colon != std::string::npos) {
        const int lo = std::stoi(text.substr(0, colon));
        const int hi = std::stoi(text.substr(colon + 1));
        if (hi < lo)
            throw parameter_error("empty range '" + text + "'");
        std::vector<int> values;
        for (int v = lo; v <= hi; ++v)
            values.push_back(v);
        return values;
    }
    std::vector<int> values;
    for (double v : parse_double_list(text)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw parameter_error("expected an integer in '" + text + "'");
        values.push_back(i);
    }
    return values;
}

// "start:stop:step" grid, or a comma-separated list. Grid points are
// computed as start + k*step, never by running accumulation.
std::vector<double> parse_grid_spec(const std::string& text)
{
    const std::size_t c1 = text.find(':');
    if (c1 == std::string::npos)
        return parse_double_list(text);
    const std::size_t c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw parameter_error("grid spec must be start:stop:step");
    const double start = std::stod(text.substr(0, c1));
    const double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(text.substr(c2 + 1));
    if (!(step > 0.0))
        throw parameter_error("grid step must be positive");
    std::vector<double> values;
    for (int k = 0;; ++k) {
        const double v = start + k * step;
        if (v > stop + step * 1e-9)
            break;
        values.push_back(v);
    }
    if (values.empty())
        throw parameter_error("empty grid '" + text + "'");
    return values;
}

SourceModel model_from_flags(const std::string& probs_text, std::optional<double> entropy_base2)
{
    if (!probs_text.empty() && entropy_base2)
        throw parameter_error("give either --probs or --entropy-base2, not both");
    if (!probs_text.empty())
        return SourceModel(parse_double_list(probs_text));
    if (entropy_base2)
        return SourceModel::binary_from_entropy(*entropy_base2);
    throw parameter_error("a source model is required: --probs or --entropy-base2");
}

EngineKind parse_engine(const std::string& name)
{
    if (name == "probability")
        return EngineKind::probability;
    if (name == "llr")
        return EngineKind::llr_min_sum;
    throw parameter_error("unknown engine '" + name + "' (probability, llr)");
}

SelectionMetric parse_metric(const std::string& name)
{
    if (name == "entropy")
        return SelectionMetric::entropy_h;
    if (name == "ml-error")
        return SelectionMetric::ml_error;
    if (name == "abs-llr")
        return SelectionMetric::abs_llr;
    throw parameter_error("unknown metric '" + name + "' (entropy, ml-error, abs-llr)");
}

SchemeKind parse_scheme(const std::string& name)
{
    if (name == "fixed")
        return SchemeKind::fixed;
    if (name == "adaptive")
        return SchemeKind::adaptive;
    throw parameter_error("unknown scheme '" + name + "' (fixed, adaptive)");
}

LlrThresholdMap parse_llr_map(const std::string& name)
{
    if (name == "exact")
        return LlrThresholdMap::exact;
    if (name == "log-quotient")
        return LlrThresholdMap::log_quotient;
    throw parameter_error("unknown llr map '" + name + "' (exact, log-quotient)");
}

struct Flags {
    std::string input, output;
    std::string probs;
    std::optional<double> entropy_base2;
    int block_exp = 12;
    std::string engine = "probability";
    std::string metric = "ml-error";
    std::string scheme = "fixed";
    std::optional<double> threshold;
    std::string llr_map = "exact";
    std::string n_exp_spec = "8:12";
    std::string rates_spec;
    std::string p_grid_spec;
    std::string radix_spec = "2,3";
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    std::string csv = "-";
};

int run_compress(const Flags& f)
{
    const SourceModel model = model_from_flags(f.probs, f.entropy_base2);
    const EngineKind engine = parse_engine(f.engine);
    const SelectionMetric metric = parse_metric(f.metric);
    const SchemeKind scheme = parse_scheme(f.scheme);
    const double threshold =
        scheme == SchemeKind::fixed
            ? resolve_threshold(metric, f.block_exp, model.radix(), f.threshold,
                                parse_llr_map(f.llr_map))
            : 0.0;

    const auto raw = read_file(f.input);
    const auto t0 = std::chrono::steady_clock::now();
    const CompressResult res =
        compress_bytes(raw, model, f.block_exp, scheme, engine, metric, threshold);
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_file(f.output, res.bytes);

    std::printf("blocks=%u total_symbols=%llu container_bytes=%zu container_bits=%llu\n",
                res.block_count, static_cast<unsigned long long>(res.total_symbols),
                res.bytes.size(), static_cast<unsigned long long>(res.container_bits));
    if (scheme == SchemeKind::fixed && res.block_count > 0)
        std::printf("mean_analytic_rate=%.6f threshold=%.17g source_entropy=%.6f\n",
                    res.sum_analytic_rate / res.block_count, threshold,
                    model.entropy(model.radix()));
    std::fprintf(stderr, "compressed %zu bytes in %.3fs\n", raw.size(), dt);
    return 0;
}

int run_decompress(const Flags& f)
{
    const auto container = read_file(f.input);
    const auto raw = decompress_bytes(container);
    write_file(f.output, raw);
    std::printf("decompressed_bytes=%zu\n", raw.size());
    return 0;
}

int run_bench_rate(const Flags& f)
{
    const SourceModel model = model_from_flags(f.probs, f.entropy_base2);
    const std::string csv = rate_bench_csv(model, parse_int_spec(f.n_exp_spec), f.trials,
                                           f.seed, parse_engine(f.engine),
                                           parse_metric(f.metric), f.threshold,
                                           parse_llr_map(f.llr_map));
    emit_csv(f.csv, csv);
    return 0;
}

int run_bench_sweep(const Flags& f)
{
    const std::string csv = sweep_csv(parse_grid_spec(f.p_grid_spec),
                                      parse_int_spec(f.n_exp_spec), f.trials, f.seed);
    emit_csv(f.csv, csv);
    return 0;
}

int run_bench_bler(const Flags& f)
{
    if (!f.entropy_base2)
        throw parameter_error("bench bler needs --entropy-base2");
    if (f.rates_spec.empty())
        throw parameter_error("bench bler needs --rates");
    const std::string csv = bler_csv(*f.entropy_base2, parse_int_spec(f.n_exp_spec), f.trials,
                                     f.seed, parse_grid_spec(f.rates_spec));
    emit_csv(f.csv, csv);
    return 0;
}

int run_profile(const Flags& f)
{
    const SourceModel model = model_from_flags(f.probs, f.entropy_base2);
    const std::string csv = profile_csv(model, f.block_exp, f.trials, f.seed);
    emit_csv(f.csv, csv);
    return 0;
}

int run_oracle_check(const Flags& f)
{
    const OracleCheckReport report =
        oracle_check(parse_int_spec(f.n_exp_spec), parse_int_spec(f.radix_spec));
    std::printf("max_deviation=%.3g\n", report.max_deviation);
    if (!report.ok) {
        std::fprintf(stderr, "oracle-check FAILED: %s\n", report.detail.c_str());
        return 3;
    }
    std::printf("oracle-check passed\n");
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"polarzip - lossless block compressor driven by successive-cancellation "
                 "statistics over the polar transform"};
    app.require_subcommand(1);
    Flags f;

    auto add_model_flags = [&](CLI::App* cmd) {
        cmd->add_option("--probs", f.probs,
                        "comma-separated symbol probabilities, e.g. 0.9,0.1");
        cmd->add_option("--entropy-base2", f.entropy_base2,
                        "binary source given by its base-2 entropy in (0,1]");
    };
    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--trials", f.trials, "Monte Carlo trials per point");
        cmd->add_option("--seed", f.seed, "base seed; trial t uses a mixed (seed, t) stream");
        cmd->add_option("--csv", f.csv, "CSV output path, '-' for stdout");
    };

    CLI::App* compress = app.add_subcommand("compress", "compress a file");
    compress->add_option("input", f.input)->required();
    compress->add_option("output", f.output)->required();
    add_model_flags(compress);
    compress->add_option("--block-exp", f.block_exp, "block size exponent n, N = 2^n");
    compress->add_option("--engine", f.engine, "probability | llr");
    compress->add_option("--metric", f.metric, "entropy | ml-error | abs-llr");
    compress->add_option("--scheme", f.scheme, "fixed | adaptive");
    compress->add_option("--threshold", f.threshold,
                         "fixed-scheme threshold on the metric scale (default: optimal)");
    compress->add_option("--llr-map", f.llr_map,
                         "ml-error to |LLR| threshold map: exact | log-quotient");

    CLI::App* decompress = app.add_subcommand("decompress", "decompress a container file");
    decompress->add_option("input", f.input)->required();
    decompress->add_option("output", f.output)->required();

    CLI::App* bench = app.add_subcommand("bench", "Monte Carlo experiment harness");
    bench->require_subcommand(1);

    CLI::App* rate = bench->add_subcommand("rate", "average rates per block size");
    add_model_flags(rate);
    rate->add_option("--n-exp", f.n_exp_spec, "block exponents, '8:17' or '10,14'");
    rate->add_option("--engine", f.engine, "probability | llr");
    rate->add_option("--metric", f.metric, "entropy | ml-error | abs-llr");
    rate->add_option("--threshold", f.threshold, "fixed threshold override");
    rate->add_option("--llr-map", f.llr_map, "exact | log-quotient");
    add_run_flags(rate);

    CLI::App* sweep = bench->add_subcommand("sweep", "rate vs source probability");
    sweep->add_option("--p-grid", f.p_grid_spec, "probabilities, 'start:stop:step' or list")
        ->required();
    sweep->add_option("--n-exp", f.n_exp_spec, "block exponents");
    add_run_flags(sweep);

    CLI::App* bler = bench->add_subcommand("bler", "truncated fixed-length failure rates");
    bler->add_option("--entropy-base2", f.entropy_base2, "binary source entropy")->required();
    bler->add_option("--n-exp", f.n_exp_spec, "block exponents");
    bler->add_option("--rates", f.rates_spec, "rate budgets, 'start:stop:step' or list")
        ->required();
    add_run_flags(bler);

    CLI::App* profile = app.add_subcommand("profile", "per-index conditional entropy profile");
    add_model_flags(profile);
    profile->add_option("--n-exp", f.block_exp, "block exponent");
    add_run_flags(profile);

    CLI::App* oracle = app.add_subcommand("oracle-check", "engine vs brute-force enumeration");
    oracle->add_option("--n-exp", f.n_exp_spec, "block exponents (small)")->required();
    oracle->add_option("--radix", f.radix_spec, "alphabet sizes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(compress))
            return run_compress(f);
        if (app.got_subcommand(decompress))
            return run_decompress(f);
        if (app.got_subcommand(bench)) {
            if (bench->got_subcommand(rate))
                return run_bench_rate(f);
            if (bench->got_subcommand(sweep))
                return run_bench_sweep(f);
            return run_bench_bler(f);
        }
        if (app.got_subcommand(profile))
            return run_profile(f);
        return run_oracle_check(f);
    } catch (const malformed_stream& e) {
        std::fprintf(stderr, "error: malformed stream: %s\n", e.what());
        return 2;
    } catch (const degeneracy_error& e) {
        std::fprintf(stderr, "error: impossible conditioning: %s\n", e.what());
        return 2;
    } catch (const parameter_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
