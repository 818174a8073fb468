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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails. argv[1] must point at
// the polarzip CLI binary (used by the determinism criterion).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <unistd.h>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "polarzip/bench.hpp"
#include "polarzip/codec.hpp"
#include "polarzip/container.hpp"
#include "polarzip/oracle.hpp"
#include "polarzip/polar_transform.hpp"
#include "polarzip/rng.hpp"
#include "polarzip/threading.hpp"

using namespace polarzip;

namespace {

int failures = 0;

void report(int criterion, const char* title, bool ok, const std::string& detail)
{
    std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", criterion, title,
                detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

double now_seconds()
{
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fmt(const char* format, ...)
{
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

SourceModel random_model(int radix, std::uint64_t seed, bool allow_degenerate)
{
    std::uint64_t s = seed;
    if (allow_degenerate && (s % 17) == 0) {
        std::vector<double> probs(radix, 0.0);
        probs[s % radix] = 1.0;
        return SourceModel(probs);
    }
    std::vector<double> probs(radix);
    double total = 0.0;
    for (int k = 0; k < radix; ++k) {
        s = mix_seed(s, k + 1);
        probs[k] = -std::log(1.0 - unit_double(s)) + 1e-4;
        total += probs[k];
    }
    for (double& p : probs)
        p /= total;
    // renormalize the largest entry so the sum is exactly 1 within 1e-12
    double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    probs[0] += 1.0 - sum;
    return SourceModel(probs);
}

void criterion_roundtrip()
{
    const std::uint64_t trials = 10'000;
    std::vector<std::uint8_t> ok(trials, 0);
    const double t0 = now_seconds();
    parallel_chunks(trials, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            const std::uint64_t s = mix_seed(0xACCE97, t);
            const int radix = std::array<int, 3>{2, 3, 5}[s % 3];
            const bool use_llr = radix == 2 && (s >> 8) % 2 == 0;
            const SourceModel model = random_model(radix, mix_seed(s, 1), !use_llr);
            const int n_exp = 1 + int((s >> 16) % 12);
            const SymbolBlock x = sample_block(model, n_exp, mix_seed(s, 2));
            const EngineKind engine =
                use_llr ? EngineKind::llr_min_sum : EngineKind::probability;
            const SelectionMetric metric =
                use_llr ? SelectionMetric::abs_llr
                        : ((s >> 24) % 4 == 0 ? SelectionMetric::entropy_h
                                              : SelectionMetric::ml_error);
            bool good;
            if ((s >> 32) % 2 == 0) {
                const AdaptiveEncoding enc = encode_adaptive(x, model, engine, metric);
                good = decode_adaptive(enc, n_exp, model, engine, metric).symbols == x.symbols;
            } else {
                // roundtrips are error-free for any threshold; clamp the
                // optimal value into the conversions' domain at tiny N
                const double eps =
                    std::fmin(default_ml_error_threshold(n_exp, radix), 0.4);
                double threshold = eps;
                if (metric == SelectionMetric::abs_llr)
                    threshold = llr_threshold_from_ml_error(eps);
                else if (metric == SelectionMetric::entropy_h)
                    threshold = entropy_threshold_from_ml_error(eps);
                const FixedEncoding enc = encode_fixed(x, model, engine, metric, threshold);
                good = decode_fixed(enc, n_exp, model, engine, metric, threshold).symbols ==
                       x.symbols;
            }
            ok[t] = good ? 1 : 0;
        }
    });
    std::uint64_t mismatches = 0;
    for (std::uint8_t v : ok)
        mismatches += v ? 0 : 1;
    const double dt = now_seconds() - t0;
    report(1, "lossless roundtrip", mismatches == 0 && dt < 120.0,
           fmt("%llu randomized cycles, %llu mismatches, %.1fs",
               (unsigned long long)trials, (unsigned long long)mismatches, dt));
}

// ---------------------------------------------------------------- criterion 2

void criterion_oracle_equivalence()
{
    // exhaustive prefixes at N in {2,4} for r in {2,3}
    const OracleCheckReport exhaustive = oracle_check({1, 2}, {2, 3});
    double max_dev = exhaustive.max_deviation;

    // 256 sampled blocks at N=8, r=2
    const SourceModel model({0.9, 0.1});
    const auto reference = brute_all_conditionals(model, 3);
    for (int rep = 0; rep < 256; ++rep) {
        const SymbolBlock x = sample_block(model, 3, mix_seed(0x0AC1E, rep));
        const SymbolBlock u = polar_forward(x);
        const GuidedStats gs = guided_stats(u, model, EngineKind::probability);
        std::size_t key = 0;
        for (std::size_t i = 0; i < 8; ++i) {
            for (int k = 0; k < 2; ++k)
                max_dev = std::fmax(
                    max_dev, std::fabs(gs.stats[i].cond_dist[k] - reference[i][key][k]));
            key = key * 2 + u.symbols[i];
        }
    }
    report(2, "oracle equivalence", exhaustive.ok && max_dev <= 1e-9,
           fmt("max deviation %.3g over exhaustive N in {2,4} (r=2,3) and 256 blocks at N=8",
               max_dev));
}

// ------------------------------------------------------------- criteria 3 & 4

void criterion_table(int criterion, const char* title,
                     const std::vector<std::tuple<SourceModel, int, double>>& rows,
                     double tolerance)
{
    bool ok = true;
    std::string detail;
    for (const auto& [model, n_exp, expected] : rows) {
        const double threshold = default_ml_error_threshold(n_exp, model.radix());
        const auto trials = run_rate_trials(model, n_exp, 1000, 1, EngineKind::probability,
                                            SelectionMetric::ml_error, threshold);
        const RunSummary s = summarize(trials, model);
        const double diff = s.mean_rate - expected;
        ok = ok && std::fabs(diff) <= tolerance;
        if (!detail.empty())
            detail += "; ";
        detail += fmt("N=2^%d: %.5f vs %.5f (%+.5f)", n_exp, s.mean_rate, expected, diff);
    }
    report(criterion, title, ok, detail + fmt(", tolerance %.3f", tolerance));
}

// ---------------------------------------------------------------- criterion 5

void criterion_rate_gap()
{
    bool ok = true;
    std::string detail;
    const double t0 = now_seconds();
    for (double p : {0.05, 0.11, 0.2, 0.316, 0.5}) {
        const SourceModel model({1.0 - p, p});
        const auto trials =
            run_rate_trials(model, 16, 100, 1, EngineKind::probability,
                            SelectionMetric::ml_error, default_ml_error_threshold(16, 2));
        const RunSummary s = summarize(trials, model);
        const double gap = s.mean_rate - model.entropy_bits();
        ok = ok && gap <= 0.02 && gap >= -0.005;
        if (!detail.empty())
            detail += "; ";
        detail += fmt("p=%.3f: %+.5f", p, gap);
    }
    report(5, "rate within [H-0.005, H+0.02] at N=2^16", ok,
           detail + fmt(" (%.1fs)", now_seconds() - t0));
}

// ---------------------------------------------------------------- criterion 6

void criterion_bler_mechanism()
{
    const SourceModel model = SourceModel::binary_from_entropy(0.5);
    const int n_exp = 10;
    const std::uint64_t trials = 2000;
    const double threshold = default_ml_error_threshold(n_exp, 2);

    std::vector<FixedEncoding> encodings(trials);
    std::vector<double> rates(trials);
    parallel_chunks(trials, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            const SymbolBlock x = sample_block(model, n_exp, mix_seed(0xB1E4, t));
            encodings[t] = encode_fixed(x, model, EngineKind::probability,
                                        SelectionMetric::ml_error, threshold);
            rates[t] = rate_of(encodings[t], n_exp, 2).analytic_rate;
        }
    });

    bool ok = true;
    double previous = 1.0;
    bool first = true;
    for (double budget = 0.50; budget <= 0.701; budget += 0.01) {
        std::uint64_t truncation_failures = 0;
        std::uint64_t tail_count = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            truncation_failures += truncate_to_rate(encodings[t], n_exp, 2, budget).decodable
                                       ? 0
                                       : 1;
            tail_count += rates[t] > budget ? 1 : 0;
        }
        const double bler = double(truncation_failures) / double(trials);
        const double tail = double(tail_count) / double(trials);
        if (bler != tail)
            ok = false; // must match the empirical CDF complement exactly
        if (!first && bler > previous + 0.0)
            ok = false; // monotone non-increasing
        previous = bler;
        first = false;
    }
    report(6, "truncation BLER equals 1 - CDF(R_fix) exactly and is monotone", ok,
           fmt("%llu trials, budgets 0.50..0.70", (unsigned long long)trials));
}

// ---------------------------------------------------------------- criterion 7

void criterion_identities()
{
    bool ok = true;
    std::string first_failure;
    const std::vector<SourceModel> models = {
        SourceModel({0.9, 0.1}),
        SourceModel({0.75, 0.25}),
        SourceModel({0.9214, 0.0393, 0.0393}),
        SourceModel({0.07, 0.09, 0.84}),
        SourceModel({0.4, 0.25, 0.15, 0.12, 0.08}),
    };
    int blocks = 0;
    for (std::size_t m = 0; m < models.size(); ++m) {
        const SourceModel& model = models[m];
        const int radix = model.radix();
        for (int n_exp : {2, 4, 6, 8}) {
            for (std::uint64_t t = 0; t < 10; ++t, ++blocks) {
                const SymbolBlock x = sample_block(model, n_exp, mix_seed(0x5E75 + m, t));
                const SymbolBlock u = polar_forward(x);
                const GuidedStats gs =
                    guided_stats(u, model, EngineKind::probability);

                // adaptive: the error set lies inside the retained set
                const AdaptiveEncoding adaptive = encode_adaptive(
                    x, model, EngineKind::probability, SelectionMetric::ml_error);
                std::set<std::uint32_t> retained_adaptive;
                if (adaptive.threshold)
                    for (std::size_t i = 0; i < u.size(); ++i)
                        if (metric_retains(SelectionMetric::ml_error,
                                           gs.stats[i].metric(SelectionMetric::ml_error),
                                           *adaptive.threshold))
                            retained_adaptive.insert(std::uint32_t(i + 1));
                for (std::uint32_t e : gs.error_set)
                    if (!retained_adaptive.count(e)) {
                        ok = false;
                        if (first_failure.empty())
                            first_failure = "error index outside the adaptive retained set";
                    }

                // fixed: corrections are exactly the errors outside the
                // retained set, equivalently (retained_adaptive \ G_fix) ∩ E
                const double eps = default_ml_error_threshold(std::max(n_exp, 1), radix);
                const FixedEncoding fixed = encode_fixed(
                    x, model, EngineKind::probability, SelectionMetric::ml_error, eps);
                std::set<std::uint32_t> retained_fixed;
                for (std::size_t i = 0; i < u.size(); ++i)
                    if (metric_retains(SelectionMetric::ml_error,
                                       gs.stats[i].metric(SelectionMetric::ml_error), eps))
                        retained_fixed.insert(std::uint32_t(i + 1));
                std::vector<std::uint32_t> expected;
                for (std::uint32_t e : gs.error_set)
                    if (!retained_fixed.count(e))
                        expected.push_back(e);
                std::vector<std::uint32_t> expected_eq13;
                for (std::uint32_t i : retained_adaptive)
                    if (!retained_fixed.count(i) &&
                        std::find(gs.error_set.begin(), gs.error_set.end(), i) !=
                            gs.error_set.end())
                        expected_eq13.push_back(i);
                std::vector<std::uint32_t> got;
                for (const Correction& c : fixed.corrections) {
                    got.push_back(c.index);
                    if (retained_fixed.count(c.index)) {
                        ok = false;
                        if (first_failure.empty())
                            first_failure = "correction index inside the fixed retained set";
                    }
                }
                if (got != expected || got != expected_eq13) {
                    ok = false;
                    if (first_failure.empty())
                        first_failure = "correction set mismatch";
                }
                if (fixed.g_count != retained_fixed.size()) {
                    ok = false;
                    if (first_failure.empty())
                        first_failure = "retained count mismatch";
                }

                // rate formula recomputation, same expression structure
                const RateReport report_ = rate_of(fixed, n_exp, radix);
                const double n = double(std::uint64_t{1} << n_exp);
                const double log_r = std::log(double(radix));
                const double log_r_n = double(n_exp) * (std::log(2.0) / log_r);
                const double log_r_rm1 = std::log(double(radix - 1)) / log_r;
                const double recomputed =
                    (log_r_n + double(report_.g_count) +
                     double(report_.correction_count) * (log_r_n + log_r_rm1)) /
                    n;
                if (recomputed != report_.analytic_rate) {
                    ok = false;
                    if (first_failure.empty())
                        first_failure = "rate formula recomputation differs";
                }
            }
        }
    }

    // chain rule at oracle scale
    for (const SourceModel& model :
         {SourceModel({0.9, 0.1}), SourceModel({0.9214, 0.0393, 0.0393})}) {
        const int n_exp = model.radix() == 2 ? 4 : 3;
        const auto profile = brute_entropy_profile(model, n_exp);
        const double total = std::accumulate(profile.begin(), profile.end(), 0.0);
        const double expected = double(std::uint64_t{1} << n_exp) * model.entropy_bits();
        if (std::fabs(total - expected) > 1e-9) {
            ok = false;
            if (first_failure.empty())
                first_failure = "chain-rule checksum violated";
        }
    }

    report(7, "set and rate identities on every encoded block", ok,
           ok ? fmt("%d blocks across 5 models, plus chain-rule checksums", blocks)
              : first_failure);
}

// ---------------------------------------------------------------- criterion 8

std::vector<std::uint8_t> slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_cli_determinism(const std::string& cli)
{
    const std::string dir = "/tmp/polarzip_accept_" + std::to_string(::getpid());
    if (std::system(("mkdir -p " + dir).c_str()) != 0) {
        report(8, "identical CLI invocations yield byte-identical CSV and containers", false,
               "cannot create scratch directory");
        return;
    }

    // a structured input file
    std::vector<std::uint8_t> raw(5000);
    std::uint64_t s = 42;
    for (auto& b : raw) {
        s = mix_seed(s, 1);
        b = (s % 10 == 0) ? std::uint8_t(s >> 16) : 0x00;
    }
    {
        std::ofstream out(dir + "/input.bin", std::ios::binary);
        out.write(reinterpret_cast<const char*>(raw.data()),
                  std::streamsize(raw.size()));
    }

    bool ok = true;
    std::string detail;
    const std::string csv_cmd = " bench rate --entropy-base2 0.5 --n-exp 8:10 --trials 60"
                                " --seed 9 --csv ";
    const std::string zip_cmd = " compress " + dir + "/input.bin ";
    struct Run {
        const char* threads;
        const char* tag;
    };
    for (const Run run : {Run{"1", "a"}, Run{"8", "b"}}) {
        const std::string env = "POLARZIP_THREADS=" + std::string(run.threads) + " ";
        if (std::system((env + cli + csv_cmd + dir + "/rate_" + run.tag + ".csv" +
                         " 2> /dev/null")
                            .c_str()) != 0)
            ok = false;
        if (std::system((env + cli + zip_cmd + dir + "/out_" + run.tag +
                         ".pzc --probs 0.97,0.03 --block-exp 10 > /dev/null 2> /dev/null")
                            .c_str()) != 0)
            ok = false;
    }
    const auto csv_a = slurp(dir + "/rate_a.csv");
    const auto csv_b = slurp(dir + "/rate_b.csv");
    const auto zip_a = slurp(dir + "/out_a.pzc");
    const auto zip_b = slurp(dir + "/out_b.pzc");
    if (csv_a.empty() || csv_a != csv_b) {
        ok = false;
        detail += "CSV outputs differ across thread budgets; ";
    }
    if (zip_a.empty() || zip_a != zip_b) {
        ok = false;
        detail += "container files differ across thread budgets; ";
    }

    // and the container actually decodes back to the input through the CLI
    if (std::system((cli + " decompress " + dir + "/out_a.pzc " + dir +
                     "/back.bin > /dev/null 2> /dev/null")
                        .c_str()) != 0)
        ok = false;
    if (slurp(dir + "/back.bin") != raw) {
        ok = false;
        detail += "CLI decompress does not restore the input; ";
    }

    if (std::system(("rm -rf " + dir).c_str()) != 0)
        detail += "scratch cleanup failed; ";
    report(8, "identical CLI invocations yield byte-identical CSV and containers", ok,
           ok ? "thread budgets 1 and 8, bench CSV + container + roundtrip" : detail);
}

// ---------------------------------------------------------------- criterion 9

void criterion_scaling()
{
    const SourceModel model = SourceModel::binary_from_entropy(0.5);
    // medians of per-block encode and encode+decode seconds
    auto medians = [&](int n_exp, int reps) {
        const SymbolBlock x = sample_block(model, n_exp, 7);
        const double threshold = default_ml_error_threshold(n_exp, 2);
        // warm-up
        encode_fixed(x, model, EngineKind::probability, SelectionMetric::ml_error, threshold);
        std::vector<double> enc_times, both_times;
        for (int rep = 0; rep < reps; ++rep) {
            const double t0 = now_seconds();
            const FixedEncoding enc = encode_fixed(x, model, EngineKind::probability,
                                                   SelectionMetric::ml_error, threshold);
            const double t1 = now_seconds();
            const SymbolBlock back = decode_fixed(enc, n_exp, model, EngineKind::probability,
                                                  SelectionMetric::ml_error, threshold);
            const double t2 = now_seconds();
            if (back.symbols != x.symbols)
                std::abort();
            enc_times.push_back(t1 - t0);
            both_times.push_back(t2 - t0);
        }
        std::sort(enc_times.begin(), enc_times.end());
        std::sort(both_times.begin(), both_times.end());
        return std::pair<double, double>(enc_times[enc_times.size() / 2],
                                         both_times[both_times.size() / 2]);
    };
    const auto [enc14, both14] = medians(14, 9);
    const auto [enc15, both15] = medians(15, 9);
    const double enc_ratio = enc15 / enc14;
    const double both_ratio = both15 / both14;
    report(9, "encode time grows by at most 3x from N=2^14 to N=2^15",
           enc_ratio <= 3.0 && both_ratio <= 3.0,
           fmt("encode median %.2fms -> %.2fms (ratio %.2f); with decode %.2fms -> %.2fms "
               "(ratio %.2f)",
               enc14 * 1e3, enc15 * 1e3, enc_ratio, both14 * 1e3, both15 * 1e3, both_ratio));
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-polarzip-cli>\n");
        return 2;
    }
    const std::string cli = argv[1];

    criterion_roundtrip();
    criterion_oracle_equivalence();
    criterion_table(3, "binary average rates",
                    {{SourceModel::binary_from_entropy(0.5), 10, 0.53636},
                     {SourceModel::binary_from_entropy(0.1), 10, 0.11937},
                     {SourceModel::binary_from_entropy(0.9), 12, 0.91437}},
                    0.01);
    criterion_table(4, "ternary average rates",
                    {{SourceModel({0.9214, 0.0393, 0.0393}), 10, 0.33684},
                     {SourceModel({0.07, 0.09, 0.84}), 10, 0.54055}},
                    0.012);
    criterion_rate_gap();
    criterion_bler_mechanism();
    criterion_identities();
    criterion_cli_determinism(cli);
    criterion_scaling();

    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", failures);
    return 1;
}
