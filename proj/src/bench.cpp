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

#include "polarzip/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "polarzip/errors.hpp"
#include "polarzip/oracle.hpp"
#include "polarzip/polar_transform.hpp"
#include "polarzip/rng.hpp"
#include "polarzip/threading.hpp"

namespace polarzip {

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

double resolve_threshold(SelectionMetric metric, int n_exp, int radix,
                         std::optional<double> explicit_threshold, LlrThresholdMap llr_map)
{
    if (explicit_threshold)
        return *explicit_threshold;
    const double eps = default_ml_error_threshold(n_exp, radix);
    switch (metric) {
    case SelectionMetric::ml_error: return eps;
    case SelectionMetric::abs_llr: return llr_threshold_from_ml_error(eps, llr_map);
    case SelectionMetric::entropy_h:
        if (radix != 2)
            throw parameter_error(
                "the entropy metric needs an explicit threshold for non-binary alphabets");
        return entropy_threshold_from_ml_error(eps);
    }
    throw parameter_error("unknown selection metric");
}

const char* scheme_name(SchemeKind s)
{
    return s == SchemeKind::fixed ? "fixed" : "adaptive";
}

const char* engine_name(EngineKind k)
{
    return k == EngineKind::probability ? "probability" : "llr_minsum";
}

const char* metric_name(SelectionMetric m)
{
    switch (m) {
    case SelectionMetric::entropy_h: return "entropy_h";
    case SelectionMetric::ml_error: return "ml_error";
    case SelectionMetric::abs_llr: return "abs_llr";
    }
    return "?";
}

std::vector<TrialResult> run_rate_trials(const SourceModel& model, int n_exp,
                                         std::uint64_t trials, std::uint64_t seed,
                                         EngineKind engine, SelectionMetric metric,
                                         double threshold)
{
    std::vector<TrialResult> results(trials);
    parallel_chunks(trials, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            const SymbolBlock x = sample_block(model, n_exp, mix_seed(seed, t));
            const FixedEncoding enc = encode_fixed(x, model, engine, metric, threshold);
            const RateReport report = rate_of(enc, n_exp, model.radix());
            TrialResult& r = results[t];
            r.scheme = SchemeKind::fixed;
            r.engine = engine;
            r.metric = metric;
            r.radix = model.radix();
            r.n_exp = n_exp;
            r.seed = seed;
            r.trial = t;
            r.analytic_rate = report.analytic_rate;
            r.container_bits = report.container_bits;
            r.g_count = report.g_count;
            r.correction_count = report.correction_count;
        }
    });
    return results;
}

RunSummary summarize(std::span<const TrialResult> trials, const SourceModel& model)
{
    RunSummary s;
    s.trials = trials.size();
    s.source_entropy = model.entropy(model.radix());
    if (trials.empty())
        return s;
    double sum = 0.0, gsum = 0.0, csum = 0.0;
    for (const TrialResult& t : trials) {
        sum += t.analytic_rate;
        gsum += static_cast<double>(t.g_count);
        csum += static_cast<double>(t.correction_count);
    }
    const double m = static_cast<double>(trials.size());
    s.mean_rate = sum / m;
    s.mean_gcount = gsum / m;
    s.mean_corrections = csum / m;
    if (trials.size() > 1) {
        double acc = 0.0;
        for (const TrialResult& t : trials) {
            const double d = t.analytic_rate - s.mean_rate;
            acc += d * d;
        }
        s.std_rate = std::sqrt(acc / (m - 1.0));
    }
    return s;
}

std::string rate_bench_csv(const SourceModel& model, const std::vector<int>& n_exps,
                           std::uint64_t trials, std::uint64_t seed, EngineKind engine,
                           SelectionMetric metric, std::optional<double> threshold,
                           LlrThresholdMap llr_map)
{
    if (trials == 0)
        throw parameter_error("trial count must be positive");
    std::string csv = "scheme,engine,metric,radix,n,N,trials,seed,entropy,mean_rate,"
                      "std_rate,mean_gcount,mean_corrections\n";
    for (int n_exp : n_exps) {
        const double th = resolve_threshold(metric, n_exp, model.radix(), threshold, llr_map);
        const auto results = run_rate_trials(model, n_exp, trials, seed, engine, metric, th);
        const RunSummary s = summarize(results, model);
        csv += std::string(scheme_name(SchemeKind::fixed)) + ',' + engine_name(engine) + ',' +
               metric_name(metric) + ',' + std::to_string(model.radix()) + ',' +
               std::to_string(n_exp) + ',' + std::to_string(std::uint64_t{1} << n_exp) + ',' +
               std::to_string(trials) + ',' + std::to_string(seed) + ',' +
               fmt(s.source_entropy) + ',' + fmt(s.mean_rate) + ',' + fmt(s.std_rate) + ',' +
               fmt(s.mean_gcount) + ',' + fmt(s.mean_corrections) + '\n';
    }
    return csv;
}

std::string sweep_csv(const std::vector<double>& p_grid, const std::vector<int>& n_exps,
                      std::uint64_t trials, std::uint64_t seed)
{
    if (trials == 0)
        throw parameter_error("trial count must be positive");
    std::string csv = "p,entropy,N,mean_rate\n";
    for (double p : p_grid) {
        if (!(p > 0.0) || p > 0.5)
            throw parameter_error("sweep probabilities must lie in (0, 0.5]");
        const SourceModel model({1.0 - p, p});
        for (int n_exp : n_exps) {
            const double th = default_ml_error_threshold(n_exp, 2);
            const auto results =
                run_rate_trials(model, n_exp, trials, seed, EngineKind::probability,
                                SelectionMetric::ml_error, th);
            const RunSummary s = summarize(results, model);
            csv += fmt(p) + ',' + fmt(model.entropy_bits()) + ',' +
                   std::to_string(std::uint64_t{1} << n_exp) + ',' + fmt(s.mean_rate) + '\n';
        }
    }
    return csv;
}

std::string bler_csv(double entropy_bits, const std::vector<int>& n_exps,
                     std::uint64_t trials, std::uint64_t seed,
                     const std::vector<double>& rates)
{
    if (trials == 0)
        throw parameter_error("trial count must be positive");
    for (std::size_t i = 1; i < rates.size(); ++i)
        if (!(rates[i] > rates[i - 1]))
            throw parameter_error("rate grid must be strictly increasing");

    const SourceModel model = SourceModel::binary_from_entropy(entropy_bits);
    std::string csv = "N,R,BLER\n";
    for (int n_exp : n_exps) {
        const double th = default_ml_error_threshold(n_exp, 2);
        // fails[t * rates.size() + j] = 1 when trial t does not fit within
        // a budget of floor(N * rates[j]) symbols
        std::vector<std::uint8_t> fails(trials * rates.size(), 0);
        parallel_chunks(trials, [&](std::uint64_t begin, std::uint64_t end) {
            for (std::uint64_t t = begin; t < end; ++t) {
                const SymbolBlock x = sample_block(model, n_exp, mix_seed(seed, t));
                const FixedEncoding enc = encode_fixed(x, model, EngineKind::probability,
                                                       SelectionMetric::ml_error, th);
                for (std::size_t j = 0; j < rates.size(); ++j) {
                    const TruncationResult res = truncate_to_rate(enc, n_exp, 2, rates[j]);
                    fails[t * rates.size() + j] = res.decodable ? 0 : 1;
                }
            }
        });
        for (std::size_t j = 0; j < rates.size(); ++j) {
            std::uint64_t failed = 0;
            for (std::uint64_t t = 0; t < trials; ++t)
                failed += fails[t * rates.size() + j];
            const double bler = static_cast<double>(failed) / static_cast<double>(trials);
            csv += std::to_string(std::uint64_t{1} << n_exp) + ',' + fmt(rates[j]) + ',' +
                   fmt(bler) + '\n';
        }
    }
    return csv;
}

std::string profile_csv(const SourceModel& model, int n_exp, std::uint64_t trials,
                        std::uint64_t seed)
{
    if (trials == 0)
        throw parameter_error("trial count must be positive");
    const std::size_t n = std::size_t{1} << n_exp;

    // Accumulate in fixed 64-trial chunks merged in chunk order, so the
    // output does not depend on the thread budget.
    constexpr std::uint64_t kChunk = 64;
    const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
    std::vector<double> sums(chunks * n, 0.0);
    std::vector<double> sumsq(chunks * n, 0.0);
    parallel_chunks(chunks, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t c = begin; c < end; ++c) {
            ScEngine engine(model, n_exp, EngineKind::probability);
            const std::uint64_t t_end = std::min(trials, (c + 1) * kChunk);
            for (std::uint64_t t = c * kChunk; t < t_end; ++t) {
                const SymbolBlock x = sample_block(model, n_exp, mix_seed(seed, t));
                SymbolBlock u = polar_forward(x);
                engine.run_pass([&](const IndexStats& st) {
                    const double h = st.entropy_h;
                    sums[c * n + st.index - 1] += h;
                    sumsq[c * n + st.index - 1] += h * h;
                    return u.symbols[st.index - 1];
                });
            }
        }
    });

    const bool feasible = oracle_feasible(model.radix(), n_exp);
    std::vector<double> oracle;
    if (feasible)
        oracle = brute_entropy_profile(model, n_exp);

    const double m = static_cast<double>(trials);
    std::string csv = "i,mean_h,std_h,oracle_H\n";
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0, sq = 0.0;
        for (std::uint64_t c = 0; c < chunks; ++c) {
            sum += sums[c * n + i];
            sq += sumsq[c * n + i];
        }
        const double mean = sum / m;
        double var = 0.0;
        if (trials > 1)
            var = std::fmax(0.0, (sq - sum * sum / m) / (m - 1.0));
        csv += std::to_string(i + 1) + ',' + fmt(mean) + ',' + fmt(std::sqrt(var)) + ',';
        if (feasible)
            csv += fmt(oracle[i]);
        csv += '\n';
    }
    return csv;
}

OracleCheckReport oracle_check(const std::vector<int>& n_exps, const std::vector<int>& radixes,
                               double perturbation)
{
    OracleCheckReport report;
    for (int radix : radixes) {
        std::vector<std::vector<double>> models;
        switch (radix) {
        case 2:
            models = {{0.9, 0.1}, {0.5, 0.5}, {0.75, 0.25}};
            break;
        case 3:
            models = {{0.9214, 0.0393, 0.0393}, {0.07, 0.09, 0.84},
                      {1.0 / 3, 1.0 / 3, 1.0 / 3}};
            break;
        case 5:
            models = {{0.4, 0.25, 0.15, 0.12, 0.08}, {0.2, 0.2, 0.2, 0.2, 0.2}};
            break;
        default: {
            if (!is_prime(radix))
                throw parameter_error("oracle-check radix must be prime");
            std::vector<double> uniform(radix, 1.0 / radix);
            models = {uniform};
            break;
        }
        }

        for (const auto& probs : models) {
            const SourceModel model(probs);
            for (int n_exp : n_exps) {
                if (!oracle_feasible(radix, n_exp))
                    throw parameter_error("oracle-check size exceeds the enumeration bound");
                const auto reference = brute_all_conditionals(model, n_exp);
                const std::size_t n = std::size_t{1} << n_exp;
                ScEngine engine(model, n_exp, EngineKind::probability);

                // walk every u sequence; full-support models make every
                // prefix reachable
                std::vector<Symbol> u(n, 0);
                for (;;) {
                    std::size_t key = 0;
                    engine.run_pass([&](const IndexStats& st) {
                        const std::size_t i = st.index - 1;
                        for (int k = 0; k < radix; ++k) {
                            const double got = st.cond_dist[k] + perturbation;
                            const double dev = std::fabs(got - reference[i][key][k]);
                            if (dev > report.max_deviation)
                                report.max_deviation = dev;
                            if (dev > 1e-9 && report.ok) {
                                report.ok = false;
                                std::string prefix;
                                for (std::size_t q = 0; q < i; ++q)
                                    prefix += std::to_string(int(u[q]));
                                report.detail = "radix " + std::to_string(radix) + ", N " +
                                                std::to_string(n) + ", model p0 " +
                                                fmt(probs[0]) + ", index " +
                                                std::to_string(st.index) + ", prefix \"" +
                                                prefix + "\", symbol " + std::to_string(k) +
                                                ": engine " + fmt(got) + " vs oracle " +
                                                fmt(reference[i][key][k]);
                            }
                        }
                        const Symbol truth = u[i];
                        key = key * radix + truth;
                        return truth;
                    });

                    std::size_t pos = n;
                    while (pos > 0) {
                        if (++u[pos - 1] < radix)
                            break;
                        u[pos - 1] = 0;
                        --pos;
                    }
                    if (pos == 0)
                        break;
                }
            }
        }
    }
    return report;
}

} // namespace polarzip
