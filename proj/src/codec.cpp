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

#include "polarzip/codec.hpp"

#include <cmath>

#include "polarzip/container.hpp"
#include "polarzip/errors.hpp"
#include "polarzip/polar_transform.hpp"

namespace polarzip {

namespace {

void check_codec_args(const SymbolBlock& x, const SourceModel& model, EngineKind kind,
                      SelectionMetric metric)
{
    x.validate();
    if (x.radix != model.radix())
        throw parameter_error("block and model radix disagree");
    if (!metric_compatible(metric, kind))
        throw parameter_error("selection metric is incompatible with the engine kind");
}

} // namespace

AdaptiveEncoding encode_adaptive(const SymbolBlock& x, const SourceModel& model,
                                 EngineKind kind, SelectionMetric metric)
{
    check_codec_args(x, model, kind, metric);
    const SymbolBlock u = polar_forward(x);
    const std::size_t n = u.size();

    std::vector<double> metrics(n);
    std::vector<bool> in_error(n);
    ScEngine engine(model, x.n_exp, kind);
    engine.run_pass([&](const IndexStats& st) {
        const Symbol truth = u.symbols[st.index - 1];
        metrics[st.index - 1] = st.metric(metric);
        in_error[st.index - 1] = truth != st.ml_decision;
        return truth;
    });

    // Boundary metric over the error set: the loosest threshold that still
    // covers every erroneous index.
    bool any_error = false;
    double threshold = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_error[i])
            continue;
        if (!any_error) {
            threshold = metrics[i];
            any_error = true;
        } else if (metric == SelectionMetric::abs_llr) {
            threshold = std::fmax(threshold, metrics[i]);
        } else {
            threshold = std::fmin(threshold, metrics[i]);
        }
    }

    AdaptiveEncoding enc;
    if (!any_error)
        return enc;
    enc.threshold = threshold;
    for (std::size_t i = 0; i < n; ++i)
        if (metric_retains(metric, metrics[i], threshold))
            enc.payload.push_back(u.symbols[i]);
    return enc;
}

SymbolBlock decode_adaptive(const AdaptiveEncoding& enc, int n_exp, const SourceModel& model,
                            EngineKind kind, SelectionMetric metric)
{
    if (!metric_compatible(metric, kind))
        throw parameter_error("selection metric is incompatible with the engine kind");
    if (!enc.threshold && !enc.payload.empty())
        throw malformed_stream("sentinel threshold with a nonempty payload");

    ScEngine engine(model, n_exp, kind);
    const int r = model.radix();
    std::size_t cursor = 0;
    auto committed = engine.run_pass([&](const IndexStats& st) -> Symbol {
        if (enc.threshold && metric_retains(metric, st.metric(metric), *enc.threshold)) {
            if (cursor >= enc.payload.size())
                throw malformed_stream("adaptive payload exhausted before the retained set");
            const Symbol s = enc.payload[cursor++];
            if (s >= r)
                throw malformed_stream("adaptive payload symbol out of range");
            return s;
        }
        return st.ml_decision;
    });
    if (cursor != enc.payload.size())
        throw malformed_stream("adaptive payload not fully consumed");

    SymbolBlock u;
    u.radix = r;
    u.n_exp = n_exp;
    u.symbols = std::move(committed);
    return polar_inverse(u);
}

double default_ml_error_threshold(int n_exp, int radix)
{
    if (n_exp < 1 || radix < 2)
        throw parameter_error("threshold formula requires n_exp >= 1 and radix >= 2");
    const double log_r = std::log(static_cast<double>(radix));
    const double log_r_n = static_cast<double>(n_exp) * (std::log(2.0) / log_r);
    const double log_r_rm1 = std::log(static_cast<double>(radix - 1)) / log_r;
    return 1.0 / (log_r_n + log_r_rm1);
}

double llr_threshold_from_ml_error(double eps, LlrThresholdMap map)
{
    if (!(eps > 0.0) || !(eps < 0.5))
        throw parameter_error("ML-error threshold must lie in (0, 0.5)");
    if (map == LlrThresholdMap::exact)
        return std::log((1.0 - eps) / eps);
    return std::fabs(std::log(1.0 - eps) / std::log(eps));
}

double entropy_threshold_from_ml_error(double eps)
{
    if (!(eps > 0.0) || !(eps < 0.5))
        throw parameter_error("ML-error threshold must lie in (0, 0.5)");
    return -(eps * std::log2(eps) + (1.0 - eps) * std::log2(1.0 - eps));
}

FixedEncoding encode_fixed(const SymbolBlock& x, const SourceModel& model, EngineKind kind,
                           SelectionMetric metric, double threshold)
{
    check_codec_args(x, model, kind, metric);
    const SymbolBlock u = polar_forward(x);
    const int r = model.radix();

    FixedEncoding enc;
    ScEngine engine(model, x.n_exp, kind);
    engine.run_pass([&](const IndexStats& st) {
        const Symbol truth = u.symbols[st.index - 1];
        if (metric_retains(metric, st.metric(metric), threshold)) {
            enc.payload.push_back(truth);
        } else if (truth != st.ml_decision) {
            // erroneous index left out of the retained set: store how far the
            // ML decision is from the truth
            const Symbol delta = static_cast<Symbol>((truth + r - st.ml_decision) % r);
            enc.corrections.push_back({st.index, delta});
        }
        return truth;
    });
    enc.g_count = static_cast<std::uint32_t>(enc.payload.size());
    return enc;
}

SymbolBlock decode_fixed(const FixedEncoding& enc, int n_exp, const SourceModel& model,
                         EngineKind kind, SelectionMetric metric, double threshold)
{
    if (!metric_compatible(metric, kind))
        throw parameter_error("selection metric is incompatible with the engine kind");
    if (enc.g_count != enc.payload.size())
        throw malformed_stream("payload length disagrees with the retained count");

    ScEngine engine(model, n_exp, kind);
    const int r = model.radix();
    std::size_t pay = 0;
    std::size_t cor = 0;
    auto committed = engine.run_pass([&](const IndexStats& st) -> Symbol {
        const bool retained = metric_retains(metric, st.metric(metric), threshold);
        if (cor < enc.corrections.size()) {
            const std::uint32_t ci = enc.corrections[cor].index;
            if (ci < st.index)
                throw malformed_stream("correction indices out of order");
            if (ci == st.index && retained)
                throw malformed_stream("correction index falls inside the retained set");
        }
        if (retained) {
            if (pay >= enc.payload.size())
                throw malformed_stream("fixed payload exhausted before the retained set");
            const Symbol s = enc.payload[pay++];
            if (s >= r)
                throw malformed_stream("fixed payload symbol out of range");
            return s;
        }
        Symbol decision = st.ml_decision;
        if (cor < enc.corrections.size() && enc.corrections[cor].index == st.index) {
            const Symbol delta = enc.corrections[cor].delta;
            if (delta < 1 || delta >= r)
                throw malformed_stream("correction delta out of range");
            decision = static_cast<Symbol>((decision + delta) % r);
            ++cor;
        }
        return decision;
    });
    if (pay != enc.payload.size())
        throw malformed_stream("fixed payload not fully consumed");
    if (cor != enc.corrections.size())
        throw malformed_stream("corrections not fully consumed");

    SymbolBlock u;
    u.radix = r;
    u.n_exp = n_exp;
    u.symbols = std::move(committed);
    return polar_inverse(u);
}

RateReport rate_of(const FixedEncoding& enc, int n_exp, int radix)
{
    RateReport report;
    report.g_count = enc.g_count;
    report.correction_count = static_cast<std::uint32_t>(enc.corrections.size());
    const double n = static_cast<double>(std::uint64_t{1} << n_exp);
    const double log_r = std::log(static_cast<double>(radix));
    const double log_r_n = static_cast<double>(n_exp) * (std::log(2.0) / log_r);
    const double log_r_rm1 = std::log(static_cast<double>(radix - 1)) / log_r;
    report.analytic_rate = (log_r_n + static_cast<double>(report.g_count) +
                            static_cast<double>(report.correction_count) * (log_r_n + log_r_rm1)) /
                           n;
    report.container_bits = 8 * static_cast<std::uint64_t>(fixed_body_bytes(enc, n_exp, radix));
    return report;
}

RateReport rate_of(const FixedEncoding& enc, int n_exp, const SourceModel& model)
{
    RateReport report = rate_of(enc, n_exp, model.radix());
    report.source_entropy = model.entropy(model.radix());
    return report;
}

TruncationResult truncate_to_rate(const FixedEncoding& enc, int n_exp, int radix,
                                  double rate_budget)
{
    if (!(rate_budget >= 0.0))
        throw parameter_error("rate budget must be nonnegative");
    TruncationResult result;
    const double n = static_cast<double>(std::uint64_t{1} << n_exp);
    result.word_symbols = static_cast<std::uint64_t>(n * rate_budget);
    const RateReport report = rate_of(enc, n_exp, radix);
    if (report.analytic_rate <= rate_budget) {
        result.decodable = true;
        result.content = enc;
    }
    return result;
}

} // namespace polarzip
