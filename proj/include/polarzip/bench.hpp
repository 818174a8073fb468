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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarzip/codec.hpp"
#include "polarzip/container.hpp"
#include "polarzip/source_model.hpp"

namespace polarzip {

const char* scheme_name(SchemeKind s);
const char* engine_name(EngineKind k);
const char* metric_name(SelectionMetric m);

// Fixed-scheme threshold on the requested metric scale. Without an explicit
// value, the optimal ML-error threshold for (n_exp, radix) is used, converted
// for the |LLR| metric; the entropy metric has a principled conversion only
// for binary alphabets and otherwise requires an explicit threshold.
double resolve_threshold(SelectionMetric metric, int n_exp, int radix,
                         std::optional<double> explicit_threshold,
                         LlrThresholdMap llr_map = LlrThresholdMap::exact);

// One encoded block of a Monte Carlo run. Trial t samples its block with
// mix_seed(seed, t), so results are independent of scheduling.
struct TrialResult {
    SchemeKind scheme = SchemeKind::fixed;
    EngineKind engine = EngineKind::probability;
    SelectionMetric metric = SelectionMetric::ml_error;
    int radix = 2;
    int n_exp = 0;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    double analytic_rate = 0.0;
    std::uint64_t container_bits = 0;
    std::uint32_t g_count = 0;
    std::uint32_t correction_count = 0;
};

struct RunSummary {
    double mean_rate = 0.0;
    double std_rate = 0.0; // sample standard deviation (n-1)
    std::uint64_t trials = 0;
    double source_entropy = 0.0; // base r
    double mean_gcount = 0.0;
    double mean_corrections = 0.0;
    double wall_seconds = 0.0;
};

// Fixed-scheme Monte Carlo trials at one block size, parallel across trials.
std::vector<TrialResult> run_rate_trials(const SourceModel& model, int n_exp,
                                         std::uint64_t trials, std::uint64_t seed,
                                         EngineKind engine, SelectionMetric metric,
                                         double threshold);

// Index-ordered recomputation of the summary statistics.
RunSummary summarize(std::span<const TrialResult> trials, const SourceModel& model);

// ---- CSV producers -----------------------------------------------------------
//
// All functions return the complete CSV text (header line included) and are
// byte-deterministic for fixed arguments, independent of the thread budget.

// columns: scheme,engine,metric,radix,n,N,trials,seed,entropy,mean_rate,
//          std_rate,mean_gcount,mean_corrections
std::string rate_bench_csv(const SourceModel& model, const std::vector<int>& n_exps,
                           std::uint64_t trials, std::uint64_t seed, EngineKind engine,
                           SelectionMetric metric, std::optional<double> threshold,
                           LlrThresholdMap llr_map = LlrThresholdMap::exact);

// columns: p,entropy,N,mean_rate (binary sources, fixed scheme, default threshold)
std::string sweep_csv(const std::vector<double>& p_grid, const std::vector<int>& n_exps,
                      std::uint64_t trials, std::uint64_t seed);

// columns: N,R,BLER — fraction of trials whose truncation to floor(N*R)
// symbols is undecodable.
std::string bler_csv(double entropy_bits, const std::vector<int>& n_exps,
                     std::uint64_t trials, std::uint64_t seed,
                     const std::vector<double>& rates);

// columns: i,mean_h,std_h,oracle_H (oracle column empty beyond the
// enumeration bound)
std::string profile_csv(const SourceModel& model, int n_exp, std::uint64_t trials,
                        std::uint64_t seed);

// ---- engine-vs-oracle gate -----------------------------------------------------

struct OracleCheckReport {
    bool ok = true;
    double max_deviation = 0.0;
    std::string detail; // first offending (model, index, prefix) when not ok
};

// Exhaustively compares engine conditionals against brute-force enumeration
// for built-in models at the given sizes. `perturbation` shifts the engine's
// distributions before comparison; tests use it as a negative control.
OracleCheckReport oracle_check(const std::vector<int>& n_exps, const std::vector<int>& radixes,
                               double perturbation = 0.0);

} // namespace polarzip
