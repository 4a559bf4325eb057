// Experiment orchestration: canned configurations, Monte-Carlo replication,
// deterministic CSV output, and the reproduce targets that compare results
// against the bundled reference values.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ssdlab/analytics.h"
#include "ssdlab/ftl.h"
#include "ssdlab/oracle.h"
#include "ssdlab/workload.h"

namespace ssdlab {

inline constexpr const char* kToolVersion = "ssdlab 0.1.0";

// Effective experiment configuration: defaults, then config file, then CLI
// flag overrides, in that order.
struct HarnessConfig {
    // utilization experiments
    uint32_t u = 1000;
    std::vector<double> q_sweep = {0.05, 0.1, 0.2, 0.3, 0.4, 0.45};
    // write-amplification experiments (ladder of pages-per-block)
    uint32_t wa_blocks = 1280;
    double wa_spare_factor = 0.2;
    double wa_q = 0.1;
    std::vector<uint32_t> np_ladder = {1, 2, 4, 8, 16, 32, 64, 128, 256};
    uint32_t wa_seeds = 8;
    // replication protocol; 0 means "mode default" (quick: 8 x 1e5+1e6,
    // full: 64 x 1e6+9e6)
    uint32_t replicas = 0;
    uint64_t warmup_requests = 0;
    uint64_t measure_requests = 0;
    // plumbing
    uint64_t master_seed = 1317;
    bool full = false;
    uint32_t workers = 0;  // 0 -> hardware concurrency
    std::string out_dir = "out";

    uint32_t effective_replicas() const;
    uint64_t effective_warmup() const;
    uint64_t effective_measure() const;
};

// Loads a JSON config file (missing keys keep defaults). Throws UsageError
// on parse errors or invalid values.
HarnessConfig load_config_file(const std::string& path, const HarnessConfig& base);

// Canonical single-line JSON echo of the effective config (sorted keys), and
// its FNV-1a hash; both go into every output file's metadata block.
std::string canonical_config_json(const HarnessConfig& cfg);
uint64_t config_hash(const HarnessConfig& cfg);

// Stable per-experiment seed: mixes a label ("util/fixed32/q=0.20") into the
// master seed so distinct experiments get unrelated replica streams.
uint64_t derive_seed(uint64_t master_seed, const std::string& label);

// Runs fn(0..count-1) on `workers` threads; results must be written into
// pre-sized slots so reduction order stays fixed.
void parallel_for(uint32_t count, uint32_t workers, const std::function<void(uint32_t)>& fn);

// ---- analyze ----
struct AnalyticRow {
    double q;
    AnalyticMoments m;
};
std::vector<AnalyticRow> analyze_distribution(uint32_t u, const std::vector<double>& q_sweep,
                                              const SizeDistribution& dist);

// ---- sim-util ----
struct SimUtilRow {
    double q;
    AnalyticMoments analytic;
    // replica-averaged simulation values (means and per-replica sd averages)
    double mean_objects, sd_objects, mean_pages, sd_pages;
    // standard error of the replica means
    double se_objects, se_pages;
};
struct HistogramPoint {
    uint32_t pages;
    double density;  // simulated, normalized by bin width
    double overlay;  // analytic Gaussian density at the same abscissa
};
struct SimUtilResult {
    std::vector<SimUtilRow> rows;
    // q -> histogram of the valid-page count (replica-averaged densities)
    std::map<double, std::vector<HistogramPoint>> histograms;
};
SimUtilResult simulate_utilization(uint32_t u, const std::vector<double>& q_sweep,
                                   const SizeDistribution& dist, uint32_t replicas,
                                   uint64_t warmup, uint64_t measure, uint64_t master_seed,
                                   uint32_t workers);

// ---- sim-wa / predict-wa ----
struct WaRow {
    uint32_t n_p = 0;
    uint32_t blocks = 0;
    uint64_t total_pages = 0;
    uint32_t u = 0;           // one-page user objects
    double sim_mean = -1.0;   // < 0 when not simulated
    double sim_se = -1.0;
    double xiang = -1.0;      // < 0 when not predicted
    double hu = -1.0;         // < 0 for n_p = 1 (model undefined)
};
std::vector<WaRow> simulate_wa_ladder(const HarnessConfig& cfg);
std::vector<WaRow> predict_wa_ladder(const HarnessConfig& cfg);

// ---- deterministic output ----
std::string fmt_fixed(double v, int precision);
void write_csv(const std::string& path, const std::vector<std::string>& metadata,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);
std::vector<std::string> standard_metadata(const HarnessConfig& cfg, const std::string& mode,
                                           const std::vector<std::pair<std::string, std::string>>&
                                               column_provenance);

// ---- CLI command entry points (return process exit codes) ----
int cmd_analyze(const HarnessConfig& cfg);
int cmd_sim_util(const HarnessConfig& cfg);
int cmd_sim_wa(const HarnessConfig& cfg);
int cmd_predict_wa(const HarnessConfig& cfg);
int cmd_reproduce(const std::string& target, const HarnessConfig& cfg);

// ---- bundled reference values (reproduce targets compare against these) ----
struct UtilReferenceRow {
    double q;
    double mean_obj_analytic, mean_obj_sim;
    double sd_obj_analytic, sd_obj_sim;
    double mean_pages_analytic, mean_pages_sim;
    double sd_pages_analytic, sd_pages_sim;
};
// which: 1 = fixed 32, 2 = discrete uniform [1,32], 3 = binomial(32, 0.4)
const std::vector<UtilReferenceRow>& reference_util_table(int which);
SizeDistribution reference_table_distribution(int which);

struct WaReferenceRow {
    uint32_t n_p;
    double sim;
    double xiang;
    double hu;  // < 0 marks the blank n_p = 1 entry
};
const std::vector<WaReferenceRow>& reference_wa_table();

}  // namespace ssdlab
