#pragma once

#include <optional>
#include <vector>

#include "asymde/channels.hpp"
#include "asymde/density.hpp"
#include "asymde/ensemble.hpp"

namespace asymde::de {

struct NoBracket : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Verdict { ConvergedToStability, MaxIterations };

struct IterationRecord {
    int l;
    double p_e;
    double cbp;
};

struct DETrace {
    std::vector<IterationRecord> records;  // records[0] is iteration 0 (initial)
    Verdict verdict = Verdict::MaxIterations;
    int iterations_used = 0;
};

struct StabilityReport {
    double r = 0.0;
    double lambda2_rho1_r = 0.0;
    std::optional<double> epsilon_star;
    double epsilon_star_lower_bound = 0.0;
    bool sufficient_ok = false;     // lambda2 rho'(1) r < 1
    bool necessary_violated = false;  // lambda2 rho'(1) r > 1
};

// Codeword-averaged iteration: Q pair through the check side, then
// per-bit convolution with the initial pair.
density::DensityPair cw_avg_de_step(const density::DensityPair& pair,
                                    const density::DensityPair& init,
                                    const ensemble::DegreeDistribution& d);

// Same step, also exposing the intermediate Q pair.
density::DensityPair cw_avg_de_step(const density::DensityPair& pair,
                                    const density::DensityPair& init,
                                    const ensemble::DegreeDistribution& d,
                                    density::DensityPair* q_out);

// Classical single-density iteration for the symmetrized channel.
density::QuantizedDensity coset_de_step(const density::QuantizedDensity& p,
                                        const density::QuantizedDensity& init_avg,
                                        const ensemble::DegreeDistribution& d);

// Root scan of lambda(rho'(1) eps) r = eps plus the two stability flags.
StabilityReport stability(const ensemble::DegreeDistribution& d, double r);

enum class Variant { CodewordAveraged, Coset };

struct RunOptions {
    int max_iter = 100;
    Variant variant = Variant::CodewordAveraged;
    // Bail out early when the Chernoff bound has stalled far above the
    // stability target (used by the coarse optimizer scoring).
    bool stall_detect = false;
    // Optional per-iteration probe: TV distance between Q(0) and Q(1).
    std::vector<double>* q_distance = nullptr;
};

DETrace run_de(const channels::ChannelModel& ch, const ensemble::DegreeDistribution& d,
               const density::GridSpec& grid, const RunOptions& opt);

inline DETrace run_de(const channels::ChannelModel& ch, const ensemble::DegreeDistribution& d,
                      const density::GridSpec& grid, int max_iter) {
    RunOptions opt;
    opt.max_iter = max_iter;
    return run_de(ch, d, grid, opt);
}

bool decodable(const channels::ChannelModel& ch, const ensemble::DegreeDistribution& d,
               const density::GridSpec& grid, const RunOptions& opt);

// Largest decodable family parameter to +-precision, by bisection.
double threshold_search(const channels::ChannelFamily& fam,
                        const ensemble::DegreeDistribution& d, const density::GridSpec& grid,
                        int max_iter, double precision,
                        Variant variant = Variant::CodewordAveraged,
                        bool stall_detect = false);

struct TypicalityResult {
    double linear_threshold;
    double coset_threshold;
    DETrace linear_trace;  // at the probe parameter
    DETrace coset_trace;
    std::vector<double> q_distance;  // per-iteration TV(Q(0), Q(1)), linear run
};

TypicalityResult typicality_compare(const ensemble::DegreeDistribution& d,
                                    const channels::ChannelFamily& fam,
                                    const density::GridSpec& grid, int max_iter,
                                    double probe_param, double precision = 1e-4);

}  // namespace asymde::de
