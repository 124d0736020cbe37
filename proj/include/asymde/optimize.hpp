#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "asymde/de.hpp"

namespace asymde::optimize {

struct Infeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OptConstraints {
    int max_dv = 12;
    int max_dc = 9;
    double target_rate = 0.5;
    bool forbid_lambda2 = false;
    density::GridSpec grid;
    int max_iter = 100;
    int budget = 500;  // candidate evaluations
};

struct EvalRecord {
    int eval = 0;
    double score = 0.0;         // coarse threshold of this candidate
    double best_so_far = 0.0;   // non-decreasing
};

struct OptResult {
    ensemble::DegreeDistribution best;
    double threshold = 0.0;  // refined to 1e-4
    std::vector<EvalRecord> eval_log;
};

// Projected stochastic hill-climbing over edge-perspective coefficient
// vectors. After each perturbation the lambda side is re-projected onto
// {simplex, design rate = target_rate} by an exponential tilt in 1/k.
// Candidates are scored at coarse threshold precision (2e-3, stall
// detection on); the winner is re-scored at 1e-4. Deterministic in seed.
OptResult optimize_degrees(const channels::ChannelFamily& fam, const OptConstraints& c,
                           std::uint64_t seed);

}  // namespace asymde::optimize
