#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "asymde/channels.hpp"
#include "asymde/ensemble.hpp"
#include "asymde/gf2.hpp"

namespace asymde::bpsim {

struct LengthMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EncoderFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// XOR of the basis rows selected by the message bits. message holds
// basis.size() bits.
gf2::BitVec encode(const gf2::GF2Basis& basis, const gf2::BitVec& message);

// Flooding sum-product decoder. hard[l][i] is the decision for variable i
// after l+1 rounds: 0, 1, or -1 when the posterior LLR is exactly zero.
struct BPDecodeResult {
    std::vector<std::vector<std::int8_t>> hard;
};

BPDecodeResult bp_decode(const ensemble::BipartiteGraph& g, const channels::ChannelModel& ch,
                         const std::vector<double>& y, int iters);

struct SimConfig {
    ensemble::DegreeDistribution degrees = ensemble::DegreeDistribution::regular(3, 6);
    std::size_t n = 10000;
    channels::ChannelModel channel = channels::BSC{0.0};
    int bp_iters = 40;
    std::size_t num_codewords = 1000;
    std::uint64_t master_seed = 0;
    bool per_iteration_ber = false;
};

struct SimResult {
    double ber = 0.0;
    double bler = 0.0;
    double bit_errors = 0.0;  // ties count 1/2
    std::size_t block_errors = 0;
    std::size_t bits_total = 0;
    std::size_t blocks_total = 0;
    std::vector<double> iter_ber;  // per BP round, when requested
};

// One graph per config; per-trial RNG derived from (master_seed, trial),
// integer reduction, so the result is independent of the worker count.
// Worker count: ASYMDE_THREADS, else hardware concurrency.
SimResult run_sim(const SimConfig& cfg);

}  // namespace asymde::bpsim
