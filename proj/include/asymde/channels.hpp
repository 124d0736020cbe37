#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <variant>

#include "asymde/density.hpp"

namespace asymde::channels {

struct UnsupportedOutput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// BEC erasure sentinel (valid outputs are 0 and 1).
inline constexpr double kErasure = 0.5;

struct BEC {
    double eps;
};
struct BSC {
    double eps;
};
struct BASC {
    double eps0;
    double eps1;
};
// BASC with a tiny zero-to-one crossover floor; eps0 = 0 is permitted but
// puts mass on the -inf atom of the conditional densities.
struct ZChannel {
    double eps1;
    double eps0_floor = 1e-5;
};
struct BiAWGNC {
    double sigma;  // bits 0/1 mapped to +1/-1
};
// Bit-level 4PAM sub-channel with Gray mapping: symmetric two-Gaussian
// mixtures at +/-3/sqrt(5) (bit 0) and +/-1/sqrt(5) (bit 1).
struct CompositeBiAWGNC {
    double sigma;
};

using ChannelModel = std::variant<BEC, BSC, BASC, ZChannel, BiAWGNC, CompositeBiAWGNC>;

// "bec:eps=0.42", "basc:eps0=0.01,eps1=0.2", "z:eps1=0.23", ...
ChannelModel parse_channel(const std::string& spec);
std::string channel_name(const ChannelModel& ch);
std::string channel_spec(const ChannelModel& ch);

double sample_output(const ChannelModel& ch, int x, std::mt19937_64& rng);

// ln f(y|0)/f(y|1); +/-inf permitted.
double llr(const ChannelModel& ch, double y);

// Quantized laws of the initial message conditioned on x = 0 / x = 1,
// stored with aligned parity (P(1) reflected).
density::DensityPair initial_density_pair(const ChannelModel& ch, const density::GridSpec& grid);

// Closed form where available, numeric quadrature for the composite model.
double bhattacharyya(const ChannelModel& ch);

// Scalar parameter axis swept during threshold search.
struct ChannelFamily {
    enum class Axis { Eps, Eps1, Sigma };
    std::string name;  // bec, bsc, z, basc, biawgnc, cbiawgnc
    Axis axis;
    double lo, hi;            // default search bracket
    double fixed_eps0 = 0.0;  // for basc/z families

    ChannelModel make(double param) const;
};

ChannelFamily family_by_name(const std::string& name);

}  // namespace asymde::channels
