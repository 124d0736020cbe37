#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace asymde::density {

struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct Overflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform LLR grid. Bin i sits at center llr_min + i*width, so the sum of
// two centers is again a center and (with the default symmetric range)
// center(bins/2) == 0 exactly. Explicit atoms at +/-inf live outside the
// binned range.
struct GridSpec {
    double llr_min = -15.0;
    double llr_max = 15.0;
    int bins = 256;

    GridSpec() = default;
    GridSpec(double lo, double hi, int nbins);

    double width() const { return (llr_max - llr_min) / bins; }
    double center(int i) const { return llr_min + i * width(); }
    int zero_bin() const { return zero_bin_; }

    // Nearest bin for a value, saturating at the ends. Ties round toward
    // the bin whose center is closer to zero.
    int quantize(double v) const;

    bool operator==(const GridSpec& o) const {
        return llr_min == o.llr_min && llr_max == o.llr_max && bins == o.bins;
    }

private:
    int zero_bin_ = 128;
};

// Signed discrete measure over a GridSpec plus +/-inf atoms. Probability
// densities have nonnegative mass summing to one; signed intermediates
// (the half-difference of a density pair) are allowed everywhere.
class QuantizedDensity {
public:
    QuantizedDensity() : QuantizedDensity(GridSpec{}) {}
    explicit QuantizedDensity(const GridSpec& g)
        : grid(g), mass(static_cast<std::size_t>(g.bins), 0.0) {}

    GridSpec grid;
    std::vector<double> mass;
    double at_neg_inf = 0.0;
    double at_pos_inf = 0.0;

    double total() const;

    static QuantizedDensity point(const GridSpec& g, double llr, double p = 1.0);
    static QuantizedDensity point_pos_inf(const GridSpec& g, double p = 1.0);
    static QuantizedDensity point_neg_inf(const GridSpec& g, double p = 1.0);
};

// Conditional message densities indexed by transmitted bit, stored with
// aligned parity: p1 is P(1) reflected through m -> -m, so correct mass
// sits on the positive axis for both.
struct DensityPair {
    QuantizedDensity p0;
    QuantizedDensity p1;
};

QuantizedDensity reflect(const QuantizedDensity& p);

// Law of m_P + m_Q; out-of-range mass saturates into the end bins.
// inf + finite = inf; (-inf) + (+inf) resolves to the zero bin.
QuantizedDensity convolve(const QuantizedDensity& p, const QuantizedDensity& q);

// Density transform of the check-node map
// R(a,b) = 2 atanh(tanh(a/2) tanh(b/2)), extended bilinearly to signed
// inputs. The +inf atom is the identity element; the zero bin annihilates.
QuantizedDensity check_combine(const QuantizedDensity& p, const QuantizedDensity& q);

// Linear combination helpers.
QuantizedDensity add(const QuantizedDensity& p, const QuantizedDensity& q,
                     double wp = 1.0, double wq = 1.0);

// Rescale so total() == 1. Round-off from the combine table compounds
// geometrically across iterations (each step raises the total mass to
// roughly the (d_c-1)(d_v-1) power), so evolution loops renormalize
// after every step. No-op when the total is zero.
void normalize(QuantizedDensity& p);

// sum_k lambda_k Q^{conv (k-1)} with per-power memoization.
QuantizedDensity lambda_apply(const std::vector<std::pair<int, double>>& lambda,
                              const QuantizedDensity& q);

// sum_k rho_k S^{check-combine (k-1)}
QuantizedDensity rho_apply(const std::vector<std::pair<int, double>>& rho,
                           const QuantizedDensity& s);

// (Q(0), Q(1)) from the half-sum / half-difference route:
// Q(x) = rho*(S+) + (-1)^x rho*(S-).
DensityPair rho_apply_pair(const std::vector<std::pair<int, double>>& rho,
                           const DensityPair& pair);

// p_e = (mass below zero of p0 + mass below zero of p1) / 2 under aligned
// parity; the zero bin counts half.
double error_prob(const DensityPair& pair);
double error_prob(const QuantizedDensity& p);

// <CBP> = (1/2) integral e^{-m/2} d(p0 + p1). The +inf atom contributes 0;
// positive mass at -inf is an Overflow error.
double chernoff(const DensityPair& pair);
double chernoff(const QuantizedDensity& p);

// integral e^{-s m} dP, finite bins plus atoms (+inf -> 0 for s>0).
double exp_moment(const QuantizedDensity& p, double s);

// Total-variation distance on the grid (half L1, atoms included).
double tv_distance(const QuantizedDensity& p, const QuantizedDensity& q);

// CSV dump: lines of (bin_center|-INF|+INF, mass).
std::string to_csv(const QuantizedDensity& p);

}  // namespace asymde::density
