#include "asymde/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace asymde::channels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::map<std::string, double> parse_kv(const std::string& body, const std::string& spec) {
    std::map<std::string, double> kv;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("channel spec '" + spec + "': expected key=value, got '" +
                                        item + "'");
        const std::string key = item.substr(0, eq);
        try {
            kv[key] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("channel spec '" + spec + "': bad value for field '" +
                                        key + "'");
        }
    }
    return kv;
}

double take(std::map<std::string, double>& kv, const std::string& key, const std::string& spec,
            bool required = true, double fallback = 0.0) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        if (required)
            throw std::invalid_argument("channel spec '" + spec + "': missing field '" + key + "'");
        return fallback;
    }
    const double v = it->second;
    kv.erase(it);
    return v;
}

void check_prob(double v, const char* field, const std::string& spec) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("channel spec '" + spec + "': field '" + field +
                                    "' must lie in [0,1]");
}

// Mixture of unit-weighted Gaussians used by both AWGN models.
struct Mixture {
    std::vector<double> means;
    std::vector<double> weights;
    double sigma;

    double pdf(double y) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < means.size(); ++i) {
            const double z = (y - means[i]) / sigma;
            acc += weights[i] * std::exp(-0.5 * z * z);
        }
        return acc / (sigma * std::sqrt(2.0 * M_PI));
    }
    double cdf(double y) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < means.size(); ++i)
            acc += weights[i] * 0.5 * std::erfc(-(y - means[i]) / (sigma * std::sqrt(2.0)));
        return acc;
    }
    // log pdf up to the common normalization constant
    double logpdf_unnorm(double y) const {
        double best = -kInf;
        std::vector<double> ex(means.size());
        for (std::size_t i = 0; i < means.size(); ++i) {
            const double z = (y - means[i]) / sigma;
            ex[i] = -0.5 * z * z + std::log(weights[i]);
            best = std::max(best, ex[i]);
        }
        double acc = 0.0;
        for (double e : ex) acc += std::exp(e - best);
        return best + std::log(acc);
    }
};

Mixture conditional_mixture(const BiAWGNC& ch, int x) {
    return Mixture{{x == 0 ? 1.0 : -1.0}, {1.0}, ch.sigma};
}

Mixture conditional_mixture(const CompositeBiAWGNC& ch, int x) {
    const double a = (x == 0 ? 3.0 : 1.0) / std::sqrt(5.0);
    return Mixture{{a, -a}, {0.5, 0.5}, ch.sigma};
}

template <typename Ch>
double gaussian_llr(const Ch& ch, double y) {
    return conditional_mixture(ch, 0).logpdf_unnorm(y) - conditional_mixture(ch, 1).logpdf_unnorm(y);
}

// Quantized law of llr(y) given x, by exact CDF mass on a fine y-grid.
template <typename Ch>
density::QuantizedDensity gaussian_density(const Ch& ch, int x, const density::GridSpec& grid) {
    const Mixture mix = conditional_mixture(ch, x);
    double ylo = kInf, yhi = -kInf;
    for (double mu : conditional_mixture(ch, 0).means) {
        ylo = std::min(ylo, mu);
        yhi = std::max(yhi, mu);
    }
    for (double mu : conditional_mixture(ch, 1).means) {
        ylo = std::min(ylo, mu);
        yhi = std::max(yhi, mu);
    }
    ylo -= 9.0 * ch.sigma;
    yhi += 9.0 * ch.sigma;
    const int cells = 1 << 17;
    const double h = (yhi - ylo) / cells;

    density::QuantizedDensity out(grid);
    double prev_cdf = mix.cdf(ylo);
    // tails go to the bins of the boundary LLR values (saturated)
    out.mass[static_cast<std::size_t>(grid.quantize(gaussian_llr(ch, ylo)))] += prev_cdf;
    for (int c = 0; c < cells; ++c) {
        const double y1 = ylo + (c + 1) * h;
        const double cdf1 = mix.cdf(y1);
        const double pm = cdf1 - prev_cdf;
        prev_cdf = cdf1;
        if (pm <= 0.0) continue;
        const double ymid = ylo + (c + 0.5) * h;
        out.mass[static_cast<std::size_t>(grid.quantize(gaussian_llr(ch, ymid)))] += pm;
    }
    out.mass[static_cast<std::size_t>(grid.quantize(gaussian_llr(ch, yhi)))] += 1.0 - prev_cdf;
    return out;
}

density::QuantizedDensity two_point(const density::GridSpec& g, double m_a, double p_a,
                                    double m_b, double p_b) {
    density::QuantizedDensity d(g);
    auto deposit = [&](double m, double p) {
        if (p == 0.0) return;
        if (m == kInf)
            d.at_pos_inf += p;
        else if (m == -kInf)
            d.at_neg_inf += p;
        else
            d.mass[static_cast<std::size_t>(g.quantize(m))] += p;
    };
    deposit(m_a, p_a);
    deposit(m_b, p_b);
    return d;
}

BASC as_basc(const ZChannel& z) { return BASC{z.eps0_floor, z.eps1}; }

}  // namespace

ChannelModel parse_channel(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("channel spec '" + spec + "': expected '<name>:<params>'");
    const std::string name = spec.substr(0, colon);
    auto kv = parse_kv(spec.substr(colon + 1), spec);
    ChannelModel ch;
    if (name == "bec") {
        BEC c{take(kv, "eps", spec)};
        check_prob(c.eps, "eps", spec);
        ch = c;
    } else if (name == "bsc") {
        BSC c{take(kv, "eps", spec)};
        check_prob(c.eps, "eps", spec);
        ch = c;
    } else if (name == "basc") {
        BASC c{take(kv, "eps0", spec), take(kv, "eps1", spec)};
        check_prob(c.eps0, "eps0", spec);
        check_prob(c.eps1, "eps1", spec);
        if (c.eps0 + c.eps1 >= 1.0)
            throw std::invalid_argument("channel spec '" + spec + "': need eps0+eps1 < 1");
        ch = c;
    } else if (name == "z") {
        ZChannel c{take(kv, "eps1", spec), take(kv, "eps0", spec, false, 1e-5)};
        check_prob(c.eps1, "eps1", spec);
        check_prob(c.eps0_floor, "eps0", spec);
        ch = c;
    } else if (name == "biawgnc") {
        BiAWGNC c{take(kv, "sigma", spec)};
        if (!(c.sigma > 0.0))
            throw std::invalid_argument("channel spec '" + spec + "': field 'sigma' must be > 0");
        ch = c;
    } else if (name == "cbiawgnc") {
        CompositeBiAWGNC c{take(kv, "sigma", spec)};
        if (!(c.sigma > 0.0))
            throw std::invalid_argument("channel spec '" + spec + "': field 'sigma' must be > 0");
        ch = c;
    } else {
        throw std::invalid_argument("channel spec '" + spec + "': unknown channel '" + name + "'");
    }
    if (!kv.empty())
        throw std::invalid_argument("channel spec '" + spec + "': unknown field '" +
                                    kv.begin()->first + "'");
    return ch;
}

std::string channel_name(const ChannelModel& ch) {
    return std::visit(
        [](const auto& c) -> std::string {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, BEC>) return "bec";
            else if constexpr (std::is_same_v<T, BSC>) return "bsc";
            else if constexpr (std::is_same_v<T, BASC>) return "basc";
            else if constexpr (std::is_same_v<T, ZChannel>) return "z";
            else if constexpr (std::is_same_v<T, BiAWGNC>) return "biawgnc";
            else return "cbiawgnc";
        },
        ch);
}

std::string channel_spec(const ChannelModel& ch) {
    std::ostringstream o;
    o.precision(10);
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, BEC>) o << "bec:eps=" << c.eps;
            else if constexpr (std::is_same_v<T, BSC>) o << "bsc:eps=" << c.eps;
            else if constexpr (std::is_same_v<T, BASC>)
                o << "basc:eps0=" << c.eps0 << ",eps1=" << c.eps1;
            else if constexpr (std::is_same_v<T, ZChannel>)
                o << "z:eps1=" << c.eps1 << ",eps0=" << c.eps0_floor;
            else if constexpr (std::is_same_v<T, BiAWGNC>) o << "biawgnc:sigma=" << c.sigma;
            else o << "cbiawgnc:sigma=" << c.sigma;
        },
        ch);
    return o.str();
}

double sample_output(const ChannelModel& ch, int x, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    return std::visit(
        [&](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, BEC>) {
                return u(rng) < c.eps ? kErasure : static_cast<double>(x);
            } else if constexpr (std::is_same_v<T, BSC>) {
                return u(rng) < c.eps ? 1.0 - x : static_cast<double>(x);
            } else if constexpr (std::is_same_v<T, BASC>) {
                const double flip = x == 0 ? c.eps0 : c.eps1;
                return u(rng) < flip ? 1.0 - x : static_cast<double>(x);
            } else if constexpr (std::is_same_v<T, ZChannel>) {
                const double flip = x == 0 ? c.eps0_floor : c.eps1;
                return u(rng) < flip ? 1.0 - x : static_cast<double>(x);
            } else {
                const Mixture mix = conditional_mixture(c, x);
                std::size_t comp = 0;
                if (mix.means.size() > 1 && u(rng) >= mix.weights[0]) comp = 1;
                return mix.means[comp] + c.sigma * gauss(rng);
            }
        },
        ch);
}

double llr(const ChannelModel& ch, double y) {
    return std::visit(
        [&](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, BEC>) {
                if (y == kErasure) return 0.0;
                if (y == 0.0) return kInf;
                if (y == 1.0) return -kInf;
                throw UnsupportedOutput("BEC output must be 0, 1, or the erasure symbol");
            } else if constexpr (std::is_same_v<T, BSC>) {
                if (y == 0.0) return std::log((1.0 - c.eps) / c.eps);
                if (y == 1.0) return std::log(c.eps / (1.0 - c.eps));
                throw UnsupportedOutput("BSC output must be 0 or 1");
            } else if constexpr (std::is_same_v<T, BASC>) {
                if (y == 0.0) return std::log((1.0 - c.eps0) / c.eps1);
                if (y == 1.0) return std::log(c.eps0 / (1.0 - c.eps1));
                throw UnsupportedOutput("BASC output must be 0 or 1");
            } else if constexpr (std::is_same_v<T, ZChannel>) {
                return llr(ChannelModel{as_basc(c)}, y);
            } else {
                return gaussian_llr(c, y);
            }
        },
        ch);
}

density::DensityPair initial_density_pair(const ChannelModel& ch,
                                          const density::GridSpec& grid) {
    using density::QuantizedDensity;
    return std::visit(
        [&](const auto& c) -> density::DensityPair {
            using T = std::decay_t<decltype(c)>;
            density::DensityPair pair;
            if constexpr (std::is_same_v<T, BEC>) {
                pair.p0 = two_point(grid, kInf, 1.0 - c.eps, 0.0, c.eps);
                // P(1) = (1-eps) delta_{-inf} + eps delta_0; aligned parity
                // reflects it onto the same density.
                pair.p1 = pair.p0;
            } else if constexpr (std::is_same_v<T, BSC>) {
                const double m = std::log((1.0 - c.eps) / c.eps);
                pair.p0 = two_point(grid, m, 1.0 - c.eps, -m, c.eps);
                pair.p1 = pair.p0;  // mirrored, then aligned
            } else if constexpr (std::is_same_v<T, BASC> || std::is_same_v<T, ZChannel>) {
                const BASC b = [&] {
                    if constexpr (std::is_same_v<T, ZChannel>) return as_basc(c);
                    else return c;
                }();
                const double m0 = std::log((1.0 - b.eps0) / b.eps1);  // y = 0
                const double m1 = b.eps0 == 0.0 ? -kInf
                                                : std::log(b.eps0 / (1.0 - b.eps1));  // y = 1
                pair.p0 = two_point(grid, m0, 1.0 - b.eps0, m1, b.eps0);
                pair.p1 = density::reflect(two_point(grid, m0, b.eps1, m1, 1.0 - b.eps1));
            } else {
                pair.p0 = gaussian_density(c, 0, grid);
                pair.p1 = density::reflect(gaussian_density(c, 1, grid));
            }
            return pair;
        },
        ch);
}

double bhattacharyya(const ChannelModel& ch) {
    return std::visit(
        [&](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, BEC>) {
                return c.eps;
            } else if constexpr (std::is_same_v<T, BSC>) {
                return 2.0 * std::sqrt(c.eps * (1.0 - c.eps));
            } else if constexpr (std::is_same_v<T, BASC>) {
                return std::sqrt(c.eps1 * (1.0 - c.eps0)) + std::sqrt(c.eps0 * (1.0 - c.eps1));
            } else if constexpr (std::is_same_v<T, ZChannel>) {
                return bhattacharyya(ChannelModel{as_basc(c)});
            } else if constexpr (std::is_same_v<T, BiAWGNC>) {
                return std::exp(-1.0 / (2.0 * c.sigma * c.sigma));
            } else {
                // integral sqrt(f(y|0) f(y|1)) dy, Simpson on a wide grid
                const Mixture m0 = conditional_mixture(c, 0);
                const Mixture m1 = conditional_mixture(c, 1);
                const double ylo = -3.0 / std::sqrt(5.0) - 10.0 * c.sigma;
                const double yhi = -ylo;
                const int n = 1 << 16;  // even
                const double h = (yhi - ylo) / n;
                auto f = [&](double y) { return std::sqrt(m0.pdf(y) * m1.pdf(y)); };
                double acc = f(ylo) + f(yhi);
                for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(ylo + i * h);
                return acc * h / 3.0;
            }
        },
        ch);
}

ChannelModel ChannelFamily::make(double param) const {
    switch (axis) {
        case Axis::Eps:
            if (name == "bec") return BEC{param};
            return BSC{param};
        case Axis::Eps1:
            return BASC{fixed_eps0, param};
        case Axis::Sigma:
            if (name == "biawgnc") return BiAWGNC{param};
            return CompositeBiAWGNC{param};
    }
    throw std::logic_error("unreachable");
}

ChannelFamily family_by_name(const std::string& name) {
    if (name == "bec") return {name, ChannelFamily::Axis::Eps, 1e-3, 0.5};
    if (name == "bsc") return {name, ChannelFamily::Axis::Eps, 1e-3, 0.5};
    if (name == "z") return {name, ChannelFamily::Axis::Eps1, 1e-3, 0.5, 1e-5};
    if (name == "basc") return {name, ChannelFamily::Axis::Eps1, 1e-3, 0.5, 0.0};
    if (name == "biawgnc") return {name, ChannelFamily::Axis::Sigma, 0.3, 2.0};
    if (name == "cbiawgnc") return {name, ChannelFamily::Axis::Sigma, 0.3, 2.0};
    throw std::invalid_argument("unknown channel family: " + name);
}

}  // namespace asymde::channels
