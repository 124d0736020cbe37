#include "asymde/bpsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace asymde::bpsim {

namespace {

constexpr double kLlrClamp = 30.0;
constexpr double kTanhClamp = 1.0 - 1e-12;

double clamp_llr(double v) { return std::clamp(v, -kLlrClamp, kLlrClamp); }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

int worker_count() {
    if (const char* s = std::getenv("ASYMDE_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

}  // namespace

gf2::BitVec encode(const gf2::GF2Basis& basis, const gf2::BitVec& message) {
    if (message.size() != gf2::make_bitvec(basis.size()).size())
        throw LengthMismatch("message length does not match basis size");
    gf2::BitVec cw = gf2::make_bitvec(basis.cols);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (!gf2::bv_get(message, k)) continue;
        const gf2::BitVec& row = basis.rows[k];
        for (std::size_t w = 0; w < cw.size(); ++w) cw[w] ^= row[w];
    }
    return cw;
}

BPDecodeResult bp_decode(const ensemble::BipartiteGraph& g, const channels::ChannelModel& ch,
                         const std::vector<double>& y, int iters) {
    if (y.size() != g.n) throw LengthMismatch("received vector length does not match code length");
    const std::size_t E = g.edges();

    std::vector<double> m0(g.n);
    for (std::size_t i = 0; i < g.n; ++i) m0[i] = clamp_llr(channels::llr(ch, y[i]));

    std::vector<double> var_msg(E);  // variable to check, indexed by edge
    std::vector<double> chk_msg(E);  // check to variable
    for (std::size_t e = 0; e < E; ++e) var_msg[e] = m0[g.edge_var[e]];

    BPDecodeResult res;
    res.hard.reserve(iters);
    std::vector<double> scratch;

    for (int l = 0; l < iters; ++l) {
        // check side: leave-one-out tanh products by prefix/suffix
        for (std::size_t c = 0; c < g.m; ++c) {
            const auto& es = g.chk_edges[c];
            const std::size_t d = es.size();
            if (d == 0) continue;
            if (d == 1) {
                chk_msg[es[0]] = 0.0;  // no extrinsic input
                continue;
            }
            scratch.resize(2 * d);
            double* pre = scratch.data();
            double* suf = scratch.data() + d;
            double acc = 1.0;
            for (std::size_t k = 0; k < d; ++k) {
                pre[k] = acc;
                acc *= std::tanh(0.5 * var_msg[es[k]]);
            }
            acc = 1.0;
            for (std::size_t k = d; k-- > 0;) {
                suf[k] = acc;
                acc *= std::tanh(0.5 * var_msg[es[k]]);
            }
            for (std::size_t k = 0; k < d; ++k) {
                const double t = std::clamp(pre[k] * suf[k], -kTanhClamp, kTanhClamp);
                chk_msg[es[k]] = std::log1p(t) - std::log1p(-t);
            }
        }

        // variable side and decisions
        std::vector<std::int8_t> hard(g.n);
        for (std::size_t i = 0; i < g.n; ++i) {
            double total = m0[i];
            for (const auto e : g.var_edges[i]) total += chk_msg[e];
            hard[i] = total > 0.0 ? 0 : (total < 0.0 ? 1 : -1);
            for (const auto e : g.var_edges[i]) var_msg[e] = clamp_llr(total - chk_msg[e]);
        }
        res.hard.push_back(std::move(hard));
    }
    return res;
}

namespace {

struct TrialCounts {
    std::uint64_t half_bit_errors = 0;  // final round, units of 1/2 bit
    std::uint64_t block_errors = 0;
    std::vector<std::uint64_t> iter_half_errors;

    void operator+=(const TrialCounts& o) {
        half_bit_errors += o.half_bit_errors;
        block_errors += o.block_errors;
        if (iter_half_errors.size() < o.iter_half_errors.size())
            iter_half_errors.resize(o.iter_half_errors.size(), 0);
        for (std::size_t k = 0; k < o.iter_half_errors.size(); ++k)
            iter_half_errors[k] += o.iter_half_errors[k];
    }
};

TrialCounts run_trial(const SimConfig& cfg, const ensemble::BipartiteGraph& g,
                      const gf2::GF2Basis& basis, std::size_t trial) {
    std::mt19937_64 rng(mix(cfg.master_seed, trial + 1));

    gf2::BitVec message = gf2::make_bitvec(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) gf2::bv_set(message, k, rng() & 1u);
    const gf2::BitVec cw = encode(basis, message);

    std::vector<double> y(g.n);
    for (std::size_t i = 0; i < g.n; ++i)
        y[i] = channels::sample_output(cfg.channel, gf2::bv_get(cw, i), rng);

    const BPDecodeResult dec = bp_decode(g, cfg.channel, y, cfg.bp_iters);

    TrialCounts out;
    if (cfg.per_iteration_ber) {
        out.iter_half_errors.resize(dec.hard.size(), 0);
        for (std::size_t l = 0; l < dec.hard.size(); ++l)
            for (std::size_t i = 0; i < g.n; ++i) {
                const std::int8_t h = dec.hard[l][i];
                if (h < 0)
                    out.iter_half_errors[l] += 1;
                else if (h != static_cast<std::int8_t>(gf2::bv_get(cw, i)))
                    out.iter_half_errors[l] += 2;
            }
    }

    bool block_err = false;
    const auto& final_hard = dec.hard.back();
    for (std::size_t i = 0; i < g.n; ++i) {
        std::int8_t h = final_hard[i];
        if (h < 0) {
            out.half_bit_errors += 1;
            h = static_cast<std::int8_t>(rng() & 1u);  // tie broken from the trial seed
        } else if (h != static_cast<std::int8_t>(gf2::bv_get(cw, i))) {
            out.half_bit_errors += 2;
        }
        if (h != static_cast<std::int8_t>(gf2::bv_get(cw, i))) block_err = true;
    }
    if (block_err) out.block_errors = 1;
    return out;
}

}  // namespace

SimResult run_sim(const SimConfig& cfg) {
    const ensemble::BipartiteGraph g =
        ensemble::sample_graph(cfg.degrees, cfg.n, mix(cfg.master_seed, 0));
    const gf2::GF2Matrix a = ensemble::parity_matrix(g);
    const gf2::GF2Basis basis = gf2::null_space_basis(a);
    if (basis.size() == 0) throw EncoderFailure("parity-check matrix has trivial null space");

    const std::size_t trials = cfg.num_codewords;
    const int nw = std::max(1, std::min<int>(worker_count(), static_cast<int>(trials)));

    std::vector<TrialCounts> partial(nw);
    auto work = [&](int w) {
        for (std::size_t t = w; t < trials; t += nw) partial[w] += run_trial(cfg, g, basis, t);
    };
    if (nw == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (int w = 0; w < nw; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    TrialCounts total;
    for (const auto& p : partial) total += p;

    SimResult res;
    res.bits_total = trials * g.n;
    res.blocks_total = trials;
    res.bit_errors = 0.5 * static_cast<double>(total.half_bit_errors);
    res.block_errors = total.block_errors;
    res.ber = res.bits_total ? res.bit_errors / static_cast<double>(res.bits_total) : 0.0;
    res.bler = trials ? static_cast<double>(total.block_errors) / static_cast<double>(trials) : 0.0;
    if (cfg.per_iteration_ber) {
        res.iter_ber.resize(total.iter_half_errors.size());
        for (std::size_t l = 0; l < res.iter_ber.size(); ++l)
            res.iter_ber[l] = 0.5 * static_cast<double>(total.iter_half_errors[l]) /
                              static_cast<double>(res.bits_total);
    }
    return res;
}

}  // namespace asymde::bpsim
