#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asymde/bpsim.hpp"
#include "asymde/de.hpp"
#include "asymde/optimize.hpp"
#include "asymde/rankstats.hpp"

using nlohmann::json;
using namespace asymde;

namespace {

constexpr const char* kVersion = "asymde 0.1.0";

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "";
    std::uint64_t h = 0xcbf29ce484222325ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

density::GridSpec parse_grid(const std::string& s) {
    int bins;
    double lo, hi;
    if (std::sscanf(s.c_str(), "%d:%lf:%lf", &bins, &lo, &hi) != 3 || bins < 8 || lo >= hi)
        throw CLI::ValidationError("--grid", "expected bins:min:max, e.g. 256:-15:15");
    return density::GridSpec(lo, hi, bins);
}

de::Variant parse_variant(const std::string& s) {
    if (s == "linear") return de::Variant::CodewordAveraged;
    if (s == "coset") return de::Variant::Coset;
    throw CLI::ValidationError("--variant", "expected linear or coset");
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json make_manifest(const std::string& subcommand, const json& params,
                   const std::string& code_file, std::uint64_t seed, double wall_s) {
    return json{{"subcommand", subcommand},
                {"parameters", params},
                {"code_file_hash", code_file.empty() ? "" : fnv1a_file(code_file)},
                {"seed", seed},
                {"tool_version", kVersion},
                {"wall_time_s", wall_s}};
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << text;
}

void write_csv_with_manifest(const std::string& path, const std::string& csv,
                             const json& manifest) {
    write_text(path, csv);
    if (!path.empty() && path != "-") write_text(path + ".manifest.json", manifest.dump(2) + "\n");
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// iteration budget used by the bundled tables: the erasure family needs
// the long run to shed the iteration-cap bias (its densities evolve
// exactly on the grid), the finite-LLR families are run at the standard
// 100 rounds
int table_iters(const std::string& family) { return family == "bec" ? 500 : 100; }

int run_cli(int argc, char** argv) {
    CLI::App app{"density evolution toolkit for asymmetric memoryless channels"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // de
    auto* de_cmd = app.add_subcommand("de", "run one density evolution trace");
    std::string de_code, de_channel, de_grid = "256:-15:15", de_variant = "linear", de_out = "-";
    int de_iters = 100;
    de_cmd->add_option("--code", de_code, "degree distribution file")->required();
    de_cmd->add_option("--channel", de_channel, "channel spec, e.g. z:eps1=0.23")->required();
    de_cmd->add_option("--iters", de_iters, "max iterations");
    de_cmd->add_option("--grid", de_grid, "bins:min:max");
    de_cmd->add_option("--variant", de_variant, "linear or coset");
    de_cmd->add_option("--out", de_out, "trace CSV path");

    // threshold
    auto* th_cmd = app.add_subcommand("threshold", "bisect the family threshold");
    std::string th_family, th_code, th_grid = "256:-15:15", th_variant = "linear", th_out = "-",
                th_bracket;
    int th_iters = 100;
    double th_precision = 1e-4;
    th_cmd->add_option("--family", th_family, "channel family name")->required();
    th_cmd->add_option("--code", th_code, "degree distribution file")->required();
    th_cmd->add_option("--iters", th_iters, "max iterations per run");
    th_cmd->add_option("--precision", th_precision, "bisection precision");
    th_cmd->add_option("--grid", th_grid, "bins:min:max");
    th_cmd->add_option("--variant", th_variant, "linear or coset");
    th_cmd->add_option("--bracket", th_bracket, "lo:hi override of the search interval");
    th_cmd->add_option("--out", th_out, "result JSON path");

    // typicality
    auto* ty_cmd = app.add_subcommand("typicality", "compare linear and coset evolution");
    std::string ty_code, ty_family = "z", ty_grid = "256:-15:15", ty_out = "-", ty_bracket;
    double ty_probe = 0.0, ty_precision = 1e-4;
    int ty_iters = 500;
    ty_cmd->add_option("--code", ty_code, "degree distribution file")->required();
    ty_cmd->add_option("--family", ty_family, "channel family name");
    ty_cmd->add_option("--probe", ty_probe, "family parameter for the probe traces")->required();
    ty_cmd->add_option("--iters", ty_iters, "max iterations");
    ty_cmd->add_option("--precision", ty_precision, "bisection precision");
    ty_cmd->add_option("--grid", ty_grid, "bins:min:max");
    ty_cmd->add_option("--bracket", ty_bracket, "lo:hi override of the search interval");
    ty_cmd->add_option("--out", ty_out, "result JSON path");

    // sim
    auto* sim_cmd = app.add_subcommand("sim", "finite-length Monte Carlo BP simulation");
    std::string sim_code, sim_channel, sim_out = "-";
    std::uint64_t sim_n = 10000, sim_codewords = 1000, sim_seed = 0;
    int sim_bp = 40;
    sim_cmd->add_option("--code", sim_code, "degree distribution file")->required();
    sim_cmd->add_option("--channel", sim_channel, "channel spec")->required();
    sim_cmd->add_option("--n", sim_n, "codeword length");
    sim_cmd->add_option("--codewords", sim_codewords, "number of codewords");
    sim_cmd->add_option("--bp-iters", sim_bp, "BP rounds per codeword");
    sim_cmd->add_option("--seed", sim_seed, "master seed");
    sim_cmd->add_option("--out", sim_out, "result JSON path");

    // rank
    auto* rk_cmd = app.add_subcommand("rank", "rank-deficiency statistics");
    std::string rk_out = "-", rk_nlist = "120,240,480";
    int rk_dv = 3, rk_dc = 6;
    std::uint64_t rk_trials = 2000, rk_seed = 0, rk_mprime = 0;
    rk_cmd->add_option("--dv", rk_dv, "variable degree");
    rk_cmd->add_option("--dc", rk_dc, "check degree");
    rk_cmd->add_option("--n", rk_nlist, "comma-separated code lengths");
    rk_cmd->add_option("--trials", rk_trials, "trials per length");
    rk_cmd->add_option("--m-prime", rk_mprime, "checks of degree dc-1");
    rk_cmd->add_option("--seed", rk_seed, "seed");
    rk_cmd->add_option("--out", rk_out, "CSV path");

    // optimize
    auto* opt_cmd = app.add_subcommand("optimize", "search degree distributions");
    std::string opt_family = "z", opt_out = "-", opt_grid = "256:-15:15";
    double opt_rate = 0.5;
    int opt_dv = 12, opt_dc = 9, opt_budget = 500, opt_iters = 100;
    bool opt_nol2 = false;
    std::uint64_t opt_seed = 0;
    opt_cmd->add_option("--family", opt_family, "channel family name");
    opt_cmd->add_option("--rate", opt_rate, "design rate");
    opt_cmd->add_option("--max-dv", opt_dv, "max variable degree");
    opt_cmd->add_option("--max-dc", opt_dc, "max check degree");
    opt_cmd->add_option("--budget", opt_budget, "candidate evaluations");
    opt_cmd->add_option("--iters", opt_iters, "DE iterations per run");
    opt_cmd->add_option("--grid", opt_grid, "bins:min:max");
    opt_cmd->add_flag("--forbid-lambda2", opt_nol2, "zero mass at variable degree 2");
    opt_cmd->add_option("--seed", opt_seed, "seed");
    opt_cmd->add_option("--out", opt_out, "degree file path");

    // table1
    auto* t1_cmd = app.add_subcommand("table1", "threshold sweep over the standard families");
    std::vector<std::string> t1_codes;
    std::string t1_out = "-", t1_grid = "256:-15:15";
    t1_cmd->add_option("--code", t1_codes, "degree distribution files")->required();
    t1_cmd->add_option("--grid", t1_grid, "bins:min:max");
    t1_cmd->add_option("--out", t1_out, "CSV path");

    // table2
    auto* t2_cmd = app.add_subcommand("table2", "linear vs coset thresholds, bundled ensembles");
    std::string t2_out = "-", t2_grid = "512:-15:15";
    t2_cmd->add_option("--grid", t2_grid, "bins:min:max");
    t2_cmd->add_option("--out", t2_out, "CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit clean, usage errors exit 2
    }

    auto family_with_bracket = [](const std::string& name, const std::string& bracket) {
        channels::ChannelFamily fam = channels::family_by_name(name);
        if (!bracket.empty()) {
            double lo, hi;
            if (std::sscanf(bracket.c_str(), "%lf:%lf", &lo, &hi) != 2 || lo >= hi)
                throw CLI::ValidationError("--bracket", "expected lo:hi");
            fam.lo = lo;
            fam.hi = hi;
        }
        return fam;
    };

    Timer timer;

    if (*de_cmd) {
        const auto d = ensemble::DegreeDistribution::load(de_code);
        const auto ch = channels::parse_channel(de_channel);
        const auto grid = parse_grid(de_grid);
        de::RunOptions opt;
        opt.max_iter = de_iters;
        opt.variant = parse_variant(de_variant);
        const auto trace = de::run_de(ch, d, grid, opt);
        std::ostringstream csv;
        csv << "l,p_e,cbp\n";
        for (const auto& r : trace.records)
            csv << r.l << "," << fmt(r.p_e) << "," << fmt(r.cbp) << "\n";
        const json params{{"code", de_code},      {"channel", de_channel},
                          {"iters", de_iters},    {"grid", de_grid},
                          {"variant", de_variant}};
        json manifest = make_manifest("de", params, de_code, 0, timer.seconds());
        manifest["verdict"] =
            trace.verdict == de::Verdict::ConvergedToStability ? "converged" : "max-iterations";
        write_csv_with_manifest(de_out, csv.str(), manifest);
        return 0;
    }

    if (*th_cmd) {
        const auto d = ensemble::DegreeDistribution::load(th_code);
        const auto fam = family_with_bracket(th_family, th_bracket);
        const auto grid = parse_grid(th_grid);
        double t;
        try {
            t = de::threshold_search(fam, d, grid, th_iters, th_precision,
                                     parse_variant(th_variant));
        } catch (const de::NoBracket& e) {
            throw NumericalFailure(e.what());
        }
        const json params{{"family", th_family},       {"code", th_code},
                          {"iters", th_iters},         {"precision", th_precision},
                          {"grid", th_grid},           {"variant", th_variant},
                          {"bracket", th_bracket}};
        json out{{"threshold", t},
                 {"bhattacharyya_at_threshold", channels::bhattacharyya(fam.make(t))},
                 {"manifest", make_manifest("threshold", params, th_code, 0, timer.seconds())}};
        write_text(th_out, out.dump(2) + "\n");
        return 0;
    }

    if (*ty_cmd) {
        const auto d = ensemble::DegreeDistribution::load(ty_code);
        const auto fam = family_with_bracket(ty_family, ty_bracket);
        const auto grid = parse_grid(ty_grid);
        de::TypicalityResult res;
        try {
            res = de::typicality_compare(d, fam, grid, ty_iters, ty_probe, ty_precision);
        } catch (const de::NoBracket& e) {
            throw NumericalFailure(e.what());
        }
        auto trace_json = [](const de::DETrace& tr) {
            json rows = json::array();
            for (const auto& r : tr.records) rows.push_back({r.l, r.p_e, r.cbp});
            return json{{"records", rows},
                        {"converged", tr.verdict == de::Verdict::ConvergedToStability},
                        {"iterations_used", tr.iterations_used}};
        };
        const json params{{"code", ty_code},   {"family", ty_family}, {"probe", ty_probe},
                          {"iters", ty_iters}, {"grid", ty_grid},     {"precision", ty_precision}};
        json out{{"linear_threshold", res.linear_threshold},
                 {"coset_threshold", res.coset_threshold},
                 {"linear_trace", trace_json(res.linear_trace)},
                 {"coset_trace", trace_json(res.coset_trace)},
                 {"q_distance", res.q_distance},
                 {"manifest", make_manifest("typicality", params, ty_code, 0, timer.seconds())}};
        write_text(ty_out, out.dump(2) + "\n");
        return 0;
    }

    if (*sim_cmd) {
        bpsim::SimConfig cfg;
        cfg.degrees = ensemble::DegreeDistribution::load(sim_code);
        cfg.channel = channels::parse_channel(sim_channel);
        cfg.n = sim_n;
        cfg.num_codewords = sim_codewords;
        cfg.bp_iters = sim_bp;
        cfg.master_seed = sim_seed;
        const auto res = bpsim::run_sim(cfg);
        const json params{{"code", sim_code},        {"channel", sim_channel},
                          {"n", sim_n},              {"codewords", sim_codewords},
                          {"bp_iters", sim_bp},      {"seed", sim_seed}};
        json out{{"ber", res.ber},
                 {"bler", res.bler},
                 {"bit_errors", res.bit_errors},
                 {"block_errors", res.block_errors},
                 {"bits_total", res.bits_total},
                 {"manifest", make_manifest("sim", params, sim_code, sim_seed, timer.seconds())}};
        write_text(sim_out, out.dump(2) + "\n");
        return 0;
    }

    if (*rk_cmd) {
        std::vector<std::size_t> ns;
        std::stringstream ss(rk_nlist);
        for (std::string tok; std::getline(ss, tok, ',');) ns.push_back(std::stoull(tok));
        const auto est = rankstats::estimate_E2mr(rk_dv, rk_dc, ns, rk_mprime, rk_trials, rk_seed);
        std::ostringstream csv;
        csv << "n,mean,stderr\n";
        for (const auto& e : est)
            csv << e.n << "," << fmt(e.mean) << "," << fmt(e.std_err) << "\n";
        const json params{{"dv", rk_dv},         {"dc", rk_dc},     {"n", rk_nlist},
                          {"trials", rk_trials}, {"m_prime", rk_mprime}};
        write_csv_with_manifest(rk_out, csv.str(),
                                make_manifest("rank", params, "", rk_seed, timer.seconds()));
        return 0;
    }

    if (*opt_cmd) {
        optimize::OptConstraints c;
        c.max_dv = opt_dv;
        c.max_dc = opt_dc;
        c.target_rate = opt_rate;
        c.forbid_lambda2 = opt_nol2;
        c.grid = parse_grid(opt_grid);
        c.max_iter = opt_iters;
        c.budget = opt_budget;
        const auto fam = channels::family_by_name(opt_family);
        const auto res = optimize::optimize_degrees(fam, c, opt_seed);
        write_text(opt_out, res.best.serialize());
        const json params{{"family", opt_family}, {"rate", opt_rate},     {"max_dv", opt_dv},
                          {"max_dc", opt_dc},     {"budget", opt_budget}, {"iters", opt_iters},
                          {"forbid_lambda2", opt_nol2}};
        json summary{
            {"threshold", res.threshold},
            {"evaluations", res.eval_log.size()},
            {"manifest", make_manifest("optimize", params, "", opt_seed, timer.seconds())}};
        if (opt_out.empty() || opt_out == "-")
            std::cout << summary.dump(2) << "\n";
        else
            write_text(opt_out + ".manifest.json", summary.dump(2) + "\n");
        return 0;
    }

    if (*t1_cmd) {
        const auto grid = parse_grid(t1_grid);
        std::ostringstream csv;
        csv << "code,family,threshold,bhattacharyya\n";
        json params{{"codes", t1_codes}, {"grid", t1_grid}};
        for (const auto& path : t1_codes) {
            const auto d = ensemble::DegreeDistribution::load(path);
            for (const std::string family : {"bec", "bsc", "z", "biawgnc"}) {
                const auto fam = channels::family_by_name(family);
                double t;
                try {
                    t = de::threshold_search(fam, d, grid, table_iters(family), 1e-4);
                } catch (const de::NoBracket& e) {
                    throw NumericalFailure(e.what());
                }
                csv << path << "," << family << "," << fmt(t) << ","
                    << fmt(channels::bhattacharyya(fam.make(t))) << "\n";
            }
        }
        write_csv_with_manifest(t1_out, csv.str(),
                                make_manifest("table1", params, "", 0, timer.seconds()));
        return 0;
    }

    if (*t2_cmd) {
        const auto grid = parse_grid(t2_grid);
        auto fam = channels::family_by_name("z");
        fam.hi = 0.99;  // one bundled ensemble sits above the default bracket
        struct Row {
            const char* name;
            ensemble::DegreeDistribution d;
        };
        const Row rows[] = {
            {"(3,4)", ensemble::DegreeDistribution::regular(3, 4)},
            {"(3,6)", ensemble::DegreeDistribution::regular(3, 6)},
            {"(3,[3,4])", ensemble::DegreeDistribution({{3, 1.0}}, {{3, 0.5}, {4, 0.5}})},
            {"(3,[5,6])", ensemble::DegreeDistribution({{3, 1.0}}, {{5, 0.5}, {6, 0.5}})},
        };
        std::ostringstream csv;
        csv << "ensemble,linear,coset\n";
        for (const auto& row : rows) {
            double tl, tc;
            try {
                tl = de::threshold_search(fam, row.d, grid, 100, 1e-4,
                                          de::Variant::CodewordAveraged);
                tc = de::threshold_search(fam, row.d, grid, 100, 1e-4, de::Variant::Coset);
            } catch (const de::NoBracket& e) {
                throw NumericalFailure(e.what());
            }
            csv << row.name << "," << fmt(tl) << "," << fmt(tc) << "\n";
        }
        write_csv_with_manifest(t2_out, csv.str(),
                                make_manifest("table2", json{{"grid", t2_grid}}, "", 0,
                                              timer.seconds()));
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const density::Overflow& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
