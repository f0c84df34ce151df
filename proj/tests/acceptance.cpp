// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli_helpers.hpp"
#include "oracle.hpp"
#include "statfuse/fusion.hpp"
#include "statfuse/io.hpp"
#include "statfuse/metrics.hpp"
#include "statfuse/raster.hpp"
#include "statfuse/synth.hpp"
#include "statfuse/window_stats.hpp"
#include "reference_table.hpp"

using namespace statfuse;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_rel(std::span<const double> got, std::span<const double> want) {
    double e = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) e = std::max(e, oracle::rel_err(got[i], want[i]));
    return e;
}

double max_abs(std::span<const double> a, std::span<const double> b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

FusionConfig config_with(int win, int ratio, double eps = kDefaultEpsilon) {
    FusionConfig cfg;
    cfg.window_lmm = cfg.window_lmvm = cfg.window_rvs = cfg.window_lcm = WindowSpec::square(win);
    cfg.ratio = ResolutionRatio(ratio);
    cfg.set_epsilon(eps);
    return cfg;
}

struct Outcome {
    bool ok;
    std::string detail;
};

Outcome oracle_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(8, 64);
    std::uniform_int_distribution<int> half(1, 5);
    const int ratios[] = {1, 2, 4};
    double worst = 0.0;
    int cases = 0;
    for (; cases < 120; ++cases) {
        const int ratio = ratios[cases % 3];
        const std::size_t w = std::max<std::size_t>(ratio, size(rng) / ratio * ratio);
        const std::size_t h = std::max<std::size_t>(ratio, size(rng) / ratio * ratio);
        const int win = 2 * half(rng) + 1;
        const int win_y = 2 * half(rng) + 1;
        const Band a = oracle::random_band(rng, w, h);
        const Band b = oracle::random_band(rng, w, h);
        const WindowSpec spec(win, win_y);
        const auto want = oracle::local(a, b, win, win_y);

        worst = std::max(worst, max_rel(local_mean(a, spec).values(), want.mean_a));
        std::vector<double> sd(want.var_a.size());
        for (std::size_t i = 0; i < sd.size(); ++i) sd[i] = std::sqrt(want.var_a[i]);
        worst = std::max(worst, max_rel(local_std(a, spec).values(), sd));
        worst = std::max(worst, max_rel(local_cov(a, b, spec).values(), want.cov));
        std::vector<double> slope, intercept;
        oracle::regression(a, b, win, win_y, kDefaultEpsilon, slope, intercept);
        const LocalFit fit = local_regression(a, b, spec);
        worst = std::max(worst, max_rel(fit.slope.values(), slope));
        worst = std::max(worst, max_rel(fit.intercept.values(), intercept));

        const FusionConfig cfg = config_with(win, ratio);
        const Band ms_low = degrade(b, cfg.ratio);
        const Band ms_up = upsample_nearest(ms_low, cfg.ratio);
        worst = std::max(worst, max_rel(fuse_lmm(a, ms_up, cfg).band.values(),
                                        oracle::lmm(a, ms_up, win, kDefaultEpsilon)));
        worst = std::max(worst, max_rel(fuse_lmvm(a, ms_up, cfg).band.values(),
                                        oracle::lmvm(a, ms_up, win, kDefaultEpsilon)));
        worst = std::max(worst, max_rel(fuse_rvs(a, ms_up, cfg).band.values(),
                                        oracle::rvs(a, ms_up, win, kDefaultEpsilon)));
        worst = std::max(worst, max_rel(fuse_lcm(a, ms_low, cfg).band.values(),
                                        oracle::lcm(a, ms_low, ratio, win, kDefaultEpsilon)));
    }
    const double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d cases, max relative error %.3g, %.2f s", cases, worst, secs);
    return {worst <= 1e-9 && secs < 60.0, buf};
}

Outcome metric_identities() {
    std::mt19937_64 rng(7);
    const Band f = oracle::random_band(rng, 40, 30);
    const Band flat = Band::filled(16, 16, 93.0);
    std::vector<double> ramp(256);
    for (int i = 0; i < 256; ++i) ramp[i] = i;
    const Band uniform(16, 16, ramp);
    const std::vector<std::pair<std::string, bool>> checks = {
        {"NRMSE(f,f)", nrmse(f, f) == 0.0},
        {"DI(f,f)", deviation_index(f, f) == 0.0},
        {"CC(f,f)", std::abs(correlation(f, f) - 1.0) <= 1e-12},
        {"En(const)", entropy(flat) == 0.0},
        {"En(uniform)", entropy(uniform) == 8.0},
        {"SD(const)", std_dev(flat) == 0.0},
    };
    std::string failed;
    for (const auto& [name, ok] : checks)
        if (!ok) failed += " " + name;
    return {failed.empty(), failed.empty() ? "6 identities hold" : "failed:" + failed};
}

Outcome linear_recovery() {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    double rvs_err = 0.0, lcm_err = 0.0, lcm1_err = 0.0;
    for (int t = 0; t < 20; ++t) {
        double alpha = coef(rng);
        if (std::abs(alpha) < 0.1) alpha += 0.5;
        const double beta = 50.0 * coef(rng);
        const int ratio = 1 << (t % 3);
        const Band p = oracle::random_band(rng, 16 * ratio, 12 * ratio);
        std::vector<double> m(p.size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = alpha * p.values()[i] + beta;
        const Band mb(p.width(), p.height(), m);
        const FusionConfig cfg = config_with(5, ratio);
        rvs_err = std::max(rvs_err, max_rel(fuse_rvs(p, mb, cfg).band.values(), m));

        // Zero residuals: the low-resolution MS is exactly linear in the degraded PAN.
        const Band p_low = degrade(p, cfg.ratio);
        std::vector<double> ml(p_low.size());
        for (std::size_t i = 0; i < ml.size(); ++i) ml[i] = alpha * p_low.values()[i] + beta;
        lcm_err = std::max(lcm_err, max_rel(fuse_lcm(p, Band(p_low.width(), p_low.height(), ml), cfg).band.values(), m));

        const Band any_m = oracle::random_band(rng, 20, 20);
        const Band any_p = oracle::random_band(rng, 20, 20);
        lcm1_err = std::max(lcm1_err, max_abs(fuse_lcm(any_p, any_m, config_with(3 + 2 * (t % 4), 1)).band.values(),
                                              any_m.values()));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "RVS %.3g, LCM %.3g, LCM ratio 1 max |diff| %.3g", rvs_err, lcm_err, lcm1_err);
    return {rvs_err <= 1e-9 && lcm_err <= 1e-9 && lcm1_err == 0.0, buf};
}

Outcome identity_preservation() {
    std::mt19937_64 rng(13);
    double worst = 0.0;
    for (int t = 0; t < 12; ++t) {
        const int ratio = (t % 2 == 0) ? 4 : 1;
        const Band ms_low = oracle::random_band(rng, 12, 10, 1.0, 255.0);
        const FusionConfig cfg = config_with(3 + 2 * (t % 5), ratio);
        const Band ms_up = upsample_nearest(ms_low, cfg.ratio);
        const Band& pan = ms_up;
        worst = std::max(worst, max_rel(fuse_lmm(pan, ms_up, cfg).band.values(), ms_up.values()));
        worst = std::max(worst, max_rel(fuse_lmvm(pan, ms_up, cfg).band.values(), ms_up.values()));
        worst = std::max(worst, max_rel(fuse_rvs(pan, ms_up, cfg).band.values(), ms_up.values()));
        worst = std::max(worst, max_rel(fuse_lcm(pan, ms_low, cfg).band.values(), ms_up.values()));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max relative error %.3g", worst);
    return {worst <= 1e-9, buf};
}

using Table = std::map<std::pair<std::string, int>, std::vector<double>>;

// CSV report -> (method, band) -> SD, En, SNR, NRMSE, DI, CC.
Table parse_report(const std::string& csv) {
    Table t;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        std::string method, band, cell;
        std::getline(cells, method, ',');
        std::getline(cells, band, ',');
        std::vector<double> v;
        while (std::getline(cells, cell, ',')) v.push_back(cell.empty() ? NAN : std::stod(cell));
        v.resize(6, NAN);
        t[{method, std::stoi(band)}] = v;
    }
    return t;
}

Outcome ordering() {
    const fs::path dir = clitest::fresh_dir("acceptance_order");
    auto r = clitest::run({"synth", STATFUSE_SCENE, "--ratio", "4", "--noise", "2", "--seed", "42", "--out-dir",
                           dir.string()});
    if (r.code != 0) return {false, "synth failed: " + r.log};
    r = clitest::run({"compare", (dir / "pan.pgm").string(), (dir / "ms.ppm").string(), "--ratio", "4",
                      "--out-dir", (dir / "out").string(), "--report", "-"});
    if (r.code != 0) return {false, "compare failed: " + r.log};
    const Table t = parse_report(r.out);
    enum { SNR = 2, NRMSE = 3, DI = 4, CC = 5 };
    std::string failed;
    for (int band = 1; band <= 3; ++band) {
        const auto& rvs = t.at({"RVS", band});
        for (const char* other : {"LMM", "LMVM", "LCM"}) {
            const auto& o = t.at({other, band});
            const bool ok = rvs[CC] > o[CC] && rvs[SNR] > o[SNR] && rvs[NRMSE] < o[NRMSE] && rvs[DI] < o[DI];
            if (!ok) failed += " " + std::string(other) + "/band" + std::to_string(band);
        }
    }
    const auto& rvs1 = t.at({"RVS", 1});
    char buf[200];
    std::snprintf(buf, sizeof buf, "ratio 4, noise 2, seed 42; RVS band 1 CC %.4f SNR %.4f NRMSE %.4f DI %.4f%s",
                  rvs1[CC], rvs1[SNR], rvs1[NRMSE], rvs1[DI], failed.empty() ? "" : (", not best vs" + failed).c_str());
    return {failed.empty(), buf};
}

Outcome round_trip() {
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int r : {1, 2, 4, 5}) {
        for (int t = 0; t < 10; ++t, ++checked) {
            const Band x = oracle::random_band(rng, 3 + t, 2 + t);
            if (!(degrade(upsample_nearest(x, ResolutionRatio(r)), ResolutionRatio(r)) == x))
                return {false, "mismatch at ratio " + std::to_string(r)};
        }
    }
    return {true, std::to_string(checked) + " bands exact for ratios 1,2,4,5"};
}

Outcome performance() {
    const ImageStack truth = make_scene(600, 525, 3);
    SynthOptions opt;
    opt.ratio = ResolutionRatio(5);
    const SynthPair pair = synthesize(truth, opt);
    std::string detail;
    bool ok = true;
    for (FusionMethod m : kAllMethods) {
        FusionConfig cfg;
        cfg.method = m;
        cfg.ratio = ResolutionRatio(5);
        const auto t0 = Clock::now();
        const auto fused = fuse_stack(pair.pan, pair.ms, cfg);
        const double s = seconds_since(t0);
        ok = ok && s < 2.0 && fused.size() == 3;
        char buf[48];
        std::snprintf(buf, sizeof buf, "%s %.3f s, ", to_string(m).c_str(), s);
        detail += buf;
    }
    const auto t0 = Clock::now();
    const Band mean = local_mean(pair.pan, WindowSpec::square(11));
    const double s = seconds_since(t0);
    ok = ok && s < 0.5 && mean.size() == pair.pan.size();
    char buf[48];
    std::snprintf(buf, sizeof buf, "local_mean 11x11 %.3f s", s);
    return {ok, detail + buf};
}

Outcome report_fidelity() {
    const fs::path golden = fs::path(STATFUSE_TEST_DATA_DIR) / "golden";
    const fs::path dir = clitest::fresh_dir("acceptance_report");
    const QualityReport full = reference_table::report();
    write_report(full, dir / "table.csv", ReportFormat::Csv);
    QualityReport pair;
    pair.rows = {full.rows[0], full.rows[9]};
    write_report(pair, dir / "pair.json", ReportFormat::Json);
    const bool csv_ok = read_file(dir / "table.csv") == read_file(golden / "reference_table.csv");
    const bool json_ok = read_file(dir / "pair.json") == read_file(golden / "origin_rvs.json");
    bool origin_ok = true;
    for (const ReportRow& row : full.rows) {
        if (row.method == kOriginLabel)
            origin_ok = origin_ok && row.sd && row.en && !row.snr && !row.nrmse && !row.di && !row.cc;
    }
    return {csv_ok && json_ok && origin_ok, std::string("csv ") + (csv_ok ? "matches" : "differs") + ", json " +
                                                (json_ok ? "matches" : "differs") +
                                                (origin_ok ? ", ORIGIN rows SD/En only" : ", ORIGIN rows malformed")};
}

Outcome determinism() {
    const fs::path dir = clitest::fresh_dir("acceptance_determinism");
    if (clitest::run({"synth", STATFUSE_SCENE, "--ratio", "4", "--noise", "2", "--seed", "42", "--out-dir",
                      dir.string()})
            .code != 0)
        return {false, "synth failed"};
    for (const char* run : {"a", "b"}) {
        const auto r = clitest::run({"compare", (dir / "pan.pgm").string(), (dir / "ms.ppm").string(), "--ratio",
                                     "4", "--out-dir", (dir / run).string()});
        if (r.code != 0) return {false, "compare failed: " + r.log};
    }
    int files = 0;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        const fs::path other = dir / "b" / entry.path().filename();
        if (!fs::exists(other) || read_file(entry.path()) != read_file(other))
            return {false, entry.path().filename().string() + " differs"};
        ++files;
    }
    return {files == 5, std::to_string(files) + " files byte-identical"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"oracle equivalence", oracle_equivalence},
        {"metric identities", metric_identities},
        {"exact linear recovery", linear_recovery},
        {"identity preservation", identity_preservation},
        {"method ordering on bundled scene", ordering},
        {"resampling round trip", round_trip},
        {"performance", performance},
        {"report fidelity", report_fidelity},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.ok ? 0 : 1;
        std::printf("[%s] %zu: %s (%s)\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
