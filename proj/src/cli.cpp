#include "statfuse/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "statfuse/errors.hpp"
#include "statfuse/raster.hpp"
#include "statfuse/synth.hpp"

namespace statfuse::cli {

namespace fs = std::filesystem;

WindowSpec parse_window(const std::string& text, double epsilon) {
    const auto x = text.find_first_of("xX");
    try {
        std::size_t used = 0;
        const int w = std::stoi(text.substr(0, x), &used);
        if (used != (x == std::string::npos ? text.size() : x)) {
            throw std::invalid_argument(text);
        }
        int h = w;
        if (x != std::string::npos) {
            const std::string rest = text.substr(x + 1);
            h = std::stoi(rest, &used);
            if (used != rest.size()) {
                throw std::invalid_argument(text);
            }
        }
        return WindowSpec(w, h, epsilon);
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("bad window '" + text + "'");
    } catch (const std::invalid_argument& e) {
        if (std::string(e.what()).starts_with("window")) {
            throw;
        }
        throw std::invalid_argument("bad window '" + text + "', expected WxH");
    }
}

double default_epsilon() {
    if (const char* env = std::getenv("STATFUSE_EPSILON")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && v >= 0.0 && std::isfinite(v)) {
            return v;
        }
    }
    return kDefaultEpsilon;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string lower(std::string s) {
    for (char& c : s) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
}

std::string image_extension(std::size_t bands) { return bands == 1 ? ".pgm" : ".ppm"; }

int max_for_depth(int bit_depth) { return (1 << bit_depth) - 1; }

struct Inputs {
    Band pan;
    ImageStack ms;
    int ms_maxval;
};

Inputs load_pair(const RunManifest& run) {
    ImageFileHeader pan_header{};
    ImageFileHeader ms_header{};
    ImageStack pan = read_image(run.inputs.at(0), &pan_header);
    ImageStack ms = read_image(run.inputs.at(1), &ms_header);
    if (pan.band_count() != 1) {
        throw ShapeError(run.inputs.at(0).string() + ": PAN must be a single-band PGM");
    }
    if (auto verdict = check_alignment(pan[0], ms, run.config.ratio); !verdict) {
        throw DimensionError(verdict.message);
    }
    return {pan[0], std::move(ms), ms_header.maxval};
}

FusionConfig config_for(const RunManifest& run, FusionMethod method, int bit_depth) {
    FusionConfig cfg = run.config;
    cfg.method = method;
    if (!cfg.clamp && run.clamp_to_bit_depth) {
        cfg.clamp = ClampRange{0.0, static_cast<double>(max_for_depth(bit_depth))};
    }
    return cfg;
}

// Fuses each band separately so per-band timings can be logged.
std::vector<FusedBand> fuse_timed(const Inputs& in, const FusionConfig& cfg, std::ostream& log) {
    std::vector<FusedBand> out;
    for (std::size_t k = 0; k < in.ms.band_count(); ++k) {
        const auto t0 = Clock::now();
        if (cfg.method == FusionMethod::LCM) {
            out.push_back(fuse_lcm(in.pan, in.ms[k], cfg, k));
        } else {
            out.push_back(fuse(in.pan, upsample_nearest(in.ms[k], cfg.ratio), cfg, k));
        }
        log << to_string(cfg.method) << " band " << (k + 1) << ": " << ms_since(t0) << " ms\n";
    }
    return out;
}

ImageStack to_stack(const std::vector<FusedBand>& fused) {
    std::vector<Band> bands;
    bands.reserve(fused.size());
    for (const FusedBand& f : fused) {
        bands.push_back(f.band);
    }
    return ImageStack(std::move(bands));
}

void emit_report(const QualityReport& report, const RunManifest& run, const fs::path& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << format_report(report, run.format);
    } else {
        write_report(report, path, run.format);
    }
}

}  // namespace

int cmd_fuse(const RunManifest& run, std::ostream&, std::ostream& log) {
    const Inputs in = load_pair(run);
    const FusionMethod method = run.methods.empty() ? run.config.method : run.methods.front();
    const FusionConfig cfg = config_for(run, method, in.ms[0].bit_depth());
    const auto fused = fuse_timed(in, cfg, log);
    fs::path output = run.output;
    if (output.empty()) {
        output = "fused_" + lower(to_string(method)) + image_extension(fused.size());
    }
    write_image(to_stack(fused), output, in.ms_maxval);
    log << "wrote " << output.string() << "\n";
    return kOk;
}

int cmd_evaluate(const RunManifest& run, std::ostream& out, std::ostream& log) {
    const ImageStack fused = read_image(run.inputs.at(0));
    const ImageStack reference = read_image(run.inputs.at(1));
    const QualityReport report =
        evaluate_bands(fused, reference, run.label.empty() ? "FUSED" : run.label, run.levels, run.include_origin);
    for (const ReportRow& row : report.rows) {
        for (const std::string& note : row.notes) {
            log << row.method << " band " << row.band << ": " << note << "\n";
        }
    }
    emit_report(report, run, run.output, out);
    return kOk;
}

int cmd_compare(const RunManifest& run, std::ostream& out, std::ostream& log) {
    const Inputs in = load_pair(run);
    std::optional<ImageStack> truth;
    if (run.truth) {
        truth = read_image(*run.truth);
    }
    const ImageStack& reference = truth ? *truth : in.ms;
    const std::vector<FusionMethod> methods =
        run.methods.empty() ? std::vector<FusionMethod>(std::begin(kAllMethods), std::end(kAllMethods)) : run.methods;

    if (!run.out_dir.empty()) {
        fs::create_directories(run.out_dir);
    }
    std::vector<FusedBand> all;
    std::vector<std::pair<FusionMethod, std::string>> failures;
    for (FusionMethod m : methods) {
        try {
            const FusionConfig cfg = config_for(run, m, in.ms[0].bit_depth());
            auto fused = fuse_timed(in, cfg, log);
            const fs::path img = run.out_dir / ("fused_" + lower(to_string(m)) + image_extension(fused.size()));
            write_image(to_stack(fused), img, in.ms_maxval);
            log << "wrote " << img.string() << "\n";
            all.insert(all.end(), fused.begin(), fused.end());
        } catch (const IOError&) {
            throw;
        } catch (const std::exception& e) {
            log << to_string(m) << " failed: " << e.what() << "\n";
            failures.emplace_back(m, e.what());
        }
    }

    QualityReport report = evaluate_stack(all, reference, run.levels);
    // Failed methods keep their place in method order as empty rows.
    for (const auto& [m, why] : failures) {
        for (std::size_t k = 0; k < in.ms.band_count(); ++k) {
            ReportRow row;
            row.method = to_string(m);
            row.band = k + 1;
            row.notes.push_back("fusion failed: " + why);
            report.rows.push_back(std::move(row));
        }
    }
    std::stable_sort(report.rows.begin(), report.rows.end(), [&](const ReportRow& a, const ReportRow& b) {
        auto rank = [&](const std::string& label) -> std::size_t {
            if (label == kOriginLabel) {
                return 0;
            }
            for (std::size_t i = 0; i < methods.size(); ++i) {
                if (to_string(methods[i]) == label) {
                    return i + 1;
                }
            }
            return methods.size() + 1;
        };
        return rank(a.method) < rank(b.method);
    });

    fs::path report_path = run.output;
    if (report_path.empty()) {
        report_path = run.out_dir / (run.format == ReportFormat::Csv ? "report.csv" : "report.json");
    }
    emit_report(report, run, report_path, out);
    if (report_path != "-") {
        log << "wrote " << report_path.string() << "\n";
    }
    return failures.empty() ? kOk : kNumeric;
}

int cmd_synth(const RunManifest& run, std::ostream&, std::ostream& log) {
    const ImageStack reference = read_image(run.inputs.at(0));
    SynthOptions opt;
    opt.ratio = run.config.ratio;
    opt.seed = run.seed;
    opt.noise_sigma = run.noise;
    if (!run.weights.empty()) {
        if (run.weights.size() != 3) {
            throw std::invalid_argument("--weights needs exactly three values");
        }
        opt.pan_weights = {run.weights[0], run.weights[1], run.weights[2]};
    }
    const SynthPair pair = synthesize(reference, opt);
    if (!run.out_dir.empty()) {
        fs::create_directories(run.out_dir);
    }
    const int ref_max = max_for_depth(reference[0].bit_depth());
    write_image(ImageStack({pair.pan}), run.out_dir / "pan.pgm", run.pan_maxval);
    write_image(pair.ms, run.out_dir / "ms.ppm", ref_max);
    write_image(pair.truth, run.out_dir / "truth.ppm", ref_max);
    log << "wrote pan.pgm (" << pair.pan.width() << "x" << pair.pan.height() << "), ms.ppm (" << pair.ms.width()
        << "x" << pair.ms.height() << "), truth.ppm to " << (run.out_dir.empty() ? "." : run.out_dir.string())
        << "\n";
    return kOk;
}

int cmd_scene(const RunManifest& run, std::ostream&, std::ostream& log) {
    const ImageStack scene = make_scene(run.scene_width, run.scene_height, run.seed);
    const fs::path output = run.output.empty() ? fs::path("scene.ppm") : run.output;
    write_image(scene, output, 255);
    log << "wrote " << output.string() << "\n";
    return kOk;
}

namespace {

struct ParsedFlags {
    std::string method = "rvs";
    std::string methods;
    std::string window;
    std::string window_lmm;
    std::string window_lmvm;
    std::string window_rvs;
    std::string window_lcm;
    std::vector<double> clamp;
    std::string format = "csv";
};

void add_fusion_flags(CLI::App* sub, RunManifest& run, ParsedFlags& flags, std::optional<double>& epsilon,
                      int& ratio) {
    sub->add_option("--ratio", ratio, "Integer PAN/MS resolution ratio")->check(CLI::PositiveNumber);
    sub->add_option("--window", flags.window, "Window WxH for every method");
    sub->add_option("--window-lmm", flags.window_lmm, "LMM window (default 11x11)");
    sub->add_option("--window-lmvm", flags.window_lmvm, "LMVM window (default 11x11)");
    sub->add_option("--window-rvs", flags.window_rvs, "RVS window (default 5x5)");
    sub->add_option("--window-lcm", flags.window_lcm, "LCM window (default 11x11)");
    sub->add_option("--epsilon", epsilon, "Degeneracy threshold in DN^2 (env STATFUSE_EPSILON)");
    sub->add_option("--clamp", flags.clamp, "Clamp fused values to LO,HI")->expected(2)->delimiter(',');
    sub->add_flag("!--no-clamp", run.clamp_to_bit_depth, "Do not clamp fused values to the MS bit depth");
}

void finish_fusion_flags(RunManifest& run, const ParsedFlags& flags, std::optional<double> epsilon, int ratio) {
    const double eps = epsilon.value_or(default_epsilon());
    if (eps < 0.0 || !std::isfinite(eps)) {
        throw std::invalid_argument("--epsilon must be finite and non-negative");
    }
    FusionConfig& cfg = run.config;
    cfg.ratio = ResolutionRatio(ratio);
    cfg.set_epsilon(eps);
    if (!flags.window.empty()) {
        const WindowSpec w = parse_window(flags.window, eps);
        cfg.window_lmm = cfg.window_lmvm = cfg.window_rvs = cfg.window_lcm = w;
    }
    if (!flags.window_lmm.empty()) cfg.window_lmm = parse_window(flags.window_lmm, eps);
    if (!flags.window_lmvm.empty()) cfg.window_lmvm = parse_window(flags.window_lmvm, eps);
    if (!flags.window_rvs.empty()) cfg.window_rvs = parse_window(flags.window_rvs, eps);
    if (!flags.window_lcm.empty()) cfg.window_lcm = parse_window(flags.window_lcm, eps);
    if (!flags.clamp.empty()) {
        if (flags.clamp.size() != 2 || !(flags.clamp[0] <= flags.clamp[1])) {
            throw std::invalid_argument("--clamp needs LO,HI with LO <= HI");
        }
        cfg.clamp = ClampRange{flags.clamp[0], flags.clamp[1]};
    }
}

FusionMethod require_method(const std::string& name) {
    if (auto m = parse_method(name)) {
        return *m;
    }
    throw std::invalid_argument("unknown method '" + name + "' (expected lmm, lmvm, rvs or lcm)");
}

ReportFormat require_format(const std::string& name) {
    const std::string f = lower(name);
    if (f == "csv") return ReportFormat::Csv;
    if (f == "json") return ReportFormat::Json;
    throw std::invalid_argument("unknown report format '" + name + "' (expected csv or json)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log) {
    CLI::App app{"Statistical pan-sharpening: LMM, LMVM, RVS and LCM fusion with quality metrics", "statfuse"};
    app.require_subcommand(1);

    RunManifest run;
    ParsedFlags flags;
    std::optional<double> epsilon;
    int ratio = 1;
    std::string pan_path, ms_path, a_path, b_path, truth_path;

    auto* fuse = app.add_subcommand("fuse", "Fuse a PAN band with an MS image");
    fuse->add_option("pan", pan_path, "PAN image (PGM)")->required();
    fuse->add_option("ms", ms_path, "MS image (PGM/PPM) at PAN size / ratio")->required();
    fuse->add_option("--method", flags.method, "lmm | lmvm | rvs | lcm");
    fuse->add_option("-o,--output", run.output, "Fused image path");
    add_fusion_flags(fuse, run, flags, epsilon, ratio);

    auto* evaluate = app.add_subcommand("evaluate", "Score a fused image against a reference");
    evaluate->add_option("fused", a_path, "Fused image")->required();
    evaluate->add_option("reference", b_path, "Reference MS image (upsampled when smaller)")->required();
    evaluate->add_option("--label", run.label, "Method label for the report rows");
    evaluate->add_flag("--origin", run.include_origin, "Prepend ORIGIN rows for the reference");
    evaluate->add_option("--levels", run.levels, "Entropy histogram levels")->check(CLI::Range(2, 1 << 20));
    evaluate->add_option("--format", flags.format, "csv | json");
    evaluate->add_option("-o,--output", run.output, "Report path (default stdout)");

    auto* compare = app.add_subcommand("compare", "Run all methods and write a combined report");
    compare->add_option("pan", pan_path, "PAN image (PGM)")->required();
    compare->add_option("ms", ms_path, "MS image (PGM/PPM)")->required();
    compare->add_option("--methods", flags.methods, "Comma-separated subset of lmm,lmvm,rvs,lcm");
    compare->add_option("--truth", truth_path, "Score against this full-resolution image instead of the MS");
    compare->add_option("--levels", run.levels, "Entropy histogram levels")->check(CLI::Range(2, 1 << 20));
    compare->add_option("--format", flags.format, "csv | json");
    compare->add_option("--out-dir", run.out_dir, "Directory for fused images and the report");
    compare->add_option("--report", run.output, "Report path (default OUT_DIR/report.csv, '-' for stdout)");
    add_fusion_flags(compare, run, flags, epsilon, ratio);

    int synth_ratio = 4;
    auto* synth = app.add_subcommand("synth", "Simulate a PAN/MS pair from a 3-band reference");
    synth->add_option("reference", a_path, "3-band reference image (PPM)")->required();
    synth->add_option("--ratio", synth_ratio, "Degradation ratio")->check(CLI::PositiveNumber);
    synth->add_option("--seed", run.seed, "Noise seed");
    synth->add_option("--noise", run.noise, "PAN noise standard deviation (DN)")->check(CLI::NonNegativeNumber);
    synth->add_option("--weights", run.weights, "PAN weights R,G,B (default 1/3 each)")->delimiter(',');
    synth->add_option("--pan-maxval", run.pan_maxval, "PAN file maxval")->check(CLI::Range(1, 65535));
    synth->add_option("--out-dir", run.out_dir, "Output directory");

    std::size_t scene_w = 240;
    std::size_t scene_h = 240;
    auto* scene = app.add_subcommand("scene", "Write the procedural 3-band test scene");
    scene->add_option("--width", scene_w, "Width")->check(CLI::PositiveNumber);
    scene->add_option("--height", scene_h, "Height")->check(CLI::PositiveNumber);
    scene->add_option("--seed", run.seed, "Scene seed");
    scene->add_option("-o,--output", run.output, "Output PPM");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, log);
        return code == 0 ? kOk : kUsageOrIo;
    }

    try {
        run.format = require_format(flags.format);
        if (fuse->parsed() || compare->parsed()) {
            run.subcommand = fuse->parsed() ? "fuse" : "compare";
            run.inputs = {pan_path, ms_path};
            finish_fusion_flags(run, flags, epsilon, ratio);
            if (fuse->parsed()) {
                run.config.method = require_method(flags.method);
                run.methods = {run.config.method};
                return cmd_fuse(run, out, log);
            }
            if (!flags.methods.empty()) {
                std::stringstream ss(flags.methods);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    run.methods.push_back(require_method(item));
                }
            }
            if (!truth_path.empty()) {
                run.truth = truth_path;
            }
            return cmd_compare(run, out, log);
        }
        if (evaluate->parsed()) {
            run.subcommand = "evaluate";
            run.inputs = {a_path, b_path};
            return cmd_evaluate(run, out, log);
        }
        if (synth->parsed()) {
            run.subcommand = "synth";
            run.inputs = {a_path};
            run.config.ratio = ResolutionRatio(synth_ratio);
            return cmd_synth(run, out, log);
        }
        run.subcommand = "scene";
        run.scene_width = scene_w;
        run.scene_height = scene_h;
        return cmd_scene(run, out, log);
    } catch (const DegenerateInput& e) {
        log << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const NumericError& e) {
        log << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kUsageOrIo;
    }
}

}  // namespace statfuse::cli
