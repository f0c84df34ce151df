#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <optional>

#include "statfuse/errors.hpp"
#include "statfuse/fusion.hpp"
#include "statfuse/io.hpp"
#include "statfuse/metrics.hpp"
#include "statfuse/raster.hpp"
#include "statfuse/synth.hpp"
#include "statfuse/window_stats.hpp"

namespace py = pybind11;
using namespace statfuse;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Band to_band(const Array& a, int bit_depth = 8) {
    if (a.ndim() != 2) {
        throw std::invalid_argument("expected a 2-D array (height, width)");
    }
    const auto h = static_cast<std::size_t>(a.shape(0));
    const auto w = static_cast<std::size_t>(a.shape(1));
    std::vector<double> data(a.data(), a.data() + w * h);
    return Band(w, h, std::move(data), bit_depth);
}

Array to_array(const Band& b) {
    Array out({b.height(), b.width()});
    std::memcpy(out.mutable_data(), b.values().data(), b.size() * sizeof(double));
    return out;
}

ImageStack to_stack(const Array& a) {
    if (a.ndim() == 2) {
        return ImageStack({to_band(a)});
    }
    if (a.ndim() != 3) {
        throw std::invalid_argument("expected a (bands, height, width) array");
    }
    std::vector<Band> bands;
    for (py::ssize_t k = 0; k < a.shape(0); ++k) {
        bands.push_back(to_band(Array(a[py::make_tuple(k, py::ellipsis())])));
    }
    return ImageStack(std::move(bands));
}

Array to_array(const ImageStack& s) {
    Array out({s.band_count(), s.height(), s.width()});
    for (std::size_t k = 0; k < s.band_count(); ++k) {
        std::memcpy(out.mutable_data() + k * s.width() * s.height(), s[k].values().data(),
                    s[k].size() * sizeof(double));
    }
    return out;
}

WindowSpec window(int w, std::optional<int> h, double eps) { return WindowSpec(w, h.value_or(w), eps); }

FusionConfig make_config(const std::string& method, int ratio, std::optional<int> win, double eps,
                         std::optional<std::pair<double, double>> clamp) {
    FusionConfig cfg;
    auto m = parse_method(method);
    if (!m) {
        throw std::invalid_argument("unknown method " + method);
    }
    cfg.method = *m;
    cfg.ratio = ResolutionRatio(ratio);
    if (win) {
        cfg.window_lmm = cfg.window_lmvm = cfg.window_rvs = cfg.window_lcm = WindowSpec::square(*win);
    }
    cfg.set_epsilon(eps);
    if (clamp) {
        cfg.clamp = ClampRange{clamp->first, clamp->second};
    }
    return cfg;
}

py::list report_rows(const QualityReport& report) {
    py::list rows;
    for (const ReportRow& r : report.rows) {
        py::dict d;
        d["method"] = r.method;
        d["band"] = r.band;
        for (Metric m : kReportColumns) {
            auto v = r.get(m);
            d[to_string(m).c_str()] = v ? py::cast(*v) : py::none();
        }
        d["notes"] = r.notes;
        rows.append(d);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Statistical pan-sharpening (LMM, LMVM, RVS, LCM) and fusion quality metrics";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ArithmeticError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<IOError>(m, "IOError", PyExc_OSError);

    m.def("upsample_nearest", [](const Array& a, int f) {
        if (a.ndim() == 3) return to_array(upsample_nearest(to_stack(a), ResolutionRatio(f)));
        return to_array(upsample_nearest(to_band(a), ResolutionRatio(f)));
    }, py::arg("image"), py::arg("factor"));
    m.def("degrade", [](const Array& a, int f) {
        if (a.ndim() == 3) return to_array(degrade(to_stack(a), ResolutionRatio(f)));
        return to_array(degrade(to_band(a), ResolutionRatio(f)));
    }, py::arg("image"), py::arg("factor"));

    m.def("local_mean", [](const Array& a, int w, std::optional<int> h) {
        return to_array(local_mean(to_band(a), window(w, h, kDefaultEpsilon)));
    }, py::arg("band"), py::arg("width"), py::arg("height") = py::none());
    m.def("local_std", [](const Array& a, int w, std::optional<int> h) {
        return to_array(local_std(to_band(a), window(w, h, kDefaultEpsilon)));
    }, py::arg("band"), py::arg("width"), py::arg("height") = py::none());
    m.def("local_cov", [](const Array& a, const Array& b, int w, std::optional<int> h) {
        return to_array(local_cov(to_band(a), to_band(b), window(w, h, kDefaultEpsilon)));
    }, py::arg("a"), py::arg("b"), py::arg("width"), py::arg("height") = py::none());
    m.def("local_regression", [](const Array& ms, const Array& pan, int w, std::optional<int> h, double eps) {
        const LocalFit fit = local_regression(to_band(ms), to_band(pan), window(w, h, eps));
        return py::make_tuple(to_array(fit.slope), to_array(fit.intercept));
    }, py::arg("ms"), py::arg("pan"), py::arg("width"), py::arg("height") = py::none(),
       py::arg("epsilon") = kDefaultEpsilon,
       "Per-window least-squares fit ms ~ intercept + slope * pan; returns (slope, intercept).");

    m.def("fuse", [](const Array& pan, const Array& ms, const std::string& method, int ratio,
                     std::optional<int> win, double eps, std::optional<std::pair<double, double>> clamp) {
        const FusionConfig cfg = make_config(method, ratio, win, eps, clamp);
        return to_array(fuse(to_band(pan), to_band(ms), cfg).band);
    }, py::arg("pan"), py::arg("ms"), py::arg("method"), py::arg("ratio") = 1, py::arg("window") = py::none(),
       py::arg("epsilon") = kDefaultEpsilon, py::arg("clamp") = py::none(),
       "Fuse one band. LMM/LMVM/RVS expect ms on the PAN grid; LCM expects the low-resolution band.");

    m.def("fuse_stack", [](const Array& pan, const Array& ms, const std::string& method, int ratio,
                           std::optional<int> win, double eps, std::optional<std::pair<double, double>> clamp) {
        const FusionConfig cfg = make_config(method, ratio, win, eps, clamp);
        std::vector<Band> bands;
        for (FusedBand& f : fuse_stack(to_band(pan), to_stack(ms), cfg)) {
            bands.push_back(std::move(f.band));
        }
        return to_array(ImageStack(std::move(bands)));
    }, py::arg("pan"), py::arg("ms"), py::arg("method"), py::arg("ratio") = 1, py::arg("window") = py::none(),
       py::arg("epsilon") = kDefaultEpsilon, py::arg("clamp") = py::none());

    m.def("std_dev", [](const Array& a) { return std_dev(to_band(a)); }, py::arg("band"));
    m.def("entropy", [](const Array& a, int levels) { return entropy(to_band(a), levels); }, py::arg("band"),
          py::arg("levels") = kDefaultLevels);
    m.def("correlation", [](const Array& f, const Array& r) { return correlation(to_band(f), to_band(r)); },
          py::arg("fused"), py::arg("reference"));
    m.def("snr", [](const Array& f, const Array& r) { return snr(to_band(f), to_band(r)); }, py::arg("fused"),
          py::arg("reference"));
    m.def("nrmse", [](const Array& f, const Array& r) { return nrmse(to_band(f), to_band(r)); }, py::arg("fused"),
          py::arg("reference"));
    m.def("deviation_index", [](const Array& f, const Array& r) { return deviation_index(to_band(f), to_band(r)); },
          py::arg("fused"), py::arg("reference"));

    m.def("evaluate", [](const Array& fused, const Array& reference, const std::string& label, int levels,
                         bool origin) {
        return report_rows(evaluate_bands(to_stack(fused), to_stack(reference), label, levels, origin));
    }, py::arg("fused"), py::arg("reference"), py::arg("label") = "FUSED", py::arg("levels") = kDefaultLevels,
       py::arg("origin") = false);

    m.def("read_image", [](const std::filesystem::path& p) { return to_array(read_image(p)); }, py::arg("path"));
    m.def("write_image", [](const Array& a, const std::filesystem::path& p, int maxval) {
        write_image(to_stack(a), p, maxval);
    }, py::arg("image"), py::arg("path"), py::arg("maxval") = 255);

    m.def("make_scene", [](std::size_t w, std::size_t h, std::uint64_t seed) { return to_array(make_scene(w, h, seed)); },
          py::arg("width"), py::arg("height"), py::arg("seed") = 1);
}
