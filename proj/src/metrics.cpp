#include "statfuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "statfuse/errors.hpp"
#include "statfuse/raster.hpp"

namespace statfuse {

namespace {

void require_same_shape(const Band& f, const Band& m, const char* metric) {
    if (!f.same_shape(m)) {
        throw DimensionError(std::string(metric) + ": fused and reference bands differ in shape");
    }
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double squared_error(const Band& f, const Band& m) {
    double s = 0.0;
    const auto fv = f.values();
    const auto mv = m.values();
    for (std::size_t i = 0; i < fv.size(); ++i) {
        const double d = fv[i] - mv[i];
        s += d * d;
    }
    return s;
}

}  // namespace

Histogram::Histogram(const Band& band, int levels) {
    if (levels < 2) {
        throw std::invalid_argument("histogram needs at least 2 levels");
    }
    counts_.assign(static_cast<std::size_t>(levels), 0);
    const double top = levels - 1;
    for (double v : band.values()) {
        const double q = std::clamp(std::floor(v + 0.5), 0.0, top);
        ++counts_[static_cast<std::size_t>(q)];
    }
    total_ = band.size();
}

double std_dev(const Band& band) {
    const auto v = band.values();
    const double mu = mean_of(v);
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mu) * (x - mu);
    }
    return std::sqrt(ss / static_cast<double>(v.size()));
}

double entropy(const Band& band, int levels) {
    const Histogram h(band, levels);
    const double n = static_cast<double>(h.total());
    double en = 0.0;
    for (std::uint64_t c : h.counts()) {
        if (c == 0) {
            continue;
        }
        const double p = static_cast<double>(c) / n;
        en -= p * std::log2(p);
    }
    return en <= 0.0 ? 0.0 : en;
}

double correlation(const Band& fused, const Band& reference) {
    require_same_shape(fused, reference, "CC");
    const auto f = fused.values();
    const auto m = reference.values();
    const double fm = mean_of(f);
    const double mm = mean_of(m);
    double sfm = 0.0;
    double sff = 0.0;
    double smm = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double df = f[i] - fm;
        const double dm = m[i] - mm;
        sfm += df * dm;
        sff += df * df;
        smm += dm * dm;
    }
    if (sff == 0.0 || smm == 0.0) {
        throw DegenerateInput("CC undefined: a band is constant");
    }
    return std::clamp(sfm / (std::sqrt(sff) * std::sqrt(smm)), -1.0, 1.0);
}

double snr(const Band& fused, const Band& reference) {
    require_same_shape(fused, reference, "SNR");
    const double err = squared_error(fused, reference);
    if (err == 0.0) {
        throw DegenerateInput("SNR undefined: fused band equals reference");
    }
    double energy = 0.0;
    for (double v : fused.values()) {
        energy += v * v;
    }
    return std::sqrt(energy / err);
}

double nrmse(const Band& fused, const Band& reference) {
    require_same_shape(fused, reference, "NRMSE");
    const double n = static_cast<double>(fused.size());
    return std::sqrt(squared_error(fused, reference) / (n * 255.0 * 255.0));
}

double deviation_index(const Band& fused, const Band& reference, double floor) {
    require_same_shape(fused, reference, "DI");
    const auto f = fused.values();
    const auto m = reference.values();
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (m[i] > floor) {
            sum += std::abs(f[i] - m[i]) / m[i];
            ++used;
        }
    }
    if (used == 0) {
        throw DegenerateInput("DI undefined: no reference pixel above zero");
    }
    return sum / static_cast<double>(used);
}

std::string to_string(Metric metric) {
    switch (metric) {
        case Metric::SD: return "SD";
        case Metric::En: return "En";
        case Metric::SNR: return "SNR";
        case Metric::NRMSE: return "NRMSE";
        case Metric::DI: return "DI";
        case Metric::CC: return "CC";
    }
    return "?";
}

std::optional<double> ReportRow::get(Metric metric) const {
    switch (metric) {
        case Metric::SD: return sd;
        case Metric::En: return en;
        case Metric::SNR: return snr;
        case Metric::NRMSE: return nrmse;
        case Metric::DI: return di;
        case Metric::CC: return cc;
    }
    return std::nullopt;
}

const ReportRow* QualityReport::find(const std::string& method, std::size_t band) const {
    for (const ReportRow& r : rows) {
        if (r.method == method && r.band == band) {
            return &r;
        }
    }
    return nullptr;
}

namespace {

template <typename Fn>
std::optional<double> guarded(ReportRow& row, Metric metric, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        row.notes.push_back(to_string(metric) + ": " + e.what());
        return std::nullopt;
    }
}

}  // namespace

namespace {

void append_origin_rows(QualityReport& report, const ImageStack& reference, int levels) {
    for (std::size_t k = 0; k < reference.band_count(); ++k) {
        ReportRow row;
        row.method = kOriginLabel;
        row.band = k + 1;
        row.sd = std_dev(reference[k]);
        row.en = entropy(reference[k], levels);
        report.rows.push_back(std::move(row));
    }
}

// Caches the reference resampled onto the grid of the band being scored.
class ReferenceGrid {
public:
    explicit ReferenceGrid(const ImageStack& reference) : reference_(reference) {}

    // nullptr when the fused grid is not an integer multiple of the reference.
    const ImageStack* on_grid_of(const Band& fused) {
        const std::size_t f = fused.width() / reference_.width();
        if (f == 0 || fused.width() != reference_.width() * f || fused.height() != reference_.height() * f) {
            return nullptr;
        }
        if (!cached_ || cached_->width() != fused.width()) {
            cached_ = upsample_nearest(reference_, ResolutionRatio(static_cast<int>(f)));
        }
        return &*cached_;
    }

private:
    const ImageStack& reference_;
    std::optional<ImageStack> cached_;
};

ReportRow score_band(std::string label, const Band& f, std::size_t source_band, ReferenceGrid& grid,
                     std::size_t reference_bands, int levels) {
    ReportRow row;
    row.method = std::move(label);
    row.band = source_band + 1;
    if (source_band >= reference_bands) {
        row.notes.push_back("no reference band " + std::to_string(source_band + 1));
        return row;
    }
    const ImageStack* ref = grid.on_grid_of(f);
    if (ref == nullptr) {
        row.notes.push_back("fused band " + std::to_string(f.width()) + "x" + std::to_string(f.height()) +
                            " is not an integer multiple of the reference grid");
        return row;
    }
    const Band& m = (*ref)[source_band];
    row.sd = std_dev(f);
    row.en = entropy(f, levels);
    row.snr = guarded(row, Metric::SNR, [&] { return snr(f, m); });
    row.nrmse = guarded(row, Metric::NRMSE, [&] { return nrmse(f, m); });
    row.di = guarded(row, Metric::DI, [&] { return deviation_index(f, m); });
    row.cc = guarded(row, Metric::CC, [&] { return correlation(f, m); });
    return row;
}

}  // namespace

QualityReport evaluate_stack(std::span<const FusedBand> fused, const ImageStack& reference, int levels) {
    QualityReport report;
    append_origin_rows(report, reference, levels);
    ReferenceGrid grid(reference);
    for (const FusedBand& fb : fused) {
        report.rows.push_back(
            score_band(to_string(fb.method), fb.band, fb.source_band, grid, reference.band_count(), levels));
    }
    return report;
}

QualityReport evaluate_bands(const ImageStack& fused, const ImageStack& reference, const std::string& label,
                             int levels, bool include_origin) {
    if (fused.band_count() != reference.band_count()) {
        throw ShapeError("fused image has " + std::to_string(fused.band_count()) + " bands, reference has " +
                         std::to_string(reference.band_count()));
    }
    QualityReport report;
    if (include_origin) {
        append_origin_rows(report, reference, levels);
    }
    ReferenceGrid grid(reference);
    for (std::size_t k = 0; k < fused.band_count(); ++k) {
        report.rows.push_back(score_band(label, fused[k], k, grid, reference.band_count(), levels));
    }
    return report;
}

}  // namespace statfuse
