#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "statfuse/band.hpp"
#include "statfuse/fusion.hpp"

namespace statfuse {

inline constexpr int kDefaultLevels = 256;

/// Counts of DN levels 0..levels-1. Samples are rounded half-up and
/// clamped into range before counting.
class Histogram {
public:
    Histogram(const Band& band, int levels = kDefaultLevels);

    int levels() const noexcept { return static_cast<int>(counts_.size()); }
    std::size_t total() const noexcept { return total_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    double probability(int level) const { return static_cast<double>(counts_.at(level)) / static_cast<double>(total_); }

private:
    std::vector<std::uint64_t> counts_;
    std::size_t total_ = 0;
};

/// Global population standard deviation of all samples.
double std_dev(const Band& band);

/// Shannon entropy in bits of the band's DN histogram.
double entropy(const Band& band, int levels = kDefaultLevels);

/// Pearson correlation. Throws DegenerateInput when either band is constant.
double correlation(const Band& fused, const Band& reference);

/// sqrt(sum F^2 / sum (F - M)^2). Throws DegenerateInput when F == M.
double snr(const Band& fused, const Band& reference);

/// sqrt(sum (F - M)^2 / (N * 255^2)).
double nrmse(const Band& fused, const Band& reference);

/// Mean of |F - M| / M over reference pixels above `floor`. Throws
/// DegenerateInput when no reference pixel is above it.
double deviation_index(const Band& fused, const Band& reference, double floor = 1e-12);

enum class Metric { SD, En, SNR, NRMSE, DI, CC };

inline constexpr Metric kReportColumns[] = {Metric::SD, Metric::En, Metric::SNR, Metric::NRMSE, Metric::DI, Metric::CC};

std::string to_string(Metric metric);

/// One line of a quality report. Absent values are metrics that were not
/// computed (ORIGIN rows) or that failed; failures are listed in `notes`.
struct ReportRow {
    std::string method;
    std::size_t band = 1;  // 1-based, as printed
    std::optional<double> sd;
    std::optional<double> en;
    std::optional<double> snr;
    std::optional<double> nrmse;
    std::optional<double> di;
    std::optional<double> cc;
    std::vector<std::string> notes;

    std::optional<double> get(Metric metric) const;
};

struct QualityReport {
    std::vector<ReportRow> rows;

    /// Row for (method, 1-based band), or nullptr.
    const ReportRow* find(const std::string& method, std::size_t band) const;
};

inline const std::string kOriginLabel = "ORIGIN";

/// Scores fused bands against a reference MS stack.
///
/// The reference is nearest-neighbour upsampled to the fused grid. The
/// report starts with one ORIGIN row per reference band (SD and En only),
/// followed by one row per fused band in input order. Fused bands may come
/// from several methods; each is matched to the reference band named by
/// its source_band. A metric that fails leaves its cell empty and records
/// why in the row's notes.
QualityReport evaluate_stack(std::span<const FusedBand> fused, const ImageStack& reference,
                             int levels = kDefaultLevels);

/// Scores every band of `fused` against the same-index reference band under
/// one row label. ORIGIN rows are prepended only when requested. Throws
/// ShapeError when the band counts differ.
QualityReport evaluate_bands(const ImageStack& fused, const ImageStack& reference, const std::string& label,
                             int levels = kDefaultLevels, bool include_origin = false);

}  // namespace statfuse
