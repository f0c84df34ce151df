#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "statfuse/band.hpp"
#include "statfuse/raster.hpp"
#include "statfuse/window_stats.hpp"

namespace statfuse {

enum class FusionMethod { LMM, LMVM, RVS, LCM };

inline constexpr FusionMethod kAllMethods[] = {FusionMethod::LMM, FusionMethod::LMVM, FusionMethod::RVS,
                                               FusionMethod::LCM};

/// Upper-case label used in reports ("LMM", "LMVM", ...).
std::string to_string(FusionMethod method);

/// Case-insensitive parse; returns nullopt for unknown names.
std::optional<FusionMethod> parse_method(std::string_view name);

struct FusionConfig {
    FusionMethod method = FusionMethod::RVS;
    WindowSpec window_lmm = WindowSpec::square(11);
    WindowSpec window_lmvm = WindowSpec::square(11);
    WindowSpec window_rvs = WindowSpec::square(5);
    WindowSpec window_lcm = WindowSpec::square(11);
    ResolutionRatio ratio{1};
    std::optional<ClampRange> clamp;

    const WindowSpec& window_for(FusionMethod m) const;

    /// Applies one degeneracy threshold to every method window.
    void set_epsilon(double epsilon);
};

struct FusedBand {
    Band band;
    FusionMethod method;
    std::size_t source_band = 0;
};

/// Local mean matching: F = P * mean(M) / mean(P) over window_lmm.
/// `ms` must already be on the PAN grid. Where |mean(P)| <= epsilon the
/// output is mean(M).
FusedBand fuse_lmm(const Band& pan, const Band& ms, const FusionConfig& cfg, std::size_t source_band = 0);

/// Local mean and variance matching over window_lmvm:
/// F = (P - mean(P)) * std(M) / std(P) + mean(M), falling back to mean(M)
/// where var(P) <= epsilon.
FusedBand fuse_lmvm(const Band& pan, const Band& ms, const FusionConfig& cfg, std::size_t source_band = 0);

/// Regression variable substitution: F = intercept + slope * P with the
/// line fitted per window_rvs window between P and the resampled MS band.
FusedBand fuse_rvs(const Band& pan, const Band& ms, const FusionConfig& cfg, std::size_t source_band = 0);

/// Coefficients of the low-resolution local model used by LCM. All planes
/// live on the MS grid.
struct LcmModel {
    Band pan_low;
    Band slope;
    Band intercept;
    Band residual;
};

/// Degrades PAN to the MS grid and fits ms_low ~ intercept + slope * pan_low
/// over window_lcm, keeping the per-pixel residual.
LcmModel lcm_model(const Band& pan, const Band& ms_low, const FusionConfig& cfg);

/// Local correlation modelling. The low-resolution model from lcm_model is
/// applied to the full-resolution PAN, each MS pixel's coefficients and
/// residual covering its ratio x ratio block:
/// F = intercept + slope * P + residual.
FusedBand fuse_lcm(const Band& pan, const Band& ms_low, const FusionConfig& cfg, std::size_t source_band = 0);

/// Fuses with cfg.method on the raw PAN/MS pair.
FusedBand fuse(const Band& pan, const Band& ms_for_method, const FusionConfig& cfg, std::size_t source_band = 0);

/// Band-by-band fusion of a low-resolution MS stack. LMM, LMVM and RVS see
/// the MS nearest-neighbour upsampled by cfg.ratio; LCM sees it unchanged.
std::vector<FusedBand> fuse_stack(const Band& pan, const ImageStack& ms, const FusionConfig& cfg);

}  // namespace statfuse
