#include "statfuse/fusion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

#include "statfuse/errors.hpp"

namespace statfuse {

std::string to_string(FusionMethod method) {
    switch (method) {
        case FusionMethod::LMM: return "LMM";
        case FusionMethod::LMVM: return "LMVM";
        case FusionMethod::RVS: return "RVS";
        case FusionMethod::LCM: return "LCM";
    }
    return "?";
}

std::optional<FusionMethod> parse_method(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (FusionMethod m : kAllMethods) {
        if (to_string(m) == upper) {
            return m;
        }
    }
    return std::nullopt;
}

const WindowSpec& FusionConfig::window_for(FusionMethod m) const {
    switch (m) {
        case FusionMethod::LMM: return window_lmm;
        case FusionMethod::LMVM: return window_lmvm;
        case FusionMethod::RVS: return window_rvs;
        case FusionMethod::LCM: return window_lcm;
    }
    return window_rvs;
}

void FusionConfig::set_epsilon(double epsilon) {
    window_lmm = window_lmm.with_epsilon(epsilon);
    window_lmvm = window_lmvm.with_epsilon(epsilon);
    window_rvs = window_rvs.with_epsilon(epsilon);
    window_lcm = window_lcm.with_epsilon(epsilon);
}

namespace {

void require_same_grid(const Band& pan, const Band& ms, FusionMethod m) {
    if (!pan.same_shape(ms)) {
        throw DimensionError(to_string(m) + ": PAN is " + std::to_string(pan.width()) + "x" +
                             std::to_string(pan.height()) + " but MS is " + std::to_string(ms.width()) + "x" +
                             std::to_string(ms.height()) + "; resample MS to the PAN grid first");
    }
}

FusedBand finish(const Band& like, std::vector<double> values, FusionMethod m, const FusionConfig& cfg,
                 std::size_t source_band, int bit_depth) {
    if (cfg.clamp) {
        for (double& v : values) {
            v = std::clamp(v, cfg.clamp->lo, cfg.clamp->hi);
        }
    }
    return {Band(like.width(), like.height(), std::move(values), bit_depth), m, source_band};
}

}  // namespace

FusedBand fuse_lmm(const Band& pan, const Band& ms, const FusionConfig& cfg, std::size_t source_band) {
    require_same_grid(pan, ms, FusionMethod::LMM);
    const WindowSpec& win = cfg.window_lmm;
    const Band pan_mean = local_mean(pan, win);
    const Band ms_mean = local_mean(ms, win);
    const auto p = pan.values();
    const auto pm = pan_mean.values();
    const auto mm = ms_mean.values();
    std::vector<double> out(pan.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::abs(pm[i]) <= win.epsilon() ? mm[i] : p[i] * (mm[i] / pm[i]);
    }
    return finish(pan, std::move(out), FusionMethod::LMM, cfg, source_band, ms.bit_depth());
}

FusedBand fuse_lmvm(const Band& pan, const Band& ms, const FusionConfig& cfg, std::size_t source_band) {
    require_same_grid(pan, ms, FusionMethod::LMVM);
    const WindowSpec& win = cfg.window_lmvm;
    const LocalMoments mom = local_moments(pan, ms, win);
    const auto p = pan.values();
    std::vector<double> out(pan.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (mom.var_a[i] <= win.epsilon()) {
            out[i] = mom.mean_b[i];
        } else {
            const double gain = std::sqrt(mom.var_b[i]) / std::sqrt(mom.var_a[i]);
            out[i] = (p[i] - mom.mean_a[i]) * gain + mom.mean_b[i];
        }
    }
    return finish(pan, std::move(out), FusionMethod::LMVM, cfg, source_band, ms.bit_depth());
}

FusedBand fuse_rvs(const Band& pan, const Band& ms, const FusionConfig& cfg, std::size_t source_band) {
    require_same_grid(pan, ms, FusionMethod::RVS);
    const LocalFit fit = local_regression(ms, pan, cfg.window_rvs);
    const auto p = pan.values();
    const auto a = fit.intercept.values();
    const auto b = fit.slope.values();
    std::vector<double> out(pan.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = a[i] + b[i] * p[i];
    }
    return finish(pan, std::move(out), FusionMethod::RVS, cfg, source_band, ms.bit_depth());
}

LcmModel lcm_model(const Band& pan, const Band& ms_low, const FusionConfig& cfg) {
    const std::size_t f = static_cast<std::size_t>(cfg.ratio.factor);
    if (pan.width() != ms_low.width() * f || pan.height() != ms_low.height() * f) {
        throw DimensionError("LCM: PAN " + std::to_string(pan.width()) + "x" + std::to_string(pan.height()) +
                             " is not MS " + std::to_string(ms_low.width()) + "x" + std::to_string(ms_low.height()) +
                             " times ratio " + std::to_string(f));
    }
    Band pan_low = degrade(pan, cfg.ratio);
    LocalFit fit = local_regression(ms_low, pan_low, cfg.window_lcm);
    const auto m = ms_low.values();
    const auto pl = pan_low.values();
    const auto a = fit.slope.values();
    const auto b = fit.intercept.values();
    std::vector<double> residual(ms_low.size());
    for (std::size_t i = 0; i < residual.size(); ++i) {
        residual[i] = m[i] - (b[i] + a[i] * pl[i]);
    }
    Band res(ms_low.width(), ms_low.height(), std::move(residual), ms_low.bit_depth());
    return {std::move(pan_low), std::move(fit.slope), std::move(fit.intercept), std::move(res)};
}

FusedBand fuse_lcm(const Band& pan, const Band& ms_low, const FusionConfig& cfg, std::size_t source_band) {
    const LcmModel model = lcm_model(pan, ms_low, cfg);
    const std::size_t f = static_cast<std::size_t>(cfg.ratio.factor);
    const std::size_t lw = ms_low.width();
    std::vector<double> out(pan.size());
    for (std::size_t y = 0; y < pan.height(); ++y) {
        const auto prow = pan.row(y);
        for (std::size_t x = 0; x < pan.width(); ++x) {
            const std::size_t li = (y / f) * lw + x / f;
            // intercept + slope*P + residual, regrouped around the
            // low-resolution sample so the model cancels where P == P_low.
            out[y * pan.width() + x] = ms_low.values()[li] + model.slope.values()[li] * (prow[x] - model.pan_low.values()[li]);
        }
    }
    return finish(pan, std::move(out), FusionMethod::LCM, cfg, source_band, ms_low.bit_depth());
}

FusedBand fuse(const Band& pan, const Band& ms_for_method, const FusionConfig& cfg, std::size_t source_band) {
    switch (cfg.method) {
        case FusionMethod::LMM: return fuse_lmm(pan, ms_for_method, cfg, source_band);
        case FusionMethod::LMVM: return fuse_lmvm(pan, ms_for_method, cfg, source_band);
        case FusionMethod::RVS: return fuse_rvs(pan, ms_for_method, cfg, source_band);
        case FusionMethod::LCM: return fuse_lcm(pan, ms_for_method, cfg, source_band);
    }
    throw std::logic_error("unknown fusion method");
}

std::vector<FusedBand> fuse_stack(const Band& pan, const ImageStack& ms, const FusionConfig& cfg) {
    if (auto verdict = check_alignment(pan, ms, cfg.ratio); !verdict) {
        throw DimensionError(verdict.message);
    }
    std::vector<FusedBand> out;
    out.reserve(ms.band_count());
    for (std::size_t k = 0; k < ms.band_count(); ++k) {
        if (cfg.method == FusionMethod::LCM) {
            out.push_back(fuse_lcm(pan, ms[k], cfg, k));
        } else {
            out.push_back(fuse(pan, upsample_nearest(ms[k], cfg.ratio), cfg, k));
        }
    }
    return out;
}

}  // namespace statfuse
