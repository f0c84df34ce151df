// Naive reference implementations used as test oracles. Everything here is
// written directly from the defining formulas with explicit loops and shares
// no code with the library beyond the Band container.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "statfuse/band.hpp"

namespace oracle {

using statfuse::Band;

inline Band random_band(std::mt19937_64& rng, std::size_t w, std::size_t h, double lo = 0.0, double hi = 255.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(w * h);
    for (double& x : v) {
        x = d(rng);
    }
    return Band(w, h, std::move(v));
}

inline Band from_fn(std::size_t w, std::size_t h, auto fn) {
    std::vector<double> v(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            v[y * w + x] = fn(x, y);
        }
    }
    return Band(w, h, std::move(v));
}

// Replicate-edge window samples around (x, y).
inline std::vector<double> window(const Band& b, std::size_t x, std::size_t y, int ww, int wh) {
    std::vector<double> out;
    const long w = static_cast<long>(b.width());
    const long h = static_cast<long>(b.height());
    for (long dy = -(wh / 2); dy <= wh / 2; ++dy) {
        for (long dx = -(ww / 2); dx <= ww / 2; ++dx) {
            const long sx = std::clamp(static_cast<long>(x) + dx, 0L, w - 1);
            const long sy = std::clamp(static_cast<long>(y) + dy, 0L, h - 1);
            out.push_back(b(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy)));
        }
    }
    return out;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double cov(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a);
    const double mb = mean(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(a.size());
}

inline double var(const std::vector<double>& a) { return cov(a, a); }

struct Planes {
    std::vector<double> mean_a, mean_b, var_a, var_b, cov;
};

inline Planes local(const Band& a, const Band& b, int ww, int wh) {
    Planes p;
    for (std::size_t y = 0; y < a.height(); ++y) {
        for (std::size_t x = 0; x < a.width(); ++x) {
            const auto wa = window(a, x, y, ww, wh);
            const auto wb = window(b, x, y, ww, wh);
            p.mean_a.push_back(mean(wa));
            p.mean_b.push_back(mean(wb));
            p.var_a.push_back(var(wa));
            p.var_b.push_back(var(wb));
            p.cov.push_back(cov(wa, wb));
        }
    }
    return p;
}

// Least-squares line m ~ intercept + slope * p per window with the flat
// window fallback.
inline void regression(const Band& m, const Band& p, int ww, int wh, double eps, std::vector<double>& slope,
                       std::vector<double>& intercept) {
    slope.clear();
    intercept.clear();
    for (std::size_t y = 0; y < m.height(); ++y) {
        for (std::size_t x = 0; x < m.width(); ++x) {
            const auto wm = window(m, x, y, ww, wh);
            const auto wp = window(p, x, y, ww, wh);
            const double spp = var(wp);
            if (spp <= eps) {
                slope.push_back(0.0);
                intercept.push_back(mean(wm));
            } else {
                const double b = cov(wp, wm) / spp;
                slope.push_back(b);
                intercept.push_back(mean(wm) - b * mean(wp));
            }
        }
    }
}

inline std::vector<double> lmm(const Band& pan, const Band& ms, int win, double eps) {
    std::vector<double> out;
    for (std::size_t y = 0; y < pan.height(); ++y) {
        for (std::size_t x = 0; x < pan.width(); ++x) {
            const double pm = mean(window(pan, x, y, win, win));
            const double mm = mean(window(ms, x, y, win, win));
            out.push_back(std::abs(pm) <= eps ? mm : pan(x, y) * mm / pm);
        }
    }
    return out;
}

inline std::vector<double> lmvm(const Band& pan, const Band& ms, int win, double eps) {
    std::vector<double> out;
    for (std::size_t y = 0; y < pan.height(); ++y) {
        for (std::size_t x = 0; x < pan.width(); ++x) {
            const auto wp = window(pan, x, y, win, win);
            const auto wm = window(ms, x, y, win, win);
            const double vp = var(wp);
            if (vp <= eps) {
                out.push_back(mean(wm));
            } else {
                out.push_back((pan(x, y) - mean(wp)) * std::sqrt(var(wm)) / std::sqrt(vp) + mean(wm));
            }
        }
    }
    return out;
}

inline std::vector<double> rvs(const Band& pan, const Band& ms, int win, double eps) {
    std::vector<double> slope, intercept, out;
    regression(ms, pan, win, win, eps, slope, intercept);
    for (std::size_t i = 0; i < pan.size(); ++i) {
        out.push_back(intercept[i] + slope[i] * pan.values()[i]);
    }
    return out;
}

inline Band block_mean(const Band& b, std::size_t f) {
    const std::size_t w = b.width() / f;
    const std::size_t h = b.height() / f;
    std::vector<double> v(w * h);
    for (std::size_t by = 0; by < h; ++by) {
        for (std::size_t bx = 0; bx < w; ++bx) {
            double s = 0.0;
            for (std::size_t y = 0; y < f; ++y)
                for (std::size_t x = 0; x < f; ++x) s += b(bx * f + x, by * f + y);
            v[by * w + bx] = s / static_cast<double>(f * f);
        }
    }
    return Band(w, h, std::move(v));
}

// Degrade, fit at low resolution, keep residuals, then apply
// intercept + slope * P + residual block by block.
inline std::vector<double> lcm(const Band& pan, const Band& ms_low, std::size_t f, int win, double eps) {
    const Band pan_low = block_mean(pan, f);
    std::vector<double> slope, intercept;
    regression(ms_low, pan_low, win, win, eps, slope, intercept);
    std::vector<double> residual(ms_low.size());
    for (std::size_t i = 0; i < residual.size(); ++i) {
        residual[i] = ms_low.values()[i] - (intercept[i] + slope[i] * pan_low.values()[i]);
    }
    std::vector<double> out;
    for (std::size_t y = 0; y < pan.height(); ++y) {
        for (std::size_t x = 0; x < pan.width(); ++x) {
            const std::size_t li = (y / f) * ms_low.width() + x / f;
            out.push_back(intercept[li] + slope[li] * pan(x, y) + residual[li]);
        }
    }
    return out;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1.0);
}

inline double max_rel_err(std::span<const double> got, const std::vector<double>& want) {
    double worst = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        worst = std::max(worst, rel_err(got[i], want[i]));
    }
    return worst;
}

// Two-pass global metrics.
inline double sd(const Band& b) {
    const std::vector<double> v(b.values().begin(), b.values().end());
    return std::sqrt(var(v));
}

inline double pearson(const Band& f, const Band& m) {
    const std::vector<double> a(f.values().begin(), f.values().end());
    const std::vector<double> b(m.values().begin(), m.values().end());
    return cov(a, b) / std::sqrt(var(a) * var(b));
}

inline double snr(const Band& f, const Band& m) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        num += f.values()[i] * f.values()[i];
        den += (f.values()[i] - m.values()[i]) * (f.values()[i] - m.values()[i]);
    }
    return std::sqrt(num / den);
}

inline double nrmse(const Band& f, const Band& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += (f.values()[i] - m.values()[i]) * (f.values()[i] - m.values()[i]);
    return std::sqrt(s / (static_cast<double>(f.size()) * 255.0 * 255.0));
}

inline double di(const Band& f, const Band& m) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (m.values()[i] > 1e-12) {
            s += std::abs(f.values()[i] - m.values()[i]) / m.values()[i];
            ++n;
        }
    }
    return s / static_cast<double>(n);
}

}  // namespace oracle
