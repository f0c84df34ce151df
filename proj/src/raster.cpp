#include "statfuse/raster.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "statfuse/errors.hpp"

namespace statfuse {

namespace {

std::string dims(std::size_t w, std::size_t h) {
    return std::to_string(w) + "x" + std::to_string(h);
}

template <typename Fn>
ImageStack map_bands(const ImageStack& stack, Fn&& fn) {
    std::vector<Band> out;
    out.reserve(stack.band_count());
    for (const Band& b : stack.bands()) {
        out.push_back(fn(b));
    }
    return ImageStack(std::move(out));
}

}  // namespace

Band upsample_nearest(const Band& band, ResolutionRatio ratio) {
    const std::size_t f = static_cast<std::size_t>(ratio.factor);
    if (f == 1) {
        return band;
    }
    const std::size_t w = band.width() * f;
    const std::size_t h = band.height() * f;
    std::vector<double> out(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        const auto src = band.row(y / f);
        double* dst = out.data() + y * w;
        for (std::size_t x = 0; x < w; ++x) {
            dst[x] = src[x / f];
        }
    }
    return Band(w, h, std::move(out), band.bit_depth());
}

ImageStack upsample_nearest(const ImageStack& stack, ResolutionRatio ratio) {
    return map_bands(stack, [&](const Band& b) { return upsample_nearest(b, ratio); });
}

Band degrade(const Band& band, ResolutionRatio ratio) {
    const std::size_t f = static_cast<std::size_t>(ratio.factor);
    if (band.width() % f != 0 || band.height() % f != 0) {
        throw DimensionError("cannot degrade " + dims(band.width(), band.height()) + " by factor " +
                             std::to_string(f) + ": dimensions are not multiples of the factor");
    }
    if (f == 1) {
        return band;
    }
    const std::size_t w = band.width() / f;
    const std::size_t h = band.height() / f;
    const double n = static_cast<double>(f * f);
    std::vector<double> out(w * h);
    for (std::size_t by = 0; by < h; ++by) {
        for (std::size_t bx = 0; bx < w; ++bx) {
            // Accumulate deviations from the first sample of the block so a
            // uniform block yields its value bit-for-bit.
            const double anchor = band(bx * f, by * f);
            double lo = anchor;
            double hi = anchor;
            double dev = 0.0;
            for (std::size_t y = by * f; y < (by + 1) * f; ++y) {
                const auto r = band.row(y);
                for (std::size_t x = bx * f; x < (bx + 1) * f; ++x) {
                    dev += r[x] - anchor;
                    lo = std::min(lo, r[x]);
                    hi = std::max(hi, r[x]);
                }
            }
            out[by * w + bx] = std::clamp(anchor + dev / n, lo, hi);
        }
    }
    return Band(w, h, std::move(out), band.bit_depth());
}

ImageStack degrade(const ImageStack& stack, ResolutionRatio ratio) {
    return map_bands(stack, [&](const Band& b) { return degrade(b, ratio); });
}

AlignmentVerdict check_alignment(const Band& pan, const ImageStack& ms, ResolutionRatio ratio) {
    const std::size_t f = static_cast<std::size_t>(ratio.factor);
    const std::size_t ew = ms.width() * f;
    const std::size_t eh = ms.height() * f;
    if (pan.width() == ew && pan.height() == eh) {
        return {};
    }
    return {false, "PAN is " + dims(pan.width(), pan.height()) + " but MS " + dims(ms.width(), ms.height()) +
                       " at ratio " + std::to_string(f) + " implies " + dims(ew, eh)};
}

Band clamp(const Band& band, ClampRange range) {
    std::vector<double> out(band.values().begin(), band.values().end());
    for (double& v : out) {
        v = std::clamp(v, range.lo, range.hi);
    }
    return Band(band.width(), band.height(), std::move(out), band.bit_depth());
}

}  // namespace statfuse
