#pragma once

#include <optional>
#include <string>

#include "statfuse/band.hpp"

namespace statfuse {

/// Nearest-neighbour enlargement by an integer factor: every source pixel
/// becomes a factor x factor block of the same value.
Band upsample_nearest(const Band& band, ResolutionRatio ratio);
ImageStack upsample_nearest(const ImageStack& stack, ResolutionRatio ratio);

/// Box blur followed by decimation: each output pixel is the mean of the
/// aligned factor x factor source block. Throws DimensionError when the
/// band dimensions are not multiples of the factor.
///
/// Blocks of identical values reproduce that value exactly, which makes
/// degrade a left inverse of upsample_nearest.
Band degrade(const Band& band, ResolutionRatio ratio);
ImageStack degrade(const ImageStack& stack, ResolutionRatio ratio);

struct AlignmentVerdict {
    bool ok = true;
    std::string message;

    explicit operator bool() const noexcept { return ok; }
};

AlignmentVerdict check_alignment(const Band& pan, const ImageStack& ms, ResolutionRatio ratio);

struct ClampRange {
    double lo;
    double hi;
};

Band clamp(const Band& band, ClampRange range);

}  // namespace statfuse
