#pragma once

#include <array>
#include <cstdint>

#include "statfuse/band.hpp"

namespace statfuse {

struct SynthOptions {
    ResolutionRatio ratio{4};
    std::uint64_t seed = 1;
    /// Standard deviation (DN) of zero-mean Gaussian noise added to PAN.
    double noise_sigma = 0.0;
    std::array<double, 3> pan_weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
};

/// A simulated PAN/MS acquisition of a known three-band scene.
struct SynthPair {
    Band pan;
    ImageStack ms;
    ImageStack truth;
};

/// PAN = weighted band sum + seeded noise at full resolution; MS = the
/// reference degraded by the ratio; truth = the reference unchanged.
/// Throws ShapeError unless the reference has three bands and
/// DimensionError when the ratio does not divide its dimensions.
SynthPair synthesize(const ImageStack& reference, const SynthOptions& options);

/// Procedural 8-bit three-band test scene: land-cover parcels with distinct
/// spectral signatures, shared fine texture, and a few linear features.
/// Deterministic in (width, height, seed).
ImageStack make_scene(std::size_t width, std::size_t height, std::uint64_t seed);

}  // namespace statfuse
