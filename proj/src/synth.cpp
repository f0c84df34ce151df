#include "statfuse/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "statfuse/errors.hpp"
#include "statfuse/raster.hpp"

namespace statfuse {

SynthPair synthesize(const ImageStack& reference, const SynthOptions& options) {
    if (reference.band_count() != 3) {
        throw ShapeError("synthesis needs a 3-band reference, got " + std::to_string(reference.band_count()));
    }
    if (!(options.noise_sigma >= 0.0)) {
        throw std::invalid_argument("noise sigma must be non-negative");
    }
    ImageStack ms = degrade(reference, options.ratio);

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> noise(0.0, options.noise_sigma > 0.0 ? options.noise_sigma : 1.0);
    const std::size_t n = reference.width() * reference.height();
    std::vector<double> pan(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            v += options.pan_weights[k] * reference[k].values()[i];
        }
        if (options.noise_sigma > 0.0) {
            v += noise(rng);
        }
        pan[i] = v;
    }
    return {Band(reference.width(), reference.height(), std::move(pan), reference[0].bit_depth()), std::move(ms),
            reference};
}

namespace {

struct Signature {
    double r, g, b;
};

// Broad land-cover classes: water, forest, crop, soil, urban, sand.
constexpr Signature kClasses[] = {
    {28, 46, 72}, {52, 96, 48}, {96, 150, 74}, {148, 116, 86}, {176, 168, 160}, {212, 192, 150},
};

}  // namespace

ImageStack make_scene(std::size_t width, std::size_t height, std::uint64_t seed) {
    if (width == 0 || height == 0) {
        throw DimensionError("scene dimensions must be positive");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const std::size_t cells = std::max<std::size_t>(8, width * height / 1500);
    struct Cell {
        double x, y;
        Signature sig;
        double gain;
    };
    std::vector<Cell> parcels;
    parcels.reserve(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const auto cls = static_cast<std::size_t>(unit(rng) * std::size(kClasses)) % std::size(kClasses);
        parcels.push_back({unit(rng) * width, unit(rng) * height, kClasses[cls], 0.85 + 0.3 * unit(rng)});
    }

    struct Wave {
        double fx, fy, phase, amp;
    };
    std::vector<Wave> waves;
    for (int i = 0; i < 10; ++i) {
        const double period = 2.5 + 30.0 * unit(rng) * unit(rng);
        const double angle = unit(rng) * std::numbers::pi;
        const double f = 2.0 * std::numbers::pi / period;
        waves.push_back({f * std::cos(angle), f * std::sin(angle), unit(rng) * 2.0 * std::numbers::pi,
                         4.0 + 6.0 * unit(rng)});
    }

    struct Line {
        double nx, ny, c, half_width;
    };
    std::vector<Line> roads;
    for (int i = 0; i < 3; ++i) {
        const double angle = unit(rng) * std::numbers::pi;
        const double nx = std::cos(angle);
        const double ny = std::sin(angle);
        roads.push_back({nx, ny, nx * unit(rng) * width + ny * unit(rng) * height, 0.6 + 1.2 * unit(rng)});
    }

    const std::size_t n = width * height;
    std::vector<double> r(n), g(n), b(n);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const double px = x + 0.5;
            const double py = y + 0.5;
            const Cell* best = &parcels.front();
            double best_d = 1e300;
            for (const Cell& c : parcels) {
                const double d = (c.x - px) * (c.x - px) + (c.y - py) * (c.y - py);
                if (d < best_d) {
                    best_d = d;
                    best = &c;
                }
            }
            double texture = 0.0;
            for (const Wave& w : waves) {
                texture += w.amp * std::sin(w.fx * px + w.fy * py + w.phase);
            }
            Signature s = best->sig;
            double gain = best->gain;
            for (const Line& l : roads) {
                if (std::abs(l.nx * px + l.ny * py - l.c) < l.half_width) {
                    s = {168, 164, 158};
                    gain = 1.0;
                    texture *= 0.2;
                }
            }
            const std::size_t i = y * width + x;
            // Texture brightens all bands together, more strongly where the
            // band itself is bright.
            r[i] = std::clamp(std::round(s.r * gain + texture * s.r / 120.0), 0.0, 255.0);
            g[i] = std::clamp(std::round(s.g * gain + texture * s.g / 120.0), 0.0, 255.0);
            b[i] = std::clamp(std::round(s.b * gain + texture * s.b / 120.0), 0.0, 255.0);
        }
    }
    return ImageStack({Band(width, height, std::move(r)), Band(width, height, std::move(g)),
                       Band(width, height, std::move(b))});
}

}  // namespace statfuse
