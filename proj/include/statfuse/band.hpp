#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace statfuse {

/// A single-channel raster of digital numbers held in double precision.
///
/// Samples are stored row-major. A Band never changes after construction;
/// every operation in the library returns a new Band. The constructor
/// rejects empty grids, size mismatches and non-finite samples, so any
/// Band in circulation satisfies those invariants.
class Band {
public:
    Band(std::size_t width, std::size_t height, std::vector<double> data, int bit_depth = 8);

    /// A width x height band filled with `value`.
    static Band filled(std::size_t width, std::size_t height, double value, int bit_depth = 8);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    int bit_depth() const noexcept { return bit_depth_; }

    double operator()(std::size_t x, std::size_t y) const noexcept { return data_[y * width_ + x]; }
    std::span<const double> values() const noexcept { return data_; }
    std::span<const double> row(std::size_t y) const noexcept {
        return std::span<const double>(data_).subspan(y * width_, width_);
    }

    bool same_shape(const Band& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    /// Copy of this band with a different bit-depth tag.
    Band with_bit_depth(int bit_depth) const;

    friend bool operator==(const Band& a, const Band& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    std::size_t width_;
    std::size_t height_;
    int bit_depth_;
    std::vector<double> data_;
};

/// An ordered set of co-registered bands sharing one grid.
class ImageStack {
public:
    explicit ImageStack(std::vector<Band> bands);

    std::size_t band_count() const noexcept { return bands_.size(); }
    std::size_t width() const noexcept { return bands_.front().width(); }
    std::size_t height() const noexcept { return bands_.front().height(); }

    const Band& operator[](std::size_t k) const { return bands_.at(k); }
    const std::vector<Band>& bands() const noexcept { return bands_; }

    friend bool operator==(const ImageStack& a, const ImageStack& b) { return a.bands_ == b.bands_; }

private:
    std::vector<Band> bands_;
};

/// Integer ratio between the PAN and MS pixel grids.
struct ResolutionRatio {
    explicit ResolutionRatio(int factor);

    int factor;
};

}  // namespace statfuse
