#include "statfuse/band.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "statfuse/errors.hpp"

namespace statfuse {

Band::Band(std::size_t width, std::size_t height, std::vector<double> data, int bit_depth)
    : width_(width), height_(height), bit_depth_(bit_depth), data_(std::move(data)) {
    if (width_ == 0 || height_ == 0) {
        throw DimensionError("band dimensions must be at least 1x1");
    }
    if (data_.size() != width_ * height_) {
        throw DimensionError("band data length " + std::to_string(data_.size()) + " does not match " +
                             std::to_string(width_) + "x" + std::to_string(height_));
    }
    if (bit_depth_ < 1 || bit_depth_ > 16) {
        throw RangeError("bit depth must be in [1, 16], got " + std::to_string(bit_depth_));
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i])) {
            throw NumericError("non-finite sample at index " + std::to_string(i));
        }
    }
}

Band Band::filled(std::size_t width, std::size_t height, double value, int bit_depth) {
    return Band(width, height, std::vector<double>(width * height, value), bit_depth);
}

Band Band::with_bit_depth(int bit_depth) const {
    return Band(width_, height_, data_, bit_depth);
}

ImageStack::ImageStack(std::vector<Band> bands) : bands_(std::move(bands)) {
    if (bands_.empty()) {
        throw ShapeError("image stack needs at least one band");
    }
    for (std::size_t k = 1; k < bands_.size(); ++k) {
        if (!bands_[k].same_shape(bands_[0])) {
            throw DimensionError("band " + std::to_string(k) + " is " + std::to_string(bands_[k].width()) + "x" +
                                 std::to_string(bands_[k].height()) + ", expected " +
                                 std::to_string(bands_[0].width()) + "x" + std::to_string(bands_[0].height()));
        }
    }
}

ResolutionRatio::ResolutionRatio(int f) : factor(f) {
    if (f < 1) {
        throw std::invalid_argument("resolution ratio must be >= 1, got " + std::to_string(f));
    }
}

}  // namespace statfuse
