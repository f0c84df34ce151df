#pragma once

#include <vector>

#include "statfuse/band.hpp"

namespace statfuse {

enum class BorderPolicy { Replicate };

inline constexpr double kDefaultEpsilon = 1e-12;

/// Sliding-window geometry. Width and height are odd so the window is
/// centred on a pixel; epsilon (DN^2) marks flat windows as degenerate.
class WindowSpec {
public:
    WindowSpec(int width, int height, double epsilon = kDefaultEpsilon,
               BorderPolicy border = BorderPolicy::Replicate);

    static WindowSpec square(int size, double epsilon = kDefaultEpsilon) { return WindowSpec(size, size, epsilon); }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    double epsilon() const noexcept { return epsilon_; }
    BorderPolicy border() const noexcept { return border_; }
    int radius_x() const noexcept { return width_ / 2; }
    int radius_y() const noexcept { return height_ / 2; }
    int count() const noexcept { return width_ * height_; }

    WindowSpec with_epsilon(double epsilon) const { return WindowSpec(width_, height_, epsilon, border_); }

    friend bool operator==(const WindowSpec&, const WindowSpec&) = default;

private:
    int width_;
    int height_;
    double epsilon_;
    BorderPolicy border_;
};

/// One statistic per pixel, on the grid of the band it was computed from.
using StatPlane = Band;

StatPlane local_mean(const Band& band, const WindowSpec& win);

/// Population (1/n) standard deviation over each window.
StatPlane local_std(const Band& band, const WindowSpec& win);

/// Population covariance over each window. Throws DimensionError when the
/// bands differ in shape.
StatPlane local_cov(const Band& a, const Band& b, const WindowSpec& win);

struct LocalFit {
    StatPlane slope;
    StatPlane intercept;
};

/// Per-window least-squares line m ~ intercept + slope * p.
///
/// slope = cov(p, m) / var(p), intercept = mean(m) - slope * mean(p).
/// Where var(p) <= epsilon the window is flat and the fit falls back to
/// slope 0, intercept mean(m).
LocalFit local_regression(const Band& m, const Band& p, const WindowSpec& win);

/// Every first and second moment of a band pair over the same windows.
/// Variances below the rounding floor of the window sums are reported as
/// exactly zero.
struct LocalMoments {
    std::vector<double> mean_a;
    std::vector<double> mean_b;
    std::vector<double> var_a;
    std::vector<double> var_b;
    std::vector<double> cov;
};

LocalMoments local_moments(const Band& a, const Band& b, const WindowSpec& win);

}  // namespace statfuse
