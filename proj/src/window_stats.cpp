#include "statfuse/window_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "statfuse/errors.hpp"

namespace statfuse {

WindowSpec::WindowSpec(int width, int height, double epsilon, BorderPolicy border)
    : width_(width), height_(height), epsilon_(epsilon), border_(border) {
    if (width < 1 || height < 1 || width % 2 == 0 || height % 2 == 0) {
        throw std::invalid_argument("window must have odd positive dimensions, got " + std::to_string(width) +
                                    "x" + std::to_string(height));
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("window epsilon must be finite and non-negative");
    }
}

namespace {

// Double-double value: hi + lo with |lo| <= ulp(hi)/2.
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD normalize(double s, double e) {
    const double hi = s + e;
    return {hi, e - (hi - s)};
}

inline DD add(DD x, DD y) {
    DD s = two_sum(x.hi, y.hi);
    return normalize(s.hi, s.lo + x.lo + y.lo);
}

inline DD add(DD x, double v) {
    DD s = two_sum(x.hi, v);
    return normalize(s.hi, s.lo + x.lo);
}

inline DD neg(DD x) { return {-x.hi, -x.lo}; }

// Compensated summed-area table over a replicate-padded grid. box() returns
// the sum of the window centred on an original pixel.
class SummedAreaTable {
public:
    SummedAreaTable(const std::vector<double>& padded, std::size_t pw, std::size_t ph)
        : stride_(pw + 1), table_((pw + 1) * (ph + 1)) {
        for (std::size_t y = 0; y < ph; ++y) {
            DD run;
            const double* src = padded.data() + y * pw;
            const DD* above = table_.data() + y * stride_;
            DD* cur = table_.data() + (y + 1) * stride_;
            for (std::size_t x = 0; x < pw; ++x) {
                run = add(run, src[x]);
                cur[x + 1] = add(above[x + 1], run);
            }
        }
    }

    double box(std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1) const {
        // Half-open padded rectangle [x0, x1) x [y0, y1).
        const DD& a = table_[y1 * stride_ + x1];
        const DD& b = table_[y0 * stride_ + x1];
        const DD& c = table_[y1 * stride_ + x0];
        const DD& d = table_[y0 * stride_ + x0];
        const DD r = add(add(a, neg(b)), add(d, neg(c)));
        return r.hi + r.lo;
    }

private:
    std::size_t stride_;
    std::vector<DD> table_;
};

struct Padding {
    std::size_t width;
    std::size_t height;
    std::size_t pw;
    std::size_t ph;
    int rx;
    int ry;
};

Padding make_padding(const Band& band, const WindowSpec& win) {
    const int rx = win.radius_x();
    const int ry = win.radius_y();
    return {band.width(), band.height(), band.width() + 2 * static_cast<std::size_t>(rx),
            band.height() + 2 * static_cast<std::size_t>(ry), rx, ry};
}

// Replicate-edge padded copy of the band with `shift` subtracted.
std::vector<double> pad_centered(const Band& band, const Padding& p, double shift) {
    std::vector<double> out(p.pw * p.ph);
    const auto w = static_cast<std::ptrdiff_t>(p.width);
    const auto h = static_cast<std::ptrdiff_t>(p.height);
    for (std::size_t py = 0; py < p.ph; ++py) {
        const auto sy = std::clamp(static_cast<std::ptrdiff_t>(py) - p.ry, std::ptrdiff_t{0}, h - 1);
        const auto src = band.row(static_cast<std::size_t>(sy));
        for (std::size_t px = 0; px < p.pw; ++px) {
            const auto sx = std::clamp(static_cast<std::ptrdiff_t>(px) - p.rx, std::ptrdiff_t{0}, w - 1);
            out[py * p.pw + px] = src[static_cast<std::size_t>(sx)] - shift;
        }
    }
    return out;
}

std::vector<double> product(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] * b[i];
    }
    return out;
}

// Relative rounding floor for second moments assembled from window sums.
constexpr double kMomentFloor = 32.0 * std::numeric_limits<double>::epsilon();

template <typename Fn>
void for_each_window(const Padding& p, const WindowSpec& win, Fn&& fn) {
    const auto ww = static_cast<std::size_t>(win.width());
    const auto wh = static_cast<std::size_t>(win.height());
    for (std::size_t y = 0; y < p.height; ++y) {
        for (std::size_t x = 0; x < p.width; ++x) {
            fn(y * p.width + x, x, y, x + ww, y + wh);
        }
    }
}

void require_same_shape(const Band& a, const Band& b, const char* op) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(op) + ": bands differ in shape (" + std::to_string(a.width()) + "x" +
                             std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                             std::to_string(b.height()) + ")");
    }
}

struct SingleMoments {
    std::vector<double> mean;
    std::vector<double> var;
};

SingleMoments single_moments(const Band& band, const WindowSpec& win, bool with_var) {
    const Padding p = make_padding(band, win);
    const double shift = band.values().front();
    const auto centered = pad_centered(band, p, shift);
    const SummedAreaTable sx(centered, p.pw, p.ph);
    std::optional<SummedAreaTable> sxx;
    if (with_var) {
        sxx.emplace(product(centered, centered), p.pw, p.ph);
    }
    const double n = win.count();
    SingleMoments out{std::vector<double>(band.size()), with_var ? std::vector<double>(band.size())
                                                                 : std::vector<double>{}};
    for_each_window(p, win, [&](std::size_t i, std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1) {
        const double m = sx.box(x0, y0, x1, y1) / n;
        out.mean[i] = shift + m;
        if (with_var) {
            const double mxx = sxx->box(x0, y0, x1, y1) / n;
            const double v = mxx - m * m;
            out.var[i] = v <= kMomentFloor * mxx ? 0.0 : v;
        }
    });
    return out;
}

}  // namespace

LocalMoments local_moments(const Band& a, const Band& b, const WindowSpec& win) {
    require_same_shape(a, b, "local_moments");
    const Padding p = make_padding(a, win);
    const double shift_a = a.values().front();
    const double shift_b = b.values().front();
    const auto ca = pad_centered(a, p, shift_a);
    const auto cb = pad_centered(b, p, shift_b);
    const SummedAreaTable sa(ca, p.pw, p.ph);
    const SummedAreaTable sb(cb, p.pw, p.ph);
    const SummedAreaTable saa(product(ca, ca), p.pw, p.ph);
    const SummedAreaTable sbb(product(cb, cb), p.pw, p.ph);
    const SummedAreaTable sab(product(ca, cb), p.pw, p.ph);
    const double n = win.count();

    const std::size_t count = a.size();
    LocalMoments out{std::vector<double>(count), std::vector<double>(count), std::vector<double>(count),
                     std::vector<double>(count), std::vector<double>(count)};
    for_each_window(p, win, [&](std::size_t i, std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1) {
        const double ma = sa.box(x0, y0, x1, y1) / n;
        const double mb = sb.box(x0, y0, x1, y1) / n;
        const double maa = saa.box(x0, y0, x1, y1) / n;
        const double mbb = sbb.box(x0, y0, x1, y1) / n;
        const double mab = sab.box(x0, y0, x1, y1) / n;
        const double va = maa - ma * ma;
        const double vb = mbb - mb * mb;
        const double c = mab - ma * mb;
        out.mean_a[i] = shift_a + ma;
        out.mean_b[i] = shift_b + mb;
        out.var_a[i] = va <= kMomentFloor * maa ? 0.0 : va;
        out.var_b[i] = vb <= kMomentFloor * mbb ? 0.0 : vb;
        out.cov[i] = std::abs(c) <= kMomentFloor * std::sqrt(maa * mbb) ? 0.0 : c;
    });
    return out;
}

StatPlane local_mean(const Band& band, const WindowSpec& win) {
    auto m = single_moments(band, win, false);
    return Band(band.width(), band.height(), std::move(m.mean), band.bit_depth());
}

StatPlane local_std(const Band& band, const WindowSpec& win) {
    auto m = single_moments(band, win, true);
    for (double& v : m.var) {
        v = std::sqrt(v);
    }
    return Band(band.width(), band.height(), std::move(m.var), band.bit_depth());
}

StatPlane local_cov(const Band& a, const Band& b, const WindowSpec& win) {
    auto m = local_moments(a, b, win);
    return Band(a.width(), a.height(), std::move(m.cov), a.bit_depth());
}

LocalFit local_regression(const Band& m, const Band& p, const WindowSpec& win) {
    require_same_shape(m, p, "local_regression");
    // a = p so var_a is the predictor variance and cov is S_PM.
    const auto mom = local_moments(p, m, win);
    std::vector<double> slope(m.size());
    std::vector<double> intercept(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (mom.var_a[i] <= win.epsilon()) {
            slope[i] = 0.0;
            intercept[i] = mom.mean_b[i];
        } else {
            slope[i] = mom.cov[i] / mom.var_a[i];
            intercept[i] = mom.mean_b[i] - slope[i] * mom.mean_a[i];
        }
    }
    return {Band(m.width(), m.height(), std::move(slope), m.bit_depth()),
            Band(m.width(), m.height(), std::move(intercept), m.bit_depth())};
}

}  // namespace statfuse
