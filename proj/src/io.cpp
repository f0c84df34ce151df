#include "statfuse/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <vector>

#include "json.hpp"
#include "statfuse/errors.hpp"

namespace statfuse {

int bit_depth_for_maxval(int maxval) {
    int bits = 1;
    while ((1L << bits) < static_cast<long>(maxval) + 1) {
        ++bits;
    }
    return bits;
}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Token reader over a Netpbm buffer; offsets are absolute.
class Cursor {
public:
    Cursor(std::string_view bytes, std::size_t pos) : bytes_(bytes), pos_(pos) {}

    std::size_t offset() const noexcept { return pos_; }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') {
                    ++pos_;
                }
            } else if (is_space(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long read_uint(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        long value = 0;
        while (pos_ < bytes_.size() && is_digit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L) {
                throw ParseError(std::string(what) + " is too large", start);
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw ParseError(std::string("expected ") + what, start);
        }
        if (pos_ < bytes_.size() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') {
            throw ParseError(std::string("unexpected character after ") + what, pos_);
        }
        return value;
    }

    // Binary rasters start after exactly one whitespace byte.
    void consume_single_space() {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
            throw ParseError("expected whitespace before raster data", pos_);
        }
        ++pos_;
    }

private:
    std::string_view bytes_;
    std::size_t pos_;
};

[[noreturn]] void sample_out_of_range(long v, long maxval, std::size_t at) {
    throw RangeError("sample " + std::to_string(v) + " exceeds maxval " + std::to_string(maxval) + " at byte " +
                     std::to_string(at));
}

}  // namespace

ImageStack decode_netpbm(std::string_view bytes, ImageFileHeader* header_out) {
    if (bytes.size() < 2 || bytes[0] != 'P') {
        throw ParseError("not a Netpbm file (missing P magic)", 0);
    }
    NetpbmFormat format;
    switch (bytes[1]) {
        case '2': format = NetpbmFormat::PgmAscii; break;
        case '3': format = NetpbmFormat::PpmAscii; break;
        case '5': format = NetpbmFormat::PgmBinary; break;
        case '6': format = NetpbmFormat::PpmBinary; break;
        default: throw ParseError("unsupported Netpbm magic P" + std::string(1, bytes[1]), 1);
    }
    if (bytes.size() > 2 && !is_space(bytes[2]) && bytes[2] != '#') {
        throw ParseError("expected whitespace after magic number", 2);
    }

    Cursor cur(bytes, 2);
    const long width = cur.read_uint("width");
    const long height = cur.read_uint("height");
    const std::size_t maxval_at = cur.offset();
    const long maxval = cur.read_uint("maxval");
    if (width < 1 || height < 1) {
        throw ParseError("image dimensions must be positive", 2);
    }
    if (maxval < 1 || maxval > 65535) {
        throw ParseError("maxval must be in [1, 65535], got " + std::to_string(maxval), maxval_at);
    }

    ImageFileHeader header{format, static_cast<std::size_t>(width), static_cast<std::size_t>(height),
                           static_cast<int>(maxval)};
    const auto channels = static_cast<std::size_t>(header.channels());
    const std::size_t pixels = header.width * header.height;
    std::vector<std::vector<double>> planes(channels, std::vector<double>(pixels));

    if (format == NetpbmFormat::PgmBinary || format == NetpbmFormat::PpmBinary) {
        cur.consume_single_space();
        std::size_t at = cur.offset();
        const std::size_t bps = maxval > 255 ? 2 : 1;
        const std::size_t need = pixels * channels * bps;
        if (bytes.size() - at < need) {
            throw ParseError("truncated raster: need " + std::to_string(need) + " bytes, have " +
                                 std::to_string(bytes.size() - at),
                             bytes.size());
        }
        for (std::size_t i = 0; i < pixels; ++i) {
            for (std::size_t c = 0; c < channels; ++c) {
                long v = static_cast<unsigned char>(bytes[at]);
                if (bps == 2) {
                    v = (v << 8) | static_cast<unsigned char>(bytes[at + 1]);
                }
                if (v > maxval) {
                    sample_out_of_range(v, maxval, at);
                }
                planes[c][i] = static_cast<double>(v);
                at += bps;
            }
        }
    } else {
        for (std::size_t i = 0; i < pixels; ++i) {
            for (std::size_t c = 0; c < channels; ++c) {
                cur.skip_space_and_comments();
                const std::size_t at = cur.offset();
                const long v = cur.read_uint("sample");
                if (v > maxval) {
                    sample_out_of_range(v, maxval, at);
                }
                planes[c][i] = static_cast<double>(v);
            }
        }
    }

    const int depth = bit_depth_for_maxval(header.maxval);
    std::vector<Band> bands;
    bands.reserve(channels);
    for (auto& plane : planes) {
        bands.emplace_back(header.width, header.height, std::move(plane), depth);
    }
    if (header_out) {
        *header_out = header;
    }
    return ImageStack(std::move(bands));
}

std::string encode_netpbm(const ImageStack& stack, int maxval) {
    const std::size_t channels = stack.band_count();
    if (channels != 1 && channels != 3) {
        throw ShapeError("Netpbm output needs 1 or 3 bands, got " + std::to_string(channels));
    }
    if (maxval < 1 || maxval > 65535) {
        throw RangeError("maxval must be in [1, 65535], got " + std::to_string(maxval));
    }
    std::string out = (channels == 1 ? "P5\n" : "P6\n") + std::to_string(stack.width()) + " " +
                      std::to_string(stack.height()) + "\n" + std::to_string(maxval) + "\n";
    const bool wide = maxval > 255;
    const std::size_t pixels = stack.width() * stack.height();
    out.reserve(out.size() + pixels * channels * (wide ? 2 : 1));
    const double top = maxval;
    for (std::size_t i = 0; i < pixels; ++i) {
        for (std::size_t c = 0; c < channels; ++c) {
            const double q = std::clamp(std::floor(stack[c].values()[i] + 0.5), 0.0, top);
            const auto v = static_cast<unsigned>(q);
            if (wide) {
                out.push_back(static_cast<char>((v >> 8) & 0xFF));
            }
            out.push_back(static_cast<char>(v & 0xFF));
        }
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IOError("cannot open " + path.string());
    }
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IOError("error reading " + path.string());
    }
    return data;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IOError("cannot open " + path.string() + " for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw IOError("error writing " + path.string());
    }
}

ImageStack read_image(const std::filesystem::path& path, ImageFileHeader* header_out) {
    return decode_netpbm(read_file(path), header_out);
}

void write_image(const ImageStack& stack, const std::filesystem::path& path, int maxval) {
    write_file(path, encode_netpbm(stack, maxval));
}

namespace {

// Four decimals, with negative zero printed as zero.
std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s(buf);
    if (s == "-0.0000") {
        s = "0.0000";
    }
    return s;
}

double round4(double v) {
    const double r = std::round(v * 1e4) / 1e4;
    return r == 0.0 ? 0.0 : r;
}

}  // namespace

std::string format_report(const QualityReport& report, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        std::string out = "method,band";
        for (Metric m : kReportColumns) {
            out += "," + to_string(m);
        }
        out += "\n";
        for (const ReportRow& row : report.rows) {
            out += row.method + "," + std::to_string(row.band);
            for (Metric m : kReportColumns) {
                out += ",";
                if (auto v = row.get(m)) {
                    out += fixed4(*v);
                }
            }
            out += "\n";
        }
        return out;
    }

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const ReportRow& row : report.rows) {
        nlohmann::ordered_json obj;
        obj["method"] = row.method;
        obj["band"] = row.band;
        for (Metric m : kReportColumns) {
            if (auto v = row.get(m)) {
                obj[to_string(m)] = round4(*v);
            } else {
                obj[to_string(m)] = nullptr;
            }
        }
        rows.push_back(std::move(obj));
    }
    return rows.dump(2) + "\n";
}

void write_report(const QualityReport& report, const std::filesystem::path& path, ReportFormat format) {
    write_file(path, format_report(report, format));
}

}  // namespace statfuse
