#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "statfuse/band.hpp"
#include "statfuse/metrics.hpp"

namespace statfuse {

enum class NetpbmFormat { PgmAscii, PgmBinary, PpmAscii, PpmBinary };

struct ImageFileHeader {
    NetpbmFormat format;
    std::size_t width;
    std::size_t height;
    int maxval;

    int channels() const noexcept {
        return format == NetpbmFormat::PpmAscii || format == NetpbmFormat::PpmBinary ? 3 : 1;
    }
};

/// Smallest bit count that can hold maxval: ceil(log2(maxval + 1)).
int bit_depth_for_maxval(int maxval);

/// Decodes a PGM (P2/P5, one band) or PPM (P3/P6, three bands) byte buffer.
/// Samples are loaded unscaled; maxval becomes each band's bit depth.
/// Throws ParseError (with byte offset) on malformed input and RangeError
/// when a sample exceeds maxval.
ImageStack decode_netpbm(std::string_view bytes, ImageFileHeader* header_out = nullptr);

/// Binary P5/P6 encoding; samples are rounded half-up and clamped to
/// [0, maxval]. Two big-endian bytes per sample when maxval > 255.
/// Throws ShapeError unless the stack has 1 or 3 bands.
std::string encode_netpbm(const ImageStack& stack, int maxval);

ImageStack read_image(const std::filesystem::path& path, ImageFileHeader* header_out = nullptr);
void write_image(const ImageStack& stack, const std::filesystem::path& path, int maxval);

enum class ReportFormat { Csv, Json };

/// CSV: header `method,band,SD,En,SNR,NRMSE,DI,CC`, values with four
/// decimals, absent values as empty fields, LF line endings.
/// JSON: list of row objects with the same keys, absent values as null.
std::string format_report(const QualityReport& report, ReportFormat format);
void write_report(const QualityReport& report, const std::filesystem::path& path, ReportFormat format);

/// Reads a whole file into memory; throws IOError naming the path.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace statfuse
