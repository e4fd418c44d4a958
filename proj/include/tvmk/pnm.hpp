#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "tvmk/dense.hpp"

namespace tvmk {

/// Grayscale or RGB image with intensities normalized to [0, 1].
struct PnmImage {
    std::vector<DenseMatrix> channels;  // 1 (gray) or 3 (RGB)

    Index rows() const { return channels.empty() ? 0 : channels.front().rows(); }
    Index cols() const { return channels.empty() ? 0 : channels.front().cols(); }
    bool is_rgb() const { return channels.size() == 3; }
};

namespace detail {

inline int pnm_read_int(std::istream& in) {
    // Skip whitespace and '#' comment lines between header tokens.
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n')
                c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c))
        throw IoError("pnm: malformed header");
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = in.get();
    }
    return value;
}

inline std::uint8_t quantize(double v) {
    const double clamped = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    return static_cast<std::uint8_t>(std::lround(clamped * 255.0));
}

} // namespace detail

/// Read a binary PGM (P5) or PPM (P6) file with 8-bit samples. Comment lines
/// in the header are tolerated; intensities come back divided by maxval.
inline PnmImage read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("pnm: cannot open " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
        throw IoError("pnm: unsupported magic in " + path);
    const int ch = magic[1] == '5' ? 1 : 3;
    const int width = detail::pnm_read_int(in);
    const int height = detail::pnm_read_int(in);
    const int maxval = detail::pnm_read_int(in);
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
        throw IoError("pnm: unsupported header in " + path);

    std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height * ch);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
        throw IoError("pnm: truncated pixel data in " + path);

    PnmImage img;
    for (int c = 0; c < ch; ++c)
        img.channels.emplace_back(DenseMatrix::Zero(height, width));
    const double scale = 1.0 / maxval;
    std::size_t pos = 0;
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j)
            for (int c = 0; c < ch; ++c)
                img.channels[static_cast<std::size_t>(c)](i, j) =
                    raw[pos++] * scale;
    return img;
}

/// Write a matrix as binary 8-bit PGM; values are clamped to [0, 1] at write
/// time only.
inline void write_pgm(const std::string& path, const DenseMatrix& gray) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("pnm: cannot write " + path);
    out << "P5\n" << gray.cols() << " " << gray.rows() << "\n255\n";
    for (Index i = 0; i < gray.rows(); ++i)
        for (Index j = 0; j < gray.cols(); ++j)
            out.put(static_cast<char>(detail::quantize(gray(i, j))));
    if (!out)
        throw IoError("pnm: write failure on " + path);
}

/// Write three channel matrices as binary 8-bit PPM.
inline void write_ppm(const std::string& path, const DenseMatrix& r,
                      const DenseMatrix& g, const DenseMatrix& b) {
    require_same_shape(r, g, "write_ppm");
    require_same_shape(r, b, "write_ppm");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("pnm: cannot write " + path);
    out << "P6\n" << r.cols() << " " << r.rows() << "\n255\n";
    for (Index i = 0; i < r.rows(); ++i)
        for (Index j = 0; j < r.cols(); ++j) {
            out.put(static_cast<char>(detail::quantize(r(i, j))));
            out.put(static_cast<char>(detail::quantize(g(i, j))));
            out.put(static_cast<char>(detail::quantize(b(i, j))));
        }
    if (!out)
        throw IoError("pnm: write failure on " + path);
}

inline void write_pnm(const std::string& path, const PnmImage& img) {
    if (img.channels.size() == 1)
        write_pgm(path, img.channels.front());
    else if (img.channels.size() == 3)
        write_ppm(path, img.channels[0], img.channels[1], img.channels[2]);
    else
        throw IoError("pnm: only 1- or 3-channel images supported");
}

} // namespace tvmk
