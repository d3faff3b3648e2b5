// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include "segres/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace segres {

namespace {

std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return ext;
}

uint8_t quantize(double v) {
    return uint8_t(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// ---- PNM (P5 / P6) ----

int pnm_token(std::istream& is) {
    // Skips whitespace and '#' comments, then reads one unsigned integer.
    int c = is.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = is.get();
        } else if (std::isspace(c)) {
            c = is.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw std::runtime_error("PNM: malformed header");
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = is.get();
    }
    return value;
}

std::vector<uint8_t> read_bytes_interleaved(const std::string& path, int& width, int& height,
                                            int& channels) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    char magic[2];
    is.read(magic, 2);
    if (!is || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
        throw std::runtime_error(path + ": not a binary PGM/PPM file");
    channels = (magic[1] == '5') ? 1 : 3;
    width = pnm_token(is);
    height = pnm_token(is);
    const int maxval = pnm_token(is);
    if (maxval != 255) throw std::runtime_error(path + ": only 8-bit PNM is supported");
    if (width <= 0 || height <= 0) throw std::runtime_error(path + ": bad dimensions");
    std::vector<uint8_t> bytes(size_t(width) * height * channels);
    is.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(bytes.size()));
    if (size_t(is.gcount()) != bytes.size())
        throw std::runtime_error(path + ": truncated pixel data");
    return bytes;
}

void write_pnm(const std::string& path, const std::vector<uint8_t>& interleaved, int width,
               int height, int channels) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << (channels == 1 ? "P5" : "P6") << "\n" << width << " " << height << "\n255\n";
    os.write(reinterpret_cast<const char*>(interleaved.data()),
             std::streamsize(interleaved.size()));
    if (!os) throw std::runtime_error("write failed: " + path);
}

// ---- PNG ----

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

std::vector<uint8_t> read_png_interleaved(const std::string& path, int& width, int& height,
                                          int& channels) {
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error(path + ": PNG decode error");
    }
    png_init_io(png, fp.get());
    png_read_png(png, info,
                 PNG_TRANSFORM_STRIP_16 | PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_STRIP_ALPHA,
                 nullptr);

    width = int(png_get_image_width(png, info));
    height = int(png_get_image_height(png, info));
    const int color = png_get_color_type(png, info);
    channels = (color == PNG_COLOR_TYPE_GRAY) ? 1 : 3;
    if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error(path + ": unsupported PNG color type");
    }

    png_bytepp rows = png_get_rows(png, info);
    std::vector<uint8_t> bytes(size_t(width) * height * channels);
    for (int y = 0; y < height; ++y)
        std::memcpy(bytes.data() + size_t(y) * width * channels, rows[y],
                    size_t(width) * channels);
    png_destroy_read_struct(&png, &info, nullptr);
    return bytes;
}

void write_png_interleaved(const std::string& path, const std::vector<uint8_t>& interleaved,
                           int width, int height, int channels) {
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("cannot write " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error(path + ": PNG encode error");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, png_uint_32(width), png_uint_32(height), 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(interleaved.data() + size_t(y) * width * channels);
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::vector<uint8_t> read_interleaved(const std::string& path, int& width, int& height,
                                      int& channels) {
    if (lower_ext(path) == "png") return read_png_interleaved(path, width, height, channels);
    return read_bytes_interleaved(path, width, height, channels);
}

void write_interleaved(const std::string& path, const std::vector<uint8_t>& bytes, int width,
                       int height, int channels) {
    const std::string ext = lower_ext(path);
    if (ext == "png") {
        write_png_interleaved(path, bytes, width, height, channels);
    } else if (ext == "pgm") {
        if (channels != 1) throw std::runtime_error("PGM holds a single channel: " + path);
        write_pnm(path, bytes, width, height, 1);
    } else if (ext == "ppm") {
        if (channels != 3) throw std::runtime_error("PPM holds three channels: " + path);
        write_pnm(path, bytes, width, height, 3);
    } else {
        throw std::runtime_error("unsupported image extension: " + path);
    }
}

}  // namespace

ImageField read_image(const std::string& path) {
    int w = 0, h = 0, ch = 0;
    const std::vector<uint8_t> bytes = read_interleaved(path, w, h, ch);
    ImageField img(w, h, ch);
    const int n = w * h;
    for (int q = 0; q < n; ++q)
        for (int j = 0; j < ch; ++j)
            img.data()[size_t(j) * n + q] = bytes[size_t(q) * ch + j] / 255.0;
    return img;
}

void write_image(const std::string& path, const ImageField& img) {
    const int n = img.pixels(), ch = img.channels();
    if (ch != 1 && ch != 3)
        throw std::runtime_error("write_image: only 1- or 3-channel images are supported");
    std::vector<uint8_t> bytes(size_t(n) * ch);
    for (int q = 0; q < n; ++q)
        for (int j = 0; j < ch; ++j)
            bytes[size_t(q) * ch + j] = quantize(img.data()[size_t(j) * n + q]);
    write_interleaved(path, bytes, img.width(), img.height(), ch);
}

ObservationMask read_mask(const std::string& path) {
    int w = 0, h = 0, ch = 0;
    const std::vector<uint8_t> bytes = read_interleaved(path, w, h, ch);
    ObservationMask mask(w, h);
    const int n = w * h;
    for (int q = 0; q < n; ++q) mask.data()[q] = bytes[size_t(q) * ch] >= 128 ? 1 : 0;
    return mask;
}

void write_mask(const std::string& path, const ObservationMask& mask) {
    std::vector<uint8_t> bytes(mask.data().size());
    for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.data()[i] ? 255 : 0;
    write_interleaved(path, bytes, mask.width(), mask.height(), 1);
}

LabelMap read_label_map(const std::string& path) {
    int w = 0, h = 0, ch = 0;
    const std::vector<uint8_t> bytes = read_interleaved(path, w, h, ch);
    if (ch != 1) throw std::runtime_error(path + ": label maps must be single channel");
    int max_label = 0;
    for (uint8_t b : bytes) max_label = std::max<int>(max_label, b);
    LabelMap labels(w, h, max_label + 1);
    labels.data() = bytes;
    return labels;
}

void write_label_map(const std::string& path, const LabelMap& labels) {
    write_interleaved(path, labels.data(), labels.width(), labels.height(), 1);
}

}  // namespace segres
