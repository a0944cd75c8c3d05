#include "attn/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "attn/errors.hpp"

namespace attn {

namespace {

std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return {};
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

RgbImage read_png_rgb(const std::string& path) {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str())) {
        throw Error("cannot read PNG '" + path + "': " + img.message);
    }
    img.format = PNG_FORMAT_RGB;
    RgbImage out(static_cast<int>(img.width), static_cast<int>(img.height));
    if (!png_image_finish_read(&img, nullptr, out.data(), 0, nullptr)) {
        throw Error("cannot decode PNG '" + path + "': " + img.message);
    }
    return out;
}

GrayImage read_png_gray(const std::string& path) {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str())) {
        throw Error("cannot read PNG '" + path + "': " + img.message);
    }
    img.format = PNG_FORMAT_GRAY;
    GrayImage out(static_cast<int>(img.width), static_cast<int>(img.height));
    if (!png_image_finish_read(&img, nullptr, out.data(), 0, nullptr)) {
        throw Error("cannot decode PNG '" + path + "': " + img.message);
    }
    return out;
}

// Consumes one PPM header token, skipping whitespace and '#' comments.
std::string ppm_token(std::istream& in) {
    std::string tok;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok;
}

}  // namespace

RgbImage read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    if (ppm_token(in) != "P6") throw Error("'" + path + "' is not a binary PPM (P6)");
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(ppm_token(in));
        h = std::stoi(ppm_token(in));
        maxval = std::stoi(ppm_token(in));
    } catch (const std::exception&) {
        throw Error("malformed PPM header in '" + path + "'");
    }
    if (w <= 0 || h <= 0 || maxval != 255) {
        throw Error("unsupported PPM dimensions/maxval in '" + path + "'");
    }
    RgbImage out(w, h);
    in.read(reinterpret_cast<char*>(out.data()),
            static_cast<std::streamsize>(out.pixel_count() * 3));
    if (in.gcount() != static_cast<std::streamsize>(out.pixel_count() * 3)) {
        throw Error("truncated PPM data in '" + path + "'");
    }
    return out;
}

void write_ppm(const std::string& path, const RgbImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "P6\n" << image.width() << " " << image.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.data()),
              static_cast<std::streamsize>(image.pixel_count() * 3));
    if (!out) throw Error("failed writing '" + path + "'");
}

RgbImage read_image(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "ppm") return read_ppm(path);
    return read_png_rgb(path);
}

GrayImage read_gray(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "ppm") {
        RgbImage rgb = read_ppm(path);
        GrayImage out(rgb.width(), rgb.height());
        for (int y = 0; y < rgb.height(); ++y)
            for (int x = 0; x < rgb.width(); ++x) {
                const Rgb8 p = rgb.at(x, y);
                out.at(x, y) = static_cast<std::uint8_t>((p.r + p.g + p.b) / 3);
            }
        return out;
    }
    return read_png_gray(path);
}

void write_png(const std::string& path, const RgbImage& image) {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(image.width());
    img.height = static_cast<png_uint_32>(image.height());
    img.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&img, path.c_str(), 0, image.data(), 0, nullptr)) {
        throw Error("cannot write PNG '" + path + "': " + img.message);
    }
}

void write_png(const std::string& path, const GrayImage& image) {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(image.width());
    img.height = static_cast<png_uint_32>(image.height());
    img.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&img, path.c_str(), 0, image.data(), 0, nullptr)) {
        throw Error("cannot write PNG '" + path + "': " + img.message);
    }
}

}  // namespace attn
