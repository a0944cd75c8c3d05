#pragma once

#include <string>

#include "attn/image.hpp"

namespace attn {

/// Reads a PNG or binary PPM (P6) file as 8-bit RGB. Format is chosen by
/// file extension (.png / .ppm, case-insensitive). Throws attn::Error.
RgbImage read_image(const std::string& path);

/// Reads an image as 8-bit grayscale (PNG or P5/P6 PPM; color input is
/// converted). Used for ground-truth masks and external saliency maps.
GrayImage read_gray(const std::string& path);

void write_png(const std::string& path, const RgbImage& image);
void write_png(const std::string& path, const GrayImage& image);

void write_ppm(const std::string& path, const RgbImage& image);
RgbImage read_ppm(const std::string& path);

}  // namespace attn
