#include <doctest.h>

#include <fstream>

#include "attn/errors.hpp"
#include "attn/image_io.hpp"
#include "test_util.hpp"

using namespace attn;

namespace {

RgbImage gradient(int w, int h) {
    RgbImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            img.at(x, y) = Rgb8{static_cast<std::uint8_t>(x * 255 / (w - 1)),
                                static_cast<std::uint8_t>(y * 255 / (h - 1)),
                                static_cast<std::uint8_t>((x + y) % 256)};
        }
    }
    return img;
}

}  // namespace

TEST_CASE("PNG round-trips RGB pixels exactly") {
    testutil::TempDir dir("png_rgb");
    const RgbImage original = gradient(31, 17);
    write_png(dir.str("img.png"), original);
    CHECK(read_image(dir.str("img.png")) == original);
}

TEST_CASE("PNG round-trips grayscale pixels exactly") {
    testutil::TempDir dir("png_gray");
    GrayImage original(13, 9);
    for (int y = 0; y < 9; ++y) {
        for (int x = 0; x < 13; ++x) original.at(x, y) = static_cast<std::uint8_t>(x * 19 + y);
    }
    write_png(dir.str("img.png"), original);
    CHECK(read_gray(dir.str("img.png")) == original);
}

TEST_CASE("read_gray converts color input") {
    testutil::TempDir dir("gray_conv");
    write_png(dir.str("img.png"), RgbImage(4, 3, Rgb8{255, 255, 255}));
    const GrayImage g = read_gray(dir.str("img.png"));
    CHECK(g.width() == 4);
    CHECK(g.at(0, 0) == 255);
}

TEST_CASE("PPM round-trips and the reader skips comments") {
    testutil::TempDir dir("ppm");
    const RgbImage original = gradient(8, 5);
    write_ppm(dir.str("img.ppm"), original);
    CHECK(read_ppm(dir.str("img.ppm")) == original);

    // Hand-written P6 with interleaved comments.
    std::ofstream out(dir.str("c.ppm"), std::ios::binary);
    out << "P6\n# a comment\n2 # inline\n1\n255\n";
    out.put('\x01').put('\x02').put('\x03').put('\xfa').put('\xfb').put('\xfc');
    out.close();
    const RgbImage img = read_ppm(dir.str("c.ppm"));
    REQUIRE(img.width() == 2);
    REQUIRE(img.height() == 1);
    CHECK(img.at(0, 0) == Rgb8{1, 2, 3});
    CHECK(img.at(1, 0) == Rgb8{250, 251, 252});
}

TEST_CASE("read_image dispatches by extension") {
    testutil::TempDir dir("dispatch");
    const RgbImage original = gradient(6, 4);
    write_png(dir.str("a.png"), original);
    write_ppm(dir.str("b.ppm"), original);
    CHECK(read_image(dir.str("a.png")) == original);
    CHECK(read_image(dir.str("b.ppm")) == original);
    CHECK_THROWS_AS(static_cast<void>(read_image(dir.str("c.gif"))), Error);
}

TEST_CASE("unreadable or corrupt files throw") {
    testutil::TempDir dir("corrupt");
    CHECK_THROWS_AS(static_cast<void>(read_image(dir.str("missing.png"))), Error);
    std::ofstream(dir.str("junk.png"), std::ios::binary) << "not a png";
    CHECK_THROWS_AS(static_cast<void>(read_image(dir.str("junk.png"))), Error);
    std::ofstream(dir.str("junk.ppm"), std::ios::binary) << "P6 trailing";
    CHECK_THROWS_AS(static_cast<void>(read_ppm(dir.str("junk.ppm"))), Error);
}

TEST_CASE("writing to an unwritable path throws") {
    CHECK_THROWS_AS(write_png("/nonexistent_dir_xyz/img.png", RgbImage(2, 2)), Error);
}
