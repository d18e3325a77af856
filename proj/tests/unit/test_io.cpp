#include <doctest.h>

#include <png.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "reproj/errors.hpp"
#include "reproj/image_io.hpp"
#include "reproj/json_io.hpp"
#include "reproj/manifest.hpp"

using namespace reproj;
using reproj::testing::TestRng;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("reproj_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

}  // namespace

TEST_CASE("pfm round-trip is bit exact") {
    TempDir dir;
    TestRng rng(71);
    ScalarGrid map(13, 7);
    for (auto& v : map.values) v = static_cast<float>(rng.uniform(-50.0, 50.0));
    write_pfm(dir.file("map.pfm"), map);
    const ScalarGrid back = read_pfm(dir.file("map.pfm"));
    CHECK(back.width == 13);
    CHECK(back.height == 7);
    CHECK(back.values == map.values);

    // Rewriting what was read reproduces the bytes exactly.
    write_pfm(dir.file("map2.pfm"), back);
    CHECK(read_bytes(dir.file("map.pfm")) == read_bytes(dir.file("map2.pfm")));
}

TEST_CASE("pfm byte-level fixture decodes with bottom-up rows") {
    TempDir dir;
    const float vals[4] = {1.5f, -2.25f, 0.5f, 100.0f};
    std::ofstream out(dir.file("fix.pfm"), std::ios::binary);
    out << "Pf\n2 2\n-1.0\n";
    out.write(reinterpret_cast<const char*>(vals), 16);
    out.close();

    const ScalarGrid map = read_pfm(dir.file("fix.pfm"));
    // First stored row is the bottom image row.
    CHECK(map.at(0, 1) == 1.5);
    CHECK(map.at(1, 1) == -2.25);
    CHECK(map.at(0, 0) == 0.5);
    CHECK(map.at(1, 0) == 100.0);
}

TEST_CASE("big-endian pfm is accepted and normalized on write") {
    TempDir dir;
    const float vals[2] = {3.5f, -8.0f};
    uint32_t swapped[2];
    std::memcpy(swapped, vals, 8);
    swapped[0] = __builtin_bswap32(swapped[0]);
    swapped[1] = __builtin_bswap32(swapped[1]);
    std::ofstream out(dir.file("be.pfm"), std::ios::binary);
    out << "Pf\n2 1\n1.0\n";
    out.write(reinterpret_cast<const char*>(swapped), 8);
    out.close();

    const ScalarGrid map = read_pfm(dir.file("be.pfm"));
    CHECK(map.at(0, 0) == 3.5);
    CHECK(map.at(1, 0) == -8.0);

    write_pfm(dir.file("le.pfm"), map);
    const std::string bytes = read_bytes(dir.file("le.pfm"));
    CHECK(bytes.find("-1.0") != std::string::npos);
    const ScalarGrid back = read_pfm(dir.file("le.pfm"));
    CHECK(back.values == map.values);
}

TEST_CASE("pfm rejects malformed inputs") {
    TempDir dir;
    write_text_file(dir.file("color.pfm"), "PF\n1 1\n-1.0\n............");
    CHECK_THROWS_AS(read_pfm(dir.file("color.pfm")), InvalidInputError);

    write_text_file(dir.file("bad.pfm"), "Px\n1 1\n-1.0\n....");
    CHECK_THROWS_AS(read_pfm(dir.file("bad.pfm")), InvalidInputError);

    write_text_file(dir.file("trunc.pfm"), "Pf\n4 4\n-1.0\nxy");
    CHECK_THROWS_AS(read_pfm(dir.file("trunc.pfm")), InvalidInputError);

    const float nan_val = std::nanf("");
    std::ofstream out(dir.file("nan.pfm"), std::ios::binary);
    out << "Pf\n1 1\n-1.0\n";
    out.write(reinterpret_cast<const char*>(&nan_val), 4);
    out.close();
    CHECK_THROWS_AS(read_pfm(dir.file("nan.pfm")), InvalidInputError);

    ScalarGrid with_nan(1, 1);
    with_nan.values[0] = std::nan("");
    CHECK_THROWS_AS(write_pfm(dir.file("out.pfm"), with_nan), InvalidInputError);

    CHECK_THROWS_AS(read_pfm(dir.file("missing.pfm")), InvalidInputError);
}

TEST_CASE("png round-trip at 8-bit quantization") {
    TempDir dir;
    ImageBuffer solid(3, 4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) {
            solid.at(x, y, 0) = 37.0 / 255.0;
            solid.at(x, y, 1) = 200.0 / 255.0;
            solid.at(x, y, 2) = 1.0;
        }
    write_png(dir.file("a.png"), solid);
    const ImageBuffer back = read_png(dir.file("a.png"));
    CHECK(back.channels == 3);
    CHECK(back.values == solid.values);
    CHECK(back.at(0, 0, 2) == 1.0);  // 255 maps to exactly 1.0

    write_png(dir.file("b.png"), back);
    CHECK(read_bytes(dir.file("a.png")) == read_bytes(dir.file("b.png")));

    // Grayscale path.
    TestRng rng(72);
    ImageBuffer gray(1, 6, 5);
    for (auto& v : gray.values) v = std::round(rng.uniform(0.0, 1.0) * 255.0) / 255.0;
    write_png(dir.file("g.png"), gray);
    const ImageBuffer gback = read_png(dir.file("g.png"));
    CHECK(gback.channels == 1);
    for (size_t i = 0; i < gray.values.size(); ++i)
        CHECK(gback.values[i] == doctest::Approx(gray.values[i]).epsilon(1e-12));
}

TEST_CASE("sixteen-bit png inputs are rejected") {
    TempDir dir;
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = 2;
    image.height = 2;
    image.format = PNG_FORMAT_LINEAR_Y;
    const uint16_t pixels[4] = {0, 65535, 1024, 2048};
    REQUIRE(png_image_write_to_file(&image, dir.file("deep.png").c_str(), 0, pixels, 0, nullptr));
    CHECK_THROWS_AS(read_png(dir.file("deep.png")), InvalidInputError);
}

TEST_CASE("mask png uses black and white") {
    TempDir dir;
    BinaryMask mask(5, 3, 1);
    mask.at(2, 1) = 0;
    write_mask_png(dir.file("m.png"), mask);
    const ImageBuffer img = read_png(dir.file("m.png"));
    CHECK(img.at(0, 0, 0) == 1.0);
    CHECK(img.at(2, 1, 0) == 0.0);
    const BinaryMask back = read_mask_png(dir.file("m.png"));
    CHECK(back.values == mask.values);
}

TEST_CASE("viridis table endpoints and colormapped output") {
    CHECK(kViridis[0][0] == 68);
    CHECK(kViridis[0][1] == 1);
    CHECK(kViridis[0][2] == 84);
    CHECK(kViridis[255][0] == 253);
    CHECK(kViridis[255][1] == 231);
    CHECK(kViridis[255][2] == 37);

    TempDir dir;
    ScalarGrid m(4, 2);
    m.values = {0.0, 0.25, 0.5, 0.75, 1.0, 2.0, -1.0, 0.1};
    write_colormapped_png(dir.file("c.png"), m);
    const ImageBuffer img = read_png(dir.file("c.png"));
    CHECK(img.channels == 3);
    // Values are clamped into [lo,hi] before the lookup.
    CHECK(img.at(1, 1, 0) == doctest::Approx(253.0 / 255.0));  // 2.0 -> top entry
    CHECK(img.at(2, 1, 2) == doctest::Approx(84.0 / 255.0));   // -1.0 -> bottom entry
}

TEST_CASE("triplet manifest loads and validates") {
    TempDir dir;
    TestRng rng(73);
    const int w = 10, h = 8;
    const ImageBuffer img = reproj::testing::noise_image(rng, 3, w, h);
    write_png(dir.file("t.png"), img);
    write_png(dir.file("p.png"), img);
    write_png(dir.file("n.png"), img);
    DepthMap depth(w, h, 4.0);
    write_pfm_depth(dir.file("t.pfm"), depth);
    write_pfm_depth(dir.file("p.pfm"), depth);
    write_pfm_depth(dir.file("n.pfm"), depth);
    write_text_file(dir.file("k.json"), to_json(Intrinsics(50, 50, 4.5, 3.5)));
    write_text_file(dir.file("prev.json"), to_json(RigidTransform::identity()));
    write_text_file(dir.file("next.json"), to_json(RigidTransform::identity()));

    const std::string manifest = R"({
      "target_image": "t.png", "previous_image": "p.png", "next_image": "n.png",
      "target_depth": "t.pfm", "previous_depth": "p.pfm", "next_depth": "n.pfm",
      "intrinsics": "k.json",
      "transform_to_previous": "prev.json", "transform_to_next": "next.json"
    })";
    write_text_file(dir.file("m.json"), manifest);

    const TripletManifest m = load_triplet_manifest(dir.file("m.json"));
    CHECK(m.target_image.width == w);
    CHECK(m.intrinsics.fx == 50);
    CHECK(manifest_sources(m).size() == 2);

    // Mismatched dimensions are rejected.
    write_pfm_depth(dir.file("n.pfm"), DepthMap(w + 1, h, 4.0));
    CHECK_THROWS_AS(load_triplet_manifest(dir.file("m.json")), InvalidInputError);

    fs::remove(dir.file("p.png"));
    CHECK_THROWS_AS(load_triplet_manifest(dir.file("m.json")), InvalidInputError);
}
