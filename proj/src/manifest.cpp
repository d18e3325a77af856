#include "reproj/manifest.hpp"

#include <filesystem>

#include <json.hpp>

#include "reproj/errors.hpp"
#include "reproj/image_io.hpp"
#include "reproj/json_io.hpp"

namespace reproj {

namespace fs = std::filesystem;
using nlohmann::json;

TripletManifest load_triplet_manifest(const std::string& path) {
    const json j = json::parse(read_text_file(path), nullptr, false);
    if (j.is_discarded()) throw InvalidInputError("malformed manifest JSON: " + path);

    const fs::path base = fs::path(path).parent_path();
    auto resolve = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_string())
            throw InvalidInputError(std::string("manifest is missing path: ") + key);
        fs::path p = j.at(key).get<std::string>();
        if (p.is_relative()) p = base / p;
        if (!fs::exists(p)) throw InvalidInputError("manifest references missing file: " + p.string());
        return p.string();
    };

    TripletManifest m;
    m.target_image = read_png(resolve("target_image"));
    m.previous_image = read_png(resolve("previous_image"));
    m.next_image = read_png(resolve("next_image"));
    m.target_depth = read_pfm_depth(resolve("target_depth"));
    m.previous_depth = read_pfm_depth(resolve("previous_depth"));
    m.next_depth = read_pfm_depth(resolve("next_depth"));
    m.intrinsics = intrinsics_from_json(read_text_file(resolve("intrinsics")));
    m.to_previous = transform_from_json(read_text_file(resolve("transform_to_previous")));
    m.to_next = transform_from_json(read_text_file(resolve("transform_to_next")));

    auto check = [&](int w, int h, const char* what) {
        if (w != m.target_image.width || h != m.target_image.height)
            throw InvalidInputError(std::string("manifest dimensions disagree for ") + what);
    };
    check(m.previous_image.width, m.previous_image.height, "previous_image");
    check(m.next_image.width, m.next_image.height, "next_image");
    check(m.target_depth.width, m.target_depth.height, "target_depth");
    check(m.previous_depth.width, m.previous_depth.height, "previous_depth");
    check(m.next_depth.width, m.next_depth.height, "next_depth");
    if (m.previous_image.channels != m.target_image.channels ||
        m.next_image.channels != m.target_image.channels)
        throw InvalidInputError("manifest images must share the channel count");
    return m;
}

std::vector<SourceFrame> manifest_sources(const TripletManifest& m) {
    std::vector<SourceFrame> sources;
    sources.push_back({m.previous_image, m.previous_depth, m.to_previous});
    sources.push_back({m.next_image, m.next_depth, m.to_next});
    return sources;
}

}  // namespace reproj
