#pragma once

#include <string>

#include "reproj/buffers.hpp"
#include "reproj/geometry.hpp"
#include "reproj/losses.hpp"

namespace reproj {

/// Frame-triplet manifest, a JSON document of file paths:
///   {"target_image","previous_image","next_image",
///    "target_depth","previous_depth","next_depth",
///    "intrinsics","transform_to_previous","transform_to_next"}
/// Relative paths resolve against the manifest's directory. Images are PNG,
/// depths PFM, the rest JSON.
struct TripletManifest {
    ImageBuffer target_image;
    ImageBuffer previous_image;
    ImageBuffer next_image;
    DepthMap target_depth;
    DepthMap previous_depth;
    DepthMap next_depth;
    Intrinsics intrinsics;
    RigidTransform to_previous;
    RigidTransform to_next;
};

/// Loads and cross-checks every referenced file; throws InvalidInputError on
/// missing files, parse failures, or mismatched dimensions.
TripletManifest load_triplet_manifest(const std::string& path);

/// The two adjacent frames as loss inputs, previous first.
std::vector<SourceFrame> manifest_sources(const TripletManifest& m);

}  // namespace reproj
