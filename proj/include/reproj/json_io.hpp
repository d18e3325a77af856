#pragma once

#include <string>

#include "reproj/geometry.hpp"
#include "reproj/losses.hpp"
#include "reproj/metrics.hpp"
#include "reproj/scene.hpp"

namespace reproj {

// JSON wire formats. Field names are part of the interface:
//   Intrinsics      {"fx":..,"fy":..,"cx":..,"cy":..}
//   RigidTransform  {"rotation":[9 row-major],"translation":[3]}
//   LossConfig      {"lambda_smoothness","alpha","tolerance","scales","loss_kind"}
//                   with defaults applied for missing fields
//   Scene           {"background_depth","background_texture","primitives":[
//                     {"kind","pose","extent","texture":{"kind","params","seed"}}]}
//   DepthMetrics    {"abs_rel","sq_rel","rmse","rmse_log","a1","a2","a3"}

std::string to_json(const Intrinsics& k);
Intrinsics intrinsics_from_json(const std::string& text);

std::string to_json(const RigidTransform& t);
RigidTransform transform_from_json(const std::string& text);

std::string to_json(const LossConfig& config);
LossConfig loss_config_from_json(const std::string& text);

std::string to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);

std::string to_json(const DepthMetrics& m);

/// Read a whole file; throws InvalidInputError when missing or unreadable.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace reproj
