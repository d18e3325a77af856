#include "reproj/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reproj/errors.hpp"

namespace reproj {

using nlohmann::json;

namespace {

json parse(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InvalidInputError(std::string("malformed JSON for ") + what);
    return j;
}

json transform_to_json(const RigidTransform& t) {
    std::vector<double> rot(9);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) rot[r * 3 + c] = t.rotation()(r, c);
    return json{{"rotation", rot},
                {"translation", {t.translation().x(), t.translation().y(), t.translation().z()}}};
}

RigidTransform transform_from(const json& j) {
    if (!j.contains("rotation") || !j.contains("translation"))
        throw InvalidInputError("transform JSON needs rotation and translation");
    const auto rot = j.at("rotation").get<std::vector<double>>();
    const auto tr = j.at("translation").get<std::vector<double>>();
    if (rot.size() != 9 || tr.size() != 3)
        throw InvalidInputError("transform JSON needs 9 rotation and 3 translation numbers");
    Eigen::Matrix3d r;
    for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 3; ++c) r(i, c) = rot[i * 3 + c];
    return RigidTransform(r, Eigen::Vector3d(tr[0], tr[1], tr[2]));
}

json texture_to_json(const Texture& t) {
    json params;
    if (t.kind == TextureKind::checker) {
        params = {{"period", t.period},
                  {"color_a", {t.color_a[0], t.color_a[1], t.color_a[2]}},
                  {"color_b", {t.color_b[0], t.color_b[1], t.color_b[2]}}};
        return json{{"kind", "checker"}, {"params", params}, {"seed", t.seed}};
    }
    params = {{"feature_size", t.feature_size},
              {"octaves", t.octaves},
              {"low", t.low},
              {"high", t.high}};
    return json{{"kind", "value_noise"}, {"params", params}, {"seed", t.seed}};
}

Texture texture_from(const json& j) {
    Texture t;
    const std::string kind = j.at("kind").get<std::string>();
    t.seed = j.value("seed", 0ULL);
    const json params = j.value("params", json::object());
    if (kind == "checker") {
        t.kind = TextureKind::checker;
        t.period = params.value("period", 1.0);
        if (!(t.period > 0.0)) throw InvalidInputError("checker period must be positive");
        if (params.contains("color_a")) {
            const auto c = params.at("color_a").get<std::vector<double>>();
            if (c.size() != 3) throw InvalidInputError("color_a needs 3 components");
            std::copy(c.begin(), c.end(), t.color_a);
        }
        if (params.contains("color_b")) {
            const auto c = params.at("color_b").get<std::vector<double>>();
            if (c.size() != 3) throw InvalidInputError("color_b needs 3 components");
            std::copy(c.begin(), c.end(), t.color_b);
        }
    } else if (kind == "value_noise") {
        t.kind = TextureKind::value_noise;
        t.feature_size = params.value("feature_size", 1.0);
        t.octaves = params.value("octaves", 2);
        t.low = params.value("low", 0.0);
        t.high = params.value("high", 1.0);
        if (!(t.feature_size > 0.0) || t.octaves < 1)
            throw InvalidInputError("value_noise needs positive feature_size and octaves >= 1");
        if (!(t.low >= 0.0 && t.high <= 1.0 && t.low <= t.high))
            throw InvalidInputError("value_noise range must satisfy 0 <= low <= high <= 1");
    } else {
        throw InvalidInputError("unknown texture kind: " + kind);
    }
    return t;
}

}  // namespace

std::string to_json(const Intrinsics& k) {
    return json{{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}}.dump();
}

Intrinsics intrinsics_from_json(const std::string& text) {
    const json j = parse(text, "intrinsics");
    for (const char* key : {"fx", "fy", "cx", "cy"})
        if (!j.contains(key) || !j.at(key).is_number())
            throw InvalidInputError(std::string("intrinsics JSON needs numeric ") + key);
    return Intrinsics(j.at("fx").get<double>(), j.at("fy").get<double>(), j.at("cx").get<double>(),
                      j.at("cy").get<double>());
}

std::string to_json(const RigidTransform& t) { return transform_to_json(t).dump(); }

RigidTransform transform_from_json(const std::string& text) {
    return transform_from(parse(text, "transform"));
}

std::string to_json(const LossConfig& config) {
    return json{{"lambda_smoothness", config.lambda_smoothness},
                {"alpha", config.alpha},
                {"tolerance", config.tolerance},
                {"scales", config.scales},
                {"loss_kind", to_string(config.loss_kind)}}
        .dump();
}

LossConfig loss_config_from_json(const std::string& text) {
    const json j = parse(text, "loss config");
    LossConfig c;
    c.lambda_smoothness = j.value("lambda_smoothness", c.lambda_smoothness);
    c.alpha = j.value("alpha", c.alpha);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.scales = j.value("scales", c.scales);
    if (j.contains("loss_kind"))
        c.loss_kind = loss_kind_from_string(j.at("loss_kind").get<std::string>());
    c.validate();
    return c;
}

std::string to_json(const Scene& scene) {
    json prims = json::array();
    for (const auto& p : scene.primitives) {
        json e = {{"kind", p.kind == PrimitiveKind::plane ? "plane" : "sphere"},
                  {"pose", transform_to_json(p.pose)},
                  {"extent", p.extent},
                  {"texture", texture_to_json(p.texture)}};
        prims.push_back(std::move(e));
    }
    return json{{"background_depth", scene.background_depth},
                {"background_texture", texture_to_json(scene.background_texture)},
                {"primitives", prims}}
        .dump(2);
}

Scene scene_from_json(const std::string& text) {
    const json j = parse(text, "scene");
    Scene scene;
    scene.background_depth = j.value("background_depth", 90.0);
    if (!(scene.background_depth > 0.0))
        throw InvalidInputError("background_depth must be positive");
    if (j.contains("background_texture"))
        scene.background_texture = texture_from(j.at("background_texture"));
    for (const auto& e : j.value("primitives", json::array())) {
        Primitive p;
        const std::string kind = e.at("kind").get<std::string>();
        if (kind == "plane")
            p.kind = PrimitiveKind::plane;
        else if (kind == "sphere")
            p.kind = PrimitiveKind::sphere;
        else
            throw InvalidInputError("unknown primitive kind: " + kind);
        p.pose = transform_from(e.at("pose"));
        p.extent = e.at("extent").get<std::vector<double>>();
        const size_t need = p.kind == PrimitiveKind::plane ? 2 : 1;
        if (p.extent.size() != need)
            throw InvalidInputError("primitive extent has the wrong arity");
        for (double x : p.extent)
            if (!(x > 0.0)) throw InvalidInputError("primitive extent must be positive");
        p.texture = texture_from(e.at("texture"));
        scene.primitives.push_back(std::move(p));
    }
    return scene;
}

std::string to_json(const DepthMetrics& m) {
    return json{{"abs_rel", m.abs_rel}, {"sq_rel", m.sq_rel},   {"rmse", m.rmse},
                {"rmse_log", m.rmse_log}, {"a1", m.a1},         {"a2", m.a2},
                {"a3", m.a3}}
        .dump();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot write file: " + path);
    out << text;
}

}  // namespace reproj
