#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "reproj/errors.hpp"
#include "reproj/image_io.hpp"
#include "reproj/json_io.hpp"
#include "reproj/losses.hpp"
#include "reproj/manifest.hpp"
#include "reproj/metrics.hpp"
#include "reproj/scene.hpp"
#include "reproj/warp.hpp"

namespace fs = std::filesystem;
using namespace reproj;

namespace {

struct RenderSceneArgs {
    std::string scene, camera, pose, out_prefix;
    int width = 640, height = 192;
};

struct FrameArgs {
    std::string manifest, frame = "prev", out_prefix, out;
    double tolerance = 0.3;
};

struct CompareArgs {
    std::string manifest, config, out_dir;
};

struct OracleArgs {
    std::string seeds = "0..49", report;
    double tolerance = 0.3;
    int width = 640, height = 192;
};

struct EvalArgs {
    std::string pred_dir, gt_dir, report;
    bool median_scale = false;
    double cap = kDefaultDepthCap;
};

bool is_previous(const std::string& frame) {
    if (frame == "prev" || frame == "previous") return true;
    if (frame == "next") return false;
    throw InvalidInputError("--frame must be prev or next, got: " + frame);
}

void cmd_render_scene(const RenderSceneArgs& a) {
    const Scene scene = scene_from_json(read_text_file(a.scene));
    const Intrinsics k = intrinsics_from_json(read_text_file(a.camera));
    const RigidTransform pose = transform_from_json(read_text_file(a.pose));
    const RenderOutput out = render(scene, k, pose, a.width, a.height);
    write_png(a.out_prefix + "_image.png", out.image);
    write_pfm_depth(a.out_prefix + "_depth.pfm", out.depth);
    std::cout << "wrote " << a.out_prefix << "_image.png and " << a.out_prefix << "_depth.pfm\n";
}

void cmd_reconstruct(const FrameArgs& a) {
    const TripletManifest m = load_triplet_manifest(a.manifest);
    const bool prev = is_previous(a.frame);
    const ImageBuffer& source = prev ? m.previous_image : m.next_image;
    const RigidTransform& t = prev ? m.to_previous : m.to_next;
    const auto r = reconstruct(source, m.target_depth, m.intrinsics, t);

    write_png(a.out_prefix + "_reconstruction.png", r.image);
    ScalarGrid plane(r.grid.width, r.grid.height);
    plane.values = r.grid.u;
    write_pfm(a.out_prefix + "_u.pfm", plane);
    plane.values = r.grid.v;
    write_pfm(a.out_prefix + "_v.pfm", plane);
    plane.values = r.grid.z_proj;
    write_pfm(a.out_prefix + "_zproj.pfm", plane);
    std::cout << "wrote reconstruction and sample-grid maps to " << a.out_prefix << "_*\n";
}

void cmd_occlusion_mask(const FrameArgs& a) {
    const TripletManifest m = load_triplet_manifest(a.manifest);
    const bool prev = is_previous(a.frame);
    const DepthMap& source_depth = prev ? m.previous_depth : m.next_depth;
    const RigidTransform& t = prev ? m.to_previous : m.to_next;
    const SampleGrid grid = reproject(m.target_depth, m.intrinsics, t);
    const BinaryMask mask = occlusion_mask(grid, source_depth, a.tolerance);
    write_mask_png(a.out, mask);
    std::cout << "wrote " << a.out << "\n";
}

void cmd_compare_losses(const CompareArgs& a) {
    const TripletManifest m = load_triplet_manifest(a.manifest);
    const LossConfig config =
        a.config.empty() ? LossConfig{} : loss_config_from_json(read_text_file(a.config));
    fs::create_directories(a.out_dir);
    const auto path = [&](const std::string& name) { return (fs::path(a.out_dir) / name).string(); };

    const FrameSet fs_full =
        build_frame_set(m.target_image, m.target_depth, manifest_sources(m), m.intrinsics);

    std::vector<LossMap> pe;
    std::vector<BinaryMask> omega;
    for (const auto& f : fs_full.frames) {
        pe.push_back(photometric_error(fs_full.target, f.reconstruction, config.alpha));
        omega.push_back(occlusion_mask(f.grid, f.source_depth, config.tolerance));
    }

    const auto min_loss = min_reprojection(pe);
    const auto no_min = nonoccluded_min(pe, omega);
    const LossMap no_avg = nonoccluded_average(pe, omega);

    auto absdiff = [](const LossMap& x, const LossMap& y) {
        LossMap d(x.width, x.height);
        for (size_t i = 0; i < d.values.size(); ++i)
            d.values[i] = std::abs(x.values[i] - y.values[i]);
        return d;
    };

    write_png(path("target.png"), fs_full.target);
    write_png(path("reconstruction_previous.png"), fs_full.frames[0].reconstruction);
    write_png(path("reconstruction_next.png"), fs_full.frames[1].reconstruction);
    write_colormapped_png(path("pe_previous.png"), pe[0]);
    write_colormapped_png(path("pe_next.png"), pe[1]);
    write_mask_png(path("occlusion_previous.png"), omega[0]);
    write_mask_png(path("occlusion_next.png"), omega[1]);
    write_colormapped_png(path("loss_min_reprojection.png"), min_loss.loss);
    write_colormapped_png(path("loss_nonoccluded_min.png"), no_min.loss);
    write_colormapped_png(path("loss_nonoccluded_average.png"), no_avg);
    write_colormapped_png(path("diff_nonoccluded_min.png"), absdiff(no_min.loss, min_loss.loss));
    write_colormapped_png(path("diff_nonoccluded_average.png"), absdiff(no_avg, min_loss.loss));
    write_mask_png(path("selection_min_reprojection.png"), min_loss.selection);
    write_mask_png(path("selection_nonoccluded_min.png"), no_min.selection);
    std::cout << "wrote 14 panels to " << a.out_dir << "\n";
}

std::pair<uint64_t, uint64_t> parse_seed_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos)
        throw InvalidInputError("--seeds expects a range like 0..49, got: " + text);
    try {
        const uint64_t lo = std::stoull(text.substr(0, dots));
        const uint64_t hi = std::stoull(text.substr(dots + 2));
        if (hi < lo) throw InvalidInputError("--seeds range is empty: " + text);
        return {lo, hi};
    } catch (const std::invalid_argument&) {
        throw InvalidInputError("--seeds expects numbers around '..': " + text);
    } catch (const std::out_of_range&) {
        throw InvalidInputError("--seeds numbers out of range: " + text);
    }
}

void cmd_oracle_check(const OracleArgs& a) {
    const auto [lo, hi] = parse_seed_range(a.seeds);
    nlohmann::json results = nlohmann::json::array();
    double min_agreement = 1.0, sum = 0.0;
    for (uint64_t seed = lo; seed <= hi; ++seed) {
        const OracleCheckResult r = run_oracle_check(seed, a.tolerance, a.width, a.height);
        results.push_back({{"seed", seed}, {"agreement", r.agreement}});
        min_agreement = std::min(min_agreement, r.agreement);
        sum += r.agreement;
        std::cout << "seed " << seed << ": agreement " << r.agreement << "\n";
    }
    const double mean = sum / static_cast<double>(hi - lo + 1);
    nlohmann::json report = {{"tolerance", a.tolerance}, {"width", a.width},
                             {"height", a.height},       {"results", results},
                             {"min_agreement", min_agreement}, {"mean_agreement", mean}};
    if (!a.report.empty()) write_text_file(a.report, report.dump(2) + "\n");
    std::cout << "min agreement " << min_agreement << ", mean " << mean << "\n";
}

DepthMap load_depth_lenient(const std::string& path) {
    const ScalarGrid grid = read_pfm(path);
    DepthMap d(grid.width, grid.height);
    d.values = grid.values;  // zeros mark missing ground truth
    return d;
}

void cmd_eval_depth(const EvalArgs& a) {
    std::vector<fs::path> preds;
    for (const auto& entry : fs::directory_iterator(a.pred_dir))
        if (entry.path().extension() == ".pfm") preds.push_back(entry.path());
    std::sort(preds.begin(), preds.end());
    if (preds.empty()) throw InvalidInputError("no .pfm predictions in " + a.pred_dir);

    DepthMetrics sum;
    size_t count = 0;
    for (const auto& pred_path : preds) {
        const fs::path gt_path = fs::path(a.gt_dir) / pred_path.filename();
        if (!fs::exists(gt_path))
            throw InvalidInputError("missing ground truth for " + pred_path.filename().string());
        DepthMap pred = load_depth_lenient(pred_path.string());
        const DepthMap gt = load_depth_lenient(gt_path.string());
        if (pred.width != gt.width || pred.height != gt.height)
            throw InvalidInputError("dimension mismatch for " + pred_path.filename().string());
        BinaryMask valid(gt.width, gt.height);
        for (size_t i = 0; i < valid.values.size(); ++i)
            valid.values[i] = gt.values[i] > 0.0 ? 1 : 0;
        if (a.median_scale) {
            const double scale = median_scaling(pred, gt, valid);
            for (auto& v : pred.values) v *= scale;
        }
        const DepthMetrics m = depth_metrics(pred, gt, valid, a.cap);
        sum.abs_rel += m.abs_rel;
        sum.sq_rel += m.sq_rel;
        sum.rmse += m.rmse;
        sum.rmse_log += m.rmse_log;
        sum.a1 += m.a1;
        sum.a2 += m.a2;
        sum.a3 += m.a3;
        ++count;
    }
    const double n = static_cast<double>(count);
    DepthMetrics mean{sum.abs_rel / n, sum.sq_rel / n, sum.rmse / n, sum.rmse_log / n,
                      sum.a1 / n,      sum.a2 / n,     sum.a3 / n};
    std::cout << metrics_table(mean);
    if (!a.report.empty()) write_text_file(a.report, to_json(mean) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"view-synthesis, occlusion-masking and photometric-loss toolkit"};
    app.require_subcommand(1);

    RenderSceneArgs render_args;
    auto* render_cmd = app.add_subcommand("render-scene", "ray-cast a scene to image and depth");
    render_cmd->add_option("--scene", render_args.scene, "scene JSON")->required();
    render_cmd->add_option("--camera", render_args.camera, "intrinsics JSON")->required();
    render_cmd->add_option("--pose", render_args.pose, "camera-to-world pose JSON")->required();
    render_cmd->add_option("--out-prefix", render_args.out_prefix)->required();
    render_cmd->add_option("--width", render_args.width);
    render_cmd->add_option("--height", render_args.height);

    FrameArgs recon_args;
    auto* recon_cmd = app.add_subcommand("reconstruct", "warp an adjacent frame into the target");
    recon_cmd->add_option("--manifest", recon_args.manifest, "triplet manifest JSON")->required();
    recon_cmd->add_option("--frame", recon_args.frame, "prev or next")->required();
    recon_cmd->add_option("--out-prefix", recon_args.out_prefix)->required();

    FrameArgs occ_args;
    auto* occ_cmd = app.add_subcommand("occlusion-mask", "reprojected-depth occlusion mask");
    occ_cmd->add_option("--manifest", occ_args.manifest)->required();
    occ_cmd->add_option("--frame", occ_args.frame)->required();
    occ_cmd->add_option("--tolerance", occ_args.tolerance);
    occ_cmd->add_option("--out", occ_args.out)->required();

    CompareArgs cmp_args;
    auto* cmp_cmd = app.add_subcommand("compare-losses", "panel set for the loss variants");
    cmp_cmd->add_option("--manifest", cmp_args.manifest)->required();
    cmp_cmd->add_option("--config", cmp_args.config, "loss config JSON (defaults when omitted)");
    cmp_cmd->add_option("--out-dir", cmp_args.out_dir)->required();

    OracleArgs oracle_args;
    auto* oracle_cmd =
        app.add_subcommand("oracle-check", "occlusion mask vs z-buffer oracle on seeded scenes");
    oracle_cmd->add_option("--seeds", oracle_args.seeds, "inclusive range, e.g. 0..49");
    oracle_cmd->add_option("--tolerance", oracle_args.tolerance);
    oracle_cmd->add_option("--report", oracle_args.report, "JSON report path");
    oracle_cmd->add_option("--width", oracle_args.width);
    oracle_cmd->add_option("--height", oracle_args.height);

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval-depth", "standard depth metrics over PFM pairs");
    eval_cmd->add_option("--pred-dir", eval_args.pred_dir)->required();
    eval_cmd->add_option("--gt-dir", eval_args.gt_dir)->required();
    eval_cmd->add_flag("--median-scale", eval_args.median_scale);
    eval_cmd->add_option("--cap", eval_args.cap);
    eval_cmd->add_option("--report", eval_args.report, "JSON report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (render_cmd->parsed()) cmd_render_scene(render_args);
        if (recon_cmd->parsed()) cmd_reconstruct(recon_args);
        if (occ_cmd->parsed()) cmd_occlusion_mask(occ_args);
        if (cmp_cmd->parsed()) cmd_compare_losses(cmp_args);
        if (oracle_cmd->parsed()) cmd_oracle_check(oracle_args);
        if (eval_cmd->parsed()) cmd_eval_depth(eval_args);
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return 2;
    } catch (const InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
