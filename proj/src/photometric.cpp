#include "reproj/photometric.hpp"

#include <algorithm>
#include <cmath>

#include "reproj/errors.hpp"

namespace reproj {

namespace {

constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

// Reflection padding without edge repeat: -1 -> 1, n -> n-2.
inline int reflect(int i, int n) {
    if (n == 1) return 0;
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
}

}  // namespace

LossMap ssim_map(const ImageBuffer& a, const ImageBuffer& b) {
    if (!a.same_shape(b)) throw InvalidInputError("ssim_map inputs must share shape");
    LossMap out(a.width, a.height, 0.0);
    const double inv9 = 1.0 / 9.0;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            double ssim_sum = 0.0;
            for (int c = 0; c < a.channels; ++c) {
                double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
                for (int dy = -1; dy <= 1; ++dy) {
                    const int yy = reflect(y + dy, a.height);
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int xx = reflect(x + dx, a.width);
                        const double va = a.at(xx, yy, c);
                        const double vb = b.at(xx, yy, c);
                        sa += va;
                        sb += vb;
                        saa += va * va;
                        sbb += vb * vb;
                        sab += va * vb;
                    }
                }
                const double mu_a = sa * inv9;
                const double mu_b = sb * inv9;
                const double var_a = saa * inv9 - mu_a * mu_a;
                const double var_b = sbb * inv9 - mu_b * mu_b;
                const double cov = sab * inv9 - mu_a * mu_b;
                ssim_sum += ((2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2)) /
                            ((mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2));
            }
            out.at(x, y) = ssim_sum / a.channels;
        }
    }
    return out;
}

LossMap photometric_error(const ImageBuffer& a, const ImageBuffer& b, double alpha) {
    if (!a.same_shape(b)) throw InvalidInputError("photometric_error inputs must share shape");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInputError("alpha must lie in [0,1]");
    const LossMap ssim = ssim_map(a, b);
    LossMap pe(a.width, a.height);
    size_t i = 0;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x, ++i) {
            double l1 = 0.0;
            for (int c = 0; c < a.channels; ++c) l1 += std::abs(a.at(x, y, c) - b.at(x, y, c));
            l1 /= a.channels;
            const double v = alpha * (1.0 - ssim.values[i]) * 0.5 + (1.0 - alpha) * l1;
            pe.values[i] = std::clamp(v, 0.0, 1.0);
        }
    }
    return pe;
}

double smoothness_loss(const DisparityMap& disparity, const ImageBuffer& image) {
    if (disparity.width != image.width || disparity.height != image.height)
        throw InvalidInputError("smoothness_loss dimensions must agree");
    double mean = 0.0;
    for (double d : disparity.values) mean += d;
    mean /= static_cast<double>(disparity.size());
    if (!(mean > 0.0)) throw InvalidInputError("mean disparity must be positive");

    const int w = disparity.width;
    const int h = disparity.height;
    double sum_x = 0.0, sum_y = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x + 1 < w; ++x) {
            double grad_img = 0.0;
            for (int c = 0; c < image.channels; ++c)
                grad_img += std::abs(image.at(x + 1, y, c) - image.at(x, y, c));
            grad_img /= image.channels;
            sum_x += std::abs(disparity.at(x + 1, y) - disparity.at(x, y)) / mean *
                     std::exp(-grad_img);
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double grad_img = 0.0;
            for (int c = 0; c < image.channels; ++c)
                grad_img += std::abs(image.at(x, y + 1, c) - image.at(x, y, c));
            grad_img /= image.channels;
            sum_y += std::abs(disparity.at(x, y + 1) - disparity.at(x, y)) / mean *
                     std::exp(-grad_img);
        }
    }
    const double mean_x = (w > 1) ? sum_x / (static_cast<double>(w - 1) * h) : 0.0;
    const double mean_y = (h > 1) ? sum_y / (static_cast<double>(h - 1) * w) : 0.0;
    return mean_x + mean_y;
}

}  // namespace reproj
