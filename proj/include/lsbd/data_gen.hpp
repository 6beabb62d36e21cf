#pragma once

#include "lsbd/metric.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace lsbd {

/// Seeded generator that hands out independent child streams.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    /// Engine for the named stream; the same (seed, stream) always gives the same sequence.
    std::mt19937_64 stream(std::uint64_t id) const;

private:
    std::uint64_t seed_;
};

namespace streams {
inline constexpr std::uint64_t kNoise = 1;
inline constexpr std::uint64_t kTransform = 2;
inline constexpr std::uint64_t kRandomGrid = 3;
}  // namespace streams

/// Grayscale images indexed by a 2-factor grid, stored N x H x W row-major.
struct ImageGrid {
    FactorStructure fs;
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> pixels;

    std::size_t image_bytes() const { return static_cast<std::size_t>(height) * static_cast<std::size_t>(width); }
    std::span<const std::uint8_t> image(std::size_t flat) const {
        return {pixels.data() + flat * image_bytes(), image_bytes()};
    }
};

/// Black images with a white square_size x square_size square, translated
/// with periodic boundaries. Image (i, j) has its square's corner at pixel row
/// i * image_size / n1 and column j * image_size / n2; (0, 0) is the base point.
ImageGrid gen_square_translation(int n1 = 64, int n2 = 64, int image_size = 64, int square_size = 8);

/// Cyclic pixel shift (rows down by dr, columns right by dc).
std::vector<std::uint8_t> cyclic_shift(std::span<const std::uint8_t> image, int height, int width, int dr,
                                       int dc);

struct EmbeddingParams {
    FrequencyVector frequencies;
    double noise_sigma = 0.0;
    std::optional<Matrix> linear_transform;
    std::uint64_t seed = 0;
};

/// Largest linear_transform condition number accepted by gen_perfect_embedding.
inline constexpr double kMaxTransformCondition = 1e6;
/// gen_random_invertible resamples until the condition number is below this.
inline constexpr double kRandomTransformCondition = 1e3;

/// z_g = (cos w_1 theta_{g_1}, sin w_1 theta_{g_1}, ...) + N(0, noise^2), then
/// optionally multiplied by the linear transform.
EncodingGrid gen_perfect_embedding(const FactorStructure& fs, const EmbeddingParams& params);

/// Seeded D x D matrix with i.i.d. standard normal entries and condition number < 1e3.
Matrix gen_random_invertible(int dim, std::uint64_t seed);

double condition_number(const Matrix& m);

/// I.i.d. standard normal encodings; handy as a no-structure baseline.
EncodingGrid gen_gaussian_grid(const FactorStructure& fs, int latent_dim, std::uint64_t seed);

/// Stand-in encoder: centers the flattened images and keeps the top `dim`
/// principal coordinates (same eigenvector conventions as the metric).
EncodingGrid encode_images_pca(const ImageGrid& images, int dim);

}  // namespace lsbd
