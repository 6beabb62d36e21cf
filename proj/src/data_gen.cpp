#include "lsbd/data_gen.hpp"

#include "lsbd/pca.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lsbd {

std::mt19937_64 SplitRng::stream(std::uint64_t id) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
    return std::mt19937_64(seq);
}

ImageGrid gen_square_translation(int n1, int n2, int image_size, int square_size) {
    if (image_size < 1 || square_size < 1 || square_size > image_size) {
        throw std::invalid_argument("need 1 <= square_size <= image_size");
    }
    if (n1 < 1 || n2 < 1 || image_size % n1 != 0 || image_size % n2 != 0) {
        throw std::invalid_argument("factor sizes must divide the image size");
    }
    ImageGrid out{FactorStructure({{"vertical", n1}, {"horizontal", n2}}), image_size, image_size, {}};
    out.pixels.assign(out.fs.total_size() * out.image_bytes(), 0);
    const int step1 = image_size / n1;
    const int step2 = image_size / n2;
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            const std::size_t flat = flat_index({{i, j}}, out.fs);
            std::uint8_t* img = out.pixels.data() + flat * out.image_bytes();
            for (int a = 0; a < square_size; ++a) {
                const int row = (i * step1 + a) % image_size;
                for (int b = 0; b < square_size; ++b) {
                    const int col = (j * step2 + b) % image_size;
                    img[row * image_size + col] = 255;
                }
            }
        }
    }
    return out;
}

std::vector<std::uint8_t> cyclic_shift(std::span<const std::uint8_t> image, int height, int width, int dr,
                                       int dc) {
    if (image.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
        throw std::invalid_argument("image buffer does not match its dimensions");
    }
    std::vector<std::uint8_t> out(image.size());
    for (int r = 0; r < height; ++r) {
        const int rr = ((r + dr) % height + height) % height;
        for (int c = 0; c < width; ++c) {
            const int cc = ((c + dc) % width + width) % width;
            out[static_cast<std::size_t>(rr * width + cc)] = image[static_cast<std::size_t>(r * width + c)];
        }
    }
    return out;
}

double condition_number(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 1.0;
    const double smallest = sv(sv.size() - 1);
    return smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
}

EncodingGrid gen_perfect_embedding(const FactorStructure& fs, const EmbeddingParams& params) {
    const int K = fs.num_factors();
    if (params.frequencies.size() != K) {
        throw std::invalid_argument("embedding needs one frequency per factor");
    }
    if (!(params.noise_sigma >= 0.0) || !std::isfinite(params.noise_sigma)) {
        throw std::invalid_argument("noise scale must be a finite nonnegative number");
    }
    const Eigen::Index dim = 2 * K;
    Matrix z(static_cast<Eigen::Index>(fs.total_size()), dim);
    for (std::size_t i = 0; i < fs.total_size(); ++i) {
        const GroupIndex g = unflatten(i, fs);
        for (int k = 0; k < K; ++k) {
            const auto [c, s] = grid_cos_sin(params.frequencies[k], g[k], fs.size(k));
            z(static_cast<Eigen::Index>(i), 2 * k) = c;
            z(static_cast<Eigen::Index>(i), 2 * k + 1) = s;
        }
    }
    if (params.noise_sigma > 0.0) {
        auto engine = SplitRng(params.seed).stream(streams::kNoise);
        std::normal_distribution<double> normal(0.0, params.noise_sigma);
        for (Eigen::Index r = 0; r < z.rows(); ++r) {
            for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) += normal(engine);
        }
    }
    if (params.linear_transform) {
        const Matrix& a = *params.linear_transform;
        if (a.rows() != dim || a.cols() != dim) {
            throw std::invalid_argument("linear transform must be " + std::to_string(dim) + "x" +
                                        std::to_string(dim));
        }
        if (!(condition_number(a) < kMaxTransformCondition)) {
            throw std::invalid_argument("linear transform is too ill-conditioned");
        }
        z = (z * a.transpose()).eval();
    }
    return EncodingGrid(fs, std::move(z));
}

Matrix gen_random_invertible(int dim, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("matrix dimension must be >= 1");
    auto engine = SplitRng(seed).stream(streams::kTransform);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        Matrix m(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = normal(engine);
        }
        if (condition_number(m) < kRandomTransformCondition) return m;
    }
    throw std::runtime_error("no well-conditioned random matrix after 100 attempts");
}

EncodingGrid gen_gaussian_grid(const FactorStructure& fs, int latent_dim, std::uint64_t seed) {
    if (latent_dim < 1) throw std::invalid_argument("latent dimension must be >= 1");
    auto engine = SplitRng(seed).stream(streams::kRandomGrid);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(static_cast<Eigen::Index>(fs.total_size()), latent_dim);
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = normal(engine);
    }
    return EncodingGrid(fs, std::move(z));
}

EncodingGrid encode_images_pca(const ImageGrid& images, int dim) {
    const std::size_t n = images.fs.total_size();
    const std::size_t pixels = images.image_bytes();
    if (images.pixels.size() != n * pixels) throw std::invalid_argument("image buffer has the wrong size");
    if (dim < 1 || static_cast<std::size_t>(dim) > std::min(n, pixels)) {
        throw std::invalid_argument("encoding dimension " + std::to_string(dim) + " must be in [1, " +
                                    std::to_string(std::min(n, pixels)) + "]");
    }

    // Second moments accumulated over nonzero pixels only; binary sprites are sparse.
    const auto p = static_cast<Eigen::Index>(pixels);
    Matrix second = Matrix::Zero(p, p);
    Vector mean = Vector::Zero(p);
    std::vector<Eigen::Index> nz;
    for (std::size_t i = 0; i < n; ++i) {
        const auto img = images.image(i);
        nz.clear();
        for (Eigen::Index q = 0; q < p; ++q) {
            if (img[static_cast<std::size_t>(q)] != 0) nz.push_back(q);
        }
        for (Eigen::Index a : nz) {
            const double va = img[static_cast<std::size_t>(a)];
            mean(a) += va;
            for (Eigen::Index b : nz) second(a, b) += va * img[static_cast<std::size_t>(b)];
        }
    }
    const double count = static_cast<double>(n);
    mean /= count;
    const Matrix cov = second / count - mean * mean.transpose();

    const EigenPairs pcs = top_eigenpairs(cov, dim);
    const Eigen::RowVectorXd offset = (mean.transpose() * pcs.vectors);
    Matrix z(static_cast<Eigen::Index>(n), dim);
    for (std::size_t i = 0; i < n; ++i) {
        const auto img = images.image(i);
        Eigen::RowVectorXd row = -offset;
        for (Eigen::Index q = 0; q < p; ++q) {
            const auto v = img[static_cast<std::size_t>(q)];
            if (v != 0) row += static_cast<double>(v) * pcs.vectors.row(q);
        }
        z.row(static_cast<Eigen::Index>(i)) = row;
    }
    return EncodingGrid(images.fs, std::move(z));
}

}  // namespace lsbd
