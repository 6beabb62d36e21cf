#include "lsbd/data_gen.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace lsbd;

namespace {

Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

Matrix images_as_matrix(const ImageGrid& images) {
    Matrix x(static_cast<Eigen::Index>(images.fs.total_size()), static_cast<Eigen::Index>(images.image_bytes()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const auto img = images.image(static_cast<std::size_t>(i));
        for (Eigen::Index q = 0; q < x.cols(); ++q) x(i, q) = img[static_cast<std::size_t>(q)];
    }
    return x;
}

}  // namespace

TEST_CASE("square translation dataset") {
    const ImageGrid images = gen_square_translation();
    CHECK(images.fs.sizes() == std::vector<int>{64, 64});
    CHECK(images.fs.name(0) == "vertical");
    CHECK(images.fs.name(1) == "horizontal");
    CHECK(images.pixels.size() == 4096u * 64u * 64u);

    const auto base = images.image(0);
    for (int r = 0; r < 64; ++r) {
        for (int c = 0; c < 64; ++c) {
            CHECK(base[static_cast<std::size_t>(r * 64 + c)] == ((r < 8 && c < 8) ? 255 : 0));
        }
    }

    // A vertical shift of 60 wraps the square around the bottom edge.
    const auto wrapped = images.image(flat_index({{60, 0}}, images.fs));
    for (int r : {60, 63, 0, 3}) CHECK(wrapped[static_cast<std::size_t>(r * 64)] == 255);
    for (int r : {4, 59}) CHECK(wrapped[static_cast<std::size_t>(r * 64)] == 0);

    for (std::size_t i = 0; i < images.fs.total_size(); i += 97) {
        const auto img = images.image(i);
        CHECK(std::accumulate(img.begin(), img.end(), 0L) == 64L * 255L);
    }
}

TEST_CASE("square dataset is equivariant under cyclic shifts") {
    const ImageGrid images = gen_square_translation(8, 16, 32, 5);
    for (std::size_t i = 0; i < images.fs.total_size(); i += 7) {
        const GroupIndex g = unflatten(i, images.fs);
        for (const GroupIndex h : {GroupIndex{{1, 0}}, GroupIndex{{0, 3}}, GroupIndex{{7, 15}}}) {
            const auto shifted = cyclic_shift(images.image(i), 32, 32, h[0] * 4, h[1] * 2);
            const auto target = images.image(flat_index(compose(g, h, images.fs), images.fs));
            CHECK(std::equal(shifted.begin(), shifted.end(), target.begin()));
        }
    }
    CHECK_THROWS_AS(gen_square_translation(6, 8, 64, 8), std::invalid_argument);
    CHECK_THROWS_AS(gen_square_translation(8, 8, 16, 17), std::invalid_argument);
    CHECK_THROWS_AS(cyclic_shift(images.image(0), 31, 32, 0, 0), std::invalid_argument);
}

TEST_CASE("perfect embedding") {
    const FactorStructure fs = FactorStructure::from_sizes(std::vector<int>{4, 4});
    const EncodingGrid grid = gen_perfect_embedding(fs, {{{1, 1}}, 0.0, std::nullopt, 0});
    CHECK(grid.row({{1, 0}}) == vec({0, 1, 1, 0}));
    CHECK(grid.row({{0, 0}}) == vec({1, 0, 1, 0}));
    CHECK(grid.row({{2, 3}}) == vec({-1, 0, 0, -1}));

    const FactorStructure big = FactorStructure::from_sizes(std::vector<int>{64, 64});
    const Matrix z = gen_perfect_embedding(big, {{{1, 1}}, 0.0, std::nullopt, 0}).data();
    for (int k = 0; k < 2; ++k) {
        CHECK((z.middleCols(2 * k, 2).rowwise().norm().array() - 1.0).abs().maxCoeff() <= 1e-15);
    }

    const Matrix a = gen_random_invertible(4, 3);
    const Matrix za = gen_perfect_embedding(big, {{{1, 1}}, 0.0, a, 0}).data();
    CHECK((za - z * a.transpose()).cwiseAbs().maxCoeff() < 1e-14);

    Matrix singular = Matrix::Identity(4, 4);
    singular(3, 3) = 1e-9;
    CHECK_THROWS_AS(gen_perfect_embedding(fs, {{{1, 1}}, 0.0, singular, 0}), std::invalid_argument);
    CHECK_THROWS_AS(gen_perfect_embedding(fs, {{{1, 1}}, 0.0, Matrix::Identity(3, 3), 0}), std::invalid_argument);
    CHECK_THROWS_AS(gen_perfect_embedding(fs, {{{1}}, 0.0, std::nullopt, 0}), std::invalid_argument);
    CHECK_THROWS_AS(gen_perfect_embedding(fs, {{{1, 1}}, -0.1, std::nullopt, 0}), std::invalid_argument);
}

TEST_CASE("noise is seeded and has the requested scale") {
    const FactorStructure fs = FactorStructure::from_sizes(std::vector<int>{64, 64});
    const Matrix clean = gen_perfect_embedding(fs, {{{1, 1}}, 0.0, std::nullopt, 0}).data();
    const Matrix a = gen_perfect_embedding(fs, {{{1, 1}}, 0.3, std::nullopt, 9}).data();
    const Matrix b = gen_perfect_embedding(fs, {{{1, 1}}, 0.3, std::nullopt, 9}).data();
    const Matrix c = gen_perfect_embedding(fs, {{{1, 1}}, 0.3, std::nullopt, 10}).data();
    CHECK(a == b);
    CHECK(a != c);
    const Matrix e = a - clean;
    const double sd = std::sqrt(e.squaredNorm() / static_cast<double>(e.size()));
    CHECK(sd == doctest::Approx(0.3).epsilon(0.02));
    CHECK(std::abs(e.mean()) < 0.01);
}

TEST_CASE("random invertible matrices") {
    const Matrix a = gen_random_invertible(4, 1);
    CHECK(a == gen_random_invertible(4, 1));
    CHECK(a != gen_random_invertible(4, 2));
    CHECK(condition_number(a) < 1e3);
    CHECK((a * a.inverse() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix m = gen_random_invertible(2 + static_cast<int>(seed % 7), seed);
        CHECK(condition_number(m) < kRandomTransformCondition);
    }
    CHECK(condition_number(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(gen_random_invertible(0, 1), std::invalid_argument);
}

TEST_CASE("PCA image encoder") {
    const ImageGrid images = gen_square_translation(8, 8, 16, 3);
    const EncodingGrid z = encode_images_pca(images, 4);
    CHECK(z.num_points() == 64);
    CHECK(z.latent_dim() == 4);
    CHECK(z.factors().sizes() == std::vector<int>{8, 8});
    CHECK(z.data().colwise().mean().cwiseAbs().maxCoeff() < 1e-9);

    // The same subspace as dense PCA of the centered pixel matrix.
    const Matrix x = images_as_matrix(images);
    const Matrix xc = x.rowwise() - x.colwise().mean();
    const auto [values, vectors] = oracle::jacobi_eigen(xc.transpose() * xc / 64.0);
    REQUIRE(values(3) - values(4) > 1e-6 * values(0));
    const Matrix v = vectors.leftCols(4);
    const Matrix expected = xc * v * v.transpose() * xc.transpose();
    const Matrix got = z.data() * z.data().transpose();
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-8 * expected.cwiseAbs().maxCoeff());

    // Encoding is a deterministic function of the images.
    CHECK(encode_images_pca(images, 4).data() == z.data());

    CHECK_THROWS_AS(encode_images_pca(images, 0), std::invalid_argument);
    CHECK_THROWS_AS(encode_images_pca(images, 65), std::invalid_argument);
}

TEST_CASE("the metric grows with noise") {
    const FactorStructure fs = FactorStructure::from_sizes(std::vector<int>{32, 32});
    double previous = -1.0;
    for (double sigma : {0.0, 0.05, 0.2, 0.5}) {
        const EncodingGrid grid = gen_perfect_embedding(fs, {{{1, 1}}, sigma, std::nullopt, 5});
        const double l = evaluate(grid, {{{-3, 3}, {-3, 3}}, false, 1}).l_lsbd;
        if (sigma == 0.0) CHECK(l <= 1e-10);
        CHECK(l > previous);
        previous = l;
    }
}
