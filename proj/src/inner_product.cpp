#include "lsbd/inner_product.hpp"

#include <stdexcept>
#include <string>

namespace lsbd {
namespace {

void check_dims(const InnerProductSpec& spec, const Vector& z, const Vector& zp) {
    if (spec.lambdas.empty()) throw std::invalid_argument("inner product needs at least one block");
    const auto dim = 2 * spec.lambdas.size();
    if (static_cast<std::size_t>(z.size()) != dim || static_cast<std::size_t>(zp.size()) != dim) {
        throw std::invalid_argument("inner product expects vectors of dimension " + std::to_string(dim));
    }
    for (double l : spec.lambdas) {
        if (!(l > 0.0)) throw std::invalid_argument("lambda must be positive");
    }
}

}  // namespace

std::vector<double> compute_lambdas(const ProjectedGrid& pg) {
    std::vector<double> lambdas;
    const Matrix& z = pg.data();
    for (int k = 0; k < pg.num_blocks(); ++k) {
        const double mean_sq = z.middleCols(2 * k, 2).rowwise().squaredNorm().mean();
        lambdas.push_back(mean_sq > kLambdaZeroTolerance ? mean_sq : 1.0);
    }
    return lambdas;
}

InnerProductSpec make_inner_product(const ProjectedGrid& pg) { return {compute_lambdas(pg)}; }

double inner_product(const InnerProductSpec& spec, const BlockRotationRep& rep, const FactorStructure& fs,
                     const Vector& z, const Vector& zp) {
    check_dims(spec, z, zp);
    if (rep.num_blocks() != spec.num_blocks() || fs.num_factors() != spec.num_blocks()) {
        throw std::invalid_argument("inner product, representation and group disagree on block count");
    }
    // Block k only sees g_k, so the grid average reduces to the average over factor k.
    double total = 0.0;
    for (int k = 0; k < spec.num_blocks(); ++k) {
        const int n = fs.size(k);
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const auto [c, s] = grid_cos_sin(rep.frequency()[k], j, n);
            const double ax = c * z(2 * k) - s * z(2 * k + 1);
            const double ay = s * z(2 * k) + c * z(2 * k + 1);
            const double bx = c * zp(2 * k) - s * zp(2 * k + 1);
            const double by = s * zp(2 * k) + c * zp(2 * k + 1);
            acc += ax * bx + ay * by;
        }
        total += acc / static_cast<double>(n) / spec.lambdas[static_cast<std::size_t>(k)];
    }
    return total;
}

double inner_product_reduced(const InnerProductSpec& spec, const Vector& z, const Vector& zp) {
    check_dims(spec, z, zp);
    double total = 0.0;
    for (int k = 0; k < spec.num_blocks(); ++k) {
        total += z.segment<2>(2 * k).dot(zp.segment<2>(2 * k)) / spec.lambdas[static_cast<std::size_t>(k)];
    }
    return total;
}

double squared_norm(const InnerProductSpec& spec, const Vector& z) { return inner_product_reduced(spec, z, z); }

}  // namespace lsbd
