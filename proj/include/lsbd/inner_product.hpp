#pragma once

#include "lsbd/metric.hpp"

#include <vector>

namespace lsbd {

/// Representation-adapted inner product on R^{2K}: the K blocks are mutually
/// orthogonal and block k is weighted by 1/lambda_k, after averaging over the
/// uniform measure on the angle grid (the normalized Haar measure of the
/// cyclic subgroup).
struct InnerProductSpec {
    std::vector<double> lambdas;

    int num_blocks() const { return static_cast<int>(lambdas.size()); }
};

/// Squared block norms below this count as a vanishing integral.
inline constexpr double kLambdaZeroTolerance = 1e-300;

/// lambda_k = mean over the grid of ||block k of z'||^2, or 1 when that mean is zero.
std::vector<double> compute_lambdas(const ProjectedGrid& pg);
InnerProductSpec make_inner_product(const ProjectedGrid& pg);

/// Averaged definition: sum_k lambda_k^{-1} E_{g_k} <R(omega_k theta) z_k, R(omega_k theta) z'_k>.
double inner_product(const InnerProductSpec& spec, const BlockRotationRep& rep, const FactorStructure& fs,
                     const Vector& z, const Vector& zp);

/// Closed form obtained from rotation invariance: sum_k lambda_k^{-1} <z_k, z'_k>.
double inner_product_reduced(const InnerProductSpec& spec, const Vector& z, const Vector& zp);

double squared_norm(const InnerProductSpec& spec, const Vector& z);

}  // namespace lsbd
