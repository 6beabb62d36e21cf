#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lsbd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Factor {
    std::string name;
    int size = 0;

    bool operator==(const Factor&) const = default;
};

/// Product of K cyclic groups, each sampled on a uniform angle grid.
///
/// Element j of factor k sits at angle 2*pi*j/n_k. Grid points are enumerated
/// in row-major order: factor 0 varies slowest, factor K-1 fastest.
class FactorStructure {
public:
    FactorStructure() = default;
    explicit FactorStructure(std::vector<Factor> factors);
    /// Factors named "f0", "f1", ... with the given sizes.
    static FactorStructure from_sizes(std::span<const int> sizes);

    int num_factors() const { return static_cast<int>(factors_.size()); }
    int size(int k) const { return factors_.at(static_cast<std::size_t>(k)).size; }
    const std::string& name(int k) const { return factors_.at(static_cast<std::size_t>(k)).name; }
    const std::vector<Factor>& factors() const { return factors_; }
    std::vector<int> sizes() const;

    /// N = prod_k n_k.
    std::size_t total_size() const { return total_; }
    std::size_t stride(int k) const { return strides_.at(static_cast<std::size_t>(k)); }

    double angle(int k, int j) const;

    bool operator==(const FactorStructure& other) const { return factors_ == other.factors_; }

private:
    std::vector<Factor> factors_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 0;
};

/// Multi-index g = (g_1, ..., g_K) into a FactorStructure.
struct GroupIndex {
    std::vector<int> indices;

    int operator[](int k) const { return indices[static_cast<std::size_t>(k)]; }
    bool operator==(const GroupIndex&) const = default;
};

bool is_valid(const GroupIndex& g, const FactorStructure& fs);
std::size_t flat_index(const GroupIndex& g, const FactorStructure& fs);
GroupIndex unflatten(std::size_t flat, const FactorStructure& fs);
/// Group law: componentwise addition modulo n_k.
GroupIndex compose(const GroupIndex& a, const GroupIndex& b, const FactorStructure& fs);
GroupIndex inverse(const GroupIndex& g, const FactorStructure& fs);

struct FrequencyVector {
    std::vector<int> omegas;

    int operator[](int k) const { return omegas[static_cast<std::size_t>(k)]; }
    int size() const { return static_cast<int>(omegas.size()); }
    bool operator==(const FrequencyVector&) const = default;
    auto operator<=>(const FrequencyVector&) const = default;
};

FrequencyVector negate(const FrequencyVector& omega);

struct CosSin {
    double c;
    double s;
};

/// cos/sin of 2*pi*(multiplier*j)/n. The product is reduced modulo n in
/// integer arithmetic first, so aliasing and periodicity on the grid are exact;
/// quarter turns produce exact 0/+-1 values. Any integer j is accepted.
CosSin grid_cos_sin(long long multiplier, long long j, int n);

/// [[cos a, -sin a], [sin a, cos a]].
Eigen::Matrix2d rotation_matrix(double angle);

/// Block-diagonal SO(2)^K representation rho_omega(g) = diag(R(omega_k * theta_{g_k})).
class BlockRotationRep {
public:
    explicit BlockRotationRep(FrequencyVector frequency);

    const FrequencyVector& frequency() const { return frequency_; }
    int num_blocks() const { return frequency_.size(); }
    int dimension() const { return 2 * frequency_.size(); }

    Vector apply(const GroupIndex& g, const FactorStructure& fs, const Vector& z) const;
    Vector apply_inverse(const GroupIndex& g, const FactorStructure& fs, const Vector& z) const;

    /// Dense 2K x 2K matrix; only meant for tests and debugging.
    Matrix matrix(const GroupIndex& g, const FactorStructure& fs) const;

private:
    void check(const GroupIndex& g, const FactorStructure& fs, const Vector& z) const;
    Vector rotate(const GroupIndex& g, const FactorStructure& fs, const Vector& z, int sign) const;

    FrequencyVector frequency_;
};

Vector apply_rep(const BlockRotationRep& rep, const GroupIndex& g, const FactorStructure& fs,
                 const Vector& z);
Vector apply_rep_inverse(const BlockRotationRep& rep, const GroupIndex& g,
                         const FactorStructure& fs, const Vector& z);

}  // namespace lsbd
