#include "lsbd/group.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lsbd {

FactorStructure::FactorStructure(std::vector<Factor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) {
        throw std::invalid_argument("factor structure needs at least one factor");
    }
    strides_.assign(factors_.size(), 1);
    total_ = 1;
    for (std::size_t k = factors_.size(); k-- > 0;) {
        if (factors_[k].size < 1) {
            throw std::invalid_argument("factor '" + factors_[k].name + "' has size " +
                                        std::to_string(factors_[k].size) + "; must be >= 1");
        }
        strides_[k] = total_;
        total_ *= static_cast<std::size_t>(factors_[k].size);
    }
}

FactorStructure FactorStructure::from_sizes(std::span<const int> sizes) {
    std::vector<Factor> factors;
    factors.reserve(sizes.size());
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        factors.push_back({"f" + std::to_string(k), sizes[k]});
    }
    return FactorStructure(std::move(factors));
}

std::vector<int> FactorStructure::sizes() const {
    std::vector<int> out;
    out.reserve(factors_.size());
    for (const auto& f : factors_) out.push_back(f.size);
    return out;
}

double FactorStructure::angle(int k, int j) const {
    return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size(k));
}

bool is_valid(const GroupIndex& g, const FactorStructure& fs) {
    if (static_cast<int>(g.indices.size()) != fs.num_factors()) return false;
    for (int k = 0; k < fs.num_factors(); ++k) {
        if (g[k] < 0 || g[k] >= fs.size(k)) return false;
    }
    return true;
}

std::size_t flat_index(const GroupIndex& g, const FactorStructure& fs) {
    if (!is_valid(g, fs)) throw std::invalid_argument("group index out of range");
    std::size_t flat = 0;
    for (int k = 0; k < fs.num_factors(); ++k) {
        flat += static_cast<std::size_t>(g[k]) * fs.stride(k);
    }
    return flat;
}

GroupIndex unflatten(std::size_t flat, const FactorStructure& fs) {
    if (flat >= fs.total_size()) throw std::invalid_argument("flat index out of range");
    GroupIndex g{std::vector<int>(static_cast<std::size_t>(fs.num_factors()))};
    for (int k = 0; k < fs.num_factors(); ++k) {
        g.indices[static_cast<std::size_t>(k)] = static_cast<int>(flat / fs.stride(k));
        flat %= fs.stride(k);
    }
    return g;
}

GroupIndex compose(const GroupIndex& a, const GroupIndex& b, const FactorStructure& fs) {
    if (!is_valid(a, fs) || !is_valid(b, fs)) throw std::invalid_argument("group index out of range");
    GroupIndex out = a;
    for (int k = 0; k < fs.num_factors(); ++k) {
        out.indices[static_cast<std::size_t>(k)] = (a[k] + b[k]) % fs.size(k);
    }
    return out;
}

GroupIndex inverse(const GroupIndex& g, const FactorStructure& fs) {
    if (!is_valid(g, fs)) throw std::invalid_argument("group index out of range");
    GroupIndex out = g;
    for (int k = 0; k < fs.num_factors(); ++k) {
        out.indices[static_cast<std::size_t>(k)] = (fs.size(k) - g[k]) % fs.size(k);
    }
    return out;
}

FrequencyVector negate(const FrequencyVector& omega) {
    FrequencyVector out = omega;
    for (auto& w : out.omegas) w = -w;
    return out;
}

CosSin grid_cos_sin(long long multiplier, long long j, int n) {
    if (n < 1) throw std::invalid_argument("grid size must be >= 1");
    const long long nn = n;
    const long long r = (((multiplier % nn) * (j % nn)) % nn + nn) % nn;
    if ((4 * r) % nn == 0) {
        switch ((4 * r) / nn) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    const double a = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(nn);
    return {std::cos(a), std::sin(a)};
}

Eigen::Matrix2d rotation_matrix(double angle) {
    if (!std::isfinite(angle)) throw std::invalid_argument("rotation angle must be finite");
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
}

BlockRotationRep::BlockRotationRep(FrequencyVector frequency) : frequency_(std::move(frequency)) {
    if (frequency_.omegas.empty()) throw std::invalid_argument("representation needs at least one block");
}

void BlockRotationRep::check(const GroupIndex& g, const FactorStructure& fs, const Vector& z) const {
    if (fs.num_factors() != num_blocks()) {
        throw std::invalid_argument("representation has " + std::to_string(num_blocks()) +
                                    " blocks but the group has " + std::to_string(fs.num_factors()) +
                                    " factors");
    }
    if (z.size() != dimension()) {
        throw std::invalid_argument("vector has dimension " + std::to_string(z.size()) + ", expected " +
                                    std::to_string(dimension()));
    }
    if (!is_valid(g, fs)) throw std::invalid_argument("group index out of range");
}

Vector BlockRotationRep::rotate(const GroupIndex& g, const FactorStructure& fs, const Vector& z,
                                int sign) const {
    check(g, fs, z);
    Vector out(z.size());
    for (int k = 0; k < num_blocks(); ++k) {
        const auto [c, s0] = grid_cos_sin(frequency_[k], g[k], fs.size(k));
        const double s = sign * s0;
        const double x = z(2 * k);
        const double y = z(2 * k + 1);
        out(2 * k) = c * x - s * y;
        out(2 * k + 1) = s * x + c * y;
    }
    return out;
}

Vector BlockRotationRep::apply(const GroupIndex& g, const FactorStructure& fs, const Vector& z) const {
    return rotate(g, fs, z, +1);
}

Vector BlockRotationRep::apply_inverse(const GroupIndex& g, const FactorStructure& fs,
                                       const Vector& z) const {
    return rotate(g, fs, z, -1);
}

Matrix BlockRotationRep::matrix(const GroupIndex& g, const FactorStructure& fs) const {
    check(g, fs, Vector::Zero(dimension()));
    Matrix m = Matrix::Zero(dimension(), dimension());
    for (int k = 0; k < num_blocks(); ++k) {
        const auto [c, s] = grid_cos_sin(frequency_[k], g[k], fs.size(k));
        m.block<2, 2>(2 * k, 2 * k) << c, -s, s, c;
    }
    return m;
}

Vector apply_rep(const BlockRotationRep& rep, const GroupIndex& g, const FactorStructure& fs,
                 const Vector& z) {
    return rep.apply(g, fs, z);
}

Vector apply_rep_inverse(const BlockRotationRep& rep, const GroupIndex& g, const FactorStructure& fs,
                         const Vector& z) {
    return rep.apply_inverse(g, fs, z);
}

}  // namespace lsbd
