#pragma once

#include "lsbd/group.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace lsbd {

/// Latent encodings z_g of every grid point, one row per point in the
/// FactorStructure's row-major order. Grid index (0, ..., 0) is the base point.
class EncodingGrid {
public:
    EncodingGrid(FactorStructure fs, Matrix data);

    const FactorStructure& factors() const { return fs_; }
    const Matrix& data() const { return data_; }
    int latent_dim() const { return static_cast<int>(data_.cols()); }
    std::size_t num_points() const { return fs_.total_size(); }
    Vector row(const GroupIndex& g) const { return data_.row(static_cast<Eigen::Index>(flat_index(g, fs_))); }

private:
    FactorStructure fs_;
    Matrix data_;
};

struct FactorProjection {
    Vector sigma;         // per-coordinate population std of the centered set, floored
    Matrix basis;         // 2 x D, orthonormal rows (leading principal axes)
    Eigen::Vector2d eigenvalues;  // descending, >= 0
    Eigen::Vector2d coordinate_scale;  // multiplies the two principal coordinates
};

/// Per-factor standardization + two-component PCA fitted on an EncodingGrid.
struct ProjectionModel {
    FactorStructure fs;
    int latent_dim = 0;
    bool whitening = false;
    std::vector<FactorProjection> factors;
};

/// z' in R^{2K}: block k holds the projected coordinates of factor k.
class ProjectedGrid {
public:
    ProjectedGrid(FactorStructure fs, Matrix data);

    const FactorStructure& factors() const { return fs_; }
    const Matrix& data() const { return data_; }
    int num_blocks() const { return fs_.num_factors(); }
    std::size_t num_points() const { return fs_.total_size(); }

private:
    FactorStructure fs_;
    Matrix data_;
};

/// Inclusive integer interval of candidate frequencies for one factor.
struct OmegaInterval {
    int lo = -10;
    int hi = 10;

    int count() const { return hi - lo + 1; }
    bool operator==(const OmegaInterval&) const = default;
};

struct LossEntry {
    FrequencyVector omega;
    double loss = 0.0;
};

struct LsbdReport {
    std::vector<LossEntry> table;  // omega-lexicographic
    FrequencyVector best_frequency;
    double l_lsbd = 0.0;
    bool whitening = false;
    std::vector<OmegaInterval> omega_range;
};

struct EvaluateOptions {
    std::vector<OmegaInterval> omega_range;  // one per factor; empty -> {-10..10} for each factor
    bool whitening = false;
    unsigned threads = 1;  // 0 -> hardware concurrency
};

/// Coordinates of sigma below this are replaced by 1 before dividing.
inline constexpr double kSigmaFloor = 1e-12;
/// Table entries within this distance of the minimum count as ties.
inline constexpr double kTieTolerance = 1e-12;

/// Removes from each z_g the mean over the points that differ from g only in
/// coordinate k, leaving the variation attributable to factor k.
Matrix center_encodings(const EncodingGrid& grid, int k);

ProjectionModel fit_projection(const EncodingGrid& grid, bool whitening);
ProjectedGrid project(const EncodingGrid& grid, const ProjectionModel& model);

/// Mean squared deviation of rho_omega(g)^{-1} z'_g from its average over the grid.
double lsbd_loss(const ProjectedGrid& pg, const FrequencyVector& omega);
/// Same quantity as half the mean squared distance over all pairs. O(N^2).
double lsbd_loss_pairwise(const ProjectedGrid& pg, const FrequencyVector& omega);
/// Same quantity written as an equivariance defect averaged over the uniform
/// grid measure: 1/2 E_{h,g} ||rho(h)^{-1} z'_{h.g} - z'_g||^2. O(N^2).
double lsbd_loss_equivariance(const ProjectedGrid& pg, const FrequencyVector& omega);

/// All frequency vectors of the Cartesian range, in lexicographic order.
std::vector<FrequencyVector> enumerate_frequencies(const std::vector<OmegaInterval>& range);
std::size_t frequency_count(const std::vector<OmegaInterval>& range);

/// Grid search over the range; ties resolve to the lexicographically smallest omega.
LsbdReport search_frequencies(const ProjectedGrid& pg, const std::vector<OmegaInterval>& range,
                              unsigned threads = 1);

LsbdReport evaluate(const EncodingGrid& grid, const EvaluateOptions& options = {});

}  // namespace lsbd
