#include "lsbd/metric.hpp"

#include "lsbd/pca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace lsbd {

EncodingGrid::EncodingGrid(FactorStructure fs, Matrix data) : fs_(std::move(fs)), data_(std::move(data)) {
    if (static_cast<std::size_t>(data_.rows()) != fs_.total_size()) {
        throw std::invalid_argument("encoding grid has " + std::to_string(data_.rows()) +
                                    " rows but the factor grid has " + std::to_string(fs_.total_size()) +
                                    " points");
    }
    if (data_.cols() < 1) throw std::invalid_argument("encoding grid needs latent dimension >= 1");
    if (!data_.allFinite()) throw std::invalid_argument("encoding grid has non-finite entries");
}

ProjectedGrid::ProjectedGrid(FactorStructure fs, Matrix data) : fs_(std::move(fs)), data_(std::move(data)) {
    if (static_cast<std::size_t>(data_.rows()) != fs_.total_size() ||
        data_.cols() != 2 * fs_.num_factors()) {
        throw std::invalid_argument("projected grid must be N x 2K");
    }
    if (!data_.allFinite()) throw std::invalid_argument("projected grid has non-finite entries");
}

Matrix center_encodings(const EncodingGrid& grid, int k) {
    const auto& fs = grid.factors();
    if (k < 0 || k >= fs.num_factors()) {
        throw std::invalid_argument("factor index " + std::to_string(k) + " out of range");
    }
    const auto n = static_cast<std::size_t>(fs.size(k));
    const std::size_t stride = fs.stride(k);
    const Matrix& z = grid.data();
    // Each fiber {g : g_j fixed for j != k} is keyed by its member with g_k = 0.
    Matrix fiber_sum = Matrix::Zero(z.rows(), z.cols());
    for (std::size_t i = 0; i < fs.total_size(); ++i) {
        const std::size_t base = i - ((i / stride) % n) * stride;
        fiber_sum.row(static_cast<Eigen::Index>(base)) += z.row(static_cast<Eigen::Index>(i));
    }
    Matrix out(z.rows(), z.cols());
    for (std::size_t i = 0; i < fs.total_size(); ++i) {
        const std::size_t base = i - ((i / stride) % n) * stride;
        out.row(static_cast<Eigen::Index>(i)) =
            z.row(static_cast<Eigen::Index>(i)) - fiber_sum.row(static_cast<Eigen::Index>(base)) / static_cast<double>(n);
    }
    return out;
}

namespace {

Matrix standardize(const Matrix& centered, const Vector& sigma) {
    return centered * sigma.cwiseInverse().asDiagonal();
}

}  // namespace

ProjectionModel fit_projection(const EncodingGrid& grid, bool whitening) {
    const auto& fs = grid.factors();
    const int K = fs.num_factors();
    if (grid.latent_dim() < 2 * K) {
        throw std::invalid_argument("latent dimension " + std::to_string(grid.latent_dim()) +
                                    " is smaller than 2K = " + std::to_string(2 * K));
    }
    if (grid.num_points() < 3) throw std::invalid_argument("projection needs at least 3 grid points");

    ProjectionModel model{fs, grid.latent_dim(), whitening, {}};
    const double n = static_cast<double>(grid.num_points());
    for (int k = 0; k < K; ++k) {
        const Matrix centered = center_encodings(grid, k);
        const Eigen::RowVectorXd mean = centered.colwise().mean();
        Vector sigma = ((centered.rowwise() - mean).array().square().colwise().sum() / n).sqrt().transpose();
        if ((sigma.array() < kSigmaFloor).all()) {
            throw std::domain_error("factor " + std::to_string(k) + " carries no variance");
        }
        sigma = (sigma.array() < kSigmaFloor).select(1.0, sigma);

        const Matrix standardized = standardize(centered, sigma);
        const EigenPairs pcs = top_eigenpairs(population_covariance(standardized), 2);

        FactorProjection fp;
        fp.sigma = sigma;
        fp.basis = pcs.vectors.transpose();
        fp.eigenvalues = pcs.values.cwiseMax(0.0);
        fp.coordinate_scale = Eigen::Vector2d::Constant(1.0 / std::sqrt(2.0));
        if (whitening) {
            const double top = fp.eigenvalues(0);
            for (int i = 0; i < 2; ++i) {
                const double ev = fp.eigenvalues(i);
                fp.coordinate_scale(i) = (top > 0.0 && ev > kSigmaFloor * top) ? 1.0 / std::sqrt(ev) : 1.0;
            }
            const Matrix coords = (standardized * fp.basis.transpose()) * fp.coordinate_scale.asDiagonal();
            const double mean_sq = coords.rowwise().squaredNorm().mean();
            if (mean_sq > 0.0) fp.coordinate_scale /= std::sqrt(mean_sq);
        }
        model.factors.push_back(std::move(fp));
    }
    return model;
}

ProjectedGrid project(const EncodingGrid& grid, const ProjectionModel& model) {
    const auto& fs = grid.factors();
    if (!(fs == model.fs) || grid.latent_dim() != model.latent_dim ||
        static_cast<int>(model.factors.size()) != fs.num_factors()) {
        throw std::invalid_argument("projection model does not match the encoding grid");
    }
    const int K = fs.num_factors();
    Matrix out(static_cast<Eigen::Index>(grid.num_points()), 2 * K);
    for (int k = 0; k < K; ++k) {
        const auto& fp = model.factors[static_cast<std::size_t>(k)];
        const Matrix standardized = standardize(center_encodings(grid, k), fp.sigma);
        out.middleCols(2 * k, 2) = (standardized * fp.basis.transpose()) * fp.coordinate_scale.asDiagonal();
    }
    return ProjectedGrid(fs, std::move(out));
}

namespace {

struct RotationTables {
    // cos/sin of omega_k * theta_j, per factor.
    std::vector<std::vector<CosSin>> per_factor;
};

RotationTables make_tables(const FactorStructure& fs, const FrequencyVector& omega) {
    if (omega.size() != fs.num_factors()) {
        throw std::invalid_argument("frequency vector has " + std::to_string(omega.size()) +
                                    " entries for " + std::to_string(fs.num_factors()) + " factors");
    }
    RotationTables t;
    for (int k = 0; k < fs.num_factors(); ++k) {
        std::vector<CosSin> row(static_cast<std::size_t>(fs.size(k)));
        for (int j = 0; j < fs.size(k); ++j) row[static_cast<std::size_t>(j)] = grid_cos_sin(omega[k], j, fs.size(k));
        t.per_factor.push_back(std::move(row));
    }
    return t;
}

// Row g of the result is rho_omega(g)^{-1} z'_g.
Matrix unrotate(const ProjectedGrid& pg, const FrequencyVector& omega) {
    const auto& fs = pg.factors();
    const RotationTables tables = make_tables(fs, omega);
    const Matrix& z = pg.data();
    Matrix u(z.rows(), z.cols());
    for (std::size_t i = 0; i < fs.total_size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        for (int k = 0; k < fs.num_factors(); ++k) {
            const auto j = (i / fs.stride(k)) % static_cast<std::size_t>(fs.size(k));
            const auto [c, s] = tables.per_factor[static_cast<std::size_t>(k)][j];
            const double x = z(r, 2 * k);
            const double y = z(r, 2 * k + 1);
            u(r, 2 * k) = c * x + s * y;
            u(r, 2 * k + 1) = -s * x + c * y;
        }
    }
    return u;
}

std::vector<int> all_indices(const FactorStructure& fs) {
    const auto K = static_cast<std::size_t>(fs.num_factors());
    std::vector<int> idx(fs.total_size() * K);
    for (std::size_t i = 0; i < fs.total_size(); ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            idx[i * K + k] = static_cast<int>((i / fs.stride(static_cast<int>(k))) %
                                              static_cast<std::size_t>(fs.size(static_cast<int>(k))));
        }
    }
    return idx;
}

}  // namespace

double lsbd_loss(const ProjectedGrid& pg, const FrequencyVector& omega) {
    const Matrix u = unrotate(pg, omega);
    const Eigen::RowVectorXd mean = u.colwise().mean();
    double total = 0.0;
    for (Eigen::Index r = 0; r < u.rows(); ++r) total += (u.row(r) - mean).squaredNorm();
    return total / static_cast<double>(u.rows());
}

double lsbd_loss_pairwise(const ProjectedGrid& pg, const FrequencyVector& omega) {
    const Matrix u = unrotate(pg, omega);
    const auto n = u.rows();
    double total = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) total += (u.row(a) - u.row(b)).squaredNorm();
    }
    return total / (2.0 * static_cast<double>(n) * static_cast<double>(n));
}

double lsbd_loss_equivariance(const ProjectedGrid& pg, const FrequencyVector& omega) {
    const auto& fs = pg.factors();
    const RotationTables tables = make_tables(fs, omega);
    const auto K = static_cast<std::size_t>(fs.num_factors());
    const std::size_t N = fs.total_size();
    const std::vector<int> idx = all_indices(fs);
    const Matrix& z = pg.data();

    double total = 0.0;
    for (std::size_t h = 0; h < N; ++h) {
        for (std::size_t g = 0; g < N; ++g) {
            std::size_t moved = 0;  // flat index of h.g
            for (std::size_t k = 0; k < K; ++k) {
                const int n = fs.size(static_cast<int>(k));
                moved += static_cast<std::size_t>((idx[h * K + k] + idx[g * K + k]) % n) *
                         fs.stride(static_cast<int>(k));
            }
            for (std::size_t k = 0; k < K; ++k) {
                const auto [c, s] = tables.per_factor[k][static_cast<std::size_t>(idx[h * K + k])];
                const auto col = static_cast<Eigen::Index>(2 * k);
                const double x = z(static_cast<Eigen::Index>(moved), col);
                const double y = z(static_cast<Eigen::Index>(moved), col + 1);
                const double dx = c * x + s * y - z(static_cast<Eigen::Index>(g), col);
                const double dy = -s * x + c * y - z(static_cast<Eigen::Index>(g), col + 1);
                total += dx * dx + dy * dy;
            }
        }
    }
    return total / (2.0 * static_cast<double>(N) * static_cast<double>(N));
}

std::size_t frequency_count(const std::vector<OmegaInterval>& range) {
    std::size_t count = 1;
    for (const auto& r : range) {
        if (r.hi < r.lo) throw std::invalid_argument("empty frequency interval");
        count *= static_cast<std::size_t>(r.count());
    }
    return count;
}

std::vector<FrequencyVector> enumerate_frequencies(const std::vector<OmegaInterval>& range) {
    if (range.empty()) throw std::invalid_argument("frequency range needs at least one interval");
    const std::size_t count = frequency_count(range);
    std::vector<FrequencyVector> out;
    out.reserve(count);
    FrequencyVector current;
    for (const auto& r : range) current.omegas.push_back(r.lo);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(current);
        for (std::size_t k = range.size(); k-- > 0;) {
            if (++current.omegas[k] <= range[k].hi) break;
            current.omegas[k] = range[k].lo;
        }
    }
    return out;
}

LsbdReport search_frequencies(const ProjectedGrid& pg, const std::vector<OmegaInterval>& range,
                              unsigned threads) {
    if (static_cast<int>(range.size()) != pg.num_blocks()) {
        throw std::invalid_argument("frequency range has " + std::to_string(range.size()) +
                                    " intervals for " + std::to_string(pg.num_blocks()) + " factors");
    }
    const std::vector<FrequencyVector> omegas = enumerate_frequencies(range);
    std::vector<double> losses(omegas.size());

    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, omegas.size()));
    auto sweep = [&](std::size_t begin, std::size_t step) {
        for (std::size_t i = begin; i < omegas.size(); i += step) losses[i] = lsbd_loss(pg, omegas[i]);
    };
    if (threads <= 1) {
        sweep(0, 1);
    } else {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t) workers.emplace_back(sweep, t, threads);
    }

    LsbdReport report;
    report.omega_range = range;
    report.table.reserve(omegas.size());
    const double min_loss = *std::min_element(losses.begin(), losses.end());
    bool found = false;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        report.table.push_back({omegas[i], losses[i]});
        if (!found && losses[i] <= min_loss + kTieTolerance) {
            report.best_frequency = omegas[i];
            found = true;
        }
    }
    report.l_lsbd = min_loss;
    return report;
}

LsbdReport evaluate(const EncodingGrid& grid, const EvaluateOptions& options) {
    std::vector<OmegaInterval> range = options.omega_range;
    if (range.empty()) range.assign(static_cast<std::size_t>(grid.factors().num_factors()), OmegaInterval{});
    const ProjectionModel model = fit_projection(grid, options.whitening);
    LsbdReport report = search_frequencies(project(grid, model), range, options.threads);
    report.whitening = options.whitening;
    return report;
}

}  // namespace lsbd
