#include "lsbd/data_gen.hpp"
#include "lsbd/inner_product.hpp"
#include "lsbd/metric.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

namespace py = pybind11;
using namespace lsbd;

namespace {

FactorStructure structure(const std::vector<int>& sizes) { return FactorStructure::from_sizes(sizes); }

std::vector<OmegaInterval> to_range(const std::vector<std::pair<int, int>>& range, int num_factors) {
    if (range.empty()) return std::vector<OmegaInterval>(static_cast<std::size_t>(num_factors), OmegaInterval{});
    std::vector<OmegaInterval> out;
    for (const auto& [lo, hi] : range) out.push_back({lo, hi});
    if (out.size() == 1 && num_factors > 1) out.assign(static_cast<std::size_t>(num_factors), out[0]);
    return out;
}

py::dict report_dict(const LsbdReport& r) {
    py::list table;
    for (const auto& e : r.table) table.append(py::make_tuple(e.omega.omegas, e.loss));
    py::dict d;
    d["l_lsbd"] = r.l_lsbd;
    d["best_frequency"] = r.best_frequency.omegas;
    d["whitening"] = r.whitening;
    d["table"] = table;
    return d;
}

}  // namespace

PYBIND11_MODULE(_lsbd, m) {
    m.doc() = "Linear symmetry-based disentanglement (LSBD) metric for cyclic-group datasets";

    m.def("rotation_matrix", &rotation_matrix, py::arg("angle"));

    m.def(
        "apply_rep",
        [](const std::vector<int>& omega, const std::vector<int>& g, const std::vector<int>& sizes,
           const Vector& z) { return apply_rep(BlockRotationRep({omega}), {g}, structure(sizes), z); },
        py::arg("omega"), py::arg("g"), py::arg("sizes"), py::arg("z"));
    m.def(
        "apply_rep_inverse",
        [](const std::vector<int>& omega, const std::vector<int>& g, const std::vector<int>& sizes,
           const Vector& z) { return apply_rep_inverse(BlockRotationRep({omega}), {g}, structure(sizes), z); },
        py::arg("omega"), py::arg("g"), py::arg("sizes"), py::arg("z"));

    m.def(
        "center_encodings",
        [](const Matrix& data, const std::vector<int>& sizes, int k) {
            return center_encodings(EncodingGrid(structure(sizes), data), k);
        },
        py::arg("data"), py::arg("sizes"), py::arg("k"));

    py::class_<FactorProjection>(m, "FactorProjection")
        .def_readonly("sigma", &FactorProjection::sigma)
        .def_readonly("basis", &FactorProjection::basis)
        .def_readonly("eigenvalues", &FactorProjection::eigenvalues)
        .def_readonly("coordinate_scale", &FactorProjection::coordinate_scale);
    py::class_<ProjectionModel>(m, "ProjectionModel")
        .def_readonly("whitening", &ProjectionModel::whitening)
        .def_readonly("latent_dim", &ProjectionModel::latent_dim)
        .def_readonly("factors", &ProjectionModel::factors);

    m.def(
        "fit_projection",
        [](const Matrix& data, const std::vector<int>& sizes, bool whitening) {
            return fit_projection(EncodingGrid(structure(sizes), data), whitening);
        },
        py::arg("data"), py::arg("sizes"), py::arg("whitening") = false);
    m.def(
        "project",
        [](const Matrix& data, const std::vector<int>& sizes, const ProjectionModel& model) {
            return project(EncodingGrid(structure(sizes), data), model).data();
        },
        py::arg("data"), py::arg("sizes"), py::arg("model"));

    m.def(
        "lsbd_loss",
        [](const Matrix& projected, const std::vector<int>& sizes, const std::vector<int>& omega) {
            return lsbd_loss(ProjectedGrid(structure(sizes), projected), {omega});
        },
        py::arg("projected"), py::arg("sizes"), py::arg("omega"));
    m.def(
        "lsbd_loss_pairwise",
        [](const Matrix& projected, const std::vector<int>& sizes, const std::vector<int>& omega) {
            return lsbd_loss_pairwise(ProjectedGrid(structure(sizes), projected), {omega});
        },
        py::arg("projected"), py::arg("sizes"), py::arg("omega"));
    m.def(
        "lsbd_loss_equivariance",
        [](const Matrix& projected, const std::vector<int>& sizes, const std::vector<int>& omega) {
            return lsbd_loss_equivariance(ProjectedGrid(structure(sizes), projected), {omega});
        },
        py::arg("projected"), py::arg("sizes"), py::arg("omega"));

    m.def(
        "evaluate",
        [](const Matrix& data, const std::vector<int>& sizes, const std::vector<std::pair<int, int>>& omega_range,
           bool whitening, unsigned threads) {
            const FactorStructure fs = structure(sizes);
            EvaluateOptions options{to_range(omega_range, fs.num_factors()), whitening, threads};
            LsbdReport r;
            {
                py::gil_scoped_release release;
                r = evaluate(EncodingGrid(fs, data), options);
            }
            return report_dict(r);
        },
        py::arg("data"), py::arg("sizes"), py::arg("omega_range") = std::vector<std::pair<int, int>>{},
        py::arg("whitening") = false, py::arg("threads") = 1U);

    m.def(
        "compute_lambdas",
        [](const Matrix& projected, const std::vector<int>& sizes) {
            return compute_lambdas(ProjectedGrid(structure(sizes), projected));
        },
        py::arg("projected"), py::arg("sizes"));
    m.def(
        "inner_product",
        [](const std::vector<double>& lambdas, const std::vector<int>& omega, const std::vector<int>& sizes,
           const Vector& z, const Vector& zp) {
            return inner_product({lambdas}, BlockRotationRep({omega}), structure(sizes), z, zp);
        },
        py::arg("lambdas"), py::arg("omega"), py::arg("sizes"), py::arg("z"), py::arg("zp"));
    m.def(
        "inner_product_reduced",
        [](const std::vector<double>& lambdas, const Vector& z, const Vector& zp) {
            return inner_product_reduced({lambdas}, z, zp);
        },
        py::arg("lambdas"), py::arg("z"), py::arg("zp"));

    m.def(
        "gen_square_translation",
        [](int n1, int n2, int image_size, int square_size) {
            const ImageGrid g = gen_square_translation(n1, n2, image_size, square_size);
            py::array_t<std::uint8_t> out({static_cast<py::ssize_t>(g.fs.total_size()),
                                           static_cast<py::ssize_t>(g.height), static_cast<py::ssize_t>(g.width)});
            std::memcpy(out.mutable_data(), g.pixels.data(), g.pixels.size());
            return out;
        },
        py::arg("n1") = 64, py::arg("n2") = 64, py::arg("image_size") = 64, py::arg("square_size") = 8);

    m.def(
        "gen_perfect_embedding",
        [](const std::vector<int>& sizes, const std::vector<int>& frequencies, double noise_sigma,
           std::optional<Matrix> transform, std::uint64_t seed) {
            EmbeddingParams p{{frequencies}, noise_sigma, std::move(transform), seed};
            if (p.frequencies.omegas.empty()) p.frequencies.omegas.assign(sizes.size(), 1);
            return gen_perfect_embedding(structure(sizes), p).data();
        },
        py::arg("sizes"), py::arg("frequencies") = std::vector<int>{}, py::arg("noise_sigma") = 0.0,
        py::arg("transform") = py::none(), py::arg("seed") = 0);
    m.def("gen_random_invertible", &gen_random_invertible, py::arg("dim"), py::arg("seed"));

    m.def(
        "encode_images_pca",
        [](py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> images,
           const std::vector<int>& sizes, int dim) {
            if (images.ndim() != 3) throw std::invalid_argument("images must have shape (N, H, W)");
            ImageGrid g{structure(sizes), static_cast<int>(images.shape(1)), static_cast<int>(images.shape(2)), {}};
            g.pixels.assign(images.data(), images.data() + images.size());
            Matrix z;
            {
                py::gil_scoped_release release;
                z = encode_images_pca(g, dim).data();
            }
            return z;
        },
        py::arg("images"), py::arg("sizes"), py::arg("dim"));
}
