#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cardmul/bench.hpp"
#include "cardmul/cardinality.hpp"
#include "cardmul/codec.hpp"
#include "cardmul/csmm.hpp"
#include "cardmul/generate.hpp"
#include "cardmul/matmul.hpp"
#include "cardmul/sparsity.hpp"
#include "cardmul/tensor.hpp"

namespace py = pybind11;
using namespace cardmul;

namespace {

DenseMatrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-d array");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    std::vector<double> data(a.data(), a.data() + rows * cols);
    return DenseMatrix(rows, cols, std::move(data));
}

py::array_t<double> from_matrix(const DenseMatrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

DenseTensor to_tensor(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() < 1) throw std::invalid_argument("expected an array of order >= 1");
    std::vector<std::size_t> dims(a.ndim());
    for (py::ssize_t d = 0; d < a.ndim(); ++d) dims[d] = static_cast<std::size_t>(a.shape(d));
    std::vector<double> data(a.data(), a.data() + a.size());
    return DenseTensor(std::move(dims), std::move(data));
}

py::array_t<double> from_tensor(const DenseTensor& t) {
    std::vector<py::ssize_t> shape(t.dims().begin(), t.dims().end());
    py::array_t<double> out(shape);
    std::copy(t.data().begin(), t.data().end(), out.mutable_data());
    return out;
}

using NpArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

MultReport dispatch_multiply(const DenseMatrix& a, const DenseMatrix& b,
                             const std::string& kernel, double tolerance, std::size_t cutoff,
                             unsigned threads) {
    if (kernel == "naive") return multiply_naive(a, b);
    if (kernel == "strassen") return multiply_strassen(a, b, cutoff);
    if (kernel == "outer")
        return multiply_outer_compressed(compress_columns(a, tolerance),
                                         compress_rows(b, tolerance), {}, threads);
    if (kernel == "inner")
        return multiply_inner_compressed(compress_rows(a, tolerance), b, threads);
    if (kernel == "binary") return multiply_binary(compress_binary(a), compress_binary(b));
    if (kernel == "auto") return multiply_auto(a, b, tolerance, threads);
    throw std::invalid_argument("unknown kernel: " + kernel);
}

GroupSpec spec_from_python(const std::vector<std::vector<std::size_t>>& groups,
                           const std::vector<double>& param_counts) {
    return GroupSpec::from_partition(groups, param_counts);
}

}  // namespace

PYBIND11_MODULE(_cardmul, m) {
    m.doc() = "cardinality-sparse matrix compression and multiplication kernels";

    py::class_<MultReport>(m, "MultReport")
        .def_property_readonly("product", [](const MultReport& r) { return from_matrix(r.product); })
        .def_readonly("scalar_mults", &MultReport::scalar_mults)
        .def_readonly("multiply_seconds", &MultReport::multiply_seconds)
        .def_readonly("preprocess_seconds", &MultReport::preprocess_seconds)
        .def_property_readonly("kernel",
                               [](const MultReport& r) { return kernel_name(r.kernel); });

    py::class_<ColCompressed>(m, "ColCompressed")
        .def_property_readonly("rows", [](const ColCompressed& c) { return c.rows; })
        .def_property_readonly("cols", [](const ColCompressed& c) { return c.cols; })
        .def_property_readonly("max_uniques", [](const ColCompressed& c) { return c.max_uniques; })
        .def_property_readonly("uniques_per_col",
                               [](const ColCompressed& c) { return c.uniques_per_col; })
        .def("to_dense", [](const ColCompressed& c) { return from_matrix(decompress_columns(c)); })
        .def("memory_footprint", [](const ColCompressed& c, const std::string& model) {
            return memory_footprint(c, model == "fixed32" ? MemoryModel::Fixed32
                                                          : MemoryModel::MinimalBits);
        });

    py::class_<RowCompressed>(m, "RowCompressed")
        .def_property_readonly("rows", [](const RowCompressed& r) { return r.rows; })
        .def_property_readonly("cols", [](const RowCompressed& r) { return r.cols; })
        .def_property_readonly("max_uniques", [](const RowCompressed& r) { return r.max_uniques; })
        .def("to_dense", [](const RowCompressed& r) { return from_matrix(decompress_rows(r)); });

    py::class_<BinaryCompressed>(m, "BinaryCompressed")
        .def_property_readonly("rows", [](const BinaryCompressed& b) { return b.rows; })
        .def_property_readonly("cols", [](const BinaryCompressed& b) { return b.cols; })
        .def_property_readonly("first_row", [](const BinaryCompressed& b) { return b.first_row; })
        .def_property_readonly("encoding",
                               [](const BinaryCompressed& b) {
                                   py::array_t<std::uint8_t> out({b.rows, b.cols});
                                   std::copy(b.encoding.begin(), b.encoding.end(),
                                             out.mutable_data());
                                   return out;
                               })
        .def("to_dense", [](const BinaryCompressed& b) { return from_matrix(decompress_binary(b)); });

    m.def("cardinality_degree",
          [](const NpArray& a, const std::string& mode, double tolerance) {
              return cardinality_degree(to_matrix(a),
                                        mode == "rows" ? FiberMode::RowWise : FiberMode::ColumnWise,
                                        tolerance);
          },
          py::arg("matrix"), py::arg("mode") = "cols", py::arg("tolerance") = 0.0);

    m.def("is_nk_sparse",
          [](const NpArray& a, std::size_t mode, std::size_t k, double tolerance) {
              return is_nk_sparse(to_tensor(a), mode, k, tolerance);
          },
          py::arg("tensor"), py::arg("mode"), py::arg("k"), py::arg("tolerance") = 0.0);

    m.def("compress_columns",
          [](const NpArray& a, double tol) { return compress_columns(to_matrix(a), tol); },
          py::arg("matrix"), py::arg("tolerance") = 0.0);
    m.def("compress_rows",
          [](const NpArray& a, double tol) { return compress_rows(to_matrix(a), tol); },
          py::arg("matrix"), py::arg("tolerance") = 0.0);
    m.def("compress_binary", [](const NpArray& a) { return compress_binary(to_matrix(a)); },
          py::arg("matrix"));

    m.def("multiply",
          [](const NpArray& a, const NpArray& b, const std::string& kernel, double tolerance,
             std::size_t cutoff, unsigned threads) {
              return dispatch_multiply(to_matrix(a), to_matrix(b), kernel, tolerance, cutoff,
                                       threads);
          },
          py::arg("a"), py::arg("b"), py::arg("kernel") = "auto", py::arg("tolerance") = 0.0,
          py::arg("cutoff") = 64, py::arg("threads") = 1);

    m.def("difference_operator", [](std::size_t p) {
        return from_matrix(difference_operator(p).materialize());
    });
    m.def("apply_difference", [](std::size_t p, const NpArray& w) {
        return from_matrix(difference_operator(p).apply(to_matrix(w)));
    });
    m.def("project_kernel", [](const NpArray& w) { return from_matrix(project_kernel(to_matrix(w))); });
    m.def("project_kernel_grouped",
          [](const NpArray& w, const std::vector<std::vector<std::size_t>>& groups,
             const std::vector<double>& param_counts) {
              return from_matrix(project_kernel(to_matrix(w),
                                                spec_from_python(groups, param_counts)));
          });
    m.def("grouped_difference",
          [](const NpArray& w, const std::vector<std::vector<std::size_t>>& groups,
             const std::vector<double>& param_counts) -> py::object {
              auto out = grouped_difference(spec_from_python(groups, param_counts), to_matrix(w));
              if (!out) return py::none();
              return from_matrix(*out);
          });
    m.def("project_cardinality", [](const NpArray& w, std::size_t k) {
        return from_matrix(project_cardinality(to_matrix(w), k));
    });
    m.def("one_to_one_norm", [](const NpArray& b) { return one_to_one_norm(to_matrix(b)); });
    m.def("m_bound_whole", &m_bound_whole, py::arg("param_count"));
    m.def("m_bound_grouped",
          [](const std::vector<std::vector<std::size_t>>& groups,
             const std::vector<double>& param_counts) {
              return m_bound_grouped(spec_from_python(groups, param_counts));
          });

    m.def("regularizer_h",
          [](const std::vector<NpArray>& layers, double nu) {
              std::vector<DenseMatrix> ms;
              ms.reserve(layers.size());
              for (const auto& l : layers) ms.push_back(to_matrix(l));
              return regularizer_h(ParamStack(std::move(ms)), nu);
          },
          py::arg("layers"), py::arg("nu"));

    m.def("lambda_bound",
          [](double a_lip, std::size_t hidden_layers, std::size_t samples,
             std::size_t param_count, double x_norm_n, double m_g, double c, double nu) {
              return lambda_bound({a_lip, hidden_layers, samples, param_count, x_norm_n, m_g, c, nu});
          },
          py::arg("a_lip") = 1.0, py::arg("hidden_layers") = 1, py::arg("samples") = 1,
          py::arg("param_count") = 1, py::arg("x_norm_n") = 1.0, py::arg("m_g") = 0.0,
          py::arg("c") = 1.0, py::arg("nu") = 1.0);

    m.def("mode_n_product", [](const NpArray& t, const NpArray& u, std::size_t mode) {
        return from_tensor(mode_n_product(to_tensor(t), to_matrix(u), mode));
    });
    m.def("difference_tensor", [](const NpArray& t, std::size_t mode) {
        return from_tensor(difference_tensor(to_tensor(t), mode));
    });
    m.def("contracted_product", [](const NpArray& x, const NpArray& y, std::size_t l) {
        return from_tensor(contracted_product(to_tensor(x), to_tensor(y), l));
    });
    m.def("effective_noise_s", [](const NpArray& x, std::size_t n) {
        return effective_noise_s(to_tensor(x), n);
    });

    m.def("tensor_regression_fit",
          [](const NpArray& x, const NpArray& y, std::size_t l, double lambda, double nu,
             std::size_t mode, double step, std::size_t iterations, const std::string& backend) {
              FitOptions opts{step, iterations,
                              backend == "auto" ? MatmulBackend::Auto : MatmulBackend::Naive};
              FitReport r = tensor_regression_fit(to_tensor(x), to_tensor(y), l, lambda, nu,
                                                  mode, opts);
              return py::make_tuple(from_tensor(r.coefficients), r.data_loss, r.objective,
                                    r.totals.scalar_mults);
          },
          py::arg("x"), py::arg("y"), py::arg("l"), py::arg("lam") = 0.0, py::arg("nu") = 1.0,
          py::arg("mode") = 1, py::arg("step") = 1e-3, py::arg("iterations") = 100,
          py::arg("backend") = "naive");

    m.def("gen_pair", [](std::size_t m_, std::size_t p, std::size_t n, std::size_t k,
                         std::uint64_t seed) {
        GenPair pair = gen_pair(m_, p, n, k, seed);
        return py::make_tuple(from_matrix(pair.a), from_matrix(pair.b));
    });

    m.def("write_csmm", [](const std::string& path, const NpArray& a) {
        if (a.ndim() == 2)
            write_csmm_file(path, to_matrix(a));
        else
            write_csmm_file(path, to_tensor(a));
    });
    m.def("read_csmm", [](const std::string& path) -> py::object {
        CsmmValue v = read_csmm_file(path);
        if (auto* d = std::get_if<DenseMatrix>(&v)) return from_matrix(*d);
        if (auto* c = std::get_if<ColCompressed>(&v)) return py::cast(std::move(*c));
        if (auto* r = std::get_if<RowCompressed>(&v)) return py::cast(std::move(*r));
        if (auto* b = std::get_if<BinaryCompressed>(&v)) return py::cast(std::move(*b));
        return from_tensor(std::get<DenseTensor>(v));
    });

    m.def("memory_footprint_dense", [](std::size_t rows, std::size_t cols) {
        return memory_footprint(DenseMatrix(rows, cols), MemoryModel::Fixed32);
    });
}
