// Copyright 2026 The tnmagic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings for the core library.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>

#include "commands.hpp"
#include "tnmagic/analysis.hpp"
#include "tnmagic/encoding.hpp"
#include "tnmagic/errors.hpp"
#include "tnmagic/io.hpp"
#include "tnmagic/report.hpp"
#include "tnmagic/resources.hpp"
#include "tnmagic/tensor_core.hpp"

namespace py = pybind11;
using namespace tnmagic;

namespace {

std::size_t rank_or_unbounded(std::optional<std::size_t> max_rank) {
    return max_rank.value_or(kUnboundedRank);
}

py::dict estimate_dict(const MagicEstimate &e) {
    py::dict d;
    d["m2_bits"] = e.m2_bits;
    d["stderr_bits"] = e.stderr_bits;
    d["normalized"] = e.normalized;
    d["n_samples"] = e.n_samples;
    d["method"] = std::string(magic_method_name(e.method));
    d["normalization"] = std::string(normalization_name(e.normalization));
    return d;
}

MagicConfig magic_config(const std::string &mode, std::size_t n_samples, std::uint64_t seed, unsigned threads) {
    MagicConfig c;
    c.mode = parse_magic_mode(mode);
    c.n_samples = n_samples;
    c.seed = seed;
    c.threads = threads;
    return c;
}

EncodingConfig encoding_config(const std::string &ordering, double cutoff, std::optional<std::size_t> max_rank) {
    return {parse_ordering(ordering), cutoff, rank_or_unbounded(max_rank)};
}

// Rows as plain dicts, keyed as in the JSON report.
py::object table_rows(const StudyTable &table) {
    Report r;
    r.table = table;
    const std::string text = report_to_json(r)["rows"].dump();
    return py::module_::import("json").attr("loads")(text);
}

}  // namespace

PYBIND11_MODULE(_tnmagic, m) {
    m.doc() = "Tensor-network entanglement and magic diagnostics for 2D fields";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const IoError &e) {
            PyErr_SetString(PyExc_OSError, e.what());
        } catch (const InvalidInput &e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const ShapeError &e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<Mps>(m, "Mps")
        .def_property_readonly("n_sites", &Mps::size)
        .def_property_readonly("bond_dims", &Mps::bond_dims)
        .def_property_readonly("max_bond_dim", &Mps::max_bond_dim)
        .def("to_dense", [](const Mps &mps) { return mps_to_dense(mps); })
        .def("norm", [](const Mps &mps) { return norm(mps); })
        .def("__len__", &Mps::size);

    m.def(
        "mps_from_dense",
        [](const std::vector<double> &v, double cutoff, std::optional<std::size_t> max_rank) {
            TruncationResult r = mps_from_dense(v, cutoff, rank_or_unbounded(max_rank));
            return py::make_tuple(r.mps, r.discarded_weight);
        },
        py::arg("vector"), py::arg("cutoff") = 0.0, py::arg("max_rank") = py::none());

    py::class_<EncodedState>(m, "EncodedState")
        .def_readonly("mps", &EncodedState::mps)
        .def_readonly("scale", &EncodedState::scale)
        .def_readonly("discarded_weight", &EncodedState::discarded_weight)
        .def_readonly("chi_max", &EncodedState::chi_max)
        .def_readonly("nx", &EncodedState::nx)
        .def_readonly("ny", &EncodedState::ny)
        .def_property_readonly("ordering",
                               [](const EncodedState &s) { return std::string(ordering_name(s.config.ordering)); });

    m.def(
        "encode_field",
        [](const Grid &values, const std::string &ordering, double cutoff, std::optional<std::size_t> max_rank) {
            return encode_field(Field2D(values), encoding_config(ordering, cutoff, max_rank));
        },
        py::arg("values"), py::arg("ordering") = "fwd", py::arg("cutoff") = 1e-8, py::arg("max_rank") = py::none());
    m.def(
        "decode_field", [](const EncodedState &s) { return Grid(decode_field(s).values()); }, py::arg("state"));

    m.def(
        "entropy_profile",
        [](const Mps &mps) {
            const EntropyProfile p = entropy_profile(mps);
            py::dict d;
            d["entropies_bits"] = p.entropies_bits;
            d["schmidt_spectra"] = p.schmidt_spectra;
            d["max_normalized"] = p.max_normalized;
            d["argmax_bond"] = p.argmax_bond;
            d["max_bits"] = p.max_bits;
            return d;
        },
        py::arg("mps"));

    m.def(
        "sre_dense", [](const std::vector<double> &v, double alpha) { return estimate_dict(sre_dense(v, alpha)); },
        py::arg("vector"), py::arg("alpha") = 2.0);
    m.def(
        "sre2_replica",
        [](const Mps &mps, std::size_t chi_limit) { return estimate_dict(sre2_replica(mps, chi_limit)); },
        py::arg("mps"), py::arg("chi_limit") = kDefaultReplicaChiLimit);
    m.def(
        "estimate_m2",
        [](const Mps &mps, std::size_t n_samples, std::uint64_t seed, unsigned threads) {
            py::gil_scoped_release release;
            const MagicEstimate e = estimate_m2(mps, {n_samples, seed, threads});
            py::gil_scoped_acquire acquire;
            return estimate_dict(e);
        },
        py::arg("mps"), py::arg("n_samples") = 4096, py::arg("seed") = 0, py::arg("threads") = 1);

    m.def(
        "bspline_resample",
        [](const Grid &values, int nx, int ny, const std::string &boundary) {
            return Grid(bspline_resample(Field2D(values), nx, ny, parse_boundary(boundary)).values());
        },
        py::arg("values"), py::arg("nx"), py::arg("ny"), py::arg("boundary") = "periodic");

    m.def(
        "coarse_grain_study",
        [](const Grid &values, const std::vector<std::pair<int, int>> &levels, const std::string &magic,
           std::size_t n_samples, std::uint64_t seed, double cutoff) {
            const Field2D f(values);
            const std::vector<std::pair<int, int>> ladder = levels.empty() ? halving_levels(f.nx(), f.ny()) : levels;
            return table_rows(coarse_grain_study(f, ladder, encoding_config("fwd", cutoff, std::nullopt),
                                                 magic_config(magic, n_samples, seed, 1)));
        },
        py::arg("values"), py::arg("levels") = std::vector<std::pair<int, int>>{}, py::arg("magic") = "auto",
        py::arg("n_samples") = 4096, py::arg("seed") = 0, py::arg("cutoff") = 1e-8);
    m.def(
        "shift_sweep",
        [](const Grid &values, const std::vector<double> &shifts, const std::string &magic, std::size_t n_samples,
           std::uint64_t seed, double cutoff) {
            return table_rows(shift_sweep(Field2D(values), shifts, encoding_config("fwd", cutoff, std::nullopt),
                                          magic_config(magic, n_samples, seed, 1)));
        },
        py::arg("values"), py::arg("shifts"), py::arg("magic") = "auto", py::arg("n_samples") = 4096,
        py::arg("seed") = 0, py::arg("cutoff") = 1e-8);

    m.def(
        "load_field",
        [](const std::filesystem::path &path, std::optional<std::string> format, const std::string &dataset,
           const std::vector<std::size_t> &index, bool transpose) {
            const FieldFormat fmt = format ? parse_field_format(*format) : infer_field_format(path);
            return Grid(load_field(path, fmt, {dataset, index, transpose}).values());
        },
        py::arg("path"), py::arg("format") = py::none(), py::arg("dataset") = "",
        py::arg("index") = std::vector<std::size_t>{}, py::arg("transpose") = false);
    m.def(
        "synth_shear_ic",
        [](int n_shears, int n_blobs, double width, int nx, int ny, double lx, double ly) {
            const auto [ux, uy] = synth_shear_ic({n_shears, n_blobs, width, nx, ny, lx, ly, {}});
            return py::make_tuple(Grid(ux.values()), Grid(uy.values()));
        },
        py::arg("n_shears") = 4, py::arg("n_blobs") = 4, py::arg("width") = 1.0, py::arg("nx") = 8, py::arg("ny") = 9,
        py::arg("lx") = 1.0, py::arg("ly") = 2.0);

    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out;
            std::ostringstream err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs one command line in-process; returns (exit_code, stdout, stderr).");
}
