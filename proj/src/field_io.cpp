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

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include <hdf5.h>

#include "tnmagic/errors.hpp"
#include "tnmagic/io.hpp"

namespace tnmagic {

namespace {

namespace fs = std::filesystem;

// Raw array as read from disk: C-order values with a shape.
struct RawArray {
    std::vector<std::size_t> shape;
    std::vector<double> data;
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::size_t product(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_exists(const fs::path &path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw IoError("no such file: " + path.string());
    }
}

// -- HDF5 -------------------------------------------------------------------

struct H5Handle {
    hid_t id = -1;
    herr_t (*close)(hid_t) = nullptr;
    H5Handle(hid_t i, herr_t (*c)(hid_t)) : id(i), close(c) {
    }
    H5Handle(const H5Handle &) = delete;
    H5Handle &operator=(const H5Handle &) = delete;
    ~H5Handle() {
        if (id >= 0) {
            close(id);
        }
    }
};

RawArray read_hdf5(const fs::path &path, const FieldSelector &selector, std::size_t &slices, bool &series) {
    H5Eset_auto2(H5E_DEFAULT, nullptr, nullptr);
    if (selector.dataset.empty()) {
        throw InvalidInput("HDF5 input needs a dataset path");
    }
    H5Handle file(H5Fopen(path.c_str(), H5F_ACC_RDONLY, H5P_DEFAULT), H5Fclose);
    if (file.id < 0) {
        throw IoError("cannot open HDF5 file " + path.string());
    }
    H5Handle dset(H5Dopen2(file.id, selector.dataset.c_str(), H5P_DEFAULT), H5Dclose);
    if (dset.id < 0) {
        throw IoError("no dataset '" + selector.dataset + "' in " + path.string());
    }
    H5Handle type(H5Dget_type(dset.id), H5Tclose);
    const H5T_class_t cls = H5Tget_class(type.id);
    if (cls != H5T_FLOAT && cls != H5T_INTEGER) {
        throw InvalidInput("dataset '" + selector.dataset + "' is not numeric");
    }
    H5Handle space(H5Dget_space(dset.id), H5Sclose);
    const int rank = H5Sget_simple_extent_ndims(space.id);
    if (rank < 2) {
        throw ShapeError("dataset '" + selector.dataset + "' has rank < 2");
    }
    std::vector<hsize_t> dims(static_cast<std::size_t>(rank));
    H5Sget_simple_extent_dims(space.id, dims.data(), nullptr);

    const auto r = static_cast<std::size_t>(rank);
    const std::size_t fixed = selector.index.size();
    if (fixed + 2 == r) {
        series = false;
    } else if (fixed + 3 == r) {
        series = true;
    } else {
        throw ShapeError("selector fixes " + std::to_string(fixed) + " axes of a rank-" + std::to_string(r) +
                         " dataset; expected " + std::to_string(r - 2) + " or " + std::to_string(r - 3));
    }
    std::vector<hsize_t> start(r, 0);
    std::vector<hsize_t> count(dims);
    for (std::size_t a = 0; a < fixed; ++a) {
        if (selector.index[a] >= dims[a]) {
            throw ShapeError("selector index out of range on axis " + std::to_string(a));
        }
        start[a] = selector.index[a];
        count[a] = 1;
    }
    if (H5Sselect_hyperslab(space.id, H5S_SELECT_SET, start.data(), nullptr, count.data(), nullptr) < 0) {
        throw IoError("cannot select hyperslab in '" + selector.dataset + "'");
    }
    RawArray raw;
    slices = series ? static_cast<std::size_t>(dims[r - 3]) : 1;
    raw.shape = {slices, static_cast<std::size_t>(dims[r - 2]), static_cast<std::size_t>(dims[r - 1])};
    raw.data.resize(product(raw.shape));
    const hsize_t total = raw.data.size();
    H5Handle mem(H5Screate_simple(1, &total, nullptr), H5Sclose);
    if (H5Dread(dset.id, H5T_NATIVE_DOUBLE, mem.id, space.id, H5P_DEFAULT, raw.data.data()) < 0) {
        throw IoError("failed to read dataset '" + selector.dataset + "'");
    }
    return raw;
}

// -- NPY --------------------------------------------------------------------

std::string header_value(const std::string &header, const std::string &key) {
    const std::size_t k = header.find("'" + key + "'");
    if (k == std::string::npos) {
        throw InvalidInput("NPY header lacks '" + key + "'");
    }
    std::size_t v = header.find(':', k);
    if (v == std::string::npos) {
        throw InvalidInput("malformed NPY header");
    }
    ++v;
    while (v < header.size() && header[v] == ' ') {
        ++v;
    }
    if (v >= header.size()) {
        throw InvalidInput("malformed NPY header");
    }
    std::size_t end;
    if (header[v] == '\'') {
        end = header.find('\'', v + 1);
        if (end == std::string::npos) {
            throw InvalidInput("malformed NPY header");
        }
        return header.substr(v + 1, end - v - 1);
    }
    if (header[v] == '(') {
        end = header.find(')', v);
        if (end == std::string::npos) {
            throw InvalidInput("malformed NPY header");
        }
        return header.substr(v, end - v + 1);
    }
    end = header.find_first_of(",}", v);
    return header.substr(v, end - v);
}

RawArray read_npy(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, "\x93NUMPY", 6) != 0) {
        throw InvalidInput(path.string() + " is not an NPY file");
    }
    const int major = static_cast<unsigned char>(magic[6]);
    std::size_t header_len = 0;
    if (major == 1) {
        unsigned char b[2];
        if (!in.read(reinterpret_cast<char *>(b), 2)) {
            throw InvalidInput("truncated NPY header");
        }
        header_len = b[0] | (std::size_t{b[1]} << 8);
    } else if (major == 2 || major == 3) {
        unsigned char b[4];
        if (!in.read(reinterpret_cast<char *>(b), 4)) {
            throw InvalidInput("truncated NPY header");
        }
        header_len = b[0] | (std::size_t{b[1]} << 8) | (std::size_t{b[2]} << 16) | (std::size_t{b[3]} << 24);
    } else {
        throw InvalidInput("unsupported NPY version " + std::to_string(major));
    }
    std::string header(header_len, '\0');
    if (!in.read(header.data(), static_cast<std::streamsize>(header_len))) {
        throw InvalidInput("truncated NPY header");
    }
    const std::string descr = header_value(header, "descr");
    const std::string fortran = header_value(header, "fortran_order");
    const std::string shape_text = header_value(header, "shape");
    if (fortran.find("True") != std::string::npos) {
        throw InvalidInput("Fortran-ordered NPY arrays are not supported");
    }
    std::size_t width;
    if (descr == "<f8" || descr == "=f8") {
        width = 8;
    } else if (descr == "<f4" || descr == "=f4") {
        width = 4;
    } else {
        throw InvalidInput("unsupported NPY dtype '" + descr + "' (need little-endian float32/float64)");
    }
    RawArray raw;
    std::size_t pos = 1;
    while (pos < shape_text.size()) {
        while (pos < shape_text.size() && (shape_text[pos] == ' ' || shape_text[pos] == ',')) {
            ++pos;
        }
        if (pos >= shape_text.size() || shape_text[pos] == ')') {
            break;
        }
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(shape_text.data() + pos, shape_text.data() + shape_text.size(), v);
        if (ec != std::errc()) {
            throw InvalidInput("malformed NPY shape " + shape_text);
        }
        raw.shape.push_back(v);
        pos = static_cast<std::size_t>(ptr - shape_text.data());
    }
    const std::size_t count = product(raw.shape);
    raw.data.resize(count);
    if (width == 8) {
        if (!in.read(reinterpret_cast<char *>(raw.data.data()), static_cast<std::streamsize>(count * 8))) {
            throw InvalidInput("NPY payload shorter than its shape");
        }
    } else {
        std::vector<float> tmp(count);
        if (!in.read(reinterpret_cast<char *>(tmp.data()), static_cast<std::streamsize>(count * 4))) {
            throw InvalidInput("NPY payload shorter than its shape");
        }
        std::copy(tmp.begin(), tmp.end(), raw.data.begin());
    }
    return raw;
}

void write_npy_raw(const fs::path &path, std::span<const std::size_t> shape, std::span<const double> data) {
    std::string shape_text = "(";
    for (std::size_t d : shape) {
        shape_text += std::to_string(d) + ", ";
    }
    if (shape.size() > 1) {
        shape_text.erase(shape_text.size() - 2);
    } else {
        shape_text.erase(shape_text.size() - 1);
    }
    shape_text += ")";
    std::string header = "{'descr': '<f8', 'fortran_order': False, 'shape': " + shape_text + ", }";
    const std::size_t unpadded = 10 + header.size() + 1;
    header.append((64 - unpadded % 64) % 64, ' ');
    header.push_back('\n');
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write("\x93NUMPY\x01\x00", 8);
    const auto len = static_cast<std::uint16_t>(header.size());
    const char le[2] = {static_cast<char>(len & 0xff), static_cast<char>(len >> 8)};
    out.write(le, 2);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char *>(data.data()), static_cast<std::streamsize>(data.size() * 8));
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

// -- CSV --------------------------------------------------------------------

RawArray read_csv(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    RawArray raw;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::size_t n = 0;
        const char *p = line.data();
        const char *end = line.data() + line.size();
        while (p < end) {
            while (p < end && (*p == ' ' || *p == '\t')) {
                ++p;
            }
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(p, end, v);
            if (ec != std::errc()) {
                throw InvalidInput("non-numeric CSV entry on line " + std::to_string(line_no));
            }
            raw.data.push_back(v);
            ++n;
            p = ptr;
            while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) {
                ++p;
            }
            if (p < end) {
                if (*p != ',') {
                    throw InvalidInput("malformed CSV line " + std::to_string(line_no));
                }
                ++p;
            }
        }
        if (rows == 0) {
            cols = n;
        } else if (n != cols) {
            throw ShapeError("ragged CSV: line " + std::to_string(line_no) + " has " + std::to_string(n) +
                             " entries, expected " + std::to_string(cols));
        }
        ++rows;
    }
    if (rows == 0) {
        throw InvalidInput("empty CSV file " + path.string());
    }
    raw.shape = {rows, cols};
    return raw;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

Field2D make_field(const double *data, std::size_t rows, std::size_t cols, const FieldSelector &selector,
                   const LoadOptions &options) {
    Grid g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::copy(data, data + rows * cols, g.data());
    if (selector.transpose) {
        g = Grid(g.transpose());
    }
    if (!g.allFinite()) {
        throw InvalidInput("input contains non-finite values");
    }
    const auto r = static_cast<std::size_t>(g.rows());
    const auto c = static_cast<std::size_t>(g.cols());
    if (!std::has_single_bit(r) || !std::has_single_bit(c)) {
        if (!options.resample_to_pow2) {
            throw ShapeError("field shape " + std::to_string(r) + "x" + std::to_string(c) +
                             " is not a power of two per axis (enable resampling on load)");
        }
        g = resample_grid(g, static_cast<Eigen::Index>(std::bit_ceil(r)), static_cast<Eigen::Index>(std::bit_ceil(c)),
                          options.boundary);
    }
    return Field2D(std::move(g), options.label, options.domain);
}

}  // namespace

std::string_view field_format_name(FieldFormat format) {
    switch (format) {
        case FieldFormat::kHdf5:
            return "hdf5";
        case FieldFormat::kNpy:
            return "npy";
        case FieldFormat::kCsv:
            return "csv";
    }
    return "unknown";
}

FieldFormat parse_field_format(std::string_view name) {
    if (name == "hdf5" || name == "h5") {
        return FieldFormat::kHdf5;
    }
    if (name == "npy") {
        return FieldFormat::kNpy;
    }
    if (name == "csv") {
        return FieldFormat::kCsv;
    }
    throw InvalidInput("unknown field format '" + std::string(name) + "'");
}

FieldFormat infer_field_format(const fs::path &path) {
    const std::string ext = lower(path.extension().string());
    if (ext == ".h5" || ext == ".hdf5" || ext == ".hdf") {
        return FieldFormat::kHdf5;
    }
    if (ext == ".npy") {
        return FieldFormat::kNpy;
    }
    if (ext == ".csv" || ext == ".txt") {
        return FieldFormat::kCsv;
    }
    throw InvalidInput("cannot infer the format of " + path.string());
}

std::vector<Field2D> load_fields(const fs::path &path, FieldFormat format, const FieldSelector &selector,
                                 const LoadOptions &options) {
    check_exists(path);
    RawArray raw;
    std::size_t slices = 1;
    bool series = false;
    switch (format) {
        case FieldFormat::kHdf5:
            raw = read_hdf5(path, selector, slices, series);
            break;
        case FieldFormat::kNpy:
        case FieldFormat::kCsv: {
            raw = format == FieldFormat::kNpy ? read_npy(path) : read_csv(path);
            const std::size_t r = raw.shape.size();
            const std::size_t fixed = selector.index.size();
            if (r < 2) {
                throw ShapeError("array has rank < 2");
            }
            if (fixed + 2 != r && fixed + 3 != r) {
                throw ShapeError("selector fixes " + std::to_string(fixed) + " axes of a rank-" + std::to_string(r) +
                                 " array");
            }
            series = fixed + 3 == r;
            // Offset of the selected block in C order.
            std::size_t offset = 0;
            std::size_t stride = product(std::span(raw.shape).subspan(fixed));
            for (std::size_t a = fixed; a-- > 0;) {
                if (selector.index[a] >= raw.shape[a]) {
                    throw ShapeError("selector index out of range on axis " + std::to_string(a));
                }
            }
            std::size_t block = stride;
            for (std::size_t a = 0; a < fixed; ++a) {
                block = product(std::span(raw.shape).subspan(a + 1));
                offset += selector.index[a] * block;
            }
            slices = series ? raw.shape[r - 3] : 1;
            const std::vector<double> picked(raw.data.begin() + static_cast<std::ptrdiff_t>(offset),
                                             raw.data.begin() + static_cast<std::ptrdiff_t>(offset + stride));
            raw.data = picked;
            raw.shape = {slices, raw.shape[r - 2], raw.shape[r - 1]};
            break;
        }
    }
    const std::size_t rows = raw.shape[1];
    const std::size_t cols = raw.shape[2];
    std::vector<Field2D> fields;
    fields.reserve(slices);
    for (std::size_t t = 0; t < slices; ++t) {
        fields.push_back(make_field(raw.data.data() + t * rows * cols, rows, cols, selector, options));
    }
    return fields;
}

Field2D load_field(const fs::path &path, FieldFormat format, const FieldSelector &selector,
                   const LoadOptions &options) {
    std::vector<Field2D> fields = load_fields(path, format, selector, options);
    if (fields.size() != 1) {
        throw ShapeError("selection yields " + std::to_string(fields.size()) + " fields; index one of them");
    }
    return std::move(fields.front());
}

void write_field(const Field2D &field, const fs::path &path, FieldFormat format) {
    const Grid &g = field.values();
    switch (format) {
        case FieldFormat::kNpy: {
            const std::size_t shape[2] = {static_cast<std::size_t>(g.rows()), static_cast<std::size_t>(g.cols())};
            write_npy_raw(path, shape, std::span<const double>(g.data(), static_cast<std::size_t>(g.size())));
            return;
        }
        case FieldFormat::kCsv: {
            std::ofstream out(path, std::ios::trunc);
            if (!out) {
                throw IoError("cannot write " + path.string());
            }
            for (Eigen::Index i = 0; i < g.rows(); ++i) {
                for (Eigen::Index j = 0; j < g.cols(); ++j) {
                    out << (j ? "," : "") << format_double(g(i, j));
                }
                out << '\n';
            }
            if (!out) {
                throw IoError("failed writing " + path.string());
            }
            return;
        }
        case FieldFormat::kHdf5:
            throw InvalidInput("writing HDF5 is not supported");
    }
}

void write_npy_stack(std::span<const Field2D> fields, const fs::path &path) {
    if (fields.empty()) {
        throw InvalidInput("cannot write an empty stack");
    }
    const Eigen::Index rows = fields.front().rows();
    const Eigen::Index cols = fields.front().cols();
    std::vector<double> data;
    data.reserve(fields.size() * static_cast<std::size_t>(rows * cols));
    for (const Field2D &f : fields) {
        if (f.rows() != rows || f.cols() != cols) {
            throw ShapeError("stack members must share one shape");
        }
        data.insert(data.end(), f.values().data(), f.values().data() + f.values().size());
    }
    const std::size_t shape[3] = {fields.size(), static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)};
    write_npy_raw(path, shape, data);
}

}  // namespace tnmagic
