#include "ssv/matrix.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ssv/errors.hpp"

namespace ssv {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> col(rows_);
    for (std::size_t r = 0; r < rows_; ++r) col[r] = (*this)(r, c);
    return col;
}

double Matrix::frobenius_norm() const {
    double s = 0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

std::vector<double> Matrix::apply(const std::vector<double>& x) const {
    if (x.size() != cols_) throw invalid_input("apply: dimension mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        double s = 0;
        const double* row = data_.data() + r * cols_;
        for (std::size_t c = 0; c < cols_; ++c) s += row[c] * x[c];
        y[r] = s;
    }
    return y;
}

std::vector<double> Matrix::apply_transpose(const std::vector<double>& x) const {
    if (x.size() != rows_) throw invalid_input("apply_transpose: dimension mismatch");
    std::vector<double> y(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        const double* row = data_.data() + r * cols_;
        for (std::size_t c = 0; c < cols_; ++c) y[c] += row[c] * x[r];
    }
    return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void write_csv(const Matrix& m, std::ostream& out) {
    char buf[40];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            out << buf << (c + 1 < m.cols() ? "," : "");
        }
        out << '\n';
    }
}

Matrix read_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw invalid_input("csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw invalid_input("csv: no data");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    return m;
}

namespace {

constexpr char kMagic[8] = {'S', 'S', 'V', 'M', 'A', 'T', '0', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b, 8);
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
    return v;
}

} // namespace

void write_binary(const Matrix& m, std::ostream& out) {
    out.write(kMagic, 8);
    put_u64(out, m.rows());
    put_u64(out, m.cols());
    for (double v : m.data()) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
        put_u64(out, bits);
    }
}

Matrix read_binary(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw invalid_input("binary matrix: bad magic");
    std::uint64_t rows = get_u64(in), cols = get_u64(in);
    if (!in || rows == 0 || cols == 0 || rows * cols > (1ull << 32))
        throw invalid_input("binary matrix: bad dimensions");
    Matrix m(rows, cols);
    for (auto& v : m.data()) v = std::bit_cast<double>(get_u64(in));
    if (!in) throw invalid_input("binary matrix: truncated payload");
    return m;
}

void write_csv_file(const Matrix& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw invalid_input("cannot open for writing: " + path);
    write_csv(m, f);
}

Matrix read_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw invalid_input("cannot open: " + path);
    return read_csv(f);
}

void write_binary_file(const Matrix& m, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw invalid_input("cannot open for writing: " + path);
    write_binary(m, f);
}

Matrix read_binary_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw invalid_input("cannot open: " + path);
    return read_binary(f);
}

} // namespace ssv
