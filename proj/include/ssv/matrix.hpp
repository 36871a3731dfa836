#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace ssv {

/// Dense row-major double matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    static Matrix identity(std::size_t n);

    std::vector<double> column(std::size_t c) const;
    double frobenius_norm() const;

    /// y = M x
    std::vector<double> apply(const std::vector<double>& x) const;
    /// y = M^t x
    std::vector<double> apply_transpose(const std::vector<double>& x) const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Row-major CSV, one row per line, full round-trip precision.
void write_csv(const Matrix& m, std::ostream& out);
Matrix read_csv(std::istream& in);
void write_csv_file(const Matrix& m, const std::string& path);
Matrix read_csv_file(const std::string& path);

/// Binary container: magic "SSVMAT01", u64 rows, u64 cols, then rows*cols
/// little-endian IEEE doubles, row-major. Bit-exact round trip.
void write_binary(const Matrix& m, std::ostream& out);
Matrix read_binary(std::istream& in);
void write_binary_file(const Matrix& m, const std::string& path);
Matrix read_binary_file(const std::string& path);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

} // namespace ssv
