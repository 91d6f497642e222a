#pragma once

#include <cstddef>
#include <vector>

namespace steiner::gnn {

// Row-major dense matrix. Everything the model stores (including bias-like
// vectors, kept as 1 x d) uses this one shape-checked type.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
    void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

// out = a * b^T; a is n x k, b is m x k, out is n x m. Row-times-row keeps
// both operands sequential.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

// out = a^T * b; a is n x k, b is n x m, out is k x m. Gradient accumulation
// shape: sum over the batch dimension.
void matmul_tn_accumulate(const Matrix& a, const Matrix& b, Matrix& out);

// out = a * b; a is n x k, b is k x m.
Matrix matmul_nn(const Matrix& a, const Matrix& b);

void add_inplace(Matrix& target, const Matrix& delta);
void scale_inplace(Matrix& target, double factor);

}  // namespace steiner::gnn
