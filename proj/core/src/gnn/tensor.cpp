#include "steiner/gnn/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace steiner::gnn {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    require(a.cols == b.cols, "matmul_nt: inner dimensions differ");
    Matrix out(a.rows, b.rows);
    for (int i = 0; i < a.rows; ++i) {
        const double* ai = a.row(i);
        double* oi = out.row(i);
        for (int j = 0; j < b.rows; ++j) {
            const double* bj = b.row(j);
            double acc = 0.0;
            for (int t = 0; t < a.cols; ++t) acc += ai[t] * bj[t];
            oi[j] = acc;
        }
    }
    return out;
}

void matmul_tn_accumulate(const Matrix& a, const Matrix& b, Matrix& out) {
    require(a.rows == b.rows, "matmul_tn: batch dimensions differ");
    require(out.rows == a.cols && out.cols == b.cols, "matmul_tn: output shape mismatch");
    for (int n = 0; n < a.rows; ++n) {
        const double* an = a.row(n);
        const double* bn = b.row(n);
        for (int i = 0; i < a.cols; ++i) {
            double* oi = out.row(i);
            const double ani = an[i];
            if (ani == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) oi[j] += ani * bn[j];
        }
    }
}

Matrix matmul_nn(const Matrix& a, const Matrix& b) {
    require(a.cols == b.rows, "matmul_nn: inner dimensions differ");
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        const double* ai = a.row(i);
        double* oi = out.row(i);
        for (int t = 0; t < a.cols; ++t) {
            const double ait = ai[t];
            if (ait == 0.0) continue;
            const double* bt = b.row(t);
            for (int j = 0; j < b.cols; ++j) oi[j] += ait * bt[j];
        }
    }
    return out;
}

void add_inplace(Matrix& target, const Matrix& delta) {
    require(target.same_shape(delta), "add_inplace: shape mismatch");
    for (std::size_t i = 0; i < target.data.size(); ++i) target.data[i] += delta.data[i];
}

void scale_inplace(Matrix& target, double factor) {
    for (double& v : target.data) v *= factor;
}

}  // namespace steiner::gnn
