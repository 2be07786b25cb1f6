#pragma once

#include <optional>
#include <vector>

#include "osculum/errors.hpp"
#include "osculum/scalar.hpp"

namespace osculum {

template <class S>
using Mat = std::vector<std::vector<S>>;

template <class S>
Mat<S> identity_mat(int n) {
    Mat<S> out(n, std::vector<S>(n, S(0)));
    for (int i = 0; i < n; ++i) out[i][i] = S(1);
    return out;
}

template <class S>
Mat<S> matmul(const Mat<S>& a, const Mat<S>& b) {
    int n = static_cast<int>(a.size());
    int k = static_cast<int>(b.size());
    int m = k ? static_cast<int>(b[0].size()) : 0;
    Mat<S> out(n, std::vector<S>(m, S(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) {
            if (a[i][j] == S(0)) continue;
            for (int c = 0; c < m; ++c) out[i][c] += a[i][j] * b[j][c];
        }
    return out;
}

template <class S>
std::vector<S> matvec(const Mat<S>& a, const std::vector<S>& v) {
    std::vector<S> out(a.size(), S(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

namespace detail {

// Pivot choice: exact scalars take any non-zero pivot, floats the largest one.
template <class S>
int pick_pivot(const Mat<S>& m, int col, int row_from, double tol) {
    int best = -1;
    if constexpr (ScalarOps<S>::exact) {
        for (int r = row_from; r < static_cast<int>(m.size()); ++r)
            if (!(m[r][col] == S(0))) return r;
        (void)tol;
        return -1;
    } else {
        double best_mag = tol;
        for (int r = row_from; r < static_cast<int>(m.size()); ++r) {
            double mag = std::fabs(ScalarOps<S>::to_dbl(m[r][col]));
            if (mag > best_mag) { best_mag = mag; best = r; }
        }
        return best;
    }
}

} // namespace detail

// Row-echelon rank. tol is the float-mode pivot threshold.
template <class S>
int mat_rank(Mat<S> m, double tol = 1e-12) {
    if (m.empty()) return 0;
    int rows = static_cast<int>(m.size()), cols = static_cast<int>(m[0].size());
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = detail::pick_pivot(m, col, rank, tol);
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        for (int r = rank + 1; r < rows; ++r) {
            if (m[r][col] == S(0)) continue;
            S f = m[r][col] / m[rank][col];
            for (int c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

// Gauss-Jordan inverse; nullopt when singular (float: pivot below tol).
template <class S>
std::optional<Mat<S>> mat_inverse(Mat<S> m, double tol = 1e-12) {
    int n = static_cast<int>(m.size());
    Mat<S> inv = identity_mat<S>(n);
    for (int col = 0; col < n; ++col) {
        int piv = detail::pick_pivot(m, col, col, tol);
        if (piv < 0) return std::nullopt;
        std::swap(m[col], m[piv]);
        std::swap(inv[col], inv[piv]);
        S d = m[col][col];
        for (int c = 0; c < n; ++c) { m[col][c] /= d; inv[col][c] /= d; }
        for (int r = 0; r < n; ++r) {
            if (r == col || m[r][col] == S(0)) continue;
            S f = m[r][col];
            for (int c = 0; c < n; ++c) {
                m[r][c] -= f * m[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

template <class S>
Mat<S> hstack(const Mat<S>& a, const Mat<S>& b) {
    Mat<S> out = a;
    for (std::size_t r = 0; r < out.size(); ++r)
        out[r].insert(out[r].end(), b[r].begin(), b[r].end());
    return out;
}

template <class S>
Mat<double> to_double_mat(const Mat<S>& m) {
    Mat<double> out(m.size());
    for (std::size_t r = 0; r < m.size(); ++r) {
        out[r].resize(m[r].size());
        for (std::size_t c = 0; c < m[r].size(); ++c)
            out[r][c] = ScalarOps<S>::to_dbl(m[r][c]);
    }
    return out;
}

} // namespace osculum
