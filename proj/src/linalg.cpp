#include "torifact/linalg.hpp"

#include <algorithm>
#include <cstddef>

namespace torifact {

QMat to_qmat(const ZMat& m) {
    QMat out;
    out.reserve(m.size());
    for (const ZVec& row : m) out.push_back(to_qvec(row));
    return out;
}

namespace {

// Row echelon reduction in place; returns pivot column per pivot row.
std::vector<int> echelon(QMat& a, int ncols) {
    std::vector<int> pivots;
    size_t prow = 0;
    for (int col = 0; col < ncols && prow < a.size(); ++col) {
        size_t sel = prow;
        while (sel < a.size() && a[sel][col] == 0) ++sel;
        if (sel == a.size()) continue;
        std::swap(a[prow], a[sel]);
        Rat inv = a[prow][col];
        for (int j = col; j < ncols; ++j) a[prow][j] /= inv;
        if ((int)a[prow].size() > ncols) // augmented column
            a[prow][ncols] /= inv;
        for (size_t r = 0; r < a.size(); ++r) {
            if (r == prow || a[r][col] == 0) continue;
            Rat f = a[r][col];
            for (size_t j = 0; j < a[r].size(); ++j) a[r][j] -= f * a[prow][j];
        }
        pivots.push_back(col);
        ++prow;
    }
    return pivots;
}

} // namespace

int rank(QMat a) {
    if (a.empty()) return 0;
    return (int)echelon(a, (int)a[0].size()).size();
}

std::vector<QVec> nullspace(const QMat& a, int ncols) {
    QMat m = a;
    std::vector<int> pivots = m.empty() ? std::vector<int>{} : echelon(m, ncols);
    std::vector<bool> is_pivot(ncols, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<QVec> basis;
    for (int free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        QVec v(ncols, Rat(0));
        v[free] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<QVec> solve_unique(QMat a, QVec b) {
    const int n = (int)a.size();
    for (int i = 0; i < n; ++i) a[i].push_back(b[i]);
    std::vector<int> pivots = echelon(a, n);
    if ((int)pivots.size() != n) return std::nullopt;
    QVec x(n);
    for (int i = 0; i < n; ++i) x[pivots[i]] = a[i][n];
    return x;
}

std::optional<QVec> solve_consistent(QMat a, QVec b, int ncols, bool* unique) {
    for (size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
    std::vector<int> pivots = echelon(a, ncols);
    // inconsistent iff a zero row has nonzero augmented entry
    for (size_t r = pivots.size(); r < a.size(); ++r)
        if (a[r][ncols] != 0) return std::nullopt;
    if (unique) *unique = ((int)pivots.size() == ncols);
    QVec x(ncols, Rat(0));
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = a[i][ncols];
    return x;
}

Rat determinant(QMat a) {
    const size_t n = a.size();
    Rat det = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t sel = col;
        while (sel < n && a[sel][col] == 0) ++sel;
        if (sel == n) return Rat(0);
        if (sel != col) {
            std::swap(a[sel], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            Rat f = a[r][col] / a[col][col];
            for (size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    return det;
}

namespace {

Int iabs(const Int& x) { return x < 0 ? Int(-x) : x; }

// Position of the nonzero entry of least absolute value in the working block.
bool find_smallest(const ZMat& a, size_t r0, size_t c0, size_t& ri, size_t& ci) {
    bool found = false;
    Int best = 0;
    for (size_t r = r0; r < a.size(); ++r)
        for (size_t c = c0; c < a[r].size(); ++c) {
            if (a[r][c] == 0) continue;
            Int v = iabs(a[r][c]);
            if (!found || v < best) {
                found = true;
                best = v;
                ri = r;
                ci = c;
            }
        }
    return found;
}

} // namespace

std::vector<Int> smith_diagonal(ZMat a) {
    std::vector<Int> diag;
    size_t t = 0;
    const size_t rows = a.size();
    const size_t cols = rows ? a[0].size() : 0;
    while (t < rows && t < cols) {
        size_t ri = 0, ci = 0;
        if (!find_smallest(a, t, t, ri, ci)) break;
        std::swap(a[t], a[ri]);
        for (size_t r = 0; r < rows; ++r) std::swap(a[r][t], a[r][ci]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (size_t r = t + 1; r < rows; ++r) {
                if (a[r][t] == 0) continue;
                Int qt = a[r][t] / a[t][t];
                for (size_t c = t; c < cols; ++c) a[r][c] -= qt * a[t][c];
                if (a[r][t] != 0) { // gcd step: swap rows and continue
                    std::swap(a[t], a[r]);
                    clean = false;
                }
            }
            for (size_t c = t + 1; c < cols; ++c) {
                if (a[t][c] == 0) continue;
                Int qt = a[t][c] / a[t][t];
                for (size_t r = t; r < rows; ++r) a[r][c] -= qt * a[r][t];
                if (a[t][c] != 0) {
                    for (size_t r = 0; r < rows; ++r) std::swap(a[r][t], a[r][c]);
                    clean = false;
                }
            }
        }
        diag.push_back(iabs(a[t][t]));
        ++t;
    }
    // Divisibility chain is irrelevant for index computations; keep the
    // diagonal as produced (product is invariant).
    return diag;
}

std::vector<ZVec> integer_kernel(const ZMat& a, int ncols) {
    // Column reduction of a with a unimodular transform tracked on an
    // identity block below; zero columns of the reduced matrix correspond to
    // kernel basis vectors in the transform.
    const size_t rows = a.size();
    ZMat w(rows + (size_t)ncols, ZVec(ncols, Int(0)));
    for (size_t r = 0; r < rows; ++r) w[r] = a[r];
    for (int c = 0; c < ncols; ++c) w[rows + c][c] = 1;

    size_t pivot_col = 0;
    for (size_t r = 0; r < rows && pivot_col < (size_t)ncols; ++r) {
        // reduce row r over columns >= pivot_col to a single entry
        while (true) {
            size_t best = pivot_col;
            bool found = false;
            Int bv = 0;
            for (size_t c = pivot_col; c < (size_t)ncols; ++c) {
                if (w[r][c] == 0) continue;
                Int v = iabs(w[r][c]);
                if (!found || v < bv) {
                    found = true;
                    bv = v;
                    best = c;
                }
            }
            if (!found) break;
            if (best != pivot_col)
                for (size_t rr = 0; rr < w.size(); ++rr) std::swap(w[rr][pivot_col], w[rr][best]);
            bool done = true;
            for (size_t c = pivot_col + 1; c < (size_t)ncols; ++c) {
                if (w[r][c] == 0) continue;
                Int qt = w[r][c] / w[r][pivot_col];
                for (size_t rr = 0; rr < w.size(); ++rr) w[rr][c] -= qt * w[rr][pivot_col];
                if (w[r][c] != 0) done = false;
            }
            if (done) {
                ++pivot_col;
                break;
            }
        }
    }
    std::vector<ZVec> basis;
    for (size_t c = pivot_col; c < (size_t)ncols; ++c) {
        ZVec v(ncols);
        bool nonzero = false;
        for (int i = 0; i < ncols; ++i) {
            v[i] = w[rows + i][c];
            if (v[i] != 0) nonzero = true;
        }
        // column must actually be in the kernel
        bool in_kernel = true;
        for (size_t r = 0; r < rows; ++r)
            if (w[r][c] != 0) in_kernel = false;
        if (nonzero && in_kernel) basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<ZVec> saturated_lattice_basis(const ZMat& rows, int ncols) {
    // span_Q(rows) ∩ Z^n = integer kernel of an integer basis of the
    // orthogonal complement.
    std::vector<QVec> comp = nullspace(to_qmat(rows), ncols);
    ZMat comp_z;
    comp_z.reserve(comp.size());
    for (const QVec& v : comp) comp_z.push_back(primitive_direction(v));
    return integer_kernel(comp_z, ncols);
}

} // namespace torifact
