/// Dense exact linear algebra on small matrices: Gaussian elimination over
/// the rationals (solve, rank, nullspace) and integer normal forms (Smith
/// diagonal, integer kernel). Everything here is sized for desk-scale inputs
/// (dimension <= ~8), so the simple cubic algorithms are the right tool.

#ifndef TORIFACT_LINALG_HPP
#define TORIFACT_LINALG_HPP

#include <optional>
#include <vector>

#include "torifact/rational.hpp"

namespace torifact {

using QMat = std::vector<QVec>; // row major
using ZMat = std::vector<ZVec>;

QMat to_qmat(const ZMat& m);

int rank(QMat a);

/// Basis of { x : a x = 0 }.
std::vector<QVec> nullspace(const QMat& a, int ncols);

/// Unique solution of a square system; nullopt when singular.
std::optional<QVec> solve_unique(QMat a, QVec b);

/// Any solution of a (possibly overdetermined) consistent system;
/// nullopt when inconsistent. `unique` reports whether the solution is unique.
std::optional<QVec> solve_consistent(QMat a, QVec b, int ncols, bool* unique = nullptr);

Rat determinant(QMat a);

/// Diagonal of the Smith normal form (nonnegative, divisibility chain),
/// zeros trimmed. The product of the entries is the index of the row lattice
/// inside its saturation.
std::vector<Int> smith_diagonal(ZMat a);

/// Basis of the integer kernel { x in Z^n : a x = 0 }.
std::vector<ZVec> integer_kernel(const ZMat& a, int ncols);

/// Saturation of the span: basis of span_Q(rows) ∩ Z^n.
std::vector<ZVec> saturated_lattice_basis(const ZMat& rows, int ncols);

} // namespace torifact

#endif // TORIFACT_LINALG_HPP
