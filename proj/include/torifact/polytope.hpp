/// Rational polytopes with both representations kept consistent: the
/// half-space description {x : <a,x> >= -b} and the exact vertex set.
/// Vertex enumeration is brute force over constraint subsets, which is the
/// right trade at desk scale (ambient dimension <= ~7, <= ~40 constraints).

#ifndef TORIFACT_POLYTOPE_HPP
#define TORIFACT_POLYTOPE_HPP

#include <optional>
#include <vector>

#include "torifact/linalg.hpp"
#include "torifact/rational.hpp"

namespace torifact {

/// One inequality <normal, x> >= -offset with integer data.
/// Canonical form divides through by the gcd of all entries.
struct HalfSpace {
    ZVec normal;
    Int offset;

    HalfSpace() = default;
    HalfSpace(ZVec n, Int b) : normal(std::move(n)), offset(std::move(b)) {}

    void canonicalize();
    bool satisfied_by(const QVec& x) const { return dot(normal, x) >= -Rat(offset); }
    bool tight_at(const QVec& x) const { return dot(normal, x) == -Rat(offset); }

    bool operator==(const HalfSpace& o) const = default;
    bool operator<(const HalfSpace& o) const;
};

/// Build a half-space from rational data by clearing denominators.
HalfSpace make_halfspace(const QVec& normal, const Rat& offset);

/// Bounded rational polytope. The vertex list is exactly the set of extreme
/// points of the intersection of the half-spaces (checked on construction).
/// The empty polytope is a distinct value from the single point {0}.
class LatticePolytope {
  public:
    LatticePolytope() = default;

    static LatticePolytope empty(int dim_ambient);

    int dim_ambient() const { return dim_ambient_; }
    bool is_empty() const { return vertices_.empty(); }
    bool is_point() const { return vertices_.size() == 1; }

    const std::vector<HalfSpace>& hrep() const { return hrep_; }
    const std::vector<QVec>& vertices() const { return vertices_; }

    bool contains(const QVec& x) const;
    bool contains(const ZVec& x) const { return contains(to_qvec(x)); }

    /// Dimension of the affine hull (-1 for empty).
    int affine_dim() const;

    LatticePolytope dilate(const Int& k) const;
    LatticePolytope translate(const ZVec& t) const;

    /// Geometric equality: identical (canonically sorted) vertex sets.
    bool operator==(const LatticePolytope& o) const { return vertices_ == o.vertices_; }

    friend LatticePolytope vertex_enumeration(std::vector<HalfSpace> hrep, int dim);

  private:
    int dim_ambient_ = 0;
    std::vector<HalfSpace> hrep_;
    std::vector<QVec> vertices_; // sorted lexicographically
};

/// Exact vertex enumeration. Returns the empty polytope for an infeasible
/// system and throws ErrorKind::Unbounded when the feasible set has a
/// nontrivial recession cone.
LatticePolytope vertex_enumeration(std::vector<HalfSpace> hrep, int dim);

/// All integer points of a bounded polytope (bounding-box scan with exact
/// membership tests). Sorted lexicographically.
std::vector<ZVec> lattice_points(const LatticePolytope& p);

/// P ∩ {<w, x> = t}, in the ambient space of P.
LatticePolytope slice(const LatticePolytope& p, const QVec& w, const Rat& t);

/// The u-space polytope of the slice at {last coordinate = t}: substitutes
/// the value into every constraint and re-enumerates in dimension n-1.
LatticePolytope substitute_last(const LatticePolytope& p, const Rat& t);

/// Pairwise sums {p + q : p in s1, q in s2}, sorted, deduplicated.
std::vector<ZVec> minkowski_points(const std::vector<ZVec>& s1, const std::vector<ZVec>& s2);

} // namespace torifact

#endif // TORIFACT_POLYTOPE_HPP
