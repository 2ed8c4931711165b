/// Rational polyhedral cones and fans. A fan is stored canonically (rays
/// sorted lexicographically, maximal cones as sorted index sets, cone list
/// sorted), so fan equality is plain data equality. The derived flags
/// (valid / complete / simplicial / smooth) are computed on construction and
/// never stored stale.

#ifndef TORIFACT_FAN_HPP
#define TORIFACT_FAN_HPP

#include <optional>
#include <string>
#include <vector>

#include "torifact/polytope.hpp"

namespace torifact {

/// A cone given by primitive generators, with the derived half-space
/// description (span equations + facet normals) cached for membership and
/// face computations.
class ConeGeom {
  public:
    ConeGeom() = default;
    ConeGeom(std::vector<ZVec> rays, int dim_ambient);

    const std::vector<ZVec>& rays() const { return rays_; }
    int dim_ambient() const { return n_; }
    int dim() const { return dim_; }
    bool simplicial() const { return (int)rays_.size() == dim_; }

    const std::vector<ZVec>& span_equations() const { return span_eqs_; }
    const std::vector<ZVec>& facet_normals() const { return facet_normals_; }

    bool contains(const QVec& x) const;
    bool contains(const ZVec& x) const { return contains(to_qvec(x)); }
    bool in_relint(const ZVec& x) const;

    /// Ray indices (into rays()) tight on each facet normal.
    std::vector<std::vector<int>> facet_ray_sets() const;

  private:
    std::vector<ZVec> rays_;
    int n_ = 0;
    int dim_ = 0;
    std::vector<ZVec> span_eqs_;
    std::vector<ZVec> facet_normals_;
};

/// Lattice index of a simplicial cone: the index of the subgroup generated
/// by the rays inside the saturation of their span. 1 means smooth.
/// Throws NotSimplicial when the rays are linearly dependent.
Int cone_index(const std::vector<ZVec>& rays, int dim_ambient);

/// Extreme-ray enumeration for { x : eq x = 0, ineq x >= 0 }.
/// Returns primitive representatives. Used for cone dualization and face
/// computations; assumes the cone is pointed (throws otherwise).
std::vector<ZVec> extreme_rays(const ZMat& eqs, const ZMat& ineqs, int dim);

class Fan {
  public:
    Fan() = default;
    /// Builds the canonical form and derives all flags. `require_valid`
    /// controls whether structural defects throw (ValidationError) or are
    /// only recorded in valid().
    Fan(std::vector<ZVec> rays, std::vector<std::vector<int>> max_cones,
        int dim_ambient, bool require_valid = true);

    int dim_ambient() const { return n_; }
    const std::vector<ZVec>& rays() const { return rays_; }
    const std::vector<std::vector<int>>& max_cones() const { return cones_; }
    const ConeGeom& cone_geometry(int cone_idx) const { return geoms_[cone_idx]; }

    bool valid() const { return valid_; }
    bool complete() const { return complete_; }
    bool simplicial() const { return simplicial_; }
    bool smooth() const { return smooth_; }

    /// Largest cone index over the maximal cones (1 for smooth fans).
    Int max_cone_lattice_index() const;

    int ray_index(const ZVec& r) const; // -1 if absent
    std::vector<ZVec> cone_rays(int cone_idx) const;

    /// Index of some maximal cone containing x (-1 if none).
    int max_cone_containing(const ZVec& x) const;
    int max_cone_containing(const QVec& x) const;

    bool operator==(const Fan& o) const { return rays_ == o.rays_ && cones_ == o.cones_; }
    bool operator!=(const Fan& o) const { return !(*this == o); }

    std::string to_string() const;

  private:
    void derive_flags(bool require_valid);
    std::vector<ZVec> cone_rays_of(const std::vector<int>& c) const;

    int n_ = 0;
    std::vector<ZVec> rays_;
    std::vector<std::vector<int>> cones_;
    std::vector<ConeGeom> geoms_;
    bool valid_ = false, complete_ = false, simplicial_ = false, smooth_ = false;
};

/// Inner-normal fan of a full-dimensional bounded polytope: one maximal cone
/// per vertex, rays are the primitive inner facet normals.
/// Throws DegeneratePolytope when P is not full-dimensional.
Fan normal_fan(const LatticePolytope& p);

/// Stellar subdivision at a primitive ray v lying in the support of the fan.
Fan star_subdivision(const Fan& fan, const ZVec& v);

struct StarRecognition {
    ZVec ray;                   // the inserted ray
    std::vector<ZVec> cone_rays; // generators of the cone subdivided
    std::vector<Int> weights;    // ray = sum weights[i] * cone_rays[i]
};

/// Decides whether `fine` is the stellar subdivision of `coarse` at a single
/// extra ray with positive integer weights. On failure returns nullopt and
/// stores the reason.
std::optional<StarRecognition> recognize_star_subdivision(const Fan& fine, const Fan& coarse,
                                                          std::string* reason = nullptr);

/// The fan obtained by removing a ray and merging its star into one cone,
/// when that merge is a legal inverse of a stellar subdivision with positive
/// integer weights. Returns nullopt (with reason) otherwise.
std::optional<Fan> remove_ray_blowdown(const Fan& fan, const ZVec& ray,
                                       std::string* reason = nullptr);

} // namespace torifact

#endif // TORIFACT_FAN_HPP
