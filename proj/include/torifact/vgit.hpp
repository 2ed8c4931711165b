/// Variation layer on the master polytope: wall parameters where the slice's
/// combinatorial type changes, weight-constant faces (the fixed components of
/// the weight action) with their edge weights, stable/free certificates, and
/// the factorization of a wall crossing into stellar moves.

#ifndef TORIFACT_VGIT_HPP
#define TORIFACT_VGIT_HPP

#include "torifact/master.hpp"

namespace torifact {

struct FixedComponent {
    std::vector<QVec> face_vertices; // vertices of Q spanning the face
    QVec u_centroid;                 // tie-break key (lexicographic)
    Rat weight_value;
    std::vector<Int> down_weights;   // negative, sorted
    std::vector<Int> up_weights;     // positive, sorted
    std::vector<ZVec> tight_rays;    // fan rays whose constraint is tight on the face
    Int vertex_cone_index = 0;       // lattice index of the vertex cone of q*Q
                                     // (faces of dim > 0 report 0)
};

struct Wall {
    Rat s;
    std::vector<FixedComponent> components; // centroid-lex order
};

/// Wall parameters in (0,1), computed two ways and cross-checked:
/// (i) vertex heights of Q filtered by an actual change of the quotient fan,
/// (ii) bisection localization of each change between interval midpoints.
/// Throws OracleMismatch when the methods disagree.
std::vector<Wall> compute_walls(const MasterPolytope& mp);

/// All maximal weight-constant faces of Q at the wall value, with integer
/// edge weights from primitive edge directions leaving each face.
std::vector<FixedComponent> fixed_components_at(const MasterPolytope& mp, const Rat& s);

struct VertexStability {
    QVec u;      // slice vertex
    Int gcd = 0; // gcd of the weight components of the minimal face's lattice
};

struct StabilityCertificate {
    Rat parameter;
    bool stable_equals_semistable = false;
    bool free_action = false;
    std::vector<VertexStability> witnesses;
    Int quotient_max_cone_index = 0;
};

/// Certificate at a non-wall parameter; throws WallParameter when s is in
/// the wall list.
StabilityCertificate stability_certificate(const MasterPolytope& mp, const Rat& s,
                                           const std::vector<Wall>& walls);

enum class StepKind { WeightedBlowup, WeightedBlowdown };

struct FactorizationStep {
    StepKind kind = StepKind::WeightedBlowdown;
    ZVec ray;
    std::vector<Int> weights;       // coordinates of ray in cone_rays
    std::vector<ZVec> cone_rays;    // generators of the subdivided cone
    Fan source_fan;
    Fan target_fan;
    bool target_simplicial = false;
    bool target_smooth = false;
    Int target_max_cone_index = 0;

    /// Re-derives the stellar certificate: ray = sum weights[i]*cone_rays[i],
    /// and the finer side is exactly the stellar subdivision of the coarser.
    bool verify() const;
};

struct ComponentCrossing {
    FixedComponent component;
    std::vector<FactorizationStep> steps;
    std::vector<ZVec> residual_rays; // left for a later stage (staged mode)
    bool elementary = false;         // exactly one step, nothing residual
};

struct CrossingPlan {
    Rat wall;
    Fan below;  // quotient just below the wall
    Fan above;  // quotient just above the wall
    Fan result; // fan reached after applying the plan's steps
    std::vector<ComponentCrossing> components;
    bool complete = false; // result == above
};

/// Factors the crossing at a wall: components in centroid-lex order, each
/// contributing the stellar moves for its tight rays (blowups along rays
/// gained above the wall first, then blowdowns along rays lost). Throws
/// NotElementary when some component's moves cannot be realized as integer
/// stellar subdivisions in any order.
///
/// `staged` limits every component to one move per side (the residue is the
/// business of a fresh master space for the residual morphism, emulating a
/// perturbation of the linearization); `reverse_components` flips the
/// tie-break order (used to test order-invariance of the composite).
CrossingPlan plan_crossing(const MasterPolytope& mp, const Wall& wall, bool staged = false,
                           bool reverse_components = false);

/// The flattened step sequence of a crossing (one list transforming the
/// below-fan into the above-fan).
std::vector<FactorizationStep> factor_crossing(const MasterPolytope& mp, const Wall& wall);

} // namespace torifact

#endif // TORIFACT_VGIT_HPP
