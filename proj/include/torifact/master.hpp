/// The bigraded section data of a split m*f*D = A + E, the two chambers of
/// the cone spanned by A and E, and the master polytope: the (n+1)-dimensional
/// body Q = {(u,s) : <u, ray> >= -((1-s)A_ray + s E_ray), 0 <= s <= 1} whose
/// weight form w(u,s) = s realizes the one-parameter family of linearizations.
/// Slicing Q at w = s and projecting to u-space gives exactly the divisor
/// polytope of (1-s)A + sE, so quotients along the family are normal fans of
/// slices.

#ifndef TORIFACT_MASTER_HPP
#define TORIFACT_MASTER_HPP

#include <map>
#include <optional>

#include "torifact/toric.hpp"

namespace torifact {

/// Closed chambers of the (a,b)-cone: chamber 1 is spanned by A and B=A+E
/// (a >= b), chamber 2 by B and E (b >= a).
enum class Chamber { AmpleSide = 1, ExceptionalSide = 2 };

bool in_chamber(Chamber c, int a, int b);

struct SectionEntry {
    int a = 0, b = 0;
    LatticePolytope polytope;
    std::vector<ZVec> points;
    size_t h0 = 0;
};

/// Polytopes, lattice points and h^0 counts of aA + bE for all a+b <= d_max.
class SectionTable {
  public:
    SectionTable(const KodairaSplit& split, int d_max);

    int d_max() const { return d_max_; }
    const KodairaSplit& split() const { return split_; }
    const SectionEntry& at(int a, int b) const;
    /// Grows the table on demand (used by scaled multiplication checks).
    const SectionEntry& fetch(int a, int b);

  private:
    SectionEntry compute(int a, int b) const;

    KodairaSplit split_;
    int d_max_;
    std::map<std::pair<int, int>, SectionEntry> entries_;
};

struct MultiplicationFailure {
    int a1 = 0, b1 = 0, a2 = 0, b2 = 0; // scaled degrees
    ZVec missing_point;                  // in P_{v1+v2} but not in the sum set
};

struct MultiplicationReport {
    Chamber chamber;
    int scaling = 1;
    int degree_budget = 0;
    std::vector<MultiplicationFailure> failures; // at the requested scaling
    int least_scaling_ok = -1;                   // <= scaling_max, -1 when none found
};

/// Checks lattice_points(P_{k v1}) + lattice_points(P_{k v2}) ==
/// lattice_points(P_{k(v1+v2)}) for all nonzero pairs v1 <= v2 in the closed
/// chamber with deg v1 + deg v2 <= degree_budget; also finds the least
/// scaling <= scaling_max for which every checked pair passes.
MultiplicationReport check_multiplication_surjectivity(SectionTable& table, Chamber chamber,
                                                       int scaling, int degree_budget,
                                                       int scaling_max = 8);

class MasterPolytope {
  public:
    explicit MasterPolytope(const KodairaSplit& split);

    const KodairaSplit& split() const { return split_; }
    const LatticePolytope& q() const { return q_; }
    /// Ambient rank of the u-space (the body lives in rank + 1).
    int u_rank() const { return q_.dim_ambient() - 1; }
    /// Global integer clearing all vertex denominators: q_scale * Q is a
    /// lattice polytope.
    const Int& q_scale() const { return q_scale_; }

    /// Weight form value of a vertex of Q.
    Rat weight_of(const QVec& vertex) const { return vertex.back(); }

    /// The u-space polytope of the slice at parameter s; equals the divisor
    /// polytope of (1-s)A + sE exactly.
    LatticePolytope slice_at(const Rat& s) const;

    /// Divisor (1-s)A + sE on the source variety.
    TorusDivisor divisor_at(const Rat& s) const;

  private:
    KodairaSplit split_;
    LatticePolytope q_;
    Int q_scale_ = 1;
};

/// Normal fan of the u-space slice at 0 < s < 1: the quotient along the
/// family at parameter s. Throws EmptySlice when the slice is empty and
/// DegeneratePolytope when it is not full-dimensional.
Fan quotient_of_parameter(const MasterPolytope& mp, const Rat& s);

struct ChamberSample {
    Rat s;
    Fan fan;
};

struct ChamberScan {
    Rat lo, hi;                       // open interval scanned
    std::vector<ChamberSample> samples;
    bool constant = false;
    Fan fan;                          // the common fan when constant
};

/// Scans a rational grid of `samples` points strictly inside (lo, hi) and
/// requires all quotient fans to agree; throws ChamberInconsistent otherwise.
ChamberScan scan_chamber(const MasterPolytope& mp, const Rat& lo, const Rat& hi, int samples);

struct ChamberReport {
    std::vector<Rat> walls;            // interior wall parameters, ascending
    std::vector<ChamberScan> chambers; // walls.size() + 1 scans
    const ChamberScan& chamber1() const { return chambers.front(); }
    const ChamberScan& chamber2() const { return chambers.back(); }
};

/// Splits (0,1) at the given walls and scans every chamber; checks the
/// endpoint identifications chamber1 = fan(X) and chamber2 = fan(Y).
ChamberReport chamber_scan(const MasterPolytope& mp, const std::vector<Rat>& walls, int samples);

/// Degree-one generation of the section ring of (q_scale * Q): for d in
/// 2..d_check, lattice_points(d * qQ) must equal the Minkowski sum of the
/// points of qQ and of (d-1) * qQ. Returns the first failing degree with a
/// witness point, or nullopt when generation holds.
struct GenerationDeviation {
    int degree = 0;
    ZVec missing_point;
};
std::optional<GenerationDeviation> check_degree_one_generation(const MasterPolytope& mp,
                                                               int d_check);

} // namespace torifact

#endif // TORIFACT_MASTER_HPP
