/// Toric varieties as complete fans, torus-invariant divisors, ampleness,
/// pullback along fan refinements, and the split of a pulled-back ample
/// divisor into an ample part plus an effective exceptional part.

#ifndef TORIFACT_TORIC_HPP
#define TORIFACT_TORIC_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torifact/fan.hpp"

namespace torifact {

class ToricVariety {
  public:
    ToricVariety(Fan fan, int lattice_rank);

    const Fan& fan() const { return fan_; }
    int lattice_rank() const { return rank_; }
    bool simplicial() const { return fan_.simplicial(); }
    bool smooth() const { return fan_.smooth(); }

    bool operator==(const ToricVariety& o) const { return fan_ == o.fan_; }

  private:
    Fan fan_;
    int rank_;
};

using VarietyPtr = std::shared_ptr<const ToricVariety>;

/// One rational coefficient per ray of the owner fan (ray order = canonical
/// fan order). Effective iff all coefficients are >= 0.
struct TorusDivisor {
    VarietyPtr owner;
    QVec coeffs;

    TorusDivisor() = default;
    TorusDivisor(VarietyPtr v, QVec c);

    bool effective() const;
    bool is_zero_divisor() const { return torifact::is_zero(coeffs); }

    TorusDivisor scaled(const Rat& k) const;
    TorusDivisor plus(const TorusDivisor& o) const;
    TorusDivisor minus(const TorusDivisor& o) const;
};

/// {u : <u, ray> >= -coeff for every ray}; bounded because the fan is
/// complete; may be empty.
LatticePolytope divisor_polytope(const TorusDivisor& d);

/// Value of the divisor's support function at a lattice point: <u_sigma, v>
/// where u_sigma interpolates the coefficients on a maximal cone containing
/// v. Throws NotCartier when no consistent interpolation exists.
Rat support_value(const TorusDivisor& d, const ZVec& v);

struct AmplenessWitness {
    bool ample = false;
    std::string failure; // empty when ample
};

/// Strict convexity of the support function across every wall, cross-checked
/// against normal_fan(divisor_polytope(d)) == fan (both must hold).
AmplenessWitness is_ample(const TorusDivisor& d);

/// A fan refinement X -> Y over the identity lattice map.
struct ToricMorphism {
    VarietyPtr source; // X
    VarietyPtr target; // Y
    std::vector<int> exceptional_rays; // indices into source fan rays

    std::vector<ZVec> exceptional_ray_vectors() const;
    bool is_isomorphism() const { return exceptional_rays.empty(); }
};

/// Proves that every cone of X lies in a cone of Y and that Y's rays all
/// appear in X; throws NotRefinement with a counterexample cone otherwise.
ToricMorphism check_refinement(const VarietyPtr& x, const VarietyPtr& y);

/// Pullback along a refinement: coefficient at a source ray v is
/// -support_value(D, v). Satisfies divisor_polytope(f*D) == divisor_polytope(D).
TorusDivisor pullback(const ToricMorphism& f, const TorusDivisor& d);

/// m * f*(D) = A + E with A ample and E effective, supported exactly on the
/// exceptional rays.
struct KodairaSplit {
    ToricMorphism f;
    TorusDivisor d_on_target;
    int m = 0;
    TorusDivisor a; // ample part
    TorusDivisor e; // effective exceptional part
    AmplenessWitness a_ample;
    bool e_effective = false;
    bool e_support_exact = false;
    bool neg_e_relatively_ample = false;
};

/// Bounded deterministic search: m ascending, then the sum of the
/// exceptional coefficients, then lexicographic. Throws SearchExhausted when
/// the bounds are too small.
KodairaSplit kodaira_split(const ToricMorphism& f, const TorusDivisor& d, int m_max = 12,
                           int c_max = 6);

/// Strict convexity of the support function of -E on the subdivision of
/// every target cone (across interior walls only).
bool check_neg_exceptional(const ToricMorphism& f, const TorusDivisor& e);

struct TwistDescentRow {
    int n = 0;
    bool twist_ample = false;  // n*f*L - E ample on the source
    bool points_equal = false; // sections downstairs match the descended bundle
    bool fan_equal = false;    // normal fan of the descended polytope = target fan
    bool ok() const { return twist_ample && points_equal && fan_equal; }
};

struct TwistDescentReport {
    int n_found = -1; // least n with all three checks true, -1 if none <= n_max
    std::vector<TwistDescentRow> rows;
};

/// Searches for the least n <= n_max such that the twist M = n*f*L - E is
/// ample on the source while the untwisted bundle M + E still descends to
/// the target: lattice_points(P_{M+E}) equals lattice_points(P_{nL})
/// (computed from the target fan) and normal_fan(P_{M+E}) equals the target
/// fan. E = 0 makes every check trivially true from the first ample n.
TwistDescentReport verify_twist_descent(const ToricMorphism& f, const TorusDivisor& l,
                                        const TorusDivisor& e, int n_max = 8);

} // namespace torifact

#endif // TORIFACT_TORIC_HPP
