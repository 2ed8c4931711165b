#include "torifact/toric.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace torifact {

ToricVariety::ToricVariety(Fan fan, int lattice_rank) : fan_(std::move(fan)), rank_(lattice_rank) {
    if (fan_.dim_ambient() != rank_)
        fail(ErrorKind::ValidationError, "fan ambient dimension does not match lattice rank");
    if (!fan_.valid()) fail(ErrorKind::ValidationError, "fan is not a valid fan");
    if (!fan_.complete())
        fail(ErrorKind::ValidationError, "fan is not complete (projective inputs only)");
}

TorusDivisor::TorusDivisor(VarietyPtr v, QVec c) : owner(std::move(v)), coeffs(std::move(c)) {
    if (coeffs.size() != owner->fan().rays().size())
        fail(ErrorKind::ValidationError, "divisor needs one coefficient per ray");
}

bool TorusDivisor::effective() const {
    for (const Rat& c : coeffs)
        if (c < 0) return false;
    return true;
}

TorusDivisor TorusDivisor::scaled(const Rat& k) const {
    return TorusDivisor(owner, torifact::scale(coeffs, k));
}

TorusDivisor TorusDivisor::plus(const TorusDivisor& o) const {
    return TorusDivisor(owner, add(coeffs, o.coeffs));
}

TorusDivisor TorusDivisor::minus(const TorusDivisor& o) const {
    return TorusDivisor(owner, sub(coeffs, o.coeffs));
}

LatticePolytope divisor_polytope(const TorusDivisor& d) {
    const Fan& fan = d.owner->fan();
    std::vector<HalfSpace> hs;
    for (size_t i = 0; i < fan.rays().size(); ++i)
        hs.push_back(make_halfspace(to_qvec(fan.rays()[i]), d.coeffs[i]));
    return vertex_enumeration(std::move(hs), fan.dim_ambient());
}

namespace {

// Linear data of the support function on one maximal cone: the vector u with
// <u, ray_i> = -coeff_i for every ray of the cone. Nullopt when inconsistent.
std::optional<QVec> cone_linear_data(const Fan& fan, const QVec& coeffs, int cone_idx) {
    const std::vector<int>& cone = fan.max_cones()[cone_idx];
    QMat a;
    QVec b;
    for (int ri : cone) {
        a.push_back(to_qvec(fan.rays()[ri]));
        b.push_back(-coeffs[ri]);
    }
    return solve_consistent(std::move(a), std::move(b), fan.dim_ambient());
}

} // namespace

Rat support_value(const TorusDivisor& d, const ZVec& v) {
    const Fan& fan = d.owner->fan();
    int k = fan.max_cone_containing(v);
    if (k < 0) fail(ErrorKind::Internal, "point outside the support of a complete fan");
    std::optional<QVec> u = cone_linear_data(fan, d.coeffs, k);
    if (!u)
        fail(ErrorKind::NotCartier,
             "support function undefined on cone containing " + zvec_to_string(v));
    return dot(to_qvec(v), *u);
}

AmplenessWitness is_ample(const TorusDivisor& d) {
    const Fan& fan = d.owner->fan();
    AmplenessWitness w;
    if (!fan.simplicial()) {
        w.failure = "fan is not simplicial";
        return w;
    }
    const size_t nc = fan.max_cones().size();
    std::vector<QVec> us(nc);
    for (size_t k = 0; k < nc; ++k) {
        std::optional<QVec> u = cone_linear_data(fan, d.coeffs, (int)k);
        if (!u) {
            w.failure = "support function undefined on cone " + std::to_string(k);
            return w;
        }
        us[k] = std::move(*u);
    }
    // strict convexity: the cone's linear data must lie strictly above the
    // support values at every ray outside the cone
    for (size_t k = 0; k < nc; ++k) {
        for (size_t ri = 0; ri < fan.rays().size(); ++ri) {
            if (std::binary_search(fan.max_cones()[k].begin(), fan.max_cones()[k].end(), (int)ri))
                continue;
            if (dot(fan.rays()[ri], us[k]) <= -d.coeffs[ri]) {
                std::ostringstream os;
                os << "support function not strictly convex across the wall between cone " << k
                   << " and ray " << zvec_to_string(fan.rays()[ri]);
                w.failure = os.str();
                return w;
            }
        }
    }
    // cross-check: the polytope's normal fan must reproduce the fan
    LatticePolytope p = divisor_polytope(d);
    if (p.affine_dim() != fan.dim_ambient()) {
        w.failure = "divisor polytope is not full-dimensional";
        return w;
    }
    if (normal_fan(p) != fan) {
        w.failure = "normal fan of the divisor polytope differs from the fan";
        return w;
    }
    w.ample = true;
    return w;
}

std::vector<ZVec> ToricMorphism::exceptional_ray_vectors() const {
    std::vector<ZVec> out;
    for (int i : exceptional_rays) out.push_back(source->fan().rays()[i]);
    return out;
}

ToricMorphism check_refinement(const VarietyPtr& x, const VarietyPtr& y) {
    if (x->lattice_rank() != y->lattice_rank())
        fail(ErrorKind::NotRefinement, "lattice ranks differ");
    const Fan& fx = x->fan();
    const Fan& fy = y->fan();
    for (size_t k = 0; k < fx.max_cones().size(); ++k) {
        const std::vector<ZVec> rays = fx.cone_rays((int)k);
        bool contained = false;
        for (size_t j = 0; j < fy.max_cones().size() && !contained; ++j) {
            const ConeGeom& g = fy.cone_geometry((int)j);
            contained = true;
            for (const ZVec& r : rays)
                if (!g.contains(r)) {
                    contained = false;
                    break;
                }
        }
        if (!contained) {
            std::ostringstream os;
            os << "source cone {";
            for (size_t i = 0; i < rays.size(); ++i) {
                if (i) os << ' ';
                os << zvec_to_string(rays[i]);
            }
            os << "} lies in no target cone";
            fail(ErrorKind::NotRefinement, os.str());
        }
    }
    for (const ZVec& r : fy.rays())
        if (fx.ray_index(r) < 0)
            fail(ErrorKind::NotRefinement,
                 "target ray " + zvec_to_string(r) + " is not a source ray");
    ToricMorphism f;
    f.source = x;
    f.target = y;
    for (size_t i = 0; i < fx.rays().size(); ++i)
        if (fy.ray_index(fx.rays()[i]) < 0) f.exceptional_rays.push_back((int)i);
    return f;
}

TorusDivisor pullback(const ToricMorphism& f, const TorusDivisor& d) {
    if (d.owner.get() != f.target.get() && !(d.owner->fan() == f.target->fan()))
        fail(ErrorKind::ValidationError, "pullback needs a divisor on the target");
    const Fan& fx = f.source->fan();
    QVec coeffs(fx.rays().size());
    for (size_t i = 0; i < fx.rays().size(); ++i)
        coeffs[i] = -support_value(d, fx.rays()[i]);
    return TorusDivisor(f.source, std::move(coeffs));
}

namespace {

// Compositions of `total` into `parts` entries within [1, cmax], lex order.
template <typename Fn>
bool for_compositions(int total, int parts, int cmax, std::vector<int>& buf, Fn&& fn) {
    if (parts == 1) {
        if (total >= 1 && total <= cmax) {
            buf.push_back(total);
            bool stop = fn(buf);
            buf.pop_back();
            return stop;
        }
        return false;
    }
    for (int v = 1; v <= cmax; ++v) {
        if (total - v < parts - 1 || total - v > (parts - 1) * cmax) continue;
        buf.push_back(v);
        if (for_compositions(total - v, parts - 1, cmax, buf, fn)) {
            buf.pop_back();
            return true;
        }
        buf.pop_back();
    }
    return false;
}

} // namespace

KodairaSplit kodaira_split(const ToricMorphism& f, const TorusDivisor& d, int m_max, int c_max) {
    AmplenessWitness dw = is_ample(d);
    if (!dw.ample)
        fail(ErrorKind::ValidationError, "divisor on the target is not ample: " + dw.failure);
    if (f.exceptional_rays.empty())
        fail(ErrorKind::ValidationError,
             "morphism has no exceptional ray; nothing to split");

    TorusDivisor fd = pullback(f, d);
    const int k = (int)f.exceptional_rays.size();

    for (int m = 1; m <= m_max; ++m) {
        QVec base = scale(fd.coeffs, Rat(m));
        for (int total = k; total <= k * c_max; ++total) {
            std::vector<int> buf;
            KodairaSplit found;
            bool done = for_compositions(total, k, c_max, buf, [&](const std::vector<int>& c) {
                QVec acoeffs = base;
                QVec ecoeffs(base.size(), Rat(0));
                for (int i = 0; i < k; ++i) {
                    acoeffs[f.exceptional_rays[i]] -= c[i];
                    ecoeffs[f.exceptional_rays[i]] = c[i];
                }
                TorusDivisor a(f.source, acoeffs);
                AmplenessWitness w = is_ample(a);
                if (!w.ample) return false;
                found.f = f;
                found.d_on_target = d;
                found.m = m;
                found.a = std::move(a);
                found.e = TorusDivisor(f.source, ecoeffs);
                found.a_ample = std::move(w);
                found.e_effective = found.e.effective();
                found.e_support_exact = true;
                for (size_t ri = 0; ri < found.e.coeffs.size(); ++ri) {
                    bool exc = std::find(f.exceptional_rays.begin(), f.exceptional_rays.end(),
                                         (int)ri) != f.exceptional_rays.end();
                    if (exc != (found.e.coeffs[ri] > 0)) found.e_support_exact = false;
                }
                found.neg_e_relatively_ample = check_neg_exceptional(f, found.e);
                return true;
            });
            if (done) return found;
        }
    }
    std::ostringstream os;
    os << "no split with m <= " << m_max << " and exceptional coefficients <= " << c_max;
    fail(ErrorKind::SearchExhausted, os.str());
}

bool check_neg_exceptional(const ToricMorphism& f, const TorusDivisor& e) {
    for (size_t i = 0; i < e.coeffs.size(); ++i) {
        bool exc = std::find(f.exceptional_rays.begin(), f.exceptional_rays.end(), (int)i) !=
                   f.exceptional_rays.end();
        if (!exc && e.coeffs[i] != 0)
            fail(ErrorKind::ValidationError, "divisor not supported on the exceptional rays");
    }
    const Fan& fx = f.source->fan();
    const Fan& fy = f.target->fan();
    const int n = fx.dim_ambient();

    // -E has coefficients -e_i, so its linear data solves <u, ray> = e_ray.
    QVec neg(e.coeffs.size());
    for (size_t i = 0; i < e.coeffs.size(); ++i) neg[i] = -e.coeffs[i];

    bool any_wall = false;
    for (size_t j = 0; j < fy.max_cones().size(); ++j) {
        const ConeGeom& gy = fy.cone_geometry((int)j);
        std::vector<int> inside;
        for (size_t k = 0; k < fx.max_cones().size(); ++k) {
            bool in = true;
            for (const ZVec& r : fx.cone_rays((int)k))
                if (!gy.contains(r)) {
                    in = false;
                    break;
                }
            if (in) inside.push_back((int)k);
        }
        for (size_t a = 0; a < inside.size(); ++a) {
            std::optional<QVec> ua = cone_linear_data(fx, neg, inside[a]);
            if (!ua) return false;
            for (size_t b = 0; b < inside.size(); ++b) {
                if (a == b) continue;
                const std::vector<int>& ca = fx.max_cones()[inside[a]];
                const std::vector<int>& cb = fx.max_cones()[inside[b]];
                std::vector<int> common;
                std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(),
                                      std::back_inserter(common));
                if ((int)common.size() != n - 1) continue; // not wall-adjacent
                any_wall = true;
                for (int ri : cb) {
                    if (std::binary_search(common.begin(), common.end(), ri)) continue;
                    if (dot(fx.rays()[ri], *ua) <= e.coeffs[ri]) return false;
                }
            }
        }
    }
    return any_wall; // with no interior wall there is nothing to contract
}

TwistDescentReport verify_twist_descent(const ToricMorphism& f, const TorusDivisor& l,
                                        const TorusDivisor& e, int n_max) {
    if (!e.effective())
        fail(ErrorKind::ValidationError, "twist divisor must be effective");
    TwistDescentReport rep;
    TorusDivisor fl = pullback(f, l);

    for (int n = 1; n <= n_max; ++n) {
        TwistDescentRow row;
        row.n = n;
        TorusDivisor nfl = fl.scaled(Rat(n));
        TorusDivisor twist = nfl.minus(e);
        row.twist_ample = is_ample(twist).ample;

        LatticePolytope up = divisor_polytope(nfl); // descended bundle, source-fan constraints
        LatticePolytope down = divisor_polytope(l.scaled(Rat(n)));
        row.points_equal = (lattice_points(up) == lattice_points(down));
        try {
            row.fan_equal = (normal_fan(up) == f.target->fan());
        } catch (const Error&) {
            row.fan_equal = false;
        }
        rep.rows.push_back(row);
        if (row.ok()) {
            rep.n_found = n;
            break;
        }
    }
    return rep;
}

} // namespace torifact
