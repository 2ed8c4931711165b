#include "torifact/fan.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace torifact {

namespace {

template <typename Fn>
void for_subsets(int m, int k, Fn&& fn) {
    if (k < 0 || k > m) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

ZMat integer_nullspace_basis(const ZMat& rows, int dim) {
    std::vector<QVec> ns = nullspace(to_qmat(rows), dim);
    ZMat out;
    out.reserve(ns.size());
    for (const QVec& v : ns) out.push_back(primitive_direction(v));
    return out;
}

} // namespace

std::vector<ZVec> extreme_rays(const ZMat& eqs, const ZMat& ineqs, int dim) {
    QMat eqs_q = to_qmat(eqs);
    const int r0 = eqs.empty() ? 0 : rank(eqs_q);
    const int pick = dim - 1 - r0;
    std::set<ZVec> found;
    for_subsets((int)ineqs.size(), pick, [&](const std::vector<int>& idx) {
        QMat rows = eqs_q;
        for (int i : idx) rows.push_back(to_qvec(ineqs[i]));
        std::vector<QVec> ns = nullspace(rows, dim);
        if (ns.size() != 1) return;
        ZVec d = primitive_direction(ns[0]);
        bool plus = true, minus = true;
        for (const ZVec& row : ineqs) {
            Int s = dot(row, d);
            if (s < 0) plus = false;
            if (s > 0) minus = false;
            if (!plus && !minus) return;
        }
        if (plus && minus)
            fail(ErrorKind::Internal, "extreme ray enumeration on a cone with lineality");
        if (minus)
            for (Int& x : d) x = -x;
        found.insert(std::move(d));
    });
    return {found.begin(), found.end()};
}

ConeGeom::ConeGeom(std::vector<ZVec> rays, int dim_ambient) : n_(dim_ambient) {
    std::set<ZVec> canon;
    for (ZVec& r : rays) {
        if (is_zero(r)) fail(ErrorKind::ValidationError, "zero ray");
        canon.insert(make_primitive(std::move(r)));
    }
    rays_.assign(canon.begin(), canon.end());
    dim_ = rays_.empty() ? 0 : rank(to_qmat(rays_));
    span_eqs_ = integer_nullspace_basis(rays_, n_);
    facet_normals_ = extreme_rays(span_eqs_, rays_, n_);

    // strong convexity: lineality space must be trivial
    ZMat all = span_eqs_;
    for (const ZVec& f : facet_normals_) all.push_back(f);
    if (!rays_.empty() && (all.empty() || rank(to_qmat(all)) != n_))
        fail(ErrorKind::ValidationError, "cone is not strongly convex");

    // minimal generating set: the listed rays must be exactly the extreme rays
    std::vector<ZVec> ext = extreme_rays(span_eqs_, facet_normals_, n_);
    if (ext != rays_)
        fail(ErrorKind::ValidationError, "ray list is not the minimal generating set of its cone");
}

bool ConeGeom::contains(const QVec& x) const {
    for (const ZVec& e : span_eqs_)
        if (dot(e, x) != 0) return false;
    for (const ZVec& f : facet_normals_)
        if (dot(f, x) < 0) return false;
    return true;
}

bool ConeGeom::in_relint(const ZVec& x) const {
    QVec xq = to_qvec(x);
    for (const ZVec& e : span_eqs_)
        if (dot(e, xq) != 0) return false;
    for (const ZVec& f : facet_normals_)
        if (dot(f, xq) <= 0) return false;
    return true;
}

std::vector<std::vector<int>> ConeGeom::facet_ray_sets() const {
    std::vector<std::vector<int>> out;
    for (const ZVec& f : facet_normals_) {
        std::vector<int> tight;
        for (size_t i = 0; i < rays_.size(); ++i)
            if (dot(f, rays_[i]) == 0) tight.push_back((int)i);
        out.push_back(std::move(tight));
    }
    return out;
}

Int cone_index(const std::vector<ZVec>& rays, int dim_ambient) {
    ZMat m;
    for (const ZVec& r : rays) m.push_back(r);
    if ((int)rays.size() != (m.empty() ? 0 : rank(to_qmat(m))))
        fail(ErrorKind::NotSimplicial, "cone rays are linearly dependent");
    (void)dim_ambient;
    std::vector<Int> d = smith_diagonal(m);
    Int idx = 1;
    for (const Int& x : d) idx *= x;
    return idx;
}

Fan::Fan(std::vector<ZVec> rays, std::vector<std::vector<int>> max_cones, int dim_ambient,
         bool require_valid)
    : n_(dim_ambient) {
    // canonical ray order with index remap
    std::vector<ZVec> prim;
    prim.reserve(rays.size());
    for (ZVec& r : rays) {
        if (is_zero(r)) fail(ErrorKind::ValidationError, "zero ray in fan");
        prim.push_back(make_primitive(std::move(r)));
    }
    std::vector<int> order(prim.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return prim[a] < prim[b]; });
    std::vector<int> remap(prim.size());
    for (size_t pos = 0; pos < order.size(); ++pos) {
        rays_.push_back(prim[order[pos]]);
        remap[order[pos]] = (int)pos;
    }
    for (size_t i = 1; i < rays_.size(); ++i)
        if (rays_[i] == rays_[i - 1]) fail(ErrorKind::ValidationError, "duplicate ray in fan");

    std::set<std::vector<int>> cone_set;
    for (std::vector<int>& c : max_cones) {
        std::set<int> s;
        for (int i : c) {
            if (i < 0 || i >= (int)rays_.size())
                fail(ErrorKind::ValidationError, "cone ray index out of range");
            s.insert(remap[i]);
        }
        cone_set.insert(std::vector<int>(s.begin(), s.end()));
    }
    cones_.assign(cone_set.begin(), cone_set.end());

    geoms_.reserve(cones_.size());
    for (const std::vector<int>& c : cones_) geoms_.emplace_back(cone_rays_of(c), n_);

    derive_flags(require_valid);
}

std::vector<ZVec> Fan::cone_rays_of(const std::vector<int>& c) const {
    std::vector<ZVec> out;
    out.reserve(c.size());
    for (int i : c) out.push_back(rays_[i]);
    return out;
}

std::vector<ZVec> Fan::cone_rays(int cone_idx) const { return cone_rays_of(cones_[cone_idx]); }

void Fan::derive_flags(bool require_valid) {
    valid_ = true;
    std::string defect;

    // every ray must generate some cone, and may not sit inside a cone
    // without being one of its generators
    std::vector<bool> used(rays_.size(), false);
    for (const std::vector<int>& c : cones_)
        for (int i : c) used[i] = true;
    for (size_t i = 0; i < rays_.size() && valid_; ++i) {
        if (!used[i]) {
            valid_ = false;
            defect = "ray " + zvec_to_string(rays_[i]) + " belongs to no cone";
            break;
        }
        for (size_t k = 0; k < cones_.size(); ++k) {
            bool generator = std::binary_search(cones_[k].begin(), cones_[k].end(), (int)i);
            if (!generator && geoms_[k].contains(rays_[i])) {
                valid_ = false;
                defect = "ray " + zvec_to_string(rays_[i]) + " lies inside a foreign cone";
                break;
            }
        }
    }

    // no listed cone may contain another
    for (size_t a = 0; a < cones_.size() && valid_; ++a)
        for (size_t b = 0; b < cones_.size() && valid_; ++b) {
            if (a == b) continue;
            if (std::includes(cones_[b].begin(), cones_[b].end(), cones_[a].begin(),
                              cones_[a].end())) {
                valid_ = false;
                defect = "maximal cone contained in another";
            }
        }

    // pairwise intersections must be the common face
    for (size_t a = 0; a < cones_.size() && valid_; ++a) {
        for (size_t b = a + 1; b < cones_.size() && valid_; ++b) {
            std::vector<int> common;
            std::set_intersection(cones_[a].begin(), cones_[a].end(), cones_[b].begin(),
                                  cones_[b].end(), std::back_inserter(common));
            ZMat eqs, ineqs;
            for (const ZVec& e : geoms_[a].span_equations()) eqs.push_back(e);
            for (const ZVec& e : geoms_[b].span_equations()) eqs.push_back(e);
            for (const ZVec& f : geoms_[a].facet_normals()) ineqs.push_back(f);
            for (const ZVec& f : geoms_[b].facet_normals()) ineqs.push_back(f);
            std::vector<ZVec> inter;
            try {
                inter = extreme_rays(eqs, ineqs, n_);
            } catch (const Error&) {
                valid_ = false;
                defect = "cone intersection has lineality";
                break;
            }
            std::vector<ZVec> expected;
            for (int i : common) expected.push_back(rays_[i]);
            std::sort(expected.begin(), expected.end());
            if (inter != expected) {
                valid_ = false;
                defect = "cones intersect outside their common face";
                break;
            }
            // the common ray set must span a face of each cone
            for (size_t side = 0; side < 2 && valid_; ++side) {
                const ConeGeom& g = geoms_[side == 0 ? a : b];
                const std::vector<int>& cn = cones_[side == 0 ? a : b];
                for (int i : common) {
                    bool gen = std::binary_search(cn.begin(), cn.end(), i);
                    if (!gen) {
                        valid_ = false;
                        defect = "common face not generated by shared rays";
                        break;
                    }
                }
                (void)g;
            }
        }
    }

    if (!valid_ && require_valid) fail(ErrorKind::ValidationError, "invalid fan: " + defect);

    simplicial_ = true;
    smooth_ = true;
    for (size_t k = 0; k < cones_.size(); ++k) {
        if (!geoms_[k].simplicial()) {
            simplicial_ = false;
            smooth_ = false;
        } else if (cone_index(cone_rays(k), n_) != 1) {
            smooth_ = false;
        }
    }

    // completeness: pure full-dimensional and every ridge shared exactly twice
    complete_ = valid_ && !cones_.empty();
    for (size_t k = 0; k < cones_.size() && complete_; ++k)
        if (geoms_[k].dim() != n_) complete_ = false;
    if (complete_) {
        std::map<std::vector<int>, int> ridge_count;
        for (size_t k = 0; k < cones_.size(); ++k) {
            for (const std::vector<int>& local : geoms_[k].facet_ray_sets()) {
                std::vector<int> global;
                for (int li : local) global.push_back(cones_[k][li]);
                std::sort(global.begin(), global.end());
                ridge_count[global] += 1;
            }
        }
        for (const auto& [ridge, count] : ridge_count)
            if (count != 2) complete_ = false;
    }
}

Int Fan::max_cone_lattice_index() const {
    Int best = 0;
    for (size_t k = 0; k < cones_.size(); ++k)
        if (geoms_[k].simplicial()) best = std::max(best, cone_index(cone_rays(k), n_));
    return best;
}

int Fan::ray_index(const ZVec& r) const {
    ZVec p = make_primitive(r);
    auto it = std::lower_bound(rays_.begin(), rays_.end(), p);
    if (it != rays_.end() && *it == p) return (int)(it - rays_.begin());
    return -1;
}

int Fan::max_cone_containing(const ZVec& x) const { return max_cone_containing(to_qvec(x)); }

int Fan::max_cone_containing(const QVec& x) const {
    for (size_t k = 0; k < cones_.size(); ++k)
        if (geoms_[k].contains(x)) return (int)k;
    return -1;
}

std::string Fan::to_string() const {
    std::ostringstream os;
    os << "rays{";
    for (size_t i = 0; i < rays_.size(); ++i) {
        if (i) os << ' ';
        os << zvec_to_string(rays_[i]);
    }
    os << "} cones{";
    for (size_t k = 0; k < cones_.size(); ++k) {
        if (k) os << ' ';
        os << '[';
        for (size_t j = 0; j < cones_[k].size(); ++j) {
            if (j) os << ',';
            os << cones_[k][j];
        }
        os << ']';
    }
    os << '}';
    return os.str();
}

Fan normal_fan(const LatticePolytope& p) {
    const int n = p.dim_ambient();
    if (p.affine_dim() != n)
        fail(ErrorKind::DegeneratePolytope,
             "normal fan needs a full-dimensional polytope (project to the affine hull first)");

    // facets: half-spaces whose tight vertex set has affine dimension n-1
    std::vector<ZVec> ray_list;
    std::vector<std::vector<int>> facet_vertices; // per facet, vertex ids
    std::set<ZVec> seen;
    for (const HalfSpace& h : p.hrep()) {
        std::vector<int> tight;
        for (size_t vi = 0; vi < p.vertices().size(); ++vi)
            if (h.tight_at(p.vertices()[vi])) tight.push_back((int)vi);
        if (tight.empty()) continue;
        QMat diffs;
        for (size_t i = 1; i < tight.size(); ++i)
            diffs.push_back(sub(p.vertices()[tight[i]], p.vertices()[tight[0]]));
        int adim = diffs.empty() ? 0 : rank(diffs);
        if (adim != n - 1) continue;
        ZVec prim = make_primitive(h.normal);
        if (seen.insert(prim).second) {
            ray_list.push_back(prim);
            facet_vertices.push_back(std::move(tight));
        }
    }

    std::vector<std::vector<int>> cones;
    for (size_t vi = 0; vi < p.vertices().size(); ++vi) {
        std::vector<int> c;
        for (size_t f = 0; f < ray_list.size(); ++f)
            if (std::binary_search(facet_vertices[f].begin(), facet_vertices[f].end(), (int)vi))
                c.push_back((int)f);
        cones.push_back(std::move(c));
    }
    return Fan(std::move(ray_list), std::move(cones), n);
}

Fan star_subdivision(const Fan& fan, const ZVec& v_in) {
    ZVec v = make_primitive(v_in);
    if (fan.ray_index(v) >= 0)
        fail(ErrorKind::ValidationError, "subdivision ray is already a ray of the fan");
    bool inside = false;
    std::vector<ZVec> rays = fan.rays();
    rays.push_back(v);
    std::vector<std::vector<int>> cones;
    const int vidx = -1; // filled after remap on construction; use raw index below
    (void)vidx;
    const int new_index = (int)fan.rays().size();
    for (size_t k = 0; k < fan.max_cones().size(); ++k) {
        const ConeGeom& g = fan.cone_geometry((int)k);
        if (!g.contains(v)) {
            cones.push_back(fan.max_cones()[k]);
            continue;
        }
        inside = true;
        for (const std::vector<int>& local : g.facet_ray_sets()) {
            std::vector<ZVec> facet_rays;
            for (int li : local) facet_rays.push_back(g.rays()[li]);
            ConeGeom facet(facet_rays, fan.dim_ambient());
            if (facet.contains(v)) continue;
            std::vector<int> c;
            for (const ZVec& r : facet_rays) {
                // map back to global index (geometry rays are sorted copies)
                int gi = fan.ray_index(r);
                c.push_back(gi);
            }
            c.push_back(new_index);
            cones.push_back(std::move(c));
        }
    }
    if (!inside)
        fail(ErrorKind::ValidationError, "subdivision ray lies outside the fan support");
    return Fan(std::move(rays), std::move(cones), fan.dim_ambient());
}

std::optional<StarRecognition> recognize_star_subdivision(const Fan& fine, const Fan& coarse,
                                                          std::string* reason) {
    auto bail = [&](const std::string& why) -> std::optional<StarRecognition> {
        if (reason) *reason = why;
        return std::nullopt;
    };
    for (const ZVec& r : coarse.rays())
        if (fine.ray_index(r) < 0) return bail("coarse ray " + zvec_to_string(r) + " missing from fine fan");
    std::vector<ZVec> extra;
    for (const ZVec& r : fine.rays())
        if (coarse.ray_index(r) < 0) extra.push_back(r);
    if (extra.size() != 1)
        return bail("expected exactly one extra ray, found " + std::to_string(extra.size()));
    const ZVec v = extra[0];

    int host = coarse.max_cone_containing(v);
    if (host < 0) return bail("extra ray outside the coarse fan support");

    // minimal face of the host cone containing v
    const ConeGeom& g = coarse.cone_geometry(host);
    QVec vq = to_qvec(v);
    std::vector<ZVec> face_rays;
    {
        std::vector<std::vector<int>> fsets = g.facet_ray_sets();
        std::set<int> keep;
        for (size_t i = 0; i < g.rays().size(); ++i) keep.insert((int)i);
        for (size_t f = 0; f < g.facet_normals().size(); ++f) {
            if (dot(g.facet_normals()[f], vq) != 0) continue;
            std::set<int> tight(fsets[f].begin(), fsets[f].end());
            std::set<int> inter;
            for (int i : keep)
                if (tight.count(i)) inter.insert(i);
            keep = std::move(inter);
        }
        for (int i : keep) face_rays.push_back(g.rays()[i]);
    }
    if (face_rays.size() < 2) return bail("extra ray lies on a face of dimension < 2");

    QMat m;
    for (const ZVec& r : face_rays) m.push_back(to_qvec(r));
    // transpose: columns are the generators
    QMat mt((size_t)fine.dim_ambient(), QVec(face_rays.size()));
    for (size_t i = 0; i < face_rays.size(); ++i)
        for (int j = 0; j < fine.dim_ambient(); ++j) mt[j][i] = Rat(face_rays[i][j]);
    bool unique = false;
    std::optional<QVec> coeffs = solve_consistent(mt, vq, (int)face_rays.size(), &unique);
    if (!coeffs || !unique)
        return bail("containing cone is not simplicial; weights are not determined");
    std::vector<Int> weights;
    for (const Rat& c : *coeffs) {
        if (rat_den(c) != 1 || rat_num(c) <= 0)
            return bail("weights are not positive integers: " + qvec_to_string(*coeffs));
        weights.push_back(rat_num(c));
    }

    Fan rebuilt = star_subdivision(coarse, v);
    if (rebuilt != fine) return bail("fine fan is not the stellar subdivision at the extra ray");

    StarRecognition rec;
    rec.ray = v;
    rec.cone_rays = face_rays;
    rec.weights = std::move(weights);
    return rec;
}

namespace {

using RaySet = std::set<ZVec>;

// Canonical ray sets of the pieces of the stellar subdivision of a single
// cone at v.
std::optional<std::set<RaySet>> subdivision_pieces(const ConeGeom& cone, const ZVec& v, int dim) {
    if (!cone.contains(v)) return std::nullopt;
    std::set<RaySet> pieces;
    for (const std::vector<int>& local : cone.facet_ray_sets()) {
        std::vector<ZVec> facet_rays;
        for (int li : local) facet_rays.push_back(cone.rays()[li]);
        ConeGeom facet(facet_rays, dim);
        if (facet.contains(v)) continue;
        RaySet piece(facet_rays.begin(), facet_rays.end());
        piece.insert(v);
        pieces.insert(std::move(piece));
    }
    return pieces;
}

// A group of star cones is coherent when the cone spanned by their rays
// (minus v) subdivides at v into exactly that group.
bool coherent_group(const std::vector<RaySet>& star, const std::vector<int>& group, const ZVec& v,
                    int dim, std::vector<ZVec>* merged_rays) {
    RaySet rays;
    std::set<RaySet> members;
    for (int gi : group) {
        members.insert(star[gi]);
        for (const ZVec& r : star[gi])
            if (r != v) rays.insert(r);
    }
    try {
        ConeGeom merged(std::vector<ZVec>(rays.begin(), rays.end()), dim);
        std::optional<std::set<RaySet>> pieces = subdivision_pieces(merged, v, dim);
        if (!pieces || *pieces != members) return false;
        if (merged_rays) merged_rays->assign(rays.begin(), rays.end());
        return true;
    } catch (const Error&) {
        return false;
    }
}

// Partition the star cones into coherent groups (unique when it exists:
// distinct coarse cones cannot overlap in full dimension).
bool partition_star(const std::vector<RaySet>& star, const ZVec& v, int dim,
                    std::vector<int>& assignment, std::vector<std::vector<int>>& groups,
                    std::vector<bool>& used) {
    int first = -1;
    for (size_t i = 0; i < star.size(); ++i)
        if (!used[i]) {
            first = (int)i;
            break;
        }
    if (first < 0) return true;
    std::vector<int> rest;
    for (size_t i = first + 1; i < star.size(); ++i)
        if (!used[i]) rest.push_back((int)i);
    const size_t m = rest.size();
    for (size_t mask = 0; mask < (size_t(1) << m); ++mask) {
        std::vector<int> group = {first};
        for (size_t b = 0; b < m; ++b)
            if (mask & (size_t(1) << b)) group.push_back(rest[b]);
        if (!coherent_group(star, group, v, dim, nullptr)) continue;
        for (int gi : group) used[gi] = true;
        groups.push_back(group);
        if (partition_star(star, v, dim, assignment, groups, used)) return true;
        groups.pop_back();
        for (int gi : group) used[gi] = false;
    }
    return false;
}

} // namespace

std::optional<Fan> remove_ray_blowdown(const Fan& fan, const ZVec& ray, std::string* reason) {
    auto bail = [&](const std::string& why) -> std::optional<Fan> {
        if (reason) *reason = why;
        return std::nullopt;
    };
    int ri = fan.ray_index(ray);
    if (ri < 0) return bail(zvec_to_string(ray) + " is not a ray of the fan");
    const ZVec v = fan.rays()[ri];

    std::vector<RaySet> star;
    std::vector<std::vector<ZVec>> keep;
    for (const std::vector<int>& c : fan.max_cones()) {
        std::vector<ZVec> rays;
        for (int i : c) rays.push_back(fan.rays()[i]);
        if (std::binary_search(c.begin(), c.end(), ri))
            star.push_back(RaySet(rays.begin(), rays.end()));
        else
            keep.push_back(std::move(rays));
    }
    if (star.empty()) return bail("ray belongs to no cone");

    std::vector<int> assignment;
    std::vector<std::vector<int>> groups;
    std::vector<bool> used(star.size(), false);
    if (!partition_star(star, v, fan.dim_ambient(), assignment, groups, used))
        return bail("the star of " + zvec_to_string(ray) +
                    " does not assemble into stellar-subdivided cones");

    std::vector<ZVec> rays;
    for (size_t i = 0; i < fan.rays().size(); ++i)
        if ((int)i != ri) rays.push_back(fan.rays()[i]);
    std::map<ZVec, int> index_of;
    for (size_t i = 0; i < rays.size(); ++i) index_of[rays[i]] = (int)i;

    std::vector<std::vector<int>> cones;
    for (const std::vector<ZVec>& c : keep) {
        std::vector<int> idx;
        for (const ZVec& r : c) idx.push_back(index_of.at(r));
        cones.push_back(std::move(idx));
    }
    for (const std::vector<int>& group : groups) {
        std::vector<ZVec> merged;
        coherent_group(star, group, v, fan.dim_ambient(), &merged);
        std::vector<int> idx;
        for (const ZVec& r : merged) idx.push_back(index_of.at(r));
        cones.push_back(std::move(idx));
    }

    try {
        Fan coarse(std::move(rays), std::move(cones), fan.dim_ambient());
        std::string why;
        std::optional<StarRecognition> rec = recognize_star_subdivision(fan, coarse, &why);
        if (!rec) return bail(why);
        return coarse;
    } catch (const Error& e) {
        return bail(std::string("merged star is not a fan: ") + e.what());
    }
}

} // namespace torifact
