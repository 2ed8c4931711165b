#include "torifact/vgit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace torifact {

namespace {

// Tight constraint rows of Q at a point.
std::vector<int> tight_rows(const LatticePolytope& q, const QVec& x) {
    std::vector<int> out;
    for (size_t i = 0; i < q.hrep().size(); ++i)
        if (q.hrep()[i].tight_at(x)) out.push_back((int)i);
    return out;
}

// Vertex ids of the face cut out by requiring the given rows tight.
std::vector<int> face_members(const LatticePolytope& q, const std::vector<int>& rows) {
    std::vector<int> out;
    for (size_t vi = 0; vi < q.vertices().size(); ++vi) {
        bool all = true;
        for (int r : rows)
            if (!q.hrep()[r].tight_at(q.vertices()[vi])) {
                all = false;
                break;
            }
        if (all) out.push_back((int)vi);
    }
    return out;
}

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Edges of Q as vertex-id pairs: the minimal face containing the pair has
// exactly these two members.
std::vector<std::pair<int, int>> polytope_edges(const LatticePolytope& q,
                                                const std::vector<std::vector<int>>& vtight) {
    std::vector<std::pair<int, int>> out;
    const size_t nv = q.vertices().size();
    for (size_t a = 0; a < nv; ++a)
        for (size_t b = a + 1; b < nv; ++b) {
            std::vector<int> common = intersect_sorted(vtight[a], vtight[b]);
            std::vector<int> members = face_members(q, common);
            if (members.size() == 2) out.push_back({(int)a, (int)b});
        }
    return out;
}

std::vector<Rat> interior_vertex_heights(const MasterPolytope& mp) {
    std::set<Rat> hs;
    for (const QVec& v : mp.q().vertices()) {
        Rat w = v.back();
        if (w > 0 && w < 1) hs.insert(w);
    }
    return {hs.begin(), hs.end()};
}

} // namespace

std::vector<FixedComponent> fixed_components_at(const MasterPolytope& mp, const Rat& s) {
    const LatticePolytope& q = mp.q();
    std::vector<std::vector<int>> vtight;
    for (const QVec& v : q.vertices()) vtight.push_back(tight_rows(q, v));

    std::vector<int> level;
    for (size_t vi = 0; vi < q.vertices().size(); ++vi)
        if (q.vertices()[vi].back() == s) level.push_back((int)vi);

    // grow weight-constant faces: merge two groups when the minimal face
    // containing both stays at this height
    std::vector<std::vector<int>> groups;
    for (int vi : level) groups.push_back({vi});
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t a = 0; a < groups.size() && !changed; ++a) {
            for (size_t b = a + 1; b < groups.size() && !changed; ++b) {
                std::vector<int> rows = vtight[groups[a][0]];
                for (int vi : groups[a]) rows = intersect_sorted(rows, vtight[vi]);
                for (int vi : groups[b]) rows = intersect_sorted(rows, vtight[vi]);
                std::vector<int> members = face_members(q, rows);
                bool level_face = true;
                for (int vi : members)
                    if (q.vertices()[vi].back() != s) {
                        level_face = false;
                        break;
                    }
                if (!level_face) continue;
                std::set<int> merged(members.begin(), members.end());
                for (int vi : groups[a]) merged.insert(vi);
                for (int vi : groups[b]) merged.insert(vi);
                groups[a].assign(merged.begin(), merged.end());
                groups.erase(groups.begin() + (long)b);
                changed = true;
            }
        }
    }

    std::vector<std::pair<int, int>> edges = polytope_edges(q, vtight);
    const Fan& fan = mp.split().a.owner->fan();

    std::vector<FixedComponent> comps;
    for (const std::vector<int>& g : groups) {
        FixedComponent c;
        c.weight_value = s;
        std::set<int> inside(g.begin(), g.end());
        for (int vi : g) c.face_vertices.push_back(q.vertices()[vi]);

        const int urank = mp.u_rank();
        c.u_centroid.assign(urank, Rat(0));
        for (const QVec& v : c.face_vertices)
            for (int i = 0; i < urank; ++i) c.u_centroid[i] += v[i];
        for (int i = 0; i < urank; ++i) c.u_centroid[i] /= Rat((int)c.face_vertices.size());

        for (const auto& [a, b] : edges) {
            int from = -1, to = -1;
            if (inside.count(a) && !inside.count(b)) from = a, to = b;
            if (inside.count(b) && !inside.count(a)) from = b, to = a;
            if (from < 0) continue;
            ZVec dir = primitive_direction(sub(q.vertices()[to], q.vertices()[from]));
            Int w = dir.back();
            if (w == 0)
                fail(ErrorKind::Internal,
                     "weight-constant edge leaves a maximal weight-constant face");
            if (w < 0) c.down_weights.push_back(w);
            else c.up_weights.push_back(w);
        }
        std::sort(c.down_weights.begin(), c.down_weights.end());
        std::sort(c.up_weights.begin(), c.up_weights.end());

        // fan rays whose constraint is tight on every vertex of the face
        for (size_t ri = 0; ri < fan.rays().size(); ++ri) {
            bool tight = true;
            for (const QVec& v : c.face_vertices) {
                Rat sval = v.back();
                Rat rhs = -((Rat(1) - sval) * mp.split().a.coeffs[ri] +
                            sval * mp.split().e.coeffs[ri]);
                QVec u(v.begin(), v.end() - 1);
                if (dot(fan.rays()[ri], u) != rhs) {
                    tight = false;
                    break;
                }
            }
            if (tight) c.tight_rays.push_back(fan.rays()[ri]);
        }

        // vertex components: lattice index of the edge-direction cone of q*Q
        if (c.face_vertices.size() == 1) {
            std::vector<ZVec> dirs;
            for (const auto& [a, b] : edges) {
                int from = -1, to = -1;
                if (inside.count(a)) from = a, to = b;
                else if (inside.count(b)) from = b, to = a;
                if (from < 0) continue;
                dirs.push_back(primitive_direction(sub(q.vertices()[to], q.vertices()[from])));
            }
            try {
                c.vertex_cone_index = cone_index(dirs, q.dim_ambient());
            } catch (const Error&) {
                c.vertex_cone_index = 0; // non-simplicial vertex
            }
        }
        comps.push_back(std::move(c));
    }

    std::sort(comps.begin(), comps.end(),
              [](const FixedComponent& a, const FixedComponent& b) {
                  return a.u_centroid < b.u_centroid;
              });
    return comps;
}

std::vector<Wall> compute_walls(const MasterPolytope& mp) {
    std::vector<Rat> heights = interior_vertex_heights(mp);

    // interval midpoints around the candidate heights
    std::vector<Rat> bounds;
    bounds.push_back(Rat(0));
    for (const Rat& h : heights) bounds.push_back(h);
    bounds.push_back(Rat(1));
    std::vector<Rat> mids;
    std::vector<Fan> fans;
    for (size_t i = 0; i + 1 < bounds.size(); ++i) {
        Rat m = (bounds[i] + bounds[i + 1]) / 2;
        mids.push_back(m);
        fans.push_back(quotient_of_parameter(mp, m));
    }

    // method (i): candidate heights filtered by an actual fan change
    std::vector<Rat> walls_a;
    for (size_t i = 0; i < heights.size(); ++i)
        if (fans[i] != fans[i + 1]) walls_a.push_back(heights[i]);

    // method (ii): bisection localization of each change between midpoints
    std::vector<Rat> walls_b;
    for (size_t i = 0; i < heights.size(); ++i) {
        if (fans[i] == fans[i + 1]) continue;
        Rat lo = mids[i], hi = mids[i + 1];
        Fan flo = fans[i];
        for (int iter = 0; iter < 24; ++iter) {
            Rat mid = (lo + hi) / 2;
            if (mid == heights[i]) break; // landed exactly on the candidate
            Fan fm = quotient_of_parameter(mp, mid);
            if (fm == flo) lo = mid;
            else hi = mid;
        }
        if (lo >= heights[i] || hi <= heights[i])
            fail(ErrorKind::OracleMismatch,
                 "bisection localized a wall away from every vertex height");
        walls_b.push_back(heights[i]);
    }

    if (walls_a != walls_b)
        fail(ErrorKind::OracleMismatch, "wall detection methods disagree");

    std::vector<Wall> out;
    for (const Rat& s : walls_a) out.push_back({s, fixed_components_at(mp, s)});
    return out;
}

StabilityCertificate stability_certificate(const MasterPolytope& mp, const Rat& s,
                                           const std::vector<Wall>& walls) {
    for (const Wall& w : walls)
        if (w.s == s)
            fail(ErrorKind::WallParameter, "parameter s = " + rat_to_string(s) + " is a wall");

    StabilityCertificate cert;
    cert.parameter = s;
    cert.stable_equals_semistable = true;
    for (const QVec& v : mp.q().vertices())
        if (v.back() == s) cert.stable_equals_semistable = false;

    LatticePolytope sl = mp.slice_at(s);
    if (sl.is_empty()) fail(ErrorKind::EmptySlice, "empty slice at s = " + rat_to_string(s));
    cert.free_action = true;
    for (const QVec& u : sl.vertices()) {
        QVec x = u;
        x.push_back(s);
        std::vector<int> rows = tight_rows(mp.q(), x);
        ZMat normals;
        for (int r : rows) normals.push_back(mp.q().hrep()[r].normal);
        // direction lattice of the minimal face containing x
        std::vector<ZVec> dirbasis = integer_kernel(normals, mp.q().dim_ambient());
        VertexStability vs;
        vs.u = u;
        Int g = 0;
        for (const ZVec& d : dirbasis) g = igcd(g, d.back());
        vs.gcd = g;
        if (g != 1) cert.free_action = false;
        cert.witnesses.push_back(std::move(vs));
    }
    cert.quotient_max_cone_index = normal_fan(sl).max_cone_lattice_index();
    return cert;
}

bool FactorizationStep::verify() const {
    QVec acc(ray.size(), Rat(0));
    if (weights.size() != cone_rays.size()) return false;
    for (size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0) return false;
        acc = add(acc, scale(to_qvec(cone_rays[i]), Rat(weights[i])));
    }
    if (acc != to_qvec(ray)) return false;
    const Fan& fine = (kind == StepKind::WeightedBlowdown) ? source_fan : target_fan;
    const Fan& coarse = (kind == StepKind::WeightedBlowdown) ? target_fan : source_fan;
    std::optional<StarRecognition> rec = recognize_star_subdivision(fine, coarse);
    if (!rec) return false;
    if (rec->ray != ray) return false;
    // recognition returns cone rays in canonical order; compare as multisets
    std::vector<std::pair<ZVec, Int>> lhs, rhs;
    for (size_t i = 0; i < weights.size(); ++i) lhs.push_back({cone_rays[i], weights[i]});
    for (size_t i = 0; i < rec->weights.size(); ++i)
        rhs.push_back({rec->cone_rays[i], rec->weights[i]});
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    return lhs == rhs;
}

namespace {

FactorizationStep make_blowdown(const Fan& fine, const Fan& coarse, const StarRecognition& rec) {
    FactorizationStep st;
    st.kind = StepKind::WeightedBlowdown;
    st.ray = rec.ray;
    st.weights = rec.weights;
    st.cone_rays = rec.cone_rays;
    st.source_fan = fine;
    st.target_fan = coarse;
    st.target_simplicial = coarse.simplicial();
    st.target_smooth = coarse.smooth();
    st.target_max_cone_index = coarse.max_cone_lattice_index();
    return st;
}

FactorizationStep make_blowup(const Fan& coarse, const Fan& fine, const StarRecognition& rec) {
    FactorizationStep st;
    st.kind = StepKind::WeightedBlowup;
    st.ray = rec.ray;
    st.weights = rec.weights;
    st.cone_rays = rec.cone_rays;
    st.source_fan = coarse;
    st.target_fan = fine;
    st.target_simplicial = fine.simplicial();
    st.target_smooth = fine.smooth();
    st.target_max_cone_index = fine.max_cone_lattice_index();
    return st;
}

} // namespace

CrossingPlan plan_crossing(const MasterPolytope& mp, const Wall& wall, bool staged,
                           bool reverse_components) {
    CrossingPlan plan;
    plan.wall = wall.s;

    // rational offsets: midpoints toward the neighbouring vertex heights
    std::vector<Rat> heights = interior_vertex_heights(mp);
    Rat prev = 0, next = 1;
    for (const Rat& h : heights) {
        if (h < wall.s) prev = std::max(prev, h);
        if (h > wall.s) next = std::min(next, h);
    }
    plan.below = quotient_of_parameter(mp, (prev + wall.s) / 2);
    plan.above = quotient_of_parameter(mp, (wall.s + next) / 2);

    std::vector<FixedComponent> comps = wall.components;
    if (reverse_components) std::reverse(comps.begin(), comps.end());

    Fan working = plan.below;
    for (const FixedComponent& comp : comps) {
        ComponentCrossing cc;
        cc.component = comp;

        std::vector<ZVec> ups, downs;
        for (const ZVec& r : comp.tight_rays) {
            bool in_below = working.ray_index(r) >= 0 || plan.below.ray_index(r) >= 0;
            bool in_above = plan.above.ray_index(r) >= 0;
            if (in_below && !in_above) downs.push_back(r);
            else if (!in_below && in_above) ups.push_back(r);
        }

        // blowups first (flip-shaped crossings insert before they contract)
        std::sort(ups.begin(), ups.end());
        for (const ZVec& r : ups) {
            Fan finer = star_subdivision(working, r);
            std::string why;
            std::optional<StarRecognition> rec = recognize_star_subdivision(finer, working, &why);
            if (!rec)
                fail(ErrorKind::NotElementary,
                     "blowup at " + zvec_to_string(r) + " is not an integer stellar move: " + why);
            cc.steps.push_back(make_blowup(working, finer, *rec));
            working = finer;
            if (staged) break;
        }
        // blowdowns: remove whichever tight ray admits a legal stellar
        // inverse, deterministically (lex order among the legal ones)
        std::vector<ZVec> pending = downs;
        std::sort(pending.begin(), pending.end());
        int taken_down = 0;
        while (!pending.empty()) {
            if (staged && taken_down >= 1) {
                cc.residual_rays = pending;
                break;
            }
            bool progress = false;
            for (size_t i = 0; i < pending.size(); ++i) {
                std::string why;
                std::optional<Fan> coarse = remove_ray_blowdown(working, pending[i], &why);
                if (!coarse) continue;
                std::optional<StarRecognition> rec =
                    recognize_star_subdivision(working, *coarse, &why);
                if (!rec)
                    fail(ErrorKind::Internal, "blowdown lost its certificate: " + why);
                cc.steps.push_back(make_blowdown(working, *coarse, *rec));
                working = *coarse;
                pending.erase(pending.begin() + (long)i);
                ++taken_down;
                progress = true;
                break;
            }
            if (!progress) {
                std::ostringstream os;
                os << "component at " << qvec_to_string(comp.u_centroid)
                   << " cannot contract any of its rays by an integer stellar move";
                fail(ErrorKind::NotElementary, os.str());
            }
        }
        cc.elementary = (cc.steps.size() == 1 && cc.residual_rays.empty());
        plan.components.push_back(std::move(cc));
    }
    plan.result = working;
    plan.complete = (working == plan.above);
    return plan;
}

std::vector<FactorizationStep> factor_crossing(const MasterPolytope& mp, const Wall& wall) {
    CrossingPlan plan = plan_crossing(mp, wall);
    if (!plan.complete)
        fail(ErrorKind::NotElementary, "crossing steps do not reach the far chamber");
    std::vector<FactorizationStep> out;
    for (const ComponentCrossing& cc : plan.components)
        for (const FactorizationStep& st : cc.steps) out.push_back(st);
    return out;
}

} // namespace torifact
