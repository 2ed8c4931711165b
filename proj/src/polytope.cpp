#include "torifact/polytope.hpp"

#include <algorithm>
#include <set>

namespace torifact {

void HalfSpace::canonicalize() {
    Int g = gcd_of(normal);
    g = igcd(g, offset);
    if (g > 1) {
        for (Int& x : normal) x /= g;
        offset /= g;
    }
}

bool HalfSpace::operator<(const HalfSpace& o) const {
    if (normal != o.normal) return normal < o.normal;
    return offset < o.offset;
}

HalfSpace make_halfspace(const QVec& normal, const Rat& offset) {
    Int l = 1;
    for (const Rat& x : normal) l = ilcm(l, rat_den(x));
    l = ilcm(l, rat_den(offset));
    ZVec n(normal.size());
    for (size_t i = 0; i < normal.size(); ++i)
        n[i] = rat_num(normal[i]) * (l / rat_den(normal[i]));
    Int b = rat_num(offset) * (l / rat_den(offset));
    HalfSpace h(std::move(n), std::move(b));
    h.canonicalize();
    return h;
}

LatticePolytope LatticePolytope::empty(int dim_ambient) {
    LatticePolytope p;
    p.dim_ambient_ = dim_ambient;
    // keep a visibly infeasible hrep so membership tests stay correct
    p.hrep_ = {HalfSpace(ZVec(dim_ambient, Int(0)), Int(-1))};
    return p;
}

bool LatticePolytope::contains(const QVec& x) const {
    if (is_empty()) return false;
    for (const HalfSpace& h : hrep_)
        if (!h.satisfied_by(x)) return false;
    return true;
}

int LatticePolytope::affine_dim() const {
    if (vertices_.empty()) return -1;
    QMat diffs;
    for (size_t i = 1; i < vertices_.size(); ++i) diffs.push_back(sub(vertices_[i], vertices_[0]));
    return diffs.empty() ? 0 : rank(diffs);
}

LatticePolytope LatticePolytope::dilate(const Int& k) const {
    LatticePolytope out;
    out.dim_ambient_ = dim_ambient_;
    if (is_empty()) return empty(dim_ambient_);
    for (HalfSpace h : hrep_) {
        h.offset *= k;
        h.canonicalize();
        out.hrep_.push_back(std::move(h));
    }
    for (const QVec& v : vertices_) out.vertices_.push_back(scale(v, Rat(k)));
    std::sort(out.vertices_.begin(), out.vertices_.end());
    return out;
}

LatticePolytope LatticePolytope::translate(const ZVec& t) const {
    LatticePolytope out;
    out.dim_ambient_ = dim_ambient_;
    if (is_empty()) return empty(dim_ambient_);
    for (HalfSpace h : hrep_) {
        h.offset -= dot(h.normal, t);
        h.canonicalize();
        out.hrep_.push_back(std::move(h));
    }
    QVec tq = to_qvec(t);
    for (const QVec& v : vertices_) out.vertices_.push_back(add(v, tq));
    std::sort(out.vertices_.begin(), out.vertices_.end());
    return out;
}

namespace {

// Enumerate size-k index subsets of [0, m).
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

bool feasible(const std::vector<HalfSpace>& hs, const QVec& x) {
    for (const HalfSpace& h : hs)
        if (!h.satisfied_by(x)) return false;
    return true;
}

// Is there a nonzero direction d with <normal_i, d> >= 0 for all i?
// Enumerates extreme candidates from (dim-1)-subsets plus the lineality space.
bool has_recession_direction(const std::vector<HalfSpace>& hs, int dim) {
    QMat all;
    for (const HalfSpace& h : hs) all.push_back(to_qvec(h.normal));
    if (!nullspace(all, dim).empty()) return true;
    bool found = false;
    for_subsets((int)hs.size(), dim - 1, [&](const std::vector<int>& idx) {
        if (found) return;
        QMat sub;
        for (int i : idx) sub.push_back(to_qvec(hs[i].normal));
        std::vector<QVec> ns = nullspace(sub, dim);
        if (ns.size() != 1) return;
        ZVec d = primitive_direction(ns[0]);
        for (int sign = 0; sign < 2; ++sign) {
            bool ok = true;
            for (const HalfSpace& h : hs)
                if (dot(h.normal, d) < 0) {
                    ok = false;
                    break;
                }
            if (ok && !is_zero(d)) {
                found = true;
                return;
            }
            for (Int& x : d) x = -x;
        }
    });
    return found;
}

// Feasibility check that also works when the system has a lineality space:
// quotient out one lineality direction at a time by pinning a coordinate.
bool system_feasible(const std::vector<HalfSpace>& hs, int dim);

} // namespace

LatticePolytope vertex_enumeration(std::vector<HalfSpace> hrep, int dim) {
    // normalize constraints, drop trivial rows, detect constant contradictions
    std::set<HalfSpace> canon;
    for (HalfSpace& h : hrep) {
        if ((int)h.normal.size() != dim)
            fail(ErrorKind::ValidationError, "half-space dimension mismatch");
        if (is_zero(h.normal)) {
            if (h.offset < 0) return LatticePolytope::empty(dim);
            continue;
        }
        h.canonicalize();
        canon.insert(std::move(h));
    }
    std::vector<HalfSpace> hs(canon.begin(), canon.end());

    if (dim == 0) {
        // only constant constraints are possible; feasible set is the origin point
        LatticePolytope p;
        p.dim_ambient_ = 0;
        p.vertices_ = {QVec{}};
        return p;
    }

    const int m = (int)hs.size();
    std::set<QVec> verts;
    for_subsets(m, dim, [&](const std::vector<int>& idx) {
        QMat a;
        QVec b;
        for (int i : idx) {
            a.push_back(to_qvec(hs[i].normal));
            b.push_back(-Rat(hs[i].offset));
        }
        std::optional<QVec> x = solve_unique(std::move(a), std::move(b));
        if (x && feasible(hs, *x)) verts.insert(std::move(*x));
    });

    if (verts.empty()) {
        // a nonempty pointed polyhedron has a vertex, so either the system is
        // infeasible or it contains a line
        if (!system_feasible(hs, dim)) return LatticePolytope::empty(dim);
        fail(ErrorKind::Unbounded, "feasible system without vertices (contains a line)");
    }
    if (has_recession_direction(hs, dim))
        fail(ErrorKind::Unbounded, "nontrivial recession cone");

    LatticePolytope p;
    p.dim_ambient_ = dim;
    p.hrep_ = std::move(hs);
    p.vertices_.assign(verts.begin(), verts.end());
    return p;
}

namespace {

bool system_feasible(const std::vector<HalfSpace>& hs, int dim) {
    QMat all;
    for (const HalfSpace& h : hs) all.push_back(to_qvec(h.normal));
    std::vector<QVec> lin = all.empty() ? std::vector<QVec>{} : nullspace(all, dim);
    if (lin.empty()) {
        if (dim == 0) {
            for (const HalfSpace& h : hs)
                if (h.offset < 0) return false;
            return true;
        }
        // pointed: feasible iff some vertex exists
        bool found = false;
        for_subsets((int)hs.size(), dim, [&](const std::vector<int>& idx) {
            if (found) return;
            QMat a;
            QVec b;
            for (int i : idx) {
                a.push_back(to_qvec(hs[i].normal));
                b.push_back(-Rat(hs[i].offset));
            }
            std::optional<QVec> x = solve_unique(std::move(a), std::move(b));
            if (x && feasible(hs, *x)) found = true;
        });
        return found;
    }
    // translation along a lineality direction preserves the set; pin the
    // first coordinate where the direction is nonzero and recurse
    int j = 0;
    while (lin[0][j] == 0) ++j;
    std::vector<HalfSpace> restricted;
    for (const HalfSpace& h : hs) {
        ZVec n;
        for (int c = 0; c < dim; ++c)
            if (c != j) n.push_back(h.normal[c]);
        if (is_zero(n)) {
            if (h.offset < 0) return false;
            continue;
        }
        HalfSpace r(std::move(n), h.offset);
        r.canonicalize();
        restricted.push_back(std::move(r));
    }
    return system_feasible(restricted, dim - 1);
}

} // namespace

std::vector<ZVec> lattice_points(const LatticePolytope& p) {
    std::vector<ZVec> out;
    if (p.is_empty()) return out;
    const int n = p.dim_ambient();
    if (n == 0) return {ZVec{}};
    std::vector<Int> lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        Rat mn = p.vertices()[0][i], mx = mn;
        for (const QVec& v : p.vertices()) {
            mn = std::min(mn, v[i]);
            mx = std::max(mx, v[i]);
        }
        lo[i] = rat_ceil(mn);
        hi[i] = rat_floor(mx);
    }
    ZVec cur(n);
    QVec curq(n);
    auto scan = [&](auto&& self, int coord) -> void {
        if (coord == n) {
            if (p.contains(curq)) out.push_back(cur);
            return;
        }
        for (Int v = lo[coord]; v <= hi[coord]; ++v) {
            cur[coord] = v;
            curq[coord] = Rat(v);
            self(self, coord + 1);
        }
    };
    scan(scan, 0);
    std::sort(out.begin(), out.end());
    return out;
}

LatticePolytope slice(const LatticePolytope& p, const QVec& w, const Rat& t) {
    std::vector<HalfSpace> hs = p.hrep();
    hs.push_back(make_halfspace(w, -t));
    QVec negw(w.size());
    for (size_t i = 0; i < w.size(); ++i) negw[i] = -w[i];
    hs.push_back(make_halfspace(negw, t));
    return vertex_enumeration(std::move(hs), p.dim_ambient());
}

LatticePolytope substitute_last(const LatticePolytope& p, const Rat& t) {
    const int n = p.dim_ambient();
    std::vector<HalfSpace> hs;
    for (const HalfSpace& h : p.hrep()) {
        QVec reduced(n - 1);
        for (int i = 0; i < n - 1; ++i) reduced[i] = Rat(h.normal[i]);
        Rat off = Rat(h.offset) + Rat(h.normal[n - 1]) * t;
        if (is_zero(reduced)) {
            if (off < 0) return LatticePolytope::empty(n - 1);
            continue;
        }
        hs.push_back(make_halfspace(reduced, off));
    }
    return vertex_enumeration(std::move(hs), n - 1);
}

std::vector<ZVec> minkowski_points(const std::vector<ZVec>& s1, const std::vector<ZVec>& s2) {
    std::set<ZVec> sums;
    for (const ZVec& a : s1)
        for (const ZVec& b : s2) sums.insert(add(a, b));
    return {sums.begin(), sums.end()};
}

} // namespace torifact
