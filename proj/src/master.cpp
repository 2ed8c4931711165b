#include "torifact/master.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace torifact {

bool in_chamber(Chamber c, int a, int b) {
    if (a < 0 || b < 0) return false;
    return c == Chamber::AmpleSide ? a >= b : b >= a;
}

SectionTable::SectionTable(const KodairaSplit& split, int d_max) : split_(split), d_max_(d_max) {
    if (d_max < 2) fail(ErrorKind::ValidationError, "section table needs d_max >= 2");
    for (int d = 0; d <= d_max; ++d)
        for (int a = 0; a <= d; ++a) fetch(a, d - a);
}

SectionEntry SectionTable::compute(int a, int b) const {
    SectionEntry e;
    e.a = a;
    e.b = b;
    TorusDivisor d = split_.a.scaled(Rat(a)).plus(split_.e.scaled(Rat(b)));
    e.polytope = divisor_polytope(d);
    e.points = lattice_points(e.polytope);
    e.h0 = e.points.size();
    return e;
}

const SectionEntry& SectionTable::at(int a, int b) const {
    auto it = entries_.find({a, b});
    if (it == entries_.end()) fail(ErrorKind::Internal, "section table miss");
    return it->second;
}

const SectionEntry& SectionTable::fetch(int a, int b) {
    auto it = entries_.find({a, b});
    if (it == entries_.end()) it = entries_.emplace(std::make_pair(a, b), compute(a, b)).first;
    return it->second;
}

namespace {

std::vector<std::pair<int, int>> chamber_degrees(Chamber c, int budget) {
    std::vector<std::pair<int, int>> out;
    for (int d = 1; d <= budget; ++d)
        for (int a = 0; a <= d; ++a)
            if (in_chamber(c, a, d - a)) out.push_back({a, d - a});
    return out;
}

bool pair_passes(SectionTable& table, int k, std::pair<int, int> v1, std::pair<int, int> v2,
                 MultiplicationFailure* fail_out) {
    const SectionEntry& e1 = table.fetch(k * v1.first, k * v1.second);
    const SectionEntry& e2 = table.fetch(k * v2.first, k * v2.second);
    const SectionEntry& es = table.fetch(k * (v1.first + v2.first), k * (v1.second + v2.second));
    std::vector<ZVec> sums = minkowski_points(e1.points, e2.points);
    if (sums == es.points) return true;
    if (fail_out) {
        fail_out->a1 = k * v1.first;
        fail_out->b1 = k * v1.second;
        fail_out->a2 = k * v2.first;
        fail_out->b2 = k * v2.second;
        std::set<ZVec> have(sums.begin(), sums.end());
        for (const ZVec& p : es.points)
            if (!have.count(p)) {
                fail_out->missing_point = p;
                break;
            }
    }
    return false;
}

} // namespace

MultiplicationReport check_multiplication_surjectivity(SectionTable& table, Chamber chamber,
                                                       int scaling, int degree_budget,
                                                       int scaling_max) {
    MultiplicationReport rep;
    rep.chamber = chamber;
    rep.scaling = scaling;
    rep.degree_budget = degree_budget;

    std::vector<std::pair<int, int>> degs = chamber_degrees(chamber, degree_budget - 1);
    auto all_pairs = [&](int k, std::vector<MultiplicationFailure>* fails) {
        bool ok = true;
        for (size_t i = 0; i < degs.size(); ++i) {
            for (size_t j = i; j < degs.size(); ++j) {
                int total = degs[i].first + degs[i].second + degs[j].first + degs[j].second;
                if (total > degree_budget) continue;
                MultiplicationFailure f;
                if (!pair_passes(table, k, degs[i], degs[j], fails ? &f : nullptr)) {
                    ok = false;
                    if (fails) fails->push_back(f);
                    else return false;
                }
            }
        }
        return ok;
    };

    all_pairs(scaling, &rep.failures);
    for (int k = 1; k <= scaling_max; ++k) {
        if (all_pairs(k, nullptr)) {
            rep.least_scaling_ok = k;
            break;
        }
    }
    return rep;
}

MasterPolytope::MasterPolytope(const KodairaSplit& split) : split_(split) {
    if (!split.a_ample.ample)
        fail(ErrorKind::ValidationError, "master polytope needs an ample A part");
    if (!split.e_effective || split.e.is_zero_divisor())
        fail(ErrorKind::ValidationError, "master polytope needs a nonzero effective E part");
    const Fan& fan = split.a.owner->fan();
    const int n = fan.dim_ambient();

    std::vector<HalfSpace> hs;
    for (size_t i = 0; i < fan.rays().size(); ++i) {
        QVec normal = to_qvec(fan.rays()[i]);
        normal.push_back(split.e.coeffs[i] - split.a.coeffs[i]);
        hs.push_back(make_halfspace(normal, split.a.coeffs[i]));
    }
    QVec sup(n + 1, Rat(0)), sdown(n + 1, Rat(0));
    sup[n] = 1;   // s >= 0
    sdown[n] = -1; // s <= 1
    hs.push_back(make_halfspace(sup, Rat(0)));
    hs.push_back(make_halfspace(sdown, Rat(1)));

    try {
        q_ = vertex_enumeration(std::move(hs), n + 1);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Unbounded)
            fail(ErrorKind::Internal, "master polytope unbounded; split certificates are wrong");
        throw;
    }
    if (q_.is_empty()) fail(ErrorKind::Internal, "master polytope empty");

    q_scale_ = 1;
    for (const QVec& v : q_.vertices())
        for (const Rat& c : v) q_scale_ = ilcm(q_scale_, rat_den(c));
}

TorusDivisor MasterPolytope::divisor_at(const Rat& s) const {
    return split_.a.scaled(Rat(1) - s).plus(split_.e.scaled(s));
}

LatticePolytope MasterPolytope::slice_at(const Rat& s) const { return substitute_last(q_, s); }

Fan quotient_of_parameter(const MasterPolytope& mp, const Rat& s) {
    if (s <= 0 || s >= 1)
        fail(ErrorKind::WallParameter, "quotient parameter must lie strictly between 0 and 1");
    LatticePolytope sl = mp.slice_at(s);
    if (sl.is_empty()) fail(ErrorKind::EmptySlice, "empty slice at s = " + rat_to_string(s));
    return normal_fan(sl);
}

ChamberScan scan_chamber(const MasterPolytope& mp, const Rat& lo, const Rat& hi, int samples) {
    if (samples < 1) fail(ErrorKind::ValidationError, "need at least one sample per chamber");
    ChamberScan scan;
    scan.lo = lo;
    scan.hi = hi;
    Rat width = hi - lo;
    for (int i = 1; i <= samples; ++i) {
        Rat s = lo + width * Rat(i, samples + 1);
        scan.samples.push_back({s, quotient_of_parameter(mp, s)});
    }
    scan.fan = scan.samples.front().fan;
    scan.constant = true;
    for (const ChamberSample& cs : scan.samples) {
        if (cs.fan != scan.fan) {
            scan.constant = false;
            std::ostringstream os;
            os << "quotient changes inside a chamber between s = "
               << rat_to_string(scan.samples.front().s) << " and s = " << rat_to_string(cs.s);
            fail(ErrorKind::ChamberInconsistent, os.str());
        }
    }
    return scan;
}

ChamberReport chamber_scan(const MasterPolytope& mp, const std::vector<Rat>& walls, int samples) {
    if (samples < 2) fail(ErrorKind::ValidationError, "need at least two samples per chamber");
    ChamberReport rep;
    rep.walls = walls;
    std::sort(rep.walls.begin(), rep.walls.end());
    Rat lo = 0;
    for (const Rat& w : rep.walls) {
        rep.chambers.push_back(scan_chamber(mp, lo, w, samples));
        lo = w;
    }
    rep.chambers.push_back(scan_chamber(mp, lo, Rat(1), samples));

    const Fan& fx = mp.split().a.owner->fan();
    const Fan& fy = mp.split().f.target->fan();
    if (rep.chamber1().fan != fx)
        fail(ErrorKind::ChamberInconsistent, "chamber adjacent to s = 0 is not the source fan");
    if (rep.chamber2().fan != fy)
        fail(ErrorKind::ChamberInconsistent, "chamber adjacent to s = 1 is not the target fan");
    return rep;
}

std::optional<GenerationDeviation> check_degree_one_generation(const MasterPolytope& mp,
                                                               int d_check) {
    LatticePolytope qq = mp.q().dilate(mp.q_scale());
    std::vector<ZVec> base = lattice_points(qq);
    std::vector<ZVec> prev = base;
    LatticePolytope power = qq;
    for (int d = 2; d <= d_check; ++d) {
        power = qq.dilate(Int(d));
        std::vector<ZVec> expect = lattice_points(power);
        std::vector<ZVec> sums = minkowski_points(prev, base);
        if (sums != expect) {
            GenerationDeviation dev;
            dev.degree = d;
            std::set<ZVec> have(sums.begin(), sums.end());
            for (const ZVec& p : expect)
                if (!have.count(p)) {
                    dev.missing_point = p;
                    break;
                }
            return dev;
        }
        prev = std::move(expect);
    }
    return std::nullopt;
}

} // namespace torifact
