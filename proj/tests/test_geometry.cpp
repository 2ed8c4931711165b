#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"
#include "oracles.hpp"
#include "torifact/fan.hpp"

using namespace torifact;
using corpus::zv;

namespace {

HalfSpace hs(std::initializer_list<long long> normal, long long offset) {
    return HalfSpace(zv(normal), Int(offset));
}

std::vector<HalfSpace> unit_simplex_hrep() {
    return {hs({1, 0}, 0), hs({0, 1}, 0), hs({-1, -1}, 1)};
}

std::vector<HalfSpace> quadrilateral_hrep() {
    return {hs({1, 0}, 0), hs({0, 1}, 0), hs({-1, -1}, 2), hs({1, 1}, -1)};
}

QVec qv(std::initializer_list<long long> xs) {
    QVec v;
    for (long long x : xs) v.push_back(Rat(x));
    return v;
}

} // namespace

TEST_CASE("vertex enumeration: unit simplex") {
    LatticePolytope p = vertex_enumeration(unit_simplex_hrep(), 2);
    CHECK(p.vertices() == std::vector<QVec>{qv({0, 0}), qv({0, 1}), qv({1, 0})});
}

TEST_CASE("vertex enumeration: single point from opposing constraints") {
    LatticePolytope p = vertex_enumeration(
        {hs({1, 0}, 0), hs({-1, 0}, 0), hs({0, 1}, 0), hs({0, -1}, 0)}, 2);
    CHECK(p.is_point());
    CHECK(p.vertices() == std::vector<QVec>{qv({0, 0})});
}

TEST_CASE("vertex enumeration: quadrilateral agrees with the subset-solve oracle") {
    LatticePolytope p = vertex_enumeration(quadrilateral_hrep(), 2);
    std::vector<QVec> expect = oracles::vertex_oracle(quadrilateral_hrep(), 2);
    CHECK(p.vertices() == expect);
    CHECK(p.vertices() ==
          std::vector<QVec>{qv({0, 1}), qv({0, 2}), qv({1, 0}), qv({2, 0})});
}

TEST_CASE("vertex enumeration: unbounded systems are rejected") {
    CHECK_THROWS_WITH_AS(vertex_enumeration({hs({1, 0}, 0), hs({0, 1}, 0)}, 2),
                         doctest::Contains("recession"), Error);
    // a slab contains a line
    CHECK_THROWS_AS(vertex_enumeration({hs({0, 1}, 0), hs({0, -1}, 1)}, 2), Error);
}

TEST_CASE("vertex enumeration: empty is distinct from the origin point") {
    LatticePolytope e = vertex_enumeration({hs({1, 0}, -2), hs({-1, 0}, 1), hs({0, 1}, 0),
                                            hs({0, -1}, 0)}, 2);
    CHECK(e.is_empty());
    CHECK_FALSE(e.is_point());
    LatticePolytope z = vertex_enumeration(
        {hs({1, 0}, 0), hs({-1, 0}, 0), hs({0, 1}, 0), hs({0, -1}, 0)}, 2);
    CHECK_FALSE(z.is_empty());
    CHECK(z.is_point());
    CHECK_FALSE(e == z);
}

TEST_CASE("vertex enumeration: every vertex has enough independent tight constraints") {
    for (auto& hrep : {unit_simplex_hrep(), quadrilateral_hrep()}) {
        LatticePolytope p = vertex_enumeration(hrep, 2);
        for (const QVec& v : p.vertices()) {
            QMat tight;
            for (const HalfSpace& h : p.hrep()) {
                CHECK(h.satisfied_by(v));
                if (h.tight_at(v)) tight.push_back(to_qvec(h.normal));
            }
            CHECK(rank(tight) >= 2);
        }
    }
}

TEST_CASE("lattice points: simplices and the quadrilateral") {
    LatticePolytope s1 = vertex_enumeration(unit_simplex_hrep(), 2);
    CHECK(lattice_points(s1).size() == 3);
    LatticePolytope s2 = s1.dilate(Int(2));
    CHECK(lattice_points(s2).size() == 6);
    LatticePolytope q = vertex_enumeration(quadrilateral_hrep(), 2);
    std::vector<ZVec> pts = lattice_points(q);
    CHECK(pts.size() == 5);
    CHECK(pts == std::vector<ZVec>{zv({0, 1}), zv({0, 2}), zv({1, 0}), zv({1, 1}), zv({2, 0})});
    CHECK(oracles::lattice_count_oracle(q) == 5);
}

TEST_CASE("lattice points: agreement with the projection-based counter") {
    corpus::Lcg rng(20240811);
    auto bl = corpus::blowup_plane();
    auto w12 = corpus::weighted_blowup_plane();
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const VarietyPtr& v = (trial % 2 == 0) ? bl : w12;
        QVec c;
        for (size_t i = 0; i < v->fan().rays().size(); ++i)
            c.push_back(Rat(rng.range(-2, 5)));
        LatticePolytope p = divisor_polytope(TorusDivisor(v, c));
        if (p.is_empty()) continue;
        CHECK((long long)lattice_points(p).size() == oracles::lattice_count_oracle(p));
        ++checked;
    }
    CHECK(checked >= 15);
}

TEST_CASE("normal fan: unit square is the product of two lines") {
    LatticePolytope square = vertex_enumeration(
        {hs({1, 0}, 0), hs({0, 1}, 0), hs({-1, 0}, 1), hs({0, -1}, 1)}, 2);
    CHECK(normal_fan(square) == corpus::quadric_fan());
}

TEST_CASE("normal fan: standard triangle is the plane fan") {
    LatticePolytope t = vertex_enumeration(unit_simplex_hrep(), 2);
    CHECK(normal_fan(t) == corpus::plane_fan());
}

TEST_CASE("normal fan: quadrilateral is the blown-up plane fan") {
    LatticePolytope q = vertex_enumeration(quadrilateral_hrep(), 2);
    CHECK(normal_fan(q) == corpus::blowup_plane()->fan());
}

TEST_CASE("normal fan: degenerate polytopes are rejected") {
    LatticePolytope seg = vertex_enumeration(
        {hs({1, 1}, -1), hs({-1, -1}, 1), hs({1, 0}, 0), hs({0, 1}, 0)}, 2);
    CHECK(seg.affine_dim() == 1);
    CHECK_THROWS_AS(normal_fan(seg), Error);
}

TEST_CASE("round trip: support-function rebuild reproduces the normal fan") {
    for (auto hrep : {unit_simplex_hrep(), quadrilateral_hrep()}) {
        LatticePolytope p = vertex_enumeration(hrep, 2);
        Fan nf = normal_fan(p);
        std::vector<HalfSpace> rebuilt;
        for (const ZVec& ray : nf.rays()) {
            Rat val = dot(ray, p.vertices()[0]);
            for (const QVec& v : p.vertices()) val = std::min(val, dot(ray, v));
            rebuilt.push_back(make_halfspace(to_qvec(ray), -val));
        }
        LatticePolytope p2 = vertex_enumeration(rebuilt, 2);
        CHECK(p2 == p);
        CHECK(normal_fan(p2) == nf);
    }
}

TEST_CASE("slice: cube, simplex facet, pyramid") {
    std::vector<HalfSpace> cube = {hs({1, 0, 0}, 0),  hs({0, 1, 0}, 0),  hs({0, 0, 1}, 0),
                                   hs({-1, 0, 0}, 1), hs({0, -1, 0}, 1), hs({0, 0, -1}, 1)};
    LatticePolytope c = vertex_enumeration(cube, 3);
    QVec w = {Rat(0), Rat(0), Rat(1)};
    LatticePolytope sq = slice(c, w, Rat(1, 2));
    CHECK(sq.vertices().size() == 4);
    for (const QVec& v : sq.vertices()) CHECK(v[2] == Rat(1, 2));

    std::vector<HalfSpace> simplex3 = {hs({1, 0, 0}, 0), hs({0, 1, 0}, 0), hs({0, 0, 1}, 0),
                                       hs({-1, -1, -1}, 1)};
    LatticePolytope s3 = vertex_enumeration(simplex3, 3);
    QVec diag = {Rat(1), Rat(1), Rat(1)};
    LatticePolytope facet = slice(s3, diag, Rat(1));
    CHECK(facet.vertices().size() == 3);

    // pyramid over the quadrilateral with apex on the vertical axis
    std::vector<HalfSpace> pyr = {hs({1, 0, 0}, 0), hs({0, 1, 0}, 0), hs({-1, -1, -2}, 2),
                                  hs({1, 1, 1}, -1), hs({0, 0, 1}, 0)};
    LatticePolytope py = vertex_enumeration(pyr, 3);
    LatticePolytope half = slice(py, w, Rat(1, 2));
    CHECK_FALSE(half.is_empty());
    LatticePolytope proj = substitute_last(py, Rat(1, 2));
    CHECK(proj.dim_ambient() == 2);
    CHECK(proj.vertices().size() == half.vertices().size());
}

TEST_CASE("slice: empty result is allowed") {
    LatticePolytope t = vertex_enumeration(unit_simplex_hrep(), 2);
    QVec w = {Rat(1), Rat(0)};
    CHECK(slice(t, w, Rat(5)).is_empty());
}

TEST_CASE("minkowski point sums") {
    std::vector<ZVec> zero = {zv({0, 0})};
    LatticePolytope s = vertex_enumeration(unit_simplex_hrep(), 2);
    std::vector<ZVec> pts = lattice_points(s);
    CHECK(minkowski_points(zero, pts) == pts);
    std::vector<ZVec> doubled = minkowski_points(pts, pts);
    CHECK(doubled == lattice_points(s.dilate(Int(2))));
    CHECK(doubled.size() == 6);
}

TEST_CASE("cone index: smooth, weighted, not simplicial") {
    CHECK(cone_index({zv({1, 0}), zv({0, 1})}, 2) == 1);
    CHECK(cone_index({zv({1, 0}), zv({1, 2})}, 2) == 2);
    CHECK_THROWS_AS(cone_index({zv({1, 0}), zv({0, 1}), zv({1, 1})}, 2), Error);
    // lower-dimensional cone in a bigger lattice
    CHECK(cone_index({zv({2, 0, 2}), zv({0, 1, 0})}, 3) == 2);
}

TEST_CASE("homogeneity: dilation of the divisor polytope is exact") {
    corpus::Lcg rng(7);
    auto bl = corpus::blowup_plane();
    for (int trial = 0; trial < 25; ++trial) {
        QVec c;
        for (size_t i = 0; i < bl->fan().rays().size(); ++i) c.push_back(Rat(rng.range(-3, 6)));
        TorusDivisor d(bl, c);
        LatticePolytope p = divisor_polytope(d);
        for (long long k : {2, 3, 5}) {
            LatticePolytope pk = divisor_polytope(d.scaled(Rat(k)));
            CHECK(pk == p.dilate(Int(k)));
        }
    }
}

TEST_CASE("fan canonicalization: ray order and cone encoding are normalized") {
    Fan a({zv({1, 0}), zv({0, 1}), zv({-1, -1})}, {{0, 1}, {1, 2}, {2, 0}}, 2);
    Fan b({zv({-1, -1}), zv({1, 0}), zv({0, 1})}, {{2, 1}, {0, 2}, {1, 0}}, 2);
    CHECK(a == b);
    CHECK(a.to_string() == b.to_string());
}

TEST_CASE("fan validation: overlapping cones are rejected") {
    // two maximal cones overlapping in a full-dimensional region
    CHECK_THROWS_AS(Fan({zv({1, 0}), zv({0, 1}), zv({1, 2})}, {{0, 1}, {0, 2}}, 2), Error);
    // a listed ray inside a foreign cone
    CHECK_THROWS_AS(Fan({zv({1, 0}), zv({0, 1}), zv({1, 1}), zv({-1, -1})},
                        {{0, 1}, {1, 3}, {3, 0}, {2}}, 2),
                    Error);
}

TEST_CASE("fan flags: completeness, simpliciality, smoothness") {
    Fan p2 = corpus::plane_fan();
    CHECK(p2.complete());
    CHECK(p2.simplicial());
    CHECK(p2.smooth());
    Fan w = corpus::weighted_blowup_plane()->fan();
    CHECK(w.complete());
    CHECK(w.simplicial());
    CHECK_FALSE(w.smooth());
    CHECK(w.max_cone_lattice_index() == 2);
    Fan open_fan({zv({1, 0}), zv({0, 1})}, {{0, 1}}, 2);
    CHECK_FALSE(open_fan.complete());
}

TEST_CASE("stellar subdivision and recognition round trip") {
    Fan p2 = corpus::plane_fan();
    Fan bl = star_subdivision(p2, zv({1, 1}));
    CHECK(bl == corpus::blowup_plane()->fan());

    std::optional<StarRecognition> rec = recognize_star_subdivision(bl, p2);
    REQUIRE(rec.has_value());
    CHECK(rec->ray == zv({1, 1}));
    CHECK(rec->weights == std::vector<Int>{Int(1), Int(1)});

    Fan w12 = star_subdivision(p2, zv({1, 2}));
    rec = recognize_star_subdivision(w12, p2);
    REQUIRE(rec.has_value());
    CHECK(rec->ray == zv({1, 2}));
    std::vector<Int> sorted = rec->weights;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<Int>{Int(1), Int(2)});
}

TEST_CASE("stellar recognition: failure modes") {
    Fan p2 = corpus::plane_fan();
    Fan two = corpus::two_point_blowup_plane()->fan();
    std::string why;
    CHECK_FALSE(recognize_star_subdivision(two, p2, &why).has_value());
    CHECK(why.find("exactly one extra ray") != std::string::npos);

    // the fractional case: removing the middle ray of the chain first
    Fan chain = corpus::chain_blowup_plane()->fan();
    CHECK_FALSE(remove_ray_blowdown(chain, zv({1, 1}), &why).has_value());
    CHECK(remove_ray_blowdown(chain, zv({1, 2}), &why).has_value());
}

TEST_CASE("3-space stellar moves work in rank 3") {
    Fan p3 = corpus::space_fan();
    CHECK(p3.complete());
    Fan bl = star_subdivision(p3, zv({1, 1, 1}));
    CHECK(bl.complete());
    CHECK(bl.smooth());
    std::optional<StarRecognition> rec = recognize_star_subdivision(bl, p3);
    REQUIRE(rec.has_value());
    CHECK(rec->weights == std::vector<Int>{Int(1), Int(1), Int(1)});
}

TEST_CASE("stellar subdivision at a shared wall splits every adjacent cone") {
    // (1,1,0) sits in the relative interior of the 2-face shared by two
    // maximal cones of the 3-space fan; both must subdivide consistently
    Fan p3 = corpus::space_fan();
    Fan sub = star_subdivision(p3, zv({1, 1, 0}));
    CHECK(sub.complete());
    CHECK(sub.simplicial());
    CHECK(sub.max_cones().size() == 6);
    std::optional<StarRecognition> rec = recognize_star_subdivision(sub, p3);
    REQUIRE(rec.has_value());
    CHECK(rec->ray == zv({1, 1, 0}));
    CHECK(rec->cone_rays == std::vector<ZVec>{zv({0, 1, 0}), zv({1, 0, 0})});
    CHECK(rec->weights == std::vector<Int>{Int(1), Int(1)});
    std::optional<Fan> down = remove_ray_blowdown(sub, zv({1, 1, 0}));
    REQUIRE(down.has_value());
    CHECK(*down == p3);
}
