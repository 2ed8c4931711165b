// Shared fixtures: the projective plane, its blowups, and the standard
// divisors used throughout the suites.

#ifndef TORIFACT_TESTS_CORPUS_HPP
#define TORIFACT_TESTS_CORPUS_HPP

#include "torifact/toric.hpp"

namespace torifact::corpus {

inline ZVec zv(std::initializer_list<long long> xs) {
    ZVec v;
    for (long long x : xs) v.push_back(Int(x));
    return v;
}

inline Fan plane_fan() {
    return Fan({zv({1, 0}), zv({0, 1}), zv({-1, -1})}, {{0, 1}, {1, 2}, {2, 0}}, 2);
}

inline Fan quadric_fan() { // product of two lines
    return Fan({zv({1, 0}), zv({0, 1}), zv({-1, 0}), zv({0, -1})},
               {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 2);
}

inline VarietyPtr plane() { return std::make_shared<ToricVariety>(plane_fan(), 2); }

inline VarietyPtr blowup_plane() {
    return std::make_shared<ToricVariety>(star_subdivision(plane_fan(), zv({1, 1})), 2);
}

inline VarietyPtr weighted_blowup_plane() {
    return std::make_shared<ToricVariety>(star_subdivision(plane_fan(), zv({1, 2})), 2);
}

inline VarietyPtr two_point_blowup_plane() {
    Fan f = star_subdivision(plane_fan(), zv({1, 1}));
    return std::make_shared<ToricVariety>(star_subdivision(f, zv({-1, 0})), 2);
}

inline VarietyPtr chain_blowup_plane() {
    Fan f = star_subdivision(plane_fan(), zv({1, 1}));
    return std::make_shared<ToricVariety>(star_subdivision(f, zv({1, 2})), 2);
}

inline Fan space_fan() { // projective 3-space
    return Fan({zv({1, 0, 0}), zv({0, 1, 0}), zv({0, 0, 1}), zv({-1, -1, -1})},
               {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}, 3);
}

inline VarietyPtr space() { return std::make_shared<ToricVariety>(space_fan(), 3); }

inline VarietyPtr blowup_space() {
    return std::make_shared<ToricVariety>(star_subdivision(space_fan(), zv({1, 1, 1})), 3);
}

/// The hyperplane class: coefficient 1 on the ray with all entries negative.
inline TorusDivisor hyperplane(const VarietyPtr& v) {
    QVec c(v->fan().rays().size(), Rat(0));
    ZVec neg(v->fan().dim_ambient(), Int(-1));
    int i = v->fan().ray_index(neg);
    if (i < 0) fail(ErrorKind::Internal, "fixture fan has no anticanonical-corner ray");
    c[i] = 1;
    return TorusDivisor(v, c);
}

inline TorusDivisor divisor(const VarietyPtr& v, std::initializer_list<long long> coeffs_by_ray,
                            std::initializer_list<std::initializer_list<long long>> rays) {
    QVec c(v->fan().rays().size(), Rat(0));
    auto ci = coeffs_by_ray.begin();
    for (auto r : rays) {
        int idx = v->fan().ray_index(zv(r));
        if (idx < 0) fail(ErrorKind::Internal, "fixture ray not in fan");
        c[idx] = Rat(Int(*ci));
        ++ci;
    }
    return TorusDivisor(v, c);
}

/// Tiny deterministic generator for property tests (64-bit LCG).
class Lcg {
  public:
    explicit Lcg(unsigned long long seed) : state_(seed) {}
    unsigned long long next() {
        state_ = state_ * 6364136223846793005ull + 1442695040888963407ull;
        return state_ >> 16;
    }
    long long range(long long lo, long long hi) { // inclusive
        return lo + (long long)(next() % (unsigned long long)(hi - lo + 1));
    }

  private:
    unsigned long long state_;
};

} // namespace torifact::corpus

#endif // TORIFACT_TESTS_CORPUS_HPP
