#include "torifact/pipeline.hpp"

#include <algorithm>
#include <sstream>

namespace torifact {

namespace {

void validate_input(const ProblemInput& in) {
    if (in.lattice_rank < 1) fail(ErrorKind::ValidationError, "lattice_rank must be >= 1");
    if (in.options.d_max < 2) fail(ErrorKind::ValidationError, "d_max must be >= 2");
    if (in.options.samples < 2) fail(ErrorKind::ValidationError, "samples must be >= 2");
    if (in.options.tie_break != "centroid-lex")
        fail(ErrorKind::ValidationError, "unknown tie-break rule '" + in.options.tie_break + "'");
    if (!in.fan_x.valid() || !in.fan_y.valid())
        fail(ErrorKind::ValidationError, "input fans must be valid fans");
    if (!in.fan_x.complete() || !in.fan_y.complete())
        fail(ErrorKind::ValidationError, "input fans must be complete (projective inputs)");
    if (!in.fan_x.simplicial() || !in.fan_y.simplicial())
        fail(ErrorKind::ValidationError, "input fans must be simplicial");
}

StageReport run_stage(const VarietyPtr& current, const VarietyPtr& y, const TorusDivisor& d,
                      const Options& opt) {
    StageReport st;
    st.source = current;
    st.target = y;

    ToricMorphism f = check_refinement(current, y);
    st.split = kodaira_split(f, d, opt.m_max, opt.c_max);
    st.master.emplace(st.split);
    const MasterPolytope& mp = *st.master;

    std::vector<Wall> walls = compute_walls(mp);
    if (walls.empty())
        fail(ErrorKind::Internal, "no wall found although exceptional rays remain");
    st.wall = walls.front();
    if (walls.size() > 1)
        st.warnings.push_back("master polytope has " + std::to_string(walls.size()) +
                              " walls; crossing the lowest first");

    CrossingPlan plan = plan_crossing(mp, st.wall, /*staged=*/true);
    for (const ComponentCrossing& cc : plan.components) {
        for (const FactorizationStep& step : cc.steps) st.steps.push_back(step);
        if (!cc.residual_rays.empty()) st.residual = true;
        // star weights against the contracting-side edge weights; orbifold
        // fixed vertices can legitimately disagree, so record instead of
        // asserting when they do
        if (cc.elementary && cc.steps.size() == 1 &&
            cc.steps[0].kind == StepKind::WeightedBlowdown) {
            std::vector<Int> bb;
            for (const Int& w : cc.component.down_weights) bb.push_back(-w);
            std::sort(bb.begin(), bb.end());
            std::vector<Int> star = cc.steps[0].weights;
            std::sort(star.begin(), star.end());
            if (bb != star) {
                std::ostringstream os;
                os << "fixed component at " << qvec_to_string(cc.component.u_centroid)
                   << " (vertex cone index " << cc.component.vertex_cone_index
                   << ") has edge weights differing from the stellar weights of "
                   << zvec_to_string(cc.steps[0].ray);
                st.warnings.push_back(os.str());
            }
        }
    }
    if (st.steps.empty())
        fail(ErrorKind::NotElementary, "wall crossing produced no stellar move");
    st.result_fan = plan.result;
    if (!st.residual && plan.result != plan.above)
        fail(ErrorKind::Internal, "complete crossing did not reach the far chamber");

    // scans and certificates for this stage's one-parameter family
    std::vector<Rat> wall_params;
    for (const Wall& w : walls) wall_params.push_back(w.s);
    st.chambers = chamber_scan(mp, wall_params, opt.samples);
    for (const ChamberScan& scan : st.chambers.chambers)
        for (const ChamberSample& cs : scan.samples)
            st.stability.push_back(stability_certificate(mp, cs.s, walls));

    SectionTable table(st.split, opt.d_max);
    st.saturation_chamber1 = check_multiplication_surjectivity(table, Chamber::AmpleSide, 1,
                                                           opt.d_max, opt.scaling_max);
    st.saturation_chamber2 = check_multiplication_surjectivity(table, Chamber::ExceptionalSide, 1,
                                                           opt.d_max, opt.scaling_max);
    for (const MultiplicationFailure& mf : st.saturation_chamber1.failures) {
        std::ostringstream os;
        os << "multiplication (" << mf.a1 << "," << mf.b1 << ")+(" << mf.a2 << "," << mf.b2
           << ") misses " << zvec_to_string(mf.missing_point) << " at scaling 1";
        st.warnings.push_back(os.str());
    }
    for (const MultiplicationFailure& mf : st.saturation_chamber2.failures) {
        std::ostringstream os;
        os << "multiplication (" << mf.a1 << "," << mf.b1 << ")+(" << mf.a2 << "," << mf.b2
           << ") misses " << zvec_to_string(mf.missing_point) << " at scaling 1";
        st.warnings.push_back(os.str());
    }
    if (st.saturation_chamber1.least_scaling_ok < 0 || st.saturation_chamber2.least_scaling_ok < 0)
        st.warnings.push_back("no scaling <= " + std::to_string(opt.scaling_max) +
                              " makes all multiplication pairs surjective");

    st.twist = verify_twist_descent(f, d, st.split.e, opt.scaling_max);
    if (st.twist.n_found < 0)
        st.warnings.push_back("twist descent found no n <= " + std::to_string(opt.scaling_max));

    int gen_check = std::max(2, opt.scaling_max / 2);
    st.generation = check_degree_one_generation(mp, gen_check);
    if (st.generation) {
        std::ostringstream os;
        os << "section ring of the scaled master polytope is not generated in degree one: "
           << "degree " << st.generation->degree << " misses "
           << zvec_to_string(st.generation->missing_point);
        st.warnings.push_back(os.str());
    }

    for (const FactorizationStep& step : st.steps) {
        if (!step.verify()) fail(ErrorKind::Internal, "emitted step fails its own certificate");
        if (!step.target_fan.complete() || !step.target_fan.valid())
            fail(ErrorKind::Internal, "intermediate fan is not a complete fan");
        if (!step.target_simplicial)
            fail(ErrorKind::Internal, "intermediate fan is not simplicial");
        if (!step.target_smooth) {
            std::ostringstream os;
            os << "intermediate fan after the move at " << zvec_to_string(step.ray)
               << " has a cone of index " << step.target_max_cone_index;
            st.warnings.push_back(os.str());
        }
    }
    return st;
}

} // namespace

FactorizationReport run_factorize(const ProblemInput& input) {
    validate_input(input);
    FactorizationReport rep;
    rep.input = input;

    auto y = std::make_shared<ToricVariety>(input.fan_y, input.lattice_rank);
    auto x = std::make_shared<ToricVariety>(input.fan_x, input.lattice_rank);
    TorusDivisor d(y, input.ample_on_y);
    AmplenessWitness dw = is_ample(d);
    if (!dw.ample)
        fail(ErrorKind::ValidationError, "ample_on_y is not ample: " + dw.failure);

    ToricMorphism f = check_refinement(x, y); // validates the refinement
    if (f.is_isomorphism()) {
        if (!input.options.allow_trivial)
            fail(ErrorKind::ValidationError,
                 "morphism has no exceptional ray (pass --allow-trivial for an empty factorization)");
        rep.trivial = true;
        rep.composite_chambers = {input.fan_x, input.fan_y};
        rep.final_fan = input.fan_x;
        rep.matches_target = (input.fan_x == input.fan_y);
        return rep;
    }

    VarietyPtr current = x;
    const size_t max_stages = f.exceptional_rays.size();
    while (!(current->fan() == y->fan())) {
        if (rep.stages.size() >= max_stages)
            fail(ErrorKind::Internal, "staged factorization failed to terminate");
        StageReport st = run_stage(current, y, d, input.options);
        Fan result = st.result_fan;
        rep.stages.push_back(std::move(st));
        current = std::make_shared<ToricVariety>(result, input.lattice_rank);
    }

    const int k = (int)rep.stages.size();
    for (int i = 0; i < k; ++i) {
        rep.stages[i].s_global = (Rat(i) + rep.stages[i].wall.s) / k;
        rep.walls_global.push_back(rep.stages[i].s_global);
    }
    for (int i = 0; i < k; ++i) {
        rep.composite_chambers.push_back(rep.stages[i].chambers.chamber1().fan);
        if (i > 0 && rep.stages[i].chambers.chamber1().fan != rep.stages[i - 1].result_fan)
            fail(ErrorKind::Internal, "stage does not resume at the previous stage's result");
    }
    rep.composite_chambers.push_back(rep.stages.back().chambers.chamber2().fan);
    rep.final_fan = current->fan();
    rep.matches_target = (rep.final_fan == y->fan());
    if (!rep.matches_target)
        fail(ErrorKind::Internal, "composed factorization does not reach the target fan");
    for (const StageReport& st : rep.stages)
        for (const std::string& w : st.warnings) rep.warnings.push_back(w);
    return rep;
}

} // namespace torifact
