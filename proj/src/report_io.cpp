#include "torifact/pipeline.hpp"

#include <algorithm>
#include <sstream>

namespace torifact {

namespace {

constexpr int kSchemaVersion = 1;

Json zvec_to_json(const ZVec& v) {
    Json out = Json::array();
    for (const Int& x : v) out.push_back(x.convert_to<long long>());
    return out;
}

ZVec zvec_from_json(const Json& j, const char* what) {
    if (!j.is_array()) fail(ErrorKind::ValidationError, std::string(what) + ": expected an array");
    ZVec out;
    for (const Json& x : j) {
        if (!x.is_number_integer())
            fail(ErrorKind::ValidationError, std::string(what) + ": expected integer entries");
        out.push_back(Int(x.get<long long>()));
    }
    return out;
}

Json rat_json(const Rat& r) { return rat_to_string(r); }

Rat rat_from_json(const Json& j, const char* what) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
    fail(ErrorKind::ValidationError, std::string(what) + ": expected \"p/q\" string or integer");
}

Json qvec_to_json(const QVec& v) {
    Json out = Json::array();
    for (const Rat& x : v) out.push_back(rat_json(x));
    return out;
}

QVec qvec_from_json(const Json& j, const char* what) {
    if (!j.is_array()) fail(ErrorKind::ValidationError, std::string(what) + ": expected an array");
    QVec out;
    for (const Json& x : j) out.push_back(rat_from_json(x, what));
    return out;
}

Json step_to_json(const FactorizationStep& st) {
    Json j;
    j["kind"] = st.kind == StepKind::WeightedBlowdown ? "weighted_blowdown" : "weighted_blowup";
    j["ray"] = zvec_to_json(st.ray);
    Json w = Json::array();
    for (const Int& x : st.weights) w.push_back(x.convert_to<long long>());
    j["weights"] = w;
    Json cr = Json::array();
    for (const ZVec& r : st.cone_rays) cr.push_back(zvec_to_json(r));
    j["cone_rays"] = cr;
    j["result_fan"] = fan_to_json(st.target_fan);
    j["result_smooth"] = st.target_smooth;
    j["result_max_cone_index"] = rat_to_string(Rat(st.target_max_cone_index));
    return j;
}

Json component_to_json(const FixedComponent& c) {
    Json j;
    Json fv = Json::array();
    for (const QVec& v : c.face_vertices) fv.push_back(qvec_to_json(v));
    j["face_vertices"] = fv;
    j["u_centroid"] = qvec_to_json(c.u_centroid);
    j["weight_value"] = rat_json(c.weight_value);
    Json dn = Json::array(), up = Json::array();
    for (const Int& w : c.down_weights) dn.push_back(w.convert_to<long long>());
    for (const Int& w : c.up_weights) up.push_back(w.convert_to<long long>());
    j["down_weights"] = dn;
    j["up_weights"] = up;
    Json tr = Json::array();
    for (const ZVec& r : c.tight_rays) tr.push_back(zvec_to_json(r));
    j["tight_rays"] = tr;
    j["vertex_cone_index"] = rat_to_string(Rat(c.vertex_cone_index));
    return j;
}

Json scan_to_json(const ChamberScan& s) {
    Json j;
    j["lo"] = rat_json(s.lo);
    j["hi"] = rat_json(s.hi);
    j["fan"] = fan_to_json(s.fan);
    Json smp = Json::array();
    for (const ChamberSample& cs : s.samples) smp.push_back(rat_json(cs.s));
    j["samples"] = smp;
    return j;
}

Json mult_to_json(const MultiplicationReport& r) {
    Json j;
    j["chamber"] = r.chamber == Chamber::AmpleSide ? 1 : 2;
    j["degree_budget"] = r.degree_budget;
    j["least_scaling_ok"] = r.least_scaling_ok;
    Json fails = Json::array();
    for (const MultiplicationFailure& f : r.failures) {
        Json e;
        e["v1"] = Json::array({f.a1, f.b1});
        e["v2"] = Json::array({f.a2, f.b2});
        e["missing_point"] = zvec_to_json(f.missing_point);
        fails.push_back(e);
    }
    j["failures_at_scaling_1"] = fails;
    return j;
}

Json twist_to_json(const TwistDescentReport& t) {
    Json j;
    j["n_found"] = t.n_found;
    Json rows = Json::array();
    for (const TwistDescentRow& r : t.rows) {
        Json e;
        e["n"] = r.n;
        e["twist_ample"] = r.twist_ample;
        e["points_equal"] = r.points_equal;
        e["fan_equal"] = r.fan_equal;
        rows.push_back(e);
    }
    j["rows"] = rows;
    return j;
}

Json stability_to_json(const StabilityCertificate& c) {
    Json j;
    j["parameter"] = rat_json(c.parameter);
    j["stable_equals_semistable"] = c.stable_equals_semistable;
    j["free_action"] = c.free_action;
    j["quotient_max_cone_index"] = rat_to_string(Rat(c.quotient_max_cone_index));
    Json w = Json::array();
    for (const VertexStability& vs : c.witnesses) {
        Json e;
        e["u"] = qvec_to_json(vs.u);
        e["gcd"] = rat_to_string(Rat(vs.gcd));
        w.push_back(e);
    }
    j["vertex_witnesses"] = w;
    return j;
}

} // namespace

Json fan_to_json(const Fan& f) {
    Json j;
    Json rays = Json::array();
    for (const ZVec& r : f.rays()) rays.push_back(zvec_to_json(r));
    j["rays"] = rays;
    Json cones = Json::array();
    for (const std::vector<int>& c : f.max_cones()) cones.push_back(c);
    j["max_cones"] = cones;
    return j;
}

Fan fan_from_json(const Json& j, int rank, const char* what) {
    if (!j.is_object() || !j.contains("rays") || !j.contains("max_cones"))
        fail(ErrorKind::ValidationError, std::string(what) + ": expected {rays, max_cones}");
    std::vector<ZVec> rays;
    for (const Json& r : j["rays"]) {
        ZVec v = zvec_from_json(r, what);
        if ((int)v.size() != rank)
            fail(ErrorKind::ValidationError, std::string(what) + ": ray dimension mismatch");
        rays.push_back(std::move(v));
    }
    std::vector<std::vector<int>> cones;
    for (const Json& c : j["max_cones"]) {
        if (!c.is_array()) fail(ErrorKind::ValidationError, std::string(what) + ": bad cone");
        std::vector<int> idx;
        for (const Json& i : c) idx.push_back(i.get<int>());
        cones.push_back(std::move(idx));
    }
    return Fan(std::move(rays), std::move(cones), rank);
}

ProblemInput input_from_json(const Json& j) {
    ProblemInput in;
    if (!j.is_object()) fail(ErrorKind::ValidationError, "input: expected a JSON object");
    if (!j.contains("lattice_rank") || !j.contains("fan_x") || !j.contains("fan_y") ||
        !j.contains("ample_on_y"))
        fail(ErrorKind::ValidationError,
             "input: lattice_rank, fan_x, fan_y and ample_on_y are required");
    in.lattice_rank = j["lattice_rank"].get<int>();
    in.fan_x = fan_from_json(j["fan_x"], in.lattice_rank, "fan_x");
    in.fan_y = fan_from_json(j["fan_y"], in.lattice_rank, "fan_y");

    // coefficients are given in the order of the rays as written in the file
    QVec given = qvec_from_json(j["ample_on_y"], "ample_on_y");
    std::vector<ZVec> file_rays;
    for (const Json& r : j["fan_y"]["rays"]) file_rays.push_back(zvec_from_json(r, "fan_y"));
    if (given.size() != file_rays.size())
        fail(ErrorKind::ValidationError, "ample_on_y needs one coefficient per fan_y ray");
    in.ample_on_y.assign(file_rays.size(), Rat(0));
    for (size_t i = 0; i < file_rays.size(); ++i) {
        int ci = in.fan_y.ray_index(file_rays[i]);
        if (ci < 0) fail(ErrorKind::Internal, "ray lost in canonicalization");
        in.ample_on_y[ci] = given[i];
    }

    if (j.contains("options")) {
        const Json& o = j["options"];
        if (o.contains("d_max")) in.options.d_max = o["d_max"].get<int>();
        if (o.contains("scaling_max")) in.options.scaling_max = o["scaling_max"].get<int>();
        if (o.contains("m_max")) in.options.m_max = o["m_max"].get<int>();
        if (o.contains("c_max")) in.options.c_max = o["c_max"].get<int>();
        if (o.contains("samples")) in.options.samples = o["samples"].get<int>();
        if (o.contains("tie_break")) in.options.tie_break = o["tie_break"].get<std::string>();
        if (o.contains("allow_trivial")) in.options.allow_trivial = o["allow_trivial"].get<bool>();
    }
    return in;
}

Json input_to_json(const ProblemInput& in) {
    Json j;
    j["lattice_rank"] = in.lattice_rank;
    j["fan_x"] = fan_to_json(in.fan_x);
    j["fan_y"] = fan_to_json(in.fan_y);
    j["ample_on_y"] = qvec_to_json(in.ample_on_y);
    Json o;
    o["d_max"] = in.options.d_max;
    o["scaling_max"] = in.options.scaling_max;
    o["m_max"] = in.options.m_max;
    o["c_max"] = in.options.c_max;
    o["samples"] = in.options.samples;
    o["tie_break"] = in.options.tie_break;
    o["allow_trivial"] = in.options.allow_trivial;
    j["options"] = o;
    return j;
}

Json report_to_json(const FactorizationReport& rep) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["input"] = input_to_json(rep.input);
    j["trivial"] = rep.trivial;

    Json stages = Json::array();
    for (const StageReport& st : rep.stages) {
        Json s;
        s["source_fan"] = fan_to_json(st.source->fan());
        s["split"] = Json{{"m", st.split.m},
                          {"a_coeffs", qvec_to_json(st.split.a.coeffs)},
                          {"e_coeffs", qvec_to_json(st.split.e.coeffs)},
                          {"a_ample", st.split.a_ample.ample},
                          {"e_effective", st.split.e_effective},
                          {"e_support_exact", st.split.e_support_exact},
                          {"neg_e_relatively_ample", st.split.neg_e_relatively_ample}};
        Json master;
        Json qv = Json::array();
        for (const QVec& v : st.master->q().vertices()) qv.push_back(qvec_to_json(v));
        master["vertices"] = qv;
        master["q_scale"] = rat_to_string(Rat(st.master->q_scale()));
        s["master_polytope"] = master;

        Json wall;
        wall["s_local"] = rat_json(st.wall.s);
        wall["s_global"] = rat_json(st.s_global);
        Json comps = Json::array();
        for (const FixedComponent& c : st.wall.components) comps.push_back(component_to_json(c));
        wall["fixed_components"] = comps;
        s["wall"] = wall;

        Json steps = Json::array();
        for (const FactorizationStep& fs : st.steps) steps.push_back(step_to_json(fs));
        s["steps"] = steps;
        s["residual"] = st.residual;

        Json chambers = Json::array();
        for (const ChamberScan& sc : st.chambers.chambers) chambers.push_back(scan_to_json(sc));
        s["chambers"] = chambers;

        Json stab = Json::array();
        for (const StabilityCertificate& c : st.stability) stab.push_back(stability_to_json(c));
        s["stability"] = stab;

        s["saturation"] = Json{{"chamber1", mult_to_json(st.saturation_chamber1)},
                           {"chamber2", mult_to_json(st.saturation_chamber2)}};
        s["twist_descent"] = twist_to_json(st.twist);
        if (st.generation) {
            s["generation_deviation"] = Json{{"degree", st.generation->degree},
                                             {"missing_point",
                                              zvec_to_json(st.generation->missing_point)}};
        } else {
            s["generation_deviation"] = nullptr;
        }
        Json warn = Json::array();
        for (const std::string& w : st.warnings) warn.push_back(w);
        s["warnings"] = warn;
        stages.push_back(s);
    }
    j["stages"] = stages;

    Json wg = Json::array();
    for (const Rat& w : rep.walls_global) wg.push_back(rat_json(w));
    j["walls_global"] = wg;
    Json cc = Json::array();
    for (const Fan& f : rep.composite_chambers) cc.push_back(fan_to_json(f));
    j["composite_chambers"] = cc;
    j["final_fan"] = fan_to_json(rep.final_fan);
    j["matches_target"] = rep.matches_target;
    Json warn = Json::array();
    for (const std::string& w : rep.warnings) warn.push_back(w);
    j["warnings"] = warn;
    return j;
}

std::string report_to_bytes(const FactorizationReport& rep) {
    return report_to_json(rep).dump(2) + "\n";
}

// --- independent re-validation ----------------------------------------

namespace {

[[noreturn]] void mismatch(const std::string& path, const std::string& what) {
    fail(ErrorKind::CertificateMismatch, path + ": " + what);
}

void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) mismatch(path, what);
}

std::vector<Int> weights_from_json(const Json& j) {
    std::vector<Int> out;
    for (const Json& x : j) out.push_back(Int(x.get<long long>()));
    return out;
}

} // namespace

void check_report(const Json& report) {
    if (!report.is_object() || !report.contains("schema_version"))
        fail(ErrorKind::CertificateMismatch, "report: missing schema_version");
    if (report["schema_version"].get<int>() != kSchemaVersion)
        fail(ErrorKind::CertificateMismatch, "report: unsupported schema_version");
    ProblemInput in = input_from_json(report.at("input"));

    auto y = std::make_shared<ToricVariety>(in.fan_y, in.lattice_rank);
    TorusDivisor d(y, in.ample_on_y);
    require(is_ample(d).ample, "input.ample_on_y", "divisor is not ample on fan_y");

    if (report.at("trivial").get<bool>()) {
        require(in.fan_x == in.fan_y, "trivial", "trivial report with distinct fans");
        return;
    }

    Fan current = in.fan_x;
    const Json& stages = report.at("stages");
    for (size_t si = 0; si < stages.size(); ++si) {
        const std::string base = "stages[" + std::to_string(si) + "]";
        const Json& s = stages[si];

        Fan claimed_source = fan_from_json(s.at("source_fan"), in.lattice_rank, "source_fan");
        require(claimed_source == current, base + ".source_fan",
                "stage does not start at the fan reached so far");

        auto xv = std::make_shared<ToricVariety>(current, in.lattice_rank);
        ToricMorphism f = check_refinement(xv, y);

        // split identity and certificates, from the claimed coefficients
        const Json& sp = s.at("split");
        int m = sp.at("m").get<int>();
        QVec a_coeffs = qvec_from_json(sp.at("a_coeffs"), "a_coeffs");
        QVec e_coeffs = qvec_from_json(sp.at("e_coeffs"), "e_coeffs");
        require(a_coeffs.size() == current.rays().size(), base + ".split.a_coeffs", "size");
        require(e_coeffs.size() == current.rays().size(), base + ".split.e_coeffs", "size");
        TorusDivisor fd = pullback(f, d);
        for (size_t i = 0; i < a_coeffs.size(); ++i)
            require(a_coeffs[i] + e_coeffs[i] == Rat(m) * fd.coeffs[i], base + ".split",
                    "m * f*D != A + E at ray " + zvec_to_string(current.rays()[i]));
        TorusDivisor a(xv, a_coeffs), e(xv, e_coeffs);
        require(is_ample(a).ample == sp.at("a_ample").get<bool>() && is_ample(a).ample,
                base + ".split.a_ample", "A is not ample");
        require(e.effective(), base + ".split.e_effective", "E is not effective");
        for (size_t i = 0; i < e_coeffs.size(); ++i) {
            bool exc = std::find(f.exceptional_rays.begin(), f.exceptional_rays.end(), (int)i) !=
                       f.exceptional_rays.end();
            require(exc == (e_coeffs[i] > 0), base + ".split.e_coeffs",
                    "support differs from the exceptional ray set");
        }
        require(check_neg_exceptional(f, e) == sp.at("neg_e_relatively_ample").get<bool>(),
                base + ".split.neg_e_relatively_ample", "relative antiampleness claim is wrong");

        // rebuild the master polytope and re-derive the wall data
        KodairaSplit split;
        split.f = f;
        split.d_on_target = d;
        split.m = m;
        split.a = a;
        split.e = e;
        split.a_ample = is_ample(a);
        split.e_effective = true;
        split.e_support_exact = true;
        split.neg_e_relatively_ample = check_neg_exceptional(f, e);
        MasterPolytope mp(split);
        std::vector<Wall> walls = compute_walls(mp);
        require(!walls.empty(), base + ".wall", "no wall exists for this stage");
        const Json& wj = s.at("wall");
        require(parse_rat(wj.at("s_local").get<std::string>()) == walls.front().s,
                base + ".wall.s_local", "wall parameter differs from the recomputed one");
        const Json& comps = wj.at("fixed_components");
        require(comps.size() == walls.front().components.size(), base + ".wall.fixed_components",
                "component count differs");
        for (size_t ci = 0; ci < comps.size(); ++ci) {
            const FixedComponent& rc = walls.front().components[ci];
            std::vector<Int> dn = weights_from_json(comps[ci].at("down_weights"));
            std::vector<Int> up = weights_from_json(comps[ci].at("up_weights"));
            require(dn == rc.down_weights && up == rc.up_weights,
                    base + ".wall.fixed_components[" + std::to_string(ci) + "]",
                    "edge weights differ from the recomputed ones");
        }

        // re-apply the steps as stellar moves
        const Json& steps = s.at("steps");
        for (size_t ti = 0; ti < steps.size(); ++ti) {
            const std::string sp_path = base + ".steps[" + std::to_string(ti) + "]";
            const Json& stj = steps[ti];
            ZVec ray = zvec_from_json(stj.at("ray"), "ray");
            std::vector<Int> w = weights_from_json(stj.at("weights"));
            std::string kind = stj.at("kind").get<std::string>();
            Fan next = current;
            StarRecognition rec;
            if (kind == "weighted_blowdown") {
                std::string why;
                std::optional<Fan> coarse = remove_ray_blowdown(current, ray, &why);
                if (!coarse) mismatch(sp_path, "blowdown is not a stellar inverse: " + why);
                std::optional<StarRecognition> r = recognize_star_subdivision(current, *coarse);
                if (!r) mismatch(sp_path, "stellar certificate cannot be rebuilt");
                rec = *r;
                next = *coarse;
            } else if (kind == "weighted_blowup") {
                Fan finer = star_subdivision(current, ray);
                std::string why;
                std::optional<StarRecognition> r =
                    recognize_star_subdivision(finer, current, &why);
                if (!r) mismatch(sp_path, "blowup is not a stellar move: " + why);
                rec = *r;
                next = finer;
            } else {
                mismatch(sp_path, "unknown step kind '" + kind + "'");
            }
            std::vector<Int> w_sorted = w, rw_sorted = rec.weights;
            std::sort(w_sorted.begin(), w_sorted.end());
            std::sort(rw_sorted.begin(), rw_sorted.end());
            require(w_sorted == rw_sorted, sp_path + ".weights",
                    "claimed weights differ from the stellar solution");
            QVec acc(ray.size(), Rat(0));
            const Json& crj = stj.at("cone_rays");
            require(crj.size() == w.size(), sp_path, "cone_rays/weights size mismatch");
            for (size_t i = 0; i < w.size(); ++i) {
                ZVec g = zvec_from_json(crj[i], "cone_rays");
                acc = add(acc, scale(to_qvec(g), Rat(w[i])));
            }
            require(acc == to_qvec(make_primitive(ray)) || acc == to_qvec(ray), sp_path,
                    "ray is not the weighted sum of the certificate cone rays");
            current = next;
        }

        // chamber fans and stability certificates
        std::vector<Rat> wall_params;
        for (const Wall& w : walls) wall_params.push_back(w.s);
        const Json& chambers = s.at("chambers");
        for (size_t ci = 0; ci < chambers.size(); ++ci) {
            Fan claimed = fan_from_json(chambers[ci].at("fan"), in.lattice_rank, "chamber fan");
            Rat lo = rat_from_json(chambers[ci].at("lo"), "lo");
            Rat hi = rat_from_json(chambers[ci].at("hi"), "hi");
            Fan recomputed = quotient_of_parameter(mp, (lo + hi) / 2);
            require(claimed == recomputed, base + ".chambers[" + std::to_string(ci) + "]",
                    "chamber quotient fan differs from the recomputed one");
        }
        const Json& stab = s.at("stability");
        for (size_t ci = 0; ci < stab.size(); ++ci) {
            Rat param = rat_from_json(stab[ci].at("parameter"), "parameter");
            StabilityCertificate cert = stability_certificate(mp, param, walls);
            require(cert.stable_equals_semistable ==
                            stab[ci].at("stable_equals_semistable").get<bool>() &&
                        cert.free_action == stab[ci].at("free_action").get<bool>(),
                    base + ".stability[" + std::to_string(ci) + "]",
                    "stability certificate differs from the recomputed one");
        }
    }

    Fan claimed_final = fan_from_json(report.at("final_fan"), in.lattice_rank, "final_fan");
    require(claimed_final == current, "final_fan", "steps do not compose to the claimed fan");
    require(current == in.fan_y, "final_fan", "composition does not reach fan_y");
    require(report.at("matches_target").get<bool>(), "matches_target", "claimed false");
}

} // namespace torifact
