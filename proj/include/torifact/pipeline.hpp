/// End-to-end driver: input parsing and validation, the staged factorization
/// loop, the self-contained report with its certificates, the independent
/// re-validation of a report, and SVG rendering for rank-2 inputs.

#ifndef TORIFACT_PIPELINE_HPP
#define TORIFACT_PIPELINE_HPP

#include <json.hpp>

#include "torifact/vgit.hpp"

namespace torifact {

using Json = nlohmann::json;

struct Options {
    int d_max = 6;
    int scaling_max = 8;
    int m_max = 12;
    int c_max = 6;
    int samples = 5;
    std::string tie_break = "centroid-lex";
    bool allow_trivial = false;
};

struct ProblemInput {
    int lattice_rank = 0;
    Fan fan_x;
    Fan fan_y;
    QVec ample_on_y; // canonical ray order of fan_y
    Options options;
};

/// One pass of the staged factorization: a fresh split and master polytope
/// for the current model, the wall that was crossed, and the stellar moves
/// taken (one per component side; leftovers continue in the next stage).
struct StageReport {
    VarietyPtr source;
    VarietyPtr target;
    KodairaSplit split;
    std::optional<MasterPolytope> master;
    Wall wall;
    Rat s_global;  // (stage_index + local wall) / stage_count
    std::vector<FactorizationStep> steps;
    bool residual = false;
    Fan result_fan;
    ChamberReport chambers;
    std::vector<StabilityCertificate> stability;
    MultiplicationReport saturation_chamber1;
    MultiplicationReport saturation_chamber2;
    TwistDescentReport twist;
    std::optional<GenerationDeviation> generation;
    std::vector<std::string> warnings;
};

struct FactorizationReport {
    ProblemInput input;
    bool trivial = false;
    std::vector<StageReport> stages;
    std::vector<Rat> walls_global;
    std::vector<Fan> composite_chambers; // fan(X), intermediates, fan(Y)
    Fan final_fan;
    bool matches_target = false;
    std::vector<std::string> warnings;
};

/// Runs the whole pipeline. Throws ValidationError / SearchExhausted /
/// internal consistency errors.
FactorizationReport run_factorize(const ProblemInput& input);

// --- file formats ------------------------------------------------------

Json fan_to_json(const Fan& f);
Fan fan_from_json(const Json& j, int rank, const char* what);

ProblemInput input_from_json(const Json& j);
Json input_to_json(const ProblemInput& in);

Json report_to_json(const FactorizationReport& rep);

/// Deterministic serialized bytes of a report.
std::string report_to_bytes(const FactorizationReport& rep);

/// Re-derives every certificate of a report from scratch: split identities,
/// ampleness, exceptional support, wall values and component weights from a
/// rebuilt master polytope, sequential stellar re-application of the steps
/// from fan(X), stability gcds, chamber fans, and the final fan equality.
/// Throws CertificateMismatch with the path of the first offending claim.
void check_report(const Json& report);

/// Writes one SVG per chamber quotient polytope and per master-polytope
/// slice at each sample parameter (rank 2 only; no-op otherwise).
/// Returns the file names written.
std::vector<std::string> emit_svg(const FactorizationReport& rep, const std::string& out_dir);

} // namespace torifact

#endif // TORIFACT_PIPELINE_HPP
