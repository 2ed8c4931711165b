// Command-line driver: factorize / check / scan.
//
// Exit codes: 0 success, 2 validation failure, 3 search exhausted,
// 4 certificate mismatch.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "torifact/pipeline.hpp"

namespace {

using namespace torifact;

bool color_enabled() {
    return std::getenv("NO_COLOR") == nullptr;
}

void log_line(const std::string& msg, bool good) {
    if (color_enabled())
        std::cerr << (good ? "\x1b[32m" : "\x1b[31m") << msg << "\x1b[0m\n";
    else
        std::cerr << msg << "\n";
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorKind::ValidationError, "malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

int cmd_factorize(const std::string& in_path, const std::string& out_path,
                  const std::string& svg_dir, ProblemInput input) {
    FactorizationReport rep = run_factorize(input);
    std::string bytes = report_to_bytes(rep);
    if (out_path.empty()) {
        std::cout << bytes;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) fail(ErrorKind::IoError, "cannot write " + out_path);
        out << bytes;
    }
    if (!svg_dir.empty()) {
        std::vector<std::string> files = emit_svg(rep, svg_dir);
        if (input.lattice_rank != 2)
            log_line("svg: skipped (lattice rank " + std::to_string(input.lattice_rank) + ")",
                     true);
        else
            log_line("svg: wrote " + std::to_string(files.size()) + " files to " + svg_dir, true);
    }
    std::ostringstream os;
    os << "factorize: " << rep.stages.size() << " wall(s), ";
    size_t steps = 0;
    for (const StageReport& st : rep.stages) steps += st.steps.size();
    os << steps << " step(s), final fan matches target";
    log_line(os.str(), true);
    (void)in_path;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact factorization of projective toric refinements into weighted stellar moves"};
    app.require_subcommand(1);

    std::string in_path, out_path, svg_dir, report_path;
    int grid = 32;
    int dmax = -1, scaling_max = -1, m_max = -1, c_max = -1, samples = -1;
    std::string tie_break;
    bool allow_trivial = false;

    CLI::App* fact = app.add_subcommand("factorize", "factor an input morphism and emit a report");
    fact->add_option("input", in_path, "problem JSON file")->required();
    fact->add_option("--out", out_path, "write the report here instead of stdout");
    fact->add_option("--svg", svg_dir, "emit SVG renderings into this directory");
    fact->add_option("--dmax", dmax, "section table degree budget");
    fact->add_option("--scaling-max", scaling_max, "largest multiple tried in saturation searches");
    fact->add_option("--m-max", m_max, "largest pullback multiple tried in the split search");
    fact->add_option("--c-max", c_max, "largest exceptional coefficient tried in the split search");
    fact->add_option("--samples", samples, "samples per chamber");
    fact->add_option("--tie-break", tie_break, "component order rule (centroid-lex)");
    fact->add_flag("--allow-trivial", allow_trivial, "accept inputs with no exceptional ray");

    CLI::App* check = app.add_subcommand("check", "re-validate every certificate of a report");
    check->add_option("report", report_path, "report JSON file")->required();

    CLI::App* scan = app.add_subcommand("scan", "chamber scan only");
    scan->add_option("input", in_path, "problem JSON file")->required();
    scan->add_option("--grid", grid, "total number of scan samples");
    scan->add_flag("--allow-trivial", allow_trivial, "accept inputs with no exceptional ray");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fact->parsed() || scan->parsed()) {
            ProblemInput input = input_from_json(load_json(in_path));
            if (dmax > 0) input.options.d_max = dmax;
            if (scaling_max > 0) input.options.scaling_max = scaling_max;
            if (m_max > 0) input.options.m_max = m_max;
            if (c_max > 0) input.options.c_max = c_max;
            if (samples > 0) input.options.samples = samples;
            if (!tie_break.empty()) input.options.tie_break = tie_break;
            if (allow_trivial) input.options.allow_trivial = true;

            if (fact->parsed()) return cmd_factorize(in_path, out_path, svg_dir, input);

            // scan: spread the grid over the stages
            int per_chamber = std::max(2, grid / 2);
            input.options.samples = per_chamber;
            FactorizationReport rep = run_factorize(input);
            std::cout << "walls:";
            for (const Rat& w : rep.walls_global) std::cout << ' ' << rat_to_string(w);
            std::cout << "\nchambers:\n";
            for (size_t i = 0; i < rep.composite_chambers.size(); ++i)
                std::cout << "  [" << i << "] " << rep.composite_chambers[i].to_string() << "\n";
            return 0;
        }
        if (check->parsed()) {
            check_report(load_json(report_path));
            log_line("check: all certificates verified", true);
            return 0;
        }
    } catch (const torifact::Error& e) {
        log_line(std::string("error: ") + e.what(), false);
        return e.exit_code();
    } catch (const std::exception& e) {
        log_line(std::string("internal error: ") + e.what(), false);
        return 1;
    }
    return 0;
}
