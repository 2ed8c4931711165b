#include "torifact/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace torifact {

namespace {

// Exact angular order around the centroid (no floating point: half-plane
// split plus cross-product comparisons).
std::vector<QVec> cyclic_order(std::vector<QVec> pts) {
    if (pts.size() < 3) return pts;
    QVec c(2, Rat(0));
    for (const QVec& p : pts) {
        c[0] += p[0];
        c[1] += p[1];
    }
    c[0] /= Rat((int)pts.size());
    c[1] /= Rat((int)pts.size());
    auto half = [&](const QVec& p) {
        Rat dx = p[0] - c[0], dy = p[1] - c[1];
        return (dy < 0 || (dy == 0 && dx < 0)) ? 1 : 0;
    };
    std::sort(pts.begin(), pts.end(), [&](const QVec& a, const QVec& b) {
        int ha = half(a), hb = half(b);
        if (ha != hb) return ha < hb;
        Rat ax = a[0] - c[0], ay = a[1] - c[1];
        Rat bx = b[0] - c[0], by = b[1] - c[1];
        Rat cross = ax * by - ay * bx;
        if (cross != 0) return cross > 0;
        return a < b;
    });
    return pts;
}

std::string coord(const Rat& world, const Rat& lo, const Rat& scale, bool flip, const Rat& hi) {
    Rat v = flip ? (hi - world) * scale : (world - lo) * scale;
    return rat_to_decimal(v, 3);
}

std::string polygon_svg(const LatticePolytope& p, const std::string& title) {
    std::ostringstream os;
    if (p.is_empty() || p.dim_ambient() != 2) {
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"200\" height=\"60\">"
           << "<text x=\"10\" y=\"30\">" << title << ": empty</text></svg>\n";
        return os.str();
    }
    Rat xlo = p.vertices()[0][0], xhi = xlo, ylo = p.vertices()[0][1], yhi = ylo;
    for (const QVec& v : p.vertices()) {
        xlo = std::min(xlo, v[0]);
        xhi = std::max(xhi, v[0]);
        ylo = std::min(ylo, v[1]);
        yhi = std::max(yhi, v[1]);
    }
    xlo -= 1;
    ylo -= 1;
    xhi += 1;
    yhi += 1;
    const Rat scale(48);
    std::string width = rat_to_decimal((xhi - xlo) * scale, 3);
    std::string height = rat_to_decimal((yhi - ylo) * scale, 3);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "  <title>" << title << "</title>\n";

    std::vector<QVec> ring = cyclic_order(p.vertices());
    os << "  <polygon fill=\"#dbe9f6\" stroke=\"#1f4e79\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < ring.size(); ++i) {
        if (i) os << ' ';
        os << coord(ring[i][0], xlo, scale, false, xhi) << ','
           << coord(ring[i][1], ylo, scale, true, yhi);
    }
    os << "\"/>\n";
    for (const ZVec& z : lattice_points(p)) {
        os << "  <circle cx=\"" << coord(Rat(z[0]), xlo, scale, false, xhi) << "\" cy=\""
           << coord(Rat(z[1]), ylo, scale, true, yhi) << "\" r=\"3\" fill=\"#815510\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string rat_file_token(const Rat& r) {
    std::string s = rat_to_string(r);
    for (char& c : s)
        if (c == '/') c = '_';
    return s;
}

void write_file(const std::string& dir, const std::string& name, const std::string& bytes,
                std::vector<std::string>& written) {
    std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot write " + path);
    out << bytes;
    written.push_back(name);
}

} // namespace

std::vector<std::string> emit_svg(const FactorizationReport& rep, const std::string& out_dir) {
    std::vector<std::string> written;
    if (rep.input.lattice_rank != 2) return written;
    if (rep.stages.empty()) return written;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorKind::IoError, "cannot create " + out_dir);

    for (size_t si = 0; si < rep.stages.size(); ++si) {
        const StageReport& st = rep.stages[si];
        const std::string tag = "stage" + std::to_string(si + 1);
        for (size_t ci = 0; ci < st.chambers.chambers.size(); ++ci) {
            const ChamberScan& scan = st.chambers.chambers[ci];
            Rat mid = (scan.lo + scan.hi) / 2;
            LatticePolytope poly = st.master->slice_at(mid);
            write_file(out_dir, tag + "_chamber" + std::to_string(ci + 1) + ".svg",
                       polygon_svg(poly, tag + " chamber " + std::to_string(ci + 1)), written);
            for (const ChamberSample& cs : scan.samples) {
                LatticePolytope slice = st.master->slice_at(cs.s);
                write_file(out_dir, tag + "_slice_s_" + rat_file_token(cs.s) + ".svg",
                           polygon_svg(slice, tag + " slice at s = " + rat_to_string(cs.s)),
                           written);
            }
        }
        LatticePolytope wall_slice = st.master->slice_at(st.wall.s);
        write_file(out_dir, tag + "_wall_s_" + rat_file_token(st.wall.s) + ".svg",
                   polygon_svg(wall_slice, tag + " wall slice at s = " + rat_to_string(st.wall.s)),
                   written);
    }
    std::sort(written.begin(), written.end());
    return written;
}

} // namespace torifact
