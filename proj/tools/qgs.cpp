// qgs: sectors of minimal growth for operators on metric graphs.
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qgs/problem_io.hpp"

using namespace qgs;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;

struct Common {
    std::string path;
    std::string out;
    double tol_det = -1.0;
    double tol_rank = -1.0;
    int samples = -1;

    Tolerances tolerances() const {
        Tolerances t;
        if (tol_det > 0.0) {
            t.eigen_det_rel = tol_det;
            t.smatrix_det_rel = tol_det;
        }
        if (tol_rank > 0.0) {
            t.rank_rel = tol_rank;
            t.equivalence = tol_rank;
        }
        if (samples > 0) t.samples_per_sector = samples;
        return t;
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("file", c.path, "problem description (JSON)")->required();
    cmd->add_option("--out", c.out, "write the report here instead of stdout");
    cmd->add_option("--tol-det", c.tol_det, "relative determinant threshold");
    cmd->add_option("--tol-rank", c.tol_rank, "relative singular-value threshold");
    cmd->add_option("--samples-per-sector", c.samples, "lambda samples per sector");
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + c.out);
    f << text;
}

Sector pick_sector(const Problem& p, std::optional<double> bisector, std::optional<double> half) {
    SectorSpec s;
    if (p.sector) s = *p.sector;
    else if (!bisector || !half) throw Error(ErrorCode::InvalidInput, "no sector in the file; pass --bisector and --half-angle");
    if (bisector) s.bisector_deg = *bisector;
    if (half) s.half_angle_deg = *half;
    return s.sector();
}

std::string fmt(cplx z) {
    // display only: drop rounding residue in either part
    const double eps = 1e-12 * std::abs(z);
    if (std::abs(z.real()) <= eps) z.real(0.0);
    if (std::abs(z.imag()) <= eps) z.imag(0.0);
    std::ostringstream os;
    os << std::setprecision(10) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

std::set<int> parse_sectors(const std::string& list, int n) {
    std::set<int> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int j = 0;
        try {
            j = std::stoi(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidTarget, "bad sector index '" + item + "'");
        }
        if (j < 1 || j > n) throw Error(ErrorCode::InvalidTarget, "sector index " + item + " out of range 1.." + std::to_string(n));
        out.insert(j - 1);
    }
    return out;
}

int run_analyze(const Common& c, std::optional<double> bis, std::optional<double> half) {
    const auto tol = c.tolerances();
    const auto p = load_problem(c.path);
    const auto report = analyze(p.graph, p.coupling, pick_sector(p, bis, half), tol);
    emit(c, report_json(report, tol).dump(2) + "\n");
    return report.certified ? 0 : 1;
}

int run_spectrum(const Common& c, std::optional<int> vertex) {
    const auto tol = c.tolerances();
    const auto p = load_problem(c.path);
    require_valid(p.graph, p.coupling, tol);
    json all = json::array();
    std::ostringstream table;
    for (const auto& vx : p.graph.vertices) {
        if (vertex && vx.id != *vertex) continue;
        const auto model = ModelVertexData::from_graph(p.graph, vx.id, tol);
        const auto cls = classify_vertex(model, p.coupling.at(vx.id), tol);
        table << "vertex " << vx.id << "\n";
        for (const auto& s : cls) {
            table << "  Lambda_" << s.index << "  (" << s.sector.angle_low * 180.0 / kPi << ", "
                  << s.sector.angle_high * 180.0 / kPi << ") deg  " << to_string(s.kind);
            for (cplx z : s.eigenvalues) table << "  " << fmt(z);
            table << "\n";
        }
        all.push_back(spectrum_json(vx.id, model, cls, tol));
    }
    if (vertex && all.empty()) throw Error(ErrorCode::InvalidInput, "no vertex " + std::to_string(*vertex));
    if (c.out.empty()) {
        std::cout << table.str();
    } else {
        emit(c, all.dump(2) + "\n");
    }
    return 0;
}

int run_design(const Common& c, int vertex, const std::string& sectors, const std::string& write) {
    const auto tol = c.tolerances();
    auto p = load_problem(c.path);
    require_valid(p.graph, p.coupling, tol);
    const auto model = ModelVertexData::from_graph(p.graph, vertex, tol);
    const auto target = parse_sectors(sectors, model.n());
    const auto design = design_coupling(model, target, tol);
    auto cond = design.condition;
    cond.vertex = vertex;

    json out{{"tool", "qgs"},
             {"version", std::string(kVersion)},
             {"vertex", vertex},
             {"target", json(std::vector<int>())},
             {"cprime", json::array()},
             {"coupling", to_json(cond)},
             {"C", to_json(cond.C)},
             {"Cprime", to_json(cond.Cprime)}};
    for (int t : target) out["target"].push_back(t + 1);
    for (cplx z : design.cprime) out["cprime"].push_back(to_json(z));
    emit(c, out.dump(2) + "\n");

    if (!write.empty()) {
        for (auto& cc : p.coupling.conditions)
            if (cc.vertex == vertex) cc = cond;
        std::ofstream f(write);
        if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + write);
        f << serialize_problem(p);
    }
    return 0;
}

int run_sweep(const Common& c, double theta_deg, double rmin, double rmax, int points, int n, const std::string& csv) {
    const auto tol = c.tolerances();
    const auto p = load_problem(c.path);
    if (!(rmin > 0.0) || !(rmax > rmin) || points < 2)
        throw Error(ErrorCode::InvalidInput, "need 0 < rmin < rmax and at least 2 points");
    const auto d = discretize(p.graph, p.coupling, n, tol);
    const auto r = log_spaced(rmin, rmax, points);
    const auto sr = sweep_ray(d, theta_deg * kPi / 180.0, r);

    std::ostringstream table;
    write_csv(table, sr);
    if (csv.empty()) {
        std::cout << table.str();
    } else {
        std::ofstream f(csv);
        if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + csv);
        f << table.str();
    }
    DecayVerdict dv;
    try {
        dv = decay_verdict(sr);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TooFewSamples) throw;
        std::cerr << "verdict: TooFewSamples (" << e.what() << ")\n";
        return 1;
    }
    std::cerr << "verdict: " << to_string(dv.verdict) << " slope=" << dv.slope << " ratio=" << dv.ratio << "\n";
    if (!c.out.empty()) emit(c, sweep_json(sr, dv, n).dump(2) + "\n");
    return dv.verdict == Decay::Decay ? 0 : 1;
}

int run_limit(const Common& c, int vertex, std::optional<double> bis, std::optional<double> half) {
    const auto tol = c.tolerances();
    const auto p = load_problem(c.path);
    require_valid(p.graph, p.coupling, tol);
    const auto sector = pick_sector(p, bis, half);
    const auto model = ModelVertexData::from_graph(p.graph, vertex, tol);
    const auto& cc = p.coupling.at(vertex);
    const auto verdict = vertex_minimal_growth(cc, model, sector, tol);
    emit(c, limit_json(cc, verdict, tol).dump(2) + "\n");
    return verdict.certified ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sectors of minimal growth for second-order operators on metric graphs"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Common common;
    std::optional<double> bisector;
    std::optional<double> half;
    std::optional<int> vertex_opt;
    int vertex = 0;
    std::string sectors;
    std::string write;
    double theta = 180.0;
    double rmin = 10.0;
    double rmax = 1e4;
    int points = 13;
    int n = 256;
    std::string csv;

    auto* analyze_cmd = app.add_subcommand("analyze", "certify the file's sector (exit 0 certified, 1 not)");
    add_common(analyze_cmd, common);
    analyze_cmd->add_option("--bisector", bisector, "override sector bisector (degrees)");
    analyze_cmd->add_option("--half-angle", half, "override sector half-angle (degrees)");

    auto* spectrum_cmd = app.add_subcommand("spectrum", "classify the model spectrum sector by sector");
    add_common(spectrum_cmd, common);
    spectrum_cmd->add_option("--vertex", vertex_opt, "only this vertex");

    auto* design_cmd = app.add_subcommand("design", "delta-type coupling with prescribed spectral sectors");
    add_common(design_cmd, common);
    design_cmd->add_option("--vertex", vertex, "vertex id")->required();
    design_cmd->add_option("--sectors", sectors, "1-based sector indices, comma separated");
    design_cmd->add_option("--write", write, "write the patched problem file here");

    auto* sweep_cmd = app.add_subcommand("sweep", "resolvent norm along a ray (exit 0 on Decay)");
    add_common(sweep_cmd, common);
    sweep_cmd->add_option("--theta", theta, "ray angle (degrees)");
    sweep_cmd->add_option("--rmin", rmin);
    sweep_cmd->add_option("--rmax", rmax);
    sweep_cmd->add_option("--points", points, "log-spaced radii");
    sweep_cmd->add_option("--n", n, "grid points per edge");
    sweep_cmd->add_option("--csv", csv, "CSV destination (default stdout)");

    auto* limit_cmd = app.add_subcommand("limit", "limiting domain and det S at one vertex");
    add_common(limit_cmd, common);
    limit_cmd->add_option("--vertex", vertex, "vertex id")->required();
    limit_cmd->add_option("--bisector", bisector, "override sector bisector (degrees)");
    limit_cmd->add_option("--half-angle", half, "override sector half-angle (degrees)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        if (*analyze_cmd) return run_analyze(common, bisector, half);
        if (*spectrum_cmd) return run_spectrum(common, vertex_opt);
        if (*design_cmd) return run_design(common, vertex, sectors, write);
        if (*sweep_cmd) return run_sweep(common, theta, rmin, rmax, points, n, csv);
        if (*limit_cmd) return run_limit(common, vertex, bisector, half);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::VerificationFailed ? 1 : kExitInput;
    }
    return kExitInput;
}
