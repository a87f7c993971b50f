#include <fraxdim/render.hpp>
#include <fraxdim/scene.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

using namespace fraxdim;

namespace {

int report_error(const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    static const std::set<std::string> solver{"NoConvergence", "DegenerateSystem"};
    if (solver.count(e.kind())) return 4;
    if (e.kind() == "LevelCapExceeded") return 3;
    return 2;
}

void print_violations(const std::string& stage, const ValidationReport& r) {
    for (const auto& v : r.violations) {
        std::cout << "violation: " << v.kind << " at " << v.where;
        if (!v.detail.empty()) std::cout << " (" << v.detail << ")";
        std::cout << " [" << stage << "]\n";
    }
}

int cmd_validate(const std::string& path) {
    SceneConfig cfg = load_scene(path);
    bool ok = true;
    if (cfg.irs) {
        auto d = validate_decomposition(*cfg.irs);
        print_violations("decomposition", d);
        ok = d.ok;
        if (ok) {
            auto c = validate_containments(*cfg.irs);
            print_violations("containments", c);
            ok = c.ok;
        }
    } else {
        cfg.gifs->validate();
        auto inv = check_invariant_family(*cfg.gifs);
        for (int e : inv.failing_edges) std::cout << "violation: image leaves its vertex set at e" << e + 1 << "\n";
        ok = inv.holds;
    }
    std::cout << (ok ? "valid" : "invalid") << "\n";
    return ok ? 0 : 2;
}

int cmd_dim(const std::string& path, double tol, bool tol_set, const std::string& report, const std::string& matrix_out,
            bool no_timing) {
    SceneConfig cfg = load_scene(path);
    if (tol_set) cfg.solver.tol = tol;
    PipelineReport rep = run_pipeline(cfg);
    auto js = report_json(cfg, rep, !no_timing);
    if (!report.empty()) {
        std::ofstream out(report);
        if (!out) throw Error("IoError", "cannot write " + report);
        out << js.dump(2) << "\n";
    }
    for (const auto& s : rep.stages) std::cout << s.name << ": " << s.status << "\n";
    if (rep.exit_code != 0) {
        std::cout << "failed: " << rep.failure << "\n";
        return rep.exit_code;
    }
    const auto& dr = *rep.dimension;
    std::printf("method: %s\nalpha: %.12f\nlambda at alpha: %.12f\nbracket: [%.12f, %.12f]\n", rep.method.c_str(),
                dr.alpha, dr.lambda_at_alpha, dr.lo, dr.hi);
    std::cout << "matrix at alpha:\n";
    for (const auto& row : rep.matrix->evaluate(dr.alpha)) {
        for (std::size_t j = 0; j < row.size(); ++j) std::printf("%s%.6f", j ? " " : "  ", row[j]);
        std::cout << "\n";
    }
    if (!matrix_out.empty()) {
        // [[{"exp": 1, "count": 3}, ...], ...]
        nlohmann::ordered_json cells = nlohmann::ordered_json::array();
        for (const auto& row : rep.matrix->cells) {
            auto r = nlohmann::ordered_json::array();
            for (const auto& cell : row) {
                auto c = nlohmann::ordered_json::array();
                for (const auto& [k, n] : cell) c.push_back({{"exp", k}, {"count", n}});
                r.push_back(c);
            }
            cells.push_back(r);
        }
        std::ofstream out(matrix_out);
        if (!out) throw Error("IoError", "cannot write " + matrix_out);
        out << cells.dump(2) << "\n";
    }
    return 0;
}

int cmd_ftc(const std::string& path, int max_levels) {
    SceneConfig cfg = load_scene(path);
    Gifs g = cfg.irs ? assemble_gifs(*cfg.irs) : *cfg.gifs;
    FtcOptions opt;
    opt.max_levels = max_levels;
    opt.vertex_cap = cfg.solver.vertex_cap;
    opt.require_pisot = cfg.solver.require_pisot;
    ReducedGraphReport r = detect_finite_type(g, opt);
    std::cout << "types: " << r.type_count() << "\nlevels explored: " << r.levels_explored
              << "\nstable after level: " << r.stable_after << "\nfinite: " << (r.finite ? "yes" : "not detected") << "\n";
    std::cout << "transitions:\n";
    for (int t = 0; t < r.type_count(); ++t) {
        std::cout << "  T" << t + 1 << " ->";
        for (const auto& x : r.transitions[t]) {
            std::cout << " T" << x.to << "(k=" << x.ratio_exp << ")";
            if (x.count > 1) std::cout << "x" << x.count;
        }
        std::cout << "\n";
    }
    std::cout << "removed edges (" << r.removed_total << " in total):\n";
    std::size_t shown = 0;
    for (const auto& e : r.removed_edges) {
        if (++shown > 40) break;
        std::cout << "  " << path_string(e.removed_path) << " (same map as " << path_string(e.kept_path) << ")\n";
    }
    std::cout << "pruned vertices (" << r.pruned_total << " in total):\n";
    shown = 0;
    for (const auto& p : r.pruned) {
        if (++shown > 40) break;
        std::cout << "  " << path_string(p.path);
        for (const auto& [lost, kept] : p.witnesses) std::cout << "  " << path_string(lost) << "=" << path_string(kept);
        std::cout << "\n";
    }
    for (const auto& n : r.notes) std::cout << "note: " << n << "\n";
    if (!r.finite) return 3;
    std::cout << "matrix:\n" << matrix_text(weighted_incidence(r));
    return 0;
}

int cmd_render(const std::string& path, int depth, const std::string& out, const std::string& size) {
    SceneConfig cfg = load_scene(path);
    int w = 0, h = -1;
    if (!size.empty()) {
        auto x = size.find('x');
        if (x == std::string::npos) throw Error("SemanticError", "size must be WxH");
        w = std::stoi(size.substr(0, x));
        h = std::stoi(size.substr(x + 1));
    }
    RasterImage img = render_attractor(cfg, depth, w, h);
    write_ppm(img, out);
    std::cout << img.width << "x" << img.height << ", " << img.count() << " pixels set\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hausdorff dimension of attractors of iterated relation systems"};
    app.require_subcommand(1);

    std::string scene, report, matrix_out, out, size;
    double tol = 1e-9;
    int max_levels = 8, depth = 6;
    bool no_timing = false;

    auto* v = app.add_subcommand("validate", "check the decomposition and containment conditions");
    v->add_option("scene", scene, "scene file")->required();

    auto* d = app.add_subcommand("dim", "run the whole pipeline and print the dimension");
    d->add_option("scene", scene, "scene file")->required();
    auto* tol_opt = d->add_option("--tol", tol, "bisection tolerance on alpha");
    d->add_option("--report", report, "write the JSON report here");
    d->add_option("--matrix-out", matrix_out, "write the symbolic matrix as JSON");
    d->add_flag("--no-timing", no_timing, "leave stage timings out of the report");

    auto* f = app.add_subcommand("ftc", "run the finite type detection on the GIFS");
    f->add_option("scene", scene, "scene file")->required();
    f->add_option("--max-levels", max_levels, "levels to explore")->check(CLI::Range(2, 64));

    auto* r = app.add_subcommand("render", "rasterize the attractor to a PPM file");
    r->add_option("scene", scene, "scene file")->required();
    r->add_option("--depth", depth, "iterations of E0")->required()->check(CLI::NonNegativeNumber);
    r->add_option("--out", out, "output .ppm")->required();
    r->add_option("--size", size, "WxH");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*v) return cmd_validate(scene);
        if (*d) return cmd_dim(scene, tol, tol_opt->count() > 0, report, matrix_out, no_timing);
        if (*f) return cmd_ftc(scene, max_levels);
        if (*r) return cmd_render(scene, depth, out, size);
    } catch (const Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
