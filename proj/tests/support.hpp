#pragma once

#include <fraxdim/dimension.hpp>
#include <fraxdim/error.hpp>
#include <fraxdim/scene.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

namespace fraxdim::testing {

inline std::string scene_path(const std::string& name) { return std::string(FRAXDIM_SCENES) + "/" + name + ".json"; }

inline SceneConfig scene(const std::string& name) { return load_scene(scene_path(name)); }

inline Gifs scene_gifs(const std::string& name) {
    SceneConfig c = scene(name);
    return c.irs ? assemble_gifs(*c.irs) : *c.gifs;
}

inline std::string kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// 64-bit FNV-1a as 16 hex digits, for the frozen output hashes.
inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline Rational q(const char* s) { return parse_rational(s); }

inline Point pt(const PisotField& f, std::initializer_list<const char*> xs) {
    Point p;
    for (const char* x : xs) p.push_back(f.from_rational(parse_rational(x)));
    return p;
}

inline Box box(const PisotField& f, std::initializer_list<const char*> lo, std::initializer_list<const char*> hi) {
    return Box{pt(f, lo), pt(f, hi)};
}

// x -> beta^-k x + b on the line.
inline Similitude line_map(const PisotField& f, int k, const char* b) {
    return Similitude(f, k, SignedPerm::identity(1), pt(f, {b}));
}

// One vertex W = [0,1], one self-loop per translation, all with ratio 1/2.
inline Gifs interval_ifs(std::initializer_list<const char*> trans) {
    Gifs g;
    g.field = PisotField::two();
    g.dim = 1;
    g.periods = {std::nullopt};
    g.vertices.push_back({"I", {box(g.field, {"0"}, {"1"})}});
    int n = 0;
    for (const char* b : trans) g.edges.push_back({0, 0, line_map(g.field, 1, b), "f" + std::to_string(++n)});
    return g;
}

// The positive fixtures, all of which assemble or load a GIFS.
inline const std::vector<std::string>& positive_scenes() {
    static const std::vector<std::string> s{"moran",         "interval_overlap", "cylinder_sierpinski",
                                            "cylinder_sierpinski_r_quarter", "four_map_cylinder", "torus",
                                            "golden_triangle"};
    return s;
}

// Four-map cylinder: type-to-type counts, every entry at ratio exponent 1.
inline const std::vector<std::vector<int>>& cylinder_type_rows() {
    static const std::vector<std::vector<int>> rows{
        {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1}, {1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0},
        {1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0}, {1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0},
        {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1}, {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1},
        {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1}, {1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0},
        {1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0},
        {1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0},
        {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0}, {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1}};
    return rows;
}

inline RatioMatrix ratio_matrix(const std::vector<std::vector<int>>& rows, int exp = 1) {
    RatioMatrix m = RatioMatrix::zeros(PisotField::two(), static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            if (rows[i][j]) m.add(static_cast<int>(i), static_cast<int>(j), exp, rows[i][j]);
    return m;
}

}  // namespace fraxdim::testing
