#include <fraxdim/scene.hpp>

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

namespace fraxdim {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
    throw Error("ParseError", "at " + where + ": " + what);
}
[[noreturn]] void semantic_fail(const std::string& where, const std::string& what) {
    throw Error("SemanticError", "at " + where + ": " + what);
}

const json& need(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object()) parse_fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) parse_fail(where, "missing field '" + key + "'");
    return *it;
}

std::string sub(const std::string& where, const std::string& key) { return where + "." + key; }
std::string sub(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

long long need_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) parse_fail(where, "expected an integer");
    return v.get<long long>();
}

Rational rational_of(const json& v, const std::string& where) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long>());
    } catch (const Error& e) {
        parse_fail(where, e.what());
    }
    parse_fail(where, "expected an exact number written as a string, e.g. \"3/8\"");
}

// "p/q" for a rational, or a coefficient list [c0, c1, ...] in the basis 1, beta, ...
AlgebraicNumber number_of(const json& v, const PisotField& f, const std::string& where) {
    if (v.is_array()) {
        if (static_cast<int>(v.size()) > f.degree())
            parse_fail(where, "more coefficients than the field degree " + std::to_string(f.degree()));
        std::vector<Rational> c;
        for (std::size_t i = 0; i < v.size(); ++i) c.push_back(rational_of(v[i], sub(where, i)));
        return f.from_coeffs(std::move(c));
    }
    return f.from_rational(rational_of(v, where));
}

PisotField field_of(const json& root) {
    auto it = root.find("field");
    if (it == root.end()) return PisotField::two();
    const json& f = *it;
    if (f.is_string()) {
        std::string n = f.get<std::string>();
        if (n == "two") return PisotField::two();
        if (n == "golden") return PisotField::golden();
        parse_fail("field", "unknown field preset '" + n + "'");
    }
    const json& mp = need(f, "minpoly", "field");
    // "interval" is accepted as an older spelling of "root_bracket".
    const char* key = f.contains("interval") && !f.contains("root_bracket") ? "interval" : "root_bracket";
    const json& iv = need(f, key, "field");
    const std::string iw = std::string("field.") + key;
    if (!mp.is_array() || mp.size() < 2) parse_fail("field.minpoly", "expected at least two integer coefficients");
    if (!iv.is_array() || iv.size() != 2) parse_fail(iw, "expected [lo, hi]");
    std::vector<long long> c;
    for (std::size_t i = 0; i < mp.size(); ++i) c.push_back(need_int(mp[i], sub("field.minpoly", i)));
    try {
        return PisotField::make(c, rational_of(iv[0], sub(iw, 0)), rational_of(iv[1], sub(iw, 1)));
    } catch (const Error& e) {
        if (e.kind() == "ParseError") throw;
        semantic_fail("field", e.what());
    }
}

Box box_of(const json& v, const PisotField& f, int dim, const std::string& where) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
        parse_fail(where, "expected " + std::to_string(dim) + " [lo, hi] pairs");
    Box b;
    for (int i = 0; i < dim; ++i) {
        const json& p = v[i];
        std::string w = sub(where, static_cast<std::size_t>(i));
        if (!p.is_array() || p.size() != 2) parse_fail(w, "expected [lo, hi]");
        b.lo.push_back(number_of(p[0], f, sub(w, 0)));
        b.hi.push_back(number_of(p[1], f, sub(w, 1)));
        if (b.hi.back() < b.lo.back()) semantic_fail(w, "hi < lo");
    }
    return b;
}

SignedPerm orth_of(const json& m, int dim, const std::string& where) {
    auto it = m.find("orth");
    if (it == m.end()) return SignedPerm::identity(dim);
    const json& perm = need(*it, "perm", sub(where, "orth"));
    const json& sign = need(*it, "sign", sub(where, "orth"));
    if (!perm.is_array() || !sign.is_array() || static_cast<int>(perm.size()) != dim ||
        static_cast<int>(sign.size()) != dim)
        parse_fail(sub(where, "orth"), "perm and sign must have one entry per axis");
    SignedPerm s;
    for (int i = 0; i < dim; ++i) {
        s.perm.push_back(static_cast<int>(need_int(perm[i], sub(sub(where, "orth.perm"), i))));
        s.sign.push_back(static_cast<int>(need_int(sign[i], sub(sub(where, "orth.sign"), i))));
    }
    return s;
}

Similitude map_of(const json& m, const PisotField& f, int dim, const std::string& where) {
    if (!m.is_object()) parse_fail(where, "expected a map object");
    if (m.contains("values"))
        parse_fail(where, "infinite value set: a branch given by a list of values is not a similitude and cannot be represented");
    int k = static_cast<int>(need_int(need(m, "ratio_exp", where), sub(where, "ratio_exp")));
    const json& t = need(m, "trans", where);
    if (!t.is_array() || static_cast<int>(t.size()) != dim) parse_fail(sub(where, "trans"), "expected one entry per axis");
    Point b;
    for (int i = 0; i < dim; ++i) b.push_back(number_of(t[i], f, sub(sub(where, "trans"), static_cast<std::size_t>(i))));
    try {
        return Similitude(f, k, orth_of(m, dim, where), std::move(b));
    } catch (const Error& e) {
        semantic_fail(where, e.what());
    }
}

// "(a,b]", "[a,a]" etc.; a plain [lo, hi] pair is half-open unless hi is a closed E0 face.
void axis_domain(const json& v, const ChartSpace& sp, const PisotField& f, int axis, PieceDomain& d,
                 const std::string& where) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.size() < 5 || (s.front() != '(' && s.front() != '[') || (s.back() != ')' && s.back() != ']'))
            parse_fail(where, "interval must look like \"(a,b]\" or \"[a,b]\"");
        auto comma = s.find(',');
        if (comma == std::string::npos) parse_fail(where, "interval needs a comma");
        try {
            d.box.lo.push_back(f.from_rational(parse_rational(s.substr(1, comma - 1))));
            d.box.hi.push_back(f.from_rational(parse_rational(s.substr(comma + 1, s.size() - comma - 2))));
        } catch (const Error& e) {
            parse_fail(where, e.what());
        }
        d.lo_closed.push_back(s.front() == '[');
        d.hi_closed.push_back(s.back() == ']');
    } else if (v.is_array() && v.size() == 2) {
        d.box.lo.push_back(number_of(v[0], f, sub(where, 0)));
        d.box.hi.push_back(number_of(v[1], f, sub(where, 1)));
        bool periodic = axis < static_cast<int>(sp.periods.size()) && sp.periods[axis];
        d.lo_closed.push_back(true);
        d.hi_closed.push_back(!periodic && d.box.hi.back() == sp.E0.hi[axis]);
    } else {
        parse_fail(where, "expected an interval string or a [lo, hi] pair");
    }
    if (d.box.hi.back() < d.box.lo.back()) semantic_fail(where, "hi < lo");
    if (d.box.hi.back() == d.box.lo.back() && !(d.lo_closed.back() && d.hi_closed.back()))
        semantic_fail(where, "empty interval");
    if (d.box.lo.back() < sp.E0.lo[axis] || d.box.hi.back() > sp.E0.hi[axis])
        semantic_fail(where, "piece domain leaves E0");
}

ChartSpace space_of(const json& root, const PisotField& f) {
    const json& s = need(root, "space", "<root>");
    ChartSpace sp;
    sp.dim = static_cast<int>(need_int(need(s, "dim", "space"), "space.dim"));
    if (sp.dim < 1 || sp.dim > 8) semantic_fail("space.dim", "dimension must be between 1 and 8");
    sp.E0 = box_of(need(s, "E0", "space"), f, sp.dim, "space.E0");
    sp.periods.assign(sp.dim, std::nullopt);
    sp.units.assign(sp.dim, "1");
    if (auto it = s.find("periods"); it != s.end()) {
        if (!it->is_array() || static_cast<int>(it->size()) != sp.dim) parse_fail("space.periods", "expected one entry per axis");
        for (int i = 0; i < sp.dim; ++i) {
            const json& p = (*it)[i];
            if (p.is_null()) continue;
            std::string w = sub("space.periods", static_cast<std::size_t>(i));
            sp.periods[i] = number_of(p, f, w);
            if (sp.periods[i]->sign() <= 0) semantic_fail(w, "period must be positive");
            if (sp.E0.hi[i] - sp.E0.lo[i] != *sp.periods[i]) semantic_fail(w, "E0 must span exactly one period");
        }
    }
    if (auto it = s.find("units"); it != s.end()) {
        if (!it->is_array() || static_cast<int>(it->size()) != sp.dim) parse_fail("space.units", "expected one entry per axis");
        for (int i = 0; i < sp.dim; ++i) {
            if (!(*it)[i].is_string()) parse_fail(sub("space.units", static_cast<std::size_t>(i)), "expected a string");
            sp.units[i] = (*it)[i].get<std::string>();
        }
    }
    return sp;
}

IrsSpec irs_of(const json& j, const PisotField& f, const ChartSpace& sp) {
    IrsSpec spec;
    spec.field = f;
    spec.space = sp;
    if (auto it = j.find("condition_c"); it != j.end()) spec.declared_condition_c = it->get<bool>();
    if (auto it = j.find("vertex_order"); it != j.end()) {
        if (!it->is_array()) parse_fail("irs.vertex_order", "expected a list of labels");
        for (const auto& s : *it) spec.vertex_order.push_back(s.get<std::string>());
    }
    const json& rels = need(j, "relations", "irs");
    if (!rels.is_array() || rels.empty()) parse_fail("irs.relations", "expected a nonempty list");
    for (std::size_t t = 0; t < rels.size(); ++t) {
        std::string rw = sub("irs.relations", t);
        const json& pieces = need(rels[t], "pieces", rw);
        if (!pieces.is_array()) parse_fail(sub(rw, "pieces"), "expected a list");
        Relation rel;
        for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
            std::string pw = sub(sub(rw, "pieces"), pi);
            const json& pj = pieces[pi];
            Piece p;
            std::string kind = need(pj, "kind", pw).get<std::string>();
            if (kind == "H")
                p.kind = Piece::Kind::H;
            else if (kind == "J")
                p.kind = Piece::Kind::J;
            else
                parse_fail(sub(pw, "kind"), "kind must be \"H\" or \"J\"");
            p.index = static_cast<int>(need_int(need(pj, "index", pw), sub(pw, "index")));
            const json& dom = need(pj, "domain", pw);
            if (!dom.is_array() || static_cast<int>(dom.size()) != sp.dim)
                parse_fail(sub(pw, "domain"), "expected one interval per axis");
            for (int a = 0; a < sp.dim; ++a)
                axis_domain(dom[a], sp, f, a, p.domain, sub(sub(pw, "domain"), static_cast<std::size_t>(a)));
            const json& brs = need(pj, "branches", pw);
            if (!brs.is_array()) parse_fail(sub(pw, "branches"), "expected a list");
            for (std::size_t l = 0; l < brs.size(); ++l) {
                std::string bw = sub(sub(pw, "branches"), l);
                Branch b{map_of(brs[l], f, sp.dim, bw), std::vector<long>(sp.dim, 0), Similitude::identity(f, sp.dim)};
                Point shift(sp.dim, f.zero());
                if (auto it = brs[l].find("wrap"); it != brs[l].end()) {
                    if (!it->is_array() || static_cast<int>(it->size()) != sp.dim)
                        parse_fail(sub(bw, "wrap"), "expected one integer per axis");
                    for (int a = 0; a < sp.dim; ++a) {
                        b.wrap[a] = static_cast<long>(need_int((*it)[a], sub(sub(bw, "wrap"), static_cast<std::size_t>(a))));
                        if (b.wrap[a] == 0) continue;
                        if (!sp.periods[a]) semantic_fail(sub(bw, "wrap"), "wrap on a non-periodic axis");
                        shift[a] = *sp.periods[a] * Rational(b.wrap[a]);
                    }
                }
                b.lifted = b.map.translated(shift);
                p.branches.push_back(std::move(b));
            }
            rel.pieces.push_back(std::move(p));
        }
        spec.relations.push_back(std::move(rel));
    }
    return spec;
}

Gifs gifs_of(const json& j, const PisotField& f, const ChartSpace& sp) {
    Gifs g;
    g.field = f;
    g.dim = sp.dim;
    g.periods = sp.periods;
    const json& vs = need(j, "vertices", "gifs");
    if (!vs.is_array() || vs.empty()) parse_fail("gifs.vertices", "expected a nonempty list");
    for (std::size_t i = 0; i < vs.size(); ++i) {
        std::string w = sub("gifs.vertices", i);
        GifsVertex v;
        v.label = vs[i].value("label", "W" + std::to_string(i + 1));
        const json& W = need(vs[i], "W", w);
        if (!W.is_array() || W.empty()) parse_fail(sub(w, "W"), "expected a nonempty list of boxes");
        for (std::size_t b = 0; b < W.size(); ++b) {
            Box bx = box_of(W[b], f, sp.dim, sub(sub(w, "W"), b));
            if (bx.degenerate()) semantic_fail(sub(sub(w, "W"), b), "vertex boxes need nonempty interior");
            v.W.push_back(std::move(bx));
        }
        g.vertices.push_back(std::move(v));
    }
    const json& es = need(j, "edges", "gifs");
    if (!es.is_array() || es.empty()) parse_fail("gifs.edges", "expected a nonempty list");
    for (std::size_t e = 0; e < es.size(); ++e) {
        std::string w = sub("gifs.edges", e);
        // The map may be nested under "map" or written inline next to src and dst.
        const json& mj = es[e].contains("map") ? es[e]["map"] : es[e];
        GifsEdge ed{0, 0, map_of(mj, f, sp.dim, es[e].contains("map") ? sub(w, "map") : w),
                    es[e].value("label", "e" + std::to_string(e + 1))};
        ed.src = static_cast<int>(need_int(need(es[e], "src", w), sub(w, "src"))) - 1;
        ed.dst = static_cast<int>(need_int(need(es[e], "dst", w), sub(w, "dst"))) - 1;
        if (ed.src < 0 || ed.src >= g.vertex_count() || ed.dst < 0 || ed.dst >= g.vertex_count())
            semantic_fail(w, "src and dst are 1-based vertex numbers");
        g.edges.push_back(std::move(ed));
    }
    return g;
}

}  // namespace

SceneConfig parse_scene(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error("ParseError", origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
    if (!root.is_object()) parse_fail("<root>", "expected an object");
    try {
        SceneConfig cfg;
        cfg.origin = origin;
        cfg.name = root.value("name", origin);
        cfg.field = field_of(root);
        cfg.space = space_of(root, cfg.field);
        bool has_irs = root.contains("irs"), has_gifs = root.contains("gifs");
        if (has_irs && has_gifs) semantic_fail("<root>", "give either an irs or a gifs section, not both");
        if (!has_irs && !has_gifs) parse_fail("<root>", "missing irs or gifs section");
        if (has_irs) cfg.irs = irs_of(root["irs"], cfg.field, cfg.space);
        if (has_gifs) cfg.gifs = gifs_of(root["gifs"], cfg.field, cfg.space);
        if (auto it = root.find("solver"); it != root.end()) {
            const json& s = *it;
            cfg.solver.tol = s.value("tol", cfg.solver.tol);
            cfg.solver.association_q = s.value("association_q", cfg.solver.association_q);
            cfg.solver.max_levels = s.value("max_levels", cfg.solver.max_levels);
            cfg.solver.max_boxes = s.value("max_boxes", cfg.solver.max_boxes);
            cfg.solver.vertex_cap = s.value("vertex_cap", cfg.solver.vertex_cap);
            cfg.solver.require_pisot = s.value("require_pisot", cfg.solver.require_pisot);
            if (!(cfg.solver.tol > 0)) semantic_fail("solver.tol", "tolerance must be positive");
            if (cfg.solver.association_q < 1) semantic_fail("solver.association_q", "must be at least 1");
            if (cfg.solver.max_levels < 2) semantic_fail("solver.max_levels", "must be at least 2");
        }
        if (auto it = root.find("render"); it != root.end()) {
            const json& r = *it;
            cfg.render.width = r.value("width", cfg.render.width);
            cfg.render.height = r.value("height", cfg.render.height);
            cfg.render.depth = r.value("depth", cfg.render.depth);
            cfg.render.path_cap = r.value("path_cap", cfg.render.path_cap);
            if (cfg.render.width < 1 || cfg.render.height < 0) semantic_fail("render", "image size must be positive");
            if (cfg.render.depth < 0) semantic_fail("render.depth", "depth must be >= 0");
        }
        return cfg;
    } catch (const json::exception& e) {
        throw Error("ParseError", origin + ": " + e.what());
    }
}

SceneConfig load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("ParseError", "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_scene(os.str(), path);
}

// ---------------------------------------------------------------- reports

namespace {

ojson number_json(const AlgebraicNumber& a) {
    if (a.is_rational()) return to_string(a.coeffs()[0]);
    ojson c = ojson::array();
    for (const auto& q : a.coeffs()) c.push_back(to_string(q));
    return c;
}

ojson map_json(const Similitude& m) {
    ojson t = ojson::array();
    for (const auto& x : m.trans()) t.push_back(number_json(x));
    return ojson{{"ratio_exp", m.ratio_exp()}, {"orth", {{"perm", m.orth().perm}, {"sign", m.orth().sign}}}, {"trans", t}};
}

ojson box_json(const Box& b) {
    ojson out = ojson::array();
    for (int i = 0; i < b.dim(); ++i) out.push_back(ojson::array({number_json(b.lo[i]), number_json(b.hi[i])}));
    return out;
}

ojson violations_json(const ValidationReport& r) {
    ojson out = ojson::array();
    for (const auto& v : r.violations) out.push_back({{"kind", v.kind}, {"where", v.where}, {"detail", v.detail}});
    return out;
}

std::string exps_text(const std::map<int, long>& cell) {
    std::string s;
    for (const auto& [k, n] : cell) {
        if (!s.empty()) s += "+";
        if (n != 1) s += std::to_string(n) + "*";
        s += "b^-" + std::to_string(k) + "a";
    }
    return s.empty() ? "0" : s;
}

}  // namespace

ojson gifs_json(const Gifs& g) {
    ojson vs = ojson::array();
    for (const auto& v : g.vertices) {
        ojson w = ojson::array();
        for (const auto& b : v.W) w.push_back(box_json(b));
        vs.push_back({{"label", v.label}, {"W", w}});
    }
    ojson es = ojson::array();
    for (const auto& e : g.edges)
        es.push_back({{"src", e.src + 1}, {"dst", e.dst + 1}, {"label", e.label}, {"map", map_json(e.map)}});
    return {{"vertex_count", g.vertex_count()}, {"edge_count", g.edge_count()}, {"vertices", vs}, {"edges", es}};
}

ojson matrix_json(const RatioMatrix& m) {
    ojson rows = ojson::array();
    for (const auto& row : m.cells) {
        ojson r = ojson::array();
        for (const auto& c : row) {
            ojson cell = ojson::object();
            for (const auto& [k, n] : c) cell[std::to_string(k)] = n;
            r.push_back(cell);
        }
        rows.push_back(r);
    }
    return {{"size", m.size()}, {"cells", rows}, {"text", matrix_text(m)}};
}

std::string matrix_text(const RatioMatrix& m) {
    std::set<int> exps;
    bool small = true;
    for (const auto& row : m.cells)
        for (const auto& c : row)
            for (const auto& [k, n] : c) {
                exps.insert(k);
                if (n > 9) small = false;
            }
    std::ostringstream os;
    if (exps.size() == 1 && small) {
        int k = *exps.begin();
        os << "(b^-" << k << ")^a x\n";
        for (const auto& row : m.cells) {
            for (std::size_t j = 0; j < row.size(); ++j) {
                long n = row[j].empty() ? 0 : row[j].begin()->second;
                os << (j ? " " : "") << n;
            }
            os << "\n";
        }
        return os.str();
    }
    for (const auto& row : m.cells) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " | " : "") << exps_text(row[j]);
        os << "\n";
    }
    return os.str();
}

ojson ftc_json(const ReducedGraphReport& r) {
    ojson types = ojson::array();
    for (std::size_t t = 0; t < r.types.size(); ++t) {
        const auto& ty = r.types[t];
        ojson tr = ojson::array();
        if (t < r.transitions.size())
            for (const auto& x : r.transitions[t]) tr.push_back({{"to", x.to}, {"ratio_exp", x.ratio_exp}, {"count", x.count}});
        types.push_back({{"id", ty.id},
                         {"first_level", ty.first_level},
                         {"representative", path_string(ty.representative)},
                         {"source", ty.source + 1},
                         {"target", ty.target + 1},
                         {"members", ty.members},
                         {"transitions", tr}});
    }
    ojson removed = ojson::array();
    for (const auto& e : r.removed_edges)
        removed.push_back({{"removed", path_string(e.removed_path)}, {"kept", path_string(e.kept_path)}});
    ojson pruned = ojson::array();
    for (const auto& p : r.pruned) {
        ojson w = ojson::array();
        for (const auto& [lost, kept] : p.witnesses) w.push_back({{"lost", path_string(lost)}, {"kept", path_string(kept)}});
        pruned.push_back({{"path", path_string(p.path)}, {"witnesses", w}});
    }
    return {{"finite", r.finite},
            {"consistent", r.consistent},
            {"type_count", r.type_count()},
            {"levels_explored", r.levels_explored},
            {"stable_after", r.stable_after},
            {"state_count", r.state_count},
            {"vertices", r.vertices},
            {"removed_total", r.removed_total},
            {"pruned_total", r.pruned_total},
            {"types", types},
            {"removed_edges", removed},
            {"pruned", pruned},
            {"notes", r.notes}};
}

// ---------------------------------------------------------------- pipeline

PipelineReport run_pipeline(const SceneConfig& cfg) {
    PipelineReport rep;
    using clock = std::chrono::steady_clock;
    bool stop = false;
    auto stage = [&](const std::string& name, auto&& body) {
        StageRecord s;
        s.name = name;
        if (stop) {
            s.status = "skipped";
            rep.stages.push_back(std::move(s));
            return;
        }
        auto t0 = clock::now();
        try {
            s.status = body(s.detail) ? "pass" : "fail";
        } catch (const Error& e) {
            s.status = "fail";
            s.detail["error"] = e.kind();
            s.detail["message"] = e.what();
            if (rep.exit_code == 0) {
                static const std::set<std::string> solver{"NoConvergence", "DegenerateSystem"};
                rep.exit_code = solver.count(e.kind()) ? 4 : (e.kind() == "LevelCapExceeded" ? 3 : 2);
                rep.failure = name + ": " + e.what();
            }
        }
        s.seconds = std::chrono::duration<double>(clock::now() - t0).count();
        if (s.status == "fail") {
            stop = true;
            if (rep.exit_code == 0) {
                rep.exit_code = 2;
                rep.failure = name + " failed";
            }
        }
        rep.stages.push_back(std::move(s));
    };
    auto skip = [&](const std::string& name, const std::string& why) {
        StageRecord s;
        s.name = name;
        s.status = "skipped";
        s.detail["reason"] = why;
        rep.stages.push_back(std::move(s));
    };

    if (cfg.irs) {
        const IrsSpec& spec = *cfg.irs;
        int k0 = 1;
        stage("validate_decomposition", [&](ojson& d) {
            auto r = validate_decomposition(spec);
            d["violations"] = violations_json(r);
            if (!r.ok) rep.failure = "validate_decomposition: " + r.summary();
            return r.ok;
        });
        stage("validate_containments", [&](ojson& d) {
            auto r = validate_containments(spec);
            d["violations"] = violations_json(r);
            if (!r.ok) rep.failure = "validate_containments: " + r.summary();
            return r.ok;
        });
        stage("assemble_gifs", [&](ojson& d) {
            auto a = assemble_gifs_detailed(spec);
            d["candidates"] = a.candidate_count;
            d["raw_edges"] = a.raw_edge_count;
            d["vertices"] = a.gifs.vertex_count();
            d["edges"] = a.gifs.edge_count();
            d["k0"] = a.k0;
            k0 = a.k0;
            rep.gifs = std::move(a.gifs);
            return true;
        });
        stage("verify_association", [&](ojson& d) {
            auto r = verify_association(spec, *rep.gifs, cfg.solver.association_q, k0);
            d["checked_up_to"] = r.checked_up_to;
            d["first_failure"] = r.first_failure;
            if (!r.ok) rep.failure = "verify_association: sets differ at q = " + std::to_string(r.first_failure);
            return r.ok;
        });
    } else {
        skip("validate_decomposition", "direct GIFS scene");
        skip("validate_containments", "direct GIFS scene");
        stage("assemble_gifs", [&](ojson& d) {
            cfg.gifs->validate();
            auto inv = check_invariant_family(*cfg.gifs);
            ojson bad = ojson::array();
            for (int e : inv.failing_edges) bad.push_back(e + 1);
            d["source"] = "direct";
            d["invariant_family"] = inv.holds;
            d["failing_edges"] = bad;
            d["vertices"] = cfg.gifs->vertex_count();
            d["edges"] = cfg.gifs->edge_count();
            rep.gifs = *cfg.gifs;
            if (!inv.holds) rep.failure = "assemble_gifs: some f_e(W_dst) is not inside W_src";
            return inv.holds;
        });
        skip("verify_association", "direct GIFS scene");
    }

    bool gosc = false;
    stage("check_gosc", [&](ojson& d) {
        auto r = check_gosc(*rep.gifs);
        gosc = r.holds;
        d["holds"] = r.holds;
        d["strongly_connected"] = is_strongly_connected(*rep.gifs);
        ojson pairs = ojson::array();
        for (const auto& [a, b] : r.violations) pairs.push_back(ojson::array({a + 1, b + 1}));
        d["overlapping_edge_pairs"] = pairs;
        return true;
    });
    if (!stop && gosc) {
        rep.method = "gosc";
        skip("finite_type", "graph open set condition holds");
        rep.matrix = build_incidence(*rep.gifs);
    } else if (!stop) {
        rep.method = "ftc";
        stage("finite_type", [&](ojson& d) {
            FtcOptions opt;
            opt.max_levels = cfg.solver.max_levels;
            opt.vertex_cap = cfg.solver.vertex_cap;
            opt.require_pisot = cfg.solver.require_pisot;
            auto r = detect_finite_type(*rep.gifs, opt);
            d["finite"] = r.finite;
            d["type_count"] = r.type_count();
            d["levels_explored"] = r.levels_explored;
            d["stable_after"] = r.stable_after;
            rep.ftc = r;
            if (!r.finite) {
                rep.exit_code = 3;
                rep.failure = "finite_type: no finite type set detected within " + std::to_string(opt.max_levels) + " levels";
                return false;
            }
            rep.matrix = weighted_incidence(r);
            return true;
        });
    } else {
        skip("finite_type", "earlier stage failed");
    }
    stage("dimension", [&](ojson& d) {
        rep.dimension = solve_dimension(*rep.matrix, cfg.solver.tol);
        d["alpha"] = rep.dimension->alpha;
        d["lambda_at_alpha"] = rep.dimension->lambda_at_alpha;
        d["bracket"] = ojson::array({rep.dimension->lo, rep.dimension->hi});
        return true;
    });
    return rep;
}

ojson report_json(const SceneConfig& cfg, const PipelineReport& rep, bool with_timing) {
    ojson out;
    out["scene"] = cfg.name;
    out["field"] = cfg.field.describe();
    out["method"] = rep.method.empty() ? ojson() : ojson(rep.method);
    out["exit_code"] = rep.exit_code;
    if (!rep.failure.empty()) out["failure"] = rep.failure;
    ojson st = ojson::array();
    for (const auto& s : rep.stages) {
        ojson o{{"name", s.name}, {"status", s.status}};
        if (with_timing) o["seconds"] = s.seconds;
        o["detail"] = s.detail.is_null() ? ojson::object() : s.detail;
        st.push_back(o);
    }
    out["stages"] = st;
    if (rep.gifs) out["gifs"] = gifs_json(*rep.gifs);
    if (rep.ftc) out["finite_type"] = ftc_json(*rep.ftc);
    if (rep.matrix) out["matrix"] = matrix_json(*rep.matrix);
    if (rep.dimension) {
        std::ostringstream os;
        os.precision(12);
        os << rep.dimension->alpha;
        out["dimension"] = {{"alpha", rep.dimension->alpha}, {"alpha_text", os.str()}, {"lambda_at_alpha", rep.dimension->lambda_at_alpha}};
    }
    return out;
}

}  // namespace fraxdim
