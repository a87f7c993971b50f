#include <fraxdim/error.hpp>
#include <fraxdim/irs.hpp>

#include <algorithm>
#include <map>
#include <sstream>

namespace fraxdim {

namespace {

bool has_period(const Periods& p, int axis) { return axis < static_cast<int>(p.size()) && p[axis]; }

// inner inside outer, allowing a whole-period shift of outer on periodic axes.
bool contains_mod(const Box& outer, const Box& inner, const Periods& periods) {
    for (int i = 0; i < outer.dim(); ++i) {
        auto fits = [&](const AlgebraicNumber& lo, const AlgebraicNumber& hi) {
            return !(inner.lo[i] < lo) && !(inner.hi[i] > hi);
        };
        bool ok = fits(outer.lo[i], outer.hi[i]);
        if (!ok && has_period(periods, i)) {
            const auto& p = *periods[i];
            ok = fits(outer.lo[i] + p, outer.hi[i] + p) || fits(outer.lo[i] - p, outer.hi[i] - p);
        }
        if (!ok) return false;
    }
    return true;
}

std::vector<AlgebraicNumber> representatives(std::vector<AlgebraicNumber> br) {
    std::sort(br.begin(), br.end(), [](const auto& a, const auto& b) { return a < b; });
    br.erase(std::unique(br.begin(), br.end()), br.end());
    std::vector<AlgebraicNumber> reps;
    for (std::size_t k = 0; k < br.size(); ++k) {
        reps.push_back(br[k]);
        if (k + 1 < br.size()) reps.push_back((br[k] + br[k + 1]) * Rational(1, 2));
    }
    return reps;
}

// Calls fn on one representative point of every cell of the arrangement cut out of E0
// by the piece faces of relation r. Points on the upper end of a periodic axis are skipped
// because they coincide with the lower end.
template <class Fn>
void for_each_cell(const IrsSpec& spec, const Relation& r, Fn fn) {
    const Box& e0 = spec.space.E0;
    int n = e0.dim();
    std::vector<std::vector<AlgebraicNumber>> reps(n);
    for (int i = 0; i < n; ++i) {
        std::vector<AlgebraicNumber> br{e0.lo[i], e0.hi[i]};
        for (const auto& p : r.pieces) {
            for (const auto* x : {&p.domain.box.lo[i], &p.domain.box.hi[i]})
                if (*x > e0.lo[i] && *x < e0.hi[i]) br.push_back(*x);
        }
        reps[i] = representatives(std::move(br));
        if (has_period(spec.space.periods, i)) reps[i].pop_back();
    }
    std::vector<std::size_t> idx(n, 0);
    Point p(n, e0.lo[0]);
    while (true) {
        for (int i = 0; i < n; ++i) p[i] = reps[i][idx[i]];
        fn(p);
        int i = 0;
        while (i < n && ++idx[i] == reps[i].size()) idx[i++] = 0;
        if (i == n) break;
    }
}

std::string point_str(const Point& p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i].to_string();
    os << ")";
    return os.str();
}

struct Candidate {
    std::string label;
    Box box;
    int t = -1, piece = -1, branch = -1;  // branch == -1 marks the E1-on-H candidate
};

}  // namespace

bool PieceDomain::contains(const Point& p) const {
    for (int i = 0; i < box.dim(); ++i) {
        const auto& lo = box.lo[i];
        const auto& hi = box.hi[i];
        auto c = p[i] <=> lo;
        if (c < 0 || (c == 0 && !lo_closed[i])) return false;
        auto d = p[i] <=> hi;
        if (d > 0 || (d == 0 && !hi_closed[i])) return false;
    }
    return true;
}

std::string ValidationReport::summary() const {
    if (ok) return "ok";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        const auto& v = violations[i];
        os << (i ? "; " : "") << v.kind << " at " << v.where;
        if (!v.detail.empty()) os << " (" << v.detail << ")";
    }
    return os.str();
}

std::string branch_name(int t, const Piece& p, int l) {
    std::string s = "R" + std::to_string(t + 1) + ":" + p.name();
    if (p.kind == Piece::Kind::H) s += "." + std::to_string(l + 1);
    return s;
}

RegionSet iterate_attractor(const IrsSpec& spec, int depth, std::size_t max_boxes) {
    if (depth < 0) throw Error("SemanticError", "depth must be >= 0");
    RegionSet cur{spec.space.E0};
    for (int step = 0; step < depth; ++step) {
        RegionSet next;
        for (const auto& b : cur) {
            for (std::size_t t = 0; t < spec.relations.size(); ++t) {
                bool met = false;
                for (const auto& p : spec.relations[t].pieces) {
                    auto inter = intersect(b, p.domain.box);
                    if (!inter) continue;
                    met = true;
                    if (inter->degenerate()) continue;
                    for (const auto& br : p.branches) next.push_back(image(br.lifted, *inter));
                }
                if (!met)
                    throw Error("BranchDomainGap", "box " + b.to_string() + " meets no piece of relation " +
                                                       std::to_string(t + 1));
            }
            if (next.size() > max_boxes) throw Error("BoxCapExceeded", "iteration exceeded the box cap");
        }
        cur = normalize(std::move(next));
    }
    return cur;
}

ValidationReport validate_decomposition(const IrsSpec& spec) {
    ValidationReport rep;
    const auto& e0 = spec.space.E0;
    for (std::size_t t = 0; t < spec.relations.size(); ++t) {
        const auto& rel = spec.relations[t];
        std::string rname = "R" + std::to_string(t + 1);
        if (rel.pieces.empty()) rep.add("cover gap", rname, "relation has no pieces");
        for (const auto& p : rel.pieces) {
            std::string where = rname + ":" + p.name();
            if (p.kind == Piece::Kind::H && p.branches.size() < 2)
                rep.add("multivalued piece with fewer than two branches", where);
            if (p.kind == Piece::Kind::J && p.branches.size() != 1)
                rep.add("single-valued piece without exactly one branch", where);
            for (std::size_t l = 0; l < p.branches.size(); ++l) {
                const auto& br = p.branches[l];
                std::string bw = branch_name(static_cast<int>(t), p, static_cast<int>(l));
                if (br.lifted.ratio_exp() < 1)
                    rep.add("non-contractive branch", bw,
                            "ratio exponent " + std::to_string(br.lifted.ratio_exp()));
                if (!closed_box_contains(e0, image(br.lifted, p.domain.box)))
                    rep.add("image leaves E0", bw, image(br.lifted, p.domain.box).to_string());
            }
        }
        if (rel.pieces.empty()) continue;
        bool gap_reported = false, clash_reported = false;
        for_each_cell(spec, rel, [&](const Point& pt) {
            std::vector<const Piece*> in;
            for (const auto& p : rel.pieces)
                if (p.domain.contains(pt)) in.push_back(&p);
            if (in.empty() && !gap_reported) {
                rep.add("cover gap", rname, "point " + point_str(pt) + " lies in no piece");
                gap_reported = true;
            }
            // A point in two single-valued pieces must get one value.
            for (std::size_t a = 0; a < in.size(); ++a)
                for (std::size_t b = a + 1; b < in.size(); ++b) {
                    if (in[a]->kind != Piece::Kind::J || in[b]->kind != Piece::Kind::J) continue;
                    if (in[a]->branches.empty() || in[b]->branches.empty()) continue;
                    auto va = in[a]->branches[0].lifted.apply(pt), vb = in[b]->branches[0].lifted.apply(pt);
                    if (va != vb && !clash_reported) {
                        rep.add("inconsistent overlapping pieces", rname + ":" + in[a]->name() + "/" + in[b]->name(),
                                "point " + point_str(pt));
                        clash_reported = true;
                    }
                }
        });
    }
    return rep;
}

ValidationReport validate_containments(const IrsSpec& spec) {
    ValidationReport rep;
    for (std::size_t t = 0; t < spec.relations.size(); ++t) {
        const auto& rel = spec.relations[t];
        for (const auto& p : rel.pieces)
            for (std::size_t l = 0; l < p.branches.size(); ++l) {
                Box im = image(p.branches[l].lifted, p.domain.box);
                bool inside = std::any_of(rel.pieces.begin(), rel.pieces.end(), [&](const Piece& q) {
                    return contains_mod(q.domain.box, im, spec.space.periods);
                });
                if (!inside)
                    rep.add("straddling image", branch_name(static_cast<int>(t), p, static_cast<int>(l)),
                            "image " + im.to_string() + " lies in no single piece closure");
            }
    }
    return rep;
}

namespace {

// Split a box along the piece faces of every relation for which it is not inside one piece.
std::vector<Box> split_to_pieces(const IrsSpec& spec, const Box& w) {
    int n = w.dim();
    std::vector<std::vector<AlgebraicNumber>> cuts(n);
    for (const auto& rel : spec.relations) {
        bool fits = std::any_of(rel.pieces.begin(), rel.pieces.end(), [&](const Piece& p) {
            return !p.domain.degenerate() && closed_box_contains(p.domain.box, w);
        });
        if (fits) continue;
        for (const auto& p : rel.pieces)
            for (int i = 0; i < n; ++i)
                for (const auto* x : {&p.domain.box.lo[i], &p.domain.box.hi[i]})
                    if (*x > w.lo[i] && *x < w.hi[i]) cuts[i].push_back(*x);
    }
    std::vector<std::vector<AlgebraicNumber>> ends(n);
    for (int i = 0; i < n; ++i) {
        cuts[i].push_back(w.lo[i]);
        cuts[i].push_back(w.hi[i]);
        std::sort(cuts[i].begin(), cuts[i].end(), [](const auto& a, const auto& b) { return a < b; });
        cuts[i].erase(std::unique(cuts[i].begin(), cuts[i].end()), cuts[i].end());
    }
    std::vector<Box> out;
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        Box b{Point{}, Point{}};
        for (int i = 0; i < n; ++i) {
            b.lo.push_back(cuts[i][idx[i]]);
            b.hi.push_back(cuts[i][idx[i] + 1]);
        }
        out.push_back(std::move(b));
        int i = 0;
        while (i < n && ++idx[i] == cuts[i].size() - 1) idx[i++] = 0;
        if (i == n) break;
    }
    return out;
}

}  // namespace

AssemblyResult assemble_gifs_detailed(const IrsSpec& spec) {
    auto dec = validate_decomposition(spec);
    if (!dec.ok) throw Error("AssemblyRefused", dec.summary());
    auto con = validate_containments(spec);
    if (!con.ok) throw Error("AssemblyRefused", con.summary());

    const Periods& per = spec.space.periods;
    // Every relation a single map on all of E0: this is an IFS, and E0 itself is the vertex.
    bool ifs = std::all_of(spec.relations.begin(), spec.relations.end(), [&](const Relation& r) {
        return r.pieces.size() == 1 && r.pieces[0].kind == Piece::Kind::J && r.pieces[0].domain.box == spec.space.E0;
    });
    if (ifs) {
        Gifs g;
        g.field = spec.field;
        g.dim = spec.space.dim;
        g.periods = per;
        g.vertices.push_back({"E0", RegionSet{spec.space.E0}});
        for (std::size_t t = 0; t < spec.relations.size(); ++t) {
            const auto& p = spec.relations[t].pieces[0];
            g.edges.push_back({0, 0, p.branches[0].lifted, branch_name(static_cast<int>(t), p, 0) + "|E0"});
        }
        AssemblyResult res;
        res.candidate_count = 1;
        res.raw_edge_count = g.edge_count();
        res.k0 = 0;
        res.gifs = minimal_simplify(g);
        return res;
    }
    // Candidate vertex sets, ordered by (t, l, i) with l = 0 for single-valued pieces.
    std::vector<Candidate> cands;
    RegionSet e1 = iterate_attractor(spec, 1);
    for (std::size_t t = 0; t < spec.relations.size(); ++t) {
        const auto& rel = spec.relations[t];
        std::size_t max_l = 0;
        for (const auto& p : rel.pieces)
            if (p.kind == Piece::Kind::H) max_l = std::max(max_l, p.branches.size());
        auto add = [&](std::string label, const Box& b, int pi, int bi) {
            if (b.degenerate()) return;
            cands.push_back({"R" + std::to_string(t + 1) + ":" + label, b, static_cast<int>(t), pi, bi});
        };
        for (std::size_t pi = 0; pi < rel.pieces.size(); ++pi) {
            const auto& p = rel.pieces[pi];
            if (p.kind == Piece::Kind::J)
                add(p.name(), image(p.branches[0].lifted, p.domain.box), static_cast<int>(pi), 0);
        }
        for (std::size_t l = 0; l < max_l; ++l)
            for (std::size_t pi = 0; pi < rel.pieces.size(); ++pi) {
                const auto& p = rel.pieces[pi];
                if (p.kind == Piece::Kind::H && l < p.branches.size())
                    add(p.name() + "." + std::to_string(l + 1), image(p.branches[l].lifted, p.domain.box),
                        static_cast<int>(pi), static_cast<int>(l));
            }
        for (std::size_t pi = 0; pi < rel.pieces.size(); ++pi) {
            const auto& p = rel.pieces[pi];
            if (p.kind != Piece::Kind::H) continue;
            RegionSet part;
            for (const auto& b : e1)
                if (auto x = intersect(b, p.domain.box); x && !x->degenerate()) part.push_back(*x);
            part = normalize(std::move(part));
            for (std::size_t k = 0; k < part.size(); ++k)
                add("E" + p.name() + (part.size() > 1 ? "#" + std::to_string(k + 1) : ""), part[k],
                    static_cast<int>(pi), -1);
        }
    }

    // Vertices must each sit inside one piece of every relation.
    std::vector<Candidate> verts;
    for (const auto& c : cands) {
        auto parts = split_to_pieces(spec, c.box);
        for (std::size_t k = 0; k < parts.size(); ++k) {
            if (parts[k].degenerate()) continue;
            Candidate v = c;
            v.box = parts[k];
            if (parts.size() > 1) v.label += "#" + std::to_string(k + 1);
            verts.push_back(std::move(v));
        }
    }

    if (!spec.vertex_order.empty()) {
        std::vector<Candidate> ordered;
        std::vector<char> used(verts.size(), 0);
        for (const auto& lab : spec.vertex_order) {
            auto it = std::find_if(verts.begin(), verts.end(), [&](const Candidate& c) { return c.label == lab; });
            if (it == verts.end()) throw Error("SemanticError", "vertex_order names unknown vertex '" + lab + "'");
            std::size_t k = static_cast<std::size_t>(it - verts.begin());
            if (used[k]) throw Error("SemanticError", "vertex_order repeats '" + lab + "'");
            used[k] = 1;
            ordered.push_back(*it);
        }
        for (std::size_t k = 0; k < verts.size(); ++k)
            if (!used[k]) ordered.push_back(verts[k]);
        verts = std::move(ordered);
    }

    Gifs g;
    g.field = spec.field;
    g.dim = spec.space.dim;
    g.periods = per;
    for (const auto& v : verts) g.vertices.push_back({v.label, RegionSet{v.box}});

    for (std::size_t t = 0; t < spec.relations.size(); ++t) {
        const auto& rel = spec.relations[t];
        for (std::size_t j = 0; j < verts.size(); ++j) {
            const Box& w = verts[j].box;
            for (std::size_t pi = 0; pi < rel.pieces.size(); ++pi) {
                const auto& p = rel.pieces[pi];
                if (p.domain.degenerate() || !closed_box_contains(p.domain.box, w)) continue;
                for (std::size_t l = 0; l < p.branches.size(); ++l) {
                    Box im = image(p.branches[l].lifted, w);
                    int target = -1;
                    for (std::size_t i = 0; i < verts.size() && target < 0; ++i)
                        if (verts[i].t == static_cast<int>(t) && verts[i].piece == static_cast<int>(pi) &&
                            verts[i].branch == static_cast<int>(l) && union_contains({verts[i].box}, im, per))
                            target = static_cast<int>(i);
                    for (std::size_t i = 0; i < verts.size() && target < 0; ++i)
                        if (union_contains({verts[i].box}, im, per)) target = static_cast<int>(i);
                    std::string bn = branch_name(static_cast<int>(t), p, static_cast<int>(l));
                    if (target < 0)
                        throw Error("AssemblyRefused", "no vertex contains the image of " + verts[j].label +
                                                           " under " + bn);
                    g.edges.push_back({target, static_cast<int>(j), p.branches[l].lifted, bn + "|" + verts[j].label});
                }
            }
        }
    }
    AssemblyResult res;
    res.candidate_count = g.vertex_count();
    res.raw_edge_count = g.edge_count();
    res.gifs = minimal_simplify(g);
    return res;
}

Gifs assemble_gifs(const IrsSpec& spec) { return assemble_gifs_detailed(spec).gifs; }

AssociationReport verify_association(const IrsSpec& spec, const Gifs& g, int max_q, int k0) {
    AssociationReport rep;
    if (max_q < 1) throw Error("SemanticError", "max_q must be >= 1");
    if (k0 < 0) throw Error("SemanticError", "k0 must be >= 0");
    for (int q = 1; q <= max_q; ++q) {
        RegionSet lhs = iterate_attractor(spec, q + k0);
        RegionSet rhs = path_union(g, q);
        rep.checked_up_to = q;
        if (!region_equal(lhs, rhs, spec.space.periods)) {
            rep.ok = false;
            rep.first_failure = q;
            return rep;
        }
    }
    return rep;
}

}  // namespace fraxdim
