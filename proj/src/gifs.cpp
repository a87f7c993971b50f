#include <fraxdim/error.hpp>
#include <fraxdim/gifs.hpp>

#include <cmath>
#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace fraxdim {

SignedPerm SignedPerm::identity(int n) {
    SignedPerm p;
    p.perm.resize(n);
    std::iota(p.perm.begin(), p.perm.end(), 0);
    p.sign.assign(n, 1);
    return p;
}

SignedPerm SignedPerm::operator*(const SignedPerm& o) const {
    // (this o)(x)_i = sign[i] * (o x)[perm[i]] = sign[i] * o.sign[perm[i]] * x[o.perm[perm[i]]]
    SignedPerm r;
    int n = dim();
    r.perm.resize(n);
    r.sign.resize(n);
    for (int i = 0; i < n; ++i) {
        r.perm[i] = o.perm[perm[i]];
        r.sign[i] = sign[i] * o.sign[perm[i]];
    }
    return r;
}

SignedPerm SignedPerm::inverse() const {
    SignedPerm r;
    int n = dim();
    r.perm.resize(n);
    r.sign.resize(n);
    for (int i = 0; i < n; ++i) {
        r.perm[perm[i]] = i;
        r.sign[perm[i]] = sign[i];
    }
    return r;
}

std::vector<int> SignedPerm::code() const {
    std::vector<int> c(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) c[i] = sign[i] * (perm[i] + 1);
    return c;
}

Similitude::Similitude(PisotField field, int ratio_exp, SignedPerm orth, Point trans)
    : field_(std::move(field)), k_(ratio_exp), orth_(std::move(orth)), b_(std::move(trans)) {
    int n = orth_.dim();
    if (static_cast<int>(b_.size()) != n)
        throw Error("SemanticError", "translation length does not match the orthogonal part");
    std::vector<int> seen(n, 0);
    for (int i = 0; i < n; ++i) {
        if (orth_.perm[i] < 0 || orth_.perm[i] >= n || seen[orth_.perm[i]]++)
            throw Error("SemanticError", "orthogonal part is not a signed permutation");
        if (orth_.sign[i] != 1 && orth_.sign[i] != -1)
            throw Error("SemanticError", "signed permutation entries must be +1 or -1");
    }
    for (const auto& x : b_)
        if (x.field() != field_) throw Error("FieldMismatch", "translation outside the map's field");
}

Similitude Similitude::identity(const PisotField& field, int dim) {
    return Similitude(field, 0, SignedPerm::identity(dim), Point(dim, field.zero()));
}

double Similitude::ratio_approx() const { return std::pow(field_.beta_approx(), -k_); }

Point Similitude::apply(const Point& p) const {
    if (static_cast<int>(p.size()) != dim()) throw Error("SemanticError", "point dimension mismatch");
    AlgebraicNumber rho = ratio();
    Point out;
    out.reserve(p.size());
    for (int i = 0; i < dim(); ++i) {
        if (p[orth_.perm[i]].field() != field_) throw Error("FieldMismatch", "point outside the map's field");
        AlgebraicNumber v = rho * p[orth_.perm[i]];
        if (orth_.sign[i] < 0) v = -v;
        out.push_back(v + b_[i]);
    }
    return out;
}

Point similitude_apply(const Similitude& f, const Point& p) { return f.apply(p); }

Similitude Similitude::compose(const Similitude& o) const {
    if (o.field_ != field_) throw Error("FieldMismatch", "composing maps over different fields");
    return Similitude(field_, k_ + o.k_, orth_ * o.orth_, apply(o.b_));
}

Similitude Similitude::inverse() const {
    SignedPerm rinv = orth_.inverse();
    AlgebraicNumber s = field_.beta_pow(k_);
    Point t(dim(), field_.zero());
    for (int i = 0; i < dim(); ++i) {
        // (R^{-1} b)_i = rinv.sign[i] * b[rinv.perm[i]]
        AlgebraicNumber v = s * b_[rinv.perm[i]];
        t[i] = rinv.sign[i] < 0 ? v : -v;
    }
    return Similitude(field_, -k_, rinv, std::move(t));
}

Similitude Similitude::translated(const Point& shift) const {
    Point t = b_;
    for (int i = 0; i < dim(); ++i) t[i] += shift[i];
    return Similitude(field_, k_, orth_, std::move(t));
}

bool Similitude::operator==(const Similitude& o) const {
    return k_ == o.k_ && orth_ == o.orth_ && b_ == o.b_ && field_ == o.field_;
}

int Similitude::compare(const Similitude& a, const Similitude& b) {
    if (a.k_ != b.k_) return a.k_ < b.k_ ? -1 : 1;
    auto ca = a.orth_.code(), cb = b.orth_.code();
    if (ca != cb) return ca < cb ? -1 : 1;
    for (std::size_t i = 0; i < a.b_.size(); ++i) {
        int c = AlgebraicNumber::structural_compare(a.b_[i], b.b_[i]);
        if (c) return c;
    }
    return 0;
}

std::size_t Similitude::hash() const noexcept {
    std::size_t h = std::hash<int>{}(k_);
    for (int c : orth_.code()) hash_combine(h, std::hash<int>{}(c));
    for (const auto& x : b_) hash_combine(h, x.hash());
    return h;
}

std::string Similitude::to_string() const {
    std::ostringstream os;
    os << "beta^" << -k_ << " R[";
    auto c = orth_.code();
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << "] + (";
    for (std::size_t i = 0; i < b_.size(); ++i) os << (i ? ", " : "") << b_[i].to_string();
    os << ")";
    return os.str();
}

bool Box::degenerate() const {
    for (int i = 0; i < dim(); ++i)
        if (!(lo[i] < hi[i])) return true;
    return false;
}

Point Box::center() const {
    Point c;
    for (int i = 0; i < dim(); ++i) c.push_back((lo[i] + hi[i]) * Rational(1, 2));
    return c;
}

std::string Box::to_string() const {
    std::ostringstream os;
    for (int i = 0; i < dim(); ++i)
        os << (i ? " x " : "") << "[" << lo[i].to_string() << ", " << hi[i].to_string() << "]";
    return os.str();
}

Box image(const Similitude& f, const Box& b) {
    Box r{f.apply(b.lo), f.apply(b.hi)};
    for (int i = 0; i < r.dim(); ++i)
        if (f.orth().sign[i] < 0) std::swap(r.lo[i], r.hi[i]);
    return r;
}

RegionSet image(const Similitude& f, const RegionSet& r) {
    RegionSet out;
    out.reserve(r.size());
    for (const auto& b : r) out.push_back(image(f, b));
    return out;
}

std::optional<Box> intersect(const Box& a, const Box& b) {
    Box r = a;
    for (int i = 0; i < a.dim(); ++i) {
        if (b.lo[i] > r.lo[i]) r.lo[i] = b.lo[i];
        if (b.hi[i] < r.hi[i]) r.hi[i] = b.hi[i];
        if (r.hi[i] < r.lo[i]) return std::nullopt;
    }
    return r;
}

bool closed_box_contains(const Box& outer, const Box& inner) {
    for (int i = 0; i < outer.dim(); ++i)
        if (inner.lo[i] < outer.lo[i] || inner.hi[i] > outer.hi[i]) return false;
    return true;
}

namespace {

// Shift offsets to try on one axis: 0, or 0 and +-period.
std::vector<std::optional<AlgebraicNumber>> axis_shifts(const Periods& periods, int axis) {
    std::vector<std::optional<AlgebraicNumber>> s{std::nullopt};
    if (axis < static_cast<int>(periods.size()) && periods[axis]) {
        s.push_back(*periods[axis]);
        s.push_back(-*periods[axis]);
    }
    return s;
}

// All periodic copies of c that meet b (closed).
void copies_meeting(const Box& c, const Box& b, const Periods& periods, RegionSet& out) {
    int n = c.dim();
    std::vector<std::vector<std::pair<AlgebraicNumber, AlgebraicNumber>>> per_axis(n);
    for (int i = 0; i < n; ++i) {
        for (const auto& s : axis_shifts(periods, i)) {
            AlgebraicNumber lo = s ? c.lo[i] + *s : c.lo[i];
            AlgebraicNumber hi = s ? c.hi[i] + *s : c.hi[i];
            if (lo <= b.hi[i] && b.lo[i] <= hi) per_axis[i].emplace_back(lo, hi);
        }
        if (per_axis[i].empty()) return;
    }
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        Box r{Point{}, Point{}};
        for (int i = 0; i < n; ++i) {
            r.lo.push_back(per_axis[i][idx[i]].first);
            r.hi.push_back(per_axis[i][idx[i]].second);
        }
        out.push_back(std::move(r));
        int i = 0;
        while (i < n && ++idx[i] == per_axis[i].size()) idx[i++] = 0;
        if (i == n) break;
    }
}

void sort_unique(std::vector<AlgebraicNumber>& v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a < b; });
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool point_in(const Box& c, const Point& p) {
    for (int i = 0; i < c.dim(); ++i)
        if (p[i] < c.lo[i] || p[i] > c.hi[i]) return false;
    return true;
}

}  // namespace

bool open_overlap(const Box& a, const Box& b, const Periods& periods) {
    for (int i = 0; i < a.dim(); ++i) {
        bool any = false;
        for (const auto& s : axis_shifts(periods, i)) {
            AlgebraicNumber lo = s ? b.lo[i] + *s : b.lo[i];
            AlgebraicNumber hi = s ? b.hi[i] + *s : b.hi[i];
            if (a.lo[i] < hi && lo < a.hi[i]) {
                any = true;
                break;
            }
        }
        if (!any) return false;
    }
    return true;
}

bool open_overlap(const RegionSet& a, const RegionSet& b, const Periods& periods) {
    for (const auto& x : a)
        for (const auto& y : b)
            if (open_overlap(x, y, periods)) return true;
    return false;
}

bool union_contains(const RegionSet& u, const Box& b, const Periods& periods) {
    RegionSet cand;
    for (const auto& c : u) {
        if (c.degenerate()) continue;
        copies_meeting(c, b, periods, cand);
    }
    for (const auto& c : cand)
        if (closed_box_contains(c, b)) return true;
    if (cand.empty()) return false;

    int n = b.dim();
    std::vector<std::vector<AlgebraicNumber>> reps(n);
    for (int i = 0; i < n; ++i) {
        std::vector<AlgebraicNumber> br{b.lo[i], b.hi[i]};
        for (const auto& c : cand) {
            if (c.lo[i] > b.lo[i] && c.lo[i] < b.hi[i]) br.push_back(c.lo[i]);
            if (c.hi[i] > b.lo[i] && c.hi[i] < b.hi[i]) br.push_back(c.hi[i]);
        }
        sort_unique(br);
        for (std::size_t k = 0; k < br.size(); ++k) {
            reps[i].push_back(br[k]);
            if (k + 1 < br.size()) reps[i].push_back((br[k] + br[k + 1]) * Rational(1, 2));
        }
    }
    std::vector<std::size_t> idx(n, 0);
    Point p(n, b.lo[0]);
    while (true) {
        for (int i = 0; i < n; ++i) p[i] = reps[i][idx[i]];
        bool covered = false;
        for (const auto& c : cand)
            if (point_in(c, p)) {
                covered = true;
                break;
            }
        if (!covered) return false;
        int i = 0;
        while (i < n && ++idx[i] == reps[i].size()) idx[i++] = 0;
        if (i == n) break;
    }
    return true;
}

bool region_subset(const RegionSet& a, const RegionSet& b, const Periods& periods) {
    for (const auto& x : a) {
        if (x.degenerate()) continue;
        if (!union_contains(b, x, periods)) return false;
    }
    return true;
}

bool region_equal(const RegionSet& a, const RegionSet& b, const Periods& periods) {
    return region_subset(a, b, periods) && region_subset(b, a, periods);
}

namespace {

bool box_less(const Box& a, const Box& b) {
    for (int i = 0; i < a.dim(); ++i) {
        int c = AlgebraicNumber::structural_compare(a.lo[i], b.lo[i]);
        if (c) return c < 0;
    }
    for (int i = 0; i < a.dim(); ++i) {
        int c = AlgebraicNumber::structural_compare(a.hi[i], b.hi[i]);
        if (c) return c < 0;
    }
    return false;
}

}  // namespace

RegionSet normalize(RegionSet r) {
    std::erase_if(r, [](const Box& b) { return b.degenerate(); });
    std::sort(r.begin(), r.end(), box_less);
    r.erase(std::unique(r.begin(), r.end()), r.end());
    std::vector<char> drop(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size() && !drop[i]; ++j)
            if (i != j && !drop[j] && closed_box_contains(r[j], r[i])) drop[i] = 1;
    RegionSet out;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (!drop[i]) out.push_back(std::move(r[i]));
    return out;
}

Box hull(const RegionSet& r) {
    if (r.empty()) throw Error("SemanticError", "hull of an empty region");
    Box h = r.front();
    for (const auto& b : r)
        for (int i = 0; i < h.dim(); ++i) {
            if (b.lo[i] < h.lo[i]) h.lo[i] = b.lo[i];
            if (b.hi[i] > h.hi[i]) h.hi[i] = b.hi[i];
        }
    return h;
}

void Gifs::validate() const {
    int m = vertex_count();
    for (const auto& v : vertices) {
        if (v.W.empty()) throw Error("SemanticError", "vertex " + v.label + " has an empty set");
        for (const auto& b : v.W) {
            if (b.dim() != dim) throw Error("SemanticError", "vertex box dimension mismatch");
            if (b.degenerate())
                throw Error("SemanticError", "vertex " + v.label + " has a degenerate box " + b.to_string());
        }
    }
    for (const auto& e : edges) {
        if (e.src < 0 || e.src >= m || e.dst < 0 || e.dst >= m)
            throw Error("SemanticError", "edge endpoint out of range");
        if (e.map.dim() != dim) throw Error("SemanticError", "edge map dimension mismatch");
        if (e.map.field() != field) throw Error("FieldMismatch", "edge map over another field");
        if (e.map.ratio_exp() < 1) throw Error("SemanticError", "edge map is not a contraction");
    }
}

DirectedPath compose_path(const Gifs& g, const std::vector<int>& edges) {
    if (edges.empty()) throw Error("NonAdjacentEdges", "empty path");
    for (std::size_t k = 0; k + 1 < edges.size(); ++k)
        if (g.edges.at(edges[k]).dst != g.edges.at(edges[k + 1]).src)
            throw Error("NonAdjacentEdges", "edge " + std::to_string(edges[k] + 1) + " does not end where edge " +
                                                std::to_string(edges[k + 1] + 1) + " starts");
    Similitude f = g.edges.at(edges[0]).map;
    for (std::size_t k = 1; k < edges.size(); ++k) f = f.compose(g.edges[edges[k]].map);
    return DirectedPath{edges, f, g.edges[edges.front()].src, g.edges[edges.back()].dst};
}

std::vector<DirectedPath> enumerate_paths(const Gifs& g, int q) {
    if (q < 1) throw Error("SemanticError", "path length must be >= 1");
    std::vector<std::vector<int>> out_edges(g.vertex_count());
    for (int e = 0; e < g.edge_count(); ++e) out_edges[g.edges[e].src].push_back(e);
    std::vector<DirectedPath> result;
    std::vector<int> stack;
    std::function<void(const Similitude&)> rec = [&](const Similitude& f) {
        if (static_cast<int>(stack.size()) == q) {
            result.push_back(DirectedPath{stack, f, g.edges[stack.front()].src, g.edges[stack.back()].dst});
            return;
        }
        for (int e : out_edges[g.edges[stack.back()].dst]) {
            stack.push_back(e);
            rec(f.compose(g.edges[e].map));
            stack.pop_back();
        }
    };
    for (int e = 0; e < g.edge_count(); ++e) {
        stack.assign(1, e);
        rec(g.edges[e].map);
    }
    return result;
}

bool is_strongly_connected(const Gifs& g) {
    int m = g.vertex_count();
    if (m == 0) return false;
    auto reach = [&](bool forward) {
        std::vector<char> seen(m, 0);
        std::vector<int> todo{0};
        seen[0] = 1;
        while (!todo.empty()) {
            int v = todo.back();
            todo.pop_back();
            for (const auto& e : g.edges) {
                int a = forward ? e.src : e.dst, b = forward ? e.dst : e.src;
                if (a == v && !seen[b]) {
                    seen[b] = 1;
                    todo.push_back(b);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    return reach(true) && reach(false);
}

InvariantReport check_invariant_family(const Gifs& g) {
    InvariantReport r;
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edges[e];
        if (!region_subset(image(ed.map, g.vertices[ed.dst].W), g.vertices[ed.src].W, g.periods)) {
            r.holds = false;
            r.failing_edges.push_back(e);
        }
    }
    return r;
}

bool sibling_overlap(const Gifs& g, int e1, int e2) {
    const auto& a = g.edges.at(e1);
    const auto& b = g.edges.at(e2);
    if (a.src != b.src) return false;
    return open_overlap(image(a.map, g.vertices[a.dst].W), image(b.map, g.vertices[b.dst].W), g.periods);
}

GoscReport check_gosc(const Gifs& g) {
    GoscReport r;
    for (int a = 0; a < g.edge_count(); ++a)
        for (int b = a + 1; b < g.edge_count(); ++b)
            if (sibling_overlap(g, a, b)) {
                r.holds = false;
                r.violations.emplace_back(a, b);
            }
    return r;
}

namespace {

void dedupe_and_sort(Gifs& g) {
    std::vector<GifsEdge> kept;
    for (auto& e : g.edges) {
        bool dup = std::any_of(kept.begin(), kept.end(), [&](const GifsEdge& k) {
            return k.src == e.src && k.dst == e.dst && k.map == e.map;
        });
        if (!dup) kept.push_back(std::move(e));
    }
    std::stable_sort(kept.begin(), kept.end(), [](const GifsEdge& a, const GifsEdge& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    g.edges = std::move(kept);
}

}  // namespace

Gifs minimal_simplify(const Gifs& g_in) {
    Gifs g = g_in;
    bool changed = true;
    while (changed) {
        changed = false;
        int m = g.vertex_count();
        for (int v = 0; v < m && !changed; ++v) {
            for (int s = 0; s < m; ++s) {
                if (s == v || !region_subset(g.vertices[v].W, g.vertices[s].W, g.periods)) continue;
                bool equal = region_subset(g.vertices[s].W, g.vertices[v].W, g.periods);
                if (equal && s > v) continue;  // the lower index survives
                for (auto& e : g.edges) {
                    if (e.src == v) e.src = s;
                    if (e.dst == v) e.dst = s;
                }
                g.vertices.erase(g.vertices.begin() + v);
                for (auto& e : g.edges) {
                    if (e.src > v) --e.src;
                    if (e.dst > v) --e.dst;
                }
                changed = true;
                break;
            }
        }
    }
    dedupe_and_sort(g);
    return g;
}

RegionSet path_union(const Gifs& g, int q) {
    std::vector<RegionSet> level(g.vertex_count());
    for (int i = 0; i < g.vertex_count(); ++i) level[i] = normalize(g.vertices[i].W);
    for (int k = 0; k < q; ++k) {
        std::vector<RegionSet> next(g.vertex_count());
        for (const auto& e : g.edges) {
            auto im = image(e.map, level[e.dst]);
            next[e.src].insert(next[e.src].end(), im.begin(), im.end());
        }
        for (auto& r : next) r = normalize(std::move(r));
        level = std::move(next);
    }
    RegionSet all;
    for (auto& r : level) all.insert(all.end(), r.begin(), r.end());
    return normalize(std::move(all));
}

}  // namespace fraxdim
