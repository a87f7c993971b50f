#include <fraxdim/ftc.hpp>
#include <fraxdim/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <unordered_map>

namespace fraxdim {

std::string path_string(const std::vector<int>& path) {
    std::string s;
    for (int e : path) s += "e" + std::to_string(e + 1);
    return s.empty() ? "()" : s;
}

// ---------------------------------------------------------------- Pisot check

namespace {

Rational rational_gcd(const Rational& a, const Rational& b) {
    Integer n, d;
    mpz_gcd(n.get_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
    mpz_lcm(d.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
    Rational r(n, d);
    r.canonicalize();
    return r;
}

// Durand-Kerner on the monic minimal polynomial.
std::vector<std::complex<double>> poly_roots(const std::vector<Integer>& mp) {
    int d = static_cast<int>(mp.size()) - 1;
    std::vector<std::complex<double>> z(d);
    for (int i = 0; i < d; ++i) z[i] = std::pow(std::complex<double>(0.4, 0.9), i);
    auto eval = [&](std::complex<double> x) {
        std::complex<double> v = 0;
        for (int i = d; i >= 0; --i) v = v * x + mp[i].get_d();
        return v;
    };
    for (int it = 0; it < 2000; ++it) {
        double moved = 0;
        for (int i = 0; i < d; ++i) {
            std::complex<double> den = 1;
            for (int j = 0; j < d; ++j)
                if (j != i) den *= z[i] - z[j];
            std::complex<double> step = eval(z[i]) / den;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-15) break;
    }
    return z;
}

}  // namespace

PisotReport check_pisot_hypotheses(const Gifs& g) {
    PisotReport r;
    g.validate();
    for (int e = 0; e < g.edge_count(); ++e)
        if (g.edges[e].map.ratio_exp() < 1) {
            r.ok = false;
            r.notes.push_back("edge e" + std::to_string(e + 1) + " is not contracting");
        }

    double beta = g.field.beta_approx();
    if (g.field.degree() > 1) {
        for (auto z : poly_roots(g.field.minpoly())) {
            if (std::abs(z - beta) < 1e-9) continue;
            if (std::abs(z) >= 1 - 1e-12) {
                r.ok = false;
                r.notes.push_back("beta has a conjugate outside the open unit disc");
                break;
            }
        }
    }

    // Closure of the orthogonal parts under multiplication.
    std::set<SignedPerm> group{SignedPerm::identity(g.dim)};
    std::vector<SignedPerm> gens;
    for (const auto& e : g.edges) gens.push_back(e.map.orth());
    std::vector<SignedPerm> frontier(group.begin(), group.end());
    while (!frontier.empty()) {
        std::vector<SignedPerm> next;
        for (const auto& h : frontier)
            for (const auto& s : gens) {
                SignedPerm p = s * h;
                if (group.insert(p).second) next.push_back(p);
            }
        frontier = std::move(next);
    }
    r.group_order = static_cast<int>(group.size());

    r.lattice.assign(g.dim, Rational(0));
    for (const auto& h : group)
        for (const auto& e : g.edges) {
            const Point& b = e.map.trans();
            for (int i = 0; i < g.dim; ++i)
                for (const auto& c : b[h.perm[i]].coeffs())
                    if (c != 0) r.lattice[i] = rational_gcd(r.lattice[i], c);
        }
    for (auto& q : r.lattice)
        if (q == 0) q = 1;
    return r;
}

// ---------------------------------------------------------------- levels

bool NeighborhoodForm::operator==(const NeighborhoodForm& o) const {
    if (owner_j != o.owner_j || members.size() != o.members.size()) return false;
    for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i].first != o.members[i].first || members[i].second != o.members[i].second) return false;
    return true;
}

std::size_t NeighborhoodForm::hash() const noexcept {
    std::size_t h = std::hash<int>{}(owner_j);
    for (const auto& [j, m] : members) {
        hash_combine(h, std::hash<int>{}(j));
        hash_combine(h, m.hash());
    }
    return h;
}

namespace {

struct VertexKey {
    const Similitude* map;
    int i, j;
    bool operator==(const VertexKey& o) const { return i == o.i && j == o.j && *map == *o.map; }
};
struct VertexKeyHash {
    std::size_t operator()(const VertexKey& k) const noexcept {
        std::size_t h = k.map->hash();
        hash_combine(h, std::hash<int>{}(k.i));
        hash_combine(h, std::hash<int>{}(k.j));
        return h;
    }
};

constexpr double kEps = 1e-9;

}  // namespace

struct FtcLevels::Grid {
    std::vector<double> width;
    std::vector<long> wrap;  // cell count on periodic axes, 0 otherwise
    std::unordered_map<std::string, std::vector<int>> cells;

    std::vector<std::string> keys(int src, const std::vector<double>& lo, const std::vector<double>& hi) const {
        std::size_t n = width.size();
        std::vector<std::vector<long>> axis(n);
        for (std::size_t a = 0; a < n; ++a) {
            long c0 = static_cast<long>(std::floor((lo[a] - kEps) / width[a]));
            long c1 = static_cast<long>(std::floor((hi[a] + kEps) / width[a]));
            if (wrap[a] > 0 && c1 - c0 + 1 >= wrap[a]) {
                c0 = 0;
                c1 = wrap[a] - 1;
            }
            std::set<long> s;
            for (long c = c0; c <= c1; ++c) s.insert(wrap[a] > 0 ? ((c % wrap[a]) + wrap[a]) % wrap[a] : c);
            axis[a].assign(s.begin(), s.end());
        }
        std::vector<std::string> out;
        std::vector<std::size_t> idx(n, 0);
        while (true) {
            std::string k = std::to_string(src);
            for (std::size_t a = 0; a < n; ++a) k += "," + std::to_string(axis[a][idx[a]]);
            out.push_back(std::move(k));
            std::size_t a = 0;
            while (a < n && ++idx[a] == axis[a].size()) idx[a++] = 0;
            if (a == n) break;
        }
        return out;
    }
};

FtcLevels::FtcLevels(const Gifs& g) : g_(g) {
    g_.validate();
    levels_.emplace_back();
    for (int i = 0; i < g_.vertex_count(); ++i) {
        FtcVertex v{Similitude::identity(g_.field, g_.dim), i, i, 0, {}, {}, -1, -1};
        verts_.push_back(std::move(v));
        images_.push_back(normalize(g_.vertices[i].W));
        levels_[0].push_back(i);
    }
    children_.assign(verts_.size(), {});
    for (int v : levels_[0]) {
        Box h = hull(images_[v]);
        std::vector<double> lo, hi;
        for (int a = 0; a < g_.dim; ++a) {
            lo.push_back(h.lo[a].approx());
            hi.push_back(h.hi[a].approx());
        }
        flo_.push_back(lo);
        fhi_.push_back(hi);
    }
}

void FtcLevels::generate_next() {
    int k = depth();
    std::vector<std::vector<int>> out(g_.vertex_count());
    for (int e = 0; e < g_.edge_count(); ++e) out[g_.edges[e].src].push_back(e);

    std::unordered_map<VertexKey, int, VertexKeyHash> index;
    std::vector<int> cur;
    std::size_t first_new = verts_.size();
    verts_.reserve(verts_.size() + levels_[k].size() * 4);
    // Keys point into this side list, which stays put while verts_ grows.
    std::vector<std::unique_ptr<Similitude>> maps;
    for (int v : levels_[k]) {
        for (int e : out[verts_[v].j]) {
            auto nm = std::make_unique<Similitude>(verts_[v].map.compose(g_.edges[e].map));
            VertexKey key{nm.get(), verts_[v].i, g_.edges[e].dst};
            auto it = index.find(key);
            int id;
            if (it == index.end()) {
                id = static_cast<int>(first_new + maps.size());
                index.emplace(key, id);
                std::vector<int> p = verts_[v].path;
                p.push_back(e);
                maps.push_back(std::move(nm));
                FtcVertex nv{*maps.back(), verts_[v].i, g_.edges[e].dst, k + 1, std::move(p), {}, -1, -1};
                verts_.push_back(std::move(nv));
                cur.push_back(id);
            } else {
                id = it->second;
            }
            verts_[id].parents.emplace_back(e, v);
        }
    }
    children_.resize(verts_.size());
    for (int id : cur) {
        auto& vv = verts_[id];
        auto best = *std::min_element(vv.parents.begin(), vv.parents.end());
        vv.reduced_edge = best.first;
        vv.reduced_parent = best.second;
        children_[best.second].push_back(id);
    }
    images_.resize(verts_.size());
    flo_.resize(verts_.size());
    fhi_.resize(verts_.size());
    parallel_for(cur.size(), [&](std::size_t n) {
        int id = cur[n];
        images_[id] = image(verts_[id].map, images_[verts_[id].j]);
        // images_[j] for j < vertex_count() are the roots' W_j.
        Box h = hull(images_[id]);
        for (int a = 0; a < g_.dim; ++a) {
            flo_[id].push_back(h.lo[a].approx());
            fhi_[id].push_back(h.hi[a].approx());
        }
    });
    levels_.push_back(std::move(cur));
}

const FtcLevels::Grid& FtcLevels::grid(int k) const {
    if (grids_.size() < levels_.size()) grids_.resize(levels_.size());
    if (grids_[k]) return *grids_[k];
    auto gr = std::make_shared<Grid>();
    int n = g_.dim;
    gr->width.assign(n, 0.0);
    gr->wrap.assign(n, 0);
    for (int v : levels_[k])
        for (int a = 0; a < n; ++a) gr->width[a] = std::max(gr->width[a], fhi_[v][a] - flo_[v][a]);
    for (int a = 0; a < n; ++a) {
        if (gr->width[a] <= 0) gr->width[a] = 1;
        if (a < static_cast<int>(g_.periods.size()) && g_.periods[a]) {
            double p = g_.periods[a]->approx();
            long cnt = std::max(1L, static_cast<long>(std::floor(p / gr->width[a])));
            gr->wrap[a] = cnt;
            gr->width[a] = p / static_cast<double>(cnt);
        }
    }
    for (int v : levels_[k])
        for (const auto& key : gr->keys(verts_[v].i, flo_[v], fhi_[v])) gr->cells[key].push_back(v);
    grids_[k] = gr;
    return *gr;
}

bool FtcLevels::overlapping(int a, int b) const {
    // Float test per axis first; only near-touching cases go to exact arithmetic.
    bool sure = true;
    for (int x = 0; x < g_.dim; ++x) {
        std::vector<double> shifts{0.0};
        if (x < static_cast<int>(g_.periods.size()) && g_.periods[x]) {
            double p = g_.periods[x]->approx();
            shifts = {0.0, p, -p};
        }
        double best = -INFINITY;
        for (double s : shifts)
            best = std::max(best, std::min(fhi_[a][x], fhi_[b][x] + s) - std::max(flo_[a][x], flo_[b][x] + s));
        if (best < -kEps) return false;
        if (best <= kEps) sure = false;
    }
    if (sure && images_[a].size() == 1 && images_[b].size() == 1) return true;
    return open_overlap(images_[a], images_[b], g_.periods);
}

std::vector<int> FtcLevels::neighborhood(int v) const {
    const auto& gr = grid(verts_.at(v).level);
    std::vector<int> cand;
    for (const auto& key : gr.keys(verts_[v].i, flo_[v], fhi_[v])) {
        auto it = gr.cells.find(key);
        if (it != gr.cells.end()) cand.insert(cand.end(), it->second.begin(), it->second.end());
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<int> out;
    for (int u : cand)
        if (u != v && overlapping(v, u)) out.push_back(u);
    return out;
}

namespace {

NeighborhoodForm make_form(const FtcLevels& L, int v, const std::vector<int>& members, int owner_j) {
    NeighborhoodForm f;
    f.owner_j = owner_j;
    Similitude inv = L.vertex(v).map.inverse();
    for (int u : members) f.members.emplace_back(L.vertex(u).j, inv.compose(L.vertex(u).map));
    std::sort(f.members.begin(), f.members.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return Similitude::compare(a.second, b.second) < 0;
    });
    return f;
}

}  // namespace

NeighborhoodForm FtcLevels::literal_form(int v) const { return make_form(*this, v, neighborhood(v), verts_.at(v).j); }

NeighborhoodForm FtcLevels::sibling_form(int v) const {
    int p = verts_.at(v).reduced_parent;
    std::vector<int> members;
    if (p >= 0) {
        // Demanding the grid here keeps the call const-safe across threads once built.
        for (int u : children_[p])
            if (u != v && overlapping(v, u)) members.push_back(u);
    }
    return make_form(*this, v, members, -1);
}

// ---------------------------------------------------------------- detection

namespace {

struct FormHash {
    std::size_t operator()(const NeighborhoodForm& f) const noexcept { return f.hash(); }
};

class FormRegistry {
public:
    int intern(NeighborhoodForm f) {
        auto it = ids_.find(f);
        if (it != ids_.end()) return it->second;
        int id = static_cast<int>(ids_.size());
        sizes_.push_back(static_cast<int>(f.members.size()) + 1);
        ids_.emplace(std::move(f), id);
        return id;
    }
    int members(int id) const { return sizes_[id]; }

private:
    std::unordered_map<NeighborhoodForm, int, FormHash> ids_;
    std::vector<int> sizes_;
};

using State = std::pair<int, int>;  // (literal form id, sibling form id)
using Offspring = std::vector<std::pair<std::pair<State, int>, long>>;

bool path_less(const FtcVertex& a, const FtcVertex& b) {
    if (a.j != b.j) return a.j < b.j;
    if (a.i != b.i) return a.i < b.i;
    return a.path < b.path;
}

}  // namespace

ReducedGraphReport detect_finite_type(const Gifs& g, const FtcOptions& opt) {
    if (opt.max_levels < 2) throw Error("SemanticError", "max_levels must be at least 2");
    ReducedGraphReport rep;
    rep.field = g.field;
    PisotReport pr = check_pisot_hypotheses(g);
    if (!pr.ok) {
        if (opt.require_pisot) throw Error("PisotHypothesisFailed", pr.notes.empty() ? "check failed" : pr.notes.front());
        for (const auto& n : pr.notes) rep.notes.push_back("pisot check: " + n);
    }
    rep.notes.push_back("types are compared within a level only");

    FtcLevels L(g);
    FormRegistry lit_reg, sib_reg;
    std::vector<int> lit, sib;  // per vertex, filled level by level
    auto classify_level = [&](int k) {
        const auto& lv = L.level(k);
        std::vector<NeighborhoodForm> lf(lv.size()), sf(lv.size());
        if (lv.empty()) return;
        L.neighborhood(lv.front());  // builds the level grid before the parallel sweep
        parallel_for(lv.size(), [&](std::size_t n) {
            lf[n] = L.literal_form(lv[n]);
            sf[n] = L.sibling_form(lv[n]);
        });
        lit.resize(L.vertex_total(), -1);
        sib.resize(L.vertex_total(), -1);
        for (std::size_t n = 0; n < lv.size(); ++n) {
            lit[lv[n]] = lit_reg.intern(std::move(lf[n]));
            sib[lv[n]] = sib_reg.intern(std::move(sf[n]));
        }
    };
    classify_level(0);
    int classified = 1;
    const int m = g.vertex_count();

    for (int D = 1; D <= opt.max_levels; ++D) {
        L.generate_next();
        rep.vertices = L.vertex_total();
        rep.levels_explored = D;
        if (L.vertex_total() > opt.vertex_cap) {
            rep.notes.push_back("vertex cap reached at level " + std::to_string(D));
            throw LevelCapExceeded("vertex cap " + std::to_string(opt.vertex_cap) + " exceeded at level " + std::to_string(D), rep);
        }
        if (D < 3) continue;
        // Forms only depend on the level itself and its reduced parents.
        while (classified <= D - 1) classify_level(classified++);

        std::vector<char> alive(L.vertex_total(), 0);
        for (int v : L.level(D)) alive[v] = 1;
        for (int k = D - 1; k >= 0; --k)
            for (int v : L.level(k))
                for (int c : L.reduced_children(v))
                    if (alive[c]) {
                        alive[v] = 1;
                        break;
                    }

        auto state = [&](int v) { return State{lit[v], sib[v]}; };
        auto offspring = [&](int v) {
            std::map<std::pair<State, int>, long> c;
            int kv = L.vertex(v).map.ratio_exp();
            for (int ch : L.reduced_children(v))
                if (alive[ch]) ++c[{state(ch), L.vertex(ch).map.ratio_exp() - kv}];
            return Offspring(c.begin(), c.end());
        };

        std::map<State, std::set<Offspring>> off;
        for (int k = 0; k <= D - 2; ++k)
            for (int v : L.level(k))
                if (alive[v]) off[state(v)].insert(offspring(v));
        bool inconsistent = false;
        for (const auto& [s, o] : off)
            if (o.size() > 1) inconsistent = true;

        // Bisimulation seeded by the sibling form only. The target vertex is not part of the seed,
        // so a vertex may share a type with a root whose target differs.
        std::map<State, int> blk;
        {
            std::map<int, int> seed;
            for (const auto& [s, o] : off) blk[s] = seed.emplace(s.second, static_cast<int>(seed.size())).first->second;
        }
        std::map<State, int> open_ids;
        std::size_t nblocks = 0;
        {
            std::set<int> b;
            for (auto& [s, id] : blk) b.insert(id);
            nblocks = b.size();
        }
        while (true) {
            std::map<std::pair<int, std::vector<std::pair<std::pair<int, int>, long>>>, int> sig_ids;
            std::map<State, int> nb;
            for (const auto& [s, o] : off) {
                std::map<std::pair<int, int>, long> c;
                for (const auto& [key, cnt] : *o.begin()) {
                    int b;
                    auto it = blk.find(key.first);
                    if (it != blk.end()) {
                        b = it->second;
                    } else {
                        b = -1 - open_ids.emplace(key.first, static_cast<int>(open_ids.size())).first->second;
                    }
                    c[{b, key.second}] += cnt;
                }
                auto sig = std::make_pair(blk[s], std::vector<std::pair<std::pair<int, int>, long>>(c.begin(), c.end()));
                nb[s] = sig_ids.emplace(sig, static_cast<int>(sig_ids.size())).first->second;
            }
            std::size_t count = sig_ids.size();
            blk = std::move(nb);
            if (count == nblocks) break;
            nblocks = count;
        }

        // Type names: roots first, then discovery order.
        std::map<int, int> block_name;
        for (int v : L.level(0))
            if (alive[v]) block_name.emplace(blk.at(state(v)), v + 1);
        rep.types.clear();
        for (int v : L.level(0)) {
            NeighborhoodType t;
            t.id = v + 1;
            t.source = t.target = v;
            t.members = lit_reg.members(lit[v]);
            rep.types.push_back(t);
        }
        std::vector<int> tname(L.vertex_total(), 0);
        for (int v : L.level(0)) tname[v] = v + 1;
        for (int k = 1; k <= D - 2; ++k) {
            std::vector<int> order;
            for (int v : L.level(k))
                if (alive[v]) order.push_back(v);
            std::sort(order.begin(), order.end(), [&](int a, int b) { return path_less(L.vertex(a), L.vertex(b)); });
            for (int v : order) {
                int b = blk[state(v)];
                auto it = block_name.find(b);
                if (it == block_name.end()) {
                    int id = static_cast<int>(rep.types.size()) + 1;
                    it = block_name.emplace(b, id).first;
                    NeighborhoodType t;
                    t.id = id;
                    t.first_level = k;
                    t.representative = L.vertex(v).path;
                    t.source = L.vertex(v).i;
                    t.target = L.vertex(v).j;
                    t.members = lit_reg.members(lit[v]);
                    rep.types.push_back(t);
                }
                tname[v] = it->second;
            }
        }
        int ntypes = static_cast<int>(rep.types.size());

        // Rows from representatives whose offspring are all named.
        std::vector<std::optional<std::vector<Transition>>> rows(ntypes);
        bool conflict = false;
        for (int k = 0; k <= D - 3; ++k)
            for (int v : L.level(k)) {
                if (!alive[v]) continue;
                std::map<std::pair<int, int>, long> c;
                int kv = L.vertex(v).map.ratio_exp();
                for (int ch : L.reduced_children(v))
                    if (alive[ch]) ++c[{tname[ch], L.vertex(ch).map.ratio_exp() - kv}];
                std::vector<Transition> row;
                for (const auto& [key, cnt] : c) row.push_back({key.first, key.second, cnt});
                auto& slot = rows[tname[v] - 1];
                if (!slot) {
                    slot = row;
                } else if (slot->size() != row.size() ||
                           !std::equal(row.begin(), row.end(), slot->begin(), [](const Transition& a, const Transition& b) {
                               return a.to == b.to && a.ratio_exp == b.ratio_exp && a.count == b.count;
                           })) {
                    conflict = true;
                }
            }

        bool closed = true;
        for (int v : L.level(D - 1))
            if (alive[v] && !off.count(state(v))) closed = false;
        bool all_rows = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.has_value(); });
        for (int r = 0; r < m; ++r)
            if (!alive[r]) {
                all_rows = false;
                rep.notes.push_back("root " + std::to_string(r + 1) + " has no surviving offspring");
            }

        std::set<State> states;
        for (const auto& [s, o] : off) states.insert(s);
        rep.state_count = static_cast<int>(states.size());
        rep.consistent = !inconsistent && !conflict;
        rep.stable_after = 0;
        for (const auto& t : rep.types) rep.stable_after = std::max(rep.stable_after, t.first_level + 1);
        rep.transitions.assign(ntypes, {});
        for (int t = 0; t < ntypes; ++t)
            if (rows[t]) rep.transitions[t] = *rows[t];

        rep.finite = closed && open_ids.empty() && rep.consistent && all_rows;

        // Witnesses for the report.
        rep.removed_edges.clear();
        rep.pruned.clear();
        rep.removed_total = rep.pruned_total = 0;
        for (int k = 1; k <= D - 1; ++k)
            for (int v : L.level(k)) {
                const auto& vv = L.vertex(v);
                std::vector<int> kept = L.vertex(vv.reduced_parent).path;
                kept.push_back(vv.reduced_edge);
                for (const auto& [e, p] : vv.parents) {
                    if (e == vv.reduced_edge && p == vv.reduced_parent) continue;
                    ++rep.removed_total;
                    if (k <= opt.witness_levels) {
                        std::vector<int> rp = L.vertex(p).path;
                        rp.push_back(e);
                        rep.removed_edges.push_back({rp, kept});
                    }
                }
            }
        for (int k = 1; k <= D - 1; ++k) {
            std::map<int, std::vector<std::pair<std::vector<int>, std::vector<int>>>> lost_by_parent;
            if (k <= opt.witness_levels)
                for (int w : L.level(k + 1)) {
                    const auto& ww = L.vertex(w);
                    std::vector<int> kept = L.vertex(ww.reduced_parent).path;
                    kept.push_back(ww.reduced_edge);
                    for (const auto& [e, p] : ww.parents) {
                        if (p == ww.reduced_parent || alive[p]) continue;
                        std::vector<int> lost = L.vertex(p).path;
                        lost.push_back(e);
                        lost_by_parent[p].emplace_back(lost, kept);
                    }
                }
            for (int v : L.level(k)) {
                if (alive[v]) continue;
                ++rep.pruned_total;
                if (k > opt.witness_levels) continue;
                PrunedVertex pv;
                pv.path = L.vertex(v).path;
                pv.witnesses = std::move(lost_by_parent[v]);
                rep.pruned.push_back(std::move(pv));
            }
        }

        if (rep.finite) {
            return rep;
        }
    }
    if (!rep.consistent) rep.notes.push_back("offspring of equal states disagreed at the last explored level");
    rep.notes.push_back("no stable type set within " + std::to_string(opt.max_levels) + " levels (inconclusive)");
    return rep;
}

RatioMatrix weighted_incidence(const ReducedGraphReport& report) {
    if (!report.consistent) throw Error("InconsistentRepresentatives", "representatives of one type have different offspring");
    if (!report.finite) throw Error("SemanticError", "finite type was not detected");
    int m = report.type_count();
    RatioMatrix r = RatioMatrix::zeros(report.field, m);
    for (int t = 0; t < m; ++t)
        for (const auto& tr : report.transitions[t]) {
            if (tr.to < 1 || tr.to > m) throw Error("InconsistentRepresentatives", "transition to an unknown type");
            r.add(t, tr.to - 1, tr.ratio_exp, tr.count);
        }
    return r;
}

}  // namespace fraxdim
