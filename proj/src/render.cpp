#include <fraxdim/parallel.hpp>
#include <fraxdim/render.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace fraxdim {

std::size_t RasterImage::count() const { return static_cast<std::size_t>(std::count(on.begin(), on.end(), 1)); }

double unit_factor(const std::string& unit) {
    auto number = [&](const std::string& tok) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::logic_error&) {
            used = std::string::npos;
        }
        if (used != tok.size()) throw Error("SemanticError", "unknown unit '" + unit + "'");
        return v;
    };
    double f = 1;
    std::size_t start = 0;
    while (start <= unit.size()) {
        std::size_t end = unit.find('*', start);
        std::string tok = unit.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (tok == "pi") {
            f *= std::numbers::pi;
        } else if (tok.rfind("sqrt", 0) == 0) {
            f *= std::sqrt(number(tok.substr(4)));
        } else if (!tok.empty()) {
            f *= number(tok);
        }
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return f;
}

namespace {

struct FMap {
    double r = 1;
    std::vector<int> perm, sign;
    std::vector<double> b;

    static FMap of(const Similitude& s) {
        FMap m;
        m.r = s.ratio_approx();
        m.perm = s.orth().perm;
        m.sign = s.orth().sign;
        for (const auto& x : s.trans()) m.b.push_back(x.approx());
        return m;
    }
    // this o o
    FMap compose(const FMap& o) const {
        FMap m;
        std::size_t n = b.size();
        m.r = r * o.r;
        m.perm.resize(n);
        m.sign.resize(n);
        m.b.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            m.perm[i] = o.perm[perm[i]];
            m.sign[i] = sign[i] * o.sign[perm[i]];
            m.b[i] = r * sign[i] * o.b[perm[i]] + b[i];
        }
        return m;
    }
};

struct FBox {
    std::vector<double> lo, hi;
};

FBox apply(const FMap& m, const FBox& x) {
    FBox y;
    for (std::size_t i = 0; i < m.b.size(); ++i) {
        double a = m.r * m.sign[i] * x.lo[m.perm[i]] + m.b[i];
        double c = m.r * m.sign[i] * x.hi[m.perm[i]] + m.b[i];
        y.lo.push_back(std::min(a, c));
        y.hi.push_back(std::max(a, c));
    }
    return y;
}

struct Canvas {
    int w, h, dim;
    double x0, x1, y0, y1;
    std::vector<double> period;  // 0 on non-periodic axes
    std::vector<std::uint8_t> px;

    void fill_span(double lo, double hi, double a0, double a1, int n, int& c0, int& c1) const {
        double d = (a1 - a0) / n, tol = 1e-12 * std::max(1.0, std::abs(a1 - a0));
        c0 = static_cast<int>(std::ceil((lo - a0 - tol) / d - 0.5));
        c1 = static_cast<int>(std::floor((hi - a0 + tol) / d - 0.5));
        if (c0 > c1) {
            // Thinner than a pixel: light the one holding the midpoint.
            c0 = c1 = static_cast<int>(std::floor((0.5 * (lo + hi) - a0) / d));
        }
        c0 = std::max(c0, 0);
        c1 = std::min(c1, n - 1);
    }

    void draw_at(double xl, double xh, double yl, double yh) {
        if (xh < x0 || xl > x1) return;
        int c0, c1, r0 = 0, r1 = h - 1;
        fill_span(xl, xh, x0, x1, w, c0, c1);
        if (dim > 1) {
            if (yh < y0 || yl > y1) return;
            int k0, k1;
            fill_span(yl, yh, y0, y1, h, k0, k1);
            r0 = h - 1 - k1;
            r1 = h - 1 - k0;
        }
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c) px[static_cast<std::size_t>(r) * w + c] = 1;
    }

    void draw(const FBox& b) {
        std::vector<double> sx{0.0}, sy{0.0};
        if (period[0] > 0) sx = {0.0, -period[0], period[0]};
        if (dim > 1 && period[1] > 0) sy = {0.0, -period[1], period[1]};
        for (double a : sx)
            for (double c : sy) {
                double xl = b.lo[0] + a, xh = b.hi[0] + a;
                // Skip shifted copies that only touch the window edge.
                if (a != 0 && (xh <= x0 + 1e-12 || xl >= x1 - 1e-12)) continue;
                double yl = dim > 1 ? b.lo[1] + c : 0, yh = dim > 1 ? b.hi[1] + c : 0;
                if (c != 0 && (yh <= y0 + 1e-12 || yl >= y1 - 1e-12)) continue;
                draw_at(xl, xh, yl, yh);
            }
    }
};

}  // namespace

RasterImage render_gifs(const Gifs& g, const ChartSpace& space, int depth, int width, int height,
                        std::size_t path_cap) {
    if (depth < 0) throw Error("SemanticError", "depth must be >= 0");
    if (width < 1 || height < 1) throw Error("SemanticError", "image size must be positive");
    g.validate();
    int m = g.vertex_count();

    // Path count by dynamic programming, so the cap is checked before any work.
    std::vector<double> ways(m, 1.0);
    for (int d = 0; d < depth; ++d) {
        std::vector<double> next(m, 0.0);
        for (const auto& e : g.edges) next[e.src] += ways[e.dst];
        ways = std::move(next);
    }
    double total = 0;
    for (double w : ways) total += w;
    if (total > static_cast<double>(path_cap))
        throw Error("DepthTooLarge", std::to_string(static_cast<long long>(total)) + " paths at depth " +
                                         std::to_string(depth) + " exceed the cap " + std::to_string(path_cap));

    Canvas base;
    base.w = width;
    base.h = height;
    base.dim = g.dim;
    base.x0 = space.E0.lo[0].approx();
    base.x1 = space.E0.hi[0].approx();
    base.y0 = g.dim > 1 ? space.E0.lo[1].approx() : 0;
    base.y1 = g.dim > 1 ? space.E0.hi[1].approx() : 1;
    for (int a = 0; a < std::min(g.dim, 2); ++a)
        base.period.push_back(a < static_cast<int>(space.periods.size()) && space.periods[a] ? space.periods[a]->approx() : 0.0);
    if (base.period.size() < 2) base.period.push_back(0.0);
    base.px.assign(static_cast<std::size_t>(width) * height, 0);

    std::vector<std::vector<FBox>> W(m);
    for (int j = 0; j < m; ++j)
        for (const auto& b : g.vertices[j].W) {
            FBox f;
            for (int a = 0; a < g.dim; ++a) {
                f.lo.push_back(b.lo[a].approx());
                f.hi.push_back(b.hi[a].approx());
            }
            W[j].push_back(f);
        }
    std::vector<FMap> fm;
    std::vector<std::vector<int>> out(m);
    for (int e = 0; e < g.edge_count(); ++e) {
        fm.push_back(FMap::of(g.edges[e].map));
        out[g.edges[e].src].push_back(e);
    }

    RasterImage img;
    img.width = width;
    img.height = height;
    img.x0 = base.x0;
    img.x1 = base.x1;
    img.y0 = base.y0;
    img.y1 = base.y1;

    if (depth == 0) {
        for (int j = 0; j < m; ++j)
            for (const auto& b : W[j]) base.draw(b);
        img.on = std::move(base.px);
        return img;
    }

    // One task per first edge; each draws into its own canvas, merged by OR afterwards.
    std::vector<Canvas> canv(g.edge_count(), base);
    parallel_for(static_cast<std::size_t>(g.edge_count()), [&](std::size_t e0) {
        Canvas& cv = canv[e0];
        std::vector<FMap> stack{fm[e0]};
        std::vector<int> at{g.edges[e0].dst};
        std::vector<std::size_t> next{0};
        while (!stack.empty()) {
            if (static_cast<int>(stack.size()) == depth) {
                for (const auto& b : W[at.back()]) cv.draw(apply(stack.back(), b));
                stack.pop_back();
                at.pop_back();
                next.pop_back();
                continue;
            }
            std::size_t& k = next.back();
            const auto& outs = out[at.back()];
            if (k == outs.size()) {
                stack.pop_back();
                at.pop_back();
                next.pop_back();
                continue;
            }
            int e = outs[k++];
            stack.push_back(stack.back().compose(fm[e]));
            at.push_back(g.edges[e].dst);
            next.push_back(0);
        }
    });
    img.on.assign(base.px.size(), 0);
    for (const auto& cv : canv)
        for (std::size_t i = 0; i < img.on.size(); ++i) img.on[i] |= cv.px[i];
    return img;
}

RasterImage render_attractor(const SceneConfig& cfg, int depth, int width, int height) {
    // Scene depth counts iterations of the relations; the GIFS lags them by k0.
    int d = depth >= 0 ? depth : cfg.render.depth;
    Gifs g;
    if (cfg.irs) {
        auto a = assemble_gifs_detailed(*cfg.irs);
        g = std::move(a.gifs);
        d -= a.k0;
        if (d < 0) {
            g.vertices = {{"E0", {cfg.space.E0}}};
            g.edges.clear();
            d = 0;
        }
    } else {
        g = *cfg.gifs;
    }
    int w = width > 0 ? width : cfg.render.width;
    int h = height > 0 ? height : cfg.render.height;
    if (h <= 0) {
        if (cfg.space.dim == 1) {
            h = 16;
        } else {
            double ex = (cfg.space.E0.hi[0] - cfg.space.E0.lo[0]).approx() * unit_factor(cfg.space.units[0]);
            double ey = (cfg.space.E0.hi[1] - cfg.space.E0.lo[1]).approx() * unit_factor(cfg.space.units[1]);
            h = std::max(1, static_cast<int>(std::lround(w * ey / ex)));
        }
    }
    return render_gifs(g, cfg.space, d, w, h, cfg.render.path_cap);
}

std::string ppm_bytes(const RasterImage& img) {
    std::string s = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    s.reserve(s.size() + img.on.size() * 3);
    for (auto v : img.on) {
        char c = v ? 0 : static_cast<char>(255);
        s.append(3, c);
    }
    return s;
}

void write_ppm(const RasterImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoError", "cannot write " + path);
    out << ppm_bytes(img);
}

}  // namespace fraxdim
