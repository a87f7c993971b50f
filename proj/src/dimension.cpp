#include <fraxdim/dimension.hpp>
#include <fraxdim/error.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace fraxdim {

RatioMatrix RatioMatrix::zeros(PisotField field, int m) {
    RatioMatrix r;
    r.field = std::move(field);
    r.cells.assign(m, std::vector<std::map<int, long>>(m));
    return r;
}

bool RatioMatrix::empty() const {
    for (const auto& row : cells)
        for (const auto& c : row)
            if (!c.empty()) return false;
    return true;
}

std::vector<std::vector<double>> RatioMatrix::evaluate(double alpha) const {
    double beta = field.beta_approx();
    int m = size();
    std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (const auto& [k, cnt] : cells[i][j]) a[i][j] += static_cast<double>(cnt) * std::pow(beta, -k * alpha);
    return a;
}

RatioMatrix build_incidence(const Gifs& g) {
    RatioMatrix r = RatioMatrix::zeros(g.field, g.vertex_count());
    for (const auto& e : g.edges) r.add(e.src, e.dst, e.map.ratio_exp());
    return r;
}

namespace {

std::vector<std::vector<int>> strong_components(const std::vector<std::vector<double>>& a) {
    int n = static_cast<int>(a.size());
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<char> on(n, 0);
    std::vector<std::vector<int>> comps;
    int counter = 0;
    std::function<void(int)> visit = [&](int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on[v] = 1;
        for (int w = 0; w < n; ++w) {
            if (a[v][w] == 0.0) continue;
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<int> c;
            int w;
            do {
                w = stack.back();
                stack.pop_back();
                on[w] = 0;
                c.push_back(w);
            } while (w != v);
            std::sort(c.begin(), c.end());
            comps.push_back(std::move(c));
        }
    };
    for (int v = 0; v < n; ++v)
        if (index[v] < 0) visit(v);
    std::sort(comps.begin(), comps.end());
    return comps;
}

// Perron root of an irreducible block: power iteration on B + I (primitive), stopped
// once the Collatz-Wielandt bounds are within tol.
double perron_block(const std::vector<std::vector<double>>& b, double tol) {
    int n = static_cast<int>(b.size());
    if (n == 1) return b[0][0];
    std::vector<double> x(n, 1.0 / n), y(n);
    double prev_lo = 0, prev_hi = 0;
    const int cap = 2000000;
    for (int it = 0; it < cap; ++it) {
        double sum = 0, lo = INFINITY, hi = 0;
        for (int i = 0; i < n; ++i) {
            double s = x[i];
            for (int j = 0; j < n; ++j) s += b[i][j] * x[j];
            y[i] = s;
            sum += s;
            double r = s / x[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        if (hi - lo < tol) return 0.5 * (lo + hi) - 1.0;
        for (int i = 0; i < n; ++i) x[i] = y[i] / sum;
        prev_lo = lo;
        prev_hi = hi;
    }
    std::ostringstream os;
    os.precision(17);
    os << "power iteration cap " << cap << " reached; last estimates " << prev_lo - 1.0 << " and " << prev_hi - 1.0;
    throw Error("NoConvergence", os.str());
}

}  // namespace

double spectral_radius(const std::vector<std::vector<double>>& a, double tol) {
    if (!(tol > 0)) throw Error("SemanticError", "tolerance must be positive");
    double best = 0;
    for (const auto& comp : strong_components(a)) {
        std::size_t n = comp.size();
        std::vector<std::vector<double>> b(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) b[i][j] = a[comp[i]][comp[j]];
        best = std::max(best, perron_block(b, tol));
    }
    return best;
}

double spectral_radius(const RatioMatrix& mat, double alpha, double tol) {
    return spectral_radius(mat.evaluate(alpha), tol);
}

DimensionResult solve_dimension(const RatioMatrix& mat, double tol) {
    if (!(tol > 0)) throw Error("SemanticError", "tolerance must be positive");
    if (mat.empty()) throw Error("DegenerateSystem", "matrix has no nonempty cell");
    const double inner = std::max(tol * 1e-3, 1e-15);
    auto lam = [&](double a) { return spectral_radius(mat, a, inner); };
    DimensionResult r;
    double l0 = lam(0.0);
    if (l0 < 1.0 - inner)
        throw Error("DegenerateSystem", "spectral radius at alpha = 0 is below 1; no dimension solves lambda = 1");
    if (std::abs(l0 - 1.0) <= inner) {
        r.alpha = 0;
        r.lambda_at_alpha = l0;
        return r;
    }
    double lo = 0, hi = 1;
    while (lam(hi) > 1.0) {
        lo = hi;
        hi *= 2;
        if (hi > 1e6) throw Error("NoConvergence", "no upper bracket for alpha");
    }
    int it = 0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (lam(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
        ++it;
    }
    r.alpha = 0.5 * (lo + hi);
    r.lambda_at_alpha = lam(r.alpha);
    r.lo = lo;
    r.hi = hi;
    r.iterations = it;
    return r;
}

double moran_dimension(const std::vector<double>& ratios, double tol) {
    if (ratios.empty()) throw Error("SemanticError", "no ratios given");
    for (double r : ratios)
        if (!(r > 0 && r < 1)) throw Error("SemanticError", "ratios must lie in (0, 1)");
    auto sum = [&](double a) {
        double s = 0;
        for (double r : ratios) s += std::pow(r, a);
        return s;
    };
    if (sum(0) <= 1.0) return 0.0;
    double lo = 0, hi = 1;
    while (sum(hi) > 1.0) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (sum(mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double moran_dimension(const std::vector<int>& ratio_exps, const PisotField& field, double tol) {
    if (ratio_exps.empty()) throw Error("SemanticError", "no ratios given");
    std::vector<double> r;
    for (int k : ratio_exps) {
        if (k < 1) throw Error("SemanticError", "ratio exponents must be >= 1");
        r.push_back(std::pow(field.beta_approx(), -k));
    }
    return moran_dimension(r, tol);
}

}  // namespace fraxdim
