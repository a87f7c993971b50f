#include "support.hpp"

#include <fraxdim/dimension.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fraxdim;
using namespace fraxdim::testing;

namespace {

using Mat = std::vector<std::vector<double>>;

// Characteristic polynomial by Faddeev-LeVerrier, coefficients from t^n down.
std::vector<double> char_poly(const Mat& a) {
    int n = static_cast<int>(a.size());
    std::vector<double> c(n + 1, 0.0);
    c[0] = 1;
    Mat m(n, std::vector<double>(n, 0.0));
    for (int k = 1; k <= n; ++k) {
        Mat am(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int l = 0; l < n; ++l) s += a[i][l] * m[l][j];
                am[i][j] = s + (i == j ? c[k - 1] : 0.0);
            }
        m = am;
        double tr = 0;
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
        c[k] = -tr / k;
    }
    return c;
}

double horner(const std::vector<double>& c, double t) {
    double v = 0;
    for (double x : c) v = v * t + x;
    return v;
}

// Largest real root: scan down from the max row sum to the first sign change, then bisect.
double largest_root(const Mat& a) {
    auto c = char_poly(a);
    double hi = 0;
    for (const auto& row : a) {
        double s = 0;
        for (double x : row) s += x;
        hi = std::max(hi, s);
    }
    hi += 1;
    double step = hi / 20000, lo = hi;
    while (horner(c, lo) > 0) lo -= step;
    hi = lo + step;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (horner(c, mid) > 0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double newton_moran(const std::vector<double>& r) {
    double a = 0.5;
    for (int it = 0; it < 100; ++it) {
        double f = -1, df = 0;
        for (double x : r) {
            f += std::pow(x, a);
            df += std::pow(x, a) * std::log(x);
        }
        a -= f / df;
    }
    return a;
}

}  // namespace

TEST_CASE("incidence of the gasket") {
    Gifs g = scene_gifs("cylinder_sierpinski");
    RatioMatrix m = build_incidence(g);
    std::vector<std::vector<int>> pattern{{0, 0, 0, 1, 1, 1}, {1, 1, 1, 0, 0, 0}, {1, 1, 1, 0, 0, 0},
                                          {0, 0, 0, 1, 1, 1}, {0, 0, 0, 1, 1, 1}, {1, 1, 1, 0, 0, 0}};
    CHECK(m == ratio_matrix(pattern));

    RatioMatrix moran = build_incidence(scene_gifs("moran"));
    REQUIRE(moran.size() == 1);
    CHECK(moran.cells[0][0] == std::map<int, long>{{1, 2}});
    CHECK(moran.evaluate(1.0) == Mat{{1.0}});
}

TEST_CASE("spectral radius against closed forms") {
    const double tol = 1e-12;
    RatioMatrix g = build_incidence(scene_gifs("cylinder_sierpinski"));
    CHECK(std::abs(spectral_radius(g, 0.0, tol) - 3.0) < 1e-10);
    CHECK(std::abs(spectral_radius(ratio_matrix(cylinder_type_rows()), 0.0, tol) - (2 + std::sqrt(2.0))) < 1e-10);
    CHECK(std::abs(spectral_radius(Mat{{1, 1}, {1, 0}}, tol) - (1 + std::sqrt(5.0)) / 2) < 1e-10);
    // Reducible: the larger diagonal block wins.
    CHECK(std::abs(spectral_radius(Mat{{2, 5}, {0, 3}}, tol) - 3.0) < 1e-10);
    CHECK(spectral_radius(Mat{{0, 1}, {0, 0}}, tol) == 0.0);
    CHECK(kind_of([] { spectral_radius(Mat{{1}}, 0.0); }) == "SemanticError");
}

TEST_CASE("spectral radius against the characteristic polynomial") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int n = 1; n <= 4; ++n)
        for (int it = 0; it < 50; ++it) {
            Mat a(n, std::vector<double>(n));
            for (auto& row : a)
                for (auto& x : row) x = u(rng);
            CAPTURE(n);
            CHECK(std::abs(spectral_radius(a, 1e-13) - largest_root(a)) < 1e-9);
        }
}

TEST_CASE("spectral radius properties") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(0, 3);
    const double tol = 1e-12;
    for (int it = 0; it < 40; ++it) {
        int n = 2 + it % 5;
        Mat a(n, std::vector<double>(n));
        for (auto& row : a)
            for (auto& x : row) x = d(rng);
        double r = spectral_radius(a, tol);

        Mat twice = a, bigger = a, perm(n, std::vector<double>(n));
        for (auto& row : twice)
            for (auto& x : row) x *= 2;
        bigger[it % n][(it + 1) % n] += 1;
        std::vector<int> p(n);
        for (int i = 0; i < n; ++i) p[i] = (i * 3 + 1) % n;
        std::vector<int> seen(n, 0);
        bool is_perm = true;
        for (int x : p) is_perm &= !seen[x]++;
        if (!is_perm)
            for (int i = 0; i < n; ++i) p[i] = n - 1 - i;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) perm[p[i]][p[j]] = a[i][j];

        CHECK(std::abs(spectral_radius(twice, tol) - 2 * r) < 1e-8);
        CHECK(spectral_radius(bigger, tol) >= r - 1e-9);
        CHECK(std::abs(spectral_radius(perm, tol) - r) < 1e-8);
    }
}

TEST_CASE("dimension equation") {
    const double tol = 1e-11;
    auto g = solve_dimension(build_incidence(scene_gifs("cylinder_sierpinski")), tol);
    CHECK(std::abs(g.alpha - std::log(3.0) / std::log(2.0)) < 1e-9);
    CHECK(std::abs(g.lambda_at_alpha - 1.0) < 1e-9);
    CHECK(g.lo <= g.alpha);
    CHECK(g.alpha <= g.hi);

    auto c = solve_dimension(ratio_matrix(cylinder_type_rows()), tol);
    CHECK(std::abs(c.alpha - std::log2(2 + std::sqrt(2.0))) < 1e-9);
    CHECK(std::abs(c.alpha - 1.7715533) < 1e-7);

    CHECK(kind_of([] { solve_dimension(RatioMatrix::zeros(PisotField::two(), 3), 1e-9); }) == "DegenerateSystem");
    RatioMatrix nil = RatioMatrix::zeros(PisotField::two(), 2);
    nil.add(0, 1, 1);
    CHECK(kind_of([&] { solve_dimension(nil, 1e-9); }) == "DegenerateSystem");

    RatioMatrix one = RatioMatrix::zeros(PisotField::two(), 1);
    one.add(0, 0, 1);
    CHECK(solve_dimension(one, 1e-9).alpha == 0.0);
}

TEST_CASE("similarity dimension") {
    auto two = PisotField::two();
    CHECK(std::abs(moran_dimension({1, 1}, two, 1e-12) - 1.0) < 1e-10);
    CHECK(std::abs(moran_dimension({1, 1, 1}, two, 1e-12) - std::log(3.0) / std::log(2.0)) < 1e-10);
    CHECK(std::abs(moran_dimension({0.5, 1.0 / 3}, 1e-12) - newton_moran({0.5, 1.0 / 3})) < 1e-10);
    CHECK(std::abs(newton_moran({0.5, 1.0 / 3}) - 0.78788) < 1e-5);
    // Golden ratio pair: rho + rho^2 = 1, so the dimension is 1.
    CHECK(std::abs(moran_dimension({1, 2}, PisotField::golden(), 1e-12) - 1.0) < 1e-10);
    CHECK(kind_of([&] { moran_dimension(std::vector<int>{0}, two, 1e-9); }) == "SemanticError");
    CHECK(kind_of([] { moran_dimension(std::vector<double>{1.5}, 1e-9); }) == "SemanticError");
}

TEST_CASE("lambda strictly decreases in alpha on the fixture matrices") {
    std::vector<RatioMatrix> mats{ratio_matrix(cylinder_type_rows())};
    for (const auto& name : positive_scenes()) mats.push_back(build_incidence(scene_gifs(name)));
    for (const auto& m : mats) {
        double prev = spectral_radius(m, 0.0, 1e-13);
        for (int i = 1; i <= 30; ++i) {
            double next = spectral_radius(m, 0.1 * i, 1e-13);
            CHECK(next < prev);
            prev = next;
        }
    }
}
