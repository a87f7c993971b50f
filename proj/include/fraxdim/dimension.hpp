#pragma once

#include <fraxdim/gifs.hpp>

#include <map>
#include <vector>

namespace fraxdim {

// Cell (i, j) is a multiset of ratio exponents k, each standing for a term beta^{-k}.
struct RatioMatrix {
    PisotField field = PisotField::two();
    std::vector<std::vector<std::map<int, long>>> cells;

    static RatioMatrix zeros(PisotField field, int m);
    int size() const { return static_cast<int>(cells.size()); }
    void add(int i, int j, int exp, long count = 1) { cells[i][j][exp] += count; }
    bool empty() const;
    std::vector<std::vector<double>> evaluate(double alpha) const;
    bool operator==(const RatioMatrix& o) const { return field == o.field && cells == o.cells; }
};

struct DimensionResult {
    double alpha = 0;
    double lambda_at_alpha = 0;
    double lo = 0, hi = 0;
    int iterations = 0;
};

RatioMatrix build_incidence(const Gifs& g);

double spectral_radius(const std::vector<std::vector<double>>& a, double tol);
double spectral_radius(const RatioMatrix& mat, double alpha, double tol);
DimensionResult solve_dimension(const RatioMatrix& mat, double tol);
double moran_dimension(const std::vector<int>& ratio_exps, const PisotField& field, double tol);
// Same equation for arbitrary real ratios in (0, 1).
double moran_dimension(const std::vector<double>& ratios, double tol);

}  // namespace fraxdim
