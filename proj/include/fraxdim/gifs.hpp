#pragma once

#include <fraxdim/algebra.hpp>

#include <optional>
#include <string>
#include <vector>

namespace fraxdim {

using Point = std::vector<AlgebraicNumber>;

// (R x)_i = sign[i] * x[perm[i]]
struct SignedPerm {
    std::vector<int> perm;
    std::vector<int> sign;

    static SignedPerm identity(int n);
    int dim() const { return static_cast<int>(perm.size()); }
    SignedPerm operator*(const SignedPerm& o) const;  // (this * o) x = this(o(x))
    SignedPerm inverse() const;
    bool operator==(const SignedPerm& o) const = default;
    auto operator<=>(const SignedPerm& o) const = default;
    // Flattened code: sign * (perm + 1) per row.
    std::vector<int> code() const;
};

// x -> beta^{-ratio_exp} * R x + trans. ratio_exp >= 1 for edge maps; relative maps
// built by the finite type machinery may carry any integer exponent.
class Similitude {
public:
    Similitude(PisotField field, int ratio_exp, SignedPerm orth, Point trans);
    static Similitude identity(const PisotField& field, int dim);

    const PisotField& field() const { return field_; }
    int dim() const { return orth_.dim(); }
    int ratio_exp() const { return k_; }
    const SignedPerm& orth() const { return orth_; }
    const Point& trans() const { return b_; }
    AlgebraicNumber ratio() const { return field_.beta_pow(-k_); }
    double ratio_approx() const;

    Point apply(const Point& p) const;
    // this o other
    Similitude compose(const Similitude& other) const;
    Similitude inverse() const;
    Similitude translated(const Point& shift) const;

    bool operator==(const Similitude& o) const;
    bool operator!=(const Similitude& o) const { return !(*this == o); }
    // Lexicographic on (ratio exponent, orth code, translation coefficients).
    static int compare(const Similitude& a, const Similitude& b);
    std::size_t hash() const noexcept;
    std::string to_string() const;

private:
    PisotField field_;
    int k_;
    SignedPerm orth_;
    Point b_;
};

Point similitude_apply(const Similitude& f, const Point& p);

// Closed box; lo == hi on an axis is allowed for piece domains, not for vertices.
struct Box {
    Point lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool degenerate() const;
    Point center() const;
    std::string to_string() const;
    bool operator==(const Box& o) const { return lo == o.lo && hi == o.hi; }
};

using RegionSet = std::vector<Box>;

// Per-axis period; empty optional for a non-periodic axis.
using Periods = std::vector<std::optional<AlgebraicNumber>>;

Box image(const Similitude& f, const Box& b);
RegionSet image(const Similitude& f, const RegionSet& r);
std::optional<Box> intersect(const Box& a, const Box& b);
bool closed_box_contains(const Box& outer, const Box& inner);
// Interiors intersect, on the quotient space described by periods.
bool open_overlap(const Box& a, const Box& b, const Periods& periods);
bool open_overlap(const RegionSet& a, const RegionSet& b, const Periods& periods);
// Containment of the closed box in the union of the nondegenerate members (with periodic copies).
bool union_contains(const RegionSet& u, const Box& b, const Periods& periods);
bool region_subset(const RegionSet& a, const RegionSet& b, const Periods& periods);
// Equality of regular closures: degenerate pieces are ignored on both sides.
bool region_equal(const RegionSet& a, const RegionSet& b, const Periods& periods);
// Drops degenerate boxes, exact duplicates and boxes inside another single box.
RegionSet normalize(RegionSet r);
Box hull(const RegionSet& r);

struct GifsVertex {
    std::string label;
    RegionSet W;  // compact set; U is the union of the open box interiors
};

struct GifsEdge {
    int src = 0;  // 0-based; f maps W_dst into W_src
    int dst = 0;
    Similitude map;
    std::string label;
};

struct Gifs {
    PisotField field = PisotField::two();
    int dim = 1;
    Periods periods;
    std::vector<GifsVertex> vertices;
    std::vector<GifsEdge> edges;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    void validate() const;  // index ranges and field/dimension agreement
};

struct DirectedPath {
    std::vector<int> edges;
    Similitude map;
    int src = 0, dst = 0;
    int length() const { return static_cast<int>(edges.size()); }
};

DirectedPath compose_path(const Gifs& g, const std::vector<int>& edges);
std::vector<DirectedPath> enumerate_paths(const Gifs& g, int q);
bool is_strongly_connected(const Gifs& g);

struct InvariantReport {
    bool holds = true;
    std::vector<int> failing_edges;
};
InvariantReport check_invariant_family(const Gifs& g);

struct GoscReport {
    bool holds = true;
    std::vector<std::pair<int, int>> violations;  // unordered pairs, first < second
};
bool sibling_overlap(const Gifs& g, int e1, int e2);
GoscReport check_gosc(const Gifs& g);

Gifs minimal_simplify(const Gifs& g);
// Union of f_e(W_j) over all paths of length q, normalized.
RegionSet path_union(const Gifs& g, int q);

}  // namespace fraxdim
