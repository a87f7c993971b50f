#pragma once

#include <fraxdim/dimension.hpp>
#include <fraxdim/error.hpp>
#include <fraxdim/gifs.hpp>

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fraxdim {

struct PisotReport {
    bool ok = true;
    int group_order = 0;            // order of the group generated by the orthogonal parts
    std::vector<Rational> lattice;  // r_i per axis
    std::vector<std::string> notes;
};
PisotReport check_pisot_hypotheses(const Gifs& g);

struct FtcVertex {
    Similitude map;
    int i = 0, j = 0, level = 0;
    std::vector<int> path;                     // first path found (lexicographic), 0-based edges
    std::vector<std::pair<int, int>> parents;  // (edge, parent vertex)
    int reduced_parent = -1;                   // smallest (edge, parent) pair
    int reduced_edge = -1;
};

// (j' , tau) entries with tau = f_v^{-1} o f_u, sorted; owner_j is -1 for sibling forms.
struct NeighborhoodForm {
    int owner_j = -1;
    std::vector<std::pair<int, Similitude>> members;

    bool operator==(const NeighborhoodForm& o) const;
    std::size_t hash() const noexcept;
};

// Vertices (f_e, i, j, k) for the all-words index scheme, deduplicated on exact map equality.
class FtcLevels {
public:
    explicit FtcLevels(const Gifs& g);
    void generate_next();
    int depth() const { return static_cast<int>(levels_.size()) - 1; }
    const std::vector<int>& level(int k) const { return levels_.at(k); }
    const FtcVertex& vertex(int v) const { return verts_.at(v); }
    std::size_t vertex_total() const { return verts_.size(); }
    const std::vector<int>& reduced_children(int v) const { return children_.at(v); }
    const Gifs& gifs() const { return g_; }
    const RegionSet& image_of(int v) const { return images_.at(v); }

    // Same level, same source, overlapping open images; v excluded.
    std::vector<int> neighborhood(int v) const;
    NeighborhoodForm literal_form(int v) const;
    // Overlaps among the reduced children of v's reduced parent.
    NeighborhoodForm sibling_form(int v) const;

private:
    struct Grid;
    const Grid& grid(int k) const;
    bool overlapping(int a, int b) const;

    const Gifs& g_;
    std::vector<FtcVertex> verts_;
    std::vector<RegionSet> images_;
    std::vector<std::vector<double>> flo_, fhi_;  // float hulls for bucketing
    std::vector<std::vector<int>> levels_;
    std::vector<std::vector<int>> children_;
    mutable std::vector<std::shared_ptr<const Grid>> grids_;
};

struct RemovedEdge {
    std::vector<int> removed_path;  // first path of the parent + the dropped edge
    std::vector<int> kept_path;     // reduced path of the same vertex
};

struct PrunedVertex {
    std::vector<int> path;
    // Each offspring path it lost, with the path that kept the (equal) composed map.
    std::vector<std::pair<std::vector<int>, std::vector<int>>> witnesses;
};

struct Transition {
    int to = 0;  // type id, 1-based
    int ratio_exp = 0;
    long count = 0;
};

struct NeighborhoodType {
    int id = 0;
    int first_level = 0;
    std::vector<int> representative;  // path of the first representative found
    int source = 0, target = 0;
    int members = 0;                  // neighborhood size of the representative, owner included
};

struct ReducedGraphReport {
    PisotField field = PisotField::two();
    std::vector<NeighborhoodType> types;
    std::vector<std::vector<Transition>> transitions;  // index = id - 1
    std::vector<RemovedEdge> removed_edges;            // levels <= witness_levels
    std::vector<PrunedVertex> pruned;
    std::size_t removed_total = 0, pruned_total = 0;
    bool finite = false;
    bool consistent = true;
    int levels_explored = 0;
    int stable_after = 0;  // first level that brought no new type
    int state_count = 0;   // distinct (neighborhood, sibling) forms before refinement
    std::size_t vertices = 0;
    std::vector<std::string> notes;

    int type_count() const { return static_cast<int>(types.size()); }
};

struct FtcOptions {
    int max_levels = 8;
    bool require_pisot = true;  // false downgrades a failed Pisot check to a note
    std::size_t vertex_cap = 4000000;
    int witness_levels = 3;
};

class LevelCapExceeded : public Error {
public:
    LevelCapExceeded(std::string what, ReducedGraphReport partial)
        : Error("LevelCapExceeded", std::move(what)), partial_(std::move(partial)) {}
    const ReducedGraphReport& partial() const { return partial_; }

private:
    ReducedGraphReport partial_;
};

ReducedGraphReport detect_finite_type(const Gifs& g, const FtcOptions& opt = {});
RatioMatrix weighted_incidence(const ReducedGraphReport& report);

std::string path_string(const std::vector<int>& path);  // "e6e8", 1-based

}  // namespace fraxdim
