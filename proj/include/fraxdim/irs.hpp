#pragma once

#include <fraxdim/gifs.hpp>

#include <string>
#include <vector>

namespace fraxdim {

struct ChartSpace {
    int dim = 1;
    Periods periods;                 // per axis
    std::vector<std::string> units;  // "1" or "pi"; only the renderer looks at these
    Box E0;
};

// A box with per-face closure flags; lo == hi with both faces closed is a slice.
struct PieceDomain {
    Box box;
    std::vector<bool> lo_closed, hi_closed;

    bool contains(const Point& p) const;
    bool degenerate() const { return box.degenerate(); }
};

struct Branch {
    Similitude map;            // chart formula as declared
    std::vector<long> wrap;    // integer number of periods added per axis
    Similitude lifted;         // map followed by the wrap, the one actually used
};

struct Piece {
    enum class Kind { H, J };
    Kind kind = Kind::J;
    int index = 1;  // i in H_t^i / J_t^i
    PieceDomain domain;
    std::vector<Branch> branches;

    std::string name() const { return (kind == Kind::H ? "H" : "J") + std::to_string(index); }
};

struct Relation {
    std::vector<Piece> pieces;
};

struct IrsSpec {
    PisotField field = PisotField::two();
    ChartSpace space;
    std::vector<Relation> relations;
    bool declared_condition_c = false;
    // Optional explicit order of candidate vertex labels for the assembled GIFS.
    std::vector<std::string> vertex_order;
};

struct Violation {
    std::string kind;  // e.g. "non-contractive branch", "cover gap", "straddling image"
    std::string where;
    std::string detail;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
    void add(std::string kind, std::string where, std::string detail = {}) {
        ok = false;
        violations.push_back({std::move(kind), std::move(where), std::move(detail)});
    }
    std::string summary() const;
};

std::string branch_name(int t, const Piece& p, int l);

// Box union over-approximating E_depth under regular-closure semantics (slices such as
// the multivalued seams of the cylinder examples have no area and are dropped).
RegionSet iterate_attractor(const IrsSpec& spec, int depth, std::size_t max_boxes = 2000000);

ValidationReport validate_decomposition(const IrsSpec& spec);
ValidationReport validate_containments(const IrsSpec& spec);

struct AssemblyResult {
    Gifs gifs;
    int candidate_count = 0;  // vertex candidates before simplification
    int raw_edge_count = 0;
    int k0 = 1;  // the GIFS is associated on E_k0
};
AssemblyResult assemble_gifs_detailed(const IrsSpec& spec);
Gifs assemble_gifs(const IrsSpec& spec);

struct AssociationReport {
    bool ok = true;
    int checked_up_to = 0;
    int first_failure = 0;  // q, or 0
};
// Compares E_{q+k0} with the union of f_e(W_j) over paths of length q, for q = 1..max_q.
AssociationReport verify_association(const IrsSpec& spec, const Gifs& g, int max_q, int k0 = 1);

}  // namespace fraxdim
