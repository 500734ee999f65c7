#pragma once

// Closed-form Euler characteristics from the classification invariants, and
// the polyvector parallelogram / Hochschild data model.

#include <array>
#include <string>
#include <vector>

#include "chase.hpp"
#include "errors.hpp"

namespace polyvec::invariants {

struct FamilyId {
    int rho = 1;   // Picard rank, 1..10
    int index = 1; // position within the rank

    std::string str() const { return std::to_string(rho) + "-" + std::to_string(index); }
    bool operator<(const FamilyId& o) const {
        if (rho != o.rho) return rho < o.rho;
        return index < o.index;
    }
    bool operator==(const FamilyId& o) const { return rho == o.rho && index == o.index; }
};

// number of deformation families per Picard rank
inline int families_in_rank(int rho) {
    static constexpr int counts[] = {0, 17, 36, 31, 13, 3, 1, 1, 1, 1, 1};
    return (rho >= 1 && rho <= 10) ? counts[rho] : 0;
}

inline bool valid_family(const FamilyId& id) {
    return id.index >= 1 && id.index <= families_in_rank(id.rho);
}

struct ClassificationRecord {
    FamilyId id;
    long long c1_cubed = 0;  // anticanonical degree, even, 2..64
    long long h12 = 0;       // Hodge number h^{1,2}
    long long dim_aut0 = 0;  // dim Aut^0 for the generic member
    bool aut_jumps = false;  // "*" marker: h^0(T) jumps in the family
};

inline void validate_record(const ClassificationRecord& rec) {
    if (!valid_family(rec.id)) throw ValidationError(rec.id.str(), "invalid family id");
    if (rec.c1_cubed < 2 || rec.c1_cubed > 64 || rec.c1_cubed % 2 != 0)
        throw ValidationError(rec.id.str(), "c1^3 must be even in [2,64]");
    if (rec.h12 < 0 || rec.dim_aut0 < 0)
        throw ValidationError(rec.id.str(), "negative invariant");
}

// chi(T_X) = c1^3/2 + rho - 18 - h^{1,2}
inline long long chi_tangent(const ClassificationRecord& rec) {
    return rec.c1_cubed / 2 + rec.id.rho - 18 - rec.h12;
}

// chi(wedge^2 T_X) = c1^3 - 18 - rho + h^{1,2}
inline long long chi_wedge2_tangent(const ClassificationRecord& rec) {
    return rec.c1_cubed - 18 - rec.id.rho + rec.h12;
}

// chi(om_X^v) = c1^3/2 + 3; equals pv^{0,3}
inline long long chi_anticanonical(const ClassificationRecord& rec) {
    return rec.c1_cubed / 2 + 3;
}

// h^0(T_X) = dim Aut^0, h^1(T_X) = h^0 - chi(T_X)
inline std::pair<long long, long long> h_tangent(const ClassificationRecord& rec) {
    long long h0 = rec.dim_aut0;
    long long h1 = h0 - chi_tangent(rec);
    if (h1 < 0) throw ValidationError(rec.id.str(), "h1(T) negative: inconsistent record");
    return {h0, h1};
}

// HH_{-3}..HH_3 dimensions from the Hodge diamond
inline std::array<long long, 7> hochschild_homology_dims(const ClassificationRecord& rec) {
    long long middle = 2 + 2 * rec.id.rho;
    return {0, 0, rec.h12, middle, rec.h12, 0, 0};
}

// The six possibly nonzero entries of the polyvector parallelogram.
struct Parallelogram {
    long long pv01 = 0, pv11 = 0, pv02 = 0, pv12 = 0, pv22 = 0, pv03 = 0;

    bool operator==(const Parallelogram& o) const {
        return pv01 == o.pv01 && pv11 == o.pv11 && pv02 == o.pv02 && pv12 == o.pv12 &&
               pv22 == o.pv22 && pv03 == o.pv03;
    }
    std::array<long long, 7> hochschild_cohomology_dims() const {
        return {1, pv01, pv11 + pv02, pv12 + pv03, pv22, 0, 0};
    }
};

// The three Lemma-level identities an expected row must satisfy.
inline bool chi_checks(const ClassificationRecord& rec, const Parallelogram& p,
                       std::array<bool, 3>* detail = nullptr) {
    bool t = (p.pv01 - p.pv11 == chi_tangent(rec));
    bool w = (p.pv02 - p.pv12 + p.pv22 == chi_wedge2_tangent(rec));
    bool a = (p.pv03 == chi_anticanonical(rec));
    if (detail) *detail = {t, w, a};
    return t && w && a;
}

// Assemble from the engine's wedge2 vector (degrees 0..2 known, degree 3 = 0)
// and the record's closed forms; the chi identity is a mandatory postcondition.
inline Parallelogram assemble_parallelogram(const ClassificationRecord& rec,
                                            const exactseq::CohVector& wedge2) {
    if (wedge2.size() < 3) throw Error("wedge2 vector too short");
    for (size_t i = 3; i < wedge2.size(); ++i) {
        if (!wedge2.entries[i].known || wedge2.entries[i].value != 0)
            throw ConsistencyError(rec.id.str() + ": wedge2 cohomology beyond degree 2");
    }
    Parallelogram p;
    auto [h0t, h1t] = h_tangent(rec);
    p.pv01 = h0t;
    p.pv11 = h1t;
    p.pv02 = wedge2.entries[0].value;
    p.pv12 = wedge2.entries[1].value;
    p.pv22 = wedge2.entries[2].value;
    p.pv03 = chi_anticanonical(rec);
    if (!wedge2.entries[0].known || !wedge2.entries[1].known || !wedge2.entries[2].known)
        throw Error(rec.id.str() + ": assemble_parallelogram needs determined entries");
    if (p.pv02 - p.pv12 + p.pv22 != chi_wedge2_tangent(rec))
        throw ConsistencyError(rec.id.str() + ": wedge2 chi identity failed");
    return p;
}

} // namespace polyvec::invariants
