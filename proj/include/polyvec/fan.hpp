#pragma once

// Complete fans with ray/cone data, torus-invariant divisors and the divisor
// class lattice.  Maximal cones are usually simplicial (size d); the loader
// also accepts full-dimensional non-simplicial cones because one bundled
// model (the M(2,8) key variety) is printed that way in its source.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace polyvec::toric {

struct TorusDivisor {
    ZVector coeffs; // a_rho per ray
};

struct DivisorClassLattice {
    int class_rank = 0;
    ZMatrix projection; // class_rank x nrays, kernel = image of M
};

struct Fan {
    int dim = 0;
    ZMatrix rays;                      // primitive integer vectors
    std::vector<std::vector<int>> max_cones; // ray index sets, size >= dim
    DivisorClassLattice lattice;

    int nrays() const { return (int)rays.size(); }
    bool simplicial() const {
        for (const auto& c : max_cones)
            if ((int)c.size() != dim) return false;
        return true;
    }
};

inline TorusDivisor anticanonical(const Fan& fan) {
    return TorusDivisor{ZVector(fan.nrays(), 1)};
}

namespace detail {

inline ZMatrix rays_of(const Fan& fan, const std::vector<int>& idx) {
    ZMatrix m;
    for (int i : idx) m.push_back(fan.rays[i]);
    return m;
}

// Facets of cone(rays): each is recorded as (inner normal, ray index subset).
struct Facet {
    ZVector normal; // primitive, >= 0 on the cone, = 0 exactly on the facet
    std::vector<int> ray_set;
};

inline ZVector primitive(ZVector v) {
    i64 g = 0;
    for (i64 x : v) g = gcd_i64(g, x);
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

inline std::vector<Facet> cone_facets(const Fan& fan, const std::vector<int>& cone) {
    int d = fan.dim;
    std::vector<Facet> facets;
    std::set<ZVector> seen;
    // candidate hyperplanes: spans of (d-1)-subsets of the cone's rays
    std::vector<int> subset;
    std::function<void(size_t)> rec = [&](size_t start) {
        if ((int)subset.size() == d - 1) {
            QMatrix m;
            for (int i : subset) {
                std::vector<Rat> row;
                for (i64 v : fan.rays[i]) row.push_back(Rat(v));
                m.push_back(row);
            }
            auto ker = kernel_q(m);
            if (ker.size() != 1) return; // not a hyperplane
            ZVector n(d);
            i64 lcm = 1;
            for (const auto& r : ker[0]) lcm = lcm / gcd_i64(lcm, r.den) * r.den;
            for (int i = 0; i < d; ++i) n[i] = ker[0][i].num * (lcm / ker[0][i].den);
            n = primitive(n);
            // orient: all cone rays on >= side
            int sign = 0;
            bool ok = true;
            std::vector<int> on_facet;
            for (int i : cone) {
                i64 dot = 0;
                for (int j = 0; j < d; ++j) dot += n[j] * fan.rays[i][j];
                if (dot == 0) on_facet.push_back(i);
                else if (dot > 0) { if (sign < 0) { ok = false; break; } sign = 1; }
                else { if (sign > 0) { ok = false; break; } sign = -1; }
            }
            if (ok && sign != 0) {
                if (sign < 0)
                    for (auto& x : n) x = -x;
                std::sort(on_facet.begin(), on_facet.end());
                if ((int)on_facet.size() >= d - 1 && seen.insert(n).second)
                    facets.push_back(Facet{n, on_facet});
            }
            return;
        }
        for (size_t i = start; i < cone.size(); ++i) {
            subset.push_back(cone[i]);
            rec(i + 1);
            subset.pop_back();
        }
    };
    rec(0);
    return facets;
}

inline bool point_in_cone(const Fan& fan, const std::vector<int>& cone,
                          const std::vector<Facet>& facets, const ZVector& v) {
    int d = fan.dim;
    // v must lie in the span (always full-dim here) and inside all facets
    for (const auto& f : facets) {
        i64 dot = 0;
        for (int j = 0; j < d; ++j) dot += f.normal[j] * v[j];
        if (dot < 0) return false;
    }
    // also check v in the linear span of the cone (full-dimensional: skip)
    (void)cone;
    return true;
}

} // namespace detail

// Structural validation: primitive rays, full-dimensional strongly convex
// cones, ridge pairing, and sampled support coverage.  Throws IncompleteFan
// or ValidationError.
inline void validate_fan(const Fan& fan, const std::string& id = "fan") {
    int d = fan.dim;
    if (d <= 0) throw ValidationError(id, "dimension must be positive");
    if (d == 1) {
        std::set<ZVector> rays(fan.rays.begin(), fan.rays.end());
        if (rays != std::set<ZVector>{{1}, {-1}})
            throw IncompleteFan(id + ": complete 1-dim fan needs rays +1 and -1");
        return;
    }
    for (const auto& r : fan.rays) {
        if ((int)r.size() != d) throw ValidationError(id, "ray arity");
        i64 g = 0;
        bool zero = true;
        for (i64 v : r) {
            g = gcd_i64(g, v);
            zero &= (v == 0);
        }
        if (zero || g != 1) throw ValidationError(id, "ray not primitive");
    }
    std::map<std::vector<int>, int> wall_count; // facet ray set -> #cones sharing it
    std::vector<std::vector<detail::Facet>> all_facets;
    for (const auto& cone : fan.max_cones) {
        if ((int)cone.size() < d) throw ValidationError(id, "cone has too few rays");
        for (int i : cone)
            if (i < 0 || i >= fan.nrays()) throw ValidationError(id, "cone ray index out of range");
        if (rank_z(detail::rays_of(fan, cone)) != d)
            throw ValidationError(id, "maximal cone not full-dimensional");
        // strong convexity: no nonzero v with both v, -v in cone; equivalent to
        // the facet normals spanning after orientation. Quick check: the cone's
        // facet set must be nonempty and each ray strictly inside some facet's
        // positive side; for simplicial cones linear independence suffices.
        auto facets = detail::cone_facets(fan, cone);
        if ((int)cone.size() == d) {
            // simplicial: independence already checked
        } else if (facets.empty()) {
            throw ValidationError(id, "non-simplicial cone with no facets");
        }
        all_facets.push_back(facets);
        for (const auto& f : facets) wall_count[f.ray_set]++;
    }
    // ridge pairing: every facet of a maximal cone shared by exactly two cones
    for (const auto& [key, count] : wall_count) {
        if (count != 2) throw IncompleteFan(id + ": wall shared by " + std::to_string(count) + " cones");
    }
    // sampled coverage: +-rays, coordinate vectors, and a few pseudorandom points
    std::vector<ZVector> probes;
    for (const auto& r : fan.rays) {
        probes.push_back(r);
        ZVector neg = r;
        for (auto& v : neg) v = -v;
        probes.push_back(neg);
    }
    for (int i = 0; i < d; ++i) {
        ZVector e(d, 0);
        e[i] = 1;
        probes.push_back(e);
    }
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> dist(-7, 7);
    for (int t = 0; t < 40; ++t) {
        ZVector v(d);
        for (int i = 0; i < d; ++i) v[i] = dist(rng);
        probes.push_back(v);
    }
    for (const auto& p : probes) {
        bool covered = false;
        for (size_t c = 0; c < fan.max_cones.size() && !covered; ++c)
            covered = detail::point_in_cone(fan, fan.max_cones[c], all_facets[c], p);
        if (!covered) throw IncompleteFan(id + ": probe point not covered");
    }
}

// Checks the stored class projection (or computes a canonical one): the
// projection must kill the character lattice and be surjective; torsion in
// the class group is rejected.
inline void finish_lattice(Fan& fan, const std::string& id = "fan") {
    int n = fan.nrays(), d = fan.dim;
    // torsion check: Smith invariants of the ray matrix (M -> Z^n embedding)
    ZMatrix embed(n, ZVector(d));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) embed[i][j] = fan.rays[i][j];
    auto inv = smith_invariants(embed);
    if ((int)inv.size() != d) throw ValidationError(id, "rays do not span");
    for (i64 v : inv)
        if (v != 1) throw ValidationError(id, "class group has torsion");
    if (fan.lattice.projection.empty()) {
        // canonical projection: saturated integer basis of the left kernel
        // of the character embedding M -> Z^rays
        ZMatrix embed_t(d, ZVector(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) embed_t[j][i] = embed[i][j];
        fan.lattice.projection = kernel_z(embed_t);
        fan.lattice.class_rank = (int)fan.lattice.projection.size();
    }
    if (fan.lattice.class_rank != n - d)
        throw ValidationError(id, "class rank must be #rays - dim");
    if ((int)fan.lattice.projection.size() != fan.lattice.class_rank)
        throw ValidationError(id, "projection row count");
    for (const auto& row : fan.lattice.projection) {
        if ((int)row.size() != n) throw ValidationError(id, "projection arity");
        for (int j = 0; j < d; ++j) {
            i64 acc = 0;
            for (int i = 0; i < n; ++i) acc += row[i] * fan.rays[i][j];
            if (acc != 0) throw ValidationError(id, "projection does not kill characters");
        }
    }
    auto pinv = smith_invariants(fan.lattice.projection);
    if ((int)pinv.size() != fan.lattice.class_rank)
        throw ValidationError(id, "projection not full rank");
    for (i64 v : pinv)
        if (v != 1) throw ValidationError(id, "projection not surjective over Z");
}

inline ZVector class_of(const Fan& fan, const TorusDivisor& div) {
    if ((int)div.coeffs.size() != fan.nrays()) throw Error("divisor arity mismatch");
    ZVector c(fan.lattice.class_rank, 0);
    for (int t = 0; t < fan.lattice.class_rank; ++t)
        for (int i = 0; i < fan.nrays(); ++i) c[t] += fan.lattice.projection[t][i] * div.coeffs[i];
    return c;
}

inline TorusDivisor representative_of(const Fan& fan, const ZVector& cls) {
    auto sol = solve_z(fan.lattice.projection, cls);
    if (!sol) throw Error("no integral representative (projection not surjective?)");
    return TorusDivisor{*sol};
}

// Cartier data: for each maximal cone an integral m_sigma with
// <m_sigma, u_rho> = -a_rho on the cone's rays.
inline std::optional<std::vector<ZVector>> cartier_data(const Fan& fan, const TorusDivisor& div) {
    std::vector<ZVector> data;
    for (const auto& cone : fan.max_cones) {
        ZMatrix a;
        ZVector b;
        for (int i : cone) {
            a.push_back(fan.rays[i]);
            b.push_back(-div.coeffs[i]);
        }
        auto m = solve_z(a, b);
        if (!m) return std::nullopt;
        data.push_back(*m);
    }
    return data;
}

inline bool is_cartier(const Fan& fan, const TorusDivisor& div) {
    return cartier_data(fan, div).has_value();
}

// Nef test via m_sigma-convexity: Cartier and <m_sigma, u_rho> >= -a_rho for
// every ray outside sigma.  `strict` gives ampleness.
inline bool is_nef(const Fan& fan, const TorusDivisor& div, bool strict = false) {
    auto data = cartier_data(fan, div);
    if (!data) return false;
    for (size_t c = 0; c < fan.max_cones.size(); ++c) {
        std::set<int> in_cone(fan.max_cones[c].begin(), fan.max_cones[c].end());
        for (int i = 0; i < fan.nrays(); ++i) {
            if (in_cone.count(i)) continue;
            i64 dot = 0;
            for (int j = 0; j < fan.dim; ++j) dot += (*data)[c][j] * fan.rays[i][j];
            if (dot < -div.coeffs[i]) return false;
            if (strict && dot == -div.coeffs[i]) return false;
        }
    }
    return true;
}

inline bool is_ample(const Fan& fan, const TorusDivisor& div) { return is_nef(fan, div, true); }

inline bool is_smooth(const Fan& fan) {
    for (const auto& cone : fan.max_cones) {
        if ((int)cone.size() != fan.dim) return false;
        if (std::llabs(det3_sign_free(detail::rays_of(fan, cone))) != 1) return false;
    }
    return true;
}

// Lattice points of the section polytope {m : <m,u_rho> >= -a_rho}.
inline std::vector<ZVector> section_basis(const Fan& fan, const TorusDivisor& div) {
    int d = fan.dim, n = fan.nrays();
    // bounding box: enumerate vertices of the polytope from d-subsets
    std::vector<double> lo(d, 0), hi(d, 0);
    bool any = false;
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::vector<int> subset;
    std::function<void(int)> rec = [&](int start) {
        if ((int)subset.size() == d) {
            QMatrix a;
            std::vector<Rat> b;
            for (int i : subset) {
                std::vector<Rat> row;
                for (i64 v : fan.rays[i]) row.push_back(Rat(v));
                a.push_back(row);
                b.push_back(Rat(-div.coeffs[i]));
            }
            auto sol = solve_q(a, b);
            if (sol && rank_q(a) == d) {
                // feasible vertex candidate: check all inequalities
                bool feas = true;
                for (int i = 0; i < n && feas; ++i) {
                    Rat acc(0);
                    for (int j = 0; j < d; ++j) acc = acc + (*sol)[j] * Rat(fan.rays[i][j]);
                    // acc >= -a_i ?
                    Rat rhs(-div.coeffs[i]);
                    if ((acc - rhs).num < 0) feas = false;
                }
                if (feas) {
                    for (int j = 0; j < d; ++j) {
                        double v = (double)(*sol)[j].num / (double)(*sol)[j].den;
                        if (!any) { lo[j] = hi[j] = v; }
                        else {
                            lo[j] = std::min(lo[j], v);
                            hi[j] = std::max(hi[j], v);
                        }
                    }
                    any = true;
                }
            }
            return;
        }
        for (int i = start; i < n; ++i) {
            subset.push_back(i);
            rec(i + 1);
            subset.pop_back();
        }
    };
    rec(0);
    std::vector<ZVector> points;
    if (!any) return points;
    ZVector m(d);
    std::function<void(int)> walk = [&](int coord) {
        if (coord == d) {
            for (int i = 0; i < n; ++i) {
                i64 acc = 0;
                for (int j = 0; j < d; ++j) acc += fan.rays[i][j] * m[j];
                if (acc < -div.coeffs[i]) return;
            }
            points.push_back(m);
            return;
        }
        for (i64 v = (i64)std::floor(lo[coord] - 0.5); v <= (i64)std::ceil(hi[coord] + 0.5); ++v) {
            m[coord] = v;
            walk(coord + 1);
        }
    };
    walk(0);
    return points;
}

} // namespace polyvec::toric
