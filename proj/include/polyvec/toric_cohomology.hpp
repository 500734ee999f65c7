#pragma once

// Cohomology of line bundles and twisted reflexive cotangent bundles on
// complete toric varieties.
//
// Line bundles: the character-graded formula H^p(O(D))_m = H~^{p-1}(K_m)
// where K_m is the simplicial complex generated by the per-cone sets of
// rays with <m,u_rho> < -a_rho.  For non-simplicial maximal cones the
// generated-complex version is homotopy equivalent to the polyhedral
// support complex (both covers have the same nerve), so the same tables
// apply.
//
// Cotangent twists on simplicial fans: the generalized Euler sequence
// 0 -> Ω̂^1⊗L -> ⊕_rho O(L-D_rho) -> O(L)^rank -> 0 is exact, and all its
// maps are diagonal across characters, so kernels and cokernels are exact
// per-character linear algebra over the same complexes.
//
// Cotangent twists on non-simplicial fans: the Euler sequence fails to be
// right-exact along the non-Q-factorial locus, so we compute the honest
// Cech complex of Zariski 1-forms over the maximal-cone cover, with
// Gamma(U_sigma, Ω̂^1(D))_m the annihilator of the rays of sigma where m is
// tight (and zero when m is infeasible on sigma).
//
// Everything is memoised on the (negative set, tight set) bitmask pair, so
// the character enumeration is a cheap walk over an exactly bounded box.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "chase.hpp"
#include "errors.hpp"
#include "fan.hpp"
#include "linalg.hpp"

namespace polyvec::toric {

using exactseq::CohVector;

using Mask = uint32_t;

namespace detail {

// Reduced simplicial cohomology data for one complex on <= 31 vertices:
// dims per degree and cocycle/coboundary bases for induced-map ranks.
struct ComplexData {
    std::vector<Mask> simplices;             // all faces incl. empty face (0)
    std::map<Mask, int> index;               // simplex -> column index (per degree)
    std::vector<std::vector<Mask>> by_dim;   // [p+1] = faces of dim p (popcount p+1)
    std::vector<QMatrix> coboundary;         // delta_p: C^p -> C^{p+1}, p from -1
    std::vector<int> hred;                   // reduced betti numbers, index p+1
    std::vector<QMatrix> cocycle_basis;      // per degree: basis vectors (rows)
    std::vector<QMatrix> coboundary_image;   // per degree: image basis (rows)
};

inline int popcount(Mask m) { return __builtin_popcount(m); }

inline ComplexData build_complex(const std::vector<Mask>& generators, int max_vertex) {
    ComplexData cd;
    // collect all faces (subsets of generators)
    std::set<Mask> faces;
    bool nonvoid = false;
    for (Mask g : generators) {
        nonvoid = true;
        // enumerate subsets of g
        Mask sub = g;
        while (true) {
            faces.insert(sub);
            if (sub == 0) break;
            sub = (sub - 1) & g;
        }
    }
    if (!nonvoid) faces.insert(0); // complex generated by nothing: just the empty face
    int maxp = 0;
    for (Mask f : faces) maxp = std::max(maxp, popcount(f));
    cd.by_dim.assign(maxp + 1, {});
    for (Mask f : faces) cd.by_dim[popcount(f)].push_back(f);
    for (auto& v : cd.by_dim) std::sort(v.begin(), v.end());
    // coboundary matrices delta_p: from faces of size p to size p+1
    cd.coboundary.assign(maxp + 1, {});
    for (int s = 0; s < maxp; ++s) {
        const auto& dom = cd.by_dim[s];
        const auto& cod = cd.by_dim[s + 1];
        std::map<Mask, int> dom_idx, cod_idx;
        for (size_t i = 0; i < dom.size(); ++i) dom_idx[dom[i]] = (int)i;
        for (size_t i = 0; i < cod.size(); ++i) cod_idx[cod[i]] = (int)i;
        QMatrix d(cod.size(), std::vector<Rat>(dom.size(), Rat(0)));
        for (size_t ci = 0; ci < cod.size(); ++ci) {
            Mask g = cod[ci];
            int pos = 0;
            for (int v = 0; v < max_vertex; ++v) {
                if (!(g & (Mask(1) << v))) continue;
                Mask f = g & ~(Mask(1) << v);
                auto it = dom_idx.find(f);
                if (it != dom_idx.end()) d[ci][it->second] = Rat((pos % 2 == 0) ? 1 : -1);
                ++pos;
            }
        }
        cd.coboundary[s] = std::move(d);
    }
    // reduced cohomology: C^{-1} = span(empty face), so degrees shift by one;
    // hred[p+1] = H~^p
    cd.hred.assign(maxp + 2, 0);
    cd.cocycle_basis.assign(maxp + 1, {});
    cd.coboundary_image.assign(maxp + 1, {});
    std::vector<int> rank_delta(maxp + 1, 0);
    for (int s = 0; s < maxp; ++s) {
        QMatrix m = cd.coboundary[s];
        rank_delta[s] = m.empty() ? 0 : row_echelon(m);
    }
    for (int s = 0; s <= maxp; ++s) {
        int dim_c = (int)cd.by_dim[s].size();
        int rk_out = (s < maxp) ? rank_delta[s] : 0;
        int rk_in = (s > 0) ? rank_delta[s - 1] : 0;
        cd.hred[s] = dim_c - rk_out - rk_in;
        // cocycle basis: kernel of delta_s (rows = basis vectors over by_dim[s])
        if (dim_c > 0) {
            if (s < maxp && !cd.coboundary[s].empty()) {
                cd.cocycle_basis[s] = kernel_q(cd.coboundary[s]);
            } else {
                QMatrix id(dim_c, std::vector<Rat>(dim_c, Rat(0)));
                for (int i = 0; i < dim_c; ++i) id[i][i] = Rat(1);
                cd.cocycle_basis[s] = id;
            }
            if (s > 0 && !cd.coboundary[s - 1].empty()) {
                // image basis: columns of delta_{s-1} transposed to rows
                QMatrix img;
                const auto& d = cd.coboundary[s - 1];
                size_t cols = d.empty() ? 0 : d[0].size();
                for (size_t c = 0; c < cols; ++c) {
                    std::vector<Rat> row(dim_c);
                    for (int r = 0; r < dim_c; ++r) row[r] = d[r][c];
                    img.push_back(std::move(row));
                }
                row_echelon(img);
                while (!img.empty()) {
                    bool zero = true;
                    for (const auto& v : img.back()) zero &= v.is_zero();
                    if (zero) img.pop_back();
                    else break;
                }
                cd.coboundary_image[s] = std::move(img);
            }
        }
    }
    // note: hred[s] with s = popcount = p+1 means H~^{p}, p = s-1
    return cd;
}

} // namespace detail

// Per-fan computation context with memoised complex/map tables.  One context
// per fan; not shared across threads.
class FanContext {
public:
    explicit FanContext(Fan fan, std::string id = "fan") : fan_(std::move(fan)), id_(std::move(id)) {
        validate_fan(fan_, id_);
        finish_lattice(fan_, id_);
        n_ = fan_.nrays();
        d_ = fan_.dim;
        if (n_ > 30) throw ValidationError(id_, "too many rays");
        cone_masks_.clear();
        for (const auto& c : fan_.max_cones) {
            Mask m = 0;
            for (int i : c) m |= Mask(1) << i;
            cone_masks_.push_back(m);
        }
        // face ray-masks for the Cech cover (subsets of maximal cones)
        if (!fan_.simplicial()) {
            if (fan_.max_cones.size() > 14) throw ValidationError(id_, "non-simplicial fan too large");
        }
    }

    const Fan& fan() const { return fan_; }
    const std::string& id() const { return id_; }
    int dim() const { return d_; }
    int nrays() const { return n_; }
    int class_rank() const { return fan_.lattice.class_rank; }

    ZVector class_of_divisor(const TorusDivisor& div) const { return class_of(fan_, div); }
    TorusDivisor rep(const ZVector& cls) const { return representative_of(fan_, cls); }

    // H^*(F, O(D)); fully determined.
    CohVector line_bundle_cohomology(const TorusDivisor& div) {
        auto key = div.coeffs;
        auto it = line_cache_.find(key);
        if (it != line_cache_.end()) return it->second;
        std::vector<long long> h(d_ + 1, 0);
        enumerate_characters(div.coeffs, [&](Mask s, Mask, long long count) {
            const auto& betti = hred(s);
            for (int p = 0; p <= d_; ++p)
                if (p < (int)betti.size()) h[p] += count * betti[p];
        });
        CohVector out{h};
        line_cache_[key] = out;
        return out;
    }

    CohVector line_bundle_cohomology_class(const ZVector& cls) {
        return line_bundle_cohomology(rep(cls));
    }

    // H^*(F, Ω̂^1 ⊗ O(L)); fully determined.
    CohVector cotangent_twist_cohomology(const TorusDivisor& twist) {
        auto it = cot_cache_.find(twist.coeffs);
        if (it != cot_cache_.end()) return it->second;
        CohVector out = fan_.simplicial() ? cotangent_euler(twist) : cotangent_cech(twist);
        cot_cache_[twist.coeffs] = out;
        return out;
    }

    CohVector cotangent_twist_cohomology_class(const ZVector& cls) {
        return cotangent_twist_cohomology(rep(cls));
    }

    // Cech-over-cover line bundle cohomology; used as a cross-check oracle.
    CohVector line_bundle_cohomology_cech(const TorusDivisor& div) {
        std::vector<long long> h(d_ + 1, 0);
        ensure_faces();
        enumerate_characters(div.coeffs, [&](Mask s, Mask, long long count) {
            auto dims = cech_line_dims(s);
            for (int p = 0; p <= d_ && p < (int)dims.size(); ++p) h[p] += count * dims[p];
        });
        return CohVector{h};
    }

private:
    Fan fan_;
    std::string id_;
    int n_ = 0, d_ = 0;
    std::vector<Mask> cone_masks_;
    std::map<ZVector, CohVector> line_cache_, cot_cache_;
    std::unordered_map<Mask, detail::ComplexData> complex_cache_;
    std::map<std::pair<Mask, Mask>, std::vector<std::array<long long, 3>>> euler_cache_;
    // Cech face data
    bool faces_ready_ = false;
    std::vector<Mask> face_ray_mask_; // per subset of cones (index = subset mask)
    std::map<std::pair<Mask, Mask>, std::vector<long long>> cech_cache_;
    std::map<Mask, std::vector<long long>> cech_line_cache_;

    const detail::ComplexData& complex_for(Mask negset) {
        auto it = complex_cache_.find(negset);
        if (it != complex_cache_.end()) return it->second;
        std::vector<Mask> gens;
        for (Mask cm : cone_masks_) gens.push_back(cm & negset);
        auto cd = detail::build_complex(gens, n_);
        return complex_cache_.emplace(negset, std::move(cd)).first->second;
    }

    // H~^{p-1} table indexed by cohomological degree p (0..d); hred[] of the
    // complex is indexed by simplex size = (p-1)+1 = p.
    std::vector<long long> hred_vec(Mask negset) {
        const auto& cd = complex_for(negset);
        std::vector<long long> out(d_ + 1, 0);
        for (int p = 0; p <= d_; ++p)
            if (p < (int)cd.hred.size()) out[p] = cd.hred[p];
        return out;
    }

    const std::vector<long long>& hred(Mask negset) {
        auto it = hred_memo_.find(negset);
        if (it != hred_memo_.end()) return it->second;
        return hred_memo_.emplace(negset, hred_vec(negset)).first->second;
    }
    std::unordered_map<Mask, std::vector<long long>> hred_memo_;

    // ---- character enumeration ------------------------------------------

    // Walk all characters that can contribute, reporting (negset, tightset,
    // multiplicity).  Soundness: cells whose contribution would repeat
    // infinitely must be acyclic, which is asserted.
    void enumerate_characters(const ZVector& a, const std::function<void(Mask, Mask, long long)>& emit) {
        // bounding box from arrangement vertices (d-subsets of hyperplanes)
        std::vector<i64> lo(d_, 0), hi(d_, 0);
        bool any = false;
        std::vector<int> subset;
        auto process_subset = [&]() {
            QMatrix m;
            std::vector<Rat> b;
            for (int i : subset) {
                std::vector<Rat> row;
                for (i64 v : fan_.rays[i]) row.push_back(Rat(v));
                m.push_back(row);
                b.push_back(Rat(-a[i]));
            }
            QMatrix mc = m;
            if (row_echelon(mc) != d_) return;
            auto sol = solve_q(m, b);
            if (!sol) return;
            for (int j = 0; j < d_; ++j) {
                i64 fl = (i64)std::floor((double)(*sol)[j].num / (double)(*sol)[j].den);
                i64 ce = (i64)std::ceil((double)(*sol)[j].num / (double)(*sol)[j].den);
                if (!any) { lo[j] = fl; hi[j] = ce; }
                lo[j] = std::min(lo[j], fl);
                hi[j] = std::max(hi[j], ce);
            }
            any = true;
        };
        std::function<void(int)> rec = [&](int start) {
            if ((int)subset.size() == d_) { process_subset(); return; }
            for (int i = start; i < n_; ++i) {
                subset.push_back(i);
                rec(i + 1);
                subset.pop_back();
            }
        };
        rec(0);
        if (!any) {
            // no vertices: every cell is unbounded, total must vanish
            return;
        }
        for (int j = 0; j < d_; ++j) { lo[j] -= 2; hi[j] += 2; }

        // iterate over the first d-1 coordinates, walk segments along the last
        std::vector<i64> m(d_, 0);
        std::function<void(int)> walk = [&](int coord) {
            if (coord == d_ - 1) {
                walk_line(a, m, emit);
                return;
            }
            for (i64 v = lo[coord]; v <= hi[coord]; ++v) {
                m[coord] = v;
                walk(coord + 1);
            }
        };
        if (d_ == 1) {
            walk_line(a, m, emit);
        } else {
            walk(0);
        }
    }

    // Segment walk along the last coordinate: between consecutive critical
    // values the (negative, tight) state is constant, and the unbounded end
    // segments must be acyclic by finite-dimensionality.
    void walk_line(const ZVector& a, std::vector<i64>& m,
                   const std::function<void(Mask, Mask, long long)>& emit) {
        int last = d_ - 1;
        // partial dots over fixed coords; ray splits by t-coefficient
        std::vector<i64> base(n_, 0), coef(n_, 0);
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < last; ++j) base[i] += fan_.rays[i][j] * m[j];
            coef[i] = fan_.rays[i][last];
        }
        auto state_at = [&](const Rat& t) {
            Mask neg = 0, tight = 0;
            for (int i = 0; i < n_; ++i) {
                Rat dot = Rat(base[i]) + t * Rat(coef[i]);
                Rat rhs((i64)-a[i]);
                Rat diff = dot - rhs;
                if (diff.num < 0) neg |= Mask(1) << i;
                else if (diff.num == 0) tight |= Mask(1) << i;
            }
            return std::make_pair(neg, tight);
        };
        // critical values
        std::vector<Rat> crit;
        for (int i = 0; i < n_; ++i) {
            if (coef[i] == 0) continue;
            crit.push_back(Rat(-a[i] - base[i], coef[i]));
        }
        std::sort(crit.begin(), crit.end(), [](const Rat& x, const Rat& y) {
            return (i128)x.num * y.den < (i128)y.num * x.den;
        });
        crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

        auto emit_open = [&](const Rat& sample, i64 count) {
            if (count <= 0) return;
            auto [neg, tight] = state_at(sample);
            emit(neg, tight, count);
        };
        auto floor_exact = [](const Rat& r) {
            i64 q = r.num / r.den, rem = r.num % r.den;
            return (rem < 0) ? q - 1 : q;
        };
        auto floor_strict = [&](const Rat& r) {
            // largest integer strictly less than r
            i64 fl = floor_exact(r);
            return r.is_integer() ? fl - 1 : fl;
        };
        auto ceil_strict = [&](const Rat& r) {
            i64 fl = floor_exact(r);
            return fl + 1; // smallest integer strictly greater than r
        };

        if (crit.empty()) {
            // constant state along the whole line: must be acyclic; verify once
            auto [neg, tight] = state_at(Rat(0));
            assert_acyclic(neg, tight);
            return;
        }
        // left unbounded end
        {
            auto [neg, tight] = state_at(crit.front() - Rat(1));
            assert_acyclic(neg, tight);
        }
        // right unbounded end
        {
            auto [neg, tight] = state_at(crit.back() + Rat(1));
            assert_acyclic(neg, tight);
        }
        // critical points (integers only) and open segments between them
        for (size_t c = 0; c < crit.size(); ++c) {
            if (crit[c].is_integer()) {
                auto [neg, tight] = state_at(crit[c]);
                emit(neg, tight, 1);
            }
            if (c + 1 < crit.size()) {
                i64 first = ceil_strict(crit[c]);
                i64 last_i = floor_strict(crit[c + 1]);
                if (first <= last_i) {
                    Rat sample = (crit[c] + crit[c + 1]) * Rat(1, 2);
                    emit_open(sample, last_i - first + 1);
                }
            }
        }
    }

    void assert_acyclic(Mask neg, Mask tight) {
        // a state repeated over an unbounded family of characters must carry
        // no cohomology in any computation we do; line bundles need hred = 0,
        // the cotangent paths additionally need the tight set to be empty or
        // non-contributing.  We check the strongest condition cheaply.
        const auto& betti = hred(neg);
        for (long long v : betti)
            if (v != 0) throw Error(id_ + ": unbounded contributing cell (line bundle)");
        if (tight != 0) {
            // shifted bundles: neg ∪ {rho} for rho tight must also be acyclic
            for (int i = 0; i < n_; ++i) {
                if (!(tight & (Mask(1) << i))) continue;
                const auto& b2 = hred(neg | (Mask(1) << i));
                for (long long v : b2)
                    if (v != 0) throw Error(id_ + ": unbounded contributing cell (shifted)");
            }
            if (!fan_.simplicial()) {
                auto dims = cech_dims(neg, tight);
                for (long long v : dims)
                    if (v != 0) throw Error(id_ + ": unbounded contributing cell (cech)");
            }
        }
    }

    // ---- Euler-sequence cotangent (simplicial fans) -----------------------

    // per (negset, tightset): for each degree i, {a_i, b_i, rank_i}
    const std::vector<std::array<long long, 3>>& euler_data(Mask s, Mask t) {
        auto key = std::make_pair(s, t);
        auto it = euler_cache_.find(key);
        if (it != euler_cache_.end()) return it->second;
        int r = class_rank();
        std::vector<std::array<long long, 3>> data(d_ + 2, {0, 0, 0});
        const auto& cs = complex_for(s);
        for (int deg = 0; deg <= d_ + 1; ++deg) {
            // H~^{deg-1}: simplex size = deg
            long long b_i = (deg < (int)cs.hred.size()) ? (long long)r * cs.hred[deg] : 0;
            long long a_i = 0;
            for (int rho = 0; rho < n_; ++rho) {
                // neg set of L - D_rho: rho joins when it was negative or tight
                Mask srho = s | (t & (Mask(1) << rho));
                const auto& c2 = complex_for(srho);
                if (deg < (int)c2.hred.size()) a_i += c2.hred[deg];
            }
            data[deg][0] = a_i;
            data[deg][1] = b_i;
            data[deg][2] = euler_map_rank(s, t, deg);
            if (data[deg][2] > std::min(a_i, b_i)) throw Error("euler map rank overflow");
        }
        return euler_cache_.emplace(key, std::move(data)).first->second;
    }

    // rank of ⊕_rho H~^{deg-1}(K_{S_rho}) -> H~^{deg-1}(K_S) ⊗ k^rank
    long long euler_map_rank(Mask s, Mask t, int deg) {
        const auto& cs = complex_for(s);
        if (deg >= (int)cs.by_dim.size()) return 0;
        const auto& target_simps = cs.by_dim[deg];
        if (target_simps.empty()) return 0;
        int r = class_rank();
        int tdim = (int)target_simps.size();
        std::map<Mask, int> tidx;
        for (int i = 0; i < tdim; ++i) tidx[target_simps[i]] = i;
        // columns: first the restriction of cocycles of each K_{S_rho} ⊗ w_rho,
        // then coboundaries of K_S ⊗ each class coordinate.
        QMatrix cols; // stores column vectors as rows; rank is unaffected
        for (int rho = 0; rho < n_; ++rho) {
            Mask srho = s | (t & (Mask(1) << rho));
            const auto& c2 = complex_for(srho);
            if (deg >= (int)c2.by_dim.size()) continue;
            const auto& dom_simps = c2.by_dim[deg];
            if (deg >= (int)c2.cocycle_basis.size()) continue;
            for (const auto& z : c2.cocycle_basis[deg]) {
                // restrict to K_S simplices, tensor with class column of rho
                std::vector<Rat> col((size_t)tdim * r, Rat(0));
                for (size_t j = 0; j < dom_simps.size(); ++j) {
                    auto it2 = tidx.find(dom_simps[j]);
                    if (it2 == tidx.end()) continue;
                    for (int tcoord = 0; tcoord < r; ++tcoord) {
                        Rat w((i64)fan_.lattice.projection[tcoord][rho]);
                        col[(size_t)it2->second * r + tcoord] =
                            col[(size_t)it2->second * r + tcoord] + z[j] * w;
                    }
                }
                cols.push_back(std::move(col));
            }
        }
        if (cols.empty()) return 0;
        QMatrix bonly;
        if (deg < (int)cs.coboundary_image.size()) {
            for (const auto& bnd : cs.coboundary_image[deg]) {
                for (int tcoord = 0; tcoord < r; ++tcoord) {
                    std::vector<Rat> col((size_t)tdim * r, Rat(0));
                    for (int j = 0; j < tdim; ++j) col[(size_t)j * r + tcoord] = bnd[j];
                    bonly.push_back(std::move(col));
                }
            }
        }
        for (const auto& bcol : bonly) cols.push_back(bcol);
        int full = row_echelon(cols);
        int brank = bonly.empty() ? 0 : row_echelon(bonly);
        return full - brank;
    }

    CohVector cotangent_euler(const TorusDivisor& twist) {
        std::vector<long long> h(d_ + 1, 0);
        enumerate_characters(twist.coeffs, [&](Mask s, Mask t, long long count) {
            const auto& data = euler_data(s, t);
            for (int i = 0; i <= d_; ++i) {
                long long ker_i = data[i][0] - data[i][2];
                long long coker_prev = (i > 0) ? data[i - 1][1] - data[i - 1][2] : 0;
                h[i] += count * (ker_i + coker_prev);
            }
        });
        // chi consistency: chi(kernel) = sum chi(middle) - rank*chi(right)
        long long chi = 0;
        int sign = 1;
        for (int i = 0; i <= d_; ++i) { chi += sign * h[i]; sign = -sign; }
        long long chi_expect = 0;
        for (int rho = 0; rho < n_; ++rho) {
            TorusDivisor shifted = twist;
            shifted.coeffs[rho] -= 1;
            chi_expect += line_bundle_cohomology(shifted).euler_characteristic();
        }
        chi_expect -= (long long)class_rank() * line_bundle_cohomology(twist).euler_characteristic();
        if (chi != chi_expect) throw ConsistencyError(id_ + ": Euler-sequence chi mismatch");
        return CohVector{h};
    }

    // ---- Cech complex of Zariski forms (non-simplicial fans) --------------

    void ensure_faces() {
        if (faces_ready_) return;
        size_t nc = fan_.max_cones.size();
        face_ray_mask_.assign(size_t(1) << nc, 0);
        for (size_t sub = 1; sub < (size_t(1) << nc); ++sub) {
            Mask common = ~Mask(0);
            for (size_t c = 0; c < nc; ++c)
                if (sub & (size_t(1) << c)) common &= cone_masks_[c];
            face_ray_mask_[sub] = common;
        }
        faces_ready_ = true;
    }

    // Cech cohomology dims of Ω̂^1(D) graded piece for state (neg, tight).
    std::vector<long long> cech_dims(Mask neg, Mask tight) {
        ensure_faces();
        auto key = std::make_pair(neg, tight);
        auto it = cech_cache_.find(key);
        if (it != cech_cache_.end()) return it->second;
        size_t nc = fan_.max_cones.size();
        // V for a face with ray mask fr: 0 if neg∩fr != 0 else perp of span{u_rho: rho in tight∩fr}
        // store per subset: basis matrix (rows = basis vectors in Q^d)
        auto space_for = [&](Mask fr) -> QMatrix {
            if (neg & fr) return {};
            ZMatrix tights;
            for (int i = 0; i < n_; ++i)
                if ((tight & fr) & (Mask(1) << i)) tights.push_back(fan_.rays[i]);
            if (tights.empty()) {
                QMatrix id(d_, std::vector<Rat>(d_, Rat(0)));
                for (int i = 0; i < d_; ++i) id[i][i] = Rat(1);
                return id;
            }
            QMatrix m = to_q(tights);
            return kernel_q(m); // rows: basis of the annihilator
        };
        // Cech degrees p = 0..nc-1: C^p = ⊕_{|I|=p+1} V_I
        std::vector<std::vector<size_t>> subsets_by_size(nc + 1);
        for (size_t sub = 1; sub < (size_t(1) << nc); ++sub)
            subsets_by_size[detail::popcount((Mask)sub)].push_back(sub);
        std::vector<std::map<size_t, QMatrix>> bases(nc + 1);
        std::vector<std::map<size_t, int>> offsets(nc + 1);
        std::vector<int> cdim(nc + 1, 0);
        for (size_t sz = 1; sz <= nc; ++sz) {
            int off = 0;
            for (size_t sub : subsets_by_size[sz]) {
                QMatrix b = space_for(face_ray_mask_[sub]);
                offsets[sz][sub] = off;
                off += (int)b.size();
                bases[sz][sub] = std::move(b);
            }
            cdim[sz] = off;
        }
        // differential C^{p} -> C^{p+1}: component (I -> J=I∪{x}) with sign,
        // express V_I basis vectors in V_J basis: V_I ⊆ V_J
        std::vector<long long> dims;
        std::vector<int> ranks(nc + 1, 0);
        std::vector<QMatrix> deltas(nc + 1);
        for (size_t sz = 1; sz < nc; ++sz) {
            if (cdim[sz] == 0 || cdim[sz + 1] == 0) { deltas[sz] = {}; continue; }
            QMatrix dmat(cdim[sz + 1], std::vector<Rat>(cdim[sz], Rat(0)));
            for (size_t j : subsets_by_size[sz + 1]) {
                const auto& bj = bases[sz + 1][j];
                if (bj.empty()) continue;
                // solve for coordinates in bj
                int sign_pos = 0;
                for (size_t c = 0; c < nc; ++c) {
                    if (!(j & (size_t(1) << c))) continue;
                    size_t i_sub = j & ~(size_t(1) << c);
                    int sgn = (sign_pos % 2 == 0) ? 1 : -1;
                    ++sign_pos;
                    const auto& bi = bases[sz][i_sub];
                    if (bi.empty()) continue;
                    // each basis vector of V_I expressed in bj
                    for (size_t col = 0; col < bi.size(); ++col) {
                        // solve bj^T x = bi[col]
                        QMatrix a_trans(d_, std::vector<Rat>(bj.size(), Rat(0)));
                        for (size_t rr = 0; rr < bj.size(); ++rr)
                            for (int cc = 0; cc < d_; ++cc) a_trans[cc][rr] = bj[rr][cc];
                        std::vector<Rat> rhs(d_);
                        for (int cc = 0; cc < d_; ++cc) rhs[cc] = bi[col][cc];
                        auto sol = solve_q(a_trans, rhs);
                        if (!sol) throw Error("cech: inclusion failed");
                        for (size_t rr = 0; rr < bj.size(); ++rr)
                            dmat[offsets[sz + 1][j] + rr][offsets[sz][i_sub] + col] =
                                dmat[offsets[sz + 1][j] + rr][offsets[sz][i_sub] + col] + Rat(sgn) * (*sol)[rr];
                    }
                }
            }
            deltas[sz] = std::move(dmat);
        }
        for (size_t sz = 1; sz < nc; ++sz)
            ranks[sz] = deltas[sz].empty() ? 0 : row_echelon(deltas[sz]);
        dims.assign(d_ + 1, 0);
        for (int p = 0; p <= d_ && p < (int)nc; ++p) {
            int dim_c = cdim[p + 1];
            int rk_out = (p + 1 < (int)nc) ? ranks[p + 1] : 0;
            int rk_in = (p >= 1) ? ranks[p] : 0;
            dims[p] = dim_c - rk_out - rk_in;
        }
        cech_cache_[key] = dims;
        return dims;
    }

    // Cech with V in {0, k}: line bundle cross-check
    std::vector<long long> cech_line_dims(Mask neg) {
        ensure_faces();
        auto it = cech_line_cache_.find(neg);
        if (it != cech_line_cache_.end()) return it->second;
        size_t nc = fan_.max_cones.size();
        std::vector<std::vector<size_t>> live(nc + 1);
        for (size_t sub = 1; sub < (size_t(1) << nc); ++sub)
            if (!(neg & face_ray_mask_[sub])) live[detail::popcount((Mask)sub)].push_back(sub);
        std::vector<QMatrix> deltas(nc + 1);
        std::vector<int> ranks(nc + 1, 0);
        for (size_t sz = 1; sz < nc; ++sz) {
            if (live[sz].empty() || live[sz + 1].empty()) continue;
            std::map<size_t, int> idx;
            for (size_t i = 0; i < live[sz].size(); ++i) idx[live[sz][i]] = (int)i;
            QMatrix dmat(live[sz + 1].size(), std::vector<Rat>(live[sz].size(), Rat(0)));
            for (size_t jj = 0; jj < live[sz + 1].size(); ++jj) {
                size_t j = live[sz + 1][jj];
                int sign_pos = 0;
                for (size_t c = 0; c < nc; ++c) {
                    if (!(j & (size_t(1) << c))) continue;
                    size_t i_sub = j & ~(size_t(1) << c);
                    int sgn = (sign_pos % 2 == 0) ? 1 : -1;
                    ++sign_pos;
                    auto it2 = idx.find(i_sub);
                    if (it2 != idx.end()) dmat[jj][it2->second] = Rat(sgn);
                }
            }
            ranks[sz] = row_echelon(dmat);
        }
        std::vector<long long> dims(d_ + 1, 0);
        for (int p = 0; p <= d_ && p < (int)nc; ++p) {
            int dim_c = (int)live[p + 1].size();
            int rk_out = (p + 1 < (int)nc) ? ranks[p + 1] : 0;
            int rk_in = (p >= 1) ? ranks[p] : 0;
            dims[p] = dim_c - rk_out - rk_in;
        }
        cech_line_cache_[neg] = dims;
        return dims;
    }

    CohVector cotangent_cech(const TorusDivisor& twist) {
        std::vector<long long> h(d_ + 1, 0);
        enumerate_characters(twist.coeffs, [&](Mask s, Mask t, long long count) {
            auto dims = cech_dims(s, t);
            for (int p = 0; p <= d_; ++p) h[p] += count * dims[p];
        });
        return CohVector{h};
    }
};

} // namespace polyvec::toric
