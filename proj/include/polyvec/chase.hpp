#pragma once

// Constraint solver for cohomology dimensions across exact sequences.
//
// A flattened long exact sequence 0 -> V_0 -> V_1 -> ... -> V_m -> 0 is
// exact iff there are ranks r_i >= 0 with dim V_i = r_{i-1} + r_i and
// r_{-1} = r_m = 0.  Equivalently the alternating partial sums
// s_i = sum_{j<=i} (-1)^{i-j} dim V_j satisfy s_i >= 0 and s_m = 0.
// Dimensions are nonnegative integers, some of them unknown; chi pins and
// forced-zero pins are linear equalities on the same variables.  The solver
// propagates interval bounds to a fixpoint and then certifies each bound by
// an explicit feasible witness, so the returned intervals are exactly the
// projections of the integer feasible region.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"

namespace polyvec::exactseq {

constexpr long long kNoUpperBound = -1;

struct Entry {
    bool known = true;
    long long value = 0; // when known
    int var = -1;        // when unknown

    static Entry of(long long v) { return Entry{true, v, -1}; }
    static Entry of_var(int id) { return Entry{false, 0, id}; }
};

// Graded cohomology dimensions; entries exact integers or bounded unknowns.
struct CohVector {
    std::vector<Entry> entries;

    CohVector() = default;
    explicit CohVector(std::vector<long long> vals) {
        for (long long v : vals) entries.push_back(Entry::of(v));
    }
    size_t size() const { return entries.size(); }
    bool fully_known() const {
        for (const auto& e : entries)
            if (!e.known) return false;
        return true;
    }
    std::vector<long long> values() const {
        std::vector<long long> v;
        for (const auto& e : entries) {
            if (!e.known) throw Error("CohVector has unknown entries");
            v.push_back(e.value);
        }
        return v;
    }
    long long euler_characteristic() const {
        long long chi = 0;
        int s = 1;
        for (const auto& e : entries) {
            if (!e.known) throw Error("euler characteristic of partially unknown vector");
            chi += s * e.value;
            s = -s;
        }
        return chi;
    }
};

// Graded convolution of two fully known vectors.
inline CohVector kunneth(const CohVector& x, const CohVector& y) {
    if (!x.fully_known() || !y.fully_known()) throw Error("kunneth: unknown entries");
    std::vector<long long> out(x.size() + y.size() - 1, 0);
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < y.size(); ++j) out[i + j] += x.entries[i].value * y.entries[j].value;
    return CohVector(out);
}

struct VarState {
    long long lo = 0;
    long long hi = kNoUpperBound; // kNoUpperBound = unbounded above
    std::string label;
};

struct LinearPin {
    std::vector<std::pair<int, long long>> terms; // (var, coeff)
    long long rhs = 0;
    std::string label;
};

struct SolvedVar {
    long long lo = 0, hi = 0;
    bool bounded = true;
    bool determined() const { return bounded && lo == hi; }
};

class ChaseProblem {
public:
    int new_var(std::string label = {}, long long lo = 0, long long hi = kNoUpperBound) {
        vars_.push_back(VarState{lo, hi, std::move(label)});
        return (int)vars_.size() - 1;
    }

    // terms = dims of V_0..V_m for an exact 0 -> V_0 -> ... -> V_m -> 0
    void add_exact_sequence(std::vector<Entry> terms, std::string label = {}) {
        sequences_.push_back({std::move(terms), std::move(label)});
    }

    void pin_value(int var, long long value, std::string label = {}) {
        add_linear_pin({{var, 1}}, value, std::move(label));
    }

    void add_linear_pin(std::vector<std::pair<int, long long>> terms, long long rhs,
                        std::string label = {}) {
        pins_.push_back(LinearPin{std::move(terms), rhs, std::move(label)});
    }

    size_t var_count() const { return vars_.size(); }

    // Exact per-variable bounds; throws Infeasible.  Variables whose feasible
    // projection is genuinely unbounded are reported with bounded = false.
    // Witness search treats an exhausted exploration window conservatively
    // (bound kept loose rather than wrongly tightened).
    std::vector<SolvedVar> solve() const {
        std::vector<VarState> dom = vars_;
        propagate(dom);
        std::vector<SolvedVar> out(dom.size());
        for (size_t v = 0; v < dom.size(); ++v) {
            if (dom[v].hi == kNoUpperBound) {
                out[v] = SolvedVar{dom[v].lo, 0, false};
                continue;
            }
            long long lo = dom[v].lo, hi = dom[v].hi;
            long long tight_lo = lo, tight_hi = hi;
            if (hi - lo > 2000) {
                // domain too large to certify candidate by candidate; the
                // propagated interval is still a sound (possibly loose) bound
                out[v] = SolvedVar{lo, hi, true};
                continue;
            }
            bool found = false;
            for (long long c = lo; c <= hi; ++c) {
                if (feasible_with(dom, (int)v, c) != Feas::No) { tight_lo = c; found = true; break; }
            }
            if (!found) throw Infeasible(describe_var((int)v));
            for (long long c = hi; c >= tight_lo; --c) {
                if (feasible_with(dom, (int)v, c) != Feas::No) { tight_hi = c; break; }
            }
            out[v] = SolvedVar{tight_lo, tight_hi, true};
        }
        return out;
    }

private:
    struct Seq {
        std::vector<Entry> terms;
        std::string label;
    };

    struct Interval {
        long long lo, hi;
        bool unbounded;
    };

    std::vector<VarState> vars_;
    std::vector<Seq> sequences_;
    std::vector<LinearPin> pins_;

    std::string describe_var(int v) const {
        return vars_[v].label.empty() ? ("var#" + std::to_string(v)) : vars_[v].label;
    }

    Interval entry_interval(const std::vector<VarState>& dom, const Entry& e) const {
        if (e.known) return {e.value, e.value, false};
        const auto& d = dom[e.var];
        return {d.lo, d.hi, d.hi == kNoUpperBound};
    }

    void tighten(std::vector<VarState>& dom, int var, long long lo, long long hi, bool hi_valid) const {
        auto& d = dom[var];
        if (lo > d.lo) d.lo = lo;
        if (hi_valid) {
            if (d.hi == kNoUpperBound || hi < d.hi) d.hi = hi;
        }
        if (d.hi != kNoUpperBound && d.lo > d.hi) throw Infeasible(describe_var(var));
    }

    // Interval propagation to a fixpoint over rank recurrences and pins.
    void propagate(std::vector<VarState>& dom) const {
        for (int pass = 0; pass < 256; ++pass) {
            bool changed = false;
            auto before = dom;
            for (const auto& seq : sequences_) propagate_sequence(dom, seq);
            for (const auto& pin : pins_) propagate_pin(dom, pin);
            for (size_t v = 0; v < dom.size(); ++v)
                if (dom[v].lo != before[v].lo || dom[v].hi != before[v].hi) changed = true;
            if (!changed) return;
        }
    }

    void propagate_sequence(std::vector<VarState>& dom, const Seq& seq) const {
        size_t m = seq.terms.size();
        if (m == 0) return;
        // forward rank intervals r_i = dim_i - r_{i-1}, r_i >= 0
        std::vector<Interval> fwd(m);
        Interval prev{0, 0, false};
        for (size_t i = 0; i < m; ++i) {
            Interval d = entry_interval(dom, seq.terms[i]);
            long long lo = (prev.unbounded || d.unbounded) ? 0 : std::max(0LL, d.lo - prev.hi);
            bool ub = d.unbounded;
            long long hi = ub ? 0 : d.hi - prev.lo;
            if (!ub && hi < 0) throw Infeasible("sequence " + seq.label);
            fwd[i] = {lo, ub ? 0 : hi, ub};
            prev = fwd[i];
        }
        if (!fwd[m - 1].unbounded && (fwd[m - 1].lo > 0))
            throw Infeasible("sequence tail " + seq.label);
        // backward rank intervals from r_{m-1} = 0: r_{i} = dim_{i+1} - r_{i+1}
        std::vector<Interval> rback(m);
        rback[m - 1] = {0, 0, false};
        for (size_t i = m - 1; i-- > 0;) {
            Interval d = entry_interval(dom, seq.terms[i + 1]);
            Interval rnext = rback[i + 1];
            long long lo = (d.unbounded || rnext.unbounded) ? 0 : std::max(0LL, d.lo - rnext.hi);
            bool ub = d.unbounded;
            long long hi = ub ? 0 : d.hi - rnext.lo;
            if (!ub && hi < 0) throw Infeasible("sequence " + seq.label);
            rback[i] = {lo, ub ? 0 : hi, ub};
        }
        // combine: r_i in fwd[i] ∩ rback[i]
        std::vector<Interval> r(m);
        for (size_t i = 0; i < m; ++i) {
            long long lo = std::max(fwd[i].unbounded ? 0 : fwd[i].lo, rback[i].unbounded ? 0 : rback[i].lo);
            bool ub = fwd[i].unbounded && rback[i].unbounded;
            long long hi = 0;
            if (!ub) {
                if (fwd[i].unbounded) hi = rback[i].hi;
                else if (rback[i].unbounded) hi = fwd[i].hi;
                else hi = std::min(fwd[i].hi, rback[i].hi);
                if (lo > hi) throw Infeasible("sequence " + seq.label);
            }
            r[i] = {lo, hi, ub};
        }
        // dim_i = r_{i-1} + r_i tightens unknown entries
        for (size_t i = 0; i < m; ++i) {
            if (seq.terms[i].known) continue;
            Interval rp = (i == 0) ? Interval{0, 0, false} : r[i - 1];
            Interval ri = r[i];
            long long lo = rp.lo + ri.lo;
            bool hiv = !rp.unbounded && !ri.unbounded;
            long long hi = hiv ? rp.hi + ri.hi : 0;
            tighten(dom, seq.terms[i].var, lo, hi, hiv);
        }
    }

    static long long div_floor(long long a, long long b) {
        long long q = a / b, r = a % b;
        return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
    }
    static long long div_ceil(long long a, long long b) { return -div_floor(-a, b); }

    void propagate_pin(std::vector<VarState>& dom, const LinearPin& pin) const {
        // For each variable: c*x = rhs - sum(others)
        for (size_t t = 0; t < pin.terms.size(); ++t) {
            auto [v, c] = pin.terms[t];
            if (c == 0) continue;
            long long rest_lo = 0, rest_hi = 0;
            bool rest_bounded = true;
            for (size_t s = 0; s < pin.terms.size() && rest_bounded; ++s) {
                if (s == t) continue;
                auto [w, cw] = pin.terms[s];
                const auto& d = dom[w];
                if (d.hi == kNoUpperBound) {
                    rest_bounded = false;
                } else {
                    rest_lo += cw > 0 ? cw * d.lo : cw * d.hi;
                    rest_hi += cw > 0 ? cw * d.hi : cw * d.lo;
                }
            }
            if (!rest_bounded) continue;
            // c*x in [rhs - rest_hi, rhs - rest_lo]
            long long num_lo = pin.rhs - rest_hi, num_hi = pin.rhs - rest_lo;
            long long xlo, xhi;
            if (c > 0) {
                xlo = div_ceil(num_lo, c);
                xhi = div_floor(num_hi, c);
            } else {
                xlo = div_ceil(num_hi, c);
                xhi = div_floor(num_lo, c);
            }
            tighten(dom, v, xlo, xhi, true);
        }
    }

    bool check_full(const std::vector<long long>& x) const {
        for (const auto& seq : sequences_) {
            long long r = 0;
            for (const auto& e : seq.terms) {
                long long d = e.known ? e.value : x[e.var];
                r = d - r;
                if (r < 0) return false;
            }
            if (r != 0) return false;
        }
        for (const auto& pin : pins_) {
            long long acc = 0;
            for (auto [v, c] : pin.terms) acc += c * x[v];
            if (acc != pin.rhs) return false;
        }
        return true;
    }

    enum class Feas { No, Yes, Unknown };

    Feas feasible_with(const std::vector<VarState>& dom0, int fixed_var, long long value) const {
        std::vector<VarState> dom = dom0;
        try {
            tighten(dom, fixed_var, value, value, true);
            propagate(dom);
        } catch (const Infeasible&) {
            return Feas::No;
        }
        // DFS over remaining variables, bounded ones first by domain width;
        // unbounded variables explore a finite window only, so a failed search
        // in their presence is inconclusive.
        std::vector<long long> x(dom.size());
        std::vector<int> order;
        bool has_unbounded = false;
        for (size_t v = 0; v < dom.size(); ++v) {
            order.push_back((int)v);
            if (dom[v].hi == kNoUpperBound) has_unbounded = true;
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            long long wa = dom[a].hi == kNoUpperBound ? (1LL << 40) : dom[a].hi - dom[a].lo;
            long long wb = dom[b].hi == kNoUpperBound ? (1LL << 40) : dom[b].hi - dom[b].lo;
            return wa < wb;
        });
        long long budget = 60'000;
        bool exhausted = false;
        constexpr long long kWindow = 64;
        std::function<bool(size_t, std::vector<VarState>&)> dfs =
            [&](size_t idx, std::vector<VarState>& d) -> bool {
            if (--budget < 0) { exhausted = true; return false; }
            if (idx == order.size()) {
                for (size_t v = 0; v < d.size(); ++v) x[v] = d[v].lo;
                return check_full(x);
            }
            int v = order[idx];
            long long cap = d[v].hi == kNoUpperBound ? d[v].lo + kWindow : d[v].hi;
            for (long long c = d[v].lo; c <= cap; ++c) {
                std::vector<VarState> d2 = d;
                try {
                    tighten(d2, v, c, c, true);
                    propagate(d2);
                } catch (const Infeasible&) {
                    continue;
                }
                if (dfs(idx + 1, d2)) return true;
                if (exhausted) return false;
            }
            return false;
        };
        std::vector<VarState> d = dom;
        bool ok = dfs(0, d);
        if (ok) return Feas::Yes;
        return (has_unbounded || exhausted) ? Feas::Unknown : Feas::No;
    }
};

// --- High-level operations shared by both engines -------------------------

// Owns a ChaseProblem plus the CohVectors whose entries refer to it.
struct ChaseContext {
    ChaseProblem problem;
    std::vector<SolvedVar> solution;
    bool solved = false;

    CohVector fresh_vector(size_t len, const std::string& label) {
        CohVector v;
        for (size_t i = 0; i < len; ++i)
            v.entries.push_back(Entry::of_var(problem.new_var(label + "[" + std::to_string(i) + "]")));
        return v;
    }

    void solve() {
        solution = problem.solve();
        solved = true;
    }

    // Replace determined unknowns by their values; keep bounds otherwise.
    struct ResolvedEntry {
        bool determined;
        long long value; // when determined
        long long lo, hi;
        bool bounded;
    };
    ResolvedEntry resolve(const Entry& e) const {
        if (e.known) return {true, e.value, e.value, e.value, true};
        if (!solved) throw Error("chase context not solved");
        const auto& s = solution[e.var];
        if (s.determined()) return {true, s.lo, s.lo, s.lo, true};
        return {false, 0, s.lo, s.hi, s.bounded};
    }
};

// Split the Koszul resolution 0 -> K_r -> ... -> K_0 -> C -> 0 into short
// exact sequences with syzygy cohomologies as fresh unknowns and register
// all LES constraints.  ambient[j] = H^*(F, K_j), j = 0..r; the returned
// vector is H^* of the restriction, with degrees above dim_x pinned to zero.
inline CohVector koszul_restrict(ChaseContext& ctx, const std::vector<CohVector>& ambient,
                                 int dim_f, int dim_x, const std::string& tag = {}) {
    int r = (int)ambient.size() - 1;
    if (r < 0) throw Error("koszul_restrict: empty resolution");
    for (const auto& v : ambient)
        if ((int)v.size() != dim_f + 1) throw Error("koszul_restrict: ambient vector has wrong length");
    if (r == 0) return ambient[0];

    CohVector target = ctx.fresh_vector(dim_f + 1, tag + ".restriction");
    for (int i = dim_x + 1; i <= dim_f; ++i)
        ctx.problem.pin_value(target.entries[i].var, 0, tag + ".dim-pin");

    // B_j = image of K_j -> K_{j-1}; B_r = K_r, B_0 = C.
    std::vector<CohVector> b(r + 1);
    b[r] = ambient[r];
    b[0] = target;
    for (int j = 1; j < r; ++j) b[j] = ctx.fresh_vector(dim_f + 1, tag + ".syz" + std::to_string(j));

    auto add_ses = [&](const CohVector& a, const CohVector& mid, const CohVector& c, const std::string& lbl) {
        // 0 -> A -> M -> C -> 0 flattened long exact sequence
        std::vector<Entry> terms;
        size_t n = mid.size();
        for (size_t i = 0; i < n; ++i) {
            terms.push_back(a.entries[i]);
            terms.push_back(mid.entries[i]);
            terms.push_back(c.entries[i]);
        }
        ctx.problem.add_exact_sequence(std::move(terms), lbl);
    };
    for (int j = r - 1; j >= 0; --j)
        add_ses(b[j + 1], ambient[j], b[j], tag + ".ses" + std::to_string(j));
    return target;
}

// LES of the twisted conormal sequence; degree-3 entry pinned to zero
// (Kodaira-Akizuki-Nakano vanishing) and the closed-form chi value pinned.
inline CohVector conormal_assemble(ChaseContext& ctx, const CohVector& first,
                                   const CohVector& second, long long chi_wedge2,
                                   int dim_x = 3, const std::string& tag = {}) {
    size_t n = std::max(first.size(), second.size());
    auto pad = [&](const CohVector& v) {
        CohVector w = v;
        while (w.size() < n) w.entries.push_back(Entry::of(0));
        return w;
    };
    CohVector a = pad(first), m = pad(second);
    CohVector c = ctx.fresh_vector(n, tag + ".wedge2T");
    for (size_t i = dim_x; i < n; ++i) ctx.problem.pin_value(c.entries[i].var, 0, tag + ".kan-pin");
    std::vector<Entry> terms;
    for (size_t i = 0; i < n; ++i) {
        terms.push_back(a.entries[i]);
        terms.push_back(m.entries[i]);
        terms.push_back(c.entries[i]);
    }
    ctx.problem.add_exact_sequence(std::move(terms), tag + ".conormal");
    // chi pin: c0 - c1 + c2 - ... = chi_wedge2
    std::vector<std::pair<int, long long>> pin;
    long long sign = 1, known_part = 0;
    for (size_t i = 0; i < n; ++i) {
        if (c.entries[i].known) known_part += sign * c.entries[i].value;
        else pin.push_back({c.entries[i].var, sign});
        sign = -sign;
    }
    ctx.problem.add_linear_pin(std::move(pin), chi_wedge2 - known_part, tag + ".chi-pin");
    return c;
}

// Ideal-sheaf chase of Cor 4.3: 0 -> G⊗I_Z -> G -> G|_Z -> 0.  Returns the
// unknown vector for H^*(Y, G⊗I_Z) and registers the LES.
inline CohVector blowup_reduce(ChaseContext& ctx, const CohVector& y_coh,
                               const CohVector& z_restriction, const std::string& tag = {}) {
    size_t n = y_coh.size();
    CohVector z = z_restriction;
    while (z.size() < n) z.entries.push_back(Entry::of(0));
    CohVector target = ctx.fresh_vector(n, tag + ".idealtwist");
    std::vector<Entry> terms;
    for (size_t i = 0; i < n; ++i) {
        terms.push_back(target.entries[i]);
        terms.push_back(y_coh.entries[i]);
        terms.push_back(z.entries[i]);
    }
    ctx.problem.add_exact_sequence(std::move(terms), tag + ".ideal-ses");
    return target;
}

} // namespace polyvec::exactseq
