#pragma once

// GL(n) weight combinatorics: Weyl dimension formula, Littlewood-Richardson
// expansion (tableau rule, negative entries handled by uniform shift), and
// partition helpers used by the Borel-Weil-Bott engine.

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace polyvec::bwb {

using Weight = std::vector<long long>; // weakly decreasing integer sequence

inline bool weakly_decreasing(const Weight& w) {
    for (size_t i = 1; i < w.size(); ++i)
        if (w[i] > w[i - 1]) return false;
    return true;
}

inline long long weight_sum(const Weight& w) {
    long long s = 0;
    for (auto v : w) s += v;
    return s;
}

// dim of the GL(n) irreducible with highest weight lambda (padded with zeros
// when all entries are >= 0; otherwise the length must equal n):
// prod_{i<j} (l_i - l_j + j - i) / (j - i)
inline long long weyl_dim(Weight lambda, int n) {
    if ((int)lambda.size() > n) {
        // trailing zeros may be dropped legitimately
        for (size_t i = n; i < lambda.size(); ++i)
            if (lambda[i] != 0) throw Error("weyl_dim: weight longer than n");
        lambda.resize(n);
    }
    if ((int)lambda.size() < n) {
        for (auto v : lambda)
            if (v < 0) throw Error("weyl_dim: negative weight needs full length");
        lambda.resize(n, 0);
    }
    if (!weakly_decreasing(lambda)) throw Error("weyl_dim: weight not dominant");
    i128 num = 1, den = 1;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            num *= (i128)(lambda[i] - lambda[j] + j - i);
            den *= (i128)(j - i);
            i128 g = Rat::gcd128(num < 0 ? -num : num, den < 0 ? -den : den);
            if (g > 1) { num /= g; den /= g; }
        }
    }
    assert(den == 1);
    return checked_i64(num);
}

// --- Littlewood-Richardson rule -------------------------------------------

namespace detail {

// Count LR skew tableaux of shape nu/lambda with content mu: semistandard
// filling whose reverse reading word is a lattice word.
inline long long lr_coefficient(const Weight& nu, const Weight& lambda, const Weight& mu) {
    int rows = (int)nu.size();
    std::vector<long long> lam(rows, 0);
    for (size_t i = 0; i < lambda.size() && (int)i < rows; ++i) lam[i] = lambda[i];
    // cells in reading order: top row to bottom, right to left within a row
    struct Cell { int r, c; };
    std::vector<Cell> cells;
    for (int r = 0; r < rows; ++r)
        for (long long c = nu[r] - 1; c >= lam[r]; --c) cells.push_back({r, (int)c});
    int k = (int)mu.size();
    std::vector<long long> remaining(mu.begin(), mu.end());
    std::vector<long long> placed(k, 0);
    // fill[r][c] for skew cells
    std::map<std::pair<int, int>, int> fill;
    long long count = 0;

    std::function<void(size_t)> rec = [&](size_t idx) {
        if (idx == cells.size()) { ++count; return; }
        auto [r, c] = cells[idx];
        for (int v = 0; v < k; ++v) {
            if (remaining[v] == 0) continue;
            // lattice word: after placing v, #v placed so far must stay <= #(v-1)
            if (v > 0 && placed[v] + 1 > placed[v - 1]) continue;
            // row weakly increasing left->right: cell to the right (filled earlier) >= v
            auto right = fill.find({r, c + 1});
            if (right != fill.end() && right->second < v) continue;
            // column strictly increasing downwards: cell above < v
            if (r > 0 && (long long)c < nu[r - 1]) {
                if ((long long)c >= lam[r - 1]) {
                    auto above = fill.find({r - 1, c});
                    if (above == fill.end()) continue; // shouldn't happen in reading order
                    if (above->second >= v) continue;
                }
                // cell above is in lambda: no constraint
            }
            fill[{r, c}] = v;
            --remaining[v];
            ++placed[v];
            rec(idx + 1);
            ++remaining[v];
            --placed[v];
            fill.erase({r, c});
        }
    };
    rec(0);
    return count;
}

inline void enumerate_nu(const Weight& lambda, const Weight& mu, int max_rows,
                         std::vector<Weight>& out) {
    // candidates: nu ⊇ lambda with |nu/lambda| = |mu|, each row grows by at
    // most mu_1, at most max_rows rows
    long long boxes = weight_sum(mu);
    Weight lam = lambda;
    lam.resize(max_rows, 0);
    Weight nu(max_rows, 0);
    std::function<void(int, long long)> rec = [&](int row, long long left) {
        if (row == max_rows) {
            if (left == 0) out.push_back(nu);
            return;
        }
        long long hi = (row == 0) ? lam[0] + mu[0] : std::min(nu[row - 1], lam[row] + mu[0]);
        for (long long v = lam[row]; v <= hi && v - lam[row] <= left; ++v) {
            nu[row] = v;
            rec(row + 1, left - (v - lam[row]));
        }
        nu[row] = lam[row];
    };
    rec(0, boxes);
}

} // namespace detail

// Littlewood-Richardson expansion of Schur(lambda) * Schur(mu) for GL(rank),
// truncated to at most `rank` rows.  Negative entries allowed via uniform
// shift (tensoring by a power of the determinant).
inline std::map<Weight, long long> lr_tensor(Weight lambda, Weight mu, int rank) {
    if ((int)lambda.size() > rank || (int)mu.size() > rank)
        throw Error("lr_tensor: weight longer than rank");
    lambda.resize(rank, 0);
    mu.resize(rank, 0);
    if (!weakly_decreasing(lambda) || !weakly_decreasing(mu))
        throw Error("lr_tensor: weights must be weakly decreasing");
    long long shift_l = std::min(0LL, lambda.back());
    long long shift_m = std::min(0LL, mu.back());
    for (auto& v : lambda) v -= shift_l;
    for (auto& v : mu) v -= shift_m;
    // strip trailing zeros of mu for the tableau enumeration
    Weight mu_part = mu;
    while (!mu_part.empty() && mu_part.back() == 0) mu_part.pop_back();
    std::map<Weight, long long> result;
    if (mu_part.empty()) {
        Weight nu = lambda;
        for (auto& v : nu) v += shift_l + shift_m;
        result[nu] = 1;
        return result;
    }
    std::vector<Weight> candidates;
    detail::enumerate_nu(lambda, mu_part, rank, candidates);
    for (const auto& nu : candidates) {
        long long c = detail::lr_coefficient(nu, lambda, mu_part);
        if (c > 0) {
            Weight shifted = nu;
            for (auto& v : shifted) v += shift_l + shift_m;
            result[shifted] += c;
        }
    }
    return result;
}

// Conjugate partition (entries must be >= 0).
inline Weight conjugate(const Weight& lambda, int max_cols) {
    Weight out;
    for (long long c = 1; c <= max_cols; ++c) {
        long long rows = 0;
        for (auto v : lambda)
            if (v >= c) ++rows;
        if (rows == 0) break;
        out.push_back(rows);
    }
    return out;
}

// All partitions of n with at most max_rows rows and entries at most max_col.
inline std::vector<Weight> partitions_of(long long n, int max_rows, long long max_col) {
    std::vector<Weight> out;
    Weight cur;
    std::function<void(long long, long long)> rec = [&](long long left, long long cap) {
        if (left == 0) { out.push_back(cur); return; }
        if ((int)cur.size() == max_rows) return;
        for (long long v = std::min(left, cap); v >= 1; --v) {
            cur.push_back(v);
            rec(left - v, v);
            cur.pop_back();
        }
    };
    rec(n, std::min<long long>(n, max_col));
    return out;
}

} // namespace polyvec::bwb
