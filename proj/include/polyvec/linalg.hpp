#pragma once

// Exact small-scale linear algebra over Z and Q.  Everything in the engines
// (simplicial cohomology ranks, Cartier data, class lattices) runs through
// these routines, so they favour correctness over speed: rationals are kept
// normalised with __int128 intermediates and overflow asserts.

#include <cassert>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "errors.hpp"

namespace polyvec {

using i64 = long long;
using i128 = __int128_t;

inline i64 gcd_i64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) { i64 t = a % b; a = b; b = t; }
    return a;
}

inline i64 checked_i64(i128 v) {
    assert(v <= INT64_MAX && v >= INT64_MIN && "integer overflow in exact arithmetic");
    return static_cast<i64>(v);
}

struct Rat {
    i64 num = 0, den = 1;

    Rat() = default;
    Rat(i64 n) : num(n), den(1) {}
    Rat(i64 n, i64 d) : num(n), den(d) { normalize(); }

    void normalize() {
        assert(den != 0);
        if (den < 0) { num = -num; den = -den; }
        i64 g = gcd_i64(num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    friend Rat operator+(const Rat& a, const Rat& b) {
        i128 n = (i128)a.num * b.den + (i128)b.num * a.den;
        i128 d = (i128)a.den * b.den;
        return reduce(n, d);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        i128 n = (i128)a.num * b.den - (i128)b.num * a.den;
        i128 d = (i128)a.den * b.den;
        return reduce(n, d);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return reduce((i128)a.num * b.num, (i128)a.den * b.den);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        assert(b.num != 0);
        return reduce((i128)a.num * b.den, (i128)a.den * b.num);
    }
    Rat operator-() const { return Rat(-num, den); }
    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    bool is_zero() const { return num == 0; }
    bool is_integer() const { return den == 1; }

    static Rat reduce(i128 n, i128 d) {
        assert(d != 0);
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        Rat r;
        r.num = checked_i64(n);
        r.den = checked_i64(d);
        return r;
    }
    static i128 gcd128(i128 a, i128 b) {
        while (b) { i128 t = a % b; a = b; b = t; }
        return a;
    }
};

using QMatrix = std::vector<std::vector<Rat>>;
using ZMatrix = std::vector<std::vector<i64>>;
using ZVector = std::vector<i64>;

inline QMatrix to_q(const ZMatrix& m) {
    QMatrix q(m.size());
    for (size_t i = 0; i < m.size(); ++i) {
        q[i].reserve(m[i].size());
        for (i64 v : m[i]) q[i].push_back(Rat(v));
    }
    return q;
}

// In-place row echelon; returns rank and records pivot columns.
inline int row_echelon(QMatrix& m, std::vector<int>* pivot_cols = nullptr) {
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        Rat inv = Rat(1) / m[r][c];
        for (size_t j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Rat f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
        }
        if (pivot_cols) pivot_cols->push_back((int)c);
        ++r;
    }
    return (int)r;
}

inline int rank_q(QMatrix m) { return row_echelon(m); }

inline int rank_z(const ZMatrix& m) {
    QMatrix q = to_q(m);
    return row_echelon(q);
}

// Basis of the right kernel {x : m x = 0} as rows.
inline QMatrix kernel_q(QMatrix m) {
    if (m.empty()) return {};
    size_t cols = m[0].size();
    std::vector<int> piv;
    row_echelon(m, &piv);
    std::vector<bool> is_piv(cols, false);
    for (int c : piv) is_piv[c] = true;
    QMatrix basis;
    for (size_t fc = 0; fc < cols; ++fc) {
        if (is_piv[fc]) continue;
        std::vector<Rat> v(cols, Rat(0));
        v[fc] = Rat(1);
        // back-substitute pivot variables
        for (size_t pr = 0; pr < piv.size(); ++pr) {
            v[piv[pr]] = -m[pr][fc];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve m x = b over Q; nullopt if inconsistent.
inline std::optional<std::vector<Rat>> solve_q(QMatrix m, std::vector<Rat> b) {
    size_t rows = m.size();
    if (rows == 0) return std::vector<Rat>{};
    size_t cols = m[0].size();
    for (size_t i = 0; i < rows; ++i) m[i].push_back(b[i]);
    std::vector<int> piv;
    row_echelon(m, &piv);
    // Inconsistent if a pivot lands in the augmented column.
    if (!piv.empty() && piv.back() == (int)cols) return std::nullopt;
    std::vector<Rat> x(cols, Rat(0));
    for (size_t pr = 0; pr < piv.size(); ++pr) x[piv[pr]] = m[pr][cols];
    return x;
}

// Hermite-style integer solve: find any x in Z^n with A x = b, or nullopt.
// Column operations with a transformation matrix; sizes here are tiny.
inline std::optional<ZVector> solve_z(ZMatrix a, ZVector b) {
    size_t rows = a.size();
    if (rows == 0) return ZVector{};
    size_t cols = a[0].size();
    // U tracks column ops: a_orig * U = a_current
    ZMatrix u(cols, ZVector(cols, 0));
    for (size_t i = 0; i < cols; ++i) u[i][i] = 1;

    auto col_addmul = [&](size_t dst, size_t src, i64 f) {
        for (size_t i = 0; i < rows; ++i) a[i][dst] = checked_i64((i128)a[i][dst] + (i128)f * a[i][src]);
        for (size_t i = 0; i < cols; ++i) u[i][dst] = checked_i64((i128)u[i][dst] + (i128)f * u[i][src]);
    };
    auto col_swap = [&](size_t x, size_t y) {
        for (size_t i = 0; i < rows; ++i) std::swap(a[i][x], a[i][y]);
        for (size_t i = 0; i < cols; ++i) std::swap(u[i][x], u[i][y]);
    };
    auto col_neg = [&](size_t x) {
        for (size_t i = 0; i < rows; ++i) a[i][x] = -a[i][x];
        for (size_t i = 0; i < cols; ++i) u[i][x] = -u[i][x];
    };

    size_t r = 0, c = 0;
    std::vector<std::pair<size_t, size_t>> pivots;
    for (; r < rows && c < cols; ++r) {
        // eliminate row r to a single nonzero in column c
        while (true) {
            size_t nz = cols;
            for (size_t j = c; j < cols; ++j)
                if (a[r][j] != 0 && (nz == cols || std::llabs(a[r][j]) < std::llabs(a[r][nz]))) nz = j;
            if (nz == cols) break; // all zero in this row
            col_swap(c, nz);
            if (a[r][c] < 0) col_neg(c);
            bool clean = true;
            for (size_t j = c + 1; j < cols; ++j) {
                if (a[r][j] != 0) {
                    i64 q = a[r][j] / a[r][c];
                    col_addmul(j, c, -q);
                    if (a[r][j] != 0) clean = false;
                }
            }
            if (clean) break;
        }
        if (c < cols && a[r][c] != 0) {
            pivots.push_back({r, c});
            ++c;
        }
    }
    // forward-substitute: y with (a_current) y = b, y free beyond pivots
    ZVector y(cols, 0);
    std::vector<i64> residual = b;
    for (auto [pr, pc] : pivots) {
        // a is lower-triangular-ish on pivot rows: account for earlier columns
        i128 acc = residual[pr];
        for (size_t j = 0; j < pc; ++j) acc -= (i128)a[pr][j] * y[j];
        if (a[pr][pc] == 0 || acc % a[pr][pc] != 0) return std::nullopt;
        y[pc] = checked_i64(acc / a[pr][pc]);
    }
    // verify (rows without pivots must be consistent)
    for (size_t i = 0; i < rows; ++i) {
        i128 acc = 0;
        for (size_t j = 0; j < cols; ++j) acc += (i128)a[i][j] * y[j];
        if (acc != (i128)b[i]) return std::nullopt;
    }
    ZVector x(cols, 0);
    for (size_t i = 0; i < cols; ++i) {
        i128 acc = 0;
        for (size_t j = 0; j < cols; ++j) acc += (i128)u[i][j] * y[j];
        x[i] = checked_i64(acc);
    }
    return x;
}

// Saturated integer kernel {x in Z^n : a x = 0} as rows, via column
// reduction with a unimodular transform.
inline ZMatrix kernel_z(ZMatrix a) {
    size_t rows = a.size();
    if (rows == 0) return {};
    size_t cols = a[0].size();
    ZMatrix u(cols, ZVector(cols, 0));
    for (size_t i = 0; i < cols; ++i) u[i][i] = 1;
    auto col_addmul = [&](size_t dst, size_t src, i64 f) {
        for (size_t i = 0; i < rows; ++i) a[i][dst] = checked_i64((i128)a[i][dst] + (i128)f * a[i][src]);
        for (size_t i = 0; i < cols; ++i) u[i][dst] = checked_i64((i128)u[i][dst] + (i128)f * u[i][src]);
    };
    auto col_swap = [&](size_t x, size_t y) {
        for (size_t i = 0; i < rows; ++i) std::swap(a[i][x], a[i][y]);
        for (size_t i = 0; i < cols; ++i) std::swap(u[i][x], u[i][y]);
    };
    size_t c = 0;
    for (size_t r = 0; r < rows && c < cols; ++r) {
        while (true) {
            size_t nz = cols;
            for (size_t j = c; j < cols; ++j)
                if (a[r][j] != 0 && (nz == cols || std::llabs(a[r][j]) < std::llabs(a[r][nz]))) nz = j;
            if (nz == cols) break;
            col_swap(c, nz);
            bool clean = true;
            for (size_t j = c + 1; j < cols; ++j) {
                if (a[r][j] != 0) {
                    i64 q = a[r][j] / a[r][c];
                    col_addmul(j, c, -q);
                    if (a[r][j] != 0) clean = false;
                }
            }
            if (clean) break;
        }
        if (a[r][c] != 0) ++c;
    }
    ZMatrix ker;
    for (size_t j = c; j < cols; ++j) {
        ZVector v(cols);
        for (size_t i = 0; i < cols; ++i) v[i] = u[i][j];
        ker.push_back(v);
    }
    return ker;
}

// Invariant factors of an integer matrix (Smith normal form diagonal).
inline std::vector<i64> smith_invariants(ZMatrix a) {
    size_t rows = a.size();
    if (rows == 0) return {};
    size_t cols = a[0].size();
    std::vector<i64> inv;
    size_t top = 0;
    while (top < rows && top < cols) {
        // find smallest nonzero entry in the submatrix
        size_t pi = rows, pj = cols;
        for (size_t i = top; i < rows; ++i)
            for (size_t j = top; j < cols; ++j)
                if (a[i][j] != 0 && (pi == rows || std::llabs(a[i][j]) < std::llabs(a[pi][pj]))) { pi = i; pj = j; }
        if (pi == rows) break;
        std::swap(a[top], a[pi]);
        for (size_t i = 0; i < rows; ++i) std::swap(a[i][top], a[i][pj]);
        bool again = false;
        for (size_t i = top + 1; i < rows; ++i) {
            if (a[i][top] != 0) {
                i64 q = a[i][top] / a[top][top];
                for (size_t j = top; j < cols; ++j) a[i][j] = checked_i64((i128)a[i][j] - (i128)q * a[top][j]);
                if (a[i][top] != 0) again = true;
            }
        }
        for (size_t j = top + 1; j < cols; ++j) {
            if (a[top][j] != 0) {
                i64 q = a[top][j] / a[top][top];
                for (size_t i = top; i < rows; ++i) a[i][j] = checked_i64((i128)a[i][j] - (i128)q * a[i][top]);
                if (a[top][j] != 0) again = true;
            }
        }
        if (again) continue;
        inv.push_back(std::llabs(a[top][top]));
        ++top;
    }
    return inv;
}

inline i64 det3_sign_free(const ZMatrix& m) {
    // determinant of a small square matrix via fraction-free elimination
    size_t n = m.size();
    QMatrix q = to_q(m);
    Rat det(1);
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && q[piv][c].is_zero()) ++piv;
        if (piv == n) return 0;
        if (piv != c) { std::swap(q[piv], q[c]); det = -det; }
        det = det * q[c][c];
        Rat inv = Rat(1) / q[c][c];
        for (size_t i = c + 1; i < n; ++i) {
            Rat f = q[i][c] * inv;
            for (size_t j = c; j < n; ++j) q[i][j] = q[i][j] - f * q[c][j];
        }
    }
    assert(det.is_integer());
    return det.num;
}

} // namespace polyvec
