#include <doctest.h>

#include <map>
#include <vector>

#include <polyvec/weights.hpp>

using namespace polyvec;
using namespace polyvec::bwb;

namespace {

// Independent oracle: multiply Schur polynomials in `rank` variables via
// explicit SSYT monomial expansion, then peel leading partitions.
using Poly = std::map<std::vector<int>, long long>; // exponent vector -> coeff

Poly schur_poly(const Weight& lambda, int rank) {
    // enumerate SSYT of shape lambda with entries in 1..rank
    Poly out;
    int rows = (int)lambda.size();
    std::vector<std::vector<int>> t(rows);
    for (int r = 0; r < rows; ++r) t[r].assign((size_t)lambda[r], 0);
    std::function<void(int, int)> rec = [&](int r, int c) {
        if (r == rows) {
            std::vector<int> expo(rank, 0);
            for (const auto& row : t)
                for (int v : row) expo[v - 1]++;
            out[expo]++;
            return;
        }
        int nr = r, nc = c + 1;
        if (nc >= (int)t[r].size()) { nr = r + 1; nc = 0; }
        int lo = 1;
        if (c > 0) lo = std::max(lo, t[r][c - 1]);
        if (r > 0 && c < (int)t[r - 1].size()) lo = std::max(lo, t[r - 1][c] + 1);
        for (int v = lo; v <= rank; ++v) {
            t[r][c] = v;
            rec(nr, nc);
        }
    };
    if (rows == 0) { out[std::vector<int>(rank, 0)] = 1; return out; }
    rec(0, 0);
    return out;
}

std::map<Weight, long long> schur_product_oracle(const Weight& lambda, const Weight& mu, int rank) {
    Poly p = schur_poly(lambda, rank), q = schur_poly(mu, rank), prod;
    for (const auto& [ea, ca] : p)
        for (const auto& [eb, cb] : q) {
            std::vector<int> e(rank);
            for (int i = 0; i < rank; ++i) e[i] = ea[i] + eb[i];
            prod[e] += ca * cb;
        }
    // peel: repeatedly subtract coeff * schur(leading dominant exponent)
    std::map<Weight, long long> result;
    while (!prod.empty()) {
        // leading = lexicographically largest exponent with nonzero coeff
        auto it = prod.end();
        do { --it; } while (it->second == 0 && it != prod.begin());
        if (it->second == 0) break;
        std::vector<int> e = it->first;
        long long c = it->second;
        Weight nu(e.begin(), e.end());
        // dominant check
        for (size_t i = 1; i < nu.size(); ++i) REQUIRE(nu[i] <= nu[i - 1]);
        while (!nu.empty() && nu.back() == 0) nu.pop_back();
        result[nu] += c;
        Poly s = schur_poly(nu, rank);
        for (const auto& [es, cs] : s) {
            prod[es] -= c * cs;
            if (prod[es] == 0) prod.erase(es);
        }
    }
    return result;
}

} // namespace

TEST_CASE("weyl dimension formula") {
    CHECK(weyl_dim({1, 0}, 2) == 2);
    CHECK(weyl_dim({2, 0, 0}, 3) == 6);
    CHECK(weyl_dim({1, 1, 0, 0, 0}, 5) == 10);
    CHECK(weyl_dim({1, 0, 0, -1}, 4) == 15); // adjoint of sl4
    CHECK(weyl_dim({}, 4) == 1);
    // SSYT count cross-check for small shapes
    for (int rank = 2; rank <= 4; ++rank) {
        for (const auto& lam : partitions_of(4, rank, 4)) {
            long long ssyt = 0;
            for (const auto& [e, c] : schur_poly(lam, rank)) ssyt += c;
            CHECK(weyl_dim(lam, rank) == ssyt);
        }
    }
}

TEST_CASE("lr_tensor basics") {
    auto r = lr_tensor({1, 0}, {1, 0}, 2);
    CHECK(r.size() == 2);
    CHECK(r.at({2, 0}) == 1);
    CHECK(r.at({1, 1}) == 1);

    auto r2 = lr_tensor({2, 1}, {1, 0}, 3);
    CHECK(r2.size() == 3);
    CHECK(r2.at({3, 1, 0}) == 1);
    CHECK(r2.at({2, 2, 0}) == 1);
    CHECK(r2.at({2, 1, 1}) == 1);

    auto r3 = lr_tensor({1, 1}, {1, 1}, 2);
    CHECK(r3.size() == 1);
    CHECK(r3.at({2, 2}) == 1);
}

TEST_CASE("lr_tensor with negative entries via uniform shift") {
    // U ⊗ U^v on GL(2): (0,-1) ⊗ (1,0) = (1,-1) ⊕ (0,0)
    auto r = lr_tensor({0, -1}, {1, 0}, 2);
    CHECK(r.size() == 2);
    CHECK(r.at({1, -1}) == 1);
    CHECK(r.at({0, 0}) == 1);
}

TEST_CASE("lr_tensor agrees with schur polynomial oracle up to 6 boxes") {
    for (int rank = 2; rank <= 3; ++rank) {
        for (int na = 0; na <= 4; ++na) {
            for (int nb = 0; na + nb <= 6; ++nb) {
                for (const auto& lam : partitions_of(na, rank, na)) {
                    for (const auto& mu : partitions_of(nb, rank, nb)) {
                        auto got = lr_tensor(lam, mu, rank);
                        auto want = schur_product_oracle(lam, mu, rank);
                        // normalize: strip trailing zeros from keys of `got`
                        std::map<Weight, long long> gotn;
                        for (const auto& [key, v] : got) {
                            Weight k = key;
                            while (!k.empty() && k.back() == 0) k.pop_back();
                            gotn[k] += v;
                        }
                        CHECK(gotn == want);
                    }
                }
            }
        }
    }
}

TEST_CASE("lr_tensor dimension bookkeeping") {
    // dim multiplicativity: sum over nu of c * dim(nu) = dim(lambda)*dim(mu)
    for (int rank = 2; rank <= 4; ++rank) {
        Weight lam = {2, 1}, mu = {1, 1};
        if ((int)lam.size() > rank) continue;
        auto prod = lr_tensor(lam, mu, rank);
        long long total = 0;
        for (const auto& [nu, c] : prod) total += c * weyl_dim(nu, rank);
        CHECK(total == weyl_dim(lam, rank) * weyl_dim(mu, rank));
    }
}

TEST_CASE("conjugate partition") {
    CHECK(conjugate({3, 1}, 3) == Weight{2, 1, 1});
    CHECK(conjugate({2, 2}, 2) == Weight{2, 2});
    CHECK(conjugate({1, 1, 1}, 1) == Weight{3});
}
