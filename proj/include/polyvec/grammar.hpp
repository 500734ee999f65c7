#pragma once

// Text grammar for ambient factors and bundle expressions, mirroring the
// table notation one-to-one: factors "Gr(2,4)xP(3)", summands as box
// products over tokens U, Udual, Q, Qdual, wedge2Udual, O(t1,...,tf) with
// ^m multiplicities, joined by '+'.

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "bwb.hpp"
#include "errors.hpp"

namespace polyvec::bwb {

namespace grammar_detail {

inline std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

// split on a separator character at paren depth zero
inline std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(strip(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(strip(cur));
    return out;
}

inline std::vector<long long> parse_int_list(const std::string& s, const std::string& ctx) {
    std::vector<long long> out;
    std::string cur;
    for (char c : strip(s)) {
        if (c == ',') {
            if (cur.empty()) throw Error("bad integer list in " + ctx);
            out.push_back(std::stoll(cur));
            cur.clear();
        } else if (isdigit((unsigned char)c) || c == '-' || c == '+') {
            cur += c;
        } else if (c != ' ') {
            throw Error("bad character in integer list: " + ctx);
        }
    }
    if (!cur.empty()) out.push_back(std::stoll(cur));
    return out;
}

} // namespace grammar_detail

inline Factors parse_factors(const std::string& text) {
    using namespace grammar_detail;
    Factors out;
    for (const auto& tok : split_top(text, 'x')) {
        if (tok.rfind("Gr(", 0) == 0 && tok.back() == ')') {
            auto args = parse_int_list(tok.substr(3, tok.size() - 4), tok);
            if (args.size() != 2 || args[0] < 1 || args[1] <= args[0])
                throw Error("bad Grassmannian factor: " + tok);
            out.push_back({(int)args[0], (int)args[1]});
        } else if (tok.rfind("P(", 0) == 0 && tok.back() == ')') {
            auto args = parse_int_list(tok.substr(2, tok.size() - 3), tok);
            if (args.size() != 1 || args[0] < 1) throw Error("bad projective factor: " + tok);
            out.push_back({1, (int)args[0] + 1});
        } else {
            throw Error("unknown factor: " + tok);
        }
    }
    if (out.empty()) throw Error("no ambient factors");
    return out;
}

inline std::string factors_to_string(const Factors& f) {
    std::string s;
    for (size_t i = 0; i < f.size(); ++i) {
        if (i) s += "x";
        if (f[i].k == 1) s += "P(" + std::to_string(f[i].n - 1) + ")";
        else s += "Gr(" + std::to_string(f[i].k) + "," + std::to_string(f[i].n) + ")";
    }
    return s;
}

// One component of a box product: base token with an optional twist.
inline FactorWeight parse_component(const GrassFactor& g, const std::string& tok) {
    using namespace grammar_detail;
    std::string base = tok;
    long long twist = 0;
    auto paren = tok.find('(');
    if (paren != std::string::npos) {
        if (tok.back() != ')') throw Error("unbalanced parens in " + tok);
        auto args = parse_int_list(tok.substr(paren + 1, tok.size() - paren - 2), tok);
        if (args.size() != 1) throw Error("component twist must be a single integer: " + tok);
        twist = args[0];
        base = strip(tok.substr(0, paren));
    }
    Taut t;
    if (base == "U") t = Taut::U;
    else if (base == "Udual") t = Taut::Udual;
    else if (base == "Q") t = Taut::Q;
    else if (base == "Qdual") t = Taut::Qdual;
    else if (base == "wedge2Udual") t = Taut::Wedge2Udual;
    else if (base == "O") t = Taut::O;
    else throw Error("unknown bundle token: " + base);
    return taut_weight(g, t, twist);
}

inline BundleExpr parse_bundle(const Factors& f, const std::string& text) {
    using namespace grammar_detail;
    BundleExpr out;
    std::string body = strip(text);
    if (body == "0" || body == "none" || body.empty()) return out; // rank 0: X = F
    for (const auto& raw : split_top(body, '+')) {
        std::string term = raw;
        long long mult = 1;
        auto caret = term.rfind('^');
        if (caret != std::string::npos && term.find(')', caret) == std::string::npos) {
            mult = std::stoll(strip(term.substr(caret + 1)));
            term = strip(term.substr(0, caret));
            if (mult < 1) throw Error("bad multiplicity in " + raw);
        }
        auto comps = split_top(term, 'x');
        if (comps.size() == 1 && comps[0].rfind("O(", 0) == 0) {
            auto args = parse_int_list(comps[0].substr(2, comps[0].size() - 3), comps[0]);
            if (args.size() == f.size()) {
                out.add(line_summand(f, args), mult);
                continue;
            }
            if (args.size() != 1) throw Error("O(...) arity mismatch: " + comps[0]);
        }
        if (comps.size() != f.size())
            throw Error("summand arity " + std::to_string(comps.size()) + " does not match " +
                        std::to_string(f.size()) + " factors: " + term);
        IrredSummand s;
        for (size_t i = 0; i < f.size(); ++i) s.w.push_back(parse_component(f[i], comps[i]));
        s.canonicalize();
        out.add(s, mult);
    }
    return out;
}

} // namespace polyvec::bwb
