#pragma once

// Dataset schema, parser and validation: classification records and expected
// parallelograms for all 105 deformation families, del Pezzo surface data,
// and the encoded geometric models (toric fans, homogeneous bundles, special
// recipe tags).  The format is line-oriented structured text so the bundled
// tables can be reviewed by eye.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bwb.hpp"
#include "errors.hpp"
#include "fan.hpp"
#include "grammar.hpp"
#include "invariants.hpp"

namespace polyvec::families {

using invariants::ClassificationRecord;
using invariants::FamilyId;
using invariants::Parallelogram;

struct ToricModel {
    toric::Fan fan;
    std::vector<ZVector> sections; // class vectors of the cutting divisors
};

struct HomogeneousModel {
    std::string factors_text;
    std::string bundle_text;
    bwb::Factors factors;
    bwb::BundleExpr bundle;
    long long codim = 0;         // authoritative: equals bundle rank
    long long printed_codim = -1; // the source table's printed value when it differs
};

struct SpecialModel {
    std::string tag; // M1-1, M2-1, M2-3, M4-13, M10-1
};

struct FamilyEntry {
    ClassificationRecord rec;
    Parallelogram expected;
    std::optional<ToricModel> toric_model;
    std::optional<HomogeneousModel> homogeneous_model;
    std::optional<SpecialModel> special_model;

    bool has_model() const {
        return toric_model.has_value() || homogeneous_model.has_value() || special_model.has_value();
    }
};

struct SurfaceEntry {
    std::string name; // P2, P1xP1, Bl1 .. Bl8
    long long k2 = 0, h0t = 0, h1t = 0, h0acan = 0;
};

struct Dataset {
    int version = 0;
    std::map<FamilyId, FamilyEntry> families;
    std::vector<SurfaceEntry> surfaces;

    const FamilyEntry& at(const FamilyId& id) const {
        auto it = families.find(id);
        if (it == families.end()) throw Error("no such family: " + id.str());
        return it->second;
    }
    const SurfaceEntry& surface(const std::string& name) const {
        for (const auto& s : surfaces)
            if (s.name == name) return s;
        throw Error("no such surface: " + name);
    }
};

inline FamilyId parse_family_id(const std::string& text) {
    auto dash = text.find('-');
    if (dash == std::string::npos) throw Error("bad family id: " + text);
    FamilyId id;
    id.rho = std::stoi(text.substr(0, dash));
    id.index = std::stoi(text.substr(dash + 1));
    return id;
}

namespace detail {

struct LineReader {
    std::istream& in;
    int lineno = 0;
    bool next(std::vector<std::string>& tokens, std::string& raw) {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            std::istringstream ss(line);
            tokens.clear();
            std::string tok;
            while (ss >> tok) tokens.push_back(tok);
            if (!tokens.empty()) {
                raw = line;
                return true;
            }
        }
        return false;
    }
};

inline long long kv_int(const std::string& tok, const std::string& key, int lineno) {
    if (tok.rfind(key + "=", 0) != 0) throw ParseError(lineno, "expected " + key + "=...");
    return std::stoll(tok.substr(key.size() + 1));
}

} // namespace detail

// Parse and fully validate a dataset stream.  Chi-inconsistent expected rows,
// invalid fans and malformed bundles are rejected with the offending id.
inline Dataset parse_dataset(std::istream& in) {
    detail::LineReader rd{in};
    Dataset ds;
    std::vector<std::string> t;
    std::string raw;
    std::optional<FamilyId> cur;

    auto require_cur = [&]() -> FamilyEntry& {
        if (!cur) throw ParseError(rd.lineno, "directive outside a family block");
        return ds.families[*cur];
    };

    while (rd.next(t, raw)) {
        if (t[0] == "version") {
            if (t.size() != 2) throw ParseError(rd.lineno, "version needs one argument");
            ds.version = std::stoi(t[1]);
            if (ds.version != 1) throw ParseError(rd.lineno, "unsupported version");
        } else if (t[0] == "surface") {
            if (t.size() != 6) throw ParseError(rd.lineno, "surface needs 5 fields");
            SurfaceEntry s;
            s.name = t[1];
            s.k2 = detail::kv_int(t[2], "k2", rd.lineno);
            s.h0t = detail::kv_int(t[3], "h0t", rd.lineno);
            s.h1t = detail::kv_int(t[4], "h1t", rd.lineno);
            s.h0acan = detail::kv_int(t[5], "h0acan", rd.lineno);
            ds.surfaces.push_back(s);
        } else if (t[0] == "family") {
            if (t.size() != 2) throw ParseError(rd.lineno, "family needs an id");
            FamilyId id = parse_family_id(t[1]);
            if (ds.families.count(id)) throw ParseError(rd.lineno, "duplicate family " + id.str());
            cur = id;
            ds.families[id].rec.id = id;
        } else if (t[0] == "invariants") {
            auto& fam = require_cur();
            if (t.size() != 5) throw ParseError(rd.lineno, "invariants needs 4 fields");
            fam.rec.c1_cubed = detail::kv_int(t[1], "c1cubed", rd.lineno);
            fam.rec.h12 = detail::kv_int(t[2], "h12", rd.lineno);
            fam.rec.dim_aut0 = detail::kv_int(t[3], "dimaut0", rd.lineno);
            fam.rec.aut_jumps = detail::kv_int(t[4], "jumps", rd.lineno) != 0;
        } else if (t[0] == "expected") {
            auto& fam = require_cur();
            if (t.size() != 7) throw ParseError(rd.lineno, "expected needs 6 integers");
            Parallelogram p;
            p.pv01 = std::stoll(t[1]);
            p.pv11 = std::stoll(t[2]);
            p.pv02 = std::stoll(t[3]);
            p.pv12 = std::stoll(t[4]);
            p.pv22 = std::stoll(t[5]);
            p.pv03 = std::stoll(t[6]);
            fam.expected = p;
        } else if (t[0] == "model") {
            auto& fam = require_cur();
            if (t.size() < 2) throw ParseError(rd.lineno, "model needs a kind");
            if (t[1] == "special") {
                if (t.size() != 3) throw ParseError(rd.lineno, "special model needs a tag");
                fam.special_model = SpecialModel{t[2]};
            } else if (t[1] == "toric") {
                ToricModel m;
                std::vector<std::string> t2;
                std::string raw2;
                while (rd.next(t2, raw2)) {
                    if (t2[0] == "endmodel") break;
                    if (t2[0] == "dim") m.fan.dim = std::stoi(t2[1]);
                    else if (t2[0] == "ray") {
                        ZVector r;
                        for (size_t i = 1; i < t2.size(); ++i) r.push_back(std::stoll(t2[i]));
                        m.fan.rays.push_back(r);
                    } else if (t2[0] == "cone") {
                        std::vector<int> c;
                        for (size_t i = 1; i < t2.size(); ++i) c.push_back(std::stoi(t2[i]));
                        m.fan.max_cones.push_back(c);
                    } else if (t2[0] == "class") {
                        ZVector r;
                        for (size_t i = 1; i < t2.size(); ++i) r.push_back(std::stoll(t2[i]));
                        m.fan.lattice.projection.push_back(r);
                    } else if (t2[0] == "section") {
                        ZVector s;
                        for (size_t i = 1; i < t2.size(); ++i) s.push_back(std::stoll(t2[i]));
                        m.sections.push_back(s);
                    } else {
                        throw ParseError(rd.lineno, "unknown toric field " + t2[0]);
                    }
                }
                m.fan.lattice.class_rank = (int)m.fan.lattice.projection.size();
                fam.toric_model = std::move(m);
            } else if (t[1] == "homogeneous") {
                HomogeneousModel m;
                std::vector<std::string> t2;
                std::string raw2;
                while (rd.next(t2, raw2)) {
                    if (t2[0] == "endmodel") break;
                    std::string rest = raw2;
                    auto pos = rest.find(t2[0]);
                    rest = rest.substr(pos + t2[0].size());
                    while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t'))
                        rest.erase(rest.begin());
                    if (t2[0] == "factors") m.factors_text = rest;
                    else if (t2[0] == "bundle") m.bundle_text = rest;
                    else if (t2[0] == "codim") m.codim = std::stoll(t2[1]);
                    else if (t2[0] == "printedcodim") m.printed_codim = std::stoll(t2[1]);
                    else throw ParseError(rd.lineno, "unknown homogeneous field " + t2[0]);
                }
                fam.homogeneous_model = std::move(m);
            } else {
                throw ParseError(rd.lineno, "unknown model kind " + t[1]);
            }
        } else if (t[0] == "endfamily") {
            cur.reset();
        } else {
            throw ParseError(rd.lineno, "unknown directive " + t[0]);
        }
    }

    // validation
    for (auto& [id, fam] : ds.families) {
        invariants::validate_record(fam.rec);
        std::array<bool, 3> detail_checks{};
        if (!invariants::chi_checks(fam.rec, fam.expected, &detail_checks)) {
            std::string which = detail_checks[0] ? (detail_checks[1] ? "anticanonical" : "wedge2")
                                                 : "tangent";
            throw ValidationError(id.str(), "expected row fails the " + which + " chi identity");
        }
        if (fam.toric_model) {
            auto& m = *fam.toric_model;
            toric::validate_fan(m.fan, id.str());
            toric::finish_lattice(m.fan, id.str());
            long long dim_x = m.fan.dim - (long long)m.sections.size();
            if (dim_x != 3) throw ValidationError(id.str(), "toric model does not cut a 3-fold");
            for (const auto& cls : m.sections) {
                if ((int)cls.size() != m.fan.lattice.class_rank)
                    throw ValidationError(id.str(), "section class arity");
                if (!toric::is_cartier(m.fan, toric::representative_of(m.fan, cls)))
                    throw ValidationError(id.str(), "section class is not Cartier");
            }
        }
        if (fam.homogeneous_model) {
            auto& m = *fam.homogeneous_model;
            m.factors = bwb::parse_factors(m.factors_text);
            m.bundle = bwb::parse_bundle(m.factors, m.bundle_text);
            long long rank = m.bundle.rank(m.factors);
            if (m.codim == 0) m.codim = rank;
            if (rank != m.codim)
                throw ValidationError(id.str(), "bundle rank does not equal stored codimension");
            if (bwb::total_dim(m.factors) - rank != 3)
                throw ValidationError(id.str(), "homogeneous model does not cut a 3-fold");
        }
        if (fam.special_model) {
            const auto& tag = fam.special_model->tag;
            if (tag != "M1-1" && tag != "M2-1" && tag != "M2-3" && tag != "M4-13" && tag != "M10-1")
                throw ValidationError(id.str(), "unknown special tag " + tag);
        }
    }
    for (const auto& s : ds.surfaces) {
        if (s.h0t - s.h1t != 2 * s.k2 - 10)
            throw ValidationError(s.name, "surface chi(T) = 2K^2-10 fails");
        if (s.h0acan != s.k2 + 1) throw ValidationError(s.name, "surface h0(om^v) = K^2+1 fails");
    }
    return ds;
}

inline Dataset parse_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset: " + path);
    return parse_dataset(in);
}

inline void serialize(const Dataset& ds, std::ostream& out) {
    out << "version " << ds.version << "\n\n";
    for (const auto& s : ds.surfaces)
        out << "surface " << s.name << " k2=" << s.k2 << " h0t=" << s.h0t << " h1t=" << s.h1t
            << " h0acan=" << s.h0acan << "\n";
    if (!ds.surfaces.empty()) out << "\n";
    for (const auto& [id, fam] : ds.families) {
        out << "family " << id.str() << "\n";
        out << "invariants c1cubed=" << fam.rec.c1_cubed << " h12=" << fam.rec.h12
            << " dimaut0=" << fam.rec.dim_aut0 << " jumps=" << (fam.rec.aut_jumps ? 1 : 0) << "\n";
        const auto& p = fam.expected;
        out << "expected " << p.pv01 << " " << p.pv11 << " " << p.pv02 << " " << p.pv12 << " "
            << p.pv22 << " " << p.pv03 << "\n";
        if (fam.special_model) out << "model special " << fam.special_model->tag << "\n";
        if (fam.toric_model) {
            const auto& m = *fam.toric_model;
            out << "model toric\n";
            out << "dim " << m.fan.dim << "\n";
            for (const auto& r : m.fan.rays) {
                out << "ray";
                for (auto v : r) out << " " << v;
                out << "\n";
            }
            for (const auto& c : m.fan.max_cones) {
                out << "cone";
                for (auto v : c) out << " " << v;
                out << "\n";
            }
            for (const auto& r : m.fan.lattice.projection) {
                out << "class";
                for (auto v : r) out << " " << v;
                out << "\n";
            }
            for (const auto& s : m.sections) {
                out << "section";
                for (auto v : s) out << " " << v;
                out << "\n";
            }
            out << "endmodel\n";
        }
        if (fam.homogeneous_model) {
            const auto& m = *fam.homogeneous_model;
            out << "model homogeneous\n";
            out << "factors " << m.factors_text << "\n";
            out << "bundle " << m.bundle_text << "\n";
            out << "codim " << m.codim << "\n";
            if (m.printed_codim >= 0) out << "printedcodim " << m.printed_codim << "\n";
            out << "endmodel\n";
        }
        out << "endfamily\n\n";
    }
}

struct CoverageReport {
    int total_families = 0;
    int with_toric = 0, with_homogeneous = 0, with_special = 0;
    int without_model = 0;
    std::vector<FamilyId> missing;
    std::vector<FamilyId> duplicated; // families with more than one model kind
    std::vector<FamilyId> codim_discrepancies;
};

inline CoverageReport coverage_report(const Dataset& ds) {
    CoverageReport r;
    for (const auto& [id, fam] : ds.families) {
        ++r.total_families;
        int kinds = 0;
        if (fam.toric_model) { ++r.with_toric; ++kinds; }
        if (fam.homogeneous_model) {
            ++r.with_homogeneous;
            ++kinds;
            if (fam.homogeneous_model->printed_codim >= 0 &&
                fam.homogeneous_model->printed_codim != fam.homogeneous_model->codim)
                r.codim_discrepancies.push_back(id);
        }
        if (fam.special_model) { ++r.with_special; ++kinds; }
        if (kinds == 0) {
            ++r.without_model;
            r.missing.push_back(id);
        }
        if (kinds > 1) r.duplicated.push_back(id);
    }
    return r;
}

} // namespace polyvec::families
