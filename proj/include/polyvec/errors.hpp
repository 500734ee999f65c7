#pragma once

#include <stdexcept>
#include <string>

namespace polyvec {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Fan failed the completeness probes or ridge pairing.
struct IncompleteFan : Error {
    explicit IncompleteFan(const std::string& w) : Error("incomplete fan: " + w) {}
};

// A divisor that the pipeline requires to be Cartier is not.
struct NonCartier : Error {
    explicit NonCartier(const std::string& w) : Error("non-Cartier divisor: " + w) {}
};

// The chase constraints admit no integer solution.  This is a first-class
// diagnostic: it signals a wrong model or a miscomputed input cohomology.
struct Infeasible : Error {
    explicit Infeasible(const std::string& w) : Error("infeasible chase: " + w) {}
};

// ⋀^j requested for an irreducible outside the supported catalogue.
struct UnsupportedPlethysm : Error {
    explicit UnsupportedPlethysm(const std::string& w) : Error("unsupported plethysm: " + w) {}
};

// A scripted recipe hit an intermediate value that disagrees with the
// expected anchor.
struct AnchorMismatch : Error {
    explicit AnchorMismatch(const std::string& w) : Error("anchor mismatch: " + w) {}
};

struct ParseError : Error {
    ParseError(int line, const std::string& reason)
        : Error("parse error at line " + std::to_string(line) + ": " + reason), line(line) {}
    int line;
};

struct ValidationError : Error {
    ValidationError(const std::string& id, const std::string& check)
        : Error("validation failed for " + id + ": " + check), id(id), check(check) {}
    std::string id, check;
};

struct ConsistencyError : Error {
    explicit ConsistencyError(const std::string& w) : Error("consistency check failed: " + w) {}
};

} // namespace polyvec
