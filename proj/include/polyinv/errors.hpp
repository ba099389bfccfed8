#pragma once

#include <stdexcept>
#include <string>

namespace polyinv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidModulusError : Error {
    using Error::Error;
};

struct ModulusMismatchError : Error {
    using Error::Error;
};

struct ArityMismatchError : Error {
    using Error::Error;
};

struct ExponentOverflowError : Error {
    using Error::Error;
};

// A map is not of the required F = Id + H form (some H_i has a term of
// total degree < 2).
struct ShapeError : Error {
    int coordinate;
    std::string term;
    ShapeError(int coord, std::string term_text)
        : Error("coordinate F" + std::to_string(coord) + " is not Id+H with ldegree(H) >= 2: offending term '" +
                term_text + "'"),
          coordinate(coord),
          term(std::move(term_text)) {}
};

struct ParseError : Error {
    int line;
    int column;
    ParseError(int line_, int col_, const std::string& msg)
        : Error("parse error at line " + std::to_string(line_) + ", column " + std::to_string(col_) + ": " + msg),
          line(line_),
          column(col_) {}
};

}  // namespace polyinv
