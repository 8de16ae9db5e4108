// Parser for the textual constraint language.
#pragma once

#include <setris/solver.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace setris {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int line, int col);
};

// Names resolve to the solver's named variables, except control variables and
// dummies, which are local to the enclosing ris(...).
class Parser {
public:
    explicit Parser(Solver& s) : s_(s) {}
    Formula formula(const std::string& text);
    Term term(const std::string& text);
    // Reject RIS whose control/pattern shape is not admissible.
    void set_strict(bool on) { strict_ = on; }

private:
    Solver& s_;
    bool strict_ = false;
};

// Split batch text into statements at top-level ';' (not inside brackets).
// Blank statements and '#' comment lines are dropped.
std::vector<std::string> split_statements(const std::string& text);

}  // namespace setris
