// Text and JSON rendering of terms, formulas and solutions.
#pragma once

#include <setris/solver.hpp>

#include <json.hpp>

#include <map>
#include <string>

namespace setris {

class Printer {
public:
    // display: named variables get a leading underscore; anonymous ones are
    // renumbered _N1, _N2, ... in order of first appearance.
    explicit Printer(bool display = true) : display_(display) {}

    std::string term(const Term& t);
    std::string formula(const Formula& f);
    std::string var(const Term& v);

    // "_x = value" lines, domain lines and the "Store:" block.
    std::string solution(const Solution& s);
    nlohmann::json json(const Solution& s);
    nlohmann::json json_term(const Term& t);

private:
    std::string expr_side(const Term& t, int parent, bool right);
    std::string conj_part(const Formula& f);

    bool display_;
    std::map<VarId, int> anon_;
};

}  // namespace setris
