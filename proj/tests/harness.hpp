// Helpers shared by the test binaries: run formula text, collect solutions.
#pragma once

#include <setris/parser.hpp>
#include <setris/printer.hpp>
#include <setris/ris.hpp>
#include <setris/solver.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace harness {

using namespace setris;

struct RunOptions {
    SolverOptions solver;
    bool all = false;
    bool label = false;
    std::size_t max_solutions = 200;
    // Named set variables whose extensional value is recorded as "expand:<name>".
    std::vector<std::string> expand;
};

struct Answer {
    // Named variable -> printed value (canonical when ground, "?" otherwise).
    std::map<std::string, std::string> values;
    // Full display text of the solution block.
    std::string text;

    std::string signature() const {
        std::string s;
        for (auto& [k, v] : values) s += k + "=" + v + ";";
        return s;
    }
};

struct Run {
    Outcome outcome = Outcome::Failure;
    std::vector<Answer> answers;
    std::string error;

    bool ok() const { return outcome == Outcome::Success; }
    const std::string& value(const std::string& name, std::size_t i = 0) const {
        static const std::string none = "<none>";
        if (i >= answers.size()) return none;
        auto it = answers[i].values.find(name);
        return it == answers[i].values.end() ? none : it->second;
    }
    std::vector<std::string> signatures() const {
        std::vector<std::string> out;
        for (auto& a : answers) out.push_back(a.signature());
        return out;
    }
};

inline std::string canonical(Solver& s, const Term& t) {
    if (auto g = ground_value(t, s.store())) return Printer().term(term_of_ground(**g));
    return "?";
}

inline Answer capture(Solver& s, const RunOptions& o) {
    Answer a;
    Solution sol = s.solution();
    for (auto& [name, v] : s.named()) a.values[name] = canonical(s, v);
    for (auto& name : o.expand) {
        try {
            a.values["expand:" + name] = canonical(s, setris::expand(s, s.var(name)));
        } catch (const std::exception&) {
            a.values["expand:" + name] = "<not expandable>";
        }
    }
    a.text = Printer().solution(sol);
    return a;
}

// Collect answers from a solver that already holds the posted formulas.
inline Run collect(Solver& s, const RunOptions& o) {
    Run r;
    try {
        r.outcome = s.solve();
        std::size_t n = 0;
        while (r.outcome == Outcome::Success) {
            r.answers.push_back(capture(s, o));
            if (!o.all || ++n >= o.max_solutions) break;
            Outcome next = s.next_solution();
            if (next == Outcome::ResourceLimit) {
                r.outcome = next;
                r.error = s.last_error();
            }
            if (next != Outcome::Success) break;
        }
        if (r.outcome == Outcome::ResourceLimit && r.error.empty()) r.error = s.last_error();
    } catch (const std::exception& e) {
        r.outcome = Outcome::ResourceLimit;
        r.error = e.what();
    }
    return r;
}

// Post each part (conjoined) and solve.
inline Run run_parts(const std::vector<std::string>& parts, const RunOptions& o = {}) {
    Solver s(o.solver);
    s.set_labeling(o.label);
    Parser p(s);
    try {
        for (auto& part : parts) s.add(p.formula(part));
    } catch (const std::exception& e) {
        Run r;
        r.outcome = Outcome::ResourceLimit;
        r.error = e.what();
        return r;
    }
    return collect(s, o);
}

inline Run run(const std::string& text, const RunOptions& o = {}) { return run_parts({text}, o); }

inline RunOptions all() {
    RunOptions o;
    o.all = true;
    return o;
}

}  // namespace harness
