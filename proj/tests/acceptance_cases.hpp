// Worked examples with their expected answers. Used by the acceptance binary
// for the regression check and for the order/backtracking/cache invariants.
#pragma once

#include "harness.hpp"

#include <functional>

namespace acceptance {

using harness::Run;
using harness::RunOptions;

struct Case {
    std::string name;
    std::vector<std::string> parts;  // conjoined
    RunOptions opts;
    std::function<bool(const Run&)> expect;
};

inline bool contains(const std::string& s, const std::string& sub) { return s.find(sub) != std::string::npos; }

inline bool failure(const Run& r) { return r.outcome == setris::Outcome::Failure; }

inline RunOptions all_opts() { return harness::all(); }

inline RunOptions bounds(std::int64_t lo, std::int64_t hi) {
    RunOptions o;
    o.solver.glb = lo;
    o.solver.lub = hi;
    return o;
}

inline RunOptions expanding(const std::string& var) {
    RunOptions o;
    o.expand = {var};
    return o;
}

inline std::string ackermann() {
    return "ris((x,y,z) in D | (x = 0 & z = y + 1) or (x > 0 & y = 0 & (x-1,1,z) in D) or "
           "(x > 0 & y > 0 & (x,y-1,ze) in D & (x-1,ze,z) in D) ; ze)";
}

inline std::int64_t ackermann_ref(std::int64_t m, std::int64_t n) {
    if (m == 0) return n + 1;
    if (n == 0) return ackermann_ref(m - 1, 1);
    return ackermann_ref(m - 1, ackermann_ref(m, n - 1));
}

inline std::string is_prime(std::int64_t n) {
    return std::to_string(n) + " > 1 & ris(x in [2," + std::to_string(n / 2) + "] | " + std::to_string(n) +
           " mod x = 0) = {}";
}

inline const char* kFact = "fact = {(0,1) / ris(x in D | x > 0 & (x-1,z) in fact @ (x, z*x) ; z)}";
inline const char* kEven = "ris(x1 in e | x1 = 0 or x1 - 1 in o)";
inline const char* kOdd = "ris(x2 in o | x2 > 0 & x2 - 1 in ris(x1 in e | x1 = 0 or x1 - 1 in o))";
inline const char* kSqr = "sqr = ris(x in D | true @ (x, x*x))";

inline std::vector<Case> regression_cases() {
    std::vector<Case> cs;
    auto add = [&](std::string name, std::vector<std::string> parts, RunOptions o, std::function<bool(const Run&)> f) {
        cs.push_back({std::move(name), std::move(parts), o, std::move(f)});
    };
    add("(5,Y) in {x:D | x>0 @ (x,x*x)}", {"(5,Y) in ris(x in D | x > 0 @ (x, x*x))"}, {},
        [](const Run& r) { return r.ok() && r.value("Y") == "25" && contains(r.answers[0].text, "_D = {5/_N1}"); });
    add("{2,4,6} = {x:D | x mod 2 = 0}", {"{2,4,6} = ris(x in D | x mod 2 = 0)"}, {},
        [](const Run& r) {
            return r.ok() && contains(r.answers[0].text, "_D = {2,4,6/_N1}") &&
                   contains(r.answers[0].text, "ris(_x in _N1 | _x mod 2 = 0) = {}");
        });
    add("disjoint union with a non-empty RIS",
        {"A = ris(x in D | x neq 0)", "un(A,B,C)", "disj(A,C)", "A neq {}"}, {}, failure);
    add("{X:{{1,3},2,{1}} | size(X,2)} = {{1,3}}", {"ris(X in {{1,3},2,{1}} | size(X,2)) = {{1,3}}"}, {},
        [](const Run& r) { return r.ok(); });
    add("{x,y} = {1,z} & x neq 1", {"{x,y} = {1,z}", "x neq 1"}, {}, [](const Run& r) {
        return r.ok() && r.value("y") == "1" && contains(r.answers[0].text, "_x neq 1");
    });
    add("permutations of {1,2,3}", {"{1,2,3} = {x,y,z}"}, all_opts(), [](const Run& r) {
        auto sigs = r.signatures();
        std::sort(sigs.begin(), sigs.end());
        return r.answers.size() == 6 && std::unique(sigs.begin(), sigs.end()) == sigs.end();
    });
    add("min of {8,4,6,2,10,5}",
        {"m in {8,4,6,2,10,5}", "{8,4,6,2,10,5} subset ris(x in {8,4,6,2,10,5} | m <= x)"}, all_opts(),
        [](const Run& r) { return r.answers.size() == 1 && r.value("m") == "2"; });
    add("min of {8,z,4,6}: two answers", {"m in {8,z,4,6}", "{8,z,4,6} subset ris(x in {8,z,4,6} | m <= x)"},
        all_opts(), [](const Run& r) {
            if (r.answers.size() != 2) return false;
            const auto& a = r.answers[0].text;
            const auto& b = r.answers[1].text;
            return contains(a, "_z = unknown -- Domain: {-1000000..4} (same as _m)") && r.value("m", 1) == "4" &&
                   contains(b, "_z = unknown -- Domain: {4..1000000}");
        });
    add("coloring of {{r1,r2},{r2,r3}} with two colors",
        {"{r1,r2,r3} subset {\"red\",\"blue\"}", "{{r1,r2},{r2,r3}} subset ris(P in {{r1,r2},{r2,r3}} | size(P,2))"},
        all_opts(), [](const Run& r) {
            return r.answers.size() == 2 && r.value("r1") == "\"red\"" && r.value("r2") == "\"blue\"" &&
                   r.value("r3") == "\"red\"" && r.value("r1", 1) == "\"blue\"" && r.value("r2", 1) == "\"red\"" &&
                   r.value("r3", 1) == "\"blue\"";
        });
    add("isPrime(101)", {is_prime(101)}, {}, [](const Run& r) { return r.ok(); });
    add("isPrime(1) is false", {is_prime(1)}, {}, failure);
    add("sqr: (5,y) in sqr", {kSqr, "(5,y) in sqr"}, {}, [](const Run& r) { return r.ok() && r.value("y") == "25"; });
    {
        RunOptions o = all_opts();
        o.label = true;
        add("sqr: (y,25) in sqr labels to -5 and 5", {kSqr, "(y,25) in sqr"}, o, [](const Run& r) {
            return r.answers.size() == 2 && r.value("y") == "-5" && r.value("y", 1) == "5";
        });
    }
    add("mapList over [3,5,7] with sqr", {kSqr, "(3,a) in sqr", "(5,b) in sqr", "(7,c) in sqr"}, {},
        [](const Run& r) { return r.ok() && r.value("a") == "9" && r.value("b") == "25" && r.value("c") == "49"; });
    add("C = A inters B & {x:A | x in B} neq C", {"inters(A,B,C)", "ris(x in A | x in B) neq C"}, {},
        failure);
    add("S subset {x:S | x>0} & -1 in S", {"S subset ris(x in S | x > 0)", "-1 in S"}, {}, failure);
    add("dummy y restricts D and S",
        {"R = ris(x in D | (x,y) in S @ (x,y) ; y)", "(1,2) in R", "(3,4) in R"}, {}, [](const Run& r) {
            return r.ok() && contains(r.answers[0].text, "_D = {1,3/_N1}") &&
                   contains(r.answers[0].text, "_S = {(1,2),(3,4)/_N2}");
        });
    add("undeclared dummy y is shared and fails", {"R = ris(x in D | (x,y) in S @ (x,y))", "(1,2) in R", "(3,4) in R"},
        {}, failure);
    add("(5,ff) in fact", {kFact, "(5,ff) in fact"}, {},
        [](const Run& r) { return r.ok() && r.value("ff") == "120" && contains(r.answers[0].text, "_D = {5,4,3,2,1/_N1}"); });
    add("(n,120) in fact", {kFact, "(n,120) in fact"}, {},
        [](const Run& r) { return r.ok() && r.value("n") == "5"; });
    add("fact(12) with bounds +-1e9", {kFact, "(12,ff) in fact"}, bounds(-1000000000, 1000000000),
        [](const Run& r) { return r.ok() && r.value("ff") == "479001600"; });
    add("reachable from 1",
        {"R = ris(x in {1,2,3,4,5,6} | x = 1 or (y in R & (y,x) in {(1,2),(1,3),(2,5),(4,6)}) ; y)"}, expanding("R"),
        [](const Run& r) { return r.ok() && r.value("expand:R") == "{1,2,3,5}"; });
    add("min <= max refutation with bounds +-1e6",
        {"min in S", "max in S", "S subset ris(x in S | x >= min)", "S subset ris(x in S | x <= max)", "min > max"},
        bounds(-1000000, 1000000), failure);
    for (auto [m, n] : std::vector<std::pair<int, int>>{{0, 5}, {2, 0}, {2, 1}, {2, 2}}) {
        std::string call = "(" + std::to_string(m) + "," + std::to_string(n) + ",r) in " + ackermann();
        std::string want = std::to_string(ackermann_ref(m, n));
        add("Ackermann a(" + std::to_string(m) + "," + std::to_string(n) + ") = " + want,
            {"D subset " + ackermann(), call}, {}, [want](const Run& r) { return r.ok() && r.value("r") == want; });
    }
    for (int i = 0; i <= 9; ++i)
        add("isEvenRis(" + std::to_string(i) + ")", {std::string("o subset ") + kOdd, std::to_string(i) + " in " + kEven},
            {}, [i](const Run& r) { return r.ok() == (i % 2 == 0) && (r.ok() || failure(r)); });
    return cs;
}

}  // namespace acceptance
