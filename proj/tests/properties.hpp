// Oracle-based property suites. Each returns the number of checks made and a
// description of every mismatch.
#pragma once

#include "acceptance_cases.hpp"
#include "harness.hpp"

#include <functional>
#include <set>
#include <variant>

namespace props {

using namespace setris;
using harness::Run;
using harness::RunOptions;

struct Report {
    std::size_t checks = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures.size() < 20) failures.push_back(what);
        if (!ok && failures.size() == 20) failures.push_back("...");
    }
    void merge(const Report& r) {
        checks += r.checks;
        for (auto& f : r.failures) failures.push_back(f);
    }
    bool ok() const { return failures.empty(); }
};

// ---------------------------------------------------------------------------
// A tiny model of hereditarily finite sets over integers, used as the oracle.

struct Val;
using VSet = std::set<Val>;
struct Val {
    std::variant<std::int64_t, VSet> v;
    bool is_set() const { return v.index() == 1; }
    const VSet& set() const { return std::get<1>(v); }
    bool operator<(const Val& o) const { return v < o.v; }
    bool operator==(const Val& o) const { return v == o.v; }
};

inline Val num(std::int64_t i) { return Val{i}; }
inline Val set_of(VSet s) { return Val{std::move(s)}; }

inline std::string text(const Val& x) {
    if (!x.is_set()) return std::to_string(std::get<0>(x.v));
    std::string s = "{";
    bool first = true;
    for (auto& e : x.set()) {
        if (!first) s += ",";
        s += text(e);
        first = false;
    }
    return s + "}";
}

// Elements 0, 1, {0} and all 8 sets built from them.
inline std::vector<Val> universe_elems() { return {num(0), num(1), set_of({num(0)})}; }

inline std::vector<Val> universe_sets() {
    auto el = universe_elems();
    std::vector<Val> out;
    for (int mask = 0; mask < 8; ++mask) {
        VSet s;
        for (int i = 0; i < 3; ++i)
            if (mask & (1 << i)) s.insert(el[i]);
        out.push_back(set_of(s));
    }
    return out;
}

inline bool member(const Val& e, const Val& s) { return s.set().count(e) > 0; }

inline VSet set_union(const VSet& a, const VSet& b) {
    VSet r = a;
    r.insert(b.begin(), b.end());
    return r;
}

inline VSet set_inter(const VSet& a, const VSet& b) {
    VSet r;
    for (auto& x : a)
        if (b.count(x)) r.insert(x);
    return r;
}

inline VSet set_diff(const VSet& a, const VSet& b) {
    VSet r;
    for (auto& x : a)
        if (!b.count(x)) r.insert(x);
    return r;
}

inline bool is_subset(const VSet& a, const VSet& b) { return set_diff(a, b).empty(); }

inline RunOptions with_fastpath(bool on) {
    RunOptions o;
    o.solver.ground_fastpath = on;
    return o;
}

inline bool sat(const std::string& f, const RunOptions& o) { return harness::run(f, o).ok(); }

// ---------------------------------------------------------------------------
// Primitive constraints: =, neq, in, nin, un, disj, size.

inline Report primitive_constraints() {
    Report rep;
    auto elems = universe_elems();
    auto sets = universe_sets();
    std::vector<Val> terms = elems;
    terms.insert(terms.end(), sets.begin(), sets.end());
    for (bool fast : {true, false}) {
        RunOptions o = with_fastpath(fast);
        std::string tag = fast ? " [fast]" : " [rewrite]";
        for (auto& a : terms)
            for (auto& b : terms) {
                rep.expect(sat(text(a) + " = " + text(b), o) == (a == b), text(a) + " = " + text(b) + tag);
                rep.expect(sat(text(a) + " neq " + text(b), o) == !(a == b), text(a) + " neq " + text(b) + tag);
                if (!b.is_set()) continue;
                rep.expect(sat(text(a) + " in " + text(b), o) == member(a, b), text(a) + " in " + text(b) + tag);
                rep.expect(sat(text(a) + " nin " + text(b), o) == !member(a, b), text(a) + " nin " + text(b) + tag);
            }
        for (auto& a : sets)
            for (auto& b : sets) {
                std::string ab = text(a) + "," + text(b);
                rep.expect(sat("disj(" + ab + ")", o) == set_inter(a.set(), b.set()).empty(), "disj(" + ab + ")" + tag);
                for (auto& c : sets) {
                    bool want = set_union(a.set(), b.set()) == c.set();
                    rep.expect(sat("un(" + ab + "," + text(c) + ")", o) == want, "un(" + ab + "," + text(c) + ")" + tag);
                }
            }
        for (auto& a : sets)
            for (int n = 0; n <= 4; ++n)
                rep.expect(sat("size(" + text(a) + "," + std::to_string(n) + ")", o) ==
                               (a.set().size() == static_cast<std::size_t>(n)),
                           "size(" + text(a) + "," + std::to_string(n) + ")" + tag);
    }

    // One unknown argument: every ground answer satisfies the oracle, and a
    // satisfiable instance in the universe implies the open query succeeds.
    RunOptions all = harness::all();
    for (auto& a : sets)
        for (auto& b : sets) {
            std::string f = "un(" + text(a) + "," + text(b) + ",X)";
            Run r = harness::run(f, all);
            rep.expect(r.answers.size() >= 1, f + " has an answer");
            for (auto& ans : r.answers)
                rep.expect(ans.values.at("X") == text(set_of(set_union(a.set(), b.set()))), f + " answer X");
            std::string g = "un(X," + text(a) + "," + text(b) + ")";
            std::set<std::string> got;
            Run rg = harness::run(g, all);
            for (auto& ans : rg.answers) got.insert(ans.values.at("X"));
            std::set<std::string> want;
            for (auto& x : sets)
                if (set_union(x.set(), a.set()) == b.set()) want.insert(text(x));
            rep.expect(got == want, g + " answers equal the oracle");
        }
    for (auto& s : sets) {
        for (std::size_t k = 1; k <= 3; ++k) {
            std::vector<std::string> names{"x", "y", "z"};
            std::string lhs = "{";
            for (std::size_t i = 0; i < k; ++i) lhs += (i ? "," : "") + names[i];
            lhs += "}";
            std::string f = lhs + " = " + text(s);
            Run r = harness::run(f, all);
            std::set<std::string> got;
            for (auto& ans : r.answers) {
                std::string sig;
                for (std::size_t i = 0; i < k; ++i) sig += ans.values.at(names[i]) + ";";
                got.insert(sig);
            }
            std::set<std::string> want;
            std::function<void(std::size_t, VSet, std::string)> gen = [&](std::size_t i, VSet acc, std::string sig) {
                if (i == k) {
                    if (acc == s.set()) want.insert(sig);
                    return;
                }
                for (auto& e : elems) {
                    VSet next = acc;
                    next.insert(e);
                    gen(i + 1, next, sig + text(e) + ";");
                }
            };
            gen(0, {}, "");
            rep.expect(got == want, f + " answers equal the oracle");
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Derived constraints and negative counterparts against their definitions.

inline Report derived_constraints() {
    Report rep;
    auto sets = universe_sets();
    for (bool fast : {true, false}) {
        RunOptions o = with_fastpath(fast);
        std::string tag = fast ? " [fast]" : " [rewrite]";
        for (auto& a : sets)
            for (auto& b : sets) {
                const VSet &A = a.set(), &B = b.set();
                std::string ab = text(a) + "," + text(b);
                rep.expect(sat(text(a) + " subset " + text(b), o) == is_subset(A, B), "subset " + ab + tag);
                rep.expect(sat(text(a) + " nsubset " + text(b), o) == !is_subset(A, B), "nsubset " + ab + tag);
                rep.expect(sat("ndisj(" + ab + ")", o) == !set_inter(A, B).empty(), "ndisj(" + ab + ")" + tag);
                for (auto& c : sets) {
                    const VSet& C = c.set();
                    std::string abc = ab + "," + text(c);
                    rep.expect(sat("inters(" + abc + ")", o) == (set_inter(A, B) == C), "inters(" + abc + ")" + tag);
                    rep.expect(sat("ninters(" + abc + ")", o) == (set_inter(A, B) != C), "ninters(" + abc + ")" + tag);
                    rep.expect(sat("diff(" + abc + ")", o) == (set_diff(A, B) == C), "diff(" + abc + ")" + tag);
                    rep.expect(sat("ndiff(" + abc + ")", o) == (set_diff(A, B) != C), "ndiff(" + abc + ")" + tag);
                    rep.expect(sat("nun(" + abc + ")", o) == (set_union(A, B) != C), "nun(" + abc + ")" + tag);
                }
            }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// RIS over ground integer domains against {P(x) | x in D, F(x)}.

struct Filter {
    std::string text;
    std::function<bool(std::int64_t)> eval;
};
struct Pattern {
    std::string text;  // empty: the control itself
    std::function<std::string(std::int64_t)> eval;
    std::function<Val(std::int64_t)> value;  // integer patterns only; null for pairs
};

inline std::vector<Filter> filters() {
    return {
        {"true", [](std::int64_t) { return true; }},
        {"false", [](std::int64_t) { return false; }},
        {"x mod 2 = 0", [](std::int64_t x) { return ((x % 2) + 2) % 2 == 0; }},
        {"x > 2", [](std::int64_t x) { return x > 2; }},
        {"x neq 1", [](std::int64_t x) { return x != 1; }},
        {"x in {1,3}", [](std::int64_t x) { return x == 1 || x == 3; }},
        {"x nin {0,4} & x <= 3", [](std::int64_t x) { return x != 0 && x != 4 && x <= 3; }},
        {"x = 0 or x = 4", [](std::int64_t x) { return x == 0 || x == 4; }},
    };
}

inline std::vector<Pattern> patterns() {
    auto iv = [](std::function<std::int64_t(std::int64_t)> f) {
        return Pattern{"", [f](std::int64_t x) { return std::to_string(f(x)); }, [f](std::int64_t x) { return num(f(x)); }};
    };
    std::vector<Pattern> ps;
    ps.push_back(iv([](std::int64_t x) { return x; }));
    ps.push_back(iv([](std::int64_t x) { return x * x; }));
    ps.back().text = "x*x";
    ps.push_back(iv([](std::int64_t x) { return x % 3; }));
    ps.back().text = "x mod 3";
    ps.push_back(Pattern{"(x,x+1)", [](std::int64_t x) { return "(" + std::to_string(x) + "," + std::to_string(x + 1) + ")"; },
                         nullptr});
    return ps;
}

inline Report ris_expansion() {
    Report rep;
    std::vector<std::vector<std::int64_t>> domains;
    for (int mask = 0; mask < 32; ++mask) {
        std::vector<std::int64_t> d;
        for (int i = 0; i < 5; ++i)
            if (mask & (1 << i)) d.push_back(i);
        domains.push_back(d);
    }
    auto dom_text = [](const std::vector<std::int64_t>& d) {
        std::string s = "{";
        for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
        return s + "}";
    };
    for (auto& f : filters())
        for (auto& p : patterns())
            for (std::size_t di = 0; di < domains.size(); ++di) {
                auto& d = domains[di];
                std::string dt = dom_text(d);
                // Every fifth domain is also tried as an interval when contiguous.
                bool contiguous = !d.empty() && d.back() - d.front() + 1 == static_cast<std::int64_t>(d.size());
                std::vector<std::string> dts{dt};
                if (contiguous) dts.push_back("[" + std::to_string(d.front()) + "," + std::to_string(d.back()) + "]");
                std::set<std::string> want;
                for (auto x : d)
                    if (f.eval(x)) want.insert(p.eval(x));
                for (auto& dtext : dts) {
                    std::string ris = "ris(x in " + dtext + " | " + f.text + (p.text.empty() ? "" : " @ " + p.text) + ")";
                    // Expansion.
                    Solver s;
                    Parser parser(s);
                    std::set<std::string> got;
                    try {
                        Term e = expand(s, parser.term(ris));
                        Term cur = e;
                        while (cur->kind == TermKind::Cons) {
                            got.insert(harness::canonical(s, cur->a));
                            cur = cur->b;
                        }
                    } catch (const std::exception& ex) {
                        got.insert(std::string("error: ") + ex.what());
                    }
                    rep.expect(got == want, "expand " + ris);
                    // Equality with the oracle set, and with one extra element.
                    std::string wt = "{";
                    bool first = true;
                    for (auto& w : want) {
                        wt += (first ? "" : ",") + w;
                        first = false;
                    }
                    wt += "}";
                    rep.expect(sat(ris + " = " + wt, {}), ris + " = " + wt);
                    std::string extra = p.value ? "99" : "(99,100)";
                    std::string wt2 = want.empty() ? "{" + extra + "}" : wt.substr(0, wt.size() - 1) + "," + extra + "}";
                    rep.expect(!sat(ris + " = " + wt2, {}), ris + " neq-oracle " + wt2);
                    // Membership of a few candidates.
                    if (di % 3 != 0) continue;
                    for (std::int64_t c = -1; c <= 17; c += 3) {
                        std::string ct = p.value ? std::to_string(c) : "(" + std::to_string(c) + "," + std::to_string(c + 1) + ")";
                        bool in = want.count(ct) > 0;
                        rep.expect(sat(ct + " in " + ris, {}) == in, ct + " in " + ris);
                        rep.expect(sat(ct + " nin " + ris, {}) == !in, ct + " nin " + ris);
                    }
                }
            }
    return rep;
}

// ---------------------------------------------------------------------------
// Restricted universal quantification: S subset {x:S | F} iff F holds on S.

inline Report ruq() {
    Report rep;
    for (auto& f : filters())
        for (int mask = 0; mask < 32; ++mask) {
            std::vector<std::int64_t> d;
            std::string s = "{";
            for (int i = 0; i < 5; ++i)
                if (mask & (1 << i)) {
                    s += (d.empty() ? "" : ",") + std::to_string(i);
                    d.push_back(i);
                }
            s += "}";
            bool want = std::all_of(d.begin(), d.end(), f.eval);
            std::string q = s + " subset ris(x in " + s + " | " + f.text + ")";
            rep.expect(sat(q, {}) == want, q);
            // The same with the set named and its elements posted separately.
            std::vector<std::string> parts{"S subset ris(x in S | " + f.text + ")", "S = " + s};
            rep.expect(harness::run_parts(parts).ok() == want, "S = " + s + " after " + parts[0]);
            rep.expect(harness::run_parts({parts[1], parts[0]}).ok() == want, "S = " + s + " before " + parts[0]);
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Invariants over the worked examples.

inline std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline Report posting_order() {
    Report rep;
    for (auto& c : acceptance::regression_cases()) {
        if (c.parts.size() < 2) continue;
        Run fwd = harness::run_parts(c.parts, c.opts);
        std::vector<std::string> rev(c.parts.rbegin(), c.parts.rend());
        Run bwd = harness::run_parts(rev, c.opts);
        rep.expect(fwd.outcome == bwd.outcome, c.name + ": outcome depends on order");
        rep.expect(sorted_unique(fwd.signatures()) == sorted_unique(bwd.signatures()), c.name + ": answers depend on order");
        // Rotations as well, for the longer conjunctions.
        for (std::size_t k = 1; k + 1 < c.parts.size(); ++k) {
            std::vector<std::string> rot(c.parts.begin() + static_cast<std::ptrdiff_t>(k), c.parts.end());
            rot.insert(rot.end(), c.parts.begin(), c.parts.begin() + static_cast<std::ptrdiff_t>(k));
            Run r = harness::run_parts(rot, c.opts);
            rep.expect(sorted_unique(fwd.signatures()) == sorted_unique(r.signatures()),
                       c.name + ": answers depend on rotation " + std::to_string(k));
        }
    }
    return rep;
}

// Step budget per answer when streaming all answers of a worked example; some
// recursive definitions never finitely fail after their last answer.
constexpr std::size_t kStreamSteps = 20000;

inline Report backtracking() {
    Report rep;
    constexpr std::size_t kCap = 12;
    for (auto& c : acceptance::regression_cases()) {
        RunOptions o = c.opts;
        o.all = true;
        o.max_solutions = kCap;
        o.solver.step_limit = kStreamSteps;
        Solver s(o.solver);
        s.set_labeling(o.label);
        Parser p(s);
        for (auto& part : c.parts) s.add(p.formula(part));
        Run first = harness::collect(s, o);
        if (first.outcome == Outcome::ResourceLimit && first.answers.empty()) {
            rep.expect(false, c.name + ": " + first.error);
            continue;
        }
        // A step limit hit after some answers only truncates the stream.
        bool exhausted = first.outcome != Outcome::ResourceLimit && first.answers.size() < kCap;
        if (exhausted) {
            // Exhausting the answers must leave every named variable unbound.
            bool clean = true;
            for (auto& [name, v] : s.named())
                if (deref(v, s.store())->kind != TermKind::Var) clean = false;
            rep.expect(clean, c.name + ": bindings survive exhaustion");
            rep.expect(s.residue().empty(), c.name + ": residue survives exhaustion");
            // Posting the same formulas again gives the same answers in the same order.
            for (auto& part : c.parts) s.add(p.formula(part));
            Run again = harness::collect(s, o);
            rep.expect(first.signatures() == again.signatures(), c.name + ": answers change on re-solve");
            std::vector<std::string> ta, tb;
            for (auto& a : first.answers) ta.push_back(a.text);
            for (auto& a : again.answers) tb.push_back(a.text);
            rep.expect(ta == tb, c.name + ": printed answers change on re-solve");
        }
        // Each answer reached by backtracking is reproduced by a fresh solver
        // stopped at the same position.
        for (std::size_t k = 1; k <= first.answers.size(); k += 3) {
            RunOptions ok = o;
            ok.max_solutions = k;
            Run fresh = harness::run_parts(c.parts, ok);
            rep.expect(fresh.answers.size() == k && fresh.answers.back().text == first.answers[k - 1].text,
                       c.name + ": answer " + std::to_string(k) + " differs from a fresh run");
        }
    }
    return rep;
}

inline Report cache_equivalence() {
    Report rep;
    for (auto& c : acceptance::regression_cases()) {
        RunOptions base = c.opts;
        base.all = true;
        base.max_solutions = 12;
        base.solver.step_limit = kStreamSteps;
        Run ref = harness::run_parts(c.parts, base);
        for (std::size_t cap : {std::size_t{0}, std::size_t{1}, std::size_t{4}}) {
            RunOptions o = base;
            o.solver.cache_size = cap;
            Run r = harness::run_parts(c.parts, o);
            std::vector<std::string> ta, tb;
            for (auto& a : ref.answers) ta.push_back(a.text);
            for (auto& a : r.answers) tb.push_back(a.text);
            rep.expect(ref.outcome == r.outcome && ta == tb,
                       c.name + ": cache capacity " + std::to_string(cap) + " changes the answers");
        }
    }
    return rep;
}

}  // namespace props
