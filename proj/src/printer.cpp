#include <setris/printer.hpp>

namespace setris {

namespace {

int prec(ExprOp op) { return op == ExprOp::Add || op == ExprOp::Sub ? 1 : 2; }

const char* op_text(ExprOp op) {
    switch (op) {
        case ExprOp::Add: return " + ";
        case ExprOp::Sub: return " - ";
        case ExprOp::Mul: return " * ";
        case ExprOp::Mod: return " mod ";
    }
    return " ? ";
}

const char* rel_text(AtomKind k) {
    switch (k) {
        case AtomKind::Eq:
        case AtomKind::IntEq: return "=";
        case AtomKind::Neq:
        case AtomKind::IntNeq: return "neq";
        case AtomKind::In: return "in";
        case AtomKind::Nin: return "nin";
        case AtomKind::Subset: return "subset";
        case AtomKind::Nsubset: return "nsubset";
        case AtomKind::Lt: return "<";
        case AtomKind::Le: return "<=";
        case AtomKind::Gt: return ">";
        case AtomKind::Ge: return ">=";
        default: return nullptr;
    }
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

std::string Printer::var(const Term& v) {
    if (v->anon || v->name.empty()) {
        if (!display_) return v->name.empty() ? "_V" + std::to_string(v->id) : v->name;
        auto [it, fresh] = anon_.try_emplace(v->id, static_cast<int>(anon_.size()) + 1);
        return "_N" + std::to_string(it->second);
    }
    return display_ ? "_" + v->name : v->name;
}

std::string Printer::expr_side(const Term& t, int parent, bool right) {
    std::string s = term(t);
    if (t->kind == TermKind::Expr) {
        int p = prec(t->op);
        if (p < parent || (right && p == parent)) return "(" + s + ")";
    }
    return s;
}

std::string Printer::term(const Term& t) {
    switch (t->kind) {
        case TermKind::Var: return var(t);
        case TermKind::Int: return std::to_string(t->ival);
        case TermKind::Str: return quote(t->sval);
        case TermKind::Pair: return "(" + term(t->a) + "," + term(t->b) + ")";
        case TermKind::Expr: {
            int p = prec(t->op);
            return expr_side(t->a, p, false) + op_text(t->op) + expr_side(t->b, p, true);
        }
        case TermKind::Empty: return "{}";
        case TermKind::Interval: return "[" + std::to_string(t->ival) + "," + std::to_string(t->hi) + "]";
        case TermKind::Cons: {
            std::string s = "{";
            Term x = t;
            bool first = true;
            for (; x->kind == TermKind::Cons; x = x->b) {
                if (!first) s += ",";
                s += term(x->a);
                first = false;
            }
            if (x->kind != TermKind::Empty) s += "/" + term(x);
            return s + "}";
        }
        case TermKind::Ris: {
            const RisTerm& r = *t->ris;
            std::string s = "ris(" + term(r.control) + " in " + term(r.domain);
            bool trivial = r.filter->tag == FormulaNode::Tag::Atom && r.filter->kind == AtomKind::TrueC;
            if (!trivial) s += " | " + formula(r.filter);
            if (!same(r.pattern, r.control)) s += " @ " + term(r.pattern);
            if (!r.dummies.empty()) {
                s += " ;";
                for (std::size_t i = 0; i < r.dummies.size(); ++i) s += (i ? ", " : " ") + term(r.dummies[i]);
            }
            return s + ")";
        }
    }
    return "?";
}

std::string Printer::conj_part(const Formula& f) {
    return f->tag == FormulaNode::Tag::Or ? "(" + formula(f) + ")" : formula(f);
}

std::string Printer::formula(const Formula& f) {
    if (f->tag == FormulaNode::Tag::And) return conj_part(f->l) + " & " + conj_part(f->r);
    if (f->tag == FormulaNode::Tag::Or) return formula(f->l) + " or " + formula(f->r);
    const auto& a = f->args;
    if (const char* rel = rel_text(f->kind)) return term(a[0]) + " " + rel + " " + term(a[1]);
    switch (f->kind) {
        case AtomKind::TrueC: return "true";
        case AtomKind::FalseC: return "false";
        case AtomKind::Label: return "label(" + term(a[0]) + ")";
        default: break;
    }
    std::string s = kind_name(f->kind);
    s += "(";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + term(a[i]);
    return s + ")";
}

std::string Printer::solution(const Solution& s) {
    std::map<VarId, const IntDomain*> dom;
    for (auto& [id, d] : s.domains) dom[id] = &d;
    std::string out;
    for (auto& [v, val] : s.bindings) {
        out += var(v) + " = ";
        if (val->kind == TermKind::Var) {
            out += "unknown";
            if (auto it = dom.find(val->id); it != dom.end()) out += " -- Domain: " + it->second->str();
            if (val->id != v->id) out += " (same as " + var(val) + ")";
        } else {
            out += term(val);
        }
        out += "\n";
    }
    if (s.residue.empty()) return out + "Store: (empty)\n";
    for (std::size_t i = 0; i < s.residue.size(); ++i)
        out += (i ? "       " : "Store: ") + formula(s.residue[i]) + "\n";
    return out;
}

nlohmann::json Printer::json_term(const Term& t) {
    using nlohmann::json;
    switch (t->kind) {
        case TermKind::Int: return t->ival;
        case TermKind::Str: return t->sval;
        case TermKind::Var: return json{{"var", var(t)}};
        case TermKind::Pair: return json::array({json_term(t->a), json_term(t->b)});
        case TermKind::Empty: return json{{"set", json::array()}};
        case TermKind::Cons: {
            json elems = json::array();
            Term x = t;
            for (; x->kind == TermKind::Cons; x = x->b) elems.push_back(json_term(x->a));
            json j{{"set", elems}};
            if (x->kind != TermKind::Empty) j["rest"] = json_term(x);
            return j;
        }
        case TermKind::Interval: return json{{"interval", json::array({t->ival, t->hi})}};
        case TermKind::Expr: return json{{"expr", term(t)}};
        case TermKind::Ris: return json{{"ris", term(t)}};
    }
    return nullptr;
}

nlohmann::json Printer::json(const Solution& s) {
    using nlohmann::json;
    json b = json::object(), d = json::object(), r = json::array();
    std::map<VarId, const IntDomain*> dom;
    for (auto& [id, dm] : s.domains) dom[id] = &dm;
    for (auto& [v, val] : s.bindings) {
        b[var(v)] = json_term(val);
        if (val->kind == TermKind::Var)
            if (auto it = dom.find(val->id); it != dom.end()) d[var(v)] = it->second->str();
    }
    for (auto& a : s.residue) r.push_back(formula(a));
    return json{{"bindings", b}, {"residue", r}, {"domains", d}};
}

}  // namespace setris
