// Command-line front end: batch files, one-shot formulas and an interactive prompt.
#include <setris/admissibility.hpp>
#include <setris/parser.hpp>
#include <setris/printer.hpp>
#include <setris/ris.hpp>
#include <setris/solver.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <unistd.h>

namespace {

using namespace setris;

enum Status { Ok = 0, Failed = 1, Error = 2 };

struct Config {
    std::string mode = "solve";
    std::size_t max_solutions = 100;
    std::size_t step_limit = 100000;
    std::vector<std::int64_t> int_bounds;
    std::size_t cache_size = 1024;
    std::string admissibility = "warn";
    bool dedup = false;
    bool json = false;
    bool label = false;
    std::string file;
    std::vector<std::string> formulas;
};

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Session {
public:
    explicit Session(const Config& cfg) : cfg_(cfg), solver_(options()), parser_(solver_) {
        solver_.set_labeling(cfg.label);
        parser_.set_strict(cfg.admissibility == "strict");
    }

    Status run(const std::string& stmt) {
        if (stmt.empty()) return Ok;
        if (stmt[0] != ':') return run_mode(cfg_.mode, stmt);
        auto sp = stmt.find_first_of(" \t\n");
        std::string cmd = stmt.substr(1, sp == std::string::npos ? std::string::npos : sp - 1);
        std::string arg = sp == std::string::npos ? "" : stmt.substr(sp + 1);
        if (cmd == "solve" || cmd == "s") return run_mode("solve", arg);
        if (cmd == "all" || cmd == "a") return run_mode("all", arg);
        if (cmd == "check" || cmd == "c") return run_mode("check", arg);
        if (cmd == "store") return show_store();
        if (cmd == "admissible" || cmd == "adm") return admissible(arg);
        if (cmd == "expand" || cmd == "e") return expand_cmd(arg);
        if (cmd == "reset" || cmd == "r") {
            solver_.reset();
            emit_line("ok");
            return Ok;
        }
        if (cmd == "help" || cmd == "h") {
            std::cout << help();
            return Ok;
        }
        throw CliError("unknown command :" + cmd);
    }

    static std::string help() {
        return "statements end with ';' in batch files\n"
               "  <formula>            run in the current mode\n"
               "  :solve F   (:s)      first solution and store\n"
               "  :all F     (:a)      all solutions\n"
               "  :check F   (:c)      true / false\n"
               "  :store               current bindings and store\n"
               "  :admissible F (:adm) admissibility verdict\n"
               "  :expand T  (:e)      extensional value of a set term\n"
               "  :reset     (:r)      forget all constraints and names\n";
    }

private:
    SolverOptions options() const {
        SolverOptions o;
        o.step_limit = cfg_.step_limit;
        o.cache_size = cfg_.cache_size;
        if (cfg_.int_bounds.size() == 2) {
            o.glb = cfg_.int_bounds[0];
            o.lub = cfg_.int_bounds[1];
        }
        return o;
    }

    void emit_line(const std::string& text) {
        if (cfg_.json)
            std::cout << nlohmann::json{{"result", text}}.dump() << "\n";
        else
            std::cout << text << "\n";
    }

    Formula parse_checked(const std::string& text) {
        Formula f = parser_.formula(text);
        if (cfg_.admissibility == "off") return f;
        Verdict v = check_admissible(f, solver_.pool());
        if (v.admissible) return f;
        std::string w = "formula is not admissible: " + render(v.witness->lhs) + " = " + render(v.witness->rhs);
        if (cfg_.admissibility == "strict") throw CliError(w);
        std::cerr << "warning: " << w << "\n";
        return f;
    }

    Status limit() {
        std::string msg = "ResourceLimit: " + solver_.last_error();
        if (cfg_.json)
            std::cout << nlohmann::json{{"outcome", "ResourceLimit"}, {"message", solver_.last_error()}}.dump() << "\n";
        else
            std::cout << msg << "\n";
        return Error;
    }

    Status failure() {
        if (cfg_.json)
            std::cout << nlohmann::json{{"outcome", "Failure"}}.dump() << "\n";
        else
            std::cout << "Failure\n";
        return Failed;
    }

    void print_solution(std::size_t index) {
        Printer p;
        Solution s = solver_.solution();
        if (cfg_.json) {
            auto j = p.json(s);
            j["outcome"] = "Success";
            if (index) j["solution"] = index;
            std::cout << j.dump() << "\n";
            return;
        }
        if (index) std::cout << "Solution " << index << ":\n";
        std::cout << p.solution(s);
    }

    Status run_mode(const std::string& mode, const std::string& text) {
        if (text.empty()) throw CliError("missing formula");
        solver_.add(parse_checked(text));
        Outcome o = solver_.solve();
        if (o == Outcome::ResourceLimit) return limit();
        if (mode == "check") {
            if (cfg_.json)
                std::cout << nlohmann::json{{"check", o == Outcome::Success}}.dump() << "\n";
            else
                std::cout << (o == Outcome::Success ? "true" : "false") << "\n";
            return o == Outcome::Success ? Ok : Failed;
        }
        if (o == Outcome::Failure) return failure();
        if (mode == "solve") {
            print_solution(0);
            return Ok;
        }
        std::set<std::string> seen;
        std::size_t count = 0;
        while (o == Outcome::Success && count < cfg_.max_solutions) {
            bool fresh = true;
            if (cfg_.dedup) {
                Printer p;
                fresh = seen.insert(p.solution(solver_.solution())).second;
            }
            if (fresh) print_solution(++count);
            if (count >= cfg_.max_solutions) break;
            o = solver_.next_solution();
        }
        if (o == Outcome::ResourceLimit) return limit();
        if (!cfg_.json) std::cout << count << " solution(s)\n";
        return Ok;
    }

    Status show_store() {
        print_solution(0);
        return Ok;
    }

    Status admissible(const std::string& text) {
        Verdict v = check_admissible(parser_.formula(text), solver_.pool());
        if (cfg_.json) {
            nlohmann::json j{{"admissible", v.admissible}};
            if (v.witness) j["witness"] = render(v.witness->lhs) + " = " + render(v.witness->rhs);
            std::cout << j.dump() << "\n";
        } else if (v.admissible) {
            std::cout << "admissible\n";
        } else {
            std::cout << "non-admissible: " << render(v.witness->lhs) << " = " << render(v.witness->rhs) << "\n";
        }
        return Ok;
    }

    Status expand_cmd(const std::string& text) {
        Term t = parser_.term(text);
        Term e = expand(solver_, t);
        Printer p;
        if (cfg_.json)
            std::cout << nlohmann::json{{"expand", p.json_term(e)}}.dump() << "\n";
        else
            std::cout << p.term(e) << "\n";
        return Ok;
    }

    const Config& cfg_;
    Solver solver_;
    Parser parser_;
};

// Runs one statement, turning library errors into a message and exit status 2.
Status guarded(Session& s, const std::string& stmt) {
    try {
        return s.run(stmt);
    } catch (const ParseError& e) {
        std::cerr << "syntax error at " << e.what() << "\n";
    } catch (const MalformedRis& e) {
        std::cerr << "MalformedRis at " << e.what() << "\n";
    } catch (const UnsafeRis& e) {
        std::cerr << "UnsafeRis: " << e.what() << "\n";
    } catch (const NotExpandable& e) {
        std::cerr << "NotExpandable: " << e.what() << "\n";
    } catch (const ResourceLimit& e) {
        std::cerr << "ResourceLimit: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return Error;
}

Status batch(Session& s, const std::vector<std::string>& stmts) {
    Status last = Ok;
    for (auto& st : stmts) {
        last = guarded(s, st);
        if (last == Error) return Error;
    }
    return last;
}

Status repl(Session& s) {
    Status last = Ok;
    std::string buffer, line;
    bool tty = isatty(0);
    if (tty) std::cout << "setris> " << std::flush;
    while (std::getline(std::cin, line)) {
        if (line == ":quit" || line == ":q") break;
        buffer += line + "\n";
        // Commands end at the line break; formulas may continue until ';'.
        auto stmts = split_statements(buffer);
        bool complete = buffer.find(';') != std::string::npos || (!buffer.empty() && buffer[0] == ':');
        if (complete) {
            for (auto& st : stmts) last = guarded(s, st);
            buffer.clear();
        }
        if (tty) std::cout << (buffer.empty() ? "setris> " : "   ...> ") << std::flush;
    }
    for (auto& st : split_statements(buffer)) last = guarded(s, st);
    return last;
}

}  // namespace

int main(int argc, char** argv) {
    Config cfg;
    CLI::App app{"Constraint solver for finite sets with restricted intensional sets"};
    app.add_option("--mode", cfg.mode, "What a plain statement does")->check(CLI::IsMember({"check", "solve", "all"}));
    app.add_option("--max-solutions", cfg.max_solutions, "Solutions printed in 'all' mode");
    app.add_option("--step-limit", cfg.step_limit, "Rewrite steps per solve before giving up");
    app.add_option("--int-bounds", cfg.int_bounds, "Global integer bounds LO HI")->expected(2)->allow_extra_args(false);
    app.add_option("--cache-size", cfg.cache_size, "RIS expansion cache entries (0 disables)");
    app.add_option("--admissibility", cfg.admissibility, "Admissibility check")
        ->check(CLI::IsMember({"warn", "strict", "off"}));
    app.add_flag("--dedup", cfg.dedup, "Drop repeated solutions in 'all' mode");
    app.add_flag("--json", cfg.json, "One JSON object per result line");
    app.add_flag("--label", cfg.label, "Enumerate integer variables at solutions");
    app.add_option("--file", cfg.file, "Batch file of ';'-terminated statements");
    app.add_option("formula", cfg.formulas, "Statements to run (';'-separated)");
    CLI11_PARSE(app, argc, argv);

    if (cfg.int_bounds.size() == 2 && cfg.int_bounds[0] > cfg.int_bounds[1]) {
        std::cerr << "error: --int-bounds LO must not exceed HI\n";
        return Error;
    }

    Session session(cfg);
    if (!cfg.file.empty()) {
        std::ifstream in(cfg.file);
        if (!in) {
            std::cerr << "error: cannot read " << cfg.file << "\n";
            return Error;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        Status st = batch(session, split_statements(ss.str()));
        if (st == Error || cfg.formulas.empty()) return st;
    }
    if (!cfg.formulas.empty()) {
        std::string all;
        for (auto& f : cfg.formulas) all += f + ";";
        return batch(session, split_statements(all));
    }
    if (!cfg.file.empty()) return Ok;
    return repl(session);
}
