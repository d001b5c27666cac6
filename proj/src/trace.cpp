#include "hetplan/trace.hpp"

#include <cctype>

namespace hetplan::gpu {

namespace {

struct Token {
    std::string text;
    int column;  // 1-based position in the source line
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#')
            break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#')
            ++i;
        out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

bool parse_int(const std::string& s, std::int64_t& out) {
    if (s.empty())
        return false;
    size_t pos = 0;
    try {
        out = std::stoll(s, &pos);
    } catch (...) {
        return false;
    }
    return pos == s.size();
}

bool valid_ident(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    TraceProgram run() {
        TraceProgram prog;
        std::vector<std::vector<TraceStmt>*> stack{&prog.stmts};
        std::vector<std::string> loop_vars;
        std::vector<int> loop_lines;

        size_t pos = 0;
        line_no_ = 0;
        while (pos <= text_.size()) {
            size_t eol = text_.find('\n', pos);
            std::string line = text_.substr(pos, eol == std::string::npos ? std::string::npos
                                                                          : eol - pos);
            ++line_no_;
            parse_line(line, stack, loop_vars, loop_lines);
            if (eol == std::string::npos)
                break;
            pos = eol + 1;
        }
        if (stack.size() != 1)
            throw ParseError("unterminated LOOP (missing END)", loop_lines.back(), 1);
        return prog;
    }

private:
    void parse_line(const std::string& line, std::vector<std::vector<TraceStmt>*>& stack,
                    std::vector<std::string>& loop_vars, std::vector<int>& loop_lines) {
        std::vector<Token> tok = tokenize(line);
        if (tok.empty())
            return;
        const std::string& kw = tok[0].text;

        if (kw == "ARRAY") {
            expect_argc(tok, 3, "ARRAY <name> <base_bytes>");
            if (!valid_ident(tok[1].text))
                fail("invalid array name '" + tok[1].text + "'", tok[1].column);
            std::int64_t base;
            if (!parse_int(tok[2].text, base) || base < 0)
                fail("array base must be a non-negative integer", tok[2].column);
            arrays_[tok[1].text] = base;
        } else if (kw == "COMPUTE") {
            expect_argc(tok, 3, "COMPUTE <op_class> <count>");
            std::int64_t count;
            if (!parse_int(tok[2].text, count) || count < 1)
                fail("compute count must be a positive integer", tok[2].column);
            TraceStmt s;
            s.kind = TraceStmt::Kind::Compute;
            s.op_class = tok[1].text;
            s.count = count;
            stack.back()->push_back(std::move(s));
        } else if (kw == "LOAD" || kw == "STORE") {
            expect_argc(tok, 2, kw + " <addr>");
            TraceStmt s;
            s.kind = kw == "LOAD" ? TraceStmt::Kind::Load : TraceStmt::Kind::Store;
            s.addr = parse_addr(tok[1], loop_vars);
            stack.back()->push_back(std::move(s));
        } else if (kw == "LOOP") {
            expect_argc(tok, 4, "LOOP <var> <lower> <upper>");
            if (!valid_ident(tok[1].text) || tok[1].text == "tid")
                fail("invalid loop variable '" + tok[1].text + "'", tok[1].column);
            for (const auto& v : loop_vars)
                if (v == tok[1].text)
                    fail("loop variable '" + tok[1].text + "' shadows an enclosing loop",
                         tok[1].column);
            TraceStmt s;
            s.kind = TraceStmt::Kind::Loop;
            s.loop_var = tok[1].text;
            if (!parse_int(tok[2].text, s.lower))
                fail("loop lower bound must be an integer constant", tok[2].column);
            if (!parse_int(tok[3].text, s.upper))
                fail("loop upper bound must be an integer constant", tok[3].column);
            if (s.lower > s.upper)
                fail("loop bounds out of order (lower > upper)", tok[2].column);
            stack.back()->push_back(std::move(s));
            stack.push_back(&stack.back()->back().body);
            loop_vars.push_back(tok[1].text);
            loop_lines.push_back(line_no_);
        } else if (kw == "END") {
            expect_argc(tok, 1, "END");
            if (stack.size() == 1)
                fail("END without matching LOOP", tok[0].column);
            stack.pop_back();
            loop_vars.pop_back();
            loop_lines.pop_back();
        } else {
            fail("unknown statement '" + kw + "'", tok[0].column);
        }
    }

    // <addr> := <expr> | <name>[<expr>];  <expr> := term ('+' term)*
    // term := k | k*tid | tid | k*<var> | <var>
    AddrExpr parse_addr(const Token& tok, const std::vector<std::string>& loop_vars) {
        AddrExpr expr;
        const std::string& s = tok.text;
        std::string body = s;
        size_t bracket = s.find('[');
        if (bracket != std::string::npos) {
            if (s.back() != ']')
                fail("expected closing ']' in address", tok.column + static_cast<int>(s.size()));
            std::string name = s.substr(0, bracket);
            auto it = arrays_.find(name);
            if (it == arrays_.end())
                fail("undeclared array '" + name + "'", tok.column);
            expr.base_bytes = it->second;
            body = s.substr(bracket + 1, s.size() - bracket - 2);
        }
        if (body.empty())
            fail("empty address expression", tok.column);

        size_t start = 0;
        while (start <= body.size()) {
            size_t plus = body.find('+', start);
            std::string term = body.substr(start, plus == std::string::npos ? std::string::npos
                                                                            : plus - start);
            int col = tok.column + static_cast<int>(start) +
                      (bracket == std::string::npos ? 0 : static_cast<int>(bracket) + 1);
            add_term(expr, term, col, loop_vars);
            if (plus == std::string::npos)
                break;
            start = plus + 1;
        }
        return expr;
    }

    void add_term(AddrExpr& expr, const std::string& term, int col,
                  const std::vector<std::string>& loop_vars) {
        if (term.empty())
            fail("empty term in address expression", col);
        std::int64_t coeff = 1;
        std::string sym = term;
        size_t star = term.find('*');
        if (star != std::string::npos) {
            if (!parse_int(term.substr(0, star), coeff))
                fail("expected integer coefficient before '*'", col);
            sym = term.substr(star + 1);
        }
        std::int64_t constant;
        if (star == std::string::npos && parse_int(term, constant)) {
            expr.base_bytes += constant;
            return;
        }
        if (sym == "tid") {
            expr.tid_coeff_bytes += coeff;
            return;
        }
        if (!valid_ident(sym))
            fail("malformed address term '" + term + "'", col);
        for (const auto& v : loop_vars) {
            if (v == sym) {
                expr.loop_coeffs[sym] += coeff;
                return;
            }
        }
        fail("undefined loop variable '" + sym + "'", col);
    }

    void expect_argc(const std::vector<Token>& tok, size_t n, const std::string& usage) {
        if (tok.size() != n)
            fail("expected '" + usage + "'", tok[0].column);
    }

    [[noreturn]] void fail(const std::string& msg, int column) {
        throw ParseError(msg, line_no_, column);
    }

    const std::string& text_;
    std::map<std::string, std::int64_t> arrays_;
    int line_no_ = 0;
};

std::size_t count_stmts(const std::vector<TraceStmt>& stmts) {
    std::size_t n = 0;
    for (const auto& s : stmts) {
        ++n;
        if (s.kind == TraceStmt::Kind::Loop)
            n += count_stmts(s.body);
    }
    return n;
}

void flatten_into(const std::vector<TraceStmt>& stmts, std::int64_t tid,
                  std::map<std::string, std::int64_t>& env, std::vector<FlatInstr>& out) {
    for (const auto& s : stmts) {
        switch (s.kind) {
        case TraceStmt::Kind::Compute: {
            FlatInstr fi;
            fi.kind = FlatInstr::Kind::Compute;
            fi.op_class = s.op_class;
            fi.count = s.count;
            out.push_back(std::move(fi));
            break;
        }
        case TraceStmt::Kind::Load:
        case TraceStmt::Kind::Store: {
            std::int64_t addr = s.addr.base_bytes + s.addr.tid_coeff_bytes * tid;
            for (const auto& [var, coeff] : s.addr.loop_coeffs)
                addr += coeff * env.at(var);
            if (addr < 0)
                throw ValidationError("addr",
                                      "address evaluates negative (" + std::to_string(addr) +
                                          ") at tid " + std::to_string(tid));
            FlatInstr fi;
            fi.kind = s.kind == TraceStmt::Kind::Load ? FlatInstr::Kind::Load
                                                      : FlatInstr::Kind::Store;
            fi.addr_bytes = static_cast<std::uint64_t>(addr);
            out.push_back(std::move(fi));
            break;
        }
        case TraceStmt::Kind::Loop:
            for (std::int64_t v = s.lower; v < s.upper; ++v) {
                env[s.loop_var] = v;
                flatten_into(s.body, tid, env, out);
            }
            env.erase(s.loop_var);
            break;
        }
    }
}

}  // namespace

TraceProgram parse_trace(const std::string& text) {
    return Parser(text).run();
}

std::size_t statement_count(const TraceProgram& prog) {
    return count_stmts(prog.stmts);
}

std::vector<FlatInstr> flatten(const TraceProgram& prog, std::int64_t tid) {
    std::vector<FlatInstr> out;
    std::map<std::string, std::int64_t> env;
    flatten_into(prog.stmts, tid, env, out);
    return out;
}

}  // namespace hetplan::gpu
