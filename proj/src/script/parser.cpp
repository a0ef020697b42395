#include <cmath>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "bimcheck/script/checkscript.hpp"
#include "lexer.hpp"

namespace bimcheck::script {

namespace {

using detail::Tok;
using detail::Token;

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    CheckProgram program() {
        CheckProgram p;
        if (at(Tok::kw_rule)) {
            next();
            const Token& n = peek();
            if (n.kind != Tok::number || n.number != std::floor(n.number) || n.number < 1 || n.number > 1e6) {
                fail(n, fmt::format("expected a rule number after 'rule', found {}", describe(n)));
            }
            p.rule_id = static_cast<int>(next().number);
        }
        while (!at(Tok::end)) p.statements.push_back(statement());
        return p;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = std::min(i_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    bool at(Tok k) const { return peek().kind == k; }
    Token next() {
        Token t = peek();
        if (i_ < toks_.size() - 1) ++i_;
        return t;
    }

    [[noreturn]] void fail(const Token& at, std::string message) const {
        throw ScriptError(Phase::parse, at.pos, std::move(message));
    }

    Token expect(Tok k, std::string_view what) {
        if (!at(k)) fail(peek(), fmt::format("expected {}, found {}", what, describe(peek())));
        return next();
    }

    std::string expect_identifier(std::string_view what) {
        const Token& t = peek();
        if (t.kind != Tok::identifier) {
            if (t.kind >= Tok::kw_rule && t.kind <= Tok::kw_summary) {
                fail(t, fmt::format("expected {}, found {} (reserved word)", what, describe(t)));
            }
            fail(t, fmt::format("expected {}, found {}", what, describe(t)));
        }
        return next().text;
    }

    Stmt statement() {
        const Token& t = peek();
        Stmt s;
        s.pos = t.pos;
        switch (t.kind) {
            case Tok::kw_let: {
                next();
                LetStmt let;
                let.name = expect_identifier("a variable name after 'let'");
                expect(Tok::assign, "'=' after the variable name");
                let.value = expr();
                s.node = std::move(let);
                return s;
            }
            case Tok::kw_for: {
                next();
                ForStmt loop;
                loop.var = expect_identifier("a loop variable after 'for'");
                expect(Tok::kw_in, "'in' after the loop variable");
                loop.iterable = expr();
                loop.body = block("the loop body");
                s.node = std::move(loop);
                return s;
            }
            case Tok::kw_if:
                s.node = if_statement();
                return s;
            case Tok::kw_classify:
            case Tok::kw_summary:
                s.node = verdict();
                return s;
            case Tok::kw_else:
                fail(t, "'else' without a matching 'if'");
            case Tok::kw_rule:
                fail(t, "'rule' header must be the first line of the program");
            default:
                fail(t, fmt::format("expected a statement (let, for, if, classify, summary), found {}",
                                    describe(t)));
        }
    }

    IfStmt if_statement() {
        expect(Tok::kw_if, "'if'");
        IfStmt s;
        s.condition = expr();
        s.then_body = block("the if body");
        if (at(Tok::kw_else)) {
            next();
            if (at(Tok::kw_if)) {
                Stmt nested;
                nested.pos = peek().pos;
                nested.node = if_statement();
                s.else_body = Block{};
                s.else_body->push_back(std::move(nested));
            } else {
                s.else_body = block("the else body");
            }
        }
        return s;
    }

    Block block(std::string_view what) {
        expect(Tok::lbrace, fmt::format("'{{' to open {}", what));
        Block b;
        while (!at(Tok::rbrace)) {
            if (at(Tok::end)) fail(peek(), fmt::format("missing '}}' to close {}", what));
            b.push_back(statement());
        }
        next();
        return b;
    }

    VerdictStmt verdict() {
        const Token kw = next();
        VerdictStmt v;
        v.kind = kw.kind == Tok::kw_classify ? VerdictKind::classify : VerdictKind::summary;
        expect(Tok::lparen, fmt::format("'(' after '{}'", kw.text));
        v.target = expr();
        expect(Tok::comma, "',' before the status");
        const Token& st = peek();
        std::optional<rules::Status> status;
        if (st.kind == Tok::identifier) status = rules::parse_status(st.text);
        if (!status) {
            fail(st, fmt::format("expected a status (compliant, non_compliant, not_applicable), found {}",
                                 describe(st)));
        }
        next();
        v.status = *status;
        while (at(Tok::comma)) {
            next();
            const Token& name = peek();
            if (name.kind != Tok::identifier || peek(1).kind != Tok::assign) {
                fail(name, fmt::format("expected a named argument (measured=, required=, note=), found {}",
                                       describe(name)));
            }
            next();
            next();
            if (name.text == "measured" || name.text == "required") {
                auto& slot = name.text == "measured" ? v.measured : v.required;
                if (slot) fail(name, fmt::format("'{}' given twice", name.text));
                slot = evidence();
            } else if (name.text == "note") {
                if (v.note) fail(name, "'note' given twice");
                v.note = expr();
            } else {
                fail(name, fmt::format("unknown argument '{}'; expected measured=, required= or note=",
                                       name.text));
            }
        }
        expect(Tok::rparen, fmt::format("')' to close '{}'", kw.text));
        return v;
    }

    Evidence evidence() {
        if (!at(Tok::lbrace)) return expr();
        next();
        Record r;
        for (;;) {
            const Token& key = peek();
            std::string name = expect_identifier("a field name in the evidence record");
            for (const auto& [existing, _] : r.fields) {
                if (existing == name) fail(key, fmt::format("field '{}' appears twice", name));
            }
            expect(Tok::colon, "':' after the field name");
            r.fields.emplace_back(std::move(name), expr());
            if (at(Tok::comma)) {
                next();
                continue;
            }
            expect(Tok::rbrace, "',' or '}' in the evidence record");
            return r;
        }
    }

    Expr make(SourcePos pos, auto node) {
        Expr e;
        e.node = std::move(node);
        e.pos = pos;
        return e;
    }

    Expr binary(BinaryOp op, SourcePos pos, Expr lhs, Expr rhs) {
        return make(pos, Binary{op, std::move(lhs), std::move(rhs)});
    }

    Expr expr() { return or_expr(); }

    Expr or_expr() {
        Expr lhs = and_expr();
        while (at(Tok::kw_or)) {
            const Token op = next();
            lhs = binary(BinaryOp::logical_or, op.pos, std::move(lhs), and_expr());
        }
        return lhs;
    }

    Expr and_expr() {
        Expr lhs = not_expr();
        while (at(Tok::kw_and)) {
            const Token op = next();
            lhs = binary(BinaryOp::logical_and, op.pos, std::move(lhs), not_expr());
        }
        return lhs;
    }

    Expr not_expr() {
        if (at(Tok::kw_not)) {
            const Token op = next();
            return make(op.pos, Unary{UnaryOp::logical_not, not_expr()});
        }
        return comparison();
    }

    static std::optional<BinaryOp> comparison_op(Tok k) {
        switch (k) {
            case Tok::lt: return BinaryOp::lt;
            case Tok::le: return BinaryOp::le;
            case Tok::gt: return BinaryOp::gt;
            case Tok::ge: return BinaryOp::ge;
            case Tok::eq: return BinaryOp::eq;
            case Tok::ne: return BinaryOp::ne;
            default: return std::nullopt;
        }
    }

    Expr comparison() {
        Expr lhs = additive();
        if (auto op = comparison_op(peek().kind)) {
            const Token t = next();
            Expr rhs = additive();
            if (comparison_op(peek().kind)) {
                fail(peek(), "comparisons cannot be chained; combine them with 'and'");
            }
            return binary(*op, t.pos, std::move(lhs), std::move(rhs));
        }
        if (at(Tok::assign)) fail(peek(), "unexpected '='; use '==' to compare");
        return lhs;
    }

    Expr additive() {
        Expr lhs = term();
        while (at(Tok::plus) || at(Tok::minus)) {
            const Token op = next();
            lhs = binary(op.kind == Tok::plus ? BinaryOp::add : BinaryOp::sub, op.pos, std::move(lhs), term());
        }
        return lhs;
    }

    Expr term() {
        Expr lhs = unary();
        while (at(Tok::star) || at(Tok::slash)) {
            const Token op = next();
            lhs = binary(op.kind == Tok::star ? BinaryOp::mul : BinaryOp::div, op.pos, std::move(lhs), unary());
        }
        return lhs;
    }

    Expr unary() {
        if (at(Tok::minus)) {
            const Token op = next();
            return make(op.pos, Unary{UnaryOp::negate, unary()});
        }
        return postfix();
    }

    Expr postfix() {
        Expr e = primary();
        while (at(Tok::dot)) {
            next();
            const Token name = peek();
            std::string member = expect_identifier("an attribute or method name after '.'");
            if (at(Tok::lparen)) {
                e = make(name.pos, MethodCall{std::move(e), std::move(member), arguments()});
            } else {
                e = make(name.pos, Attribute{std::move(e), std::move(member)});
            }
        }
        return e;
    }

    std::vector<Expr> arguments() {
        expect(Tok::lparen, "'('");
        std::vector<Expr> args;
        if (at(Tok::rparen)) {
            next();
            return args;
        }
        for (;;) {
            if (peek().kind == Tok::identifier && peek(1).kind == Tok::arrow) {
                const Token param = next();
                next();
                args.push_back(make(param.pos, Lambda{param.text, expr()}));
            } else {
                args.push_back(expr());
            }
            if (at(Tok::comma)) {
                next();
                continue;
            }
            expect(Tok::rparen, "',' or ')' in the argument list");
            return args;
        }
    }

    Expr primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::number: {
                const Token num = next();
                NumberLit lit{num.number, std::nullopt};
                const Token& u = peek();
                if (u.kind == Tok::kw_in) {
                    lit.unit = Unit::in;
                    next();
                } else if (u.kind == Tok::identifier) {
                    if (auto unit = parse_unit(u.text)) {
                        lit.unit = unit;
                        next();
                    }
                }
                return make(num.pos, lit);
            }
            case Tok::string: {
                const Token s = next();
                return make(s.pos, TextLit{s.text});
            }
            case Tok::kw_true:
            case Tok::kw_false: {
                const Token b = next();
                return make(b.pos, BoolLit{b.kind == Tok::kw_true});
            }
            case Tok::identifier: {
                const Token id = next();
                if (at(Tok::lparen)) return make(id.pos, Call{id.text, arguments()});
                if (at(Tok::arrow)) fail(peek(), "a lambda ('x => ...') is only allowed as a function argument");
                return make(id.pos, Name{id.text});
            }
            case Tok::lparen: {
                next();
                Expr inner = expr();
                expect(Tok::rparen, "')' to close the parenthesis");
                return inner;
            }
            case Tok::end:
                fail(t, "unexpected end of input; expected an expression");
            default:
                fail(t, fmt::format("expected an expression, found {}", describe(t)));
        }
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

}  // namespace

CheckProgram parse(std::string_view source) { return Parser(detail::tokenize(source)).program(); }

}  // namespace bimcheck::script
