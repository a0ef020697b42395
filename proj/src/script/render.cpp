#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "bimcheck/script/checkscript.hpp"

namespace bimcheck::script {

namespace {

// Binding strength; higher binds tighter.
enum Prec { p_or = 1, p_and, p_not, p_cmp, p_add, p_mul, p_unary, p_postfix, p_primary };

int precedence(BinaryOp op) {
    switch (op) {
        case BinaryOp::logical_or: return p_or;
        case BinaryOp::logical_and: return p_and;
        case BinaryOp::lt:
        case BinaryOp::le:
        case BinaryOp::gt:
        case BinaryOp::ge:
        case BinaryOp::eq:
        case BinaryOp::ne: return p_cmp;
        case BinaryOp::add:
        case BinaryOp::sub: return p_add;
        case BinaryOp::mul:
        case BinaryOp::div: return p_mul;
    }
    return p_primary;
}

int precedence(const Expr& e) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Binary>) {
                return precedence(n.op);
            } else if constexpr (std::is_same_v<T, Unary>) {
                return n.op == UnaryOp::negate ? p_unary : p_not;
            } else if constexpr (std::is_same_v<T, MethodCall> || std::is_same_v<T, Attribute>) {
                return p_postfix;
            } else if constexpr (std::is_same_v<T, Lambda>) {
                return p_or - 1;
            } else {
                return p_primary;
            }
        },
        e.node);
}

std::string number_text(double v) {
    if (!std::isfinite(v) || v < 0) {
        throw std::invalid_argument("number literals must be finite and non-negative");
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

class Renderer {
public:
    std::string out;

    void program(const CheckProgram& p) {
        if (p.rule_id) out += fmt::format("rule {}\n", *p.rule_id);
        if (p.rule_id && !p.statements.empty()) out += '\n';
        for (const auto& s : p.statements) statement(s, 0);
    }

private:
    void indent(int depth) { out.append(static_cast<std::size_t>(depth) * 4, ' '); }

    void block(const Block& b, int depth) {
        out += "{\n";
        for (const auto& s : b) statement(s, depth + 1);
        indent(depth);
        out += '}';
    }

    void statement(const Stmt& s, int depth) {
        indent(depth);
        std::visit([&](const auto& n) { stmt(n, depth); }, s.node);
        out += '\n';
    }

    void stmt(const LetStmt& s, int) { out += fmt::format("let {} = {}", s.name, expr(s.value)); }

    void stmt(const ForStmt& s, int depth) {
        out += fmt::format("for {} in {} ", s.var, expr(s.iterable));
        block(s.body, depth);
    }

    void stmt(const IfStmt& s, int depth) {
        out += fmt::format("if {} ", expr(s.condition));
        block(s.then_body, depth);
        if (!s.else_body) return;
        const Block& eb = *s.else_body;
        if (eb.size() == 1 && std::holds_alternative<IfStmt>(eb.front().node)) {
            out += " else ";
            stmt(std::get<IfStmt>(eb.front().node), depth);
        } else {
            out += " else ";
            block(eb, depth);
        }
    }

    void stmt(const VerdictStmt& s, int) {
        out += s.kind == VerdictKind::classify ? "classify(" : "summary(";
        out += expr(s.target);
        out += ", ";
        out += rules::to_string(s.status);
        if (s.measured) out += ", measured=" + evidence(*s.measured);
        if (s.required) out += ", required=" + evidence(*s.required);
        if (s.note) out += ", note=" + expr(*s.note);
        out += ')';
    }

    std::string evidence(const Evidence& ev) {
        if (const auto* e = std::get_if<Expr>(&ev)) return expr(*e);
        const auto& rec = std::get<Record>(ev);
        std::string s = "{";
        for (std::size_t i = 0; i < rec.fields.size(); ++i) {
            if (i) s += ", ";
            s += rec.fields[i].first + ": " + expr(rec.fields[i].second);
        }
        return s + "}";
    }

    std::string wrap(const Expr& e, int min_prec) {
        std::string s = expr(e);
        return precedence(e) < min_prec ? "(" + s + ")" : s;
    }

    std::string args(const std::vector<Expr>& as) {
        std::string s = "(";
        for (std::size_t i = 0; i < as.size(); ++i) {
            if (i) s += ", ";
            s += expr(as[i]);
        }
        return s + ")";
    }

public:
    std::string expr(const Expr& e) {
        return std::visit([&](const auto& n) { return node(n); }, e.node);
    }

private:
    std::string node(const NumberLit& n) {
        std::string s = number_text(n.value);
        if (n.unit) s += fmt::format(" {}", to_string(*n.unit));
        return s;
    }
    std::string node(const TextLit& n) { return quote(n.value); }
    std::string node(const BoolLit& n) { return n.value ? "true" : "false"; }
    std::string node(const Name& n) { return n.name; }
    std::string node(const Lambda& n) { return fmt::format("{} => {}", n.param, expr(*n.body)); }
    std::string node(const Call& n) { return n.callee + args(n.args); }
    std::string node(const MethodCall& n) {
        return wrap(*n.receiver, p_postfix) + "." + n.method + args(n.args);
    }
    std::string node(const Attribute& n) { return wrap(*n.receiver, p_postfix) + "." + n.name; }
    std::string node(const Unary& n) {
        if (n.op == UnaryOp::negate) return "-" + wrap(*n.operand, p_unary);
        return "not " + wrap(*n.operand, p_not);
    }
    std::string node(const Binary& n) {
        const int p = precedence(n.op);
        // Comparisons do not chain, so both sides must bind tighter.
        const int lhs_min = p == p_cmp ? p + 1 : p;
        return fmt::format("{} {} {}", wrap(*n.lhs, lhs_min), to_string(n.op), wrap(*n.rhs, p + 1));
    }
};

}  // namespace

std::string render(const CheckProgram& program) {
    Renderer r;
    r.program(program);
    return r.out;
}

}  // namespace bimcheck::script
