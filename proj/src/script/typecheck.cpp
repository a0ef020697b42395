#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "bimcheck/script/checkscript.hpp"
#include "types.hpp"

namespace bimcheck::script {

namespace detail {

std::string_view type_name(Type t) {
    switch (t) {
        case Type::number: return "number";
        case Type::length: return "length";
        case Type::area: return "area";
        case Type::flow: return "flow";
        case Type::text: return "text";
        case Type::boolean: return "boolean";
        case Type::element: return "element";
        case Type::list: return "list";
    }
    return "?";
}

Dimension dimension_of(Type numeric) {
    switch (numeric) {
        case Type::length: return Dimension::length;
        case Type::area: return Dimension::area;
        case Type::flow: return Dimension::flow;
        default: return Dimension::number;
    }
}

Type type_of(Dimension dim) {
    switch (dim) {
        case Dimension::number: return Type::number;
        case Dimension::length: return Type::length;
        case Dimension::area: return Type::area;
        case Dimension::flow: return Type::flow;
    }
    return Type::number;
}

Type param_type(ParamKind kind) {
    switch (kind) {
        case ParamKind::length: return Type::length;
        case ParamKind::area: return Type::area;
        case ParamKind::number:
        case ParamKind::count: return Type::number;
        case ParamKind::flow: return Type::flow;
        case ParamKind::text: return Type::text;
        case ParamKind::flag: return Type::boolean;
    }
    return Type::number;
}

std::optional<Type> arithmetic_result(BinaryOp op, Type lhs, Type rhs) {
    if (op == BinaryOp::add && lhs == Type::text && rhs == Type::text) return Type::text;
    if (!is_numeric(lhs) || !is_numeric(rhs)) return std::nullopt;
    switch (op) {
        case BinaryOp::add:
        case BinaryOp::sub:
            if (lhs == rhs) return lhs;
            return std::nullopt;
        case BinaryOp::mul:
            if (lhs == Type::number) return rhs;
            if (rhs == Type::number) return lhs;
            if (lhs == Type::length && rhs == Type::length) return Type::area;
            return std::nullopt;
        case BinaryOp::div:
            if (rhs == Type::number) return lhs;
            if (lhs == rhs) return Type::number;
            if (lhs == Type::area && rhs == Type::length) return Type::length;
            return std::nullopt;
        default: return std::nullopt;
    }
}

std::string evidence_key(const Expr& e) {
    if (const auto* m = std::get_if<MethodCall>(&e.node)) {
        if (m->method == "param" && !m->args.empty()) {
            if (const auto* t = std::get_if<TextLit>(&m->args.front().node)) return t->value;
        }
    }
    if (const auto* c = std::get_if<Call>(&e.node)) {
        for (const char* f : {"area", "width", "distance", "level_height", "clear_depth", "count"}) {
            if (c->callee == f) return c->callee;
        }
    }
    if (const auto* n = std::get_if<Name>(&e.node)) return n->name;
    return "value";
}

}  // namespace detail

namespace {

using detail::Type;
using detail::type_name;

class Checker {
public:
    detail::TypeMap program(const CheckProgram& p) {
        push();
        block_body(p.statements);
        return std::move(types_);
    }

private:
    detail::TypeMap types_;
    std::vector<std::map<std::string, Type>> scopes_;

    void push() { scopes_.emplace_back(); }
    void pop() { scopes_.pop_back(); }
    void bind(const std::string& name, Type t) { scopes_.back()[name] = t; }

    std::optional<Type> lookup(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            if (auto f = it->find(name); f != it->end()) return f->second;
        }
        return std::nullopt;
    }

    [[noreturn]] static void fail(SourcePos pos, std::string message) {
        throw ScriptError(Phase::type, pos, std::move(message));
    }

    void block_body(const Block& b) {
        for (const auto& s : b) statement(s);
    }

    void scoped(const Block& b) {
        push();
        block_body(b);
        pop();
    }

    void statement(const Stmt& s) {
        std::visit([&](const auto& n) { stmt(n, s.pos); }, s.node);
    }

    void stmt(const LetStmt& s, SourcePos) { bind(s.name, expr(s.value)); }

    void stmt(const ForStmt& s, SourcePos) {
        expect(s.iterable, Type::list, "the loop target");
        push();
        bind(s.var, Type::element);
        block_body(s.body);
        pop();
    }

    void stmt(const IfStmt& s, SourcePos) {
        expect(s.condition, Type::boolean, "an if condition");
        scoped(s.then_body);
        if (s.else_body) scoped(*s.else_body);
    }

    void stmt(const VerdictStmt& v, SourcePos pos) {
        const char* verb = v.kind == VerdictKind::classify ? "classify" : "summary";
        if (v.kind == VerdictKind::classify) {
            expect(v.target, Type::element, "the first argument of classify");
        } else {
            expect(v.target, Type::text, "the first argument of summary (a subject text)");
        }
        if (v.status == rules::Status::non_compliant && (!v.measured || !v.required)) {
            fail(pos, fmt::format("a non_compliant {} needs both measured= and required= evidence", verb));
        }
        std::map<std::string, Type> measured;
        std::map<std::string, Type> required;
        if (v.measured) measured = evidence(*v.measured, "measured");
        if (v.required) required = evidence(*v.required, "required");
        for (const auto& [key, t] : required) {
            const auto m = measured.find(key);
            if (m != measured.end() && m->second != t) {
                fail(pos, fmt::format("measured '{}' is {} but required '{}' is {}", key, type_name(m->second),
                                      key, type_name(t)));
            }
        }
        if (v.measured && v.required && std::holds_alternative<Expr>(*v.measured) &&
            std::holds_alternative<Expr>(*v.required)) {
            const Type m = measured.begin()->second;
            const Type r = required.begin()->second;
            if (m != r) fail(pos, fmt::format("measured is {} but required is {}", type_name(m), type_name(r)));
        }
        if (v.note) expect(*v.note, Type::text, "note=");
    }

    std::map<std::string, Type> evidence(const Evidence& ev, std::string_view label) {
        std::map<std::string, Type> out;
        auto one = [&](const std::string& key, const Expr& e) {
            const Type t = expr(e);
            if (!detail::is_numeric(t)) {
                fail(e.pos, fmt::format("{} evidence must be a number or quantity, got {}", label, type_name(t)));
            }
            out[key] = t;
        };
        if (const auto* e = std::get_if<Expr>(&ev)) {
            one(detail::evidence_key(*e), *e);
        } else {
            for (const auto& [key, e] : std::get<Record>(ev).fields) one(key, e);
        }
        return out;
    }

    void expect(const Expr& e, Type want, std::string_view what) {
        const Type got = expr(e);
        if (got != want) {
            fail(e.pos, fmt::format("{} must be {}, got {}", what, article(want), type_name(got)));
        }
    }

    static std::string article(Type t) {
        const auto n = type_name(t);
        const bool vowel = n.front() == 'a' || n.front() == 'e';
        return fmt::format("{} {}", vowel ? "an" : "a", n);
    }

    Type expr(const Expr& e) {
        const Type t = std::visit([&](const auto& n) { return node(n, e.pos); }, e.node);
        types_[&e] = t;
        return t;
    }

    Type node(const NumberLit& n, SourcePos) {
        if (!n.unit) return Type::number;
        return detail::type_of(unit_quantity(n.value, *n.unit).dim);
    }
    Type node(const TextLit&, SourcePos) { return Type::text; }
    Type node(const BoolLit&, SourcePos) { return Type::boolean; }

    Type node(const Name& n, SourcePos pos) {
        if (auto t = lookup(n.name)) return *t;
        if (parse_category(n.name)) {
            fail(pos, fmt::format("'{}' is a category; use collect({}) to get its elements", n.name, n.name));
        }
        fail(pos, fmt::format("unknown name '{}'", n.name));
    }

    Type node(const Lambda&, SourcePos pos) {
        fail(pos, "a lambda is only allowed as the last argument of filter, exists, all, sum, largest or smallest");
    }

    Type node(const Unary& u, SourcePos pos) {
        const Type t = expr(*u.operand);
        if (u.op == UnaryOp::logical_not) {
            if (t != Type::boolean) fail(pos, fmt::format("'not' needs a boolean, got {}", type_name(t)));
            return t;
        }
        if (!detail::is_numeric(t)) fail(pos, fmt::format("cannot negate {}", type_name(t)));
        return t;
    }

    Type node(const Binary& b, SourcePos pos) {
        const Type l = expr(*b.lhs);
        const Type r = expr(*b.rhs);
        switch (b.op) {
            case BinaryOp::logical_and:
            case BinaryOp::logical_or:
                if (l != Type::boolean || r != Type::boolean) {
                    fail(pos, fmt::format("'{}' needs boolean operands, got {} and {}", to_string(b.op),
                                          type_name(l), type_name(r)));
                }
                return Type::boolean;
            case BinaryOp::lt:
            case BinaryOp::le:
            case BinaryOp::gt:
            case BinaryOp::ge:
                if (!detail::is_numeric(l) || !detail::is_numeric(r)) {
                    fail(pos, fmt::format("'{}' needs numbers or quantities, got {} and {}", to_string(b.op),
                                          type_name(l), type_name(r)));
                }
                [[fallthrough]];
            case BinaryOp::eq:
            case BinaryOp::ne:
                if (l == Type::list || r == Type::list) fail(pos, "cannot compare lists");
                if (l != r) fail(pos, fmt::format("cannot compare {} with {}", type_name(l), type_name(r)));
                return Type::boolean;
            default: break;
        }
        if (auto t = detail::arithmetic_result(b.op, l, r)) return *t;
        fail(pos, fmt::format("cannot apply '{}' to {} and {}", to_string(b.op), type_name(l), type_name(r)));
    }

    Type node(const Attribute& a, SourcePos pos) {
        const Type t = expr(*a.receiver);
        if (t != Type::element) fail(pos, fmt::format("{} has no attribute '{}'", type_name(t), a.name));
        if (a.name == "id" || a.name == "index") return Type::number;
        if (a.name == "name" || a.name == "level" || a.name == "category") return Type::text;
        if (a.name == "elevation") return Type::length;
        fail(pos, fmt::format("elements have no attribute '{}'; available: id, name, index, level, elevation, "
                              "category (use .param(\"{}\") for parameters)",
                              a.name, a.name));
    }

    Type node(const MethodCall& m, SourcePos pos) {
        const Type t = expr(*m.receiver);
        if (t != Type::element) fail(pos, fmt::format("{} has no method '{}'", type_name(t), m.method));
        if (m.method != "param" && m.method != "has") {
            fail(pos, fmt::format("elements have no method '{}'; available: param, has", m.method));
        }
        const std::size_t max_args = m.method == "param" ? 2 : 1;
        if (m.args.empty() || m.args.size() > max_args) {
            fail(pos, m.method == "param" ? "param takes a parameter name and an optional default"
                                          : "has takes one parameter name");
        }
        const auto* name = std::get_if<TextLit>(&m.args.front().node);
        if (!name) fail(m.args.front().pos, "parameter names must be string literals, e.g. .param(\"width\")");
        const ParamDoc* doc = find_parameter(name->value);
        if (!doc) {
            std::string known;
            for (const auto& p : parameter_schema()) known += (known.empty() ? "" : ", ") + p.name;
            fail(m.args.front().pos, fmt::format("unknown parameter '{}'; known parameters: {}", name->value, known));
        }
        if (m.method == "has") return Type::boolean;
        const Type pt = detail::param_type(doc->kind);
        if (m.args.size() == 2) {
            const Type d = expr(m.args[1]);
            if (d != pt) {
                fail(m.args[1].pos, fmt::format("default for '{}' must be {}, got {}", name->value, article(pt),
                                                type_name(d)));
            }
        }
        return pt;
    }

    void arity(const Call& c, SourcePos pos, std::size_t n, std::string_view signature) {
        if (c.args.size() != n) {
            fail(pos, fmt::format("{} takes {} argument{}, got {}", signature, n, n == 1 ? "" : "s", c.args.size()));
        }
    }

    void arg(const Call& c, std::size_t i, Type want) {
        const Type got = expr(c.args[i]);
        if (got != want) {
            fail(c.args[i].pos, fmt::format("argument {} of {} must be {}, got {}", i + 1, c.callee, article(want),
                                            type_name(got)));
        }
    }

    Type lambda(const Call& c, std::size_t i) {
        const auto* l = std::get_if<Lambda>(&c.args[i].node);
        if (!l) fail(c.args[i].pos, fmt::format("argument {} of {} must be a lambda such as x => ...", i + 1, c.callee));
        push();
        bind(l->param, Type::element);
        const Type t = expr(*l->body);
        pop();
        return t;
    }

    Type node(const Call& c, SourcePos pos) {
        const std::string& f = c.callee;
        if (f == "collect") {
            arity(c, pos, 1, "collect(Category)");
            const auto* n = std::get_if<Name>(&c.args[0].node);
            if (!n) fail(c.args[0].pos, "collect expects a category name, e.g. collect(Door)");
            if (!parse_category(n->name)) {
                std::string known;
                for (const Category cat : kAllCategories) {
                    known += (known.empty() ? "" : ", ") + std::string(to_string(cat));
                }
                fail(c.args[0].pos, fmt::format("unknown category '{}'; categories: {}", n->name, known));
            }
            return Type::list;
        }
        if (f == "filter" || f == "exists" || f == "all") {
            arity(c, pos, 2, f + "(list, x => condition)");
            arg(c, 0, Type::list);
            const Type body = lambda(c, 1);
            if (body != Type::boolean) {
                fail(c.args[1].pos, fmt::format("the lambda of {} must return a boolean, got {}", f, type_name(body)));
            }
            return f == "filter" ? Type::list : Type::boolean;
        }
        if (f == "sum" || f == "largest" || f == "smallest") {
            arity(c, pos, 2, f + "(list, x => value)");
            arg(c, 0, Type::list);
            const Type body = lambda(c, 1);
            if (!detail::is_numeric(body)) {
                fail(c.args[1].pos, fmt::format("the lambda of {} must return a number or quantity, got {}", f,
                                                type_name(body)));
            }
            return body;
        }
        if (f == "count") {
            arity(c, pos, 1, "count(list)");
            arg(c, 0, Type::list);
            return Type::number;
        }
        if (f == "min" || f == "max") {
            arity(c, pos, 2, f + "(a, b)");
            const Type a = expr(c.args[0]);
            const Type b = expr(c.args[1]);
            if (!detail::is_numeric(a) || a != b) {
                fail(pos, fmt::format("{} needs two values of the same dimension, got {} and {}", f, type_name(a),
                                      type_name(b)));
            }
            return a;
        }
        if (f == "abs") {
            arity(c, pos, 1, "abs(value)");
            const Type a = expr(c.args[0]);
            if (!detail::is_numeric(a)) fail(c.args[0].pos, fmt::format("abs needs a number or quantity, got {}", type_name(a)));
            return a;
        }
        if (f == "flag") {
            arity(c, pos, 1, "flag(boolean)");
            expect(c.args[0], Type::boolean, "the argument of flag");
            return Type::number;
        }
        if (f == "text") {
            arity(c, pos, 1, "text(value)");
            const Type a = expr(c.args[0]);
            if (a == Type::list || a == Type::element) {
                fail(c.args[0].pos, fmt::format("text cannot format {}; use .name for elements", article(a)));
            }
            return Type::text;
        }
        if (f == "threshold") {
            arity(c, pos, 1, "threshold(\"name\")");
            const auto* name = std::get_if<TextLit>(&c.args[0].node);
            if (!name) fail(c.args[0].pos, "threshold names must be string literals, e.g. threshold(\"exit_min_width\")");
            const rules::ThresholdInfo* info = rules::find_threshold(name->value);
            if (!info) {
                std::string known;
                for (const auto& t : rules::threshold_catalog()) known += (known.empty() ? "" : ", ") + t.name;
                fail(c.args[0].pos, fmt::format("unknown threshold '{}'; thresholds: {}", name->value, known));
            }
            return detail::type_of(info->default_value.dim);
        }
        if (f == "allowed_material") {
            arity(c, pos, 1, "allowed_material(text)");
            arg(c, 0, Type::text);
            return Type::boolean;
        }
        if (f == "distance" || f == "contains") {
            arity(c, pos, 2, f + (f == "distance" ? "(a, b)" : "(room, element)"));
            arg(c, 0, Type::element);
            arg(c, 1, Type::element);
            return f == "distance" ? Type::length : Type::boolean;
        }
        if (f == "clearance") {
            arity(c, pos, 2, "clearance(fixture, depth)");
            arg(c, 0, Type::element);
            arg(c, 1, Type::length);
            return Type::boolean;
        }
        static const std::map<std::string, Type, std::less<>> unary_element_fns = {
            {"area", Type::area},
            {"width", Type::length},
            {"has_room", Type::boolean},
            {"room_of", Type::element},
            {"has_level_above", Type::boolean},
            {"level_height", Type::length},
            {"clearance_applicable", Type::boolean},
            {"clear_depth", Type::length},
            {"is_habitable", Type::boolean},
            {"is_kitchen", Type::boolean},
            {"has_footprint", Type::boolean},
            {"has_bbox", Type::boolean},
            {"has_location", Type::boolean},
            {"has_facing", Type::boolean},
        };
        if (const auto it = unary_element_fns.find(f); it != unary_element_fns.end()) {
            arity(c, pos, 1, f + "(element)");
            arg(c, 0, Type::element);
            return it->second;
        }
        fail(pos, fmt::format("unknown function '{}'", f));
    }
};

}  // namespace

namespace detail {

TypeMap typecheck_with_types(const CheckProgram& program) { return Checker().program(program); }

}  // namespace detail

void typecheck(const CheckProgram& program) { Checker().program(program); }

}  // namespace bimcheck::script
