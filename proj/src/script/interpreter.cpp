#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "bimcheck/model/spatial.hpp"
#include "bimcheck/script/checkscript.hpp"
#include "types.hpp"

namespace bimcheck::script {

namespace {

using detail::Type;
using ElementList = std::vector<const Element*>;

struct Value {
    Type type = Type::number;
    double num = 0.0;  // canonical units for quantities
    std::string text;
    bool flag = false;
    const Element* element = nullptr;
    std::shared_ptr<const ElementList> list;

    static Value quantity(Type t, double v) { return {t, v, {}, false, nullptr, nullptr}; }
    static Value quantity(const Quantity& q) { return quantity(detail::type_of(q.dim), q.value); }
    static Value of_text(std::string s) { return {Type::text, 0.0, std::move(s), false, nullptr, nullptr}; }
    static Value boolean(bool b) { return {Type::boolean, 0.0, {}, b, nullptr, nullptr}; }
    static Value of_element(const Element* e) { return {Type::element, 0.0, {}, false, e, nullptr}; }
    static Value of_list(ElementList items) {
        return {Type::list, 0.0, {}, false, nullptr, std::make_shared<const ElementList>(std::move(items))};
    }

    Quantity as_quantity() const { return {detail::dimension_of(type), num}; }
};

std::string describe(const Element& e) {
    return fmt::format("element {} ({} '{}')", e.id, to_string(e.category), e.name);
}

class Interpreter {
public:
    Interpreter(const BuildingModel& model, const ExecOptions& options, detail::TypeMap types)
        : model_(model), options_(options), types_(std::move(types)) {}

    std::vector<rules::Finding> run(const CheckProgram& p) {
        scopes_.emplace_back();
        block_body(p.statements);
        return std::move(findings_);
    }

private:
    const BuildingModel& model_;
    const ExecOptions& options_;
    detail::TypeMap types_;
    std::vector<std::map<std::string, Value>> scopes_;
    std::vector<rules::Finding> findings_;
    std::set<std::int64_t> classified_;
    std::set<std::string> summarized_;
    std::uint64_t steps_ = 0;

    [[noreturn]] static void fail(SourcePos pos, std::string message) {
        throw ScriptError(Phase::runtime, pos, std::move(message));
    }

    void step(SourcePos pos) {
        if (++steps_ > options_.step_budget) {
            fail(pos, fmt::format("step budget of {} exhausted; the program does too much work",
                                  options_.step_budget));
        }
    }

    struct ScopeGuard {
        Interpreter& in;
        explicit ScopeGuard(Interpreter& i) : in(i) { in.scopes_.emplace_back(); }
        ~ScopeGuard() { in.scopes_.pop_back(); }
    };

    const Value& lookup(const std::string& name, SourcePos pos) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            if (auto f = it->find(name); f != it->end()) return f->second;
        }
        fail(pos, fmt::format("unknown name '{}'", name));
    }

    void block_body(const Block& b) {
        for (const auto& s : b) {
            step(s.pos);
            std::visit([&](const auto& n) { stmt(n, s.pos); }, s.node);
        }
    }

    void stmt(const LetStmt& s, SourcePos) {
        Value v = eval(s.value);
        scopes_.back()[s.name] = std::move(v);
    }

    void stmt(const ForStmt& s, SourcePos) {
        const Value target = eval(s.iterable);
        for (const Element* e : *target.list) {
            ScopeGuard g(*this);
            scopes_.back()[s.var] = Value::of_element(e);
            block_body(s.body);
        }
    }

    void stmt(const IfStmt& s, SourcePos) {
        if (eval(s.condition).flag) {
            ScopeGuard g(*this);
            block_body(s.then_body);
        } else if (s.else_body) {
            ScopeGuard g(*this);
            block_body(*s.else_body);
        }
    }

    void stmt(const VerdictStmt& v, SourcePos pos) {
        rules::Finding f;
        const Value target = eval(v.target);
        if (v.kind == VerdictKind::classify) {
            if (!classified_.insert(target.element->id).second) {
                fail(pos, fmt::format("{} was already classified; classify each element once",
                                      describe(*target.element)));
            }
            f.element_id = target.element->id;
        } else {
            if (!summarized_.insert(target.text).second) {
                fail(pos, fmt::format("subject '{}' was already summarized", target.text));
            }
            f.subject = target.text;
        }
        f.status = v.status;
        std::string measured_key;
        if (v.measured) measured_key = evidence(*v.measured, f.measured, {});
        if (v.required) evidence(*v.required, f.required, measured_key);
        if (v.note) f.note = eval(*v.note).text;
        findings_.push_back(std::move(f));
    }

    // Returns the key used for a bare-expression entry.
    std::string evidence(const Evidence& ev, std::map<std::string, Quantity>& out, const std::string& paired_key) {
        if (const auto* e = std::get_if<Expr>(&ev)) {
            const std::string key = paired_key.empty() ? detail::evidence_key(*e) : paired_key;
            out[key] = eval(*e).as_quantity();
            return key;
        }
        for (const auto& [key, e] : std::get<Record>(ev).fields) out[key] = eval(e).as_quantity();
        return {};
    }

    Value eval(const Expr& e) {
        step(e.pos);
        return std::visit([&](const auto& n) { return node(n, e); }, e.node);
    }

    Value node(const NumberLit& n, const Expr&) {
        if (!n.unit) return Value::quantity(Type::number, n.value);
        return Value::quantity(unit_quantity(n.value, *n.unit));
    }
    Value node(const TextLit& n, const Expr&) { return Value::of_text(n.value); }
    Value node(const BoolLit& n, const Expr&) { return Value::boolean(n.value); }
    Value node(const Name& n, const Expr& e) { return lookup(n.name, e.pos); }
    Value node(const Lambda&, const Expr& e) { fail(e.pos, "a lambda cannot be evaluated on its own"); }

    Value node(const Unary& u, const Expr&) {
        Value v = eval(*u.operand);
        if (u.op == UnaryOp::logical_not) {
            v.flag = !v.flag;
        } else {
            v.num = -v.num;
        }
        return v;
    }

    static bool equal(const Value& a, const Value& b) {
        switch (a.type) {
            case Type::text: return a.text == b.text;
            case Type::boolean: return a.flag == b.flag;
            case Type::element: return a.element->id == b.element->id;
            default: return approx_equal(a.as_quantity(), b.as_quantity());
        }
    }

    Value node(const Binary& b, const Expr& e) {
        if (b.op == BinaryOp::logical_and || b.op == BinaryOp::logical_or) {
            const bool lhs = eval(*b.lhs).flag;
            if (b.op == BinaryOp::logical_and && !lhs) return Value::boolean(false);
            if (b.op == BinaryOp::logical_or && lhs) return Value::boolean(true);
            return Value::boolean(eval(*b.rhs).flag);
        }
        const Value l = eval(*b.lhs);
        const Value r = eval(*b.rhs);
        switch (b.op) {
            case BinaryOp::eq: return Value::boolean(equal(l, r));
            case BinaryOp::ne: return Value::boolean(!equal(l, r));
            case BinaryOp::ge: return Value::boolean(at_least(l.as_quantity(), r.as_quantity()));
            case BinaryOp::le: return Value::boolean(at_most(l.as_quantity(), r.as_quantity()));
            case BinaryOp::gt: return Value::boolean(!at_most(l.as_quantity(), r.as_quantity()));
            case BinaryOp::lt: return Value::boolean(!at_least(l.as_quantity(), r.as_quantity()));
            default: break;
        }
        const Type result = types_.at(&e);
        if (result == Type::text) return Value::of_text(l.text + r.text);
        switch (b.op) {
            case BinaryOp::add: return Value::quantity(result, l.num + r.num);
            case BinaryOp::sub: return Value::quantity(result, l.num - r.num);
            case BinaryOp::mul: return Value::quantity(result, l.num * r.num);
            case BinaryOp::div:
                if (r.num == 0.0) fail(e.pos, "division by zero");
                return Value::quantity(result, l.num / r.num);
            default: break;
        }
        fail(e.pos, "unsupported operator");
    }

    Value node(const Attribute& a, const Expr&) {
        const Element& el = *eval(*a.receiver).element;
        if (a.name == "id") return Value::quantity(Type::number, static_cast<double>(el.id));
        if (a.name == "index") return Value::quantity(Type::number, static_cast<double>(model_.index_of(el)));
        if (a.name == "name") return Value::of_text(el.name);
        if (a.name == "category") return Value::of_text(std::string(to_string(el.category)));
        const Level* level = model_.find_level(el.level_id);
        if (a.name == "level") return Value::of_text(level->name);
        return Value::quantity(Type::length, level->elevation.millimeters());
    }

    static Value param_value(const ParamValue& p) {
        return std::visit(
            [](const auto& v) -> Value {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, LengthQuantity>) {
                    return Value::quantity(Quantity::length(v));
                } else if constexpr (std::is_same_v<T, AreaQuantity>) {
                    return Value::quantity(Quantity::area(v));
                } else if constexpr (std::is_same_v<T, double>) {
                    return Value::quantity(Type::number, v);
                } else if constexpr (std::is_same_v<T, FlowRate>) {
                    return Value::quantity(Type::flow, v.cfm);
                } else if constexpr (std::is_same_v<T, std::uint64_t>) {
                    return Value::quantity(Type::number, static_cast<double>(v));
                } else if constexpr (std::is_same_v<T, std::string>) {
                    return Value::of_text(v);
                } else {
                    return Value::boolean(v);
                }
            },
            p);
    }

    Value node(const MethodCall& m, const Expr& e) {
        const Element& el = *eval(*m.receiver).element;
        const std::string& name = std::get<TextLit>(m.args.front().node).value;
        const ParamValue* p = el.find_param(name);
        if (m.method == "has") return Value::boolean(p != nullptr);
        if (!p) {
            if (m.args.size() == 2) return eval(m.args[1]);
            fail(e.pos, fmt::format("{} has no parameter '{}'; guard with .has(\"{}\") or pass a default",
                                    describe(el), name, name));
        }
        const Type want = detail::param_type(find_parameter(name)->kind);
        Value v = param_value(*p);
        if (v.type != want) {
            fail(e.pos, fmt::format("parameter '{}' of {} is {}, expected {}", name, describe(el),
                                    detail::type_name(v.type), detail::type_name(want)));
        }
        return v;
    }

    const Element& element_arg(const Call& c, std::size_t i) { return *eval(c.args[i]).element; }

    template <typename F>
    Value with_lambda(const Lambda& l, const Element* e, F&& body) {
        ScopeGuard g(*this);
        scopes_.back()[l.param] = Value::of_element(e);
        return body(eval(*l.body));
    }

    void require_clearance_data(const Element& f, SourcePos pos) {
        if (auto reason = clearance_inapplicable_reason(model_, f); !reason.empty()) {
            fail(pos, fmt::format("{}: {}; check clearance_applicable() first", describe(f), reason));
        }
    }

    Value node(const Call& c, const Expr& e) {
        const std::string& f = c.callee;
        if (f == "collect") {
            const Category cat = *parse_category(std::get<Name>(c.args[0].node).name);
            return Value::of_list(collect(model_, cat));
        }
        if (f == "filter" || f == "exists" || f == "all" || f == "sum" || f == "largest" || f == "smallest") {
            const Value list = eval(c.args[0]);
            const Lambda& l = std::get<Lambda>(c.args[1].node);
            if (f == "sum") {
                Value total = Value::quantity(types_.at(&e), 0.0);
                for (const Element* item : *list.list) {
                    total.num += with_lambda(l, item, [](Value v) { return v; }).num;
                }
                return total;
            }
            if (f == "largest" || f == "smallest") {
                if (list.list->empty()) fail(e.pos, fmt::format("{} of an empty list; check count() first", f));
                std::optional<Value> best;
                for (const Element* item : *list.list) {
                    Value v = with_lambda(l, item, [](Value x) { return x; });
                    if (!best || (f == "largest" ? v.num > best->num : v.num < best->num)) best = std::move(v);
                }
                return *best;
            }
            ElementList kept;
            for (const Element* item : *list.list) {
                const bool ok = with_lambda(l, item, [](Value v) { return v; }).flag;
                if (f == "exists" && ok) return Value::boolean(true);
                if (f == "all" && !ok) return Value::boolean(false);
                if (ok) kept.push_back(item);
            }
            if (f == "exists") return Value::boolean(false);
            if (f == "all") return Value::boolean(true);
            return Value::of_list(std::move(kept));
        }
        if (f == "count") return Value::quantity(Type::number, static_cast<double>(eval(c.args[0]).list->size()));
        if (f == "min" || f == "max") {
            const Value a = eval(c.args[0]);
            const Value b = eval(c.args[1]);
            return Value::quantity(a.type, f == "min" ? std::min(a.num, b.num) : std::max(a.num, b.num));
        }
        if (f == "abs") {
            Value a = eval(c.args[0]);
            a.num = std::abs(a.num);
            return a;
        }
        if (f == "flag") return Value::quantity(Type::number, eval(c.args[0]).flag ? 1.0 : 0.0);
        if (f == "text") {
            const Value a = eval(c.args[0]);
            if (a.type == Type::text) return a;
            if (a.type == Type::boolean) return Value::of_text(a.flag ? "true" : "false");
            if (a.type == Type::number) return Value::of_text(format_number(a.num));
            return Value::of_text(format_quantity(a.as_quantity()));
        }
        if (f == "threshold") {
            return Value::quantity(options_.config.threshold(std::get<TextLit>(c.args[0].node).value));
        }
        if (f == "allowed_material") {
            return Value::boolean(rules::allowed_floor_material(eval(c.args[0]).text, options_.config));
        }
        if (f == "distance") {
            const Element& a = element_arg(c, 0);
            const Element& b = element_arg(c, 1);
            const auto pa = plan_polygon(a);
            const auto pb = plan_polygon(b);
            if (!pa) fail(e.pos, fmt::format("{} has no plan geometry", describe(a)));
            if (!pb) fail(e.pos, fmt::format("{} has no plan geometry", describe(b)));
            return Value::quantity(Quantity::length(bimcheck::polygon_distance(*pa, *pb)));
        }
        if (f == "contains") {
            const Element& room = element_arg(c, 0);
            const Element& el = element_arg(c, 1);
            return Value::boolean(room_contains(room, el));
        }
        if (f == "clearance") {
            const Element& fx = element_arg(c, 0);
            const double depth = eval(c.args[1]).num;
            require_clearance_data(fx, e.pos);
            return Value::boolean(check_clearance(model_, fx, depth).clear);
        }

        const Element& el = element_arg(c, 0);
        if (f == "area") {
            const auto a = footprint_area(el);
            if (!a) fail(e.pos, fmt::format("{} has no footprint; guard with has_footprint()", describe(el)));
            return Value::quantity(Type::area, *a);
        }
        if (f == "width") {
            const auto w = plan_width(el);
            if (!w) fail(e.pos, fmt::format("{} has no plan geometry", describe(el)));
            return Value::quantity(Type::length, *w);
        }
        if (f == "has_room") return Value::boolean(containing_room(model_, el) != nullptr);
        if (f == "room_of") {
            const Element* room = containing_room(model_, el);
            if (!room) fail(e.pos, fmt::format("{} is not inside any room; guard with has_room()", describe(el)));
            return Value::of_element(room);
        }
        if (f == "has_level_above") return Value::boolean(level_height(model_, el).has_value());
        if (f == "level_height") {
            const auto h = level_height(model_, el);
            if (!h) fail(e.pos, fmt::format("{} has no level above; guard with has_level_above()", describe(el)));
            return Value::quantity(Type::length, *h);
        }
        if (f == "clearance_applicable") return Value::boolean(clearance_inapplicable_reason(model_, el).empty());
        if (f == "clear_depth") {
            require_clearance_data(el, e.pos);
            return Value::quantity(Type::length, clear_depth(model_, el));
        }
        if (f == "is_habitable") return Value::boolean(rules::is_habitable(el, options_.config));
        if (f == "is_kitchen") return Value::boolean(rules::is_kitchen(el, options_.config));
        if (f == "has_footprint") return Value::boolean(el.geometry.footprint.has_value());
        if (f == "has_bbox") return Value::boolean(el.geometry.bbox.has_value());
        if (f == "has_location") return Value::boolean(el.geometry.location.has_value());
        if (f == "has_facing") return Value::boolean(el.geometry.facing.has_value());
        fail(e.pos, fmt::format("unknown function '{}'", f));
    }
};

}  // namespace

rules::CheckResult execute(const CheckProgram& program, const BuildingModel& model, const ExecOptions& options) {
    detail::TypeMap types = detail::typecheck_with_types(program);
    rules::CheckResult result;
    result.rule_id = options.rule_id.value_or(program.rule_id.value_or(0));
    result.findings = Interpreter(model, options, std::move(types)).run(program);
    return result;
}

}  // namespace bimcheck::script
