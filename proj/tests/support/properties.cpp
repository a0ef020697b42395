#include "properties.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bimcheck/model/spatial.hpp"
#include "bimcheck/rules/rules.hpp"
#include "bimcheck/script/checkscript.hpp"

namespace bimcheck::props {

using namespace script;

namespace {

// ---------------------------------------------------------------- programs

class ProgramGen {
public:
    explicit ProgramGen(std::uint64_t seed) : rng_(seed) {}

    CheckProgram program() {
        CheckProgram p;
        if (chance(0.6)) p.rule_id = uniform(1, 40);
        const int n = uniform(0, 6);
        for (int i = 0; i < n; ++i) p.statements.push_back(statement(3));
        return p;
    }

private:
    std::mt19937_64 rng_;

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

    std::string ident() {
        static const std::set<std::string> reserved = {
            "rule",     "let",  "for",  "in",    "if",  "else", "and", "or",  "not",  "true",
            "false",    "classify", "summary", "mm", "ft", "sqft", "sqm", "cfm"};
        static const std::string first = "abcdefghijklmnopqrstuvwxyz_ABCDEFGHIJKLMNOPQRSTUVWXYZ";
        static const std::string rest = "abcdefghijklmnopqrstuvwxyz_0123456789";
        for (;;) {
            std::string s(1, first[static_cast<std::size_t>(uniform(0, static_cast<int>(first.size()) - 1))]);
            const int len = uniform(0, 7);
            for (int i = 0; i < len; ++i) s += rest[static_cast<std::size_t>(uniform(0, static_cast<int>(rest.size()) - 1))];
            if (!reserved.contains(s)) return s;
        }
    }

    double number() {
        switch (uniform(0, 3)) {
            case 0: return uniform(0, 1000);
            case 1: return uniform(0, 800) / 8.0;
            case 2: return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) * std::pow(10.0, uniform(-6, 21));
            default: return std::uniform_real_distribution<double>(0.0, 100.0)(rng_);
        }
    }

    std::string text() {
        static const std::array<std::string, 12> pieces = {"a", "Door", " ", "\"", "\\", "\n", "\t", "é",
                                                             "{", "#", "36 in", "=>"};
        std::string s;
        const int n = uniform(0, 5);
        for (int i = 0; i < n; ++i) s += pieces[static_cast<std::size_t>(uniform(0, pieces.size() - 1))];
        return s;
    }

    static Expr make(decltype(Expr::node) node) { return Expr{std::move(node), {}}; }

    Expr leaf() {
        switch (uniform(0, 3)) {
            case 0: {
                NumberLit n{number(), std::nullopt};
                if (chance(0.5)) n.unit = static_cast<Unit>(uniform(0, 5));
                return make(n);
            }
            case 1: return make(TextLit{text()});
            case 2: return make(BoolLit{chance(0.5)});
            default: return make(Name{ident()});
        }
    }

    std::vector<Expr> args(int depth, bool allow_lambda) {
        std::vector<Expr> out;
        const int n = uniform(0, 3);
        for (int i = 0; i < n; ++i) {
            if (allow_lambda && chance(0.25)) {
                out.push_back(make(Lambda{ident(), expr(depth - 1)}));
            } else {
                out.push_back(expr(depth - 1));
            }
        }
        return out;
    }

    Expr expr(int depth) {
        if (depth <= 0 || chance(0.3)) return leaf();
        switch (uniform(0, 5)) {
            case 0: return make(Call{ident(), args(depth, true)});
            case 1: return make(MethodCall{expr(depth - 1), ident(), args(depth, false)});
            case 2: return make(Attribute{expr(depth - 1), ident()});
            case 3: return make(Unary{chance(0.5) ? UnaryOp::negate : UnaryOp::logical_not, expr(depth - 1)});
            default: {
                const auto op = static_cast<BinaryOp>(uniform(0, static_cast<int>(BinaryOp::logical_or)));
                return make(Binary{op, expr(depth - 1), expr(depth - 1)});
            }
        }
    }

    Block block(int depth) {
        Block b;
        const int n = depth <= 0 ? 0 : uniform(0, 3);
        for (int i = 0; i < n; ++i) b.push_back(statement(depth - 1));
        return b;
    }

    Evidence evidence() {
        if (chance(0.5)) return expr(2);
        Record r;
        std::set<std::string> used;
        const int n = uniform(1, 3);
        for (int i = 0; i < n; ++i) {
            std::string key = ident();
            if (used.insert(key).second) r.fields.emplace_back(std::move(key), expr(2));
        }
        return r;
    }

    Stmt statement(int depth) {
        auto wrap = [](decltype(Stmt::node) node) { return Stmt{std::move(node), {}}; };
        switch (depth <= 0 ? uniform(0, 1) * 3 : uniform(0, 3)) {
            case 0: return wrap(LetStmt{ident(), expr(3)});
            case 1: return wrap(ForStmt{ident(), expr(2), block(depth)});
            case 2: {
                IfStmt s{expr(3), block(depth), std::nullopt};
                if (chance(0.3)) {
                    s.else_body = Block{};
                    s.else_body->push_back(wrap(IfStmt{expr(2), block(depth - 1), std::nullopt}));
                } else if (chance(0.5)) {
                    s.else_body = block(depth);
                }
                return wrap(std::move(s));
            }
            default: {
                VerdictStmt v;
                v.kind = chance(0.5) ? VerdictKind::classify : VerdictKind::summary;
                v.target = expr(2);
                v.status = static_cast<rules::Status>(uniform(0, 2));
                if (chance(0.5)) v.measured = evidence();
                if (chance(0.5)) v.required = evidence();
                if (chance(0.3)) v.note = expr(1);
                return wrap(std::move(v));
            }
        }
    }
};

// ---------------------------------------------------------------- monotonicity

struct Editable {
    std::string name;
    LengthUnit units;
    std::vector<Level> levels;
    std::vector<Element> elements;

    explicit Editable(const BuildingModel& m)
        : name(m.name()), units(m.source_units()), levels(m.levels()), elements(m.elements()) {}

    BuildingModel build() const { return BuildingModel(name, units, levels, elements); }

    std::int64_t next_id() const {
        std::int64_t id = 0;
        for (const auto& e : elements) id = std::max(id, e.id);
        return id + 1;
    }
};

void scale_length(Element& e, const std::string& param, double k) {
    const auto it = e.params.find(param);
    if (it == e.params.end()) return;
    if (auto* q = std::get_if<LengthQuantity>(&it->second)) q->value *= k;
}

void scale_about_centroid(geom::Polygon& poly, double k) {
    const geom::Point2 c = geom::centroid(poly);
    for (auto& p : poly) p = c + k * (p - c);
}

void translate_x(Element& e, double dx) {
    auto& g = e.geometry;
    if (g.bbox) {
        g.bbox->min.x += dx;
        g.bbox->max.x += dx;
    }
    if (g.footprint) {
        for (auto& p : *g.footprint) p.x += dx;
    }
    if (g.location) g.location->x += dx;
}

std::string key_of(const rules::Finding& f) {
    return f.element_id != 0 ? std::to_string(f.element_id) : f.subject;
}

class Enlarger {
public:
    explicit Enlarger(std::uint64_t seed) : rng_(seed) {}

    // Returns nullopt when the random enlargement would change which room holds a fixture,
    // which is a different building rather than a bigger one.
    std::optional<BuildingModel> enlarge(const BuildingModel& model, int rule) {
        Editable m(model);
        auto pick = [&] { return std::bernoulli_distribution(0.7)(rng_); };
        auto factor = [&] { return std::uniform_real_distribution<double>(1.0, 1.5)(rng_); };
        switch (rule) {
            case 1:
                for (auto& e : m.elements) {
                    if (e.category != Category::Door || !pick()) continue;
                    for (const char* p : {"width", "height", "clear_width"}) scale_length(e, p, factor());
                }
                break;
            case 2:
                for (auto& e : m.elements) {
                    if (e.category == Category::Stair && pick()) scale_length(e, "width", factor());
                }
                break;
            case 3:
                for (auto& e : m.elements) {
                    if (e.category == Category::Railing && pick()) scale_length(e, "height", factor());
                }
                break;
            case 4: {
                std::sort(m.levels.begin(), m.levels.end(),
                          [](const Level& a, const Level& b) { return a.elevation.value < b.elevation.value; });
                const double step = std::uniform_real_distribution<double>(0.0, 600.0)(rng_);
                for (std::size_t i = 0; i < m.levels.size(); ++i) m.levels[i].elevation.value += step * i;
                break;
            }
            case 5:
                for (auto& e : m.elements) {
                    if (e.category != Category::Wall || !pick()) continue;
                    scale_length(e, "length", factor());
                    scale_length(e, "height", factor());
                }
                break;
            case 6:
                for (auto& e : m.elements) {
                    if (e.category == Category::Room && e.geometry.footprint && pick()) {
                        scale_about_centroid(*e.geometry.footprint, factor());
                    }
                }
                break;
            case 7: return enlarge_fixture_room(model, m, factor());
            case 8: {
                static const std::array<const char*, 6> kinds = {"water_closet", "lavatory", "bathtub",
                                                                 "shower", "bidet", "sink"};
                const int extra = std::uniform_int_distribution<int>(0, 3)(rng_);
                for (int i = 0; i < extra; ++i) {
                    Element e;
                    e.id = m.next_id();
                    e.category = Category::PlumbingFixture;
                    e.name = fmt::format("Extra Fixture {}", i);
                    e.level_id = m.levels.front().id;
                    e.params.emplace("fixture_type",
                                     std::string(kinds[std::uniform_int_distribution<std::size_t>(0, 5)(rng_)]));
                    m.elements.push_back(std::move(e));
                }
                break;
            }
            case 9: {
                std::vector<Element> sinks;
                for (const auto& room : m.elements) {
                    if (room.category != Category::Room || !room.geometry.footprint ||
                        !rules::is_kitchen(room, rules::RuleConfig::defaults()) || !pick()) {
                        continue;
                    }
                    Element sink;
                    sink.id = m.next_id() + static_cast<std::int64_t>(sinks.size());
                    sink.category = Category::PlumbingFixture;
                    sink.name = "Added Sink";
                    sink.level_id = room.level_id;
                    sink.params.emplace("fixture_type", std::string("sink"));
                    const auto c = geom::centroid(*room.geometry.footprint);
                    sink.geometry.location = geom::Point3{c.x, c.y, 900.0};
                    sinks.push_back(std::move(sink));
                }
                for (auto& s : sinks) m.elements.push_back(std::move(s));
                break;
            }
            case 10:
                for (auto& e : m.elements) {
                    if (e.category == Category::Floor && pick()) scale_length(e, "thickness", factor());
                }
                break;
            case 11: {
                // Shifting footings further right in order of their left edge only opens gaps.
                std::vector<Element*> footings;
                for (auto& e : m.elements) {
                    if (e.category == Category::Footing && plan_polygon(e)) footings.push_back(&e);
                }
                auto left = [](const Element* e) {
                    const auto poly = *plan_polygon(*e);
                    return std::min_element(poly.begin(), poly.end(), [](auto a, auto b) { return a.x < b.x; })->x;
                };
                std::stable_sort(footings.begin(), footings.end(),
                                 [&](const Element* a, const Element* b) { return left(a) < left(b); });
                const double step = std::uniform_real_distribution<double>(0.0, 1500.0)(rng_);
                for (std::size_t i = 0; i < footings.size(); ++i) translate_x(*footings[i], step * i);
                break;
            }
            case 12:
                for (auto& e : m.elements) {
                    if (e.category != Category::AirTerminal || !pick()) continue;
                    if (auto it = e.params.find("flow"); it != e.params.end()) {
                        if (auto* f = std::get_if<FlowRate>(&it->second)) f->cfm *= factor();
                    }
                }
                break;
            default: break;
        }
        return m.build();
    }

private:
    std::mt19937_64 rng_;

    std::optional<BuildingModel> enlarge_fixture_room(const BuildingModel& model, Editable& m, double k) {
        std::vector<std::int64_t> rooms;
        for (const Element* f : collect(model, Category::PlumbingFixture)) {
            if (const Element* room = containing_room(model, *f)) rooms.push_back(room->id);
        }
        if (rooms.empty()) return m.build();
        const std::int64_t chosen = rooms[std::uniform_int_distribution<std::size_t>(0, rooms.size() - 1)(rng_)];
        for (auto& e : m.elements) {
            if (e.id == chosen && e.geometry.footprint) scale_about_centroid(*e.geometry.footprint, k);
        }
        BuildingModel out = m.build();
        for (const Element* f : collect(model, Category::PlumbingFixture)) {
            const Element* before = containing_room(model, *f);
            const Element* after = containing_room(out, *out.find_element(f->id));
            if (before != nullptr && (after == nullptr || after->id != before->id)) return std::nullopt;
        }
        return out;
    }
};

// ---------------------------------------------------------------- distance oracle

double orient(geom::Point2 a, geom::Point2 b, geom::Point2 c) { return geom::cross(b - a, c - a); }

bool on_segment(geom::Point2 a, geom::Point2 b, geom::Point2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool crosses(geom::Point2 a, geom::Point2 b, geom::Point2 c, geom::Point2 d) {
    const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
    return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
           (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
}

double point_to_segment(geom::Point2 p, geom::Point2 a, geom::Point2 b) {
    const geom::Point2 ab = b - a;
    const double len2 = geom::dot(ab, ab);
    const double t = len2 == 0.0 ? 0.0 : std::clamp(geom::dot(p - a, ab) / len2, 0.0, 1.0);
    const geom::Point2 q = a + t * ab;
    return std::hypot(p.x - q.x, p.y - q.y);
}

// Winding number, a different containment test from the library's crossing parity.
bool winds_around(geom::Point2 p, const geom::Polygon& poly) {
    int wn = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const geom::Point2 a = poly[i];
        const geom::Point2 b = poly[(i + 1) % poly.size()];
        if (a.y <= p.y) {
            if (b.y > p.y && orient(a, b, p) > 0) ++wn;
        } else if (b.y <= p.y && orient(a, b, p) < 0) {
            --wn;
        }
    }
    return wn != 0;
}

double brute_force_distance(const geom::Polygon& a, const geom::Polygon& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (crosses(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) return 0.0;
        }
    }
    if (winds_around(a[0], b) || winds_around(b[0], a)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [p, q] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
        for (const auto& v : *p) {
            for (std::size_t j = 0; j < q->size(); ++j) {
                best = std::min(best, point_to_segment(v, (*q)[j], (*q)[(j + 1) % q->size()]));
            }
        }
    }
    return best;
}

// Star-shaped, hence simple: vertices at increasing angles around a centre.
geom::Polygon random_polygon(std::mt19937_64& rng, geom::Point2 centre) {
    const int n = std::uniform_int_distribution<int>(3, 8)(rng);
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (auto& a : angles) a = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    std::sort(angles.begin(), angles.end());
    geom::Polygon poly;
    for (const double a : angles) {
        const double r = std::uniform_real_distribution<double>(200.0, 2000.0)(rng);
        poly.push_back({centre.x + r * std::cos(a), centre.y + r * std::sin(a)});
    }
    return poly;
}

}  // namespace

CheckProgram random_program(std::uint64_t seed) { return ProgramGen(seed).program(); }

PropertyReport render_round_trip(std::uint64_t seed, std::size_t cases) {
    PropertyReport r;
    for (std::size_t i = 0; i < cases; ++i, ++r.cases) {
        const CheckProgram p = random_program(seed + i);
        std::string text;
        try {
            text = render(p);
            if (parse(text) != p) {
                r.ok = false;
                r.failure = fmt::format("seed {}: parse(render(p)) differs from p for:\n{}", seed + i, text);
                return r;
            }
            if (render(parse(text)) != text) {
                r.ok = false;
                r.failure = fmt::format("seed {}: rendering is not a fixed point:\n{}", seed + i, text);
                return r;
            }
        } catch (const std::exception& e) {
            r.ok = false;
            r.failure = fmt::format("seed {}: {}\n{}", seed + i, e.what(), text);
            return r;
        }
    }
    return r;
}

PropertyReport unit_round_trip(std::uint64_t seed, std::size_t cases) {
    PropertyReport r;
    std::mt19937_64 rng(seed);
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
    for (std::size_t i = 0; i < cases; ++i, ++r.cases) {
        const double sign = std::bernoulli_distribution(0.1)(rng) ? -1.0 : 1.0;
        const double v = sign * std::uniform_real_distribution<double>(0.0, 1.0)(rng) *
                         std::pow(10.0, std::uniform_int_distribution<int>(-3, 6)(rng));
        for (const LengthUnit from : {LengthUnit::millimeter, LengthUnit::inch, LengthUnit::foot}) {
            LengthQuantity q{v, from};
            for (const LengthUnit via : {LengthUnit::foot, LengthUnit::inch, LengthUnit::millimeter}) {
                q = convert_length(q, via);
            }
            const auto back = convert_length(q, from);
            if (!close(back.value, v)) {
                r.ok = false;
                r.failure = fmt::format("length {} {} came back as {}", v, symbol(from), back.value);
                return r;
            }
        }
        for (const AreaUnit from : {AreaUnit::square_foot, AreaUnit::square_meter}) {
            const AreaQuantity q{v, from};
            const auto other = convert_area(q, from == AreaUnit::square_foot ? AreaUnit::square_meter
                                                                               : AreaUnit::square_foot);
            const auto back = convert_area(other, from);
            const double canonical = Quantity::area(q).value;
            const double via_other = Quantity::area(other).value;
            if (!close(back.value, v) || !close(canonical, via_other)) {
                r.ok = false;
                r.failure = fmt::format("area {} {} came back as {}", v, symbol(from), back.value);
                return r;
            }
        }
    }
    return r;
}

PropertyReport monotonicity(std::uint64_t seed, std::size_t cases, const std::vector<const BuildingModel*>& models) {
    PropertyReport r;
    Enlarger enlarger(seed);
    for (const BuildingModel* model : models) {
        for (int rule = 1; rule <= rules::kRuleCount; ++rule) {
            const auto before = rules::check_rule(*model, rule);
            std::map<std::string, rules::Status> was;
            for (const auto& f : before.findings) was.emplace(key_of(f), f.status);
            const bool spacing_ok = rule == 11 && before.overall() == rules::Status::compliant;
            for (std::size_t i = 0; i < cases; ++i) {
                const auto bigger = enlarger.enlarge(*model, rule);
                if (!bigger) continue;
                ++r.cases;
                const auto after = rules::check_rule(*bigger, rule);
                for (const auto& f : after.findings) {
                    const auto it = was.find(key_of(f));
                    const bool flipped = f.status == rules::Status::non_compliant &&
                                         ((it != was.end() && it->second == rules::Status::compliant) || spacing_ok);
                    if (flipped) {
                        r.ok = false;
                        r.failure = fmt::format("rule {} on {}: '{}' went from compliant to non_compliant", rule,
                                                model->name(), key_of(f));
                        return r;
                    }
                }
            }
        }
    }
    return r;
}

PropertyReport polygon_distance_agreement(std::uint64_t seed, std::size_t cases) {
    PropertyReport r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> offset(-6000.0, 6000.0);
    for (std::size_t i = 0; i < cases; ++i, ++r.cases) {
        const geom::Polygon a = random_polygon(rng, {0.0, 0.0});
        const geom::Polygon b = random_polygon(rng, {offset(rng), offset(rng)});
        const double got = bimcheck::polygon_distance(a, b).value;
        const double want = brute_force_distance(a, b);
        if (std::abs(got - want) > 1e-6) {
            r.ok = false;
            r.failure = fmt::format("pair {}: polygon_distance {} mm, brute force {} mm", i, got, want);
            return r;
        }
    }
    return r;
}

std::string rescale_model_json(const std::string& model_json, LengthUnit target) {
    auto j = nlohmann::json::parse(model_json);
    const auto from = parse_length_unit(j.at("units").get<std::string>());
    if (!from) throw std::invalid_argument("model has no usable length unit");
    const double k = convert_length({1.0, *from}, target).value;
    auto scale = [k](nlohmann::json& v) {
        if (v.is_number()) {
            v = v.get<double>() * k;
        } else if (v.is_array()) {
            for (auto& x : v) {
                if (x.is_number()) {
                    x = x.get<double>() * k;
                } else {
                    for (auto& y : x) y = y.get<double>() * k;
                }
            }
        }
    };
    j["units"] = std::string(symbol(target));
    for (auto& level : j["levels"]) scale(level["elevation"]);
    for (auto& e : j["elements"]) {
        if (e.contains("params")) {
            for (auto& [_, p] : e["params"].items()) {
                if (p.value("kind", "") == "length" && !p.contains("unit")) scale(p["value"]);
            }
        }
        if (e.contains("geometry")) {
            for (auto& [key, g] : e["geometry"].items()) {
                if (key != "facing") scale(g);
            }
        }
    }
    return j.dump();
}

}  // namespace bimcheck::props
