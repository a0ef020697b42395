#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bimcheck/rules/rules.hpp"

namespace bimcheck::script {

struct SourcePos {
    int line = 1;
    int column = 1;
};

// Positions are metadata. AST equality is structural, so any two positions compare equal;
// compare .line/.column directly when the location itself matters.
inline bool operator==(const SourcePos&, const SourcePos&) { return true; }

// Owning pointer with value semantics: copies deep-copy, equality compares pointees.
template <typename T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    T& operator*() { return *ptr_; }
    const T& operator*() const { return *ptr_; }
    T* operator->() { return ptr_.get(); }
    const T* operator->() const { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

private:
    std::unique_ptr<T> ptr_;
};

enum class Unit { mm, in, ft, sqft, sqm, cfm };

std::string_view to_string(Unit u);
std::optional<Unit> parse_unit(std::string_view word);
// Literal value in canonical units (mm, mm², cfm).
Quantity unit_quantity(double value, Unit unit);

enum class UnaryOp { negate, logical_not };
enum class BinaryOp { add, sub, mul, div, lt, le, gt, ge, eq, ne, logical_and, logical_or };

std::string_view to_string(BinaryOp op);

struct Expr;

struct NumberLit {
    double value = 0.0;
    std::optional<Unit> unit;
    friend bool operator==(const NumberLit&, const NumberLit&) = default;
};

struct TextLit {
    std::string value;
    friend bool operator==(const TextLit&, const TextLit&) = default;
};

struct BoolLit {
    bool value = false;
    friend bool operator==(const BoolLit&, const BoolLit&) = default;
};

// Variable reference, or a bare category name inside collect(...).
struct Name {
    std::string name;
    friend bool operator==(const Name&, const Name&) = default;
};

// `x => body`; only valid as an argument of filter/exists/all/sum.
struct Lambda {
    std::string param;
    Box<Expr> body;
    friend bool operator==(const Lambda&, const Lambda&) = default;
};

struct Call {
    std::string callee;
    std::vector<Expr> args;
    friend bool operator==(const Call&, const Call&) = default;
};

struct MethodCall {
    Box<Expr> receiver;
    std::string method;
    std::vector<Expr> args;
    friend bool operator==(const MethodCall&, const MethodCall&) = default;
};

struct Attribute {
    Box<Expr> receiver;
    std::string name;
    friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct Unary {
    UnaryOp op = UnaryOp::negate;
    Box<Expr> operand;
    friend bool operator==(const Unary&, const Unary&) = default;
};

struct Binary {
    BinaryOp op = BinaryOp::add;
    Box<Expr> lhs;
    Box<Expr> rhs;
    friend bool operator==(const Binary&, const Binary&) = default;
};

struct Expr {
    std::variant<NumberLit, TextLit, BoolLit, Name, Lambda, Call, MethodCall, Attribute, Unary, Binary> node;
    SourcePos pos;
    friend bool operator==(const Expr&, const Expr&) = default;
};

struct Stmt;
using Block = std::vector<Stmt>;

struct LetStmt {
    std::string name;
    Expr value;
    friend bool operator==(const LetStmt&, const LetStmt&) = default;
};

struct ForStmt {
    std::string var;
    Expr iterable;
    Block body;
    friend bool operator==(const ForStmt&, const ForStmt&) = default;
};

struct IfStmt {
    Expr condition;
    Block then_body;
    std::optional<Block> else_body;
    friend bool operator==(const IfStmt&, const IfStmt&) = default;
};

// `{width: a, height: b}` evidence with named entries.
struct Record {
    std::vector<std::pair<std::string, Expr>> fields;
    friend bool operator==(const Record&, const Record&) = default;
};

using Evidence = std::variant<Expr, Record>;

enum class VerdictKind { classify, summary };

// classify(element, status, ...) records a finding about one element;
// summary(subject_text, status, ...) records an aggregate finding.
struct VerdictStmt {
    VerdictKind kind = VerdictKind::classify;
    Expr target;
    rules::Status status = rules::Status::compliant;
    std::optional<Evidence> measured;
    std::optional<Evidence> required;
    std::optional<Expr> note;
    friend bool operator==(const VerdictStmt&, const VerdictStmt&) = default;
};

struct Stmt {
    std::variant<LetStmt, ForStmt, IfStmt, VerdictStmt> node;
    SourcePos pos;
    friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct CheckProgram {
    std::optional<int> rule_id;
    Block statements;
    friend bool operator==(const CheckProgram&, const CheckProgram&) = default;
};

}  // namespace bimcheck::script
