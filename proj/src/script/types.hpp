#pragma once

#include <optional>
#include <unordered_map>
#include <string_view>

#include "bimcheck/model/model.hpp"
#include "bimcheck/model/units.hpp"
#include "bimcheck/script/ast.hpp"

namespace bimcheck::script::detail {

enum class Type { number, length, area, flow, text, boolean, element, list };

std::string_view type_name(Type t);

inline bool is_numeric(Type t) {
    return t == Type::number || t == Type::length || t == Type::area || t == Type::flow;
}

Dimension dimension_of(Type numeric);
Type type_of(Dimension dim);
// count and number parameters both read as plain numbers.
Type param_type(ParamKind kind);

// Result type of an arithmetic operator, or nullopt when the operands don't combine.
std::optional<Type> arithmetic_result(BinaryOp op, Type lhs, Type rhs);

// Evidence key used when a verdict gives a bare expression instead of a record.
std::string evidence_key(const Expr& e);

using TypeMap = std::unordered_map<const Expr*, Type>;

// Typechecks and records the static type of every expression node.
TypeMap typecheck_with_types(const CheckProgram& program);

}  // namespace bimcheck::script::detail
