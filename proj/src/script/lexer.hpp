#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bimcheck/script/checkscript.hpp"

namespace bimcheck::script::detail {

enum class Tok {
    number,
    string,
    identifier,
    // keywords
    kw_rule,
    kw_let,
    kw_for,
    kw_in,
    kw_if,
    kw_else,
    kw_and,
    kw_or,
    kw_not,
    kw_true,
    kw_false,
    kw_classify,
    kw_summary,
    // punctuation
    lparen,
    rparen,
    lbrace,
    rbrace,
    comma,
    dot,
    colon,
    assign,
    arrow,
    eq,
    ne,
    lt,
    le,
    gt,
    ge,
    plus,
    minus,
    star,
    slash,
    end,
};

struct Token {
    Tok kind = Tok::end;
    std::string text;  // identifier name, decoded string, or number spelling
    double number = 0.0;
    SourcePos pos;
};

std::string describe(const Token& t);

// Throws ScriptError(lex) on malformed input.
std::vector<Token> tokenize(std::string_view source);

}  // namespace bimcheck::script::detail
