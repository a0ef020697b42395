#include "lexer.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include <fmt/format.h>

namespace bimcheck::script::detail {

namespace {

constexpr std::array<std::pair<std::string_view, Tok>, 13> kKeywords = {{
    {"rule", Tok::kw_rule},
    {"let", Tok::kw_let},
    {"for", Tok::kw_for},
    {"in", Tok::kw_in},
    {"if", Tok::kw_if},
    {"else", Tok::kw_else},
    {"and", Tok::kw_and},
    {"or", Tok::kw_or},
    {"not", Tok::kw_not},
    {"true", Tok::kw_true},
    {"false", Tok::kw_false},
    {"classify", Tok::kw_classify},
    {"summary", Tok::kw_summary},
}};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            Token t;
            t.pos = pos_;
            if (at_end()) {
                // End of input is reported right after the last token, not after trailing blank lines.
                t.kind = Tok::end;
                t.pos = last_end_;
                out.push_back(std::move(t));
                return out;
            }
            const char c = peek();
            if (is_digit(c)) {
                lex_number(t);
            } else if (is_ident_start(c)) {
                lex_word(t);
            } else if (c == '"') {
                lex_string(t);
            } else {
                lex_punct(t);
            }
            last_end_ = pos_;
            out.push_back(std::move(t));
        }
    }

private:
    bool at_end() const { return i_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const { return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0'; }

    void advance() {
        const char c = src_[i_++];
        if (c == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            // Columns count code points, not UTF-8 continuation bytes.
            ++pos_.column;
        }
    }

    [[noreturn]] void fail(SourcePos at, std::string message) const {
        throw ScriptError(Phase::lex, at, std::move(message));
    }

    void skip_space_and_comments() {
        while (!at_end()) {
            const char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                return;
            }
        }
    }

    void lex_number(Token& t) {
        const std::size_t start = i_;
        while (is_digit(peek())) advance();
        if (peek() == '.' && is_digit(peek(1))) {
            advance();
            while (is_digit(peek())) advance();
        }
        if ((peek() == 'e' || peek() == 'E') &&
            (is_digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2))))) {
            advance();
            if (peek() == '+' || peek() == '-') advance();
            while (is_digit(peek())) advance();
        }
        t.kind = Tok::number;
        t.text = std::string(src_.substr(start, i_ - start));
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (ec != std::errc() || !std::isfinite(t.number)) {
            fail(t.pos, fmt::format("number '{}' is out of range", t.text));
        }
    }

    void lex_word(Token& t) {
        const std::size_t start = i_;
        while (is_ident_char(peek())) advance();
        t.text = std::string(src_.substr(start, i_ - start));
        t.kind = Tok::identifier;
        for (const auto& [word, kind] : kKeywords) {
            if (t.text == word) t.kind = kind;
        }
    }

    void lex_string(Token& t) {
        advance();  // opening quote
        std::string value;
        for (;;) {
            if (at_end() || peek() == '\n') fail(t.pos, "unterminated string literal");
            const char c = peek();
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                const SourcePos esc = pos_;
                advance();
                if (at_end()) fail(t.pos, "unterminated string literal");
                const char e = peek();
                switch (e) {
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    default: fail(esc, fmt::format("unknown escape sequence '\\{}'", e));
                }
                advance();
                continue;
            }
            value += c;
            advance();
        }
        t.kind = Tok::string;
        t.text = std::move(value);
    }

    void lex_punct(Token& t) {
        const char c = peek();
        const char n = peek(1);
        auto one = [&](Tok k) {
            advance();
            t.kind = k;
        };
        auto two = [&](Tok k) {
            advance();
            advance();
            t.kind = k;
        };
        switch (c) {
            case '(': return one(Tok::lparen);
            case ')': return one(Tok::rparen);
            case '{': return one(Tok::lbrace);
            case '}': return one(Tok::rbrace);
            case ',': return one(Tok::comma);
            case '.': return one(Tok::dot);
            case ':': return one(Tok::colon);
            case '+': return one(Tok::plus);
            case '-': return one(Tok::minus);
            case '*': return one(Tok::star);
            case '/': return one(Tok::slash);
            case '=':
                if (n == '=') return two(Tok::eq);
                if (n == '>') return two(Tok::arrow);
                return one(Tok::assign);
            case '!':
                if (n == '=') return two(Tok::ne);
                fail(t.pos, "unexpected '!'; use 'not' for negation");
            case '<':
                if (n == '=') return two(Tok::le);
                return one(Tok::lt);
            case '>':
                if (n == '=') return two(Tok::ge);
                return one(Tok::gt);
            default: break;
        }
        if ((static_cast<unsigned char>(c) & 0x80) != 0) {
            fail(t.pos, "unexpected non-ASCII character outside a string literal");
        }
        fail(t.pos, fmt::format("unexpected character '{}'", c));
    }

    std::string_view src_;
    std::size_t i_ = 0;
    SourcePos pos_;
    SourcePos last_end_;
};

}  // namespace

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::number: return fmt::format("number {}", t.text);
        case Tok::string: return "a string";
        case Tok::identifier: return fmt::format("'{}'", t.text);
        case Tok::end: return "end of input";
        case Tok::lparen: return "'('";
        case Tok::rparen: return "')'";
        case Tok::lbrace: return "'{'";
        case Tok::rbrace: return "'}'";
        case Tok::comma: return "','";
        case Tok::dot: return "'.'";
        case Tok::colon: return "':'";
        case Tok::assign: return "'='";
        case Tok::arrow: return "'=>'";
        case Tok::eq: return "'=='";
        case Tok::ne: return "'!='";
        case Tok::lt: return "'<'";
        case Tok::le: return "'<='";
        case Tok::gt: return "'>'";
        case Tok::ge: return "'>='";
        case Tok::plus: return "'+'";
        case Tok::minus: return "'-'";
        case Tok::star: return "'*'";
        case Tok::slash: return "'/'";
        default: return fmt::format("keyword '{}'", t.text);
    }
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace bimcheck::script::detail
