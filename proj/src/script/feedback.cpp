#include <algorithm>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "bimcheck/script/checkscript.hpp"

namespace bimcheck::script {

namespace {

std::vector<std::string_view> split_lines(std::string_view source) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    for (;;) {
        const std::size_t nl = source.find('\n', start);
        std::string_view line = source.substr(start, nl == std::string_view::npos ? nl : nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) return lines;
        start = nl + 1;
    }
}

std::size_t codepoints(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

}  // namespace

std::string feedback_text(const ScriptError& error, std::string_view source) {
    std::string out = fmt::format("error[{}] line {}, column {}: {}\n", to_string(error.phase()), error.line(),
                                  error.column(), error.message());
    const auto lines = split_lines(source);
    // Positions past the end (e.g. unexpected end of input) point at the last line.
    const std::size_t line_no = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(error.line(), 1)), 1,
                                                        lines.size());
    const std::string_view text = lines[line_no - 1];
    const std::size_t width = codepoints(text);
    const std::size_t column = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(error.column(), 1)), 1,
                                                       width + 1);
    const std::string gutter = std::to_string(line_no);
    const std::string blank(gutter.size(), ' ');
    std::string caret_pad;
    std::size_t cp = 0;
    for (const char c : text) {
        if ((static_cast<unsigned char>(c) & 0xC0) == 0x80) continue;
        if (++cp >= column) break;
        caret_pad += c == '\t' ? '\t' : ' ';
    }
    out += fmt::format(" {} | {}\n", gutter, text);
    out += fmt::format(" {} | {}^\n", blank, caret_pad);
    return out;
}

}  // namespace bimcheck::script
