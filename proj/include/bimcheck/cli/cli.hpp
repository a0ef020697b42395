#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bimcheck::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolations = 2;

// "all", "1..12", "1-5" or "1,3,7"; throws std::invalid_argument on anything else or ids outside 1..12.
std::vector<int> parse_rule_selection(const std::string& text);

// Full command line, argv[0] included. Never calls exit(); output goes to the given streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bimcheck::cli
