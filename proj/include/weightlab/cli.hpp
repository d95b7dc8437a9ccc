#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace weightlab {

// Exit status: 0 success, 1 a report assertion failed, 2 usage, parse, spec or
// integrability error.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Splits at commas outside parentheses and brackets.
std::vector<std::string> split_top_level(const std::string& text);

}  // namespace weightlab
