#pragma once

#include <string>
#include <string_view>

namespace wontfix::porter2 {

// Snowball English ("Porter2") stemmer. Expects a lowercase word; words of
// fewer than three characters are returned unchanged.
std::string stem(std::string_view word);

}  // namespace wontfix::porter2
