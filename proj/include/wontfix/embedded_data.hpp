#pragma once

#include <string_view>

// Contents of the versioned files under data/, compiled into the library.
namespace wontfix::embedded {

std::string_view stopwords_en();
std::string_view taxonomy_v1();

}  // namespace wontfix::embedded
