#pragma once

#include <string_view>

namespace cybergeo {

// Contents of the files in core/data, compiled into the library.
std::string_view builtin_stopwords_text();
std::string_view builtin_hashtag_ignore_text();
std::string_view builtin_regions_csv();

}  // namespace cybergeo
