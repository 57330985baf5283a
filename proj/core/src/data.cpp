#include "cybergeo/data.hpp"

#include "cybergeo_data.inc"

namespace cybergeo {

std::string_view builtin_stopwords_text() { return kStopwordsData; }
std::string_view builtin_hashtag_ignore_text() { return kHashtagIgnoreData; }
std::string_view builtin_regions_csv() { return kRegionsData; }

}  // namespace cybergeo
