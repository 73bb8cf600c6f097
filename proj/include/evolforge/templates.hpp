#pragma once

#include <string>
#include <string_view>

namespace evolforge {

// Replaces every occurrence of `{key}` in `tmpl`.
std::string substitute_placeholder(std::string_view tmpl, std::string_view key,
                                   std::string_view value);

// Returns the contents of `<dir>/<name>` when dir is nonempty and the file
// exists, otherwise `fallback`. Lets users override any embedded prompt
// template by dropping a UTF-8 file into the template directory.
std::string template_or_default(const std::string& dir, const std::string& name,
                                std::string_view fallback);

}  // namespace evolforge
