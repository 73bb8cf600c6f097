#include "evolforge/templates.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace evolforge {

std::string substitute_placeholder(std::string_view tmpl, std::string_view key,
                                   std::string_view value) {
    std::string pattern = "{";
    pattern += key;
    pattern += "}";
    std::string out;
    out.reserve(tmpl.size() + value.size());
    size_t pos = 0;
    for (;;) {
        size_t hit = tmpl.find(pattern, pos);
        if (hit == std::string_view::npos) {
            out += tmpl.substr(pos);
            return out;
        }
        out += tmpl.substr(pos, hit - pos);
        out += value;
        pos = hit + pattern.size();
    }
}

std::string template_or_default(const std::string& dir, const std::string& name,
                                std::string_view fallback) {
    if (!dir.empty()) {
        std::filesystem::path p = std::filesystem::path(dir) / name;
        std::ifstream in(p);
        if (in) {
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        }
    }
    return std::string(fallback);
}

}  // namespace evolforge
