#include "deplens/dotted_name.hpp"

#include <algorithm>
#include <stdexcept>

namespace deplens {

DottedName DottedName::parse(std::string_view text) {
    if (text.empty()) {
        throw std::invalid_argument("empty name");
    }
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto dot = text.find('.', start);
        const auto piece = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        if (piece.empty()) {
            throw std::invalid_argument("empty component in name '" + std::string(text) + "'");
        }
        parts.emplace_back(piece);
        if (dot == std::string_view::npos) {
            break;
        }
        start = dot + 1;
    }
    return DottedName(std::move(parts));
}

DottedName::DottedName(std::vector<std::string> components) : components_(std::move(components)) {
    for (const auto& c : components_) {
        if (c.empty() || c.find('.') != std::string::npos) {
            throw std::invalid_argument("invalid name component '" + c + "'");
        }
    }
}

DottedName DottedName::prefix(std::size_t k) const {
    k = std::min(k, components_.size());
    return DottedName(std::vector<std::string>(components_.begin(), components_.begin() + static_cast<std::ptrdiff_t>(k)));
}

DottedName DottedName::parent() const {
    if (components_.size() <= 1) {
        return {};
    }
    return prefix(components_.size() - 1);
}

std::string DottedName::str() const {
    std::string out;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i) out.push_back('.');
        out += components_[i];
    }
    return out;
}

std::string_view name_prefix(std::string_view text, std::size_t k) {
    if (k == 0) return text.substr(0, 0);
    std::size_t pos = 0;
    for (std::size_t seen = 0; seen < k; ++seen) {
        pos = text.find('.', pos);
        if (pos == std::string_view::npos) return text;
        if (seen + 1 < k) ++pos;
    }
    return text.substr(0, pos);
}

std::size_t name_depth(std::string_view text) {
    if (text.empty()) return 0;
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '.')) + 1;
}

std::string path_to_module_name(std::string_view path) {
    std::string s(path);
    constexpr std::string_view ext = ".lean";
    if (s.size() > ext.size() && s.compare(s.size() - ext.size(), ext.size(), ext) == 0) {
        s.resize(s.size() - ext.size());
    }
    std::replace(s.begin(), s.end(), '/', '.');
    std::replace(s.begin(), s.end(), '\\', '.');
    return s;
}

}  // namespace deplens
