#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace deplens {

/// A dot-separated name such as `Mathlib.Data.Nat.Basic` or `Nat.add_comm`.
/// Components are opaque byte strings; no unicode normalization is applied.
class DottedName {
public:
    DottedName() = default;

    /// Splits on '.'; throws std::invalid_argument on an empty string or an
    /// empty component ("a..b", ".a", "a.").
    static DottedName parse(std::string_view text);

    explicit DottedName(std::vector<std::string> components);

    [[nodiscard]] std::size_t depth() const noexcept { return components_.size(); }
    [[nodiscard]] bool empty() const noexcept { return components_.empty(); }
    [[nodiscard]] const std::vector<std::string>& components() const noexcept { return components_; }
    [[nodiscard]] const std::string& last() const { return components_.back(); }

    /// First `k` components (all of them when k >= depth).
    [[nodiscard]] DottedName prefix(std::size_t k) const;
    /// All but the last component; empty name for depth 1.
    [[nodiscard]] DottedName parent() const;

    [[nodiscard]] std::string str() const;

    friend bool operator==(const DottedName&, const DottedName&) = default;
    friend auto operator<=>(const DottedName&, const DottedName&) = default;

private:
    std::vector<std::string> components_;
};

/// Joins the first `k` components of `text` without materializing a DottedName.
[[nodiscard]] std::string_view name_prefix(std::string_view text, std::size_t k);
/// Number of components in a surface-form name.
[[nodiscard]] std::size_t name_depth(std::string_view text);

/// Converts a source path such as `Data/Nat/Defs.lean` into `Data.Nat.Defs`.
/// Names that are already dotted pass through unchanged.
[[nodiscard]] std::string path_to_module_name(std::string_view path);

}  // namespace deplens
