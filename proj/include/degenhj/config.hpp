#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace degenhj {

/// Sectioned key-value file:
///
///     # comment
///     [solve]
///     nx = 129
///     center = 0.75 -0.75
///
/// Keys are unique within a section. Every key must be consumed by a getter before
/// Section::finish(), otherwise it is reported as unknown with its line number.
class Config {
public:
    struct Entry {
        std::string value;
        std::size_t line;
    };

    class Section {
    public:
        Section(std::string source, std::string name, const std::map<std::string, Entry>* entries);

        [[nodiscard]] bool has(const std::string& key) const;
        [[nodiscard]] std::string get_string(const std::string& key, const std::optional<std::string>& fallback = std::nullopt);
        [[nodiscard]] double get_double(const std::string& key, std::optional<double> fallback = std::nullopt);
        [[nodiscard]] std::size_t get_size(const std::string& key, std::optional<std::size_t> fallback = std::nullopt);
        [[nodiscard]] std::uint64_t get_u64(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt);
        [[nodiscard]] bool get_bool(const std::string& key, std::optional<bool> fallback = std::nullopt);
        /// Whitespace- or comma-separated list of reals.
        [[nodiscard]] std::vector<double> get_doubles(const std::string& key,
                                                      const std::optional<std::vector<double>>& fallback = std::nullopt);

        /// Location prefix "source:line" for a key, or "source [section]" when absent.
        [[nodiscard]] std::string where(const std::string& key) const;
        /// Throws a Configuration error naming the first unconsumed key.
        void finish() const;

    private:
        const Entry* find(const std::string& key, bool required);

        std::string source_;
        std::string name_;
        const std::map<std::string, Entry>* entries_;
        std::set<std::string> used_;
    };

    [[nodiscard]] static Config parse(std::istream& is, const std::string& source = "<config>");
    [[nodiscard]] static Config load(const std::string& path);

    [[nodiscard]] bool has_section(const std::string& name) const { return sections_.count(name) != 0; }
    /// Missing sections behave as empty ones.
    [[nodiscard]] Section section(const std::string& name) const;
    [[nodiscard]] std::vector<std::string> section_names() const;
    [[nodiscard]] std::size_t section_line(const std::string& name) const;
    [[nodiscard]] const std::string& text() const noexcept { return text_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

private:
    std::string source_;
    std::string text_;
    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::map<std::string, std::size_t> section_lines_;
};

}  // namespace degenhj
