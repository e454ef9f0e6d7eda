#include "degenhj/config.hpp"

#include "degenhj/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace degenhj {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::map<std::string, Config::Entry> kEmpty;

}  // namespace

Config Config::parse(std::istream& is, const std::string& source) {
    Config c;
    c.source_ = source;
    std::ostringstream raw;
    raw << is.rdbuf();
    c.text_ = raw.str();
    std::istringstream lines(c.text_);
    std::string line;
    std::string section;
    std::size_t n = 0;
    auto fail = [&](const std::string& msg) {
        throw Error(ErrorCode::Configuration, source + ":" + std::to_string(n) + ": " + msg);
    };
    while (std::getline(lines, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail("empty section name");
            if (c.sections_.count(section) != 0) fail("duplicate section [" + section + "]");
            c.sections_[section];
            c.section_lines_[section] = n;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("missing key");
        if (section.empty()) fail("key '" + key + "' appears before any [section]");
        auto& entries = c.sections_[section];
        if (entries.count(key) != 0) fail("duplicate key '" + key + "'");
        entries[key] = {value, n};
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::Configuration, "cannot open config file '" + path + "'");
    return parse(is, path);
}

Config::Section Config::section(const std::string& name) const {
    const auto it = sections_.find(name);
    return {source_, name, it == sections_.end() ? &kEmpty : &it->second};
}

std::vector<std::string> Config::section_names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : sections_) out.push_back(name);
    return out;
}

std::size_t Config::section_line(const std::string& name) const {
    const auto it = section_lines_.find(name);
    return it == section_lines_.end() ? 0 : it->second;
}

Config::Section::Section(std::string source, std::string name, const std::map<std::string, Entry>* entries)
    : source_(std::move(source)), name_(std::move(name)), entries_(entries) {}

bool Config::Section::has(const std::string& key) const { return entries_->count(key) != 0; }

std::string Config::Section::where(const std::string& key) const {
    const auto it = entries_->find(key);
    if (it == entries_->end()) return source_ + " [" + name_ + "]";
    return source_ + ":" + std::to_string(it->second.line);
}

const Config::Entry* Config::Section::find(const std::string& key, bool required) {
    const auto it = entries_->find(key);
    if (it == entries_->end()) {
        if (required) throw Error(ErrorCode::Configuration, where(key) + ": missing required key '" + key + "'");
        return nullptr;
    }
    used_.insert(key);
    return &it->second;
}

std::string Config::Section::get_string(const std::string& key, const std::optional<std::string>& fallback) {
    const Entry* e = find(key, !fallback);
    return e ? e->value : *fallback;
}

double Config::Section::get_double(const std::string& key, std::optional<double> fallback) {
    const Entry* e = find(key, !fallback);
    if (!e) return *fallback;
    double v = 0.0;
    const auto* end = e->value.data() + e->value.size();
    const auto [ptr, ec] = std::from_chars(e->value.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorCode::Configuration, where(key) + ": '" + key + "' is not a number: '" + e->value + "'");
    }
    return v;
}

std::uint64_t Config::Section::get_u64(const std::string& key, std::optional<std::uint64_t> fallback) {
    const Entry* e = find(key, !fallback);
    if (!e) return *fallback;
    std::uint64_t v = 0;
    const auto* end = e->value.data() + e->value.size();
    const auto [ptr, ec] = std::from_chars(e->value.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorCode::Configuration,
                    where(key) + ": '" + key + "' is not a nonnegative integer: '" + e->value + "'");
    }
    return v;
}

std::size_t Config::Section::get_size(const std::string& key, std::optional<std::size_t> fallback) {
    return static_cast<std::size_t>(get_u64(key, fallback ? std::optional<std::uint64_t>(*fallback) : std::nullopt));
}

bool Config::Section::get_bool(const std::string& key, std::optional<bool> fallback) {
    const Entry* e = find(key, !fallback);
    if (!e) return *fallback;
    if (e->value == "true" || e->value == "1") return true;
    if (e->value == "false" || e->value == "0") return false;
    throw Error(ErrorCode::Configuration, where(key) + ": '" + key + "' must be true or false");
}

std::vector<double> Config::Section::get_doubles(const std::string& key,
                                                 const std::optional<std::vector<double>>& fallback) {
    const Entry* e = find(key, !fallback);
    if (!e) return *fallback;
    std::string s = e->value;
    for (auto& ch : s) {
        if (ch == ',') ch = ' ';
    }
    std::istringstream is(s);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) {
        double v = 0.0;
        const auto* end = tok.data() + tok.size();
        const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
        if (ec != std::errc{} || ptr != end) {
            throw Error(ErrorCode::Configuration, where(key) + ": '" + key + "' has a bad entry '" + tok + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw Error(ErrorCode::Configuration, where(key) + ": '" + key + "' is empty");
    return out;
}

void Config::Section::finish() const {
    for (const auto& [key, entry] : *entries_) {
        if (used_.count(key) == 0) {
            throw Error(ErrorCode::Configuration,
                        source_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "' in [" + name_ + "]");
        }
    }
}

}  // namespace degenhj
