#include "config.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

#include "levypot/errors.hpp"

namespace levypot::cli {

namespace {

bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'; }

std::size_t skip_space(std::string_view s, std::size_t i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return i;
}

bool at_comment(std::string_view s, std::size_t i) { return i < s.size() && (s[i] == '#' || s[i] == ';'); }

[[noreturn]] void fail(const std::string& msg, int line, std::size_t col) {
    throw ConfigParseError(msg, line, static_cast<int>(col) + 1);
}

} // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
    ConfigFile cfg;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::size_t i = skip_space(line, 0);
        if (i == line.size() || at_comment(line, i)) continue;

        if (line[i] == '[') {
            std::size_t j = skip_space(line, i + 1);
            const std::size_t start = j;
            while (j < line.size() && name_char(line[j])) ++j;
            if (j == start) fail("expected a section name", line_no, j);
            const std::string name(line.substr(start, j - start));
            j = skip_space(line, j);
            if (j == line.size() || line[j] != ']') fail("expected ']'", line_no, j);
            j = skip_space(line, j + 1);
            if (j != line.size() && !at_comment(line, j)) fail("unexpected text after section header", line_no, j);
            for (const auto& s : cfg.sections_)
                if (s.name == name) fail("duplicate section [" + name + "]", line_no, start);
            cfg.sections_.push_back({name, line_no, {}});
            continue;
        }

        const std::size_t key_start = i;
        while (i < line.size() && name_char(line[i])) ++i;
        if (i == key_start) fail("expected a key", line_no, i);
        const std::string key(line.substr(key_start, i - key_start));
        i = skip_space(line, i);
        if (i == line.size() || line[i] != '=') fail("expected '=' after key '" + key + "'", line_no, i);
        i = skip_space(line, i + 1);
        if (cfg.sections_.empty()) fail("key '" + key + "' appears before any [section]", line_no, key_start);

        Entry e;
        e.line = line_no;
        e.column = static_cast<int>(i) + 1;
        e.key_column = static_cast<int>(key_start) + 1;
        if (i < line.size() && line[i] == '"') {
            const std::size_t close = line.find('"', i + 1);
            if (close == std::string_view::npos) fail("unterminated string", line_no, i);
            e.value = std::string(line.substr(i + 1, close - i - 1));
            const std::size_t j = skip_space(line, close + 1);
            if (j != line.size() && !at_comment(line, j)) fail("unexpected text after string", line_no, j);
        } else {
            std::size_t j = i;
            while (j < line.size() && !at_comment(line, j)) ++j;
            std::string_view v = line.substr(i, j - i);
            while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
            if (v.empty()) fail("missing value for key '" + key + "'", line_no, i);
            e.value = std::string(v);
        }
        auto& entries = cfg.sections_.back().entries;
        if (entries.contains(key)) fail("duplicate key '" + key + "'", line_no, key_start);
        entries.emplace(key, std::move(e));
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const Section* ConfigFile::find(const std::string& name) const {
    for (const auto& s : sections_)
        if (s.name == name) return &s;
    return nullptr;
}

double parse_number(const Entry& e) {
    const std::string& v = e.value;
    double x = 0.0;
    const char* first = v.data();
    if (!v.empty() && v[0] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigParseError("expected a number, got '" + v + "'", e.line, e.column);
    return x;
}

long long parse_integer(const Entry& e) {
    // Integers may be written in floating notation (1e6) when exact.
    const double x = parse_number(e);
    if (!(std::abs(x) < 9.0e15) || x != std::floor(x))
        throw ConfigParseError("expected an integer, got '" + e.value + "'", e.line, e.column);
    return static_cast<long long>(x);
}

bool parse_flag(const Entry& e) {
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    throw ConfigParseError("expected true or false, got '" + e.value + "'", e.line, e.column);
}

std::vector<double> parse_numbers(const Entry& e) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = e.value.find(',', start);
        std::string item = e.value.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const std::size_t a = item.find_first_not_of(" \t"), b = item.find_last_not_of(" \t");
        Entry piece = e;
        piece.column = e.column + static_cast<int>(start + (a == std::string::npos ? 0 : a));
        if (a == std::string::npos) throw ConfigParseError("empty list item", piece.line, piece.column);
        piece.value = item.substr(a, b - a + 1);
        out.push_back(parse_number(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

SectionReader::SectionReader(const Section* section, std::string name) : section_(section), name_(std::move(name)) {}

const Entry* SectionReader::entry(const std::string& key) const {
    if (!section_) return nullptr;
    auto it = section_->entries.find(key);
    return it == section_->entries.end() ? nullptr : &it->second;
}

bool SectionReader::has(const std::string& key) const { return entry(key) != nullptr; }

double SectionReader::number(const std::string& key, double fallback) {
    used_.insert(key);
    const Entry* e = entry(key);
    return e ? parse_number(*e) : fallback;
}

double SectionReader::number(const std::string& key) {
    used_.insert(key);
    const Entry* e = entry(key);
    if (!e) throw ConfigParseError("[" + name_ + "] needs '" + key + "'", line(), 1);
    return parse_number(*e);
}

long long SectionReader::integer(const std::string& key, long long fallback) {
    used_.insert(key);
    const Entry* e = entry(key);
    return e ? parse_integer(*e) : fallback;
}

bool SectionReader::flag(const std::string& key, bool fallback) {
    used_.insert(key);
    const Entry* e = entry(key);
    return e ? parse_flag(*e) : fallback;
}

std::string SectionReader::text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    const Entry* e = entry(key);
    return e ? e->value : fallback;
}

std::string SectionReader::text(const std::string& key) {
    used_.insert(key);
    const Entry* e = entry(key);
    if (!e) throw ConfigParseError("[" + name_ + "] needs '" + key + "'", line(), 1);
    return e->value;
}

std::vector<double> SectionReader::numbers(const std::string& key, const std::vector<double>& fallback) {
    used_.insert(key);
    const Entry* e = entry(key);
    return e ? parse_numbers(*e) : fallback;
}

void SectionReader::finish() const {
    if (!section_) return;
    for (const auto& [key, e] : section_->entries)
        if (!used_.contains(key)) throw ConfigParseError("unknown key '" + key + "' in [" + name_ + "]", e.line, e.key_column);
}

} // namespace levypot::cli
