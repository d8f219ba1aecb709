#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace levypot::cli {

struct Entry {
    std::string value;
    int line = 0;
    int column = 0;   // of the value
    int key_column = 0;
};

struct Section {
    std::string name;
    int line = 0;
    std::map<std::string, Entry> entries;
};

// Flat key = value text with [section] headers. '#' and ';' start comments
// outside quotes; values may be double-quoted.
class ConfigFile {
public:
    static ConfigFile parse(std::string_view text);
    static ConfigFile load(const std::string& path);

    const Section* find(const std::string& name) const;
    const std::vector<Section>& sections() const { return sections_; }

private:
    std::vector<Section> sections_;
};

// Typed access to one section; every key must be consumed or declared, and
// finish() rejects the rest.
class SectionReader {
public:
    SectionReader(const Section* section, std::string name);

    bool has(const std::string& key) const;
    double number(const std::string& key, double fallback);
    double number(const std::string& key);
    long long integer(const std::string& key, long long fallback);
    bool flag(const std::string& key, bool fallback);
    std::string text(const std::string& key, const std::string& fallback);
    std::string text(const std::string& key);
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
    // Position of the section header, for errors that concern the section.
    int line() const { return section_ ? section_->line : 0; }
    const Entry* entry(const std::string& key) const;
    void finish() const;

private:
    const Section* section_;
    std::string name_;
    std::set<std::string> used_;
};

double parse_number(const Entry& e);
long long parse_integer(const Entry& e);
bool parse_flag(const Entry& e);
std::vector<double> parse_numbers(const Entry& e);

} // namespace levypot::cli
