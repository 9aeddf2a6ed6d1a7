#pragma once

// Internal lexer for the shared line grammar: '#' comments, [section]
// headers (with an optional argument), key=value entries, comma lists.
// Scenario files, observation files and reports all use it.

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ged/common.hpp"

namespace ged::app::detail {

struct Entry {
    std::string key;
    std::string value;
    int line = 0;
};

struct Section {
    std::string kind;
    std::string arg;
    int line = 0;
    std::vector<Entry> entries;
};

inline std::string_view trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= value.size()) {
        size_t comma = value.find(',', start);
        std::string_view piece = comma == std::string_view::npos
                                     ? value.substr(start)
                                     : value.substr(start, comma - start);
        piece = trim(piece);
        if (!piece.empty()) out.emplace_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::vector<Section> lex_sections(const std::string& text,
                                         std::vector<Violation>& errors) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back({"PARSE_ERROR", "unterminated section header", line_no});
                continue;
            }
            std::string_view inner = trim(line.substr(1, line.size() - 2));
            Section section;
            section.line = line_no;
            if (size_t space = inner.find(' '); space != std::string_view::npos) {
                section.kind = std::string(trim(inner.substr(0, space)));
                section.arg = std::string(trim(inner.substr(space + 1)));
            } else {
                section.kind = std::string(inner);
            }
            sections.push_back(std::move(section));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            errors.push_back({"PARSE_ERROR", "expected key=value", line_no});
            continue;
        }
        if (sections.empty()) {
            errors.push_back({"PARSE_ERROR", "entry before any [section]", line_no});
            continue;
        }
        Entry entry;
        entry.key = std::string(trim(line.substr(0, eq)));
        entry.value = std::string(trim(line.substr(eq + 1)));
        entry.line = line_no;
        if (entry.key.empty()) {
            errors.push_back({"PARSE_ERROR", "empty key", line_no});
            continue;
        }
        sections.back().entries.push_back(std::move(entry));
    }
    return sections;
}

}  // namespace ged::app::detail
