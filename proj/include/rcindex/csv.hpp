#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rcindex/errors.hpp"

namespace rcindex {

// All numeric output uses 17 significant digits so that emitted files
// round-trip bit-exactly and golden hashes are stable.
inline std::string fmt17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

// Minimal RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF.
// Quoted fields may not span lines (none of our formats need it).
inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open CSV file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof() && rows.empty())
            break;
        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        cur += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    cur += c;
                }
            } else if (c == '"' && cur.empty()) {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (quoted)
            throw io_error(path + ":" + std::to_string(lineno) + ": unterminated quote");
        fields.push_back(std::move(cur));
        rows.push_back(std::move(fields));
    }
    return rows;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open file for writing: " + path);
    out << content;
    if (!out) throw io_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Strict double parse; the caller supplies coordinates for the error text.
inline double parse_double(const std::string& s, const std::string& where) {
    if (s.empty()) throw validation_error("empty numeric field at " + where);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw validation_error("non-numeric cell '" + s + "' at " + where);
    }
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos != s.size())
        throw validation_error("non-numeric cell '" + s + "' at " + where);
    return v;
}

}  // namespace rcindex
