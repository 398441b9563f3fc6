#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace sidon::cli {

/// A CSV / JSON-lines cell. Numeric cells are written bare in JSON, text
/// cells are quoted, empty cells become null.
struct Cell {
    std::string text;
    bool numeric = true;

    Cell(std::string t, bool num = true) : text(std::move(t)), numeric(num) {}
    Cell(const char* t) : text(t), numeric(false) {}
    template <class T>
        requires std::is_arithmetic_v<T>
    Cell(T v) : text(std::to_string(v)) {}
};

inline Cell text(std::string s) { return Cell(std::move(s), false); }

enum class Format { csv, jsonl };

class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add(std::vector<Cell> row) {
        if (row.size() != columns_.size()) throw std::logic_error("row width does not match header");
        rows_.push_back(std::move(row));
    }

    std::size_t size() const { return rows_.size(); }

    std::string render(Format f) const {
        std::ostringstream os;
        if (f == Format::csv) {
            write_csv_line(os, columns_);
            for (const auto& r : rows_) {
                std::vector<std::string> t;
                for (const auto& c : r) t.push_back(c.text);
                write_csv_line(os, t);
            }
        } else {
            for (const auto& r : rows_) {
                os << '{';
                for (std::size_t i = 0; i < r.size(); ++i) {
                    if (i) os << ',';
                    os << nlohmann::json(columns_[i]).dump() << ':';
                    if (r[i].text.empty()) os << "null";
                    else if (r[i].numeric) os << r[i].text;
                    else os << nlohmann::json(r[i].text).dump();
                }
                os << "}\n";
            }
        }
        return os.str();
    }

private:
    static void write_csv_line(std::ostream& os, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            const auto& c = cells[i];
            if (c.find_first_of(",\"\n") == std::string::npos) {
                os << c;
            } else {
                os << '"';
                for (char ch : c) {
                    if (ch == '"') os << '"';
                    os << ch;
                }
                os << '"';
            }
        }
        os << '\n';
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

/// 64-bit FNV-1a, used for cache keys and manifest checksums.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace sidon::cli
