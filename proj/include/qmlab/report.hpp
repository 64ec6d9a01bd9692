// report.hpp
// Deterministic machine-readable output. JSON is emitted by a small ordered
// writer so that keys keep insertion order and every float is printed with 17
// significant digits -- identical configs give byte-identical reports. CSV is
// comma-separated with a header row and LF line endings.

#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qmlab::io {

inline std::string format_double(double x) {
    if (x == 0.0) x = 0.0;  // collapse negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string format_u64(std::uint64_t x) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%" PRIu64, x);
    return buf;
}

class JsonValue {
  public:
    JsonValue() : node_(nullptr) {}
    JsonValue(double x) : node_(x) {}
    JsonValue(int x) : node_(static_cast<std::uint64_t>(x)) {}
    JsonValue(std::uint64_t x) : node_(x) {}
    JsonValue(bool b) : node_(b) {}
    JsonValue(const char* s) : node_(std::string(s)) {}
    JsonValue(std::string s) : node_(std::move(s)) {}

    static JsonValue object() {
        JsonValue v;
        v.node_ = Members{};
        return v;
    }

    static JsonValue array() {
        JsonValue v;
        v.node_ = Items{};
        return v;
    }

    template <typename... T>
    static JsonValue array_of(T&&... items) {
        JsonValue v = array();
        (v.push_back(JsonValue(std::forward<T>(items))), ...);
        return v;
    }

    // Object member access; inserts in order on first use.
    JsonValue& operator[](const std::string& key) {
        auto& members = std::get<Members>(node_);
        for (auto& [k, v] : members)
            if (k == key) return v;
        members.emplace_back(key, JsonValue());
        return members.back().second;
    }

    void push_back(JsonValue v) { std::get<Items>(node_).push_back(std::move(v)); }

    std::string dump() const {
        std::string out;
        write(out);
        out += '\n';
        return out;
    }

  private:
    struct Members : std::vector<std::pair<std::string, JsonValue>> {};
    struct Items : std::vector<JsonValue> {};

    std::variant<std::nullptr_t, bool, std::uint64_t, double, std::string, Members, Items> node_;

    static void write_string(std::string& out, const std::string& s) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                default: out += c;
            }
        }
        out += '"';
    }

    void write(std::string& out) const {
        if (std::holds_alternative<std::nullptr_t>(node_)) {
            out += "null";
        } else if (const bool* b = std::get_if<bool>(&node_)) {
            out += *b ? "true" : "false";
        } else if (const std::uint64_t* u = std::get_if<std::uint64_t>(&node_)) {
            out += format_u64(*u);
        } else if (const double* d = std::get_if<double>(&node_)) {
            out += format_double(*d);
        } else if (const std::string* s = std::get_if<std::string>(&node_)) {
            write_string(out, *s);
        } else if (const Members* m = std::get_if<Members>(&node_)) {
            out += '{';
            bool first = true;
            for (const auto& [k, v] : *m) {
                if (!first) out += ',';
                first = false;
                write_string(out, k);
                out += ':';
                v.write(out);
            }
            out += '}';
        } else {
            out += '[';
            bool first = true;
            for (const auto& v : std::get<Items>(node_)) {
                if (!first) out += ',';
                first = false;
                v.write(out);
            }
            out += ']';
        }
    }
};

// Rectangular CSV: header row then rows, comma separators, LF endings.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

    std::string dump() const {
        std::string out = join(header_);
        for (const auto& r : rows_) out += join(r);
        return out;
    }

  private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += cells[i];
        }
        line += '\n';
        return line;
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace qmlab::io
