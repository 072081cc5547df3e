#pragma once

// Minimal TOML reader covering the subset this project's config files use:
// comments, bare/quoted/dotted keys, basic and literal strings, integers,
// floats, booleans, (possibly nested, multi-line) arrays, inline tables,
// [table] and [[array-of-table]] headers. Dates and multi-line strings are
// rejected with a clear error.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace recsynth::toml {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what) {}
};

class Value {
public:
    enum class Kind { table, array, string, integer, floating, boolean };

    Value() : kind_(Kind::table) {}
    static Value make_string(std::string s) { Value v(Kind::string); v.str_ = std::move(s); return v; }
    static Value make_integer(std::int64_t i) { Value v(Kind::integer); v.int_ = i; return v; }
    static Value make_float(double d) { Value v(Kind::floating); v.float_ = d; return v; }
    static Value make_bool(bool b) { Value v(Kind::boolean); v.bool_ = b; return v; }
    static Value make_array() { return Value(Kind::array); }
    static Value make_table() { return Value(Kind::table); }

    Kind kind() const { return kind_; }
    bool is_table() const { return kind_ == Kind::table; }
    bool is_array() const { return kind_ == Kind::array; }
    bool is_string() const { return kind_ == Kind::string; }
    bool is_number() const { return kind_ == Kind::integer || kind_ == Kind::floating; }
    bool is_bool() const { return kind_ == Kind::boolean; }

    const std::string& as_string() const {
        require(Kind::string, "string");
        return str_;
    }
    std::int64_t as_int() const {
        require(Kind::integer, "integer");
        return int_;
    }
    double as_double() const {
        if (kind_ == Kind::integer) return static_cast<double>(int_);
        require(Kind::floating, "number");
        return float_;
    }
    bool as_bool() const {
        require(Kind::boolean, "boolean");
        return bool_;
    }

    // --- table interface ---
    bool contains(std::string_view key) const { return find(key) != nullptr; }
    const Value* find(std::string_view key) const {
        if (kind_ != Kind::table) return nullptr;
        for (const auto& [k, v] : entries_)
            if (k == key) return v.get();
        return nullptr;
    }
    Value* find(std::string_view key) {
        if (kind_ != Kind::table) return nullptr;
        for (auto& [k, v] : entries_)
            if (k == key) return v.get();
        return nullptr;
    }
    const Value& at(std::string_view key) const {
        const Value* v = find(key);
        if (!v) throw std::runtime_error("missing required key '" + std::string(key) + "'");
        return *v;
    }
    Value& insert(std::string key, Value v) {
        require(Kind::table, "table");
        entries_.emplace_back(std::move(key), std::make_unique<Value>(std::move(v)));
        return *entries_.back().second;
    }
    const std::vector<std::pair<std::string, std::unique_ptr<Value>>>& entries() const {
        require(Kind::table, "table");
        return entries_;
    }

    // --- array interface ---
    std::size_t size() const {
        require(Kind::array, "array");
        return items_.size();
    }
    const Value& operator[](std::size_t i) const {
        require(Kind::array, "array");
        return *items_[i];
    }
    Value& push_back(Value v) {
        require(Kind::array, "array");
        items_.push_back(std::make_unique<Value>(std::move(v)));
        return *items_.back();
    }
    Value& back() {
        require(Kind::array, "array");
        return *items_.back();
    }

    /// Array of plain numbers -> vector<double>; used all over the config.
    std::vector<double> as_double_array() const {
        require(Kind::array, "array");
        std::vector<double> out;
        out.reserve(items_.size());
        for (const auto& item : items_) out.push_back(item->as_double());
        return out;
    }
    std::vector<std::string> as_string_array() const {
        require(Kind::array, "array");
        std::vector<std::string> out;
        out.reserve(items_.size());
        for (const auto& item : items_) out.push_back(item->as_string());
        return out;
    }

private:
    explicit Value(Kind k) : kind_(k) {}
    void require(Kind k, const char* what) const {
        if (kind_ != k)
            throw std::runtime_error(std::string("TOML value is not a ") + what);
    }

    Kind kind_;
    std::string str_;
    std::int64_t int_ = 0;
    double float_ = 0.0;
    bool bool_ = false;
    std::vector<std::pair<std::string, std::unique_ptr<Value>>> entries_;
    std::vector<std::unique_ptr<Value>> items_;
};

namespace detail {

class Parser {
public:
    Parser(std::string_view text, std::string file)
        : text_(text), file_(std::move(file)) {}

    Value parse() {
        Value root = Value::make_table();
        Value* current = &root;
        while (!at_end()) {
            skip_ws_and_comments_to_content();
            if (at_end()) break;
            if (peek() == '[') {
                current = parse_table_header(root);
            } else {
                parse_key_value(*current);
                expect_line_end();
            }
        }
        return root;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char get() {
        char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(file_, line_, msg); }

    void skip_spaces() {
        while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }

    void skip_comment() {
        while (!at_end() && peek() != '\n') ++pos_;
    }

    /// Skips whitespace, newlines and comments until real content.
    void skip_ws_and_comments_to_content() {
        for (;;) {
            skip_spaces();
            if (at_end()) return;
            if (peek() == '#') { skip_comment(); continue; }
            if (peek() == '\n' || peek() == '\r') { get(); continue; }
            return;
        }
    }

    void expect_line_end() {
        skip_spaces();
        if (at_end()) return;
        if (peek() == '#') { skip_comment(); return; }
        if (peek() == '\r') { get(); }
        if (at_end()) return;
        if (peek() != '\n') fail("unexpected content after value");
    }

    std::string parse_basic_string() {
        std::string out;
        get();  // opening quote
        for (;;) {
            if (at_end()) fail("unterminated string");
            char c = get();
            if (c == '"') break;
            if (c == '\n') fail("newline inside basic string (multi-line strings unsupported)");
            if (c == '\\') {
                if (at_end()) fail("dangling escape");
                char e = get();
                switch (e) {
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    case 'b': out += '\b'; break;
                    case 'f': out += '\f'; break;
                    case 'u': {
                        unsigned code = 0;
                        for (int i = 0; i < 4; ++i) {
                            if (at_end() || !std::isxdigit(static_cast<unsigned char>(peek())))
                                fail("bad \\u escape");
                            char h = get();
                            code = code * 16 + static_cast<unsigned>(
                                h <= '9' ? h - '0' : (std::tolower(h) - 'a' + 10));
                        }
                        // UTF-8 encode (BMP only)
                        if (code < 0x80) {
                            out += static_cast<char>(code);
                        } else if (code < 0x800) {
                            out += static_cast<char>(0xC0 | (code >> 6));
                            out += static_cast<char>(0x80 | (code & 0x3F));
                        } else {
                            out += static_cast<char>(0xE0 | (code >> 12));
                            out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
                            out += static_cast<char>(0x80 | (code & 0x3F));
                        }
                        break;
                    }
                    default: fail(std::string("unsupported escape \\") + e);
                }
            } else {
                out += c;
            }
        }
        return out;
    }

    std::string parse_literal_string() {
        std::string out;
        get();  // opening quote
        for (;;) {
            if (at_end()) fail("unterminated literal string");
            char c = get();
            if (c == '\'') break;
            if (c == '\n') fail("newline inside literal string");
            out += c;
        }
        return out;
    }

    static bool is_bare_key_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    }

    std::string parse_key_segment() {
        skip_spaces();
        if (at_end()) fail("expected key");
        if (peek() == '"') return parse_basic_string();
        if (peek() == '\'') return parse_literal_string();
        std::string out;
        while (!at_end() && is_bare_key_char(peek())) out += get();
        if (out.empty()) fail("expected key");
        return out;
    }

    std::vector<std::string> parse_dotted_key() {
        std::vector<std::string> path{parse_key_segment()};
        for (;;) {
            skip_spaces();
            if (!at_end() && peek() == '.') {
                get();
                path.push_back(parse_key_segment());
            } else {
                break;
            }
        }
        return path;
    }

    Value parse_number_or_bool() {
        std::string token;
        while (!at_end() && (is_bare_key_char(peek()) || peek() == '+' || peek() == '.' ||
                             peek() == ':'))
            token += get();
        if (token.empty()) fail("expected value");
        if (token == "true") return Value::make_bool(true);
        if (token == "false") return Value::make_bool(false);
        if (token.find(':') != std::string::npos || token.find("T") != std::string::npos)
            fail("date/time values are not supported");

        std::string digits;
        digits.reserve(token.size());
        for (char c : token)
            if (c != '_') digits += c;

        const bool looks_float = digits.find('.') != std::string::npos ||
                                 digits.find('e') != std::string::npos ||
                                 digits.find('E') != std::string::npos ||
                                 digits == "inf" || digits == "+inf" || digits == "-inf" ||
                                 digits == "nan";
        try {
            std::size_t used = 0;
            if (looks_float) {
                double d = std::stod(digits, &used);
                if (used != digits.size()) fail("malformed number '" + token + "'");
                return Value::make_float(d);
            }
            long long i = std::stoll(digits, &used, 10);
            if (used != digits.size()) fail("malformed number '" + token + "'");
            return Value::make_integer(i);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            fail("malformed number '" + token + "'");
        }
    }

    Value parse_array() {
        get();  // '['
        Value arr = Value::make_array();
        for (;;) {
            skip_ws_and_comments_to_content();
            if (at_end()) fail("unterminated array");
            if (peek() == ']') { get(); break; }
            arr.push_back(parse_value());
            skip_ws_and_comments_to_content();
            if (at_end()) fail("unterminated array");
            if (peek() == ',') { get(); continue; }
            if (peek() == ']') { get(); break; }
            fail("expected ',' or ']' in array");
        }
        return arr;
    }

    Value parse_inline_table() {
        get();  // '{'
        Value table = Value::make_table();
        skip_spaces();
        if (!at_end() && peek() == '}') { get(); return table; }
        for (;;) {
            parse_key_value(table);
            skip_spaces();
            if (at_end()) fail("unterminated inline table");
            if (peek() == ',') { get(); skip_spaces(); continue; }
            if (peek() == '}') { get(); break; }
            fail("expected ',' or '}' in inline table");
        }
        return table;
    }

    Value parse_value() {
        skip_spaces();
        if (at_end()) fail("expected value");
        char c = peek();
        if (c == '"') return Value::make_string(parse_basic_string());
        if (c == '\'') return Value::make_string(parse_literal_string());
        if (c == '[') return parse_array();
        if (c == '{') return parse_inline_table();
        return parse_number_or_bool();
    }

    void parse_key_value(Value& table) {
        std::vector<std::string> path = parse_dotted_key();
        skip_spaces();
        if (at_end() || peek() != '=') fail("expected '=' after key '" + path.back() + "'");
        get();
        Value* target = &table;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            Value* next = target->find(path[i]);
            if (!next)
                next = &target->insert(path[i], Value::make_table());
            else if (!next->is_table())
                fail("key '" + path[i] + "' reused as a table");
            target = next;
        }
        if (target->contains(path.back())) fail("duplicate key '" + path.back() + "'");
        target->insert(path.back(), parse_value());
    }

    Value* parse_table_header(Value& root) {
        get();  // '['
        bool array_of_tables = false;
        if (!at_end() && peek() == '[') {
            array_of_tables = true;
            get();
        }
        std::vector<std::string> path = parse_dotted_key();
        skip_spaces();
        if (at_end() || get() != ']') fail("expected ']' in table header");
        if (array_of_tables) {
            if (at_end() || get() != ']') fail("expected ']]' in table header");
        }
        expect_line_end();

        Value* target = &root;
        for (std::size_t i = 0; i < path.size(); ++i) {
            const bool last = (i + 1 == path.size());
            Value* next = target->find(path[i]);
            if (!next) {
                if (last && array_of_tables) {
                    Value* arr = &target->insert(path[i], Value::make_array());
                    return &arr->push_back(Value::make_table());
                }
                next = &target->insert(path[i], Value::make_table());
                if (last) {
                    declared_.insert(next);
                    return next;
                }
            } else if (next->is_array()) {
                if (last && array_of_tables) return &next->push_back(Value::make_table());
                if (next->size() == 0 || !(*next)[next->size() - 1].is_table())
                    fail("key '" + path[i] + "' is not a table");
                next = &next->back();
                if (last) fail("cannot redefine array of tables '" + path[i] + "' as a table");
            } else if (next->is_table()) {
                if (last) {
                    if (array_of_tables)
                        fail("cannot redefine table '" + path[i] + "' as an array of tables");
                    if (declared_.contains(next)) fail("table '" + path[i] + "' defined twice");
                    declared_.insert(next);
                    return next;
                }
            } else {
                fail("key '" + path[i] + "' is not a table");
            }
            target = next;
        }
        return target;
    }

    std::string_view text_;
    std::string file_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::set<const Value*> declared_;
};

}  // namespace detail

inline Value parse(std::string_view text, std::string file = "<string>") {
    return detail::Parser(text, std::move(file)).parse();
}

inline Value parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

}  // namespace recsynth::toml
