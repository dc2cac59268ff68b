#pragma once

// Minimal TOML subset reader covering the scenario and module file
// schemas: [section] and [section.sub] headers, bare keys, integers,
// strings, booleans, arrays (possibly spanning lines) and inline tables.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "iwa/errors.hpp"

namespace iwa::toml {

class Value;
using Table = std::map<std::string, Value>;
using Array = std::vector<Value>;

class Value {
  public:
    Value() : data_(int64_t{0}) {}
    explicit Value(int64_t v) : data_(v) {}
    explicit Value(bool v) : data_(v) {}
    explicit Value(std::string v) : data_(std::move(v)) {}
    explicit Value(Array v) : data_(std::move(v)) {}
    explicit Value(Table v) : data_(std::move(v)) {}

    bool is_integer() const { return std::holds_alternative<int64_t>(data_); }
    bool is_bool() const { return std::holds_alternative<bool>(data_); }
    bool is_string() const { return std::holds_alternative<std::string>(data_); }
    bool is_array() const { return std::holds_alternative<Array>(data_); }
    bool is_table() const { return std::holds_alternative<Table>(data_); }

    int64_t as_integer() const {
        if (!is_integer()) throw ParseError("TOML value is not an integer");
        return std::get<int64_t>(data_);
    }
    bool as_bool() const {
        if (!is_bool()) throw ParseError("TOML value is not a boolean");
        return std::get<bool>(data_);
    }
    const std::string& as_string() const {
        if (!is_string()) throw ParseError("TOML value is not a string");
        return std::get<std::string>(data_);
    }
    const Array& as_array() const {
        if (!is_array()) throw ParseError("TOML value is not an array");
        return std::get<Array>(data_);
    }
    const Table& as_table() const {
        if (!is_table()) throw ParseError("TOML value is not a table");
        return std::get<Table>(data_);
    }
    Table& as_table_mut() {
        if (!is_table()) throw ParseError("TOML value is not a table");
        return std::get<Table>(data_);
    }

  private:
    std::variant<int64_t, bool, std::string, Array, Table> data_;
};

namespace detail {

class Parser {
  public:
    explicit Parser(std::string text) : text_(std::move(text)) {}

    Table parse() {
        Table root;
        Table* current = &root;
        skip_filler();
        while (!eof()) {
            if (peek() == '[') {
                current = open_section(root);
            } else {
                auto [key, value] = parse_key_value();
                if (current->count(key)) {
                    fail("duplicate key '" + key + "'");
                }
                current->emplace(key, std::move(value));
            }
            skip_filler();
        }
        return root;
    }

  private:
    std::string text_;
    size_t pos_ = 0;
    int line_ = 1;

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char take() {
        char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("TOML line " + std::to_string(line_) + ": " + what);
    }

    // Whitespace, newlines and comments between statements.
    void skip_filler() {
        while (!eof()) {
            char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') take();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                take();
            } else {
                break;
            }
        }
    }

    // Spaces within a line only.
    void skip_spaces() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) take();
    }

    std::string parse_bare_key() {
        skip_spaces();
        std::string key;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
                key.push_back(take());
            } else {
                break;
            }
        }
        if (key.empty()) fail("expected a key");
        return key;
    }

    Table* open_section(Table& root) {
        take();  // '['
        Table* node = &root;
        while (true) {
            std::string part = parse_bare_key();
            auto it = node->find(part);
            if (it == node->end()) {
                it = node->emplace(part, Value(Table{})).first;
            } else if (!it->second.is_table()) {
                fail("section '" + part + "' conflicts with an existing key");
            }
            node = &it->second.as_table_mut();
            skip_spaces();
            if (!eof() && peek() == '.') {
                take();
                continue;
            }
            break;
        }
        if (eof() || take() != ']') fail("unterminated section header");
        return node;
    }

    std::pair<std::string, Value> parse_key_value() {
        std::string key = parse_bare_key();
        skip_spaces();
        if (eof() || take() != '=') fail("expected '=' after key '" + key + "'");
        skip_spaces();
        Value v = parse_value();
        return {key, std::move(v)};
    }

    Value parse_value() {
        skip_spaces();
        if (eof()) fail("expected a value");
        char c = peek();
        if (c == '"') return parse_string();
        if (c == '[') return parse_array();
        if (c == '{') return parse_inline_table();
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            return parse_integer();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string word = parse_bare_key();
            if (word == "true") return Value(true);
            if (word == "false") return Value(false);
            fail("unexpected word '" + word + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    Value parse_string() {
        take();  // '"'
        std::string s;
        while (!eof() && peek() != '"') {
            char c = take();
            if (c == '\\' && !eof()) {
                char esc = take();
                switch (esc) {
                    case 'n': s.push_back('\n'); break;
                    case 't': s.push_back('\t'); break;
                    case '"': s.push_back('"'); break;
                    case '\\': s.push_back('\\'); break;
                    default: fail("unsupported escape sequence");
                }
            } else if (c == '\n') {
                fail("unterminated string");
            } else {
                s.push_back(c);
            }
        }
        if (eof()) fail("unterminated string");
        take();  // closing '"'
        return Value(std::move(s));
    }

    Value parse_integer() {
        std::string digits;
        if (peek() == '-' || peek() == '+') digits.push_back(take());
        while (!eof() &&
               (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_')) {
            char c = take();
            if (c != '_') digits.push_back(c);
        }
        if (digits.empty() || digits == "-" || digits == "+") fail("malformed integer");
        try {
            return Value(static_cast<int64_t>(std::stoll(digits)));
        } catch (const std::exception&) {
            fail("integer out of range: " + digits);
        }
    }

    Value parse_array() {
        take();  // '['
        Array items;
        while (true) {
            skip_filler();
            if (eof()) fail("unterminated array");
            if (peek() == ']') {
                take();
                break;
            }
            items.push_back(parse_value());
            skip_filler();
            if (!eof() && peek() == ',') {
                take();
            } else if (!eof() && peek() == ']') {
                take();
                break;
            } else {
                fail("expected ',' or ']' in array");
            }
        }
        return Value(std::move(items));
    }

    Value parse_inline_table() {
        take();  // '{'
        Table t;
        skip_spaces();
        if (!eof() && peek() == '}') {
            take();
            return Value(std::move(t));
        }
        while (true) {
            auto [key, value] = parse_key_value();
            if (t.count(key)) fail("duplicate key '" + key + "' in inline table");
            t.emplace(key, std::move(value));
            skip_spaces();
            if (eof()) fail("unterminated inline table");
            char c = take();
            if (c == '}') break;
            if (c != ',') fail("expected ',' or '}' in inline table");
        }
        return Value(std::move(t));
    }
};

}  // namespace detail

inline Table parse(const std::string& text) {
    return detail::Parser(text).parse();
}

inline const Value* find(const Table& t, const std::string& key) {
    auto it = t.find(key);
    return it == t.end() ? nullptr : &it->second;
}

inline const Value& require(const Table& t, const std::string& key) {
    const Value* v = find(t, key);
    if (!v) throw MissingData("missing TOML key '" + key + "'");
    return *v;
}

}  // namespace iwa::toml
