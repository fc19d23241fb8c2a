#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace dns2d {

// Minimal TOML-subset reader producing the same JSON document model the rest
// of the toolkit consumes. Supported: [tables], [[arrays of tables]], bare
// keys, strings, integers, floats, booleans, inline arrays (nestable),
// comments. Not supported: dotted keys, inline tables, dates, multiline
// strings. This covers every config schema the tools document.

namespace tomlmini {

struct Parser {
    std::string_view src;
    std::size_t pos = 0;
    int line = 1;

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error("toml parse error at line " +
                                 std::to_string(line) + ": " + msg);
    }

    bool eof() const { return pos >= src.size(); }
    char peek() const { return src[pos]; }
    char get() {
        char c = src[pos++];
        if (c == '\n') ++line;
        return c;
    }

    void skip_ws_inline() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos;
    }

    void skip_to_eol() {
        while (!eof() && peek() != '\n') ++pos;
    }

    void skip_blank_and_comments() {
        while (!eof()) {
            skip_ws_inline();
            if (eof()) break;
            if (peek() == '#') {
                skip_to_eol();
            } else if (peek() == '\n' || peek() == '\r') {
                get();
            } else {
                break;
            }
        }
    }

    std::string parse_key() {
        skip_ws_inline();
        std::string key;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                          peek() == '_' || peek() == '-'))
            key.push_back(get());
        if (key.empty()) fail("expected key");
        return key;
    }

    std::string parse_string() {
        if (get() != '"') fail("expected string");
        std::string out;
        while (true) {
            if (eof()) fail("unterminated string");
            char c = get();
            if (c == '"') break;
            if (c == '\\') {
                if (eof()) fail("bad escape");
                char e = get();
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: fail("unsupported escape");
                }
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    nlohmann::json parse_value() {
        skip_ws_inline();
        if (eof()) fail("expected value");
        char c = peek();
        if (c == '"') return parse_string();
        if (c == '[') {
            get();
            nlohmann::json arr = nlohmann::json::array();
            while (true) {
                skip_blank_and_comments();
                if (eof()) fail("unterminated array");
                if (peek() == ']') {
                    get();
                    break;
                }
                arr.push_back(parse_value());
                skip_blank_and_comments();
                if (!eof() && peek() == ',') get();
            }
            return arr;
        }
        std::string tok;
        while (!eof() && peek() != '\n' && peek() != '#' && peek() != ',' &&
               peek() != ']')
            tok.push_back(get());
        while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' ||
                                tok.back() == '\r'))
            tok.pop_back();
        if (tok == "true") return true;
        if (tok == "false") return false;
        if (tok.empty()) fail("empty value");
        const bool is_float = tok.find_first_of(".eE") != std::string::npos ||
                              tok == "inf" || tok == "-inf" || tok == "nan";
        try {
            std::size_t used = 0;
            if (is_float) {
                double v = std::stod(tok, &used);
                if (used != tok.size()) fail("bad number: " + tok);
                return v;
            }
            long long v = std::stoll(tok, &used);
            if (used != tok.size()) fail("bad number: " + tok);
            return v;
        } catch (const std::exception&) {
            fail("cannot parse value: " + tok);
        }
    }

    std::vector<std::string> parse_table_path() {
        std::vector<std::string> path;
        path.push_back(parse_key());
        while (!eof() && peek() == '.') {
            get();
            path.push_back(parse_key());
        }
        return path;
    }
};

inline nlohmann::json* descend(nlohmann::json& root,
                               const std::vector<std::string>& path) {
    nlohmann::json* cur = &root;
    for (const auto& p : path) {
        if (cur->is_array()) cur = &cur->back();
        if (!cur->contains(p)) (*cur)[p] = nlohmann::json::object();
        cur = &(*cur)[p];
        if (cur->is_array()) cur = &cur->back();
    }
    return cur;
}

}  // namespace tomlmini

inline nlohmann::json parse_toml(std::string_view text) {
    tomlmini::Parser p{text};
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* current = &root;
    while (true) {
        p.skip_blank_and_comments();
        if (p.eof()) break;
        if (p.peek() == '[') {
            p.get();
            const bool table_array = !p.eof() && p.peek() == '[';
            if (table_array) p.get();
            auto path = p.parse_table_path();
            if (p.eof() || p.get() != ']') p.fail("expected ]");
            if (table_array && (p.eof() || p.get() != ']')) p.fail("expected ]]");
            if (table_array) {
                auto parents = path;
                parents.pop_back();
                nlohmann::json* parent = tomlmini::descend(root, parents);
                auto& slot = (*parent)[path.back()];
                if (slot.is_null()) slot = nlohmann::json::array();
                if (!slot.is_array()) p.fail("table array clashes with value");
                slot.push_back(nlohmann::json::object());
                current = &slot.back();
            } else {
                current = tomlmini::descend(root, path);
            }
            p.skip_to_eol();
            continue;
        }
        auto key = p.parse_key();
        p.skip_ws_inline();
        if (p.eof() || p.get() != '=') p.fail("expected '=' after key " + key);
        (*current)[key] = p.parse_value();
    }
    return root;
}

}  // namespace dns2d
