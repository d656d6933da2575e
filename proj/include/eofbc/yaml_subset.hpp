#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "eofbc/source.hpp"

namespace eofbc::yaml {

// Minimal YAML reader for the benchmark test-file schema: top-level
// mapping of plain-scalar keys to inline scalars, block scalars (`|`
// literal, `>` folded), block lists (`- item`) and one level of nested
// mappings whose values are block scalars. Literal blocks are preserved
// byte-exactly (indentation stripped, single trailing newline).
struct Node {
    std::string scalar;
    std::vector<std::string> list;
    std::map<std::string, std::string> mapping;  // nested key -> scalar
    std::vector<std::string> mapping_order;
    enum class Kind { Scalar, List, Mapping } kind = Kind::Scalar;
};

using Document = std::map<std::string, Node>;

namespace detail {

struct Line {
    std::string text;
    int number = 0;
    int indent = 0;
    bool blank = true;
};

inline std::vector<Line> split_lines(std::string_view source, const std::string& path) {
    std::vector<Line> lines;
    std::size_t pos = 0;
    int number = 0;
    while (pos <= source.size()) {
        if (pos == source.size() && number > 0) break;
        std::size_t eol = source.find('\n', pos);
        std::string_view raw =
            source.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? source.size() + 1 : eol + 1;
        ++number;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        Line line;
        line.text = std::string(raw);
        line.number = number;
        std::size_t i = 0;
        while (i < raw.size() && raw[i] == ' ') ++i;
        if (i < raw.size() && raw[i] == '\t') {
            throw MalformedTestError(path, "tab in indentation at line " + std::to_string(number));
        }
        line.indent = static_cast<int>(i);
        line.blank = i == raw.size();
        lines.push_back(std::move(line));
        if (eol == std::string_view::npos) break;
    }
    return lines;
}

inline std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

inline std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

class Reader {
public:
    Reader(std::vector<Line> lines, std::string path) : lines_(std::move(lines)), path_(std::move(path)) {}

    Document read() {
        Document doc;
        while (!at_end()) {
            if (current().blank || strip(current().text).front() == '#') {
                ++pos_;
                continue;
            }
            if (current().indent != 0) {
                fail("unexpected indentation at line " + std::to_string(current().number));
            }
            auto [key, rest] = split_key(current().text, 0);
            ++pos_;
            if (doc.count(key) != 0) fail("duplicate key '" + key + "'");
            doc[key] = read_value(rest, 0);
        }
        return doc;
    }

private:
    [[noreturn]] void fail(const std::string& reason) const { throw MalformedTestError(path_, reason); }

    bool at_end() const { return pos_ >= lines_.size(); }
    const Line& current() const { return lines_[pos_]; }

    std::pair<std::string, std::string> split_key(const std::string& text, int indent) {
        std::string body = text.substr(static_cast<std::size_t>(indent));
        std::size_t colon = body.find(':');
        if (colon == std::string::npos) {
            fail("expected 'key:' at line " + std::to_string(current().number));
        }
        std::string key = unquote(strip(body.substr(0, colon)));
        std::string rest = strip(body.substr(colon + 1));
        if (key.empty()) fail("empty key at line " + std::to_string(current().number));
        return {key, rest};
    }

    Node read_value(const std::string& rest, int key_indent) {
        Node node;
        if (rest == "|" || rest == "|-" || rest == ">" || rest == ">-") {
            node.kind = Node::Kind::Scalar;
            node.scalar = read_block(rest[0] == '|', key_indent);
            return node;
        }
        if (!rest.empty() && rest.front() == '[') {
            node.kind = Node::Kind::List;
            std::string inner = strip(rest.substr(1, rest.rfind(']') - 1));
            std::size_t start = 0;
            while (start <= inner.size() && !inner.empty()) {
                std::size_t comma = inner.find(',', start);
                std::string item = strip(inner.substr(start, comma == std::string::npos ? std::string::npos
                                                                                        : comma - start));
                if (!item.empty()) node.list.push_back(unquote(item));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            return node;
        }
        if (!rest.empty()) {
            node.kind = Node::Kind::Scalar;
            node.scalar = unquote(rest);
            return node;
        }
        // No inline value: a block list, a nested mapping, or empty.
        skip_blanks();
        if (at_end() || current().indent <= key_indent) {
            node.kind = Node::Kind::Scalar;
            return node;
        }
        int child_indent = current().indent;
        if (strip(current().text).rfind("- ", 0) == 0 || strip(current().text) == "-") {
            node.kind = Node::Kind::List;
            while (!at_end() && (current().blank || current().indent == child_indent)) {
                if (current().blank) {
                    ++pos_;
                    continue;
                }
                std::string body = strip(current().text);
                if (body.rfind("-", 0) != 0) break;
                node.list.push_back(unquote(strip(body.substr(1))));
                ++pos_;
            }
            return node;
        }
        node.kind = Node::Kind::Mapping;
        while (!at_end()) {
            if (current().blank) {
                ++pos_;
                continue;
            }
            if (current().indent < child_indent) break;
            if (current().indent != child_indent) {
                fail("inconsistent indentation at line " + std::to_string(current().number));
            }
            auto [key, rest2] = split_key(current().text, child_indent);
            ++pos_;
            Node child = read_value(rest2, child_indent);
            if (child.kind != Node::Kind::Scalar) {
                fail("nested value for '" + key + "' must be a scalar block");
            }
            if (node.mapping.count(key) != 0) fail("duplicate key '" + key + "'");
            node.mapping[key] = child.scalar;
            node.mapping_order.push_back(key);
        }
        return node;
    }

    void skip_blanks() {
        while (!at_end() && current().blank) ++pos_;
    }

    std::string read_block(bool literal, int key_indent) {
        std::vector<Line> block;
        while (!at_end() && (current().blank || current().indent > key_indent)) {
            block.push_back(current());
            ++pos_;
        }
        while (!block.empty() && block.back().blank) block.pop_back();
        if (block.empty()) return "";
        int block_indent = -1;
        for (const Line& line : block) {
            if (!line.blank) {
                block_indent = line.indent;
                break;
            }
        }
        std::string out;
        if (literal) {
            for (const Line& line : block) {
                if (line.blank) {
                    out += "\n";
                } else {
                    out += line.text.substr(static_cast<std::size_t>(block_indent));
                    out += "\n";
                }
            }
            return out;
        }
        // Folded: line breaks become spaces, blank lines become newlines.
        bool first = true;
        bool paragraph_break = false;
        for (const Line& line : block) {
            if (line.blank) {
                paragraph_break = true;
                continue;
            }
            if (!first) out += paragraph_break ? "\n" : " ";
            out += line.text.substr(static_cast<std::size_t>(block_indent));
            first = false;
            paragraph_break = false;
        }
        out += "\n";
        return out;
    }

    std::vector<Line> lines_;
    std::string path_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Document parse_document(std::string_view source, const std::string& path) {
    return detail::Reader(detail::split_lines(source, path), path).read();
}

}  // namespace eofbc::yaml
