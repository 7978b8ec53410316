#include "chronorg/xml.hpp"

#include <cctype>

namespace chronorg::xml {
namespace {

constexpr int kMaxDepth = 64;

struct Reader {
    std::string_view text;
    size_t pos = 0;
    size_t line = 1;

    [[noreturn]] void fail(const std::string& what) const { throw XmlError(what, line); }

    bool done() const { return pos >= text.size(); }

    char peek(size_t ahead = 0) const {
        return pos + ahead < text.size() ? text[pos + ahead] : '\0';
    }

    char take() {
        if (done())
            fail("unexpected end of input");
        char c = text[pos++];
        if (c == '\n')
            ++line;
        return c;
    }

    bool consume(std::string_view token) {
        if (text.substr(pos).starts_with(token)) {
            for (size_t i = 0; i < token.size(); ++i)
                take();
            return true;
        }
        return false;
    }

    void skip_space() {
        while (!done() && std::isspace(static_cast<unsigned char>(peek())))
            take();
    }

    // Consumes until the terminator token, failing at end of input.
    void skip_until(std::string_view token, const char* what) {
        while (!consume(token)) {
            if (done())
                fail(std::string("unterminated ") + what);
            take();
        }
    }

    static bool name_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
    }

    static bool name_char(char c) {
        return name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
               c == '.';
    }

    std::string read_name() {
        if (!name_start(peek()))
            fail("expected a name");
        std::string name;
        while (name_char(peek()))
            name.push_back(take());
        return name;
    }

    void append_entity(std::string& out) {
        // Called just after '&'.
        std::string entity;
        while (peek() != ';') {
            if (done() || entity.size() > 8)
                fail("unterminated entity reference");
            entity.push_back(take());
        }
        take();
        if (entity == "lt")
            out.push_back('<');
        else if (entity == "gt")
            out.push_back('>');
        else if (entity == "amp")
            out.push_back('&');
        else if (entity == "apos")
            out.push_back('\'');
        else if (entity == "quot")
            out.push_back('"');
        else if (entity.starts_with("#")) {
            bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
            unsigned long code = 0;
            std::string_view digits = std::string_view(entity).substr(hex ? 2 : 1);
            if (digits.empty())
                fail("empty character reference");
            for (char c : digits) {
                unsigned digit;
                if (c >= '0' && c <= '9')
                    digit = unsigned(c - '0');
                else if (hex && c >= 'a' && c <= 'f')
                    digit = unsigned(c - 'a' + 10);
                else if (hex && c >= 'A' && c <= 'F')
                    digit = unsigned(c - 'A' + 10);
                else
                    fail("bad character reference &" + entity + ";");
                code = code * (hex ? 16 : 10) + digit;
                if (code > 0x10FFFF)
                    fail("character reference out of range");
            }
            // UTF-8 encode.
            if (code < 0x80) {
                out.push_back(char(code));
            } else if (code < 0x800) {
                out.push_back(char(0xC0 | (code >> 6)));
                out.push_back(char(0x80 | (code & 0x3F)));
            } else if (code < 0x10000) {
                out.push_back(char(0xE0 | (code >> 12)));
                out.push_back(char(0x80 | ((code >> 6) & 0x3F)));
                out.push_back(char(0x80 | (code & 0x3F)));
            } else {
                out.push_back(char(0xF0 | (code >> 18)));
                out.push_back(char(0x80 | ((code >> 12) & 0x3F)));
                out.push_back(char(0x80 | ((code >> 6) & 0x3F)));
                out.push_back(char(0x80 | (code & 0x3F)));
            }
        } else {
            fail("unknown entity &" + entity + ";");
        }
    }

    std::string read_attribute_value() {
        char quote = take();
        if (quote != '"' && quote != '\'')
            fail("attribute value must be quoted");
        std::string value;
        while (peek() != quote) {
            if (done())
                fail("unterminated attribute value");
            char c = take();
            if (c == '&')
                append_entity(value);
            else if (c == '<')
                fail("'<' in attribute value");
            else
                value.push_back(c);
        }
        take();
        return value;
    }

    // Skips comments, processing instructions and DOCTYPE between markup.
    void skip_misc() {
        for (;;) {
            skip_space();
            if (consume("<!--")) {
                skip_until("-->", "comment");
            } else if (consume("<?")) {
                skip_until("?>", "processing instruction");
            } else if (consume("<!DOCTYPE")) {
                skip_until(">", "DOCTYPE");
            } else {
                return;
            }
        }
    }

    Element read_element(int depth) {
        if (depth > kMaxDepth)
            fail("element nesting too deep");
        Element el;
        el.line = line;
        if (!consume("<"))
            fail("expected an element");
        el.name = read_name();

        for (;;) {
            skip_space();
            if (consume("/>"))
                return el;
            if (consume(">"))
                break;
            std::string attr = read_name();
            skip_space();
            if (!consume("="))
                fail("expected '=' after attribute " + attr);
            skip_space();
            el.attributes.emplace_back(std::move(attr), read_attribute_value());
        }

        // Content until the matching close tag.
        for (;;) {
            if (done())
                fail("unterminated element <" + el.name + ">");
            if (consume("<![CDATA[")) {
                size_t start = pos;
                while (!text.substr(pos).starts_with("]]>")) {
                    if (done())
                        fail("unterminated CDATA section");
                    take();
                }
                el.text.append(text.substr(start, pos - start));
                consume("]]>");
            } else if (consume("<!--")) {
                skip_until("-->", "comment");
            } else if (consume("<?")) {
                skip_until("?>", "processing instruction");
            } else if (consume("</")) {
                std::string closing = read_name();
                if (closing != el.name)
                    fail("mismatched close tag </" + closing + "> for <" + el.name + ">");
                skip_space();
                if (!consume(">"))
                    fail("malformed close tag");
                return el;
            } else if (peek() == '<') {
                el.children.push_back(read_element(depth + 1));
            } else {
                char c = take();
                if (c == '&')
                    append_entity(el.text);
                else
                    el.text.push_back(c);
            }
        }
    }
};

std::string_view local_name(std::string_view name) {
    size_t colon = name.rfind(':');
    return colon == std::string_view::npos ? name : name.substr(colon + 1);
}

} // namespace

Element parse(std::string_view text) {
    Reader reader{text};
    reader.skip_misc();
    if (reader.done())
        reader.fail("no root element");
    Element root = reader.read_element(0);
    reader.skip_misc();
    if (!reader.done())
        reader.fail("content after the root element");
    return root;
}

bool name_is(const Element& el, std::string_view local) {
    return local_name(el.name) == local;
}

const Element* find_child(const Element& el, std::string_view local) {
    for (const auto& child : el.children)
        if (name_is(child, local))
            return &child;
    return nullptr;
}

std::vector<const Element*> find_children(const Element& el, std::string_view local) {
    std::vector<const Element*> out;
    for (const auto& child : el.children)
        if (name_is(child, local))
            out.push_back(&child);
    return out;
}

void find_descendants(const Element& el, std::string_view local,
                      std::vector<const Element*>& out) {
    for (const auto& child : el.children) {
        if (name_is(child, local))
            out.push_back(&child);
        find_descendants(child, local, out);
    }
}

const std::string* find_attribute(const Element& el, std::string_view name) {
    for (const auto& [key, value] : el.attributes)
        if (key == name)
            return &value;
    return nullptr;
}

} // namespace chronorg::xml
