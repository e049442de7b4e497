#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "eipsynth/errors.hpp"
#include "eipsynth/schema/formats.hpp"

namespace eipsynth::schema {

namespace {

struct XmlElement {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<XmlElement> children;
    std::size_t line = 0;
    std::size_t column = 0;

    std::optional<std::string> attribute(std::string_view key) const
    {
        for (const auto& [k, v] : attributes)
            if (k == key)
                return v;
        return std::nullopt;
    }

    std::string_view local_name() const
    {
        std::string_view n = name;
        auto colon = n.find(':');
        return colon == std::string_view::npos ? n : n.substr(colon + 1);
    }
};

/// Just enough XML for schema documents: elements, attributes, comments,
/// processing instructions and whitespace.
class XmlReader {
public:
    explicit XmlReader(std::string_view text) : text_(text)
    {
        if (text_.substr(0, 3) == "\xEF\xBB\xBF")
            advance(3);
    }

    XmlElement document()
    {
        skip_misc();
        if (at_end())
            fail("document has no root element");
        if (peek() != '<')
            fail("expected '<'");
        XmlElement root = element();
        skip_misc();
        if (!at_end())
            fail("content after the root element");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError("malformed XML: " + what, line_, column_); }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t off = 0) const { return pos_ + off < text_.size() ? text_[pos_ + off] : '\0'; }
    bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    void advance(std::size_t n = 1)
    {
        for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
            if (text_[pos_] == '\n') {
                ++line_;
                column_ = 1;
            } else {
                ++column_;
            }
        }
    }

    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
    static bool is_name_char(char c)
    {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-' || c == '.';
    }

    void skip_space()
    {
        while (!at_end() && is_space(peek()))
            advance();
    }

    void skip_until(std::string_view terminator, const char* construct)
    {
        while (!at_end() && !starts_with(terminator))
            advance();
        if (at_end())
            fail(std::string("unterminated ") + construct);
        advance(terminator.size());
    }

    /// Comments, processing instructions and whitespace between markup.
    void skip_misc()
    {
        while (true) {
            skip_space();
            if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<!DOCTYPE")) {
                throw UnsupportedConstruct("DOCTYPE");
            } else if (starts_with("<![CDATA[")) {
                throw UnsupportedConstruct("CDATA section");
            } else {
                return;
            }
        }
    }

    std::string name()
    {
        std::string out;
        if (at_end() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
            fail("expected a name");
        while (!at_end() && is_name_char(peek())) {
            out += peek();
            advance();
        }
        return out;
    }

    std::string attribute_value()
    {
        char quote = peek();
        if (quote != '"' && quote != '\'')
            fail("expected a quoted attribute value");
        advance();
        std::string out;
        while (!at_end() && peek() != quote) {
            if (peek() == '<')
                fail("'<' in attribute value");
            if (peek() == '&') {
                out += entity();
                continue;
            }
            out += peek();
            advance();
        }
        if (at_end())
            fail("unterminated attribute value");
        advance();
        return out;
    }

    char entity()
    {
        static const std::pair<std::string_view, char> known[] = {
            {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
        for (const auto& [text, ch] : known) {
            if (starts_with(text)) {
                advance(text.size());
                return ch;
            }
        }
        fail("unknown entity reference");
    }

    XmlElement element()
    {
        XmlElement el;
        el.line = line_;
        el.column = column_;
        advance(); // '<'
        el.name = name();
        while (true) {
            skip_space();
            if (starts_with("/>")) {
                advance(2);
                return el;
            }
            if (peek() == '>') {
                advance();
                break;
            }
            std::size_t attr_line = line_, attr_column = column_;
            std::string key = name();
            skip_space();
            if (peek() != '=')
                fail("expected '=' after attribute name");
            advance();
            skip_space();
            std::string value = attribute_value();
            if (el.attribute(key))
                throw ParseError("malformed XML: duplicate attribute '" + key + "'", attr_line, attr_column);
            el.attributes.emplace_back(std::move(key), std::move(value));
        }
        // content
        while (true) {
            skip_misc();
            if (at_end())
                fail("unterminated element <" + el.name + ">");
            if (starts_with("</")) {
                advance(2);
                std::string closing = name();
                if (closing != el.name)
                    fail("mismatched closing tag </" + closing + "> for <" + el.name + ">");
                skip_space();
                if (peek() != '>')
                    fail("expected '>'");
                advance();
                return el;
            }
            if (peek() == '<') {
                el.children.push_back(element());
                continue;
            }
            throw UnsupportedConstruct("character data in <" + el.name + ">");
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

bool is_builtin_prefix(std::string_view prefix)
{
    return prefix == "xsd" || prefix == "xs";
}

class XsdInterpreter {
public:
    explicit XsdInterpreter(const XmlElement& schema) : schema_(schema)
    {
        for (const auto& child : schema_.children)
            if (child.local_name() == "complexType")
                if (auto n = child.attribute("name"))
                    named_types_.emplace(*n, &child);
    }

    TypeNode root()
    {
        std::vector<FieldDecl> fields;
        for (const auto& child : schema_.children) {
            auto local = child.local_name();
            if (local == "complexType") {
                auto n = required_name(child);
                in_progress_.insert(n);
                fields.push_back(FieldDecl{n, complex_type(child)});
                in_progress_.erase(n);
            } else if (local == "element") {
                fields.push_back(element(child));
            } else {
                throw UnsupportedConstruct(std::string(child.name));
            }
        }
        try {
            return TypeNode::record(std::move(fields));
        } catch (const InvariantViolation& e) {
            throw InvariantViolation(std::string("xsd:schema: ") + e.what());
        }
    }

private:
    static std::string required_name(const XmlElement& el)
    {
        auto n = el.attribute("name");
        if (!n)
            throw ParseError("<" + el.name + "> without a name attribute", el.line, el.column);
        if (!is_identifier(*n))
            throw ParseError("invalid name '" + *n + "'", el.line, el.column);
        return *n;
    }

    static void reject_attributes(const XmlElement& el, std::initializer_list<std::string_view> allowed)
    {
        for (const auto& [key, value] : el.attributes) {
            bool ok = false;
            for (auto a : allowed)
                ok = ok || key == a;
            if (!ok)
                throw UnsupportedConstruct("attribute '" + key + "' on <" + el.name + ">");
        }
    }

    TypeNode complex_type(const XmlElement& el)
    {
        reject_attributes(el, {"name"});
        if (el.children.size() != 1 || el.children.front().local_name() != "sequence") {
            for (const auto& c : el.children)
                if (c.local_name() != "sequence")
                    throw UnsupportedConstruct(c.name);
            throw ParseError("<" + el.name + "> must contain exactly one sequence", el.line, el.column);
        }
        const auto& seq = el.children.front();
        reject_attributes(seq, {});
        std::vector<FieldDecl> fields;
        for (const auto& child : seq.children) {
            if (child.local_name() != "element")
                throw UnsupportedConstruct(child.name);
            fields.push_back(element(child));
        }
        if (fields.empty())
            throw ParseError("empty sequence", seq.line, seq.column);
        return TypeNode::record(std::move(fields));
    }

    FieldDecl element(const XmlElement& el)
    {
        reject_attributes(el, {"name", "type"});
        auto n = required_name(el);
        auto type = el.attribute("type");
        if (type) {
            if (!el.children.empty())
                throw UnsupportedConstruct("<" + el.name + "> with both a type attribute and content");
            return FieldDecl{n, type_reference(*type, el)};
        }
        if (el.children.size() != 1 || el.children.front().local_name() != "complexType") {
            if (el.children.empty())
                throw ParseError("element '" + n + "' has neither a type nor a complexType", el.line, el.column);
            throw UnsupportedConstruct(el.children.front().name);
        }
        return FieldDecl{n, complex_type(el.children.front())};
    }

    TypeNode type_reference(const std::string& type, const XmlElement& at)
    {
        auto colon = type.find(':');
        std::string prefix = colon == std::string::npos ? "" : type.substr(0, colon);
        std::string local = colon == std::string::npos ? type : type.substr(colon + 1);
        if (is_builtin_prefix(prefix)) {
            if (local == "string") return TypeNode::primitive(PrimitiveKind::String);
            if (local == "int") return TypeNode::primitive(PrimitiveKind::Int);
            if (local == "boolean") return TypeNode::primitive(PrimitiveKind::Boolean);
            if (local == "decimal") return TypeNode::primitive(PrimitiveKind::Decimal);
            if (local == "date") return TypeNode::primitive(PrimitiveKind::Date);
            throw UnsupportedConstruct("type " + type);
        }
        auto it = named_types_.find(local);
        if (it == named_types_.end())
            throw ParseError("unknown type '" + type + "'", at.line, at.column);
        if (in_progress_.count(local))
            throw UnsupportedConstruct("recursive type reference '" + local + "'");
        in_progress_.insert(local);
        auto node = complex_type(*it->second);
        in_progress_.erase(local);
        return node;
    }

    const XmlElement& schema_;
    std::map<std::string, const XmlElement*> named_types_;
    std::set<std::string> in_progress_;
};

void write_fields(std::ostringstream& out, const TypeNode& record, int depth)
{
    const std::string indent(static_cast<std::size_t>(depth) * 3, ' ');
    for (const auto& field : record.fields()) {
        if (!field.node.is_record()) {
            out << indent << "<xsd:element name=\"" << field.name << "\" type=\"xsd:" << to_string(field.node.kind())
                << "\"></xsd:element>\n";
            continue;
        }
        const bool top = depth == 1;
        if (top) {
            out << indent << "<xsd:complexType name=\"" << field.name << "\">\n";
        } else {
            out << indent << "<xsd:element name=\"" << field.name << "\">\n";
            out << indent << "   <xsd:complexType>\n";
        }
        const std::string inner(indent.size() + (top ? 3 : 6), ' ');
        out << inner << "<xsd:sequence>\n";
        write_fields(out, field.node, depth + (top ? 2 : 3));
        out << inner << "</xsd:sequence>\n";
        if (top) {
            out << indent << "</xsd:complexType>\n";
        } else {
            out << indent << "   </xsd:complexType>\n";
            out << indent << "</xsd:element>\n";
        }
    }
}

} // namespace

std::vector<MessageSchema> parse_xsd_subset(std::string_view text, const QName& qname)
{
    XmlReader reader(text);
    XmlElement doc = reader.document();
    if (doc.local_name() != "schema")
        throw UnsupportedConstruct("root element <" + doc.name + ">");
    XsdInterpreter interpreter(doc);
    TypeNode root = interpreter.root();
    if (root.leaf_count() == 0)
        throw InvariantViolation("schema defines no leaves: " + qname.str());
    return {MessageSchema(qname, std::move(root))};
}

std::string to_xsd(const MessageSchema& schema)
{
    std::ostringstream out;
    out << "<xsd:schema xmlns:xsd=\"http://www.w3.org/2001/XMLSchema\" version=\"1.0\">\n";
    write_fields(out, schema.root(), 1);
    out << "</xsd:schema>\n";
    return out.str();
}

} // namespace eipsynth::schema
