#include "macrocell/layout_io.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace macrocell {

std::string formatVarType(const VarType &type) {
    std::ostringstream out;
    if (type.isStructElem()) {
        out << "struct{";
        bool first = true;
        for (const StructField &field : type.structElem().fields) {
            if (!first) out << ',';
            first = false;
            out << field.name << ':' << scalarName(field.type);
        }
        out << '}';
    } else {
        out << scalarName(type.scalarElem());
    }
    if (type.isArray) out << '[' << type.lo << ".." << type.hi << ']';
    return out.str();
}

std::string emitLayoutFile(const TypedProgram &program, const VariableLayout &layout) {
    std::ostringstream out;
    size_t ext = 0;
    size_t loc = 0;
    for (const VarDecl &decl : program.ast.decls) {
        const LayoutEntry &entry =
            decl.isLocal ? layout.locals[loc++] : layout.externals[ext++];
        out << (decl.isLocal ? "local    " : "external ") << entry.name
            << " offset=" << entry.offset << " size=" << entry.size
            << " type=" << formatVarType(decl.type) << '\n';
    }
    out << "external_total " << layout.externalTotal << '\n';
    out << "local_total " << layout.localTotal << '\n';
    return out.str();
}

namespace {

struct TypeParser {
    std::string_view text;
    size_t pos = 0;

    bool eat(char c) {
        if (pos < text.size() && text[pos] == c) {
            pos++;
            return true;
        }
        return false;
    }

    bool eatWord(std::string_view word) {
        if (text.substr(pos, word.size()) == word) {
            pos += word.size();
            return true;
        }
        return false;
    }

    std::optional<ScalarKind> scalar() {
        // Longest spellings first: "int16"/"int32" share the "int" prefix
        // with nothing, but "int8" must not shadow them.
        if (eatWord("bool")) return ScalarKind::Bool;
        if (eatWord("int16")) return ScalarKind::Int16;
        if (eatWord("int32")) return ScalarKind::Int32;
        if (eatWord("int8")) return ScalarKind::Int8;
        return std::nullopt;
    }

    std::optional<int32_t> integer() {
        size_t start = pos;
        if (pos < text.size() && text[pos] == '-') pos++;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') pos++;
        int32_t value = 0;
        auto [end, ec] = std::from_chars(text.data() + start, text.data() + pos, value);
        if (ec != std::errc() || end != text.data() + pos || start == pos) return std::nullopt;
        return value;
    }

    std::string ident() {
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            pos++;
        return std::string(text.substr(start, pos - start));
    }

    std::optional<VarType> type() {
        VarType result;
        if (eatWord("struct{")) {
            StructType st;
            while (true) {
                StructField field;
                field.name = ident();
                if (field.name.empty() || !eat(':')) return std::nullopt;
                auto kind = scalar();
                if (!kind) return std::nullopt;
                field.type = *kind;
                st.fields.push_back(std::move(field));
                if (eat('}')) break;
                if (!eat(',')) return std::nullopt;
            }
            result.elem = std::move(st);
        } else {
            auto kind = scalar();
            if (!kind) return std::nullopt;
            result.elem = *kind;
        }
        if (eat('[')) {
            result.isArray = true;
            auto lo = integer();
            if (!lo || !eatWord("..")) return std::nullopt;
            auto hi = integer();
            if (!hi || !eat(']')) return std::nullopt;
            result.lo = *lo;
            result.hi = *hi;
            if (result.lo > result.hi) return std::nullopt;
        }
        return pos == text.size() ? std::optional<VarType>(std::move(result)) : std::nullopt;
    }
};

std::vector<std::string_view> splitFields(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) pos++;
        size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') pos++;
        if (pos > start) fields.push_back(line.substr(start, pos - start));
    }
    return fields;
}

bool parseKeyNumber(std::string_view field, std::string_view key, uint32_t &out) {
    if (!field.starts_with(key) || field.size() <= key.size() || field[key.size()] != '=')
        return false;
    std::string_view digits = field.substr(key.size() + 1);
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
    return ec == std::errc() && end == digits.data() + digits.size();
}

} // namespace

Expected<LayoutFile, LayoutParseError> parseLayoutFile(std::string_view text) {
    LayoutFile result;
    bool sawExternalTotal = false;
    bool sawLocalTotal = false;

    int lineNo = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        lineNo++;

        auto fields = splitFields(line);
        if (fields.empty() || fields[0].front() == '#') continue;

        if (fields[0] == "external_total" || fields[0] == "local_total") {
            uint32_t value = 0;
            auto [end, ec] = std::from_chars(fields.size() > 1 ? fields[1].data() : nullptr,
                                             fields.size() > 1 ? fields[1].data() + fields[1].size()
                                                               : nullptr,
                                             value);
            if (fields.size() != 2 || ec != std::errc() ||
                end != fields[1].data() + fields[1].size())
                return LayoutParseError{lineNo, "malformed total line"};
            if (fields[0] == "external_total") {
                result.externalTotal = value;
                sawExternalTotal = true;
            } else {
                result.localTotal = value;
                sawLocalTotal = true;
            }
            continue;
        }

        if (fields[0] != "external" && fields[0] != "local")
            return LayoutParseError{lineNo, "expected 'external', 'local' or a total line"};
        if (fields.size() != 5)
            return LayoutParseError{lineNo, "expected: region name offset= size= type="};

        BoundVar var;
        var.isLocal = fields[0] == "local";
        var.name = std::string(fields[1]);
        uint32_t size = 0;
        if (!parseKeyNumber(fields[2], "offset", var.offset))
            return LayoutParseError{lineNo, "malformed offset field"};
        if (!parseKeyNumber(fields[3], "size", size))
            return LayoutParseError{lineNo, "malformed size field"};
        if (!fields[4].starts_with("type="))
            return LayoutParseError{lineNo, "malformed type field"};
        TypeParser parser{fields[4].substr(5)};
        auto type = parser.type();
        if (!type) return LayoutParseError{lineNo, "unparsable type"};
        var.type = std::move(*type);
        if (varSize(var.type) != size)
            return LayoutParseError{lineNo, "size does not match the type"};
        result.vars.push_back(std::move(var));
    }

    if (!sawExternalTotal || !sawLocalTotal)
        return LayoutParseError{lineNo, "missing external_total or local_total line"};
    return result;
}

} // namespace macrocell
