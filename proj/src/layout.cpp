#include "macrocell/layout.hpp"

namespace macrocell {

VariableLayout layoutVariables(const TypedProgram &program) {
    VariableLayout layout;
    for (const VarDecl &decl : program.ast.decls) {
        auto &entries = decl.isLocal ? layout.locals : layout.externals;
        uint32_t &total = decl.isLocal ? layout.localTotal : layout.externalTotal;
        uint32_t size = static_cast<uint32_t>(varSize(decl.type));
        entries.push_back(LayoutEntry{decl.name, total, size});
        total += size;
    }
    return layout;
}

uint32_t fieldOffset(const StructType &type, std::string_view fieldName) {
    uint32_t offset = 0;
    for (const StructField &field : type.fields) {
        if (field.name == fieldName) return offset;
        offset += scalarSize(field.type);
    }
    return offset;
}

} // namespace macrocell
