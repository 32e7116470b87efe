#include "refmirror/lang/source_unit.hpp"

#include <cctype>

#include "refmirror/lang/ast_ops.hpp"

namespace refmirror::lang {

int count_loc(const std::string& text) {
    int count = 0;
    bool blank = true;
    for (char c : text) {
        if (c == '\n') {
            if (!blank) ++count;
            blank = true;
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            blank = false;
        }
    }
    if (!blank) ++count;
    return count;
}

const Node* SourceUnit::find(NodeId id) const {
    const Node* found = nullptr;
    for (auto& type : types) {
        if (found) break;
        walk_nodes(*type, [&](const Node& n) {
            if (n.id == id) found = &n;
        });
    }
    return found;
}

Node* SourceUnit::find_mutable(NodeId id) {
    return const_cast<Node*>(static_cast<const SourceUnit*>(this)->find(id));
}

std::optional<NodeId> SourceUnit::resolve(NodeId ref) const {
    auto it = binding_table.find(ref);
    if (it == binding_table.end() || it->second.is_external()) return std::nullopt;
    return it->second.decl;
}

SourceUnit clone_unit(const SourceUnit& unit) {
    SourceUnit out;
    out.raw_text = unit.raw_text;
    out.package_header = unit.package_header;
    out.imports = unit.imports;
    out.binding_table = unit.binding_table;
    out.loc = unit.loc;
    for (auto& type : unit.types) out.types.push_back(clone_class(*type));
    return out;
}

}  // namespace refmirror::lang
