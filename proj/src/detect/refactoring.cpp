#include "refmirror/detect/refactoring.hpp"

#include <algorithm>
#include <array>

#include <nlohmann/json.hpp>

#include "refmirror/support/errors.hpp"

namespace refmirror::detect {

using nlohmann::json;

namespace {

const std::array<std::pair<RefactoringKind, const char*>, 9> kKindNames = {{
    {RefactoringKind::ExtractClass, "extract_class"},
    {RefactoringKind::ExtractMethod, "extract_method"},
    {RefactoringKind::ExtractVariable, "extract_variable"},
    {RefactoringKind::InlineMethod, "inline_method"},
    {RefactoringKind::InlineVariable, "inline_variable"},
    {RefactoringKind::RenameAttribute, "rename_attribute"},
    {RefactoringKind::RenameMethod, "rename_method"},
    {RefactoringKind::RenameParameter, "rename_parameter"},
    {RefactoringKind::RenameVariable, "rename_variable"},
}};

json span_to_json(const lang::Span& s) {
    return json{{"start_line", s.start_line}, {"end_line", s.end_line}};
}

lang::Span span_from_json(const json& j) {
    lang::Span s;
    s.start_line = j.at("start_line").get<int>();
    s.end_line = j.at("end_line").get<int>();
    return s;
}

json spans_to_json(const std::vector<lang::Span>& spans) {
    json arr = json::array();
    for (auto& s : spans) arr.push_back(span_to_json(s));
    return arr;
}

std::vector<lang::Span> spans_from_json(const json& j) {
    std::vector<lang::Span> out;
    for (auto& item : j) out.push_back(span_from_json(item));
    return out;
}

template <typename T>
T get_field(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw MissingFieldError(std::string("missing field '") + key + "'");
    }
    return j.at(key).get<T>();
}

std::vector<int> line_set(const std::vector<lang::Span>& spans) {
    std::vector<int> lines;
    for (auto& s : spans) {
        for (int l = s.start_line; l <= s.end_line; ++l) lines.push_back(l);
    }
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    return lines;
}

}  // namespace

std::string kind_name(RefactoringKind kind) {
    for (auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    throw UnsupportedKindError("unknown refactoring kind");
}

RefactoringKind kind_from_name(const std::string& name) {
    for (auto& [k, n] : kKindNames) {
        if (name == n) return k;
    }
    throw UnsupportedKindError("unknown refactoring kind '" + name + "'");
}

int RefactoringInstance::anchor_line() const {
    switch (kind) {
        case RefactoringKind::ExtractClass:
            return 0;  // class-level; params carry no before-side span
        case RefactoringKind::ExtractMethod: {
            auto& p = extract_method();
            return p.extracted_spans.empty() ? 0 : p.extracted_spans.front().start_line;
        }
        case RefactoringKind::ExtractVariable: {
            auto& p = extract_variable();
            return p.occurrence_spans.empty() ? 0 : p.occurrence_spans.front().start_line;
        }
        case RefactoringKind::InlineMethod: {
            auto& p = inline_method();
            return p.call_site_spans.empty() ? 0 : p.call_site_spans.front().start_line;
        }
        case RefactoringKind::InlineVariable:
            return inline_variable().decl_span.start_line;
        default:
            return rename().decl_span.start_line;
    }
}

json to_json(const RefactoringInstance& instance) {
    json params;
    switch (instance.kind) {
        case RefactoringKind::RenameAttribute:
        case RefactoringKind::RenameMethod:
        case RefactoringKind::RenameParameter:
        case RefactoringKind::RenameVariable: {
            auto& p = instance.rename();
            params = json{{"enclosing", p.enclosing},
                          {"old_name", p.old_name},
                          {"new_name", p.new_name},
                          {"decl_span", span_to_json(p.decl_span)}};
            if (!p.signature.empty()) params["signature"] = p.signature;
            break;
        }
        case RefactoringKind::ExtractMethod: {
            auto& p = instance.extract_method();
            params = json{{"source_method", p.source_method},
                          {"extracted_spans", spans_to_json(p.extracted_spans)},
                          {"new_method_name", p.new_method_name},
                          {"parameter_names", p.parameter_names},
                          {"parameter_types", p.parameter_types},
                          {"return_variable", p.return_variable},
                          {"return_type", p.return_type},
                          {"modifiers", p.modifiers},
                          {"block_path", p.block_path},
                          {"first_index", p.first_index},
                          {"count", p.count},
                          {"call_site_index", p.call_site_index},
                          {"statement_texts", p.statement_texts}};
            break;
        }
        case RefactoringKind::ExtractVariable: {
            auto& p = instance.extract_variable();
            params = json{{"enclosing_method", p.enclosing_method},
                          {"expression", p.expression},
                          {"occurrence_spans", spans_to_json(p.occurrence_spans)},
                          {"new_name", p.new_name},
                          {"declared_type", p.declared_type}};
            break;
        }
        case RefactoringKind::InlineMethod: {
            auto& p = instance.inline_method();
            params = json{{"inlined_method", p.inlined_method},
                          {"call_site_spans", spans_to_json(p.call_site_spans)}};
            break;
        }
        case RefactoringKind::InlineVariable: {
            auto& p = instance.inline_variable();
            params = json{{"enclosing_method", p.enclosing_method},
                          {"variable_name", p.variable_name},
                          {"decl_span", span_to_json(p.decl_span)},
                          {"use_spans", spans_to_json(p.use_spans)}};
            break;
        }
        case RefactoringKind::ExtractClass: {
            auto& p = instance.extract_class();
            params = json{{"source_class", p.source_class},
                          {"moved_fields", p.moved_fields},
                          {"moved_methods", p.moved_methods},
                          {"new_class_name", p.new_class_name},
                          {"delegate_field", p.delegate_field}};
            break;
        }
    }
    return json{{"kind", kind_name(instance.kind)},
                {"similarity", instance.similarity},
                {"params", params}};
}

RefactoringInstance instance_from_json(const json& j) {
    RefactoringInstance out;
    out.kind = kind_from_name(get_field<std::string>(j, "kind"));
    out.similarity = j.value("similarity", 1.0);
    if (!j.contains("params")) throw MissingFieldError("missing field 'params'");
    const json& p = j.at("params");
    switch (out.kind) {
        case RefactoringKind::RenameAttribute:
        case RefactoringKind::RenameMethod:
        case RefactoringKind::RenameParameter:
        case RefactoringKind::RenameVariable: {
            RenameParams r;
            r.enclosing = get_field<std::string>(p, "enclosing");
            r.old_name = get_field<std::string>(p, "old_name");
            r.new_name = get_field<std::string>(p, "new_name");
            if (p.contains("decl_span")) r.decl_span = span_from_json(p.at("decl_span"));
            r.signature = p.value("signature", "");
            out.params = std::move(r);
            break;
        }
        case RefactoringKind::ExtractMethod: {
            ExtractMethodParams r;
            r.source_method = get_field<std::string>(p, "source_method");
            if (p.contains("extracted_spans")) r.extracted_spans = spans_from_json(p.at("extracted_spans"));
            r.new_method_name = get_field<std::string>(p, "new_method_name");
            r.parameter_names = p.value("parameter_names", std::vector<std::string>{});
            r.parameter_types = p.value("parameter_types", std::vector<std::string>{});
            r.return_variable = p.value("return_variable", "");
            r.return_type = p.value("return_type", "void");
            r.modifiers = p.value("modifiers", "");
            r.block_path = p.value("block_path", "");
            r.first_index = p.value("first_index", 0);
            r.count = p.value("count", 0);
            r.call_site_index = p.value("call_site_index", 0);
            r.statement_texts = p.value("statement_texts", std::vector<std::string>{});
            out.params = std::move(r);
            break;
        }
        case RefactoringKind::ExtractVariable: {
            ExtractVariableParams r;
            r.enclosing_method = get_field<std::string>(p, "enclosing_method");
            r.expression = get_field<std::string>(p, "expression");
            if (p.contains("occurrence_spans"))
                r.occurrence_spans = spans_from_json(p.at("occurrence_spans"));
            r.new_name = get_field<std::string>(p, "new_name");
            r.declared_type = p.value("declared_type", "");
            out.params = std::move(r);
            break;
        }
        case RefactoringKind::InlineMethod: {
            InlineMethodParams r;
            r.inlined_method = get_field<std::string>(p, "inlined_method");
            if (p.contains("call_site_spans")) r.call_site_spans = spans_from_json(p.at("call_site_spans"));
            out.params = std::move(r);
            break;
        }
        case RefactoringKind::InlineVariable: {
            InlineVariableParams r;
            r.enclosing_method = get_field<std::string>(p, "enclosing_method");
            r.variable_name = get_field<std::string>(p, "variable_name");
            if (p.contains("decl_span")) r.decl_span = span_from_json(p.at("decl_span"));
            if (p.contains("use_spans")) r.use_spans = spans_from_json(p.at("use_spans"));
            out.params = std::move(r);
            break;
        }
        case RefactoringKind::ExtractClass: {
            ExtractClassParams r;
            r.source_class = get_field<std::string>(p, "source_class");
            r.moved_fields = p.value("moved_fields", std::vector<std::string>{});
            r.moved_methods = p.value("moved_methods", std::vector<std::string>{});
            r.new_class_name = get_field<std::string>(p, "new_class_name");
            r.delegate_field = p.value("delegate_field", "");
            out.params = std::move(r);
            break;
        }
    }
    return out;
}

bool same_instance(const RefactoringInstance& a, const RefactoringInstance& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case RefactoringKind::RenameAttribute:
        case RefactoringKind::RenameMethod:
        case RefactoringKind::RenameParameter:
        case RefactoringKind::RenameVariable: {
            auto& x = a.rename();
            auto& y = b.rename();
            return x.enclosing == y.enclosing && x.old_name == y.old_name &&
                   x.new_name == y.new_name && x.signature == y.signature;
        }
        case RefactoringKind::ExtractMethod: {
            auto& x = a.extract_method();
            auto& y = b.extract_method();
            return x.source_method == y.source_method && x.new_method_name == y.new_method_name &&
                   line_set(x.extracted_spans) == line_set(y.extracted_spans) &&
                   x.return_variable == y.return_variable &&
                   x.parameter_names == y.parameter_names;
        }
        case RefactoringKind::ExtractVariable: {
            auto& x = a.extract_variable();
            auto& y = b.extract_variable();
            return x.enclosing_method == y.enclosing_method && x.expression == y.expression &&
                   x.new_name == y.new_name &&
                   line_set(x.occurrence_spans) == line_set(y.occurrence_spans);
        }
        case RefactoringKind::InlineMethod: {
            auto& x = a.inline_method();
            auto& y = b.inline_method();
            return x.inlined_method == y.inlined_method &&
                   line_set(x.call_site_spans) == line_set(y.call_site_spans);
        }
        case RefactoringKind::InlineVariable: {
            auto& x = a.inline_variable();
            auto& y = b.inline_variable();
            return x.enclosing_method == y.enclosing_method && x.variable_name == y.variable_name &&
                   line_set(x.use_spans) == line_set(y.use_spans);
        }
        case RefactoringKind::ExtractClass: {
            auto& x = a.extract_class();
            auto& y = b.extract_class();
            return x.source_class == y.source_class && x.new_class_name == y.new_class_name &&
                   x.moved_fields == y.moved_fields && x.moved_methods == y.moved_methods;
        }
    }
    return false;
}

void sort_instances(std::vector<RefactoringInstance>& instances) {
    std::stable_sort(instances.begin(), instances.end(),
                     [](const RefactoringInstance& a, const RefactoringInstance& b) {
                         std::string ka = kind_name(a.kind);
                         std::string kb = kind_name(b.kind);
                         if (ka != kb) return ka < kb;
                         int la = a.anchor_line();
                         int lb = b.anchor_line();
                         if (la != lb) return la < lb;
                         return to_json(a).dump() < to_json(b).dump();
                     });
}

}  // namespace refmirror::detect
