#include "generators.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace refmirror::testgen {

using detect::ExtractClassParams;
using detect::ExtractMethodParams;
using detect::ExtractVariableParams;
using detect::InlineMethodParams;
using detect::InlineVariableParams;
using detect::RefactoringKind;
using detect::RenameParams;

namespace {

int pick(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

lang::Span line_span(int line) {
    lang::Span s;
    s.start_line = line;
    s.end_line = line;
    return s;
}

/// Hands out names that are unique within one generated program. Pools are
/// disjoint per entity role, so locals can never shadow parameters.
struct Names {
    std::mt19937& rng;
    std::set<std::string> taken;

    std::string fresh(std::vector<std::string> pool) {
        std::shuffle(pool.begin(), pool.end(), rng);
        for (const auto& p : pool)
            if (taken.insert(p).second) return p;
        for (int i = 2;; ++i) {
            std::string c = pool.front() + std::to_string(i);
            if (taken.insert(c).second) return c;
        }
    }
};

struct Builder {
    std::string text;
    int line = 1;

    int add(const std::string& s) {
        text += s;
        text += '\n';
        return line++;
    }
};

/// A small int expression over the given names. The embedded literal comes
/// from a per-program counter so no two generated statements print alike;
/// names read by the expression are appended to `used` in read order.
std::string expr_of(std::mt19937& rng, const std::vector<std::string>& names, int& lit,
                    std::vector<std::string>* used = nullptr) {
    auto name = [&]() {
        const std::string& n = names[pick(rng, 0, static_cast<int>(names.size()) - 1)];
        if (used) used->push_back(n);
        return n;
    };
    std::string l = std::to_string(lit++);
    switch (pick(rng, 0, 2)) {
        case 0:
            return name() + " + " + l;
        case 1:
            return name() + " * " + l;
        default: {
            std::string a = name();
            std::string b = name();
            return a + " + " + b + " + " + l;
        }
    }
}

GenCase rename_variable_case(std::mt19937& rng) {
    Names nm{rng};
    std::string cls = nm.fresh({"Calc", "Store", "Buffer", "Meter", "Cache"});
    std::string meth = nm.fresh({"run", "update", "fold", "scan", "emit"});
    std::string par = nm.fresh({"n", "k", "q", "m"});
    int lit = pick(rng, 2, 9);

    Builder b;
    b.add("class " + cls + " {");
    b.add("    int " + meth + "(int " + par + ") {");
    std::vector<std::string> avail{par};
    std::vector<std::string> locals;
    std::vector<int> decl_lines;
    int nloc = pick(rng, 2, 4);
    for (int i = 0; i < nloc; ++i) {
        std::string v = nm.fresh({"a", "b", "t", "u", "v", "w"});
        decl_lines.push_back(b.add("        int " + v + " = " + expr_of(rng, avail, lit) + ";"));
        avail.push_back(v);
        locals.push_back(v);
    }
    b.add("        return " + locals.back() + " + " + locals.front() + ";");
    b.add("    }");
    b.add("}");

    int victim = pick(rng, 0, nloc - 1);
    GenCase g;
    g.source = b.text;
    g.instance.kind = RefactoringKind::RenameVariable;
    g.instance.params = RenameParams{cls + "#" + meth + "(int)", locals[victim],
                                     nm.fresh({"sum", "acc", "left", "cur", "next"}),
                                     line_span(decl_lines[victim]), ""};
    return g;
}

GenCase rename_parameter_case(std::mt19937& rng) {
    Names nm{rng};
    std::string cls = nm.fresh({"Calc", "Store", "Buffer", "Meter", "Cache"});
    std::string meth = nm.fresh({"run", "update", "fold", "scan", "emit"});
    int lit = pick(rng, 2, 9);
    int npar = pick(rng, 1, 3);
    std::vector<std::string> pars;
    std::string sig;
    for (int i = 0; i < npar; ++i) {
        pars.push_back(nm.fresh({"n", "k", "q", "m"}));
        sig += sig.empty() ? "int" : ",int";
    }
    std::string header = "    int " + meth + "(";
    for (size_t i = 0; i < pars.size(); ++i)
        header += (i ? ", int " : "int ") + pars[i];
    header += ") {";

    Builder b;
    b.add("class " + cls + " {");
    int header_line = b.add(header);
    b.add("        int t = " + expr_of(rng, pars, lit) + ";");
    b.add("        return t + " + pars[pick(rng, 0, npar - 1)] + ";");
    b.add("    }");
    b.add("}");

    GenCase g;
    g.source = b.text;
    g.instance.kind = RefactoringKind::RenameParameter;
    g.instance.params =
        RenameParams{cls + "#" + meth + "(" + sig + ")", pars[pick(rng, 0, npar - 1)],
                     nm.fresh({"value", "amount", "input", "seed"}), line_span(header_line), ""};
    return g;
}

GenCase rename_attribute_case(std::mt19937& rng) {
    Names nm{rng};
    std::string cls = nm.fresh({"Order", "Ledger", "Gauge", "Panel"});
    std::string meth = nm.fresh({"run", "update", "fold", "scan"});
    std::string par = nm.fresh({"n", "k", "q"});
    int lit = pick(rng, 2, 9);
    int nfld = pick(rng, 1, 3);
    std::vector<std::string> fields;
    std::vector<int> field_lines;

    Builder b;
    b.add("class " + cls + " {");
    for (int i = 0; i < nfld; ++i) {
        std::string f = nm.fresh({"count", "total", "size", "limit", "base"});
        field_lines.push_back(b.add("    int " + f + ";"));
        fields.push_back(f);
    }
    b.add("");
    b.add("    int " + meth + "(int " + par + ") {");
    std::vector<std::string> avail = fields;
    avail.push_back(par);
    b.add("        int t = " + expr_of(rng, avail, lit) + ";");
    b.add("        return t + " + fields[pick(rng, 0, nfld - 1)] + ";");
    b.add("    }");
    b.add("}");

    int victim = pick(rng, 0, nfld - 1);
    GenCase g;
    g.source = b.text;
    g.instance.kind = RefactoringKind::RenameAttribute;
    g.instance.params = RenameParams{cls, fields[victim],
                                     nm.fresh({"amount", "extent", "bound", "floor"}),
                                     line_span(field_lines[victim]), ""};
    return g;
}

GenCase rename_method_case(std::mt19937& rng) {
    Names nm{rng};
    std::string cls = nm.fresh({"Calc", "Store", "Engine", "Meter"});
    std::string helper = nm.fresh({"shift", "blend", "trim", "pack"});
    std::string caller = nm.fresh({"run", "update", "fold"});
    std::string hp = nm.fresh({"p", "x"});
    std::string par = nm.fresh({"n", "k", "q"});
    int lit = pick(rng, 2, 9);

    Builder b;
    b.add("class " + cls + " {");
    int decl_line = b.add("    int " + helper + "(int " + hp + ") {");
    b.add("        return " + expr_of(rng, {hp}, lit) + ";");
    b.add("    }");
    b.add("");
    b.add("    int " + caller + "(int " + par + ") {");
    b.add("        int t = " + helper + "(" + par + ") + " + std::to_string(lit++) + ";");
    b.add("        return t + " + helper + "(t);");
    b.add("    }");
    b.add("}");

    GenCase g;
    g.source = b.text;
    g.instance.kind = RefactoringKind::RenameMethod;
    g.instance.params = RenameParams{cls, helper, nm.fresh({"adjust", "merge", "carve", "route"}),
                                     line_span(decl_line), helper + "(int)"};
    return g;
}

GenCase inline_variable_case(std::mt19937& rng) {
    Names nm{rng};
    std::string cls = nm.fresh({"Calc", "Store", "Buffer", "Meter"});
    std::string meth = nm.fresh({"run", "update", "fold", "scan"});
    std::string par = nm.fresh({"n", "k", "q"});
    std::string var = nm.fresh({"t", "mid", "step"});
    int lit = pick(rng, 2, 9);

    Builder b;
    b.add("class " + cls + " {");
    b.add("    int " + meth + "(int " + par + ") {");
    int decl_line = b.add("        int " + var + " = " + expr_of(rng, {par}, lit) + ";");
    int nuse = pick(rng, 1, 3);
    std::vector<int> use_lines;
    std::string last = var;
    for (int i = 0; i < nuse - 1; ++i) {
        std::string v = nm.fresh({"a", "b", "c"});
        use_lines.push_back(
            b.add("        int " + v + " = " + var + " * " + std::to_string(lit++) + ";"));
        last = v;
    }
    use_lines.push_back(b.add("        return " + last + " + " + var + ";"));
    b.add("    }");
    b.add("}");

    GenCase g;
    g.source = b.text;
    g.instance.kind = RefactoringKind::InlineVariable;
    InlineVariableParams p{cls + "#" + meth + "(int)", var, line_span(decl_line), {}};
    for (int l : use_lines) p.use_spans.push_back(line_span(l));
    g.instance.params = p;
    return g;
}

GenCase inline_method_case(std::mt19937& rng) {
    Names nm{rng};
    std::string cls = nm.fresh({"Ops", "Calc", "Engine", "Meter"});
    std::string helper = nm.fresh({"shift", "blend", "trim", "pack"});
    std::string caller = nm.fresh({"run", "update", "fold"});
    std::string hp = nm.fresh({"p", "x"});
    std::string par = nm.fresh({"n", "k", "q"});
    int lit = pick(rng, 2, 9);

    Builder b;
    b.add("class " + cls + " {");
    b.add("    int " + helper + "(int " + hp + ") {");
    b.add("        return " + expr_of(rng, {hp}, lit) + ";");
    b.add("    }");
    b.add("");
    b.add("    int " + caller + "(int " + par + ") {");
    std::vector<int> call_lines;
    int ncall = pick(rng, 1, 2);
    call_lines.push_back(
        b.add("        int a = " + helper + "(" + par + ") + " + std::to_string(lit++) + ";"));
    if (ncall == 2) {
        call_lines.push_back(b.add("        return a + " + helper + "(a);"));
    } else {
        b.add("        return a + " + std::to_string(lit++) + ";");
    }
    b.add("    }");
    b.add("}");

    GenCase g;
    g.source = b.text;
    g.instance.kind = RefactoringKind::InlineMethod;
    InlineMethodParams p{cls + "#" + helper + "(int)", {}};
    for (int l : call_lines) p.call_site_spans.push_back(line_span(l));
    g.instance.params = p;
    return g;
}

GenCase extract_variable_case(std::mt19937& rng) {
    Names nm{rng};
    std::string cls = nm.fresh({"Calc", "Store", "Buffer", "Meter"});
    std::string meth = nm.fresh({"run", "update", "fold", "scan"});
    std::string par = nm.fresh({"n", "k", "q"});
    std::string nv = nm.fresh({"base", "mid", "part", "core"});
    int lit = pick(rng, 2, 9);

    // The repeated expression multiplies, and every embedding appends `+ lit`,
    // so the expression is a subtree of each occurrence under precedence.
    std::string expr = par + " * " + std::to_string(lit++);

    Builder b;
    b.add("class " + cls + " {");
    b.add("    int " + meth + "(int " + par + ") {");
    int nocc = pick(rng, 1, 3);
    std::vector<int> occ_lines;
    std::vector<std::string> outs;
    for (int i = 0; i < nocc; ++i) {
        std::string v = nm.fresh({"a", "b", "c"});
        occ_lines.push_back(
            b.add("        int " + v + " = " + expr + " + " + std::to_string(lit++) + ";"));
        outs.push_back(v);
    }
    b.add("        return " + outs.front() + " + " + outs.back() + ";");
    b.add("    }");
    b.add("}");

    GenCase g;
    g.source = b.text;
    g.instance.kind = RefactoringKind::ExtractVariable;
    ExtractVariableParams p{cls + "#" + meth + "(int)", expr, {}, nv, "int"};
    for (int l : occ_lines) p.occurrence_spans.push_back(line_span(l));
    g.instance.params = p;
    return g;
}

GenCase extract_method_case(std::mt19937& rng) {
    Names nm{rng};
    std::string cls = nm.fresh({"Report", "Ledger", "Planner", "Router"});
    std::string meth = nm.fresh({"render", "process", "build", "total"});
    std::string par = nm.fresh({"n", "k", "q"});
    std::string newm = nm.fresh({"compute", "core", "inner", "stage"});
    std::string ret = nm.fresh({"r", "s", "out"});
    bool assign_last = pick(rng, 0, 1) == 1;
    int lit = pick(rng, 2, 9);

    Builder b;
    b.add("class " + cls + " {");
    b.add("    int " + meth + "(int " + par + ") {");

    std::vector<std::string> pre{par};
    std::vector<std::string> pre_locals;
    int npre = pick(rng, 1, 2);
    for (int i = 0; i < npre; ++i) {
        std::string v = nm.fresh({"a", "b", "c"});
        b.add("        int " + v + " = " + expr_of(rng, pre, lit) + ";");
        pre.push_back(v);
        pre_locals.push_back(v);
    }
    if (assign_last)
        b.add("        int " + ret + " = " + std::to_string(lit++) + ";");
    int first_index = npre + (assign_last ? 1 : 0);

    int count = pick(rng, 2, 3);
    std::vector<int> range_lines;
    std::vector<std::string> range_avail = pre;
    std::vector<std::string> range_locals;
    std::vector<std::string> reads;
    for (int i = 0; i < count - 1; ++i) {
        std::string v = nm.fresh({"t", "u", "v", "w"});
        range_lines.push_back(
            b.add("        int " + v + " = " + expr_of(rng, range_avail, lit, &reads) + ";"));
        range_avail.push_back(v);
        range_locals.push_back(v);
    }
    std::string rhs = range_locals.back() + " + " + expr_of(rng, pre, lit, &reads);
    if (assign_last)
        range_lines.push_back(b.add("        " + ret + " = " + rhs + ";"));
    else
        range_lines.push_back(b.add("        int " + ret + " = " + rhs + ";"));

    std::string fin = nm.fresh({"d", "e", "g"});
    b.add("        int " + fin + " = " + ret + " + " + pre_locals.front() + ";");
    b.add("        return " + fin + " + " + par + ";");
    b.add("    }");
    b.add("}");

    // Inputs of the range in first-read order become the new method's
    // parameters; in-range declarations never qualify.
    std::vector<std::string> pnames;
    for (const auto& u : reads)
        if (std::find(pre.begin(), pre.end(), u) != pre.end() &&
            std::find(pnames.begin(), pnames.end(), u) == pnames.end())
            pnames.push_back(u);

    GenCase g;
    g.source = b.text;
    g.instance.kind = RefactoringKind::ExtractMethod;
    ExtractMethodParams q;
    q.source_method = cls + "#" + meth + "(int)";
    q.block_path = "";
    q.first_index = first_index;
    q.count = count;
    q.call_site_index = first_index;
    q.new_method_name = newm;
    q.parameter_names = pnames;
    q.parameter_types.assign(pnames.size(), "int");
    q.return_variable = ret;
    q.return_type = "int";
    for (int l : range_lines) q.extracted_spans.push_back(line_span(l));
    g.instance.params = q;
    return g;
}

GenCase extract_class_case(std::mt19937& rng) {
    Names nm{rng};
    std::string cls = nm.fresh({"Order", "Invoice", "Booking", "Shipment"});
    std::string ncls = nm.fresh({"Pricing", "Detail", "Tariff", "Slot"});
    std::string delegate = nm.fresh({"part", "piece", "inner"});
    std::string mover = nm.fresh({"rate", "weigh", "grade"});
    std::string keeper = nm.fresh({"run", "update", "fold"});
    std::string par = nm.fresh({"n", "k", "q"});
    int lit = pick(rng, 2, 9);
    int nmove = pick(rng, 1, 2);

    std::vector<std::string> moved;
    for (int i = 0; i < nmove; ++i)
        moved.push_back(nm.fresh({"price", "margin", "weight", "band"}));
    std::string keep = nm.fresh({"count", "total", "size"});

    Builder b;
    b.add("class " + cls + " {");
    b.add("    int " + keep + ";");
    for (const auto& f : moved) b.add("    int " + f + ";");
    b.add("");
    b.add("    int " + keeper + "(int " + par + ") {");
    b.add("        return " + keep + " + " + mover + "(" + par + ");");
    b.add("    }");
    b.add("");
    b.add("    int " + mover + "(int " + par + ") {");
    b.add("        return " + expr_of(rng, moved, lit) + " + " + par + ";");
    b.add("    }");
    b.add("}");

    GenCase g;
    g.source = b.text;
    g.instance.kind = RefactoringKind::ExtractClass;
    g.instance.params = ExtractClassParams{cls, moved, {mover + "(int)"}, ncls, delegate};
    return g;
}

}  // namespace

GenCase gen_case(std::mt19937& rng, RefactoringKind kind) {
    switch (kind) {
        case RefactoringKind::RenameVariable:
            return rename_variable_case(rng);
        case RefactoringKind::RenameParameter:
            return rename_parameter_case(rng);
        case RefactoringKind::RenameAttribute:
            return rename_attribute_case(rng);
        case RefactoringKind::RenameMethod:
            return rename_method_case(rng);
        case RefactoringKind::InlineVariable:
            return inline_variable_case(rng);
        case RefactoringKind::InlineMethod:
            return inline_method_case(rng);
        case RefactoringKind::ExtractVariable:
            return extract_variable_case(rng);
        case RefactoringKind::ExtractMethod:
            return extract_method_case(rng);
        case RefactoringKind::ExtractClass:
            return extract_class_case(rng);
    }
    return rename_variable_case(rng);
}

}  // namespace refmirror::testgen
