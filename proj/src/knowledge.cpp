#include "formspec/knowledge.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "formspec/predicates.hpp"
#include "line_lexer.hpp"

namespace formspec {

std::string_view to_string(MField f) {
    switch (f) {
        case MField::Given: return "Given";
        case MField::Find: return "Find";
        case MField::Relate: return "Relate";
    }
    return "Given";
}

std::optional<MField> parse_mfield(std::string_view s) {
    if (s == "Given" || s == "given") return MField::Given;
    if (s == "Find" || s == "find") return MField::Find;
    if (s == "Relate" || s == "relate") return MField::Relate;
    return std::nullopt;
}

IdPath split_id(std::string_view s) {
    IdPath out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto slash = s.find('/', start);
        const auto end = slash == std::string_view::npos ? s.size() : slash;
        if (end > start) out.emplace_back(s.substr(start, end - start));
        if (slash == std::string_view::npos) break;
        start = slash + 1;
    }
    return out;
}

std::string join_id(const IdPath& p) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += '/';
        out += p[i];
    }
    return out;
}

const PatternItem* ModelPattern::find(MField field, std::string_view descriptor) const {
    for (const auto& it : items)
        if (it.field == field && it.descriptor.name == descriptor) return &it;
    return nullptr;
}

const PatternItem* ModelPattern::find(std::string_view descriptor) const {
    for (const auto& it : items)
        if (it.descriptor.name == descriptor) return &it;
    return nullptr;
}

std::optional<ItemTerm> split_item(const Term& t, const TypeContext& ctx) {
    if (!t.is_app(Op::Fn) || t.args().size() != 1) return std::nullopt;
    const Descriptor* d = ctx.descriptor(t.name());
    if (!d) return std::nullopt;
    return ItemTerm{d, t.args()[0]};
}

std::vector<Term> item_values(const Descriptor& d, const Term& arg) {
    if (d.is_list() && arg.is_list()) return arg.args();
    return {arg};
}

ModelPattern adapt_to_type(const TypeContext& ctx, const ModelPattern& mp) {
    ModelPattern out = mp;
    for (auto& it : out.items) it.placeholder = adapt_term_to_type(ctx, it.placeholder);
    return out;
}

// ---------------------------------------------------------------------------
// Store queries

namespace {

template <class T>
const TreeNode<T>* find_node(const TreeNode<T>& root, const IdPath& id) {
    const TreeNode<T>* node = &root;
    for (const auto& seg : id) {
        auto it = std::find_if(node->children.begin(), node->children.end(),
                               [&](const TreeNode<T>& c) { return c.segment == seg; });
        if (it == node->children.end()) return nullptr;
        node = &*it;
    }
    return node;
}

template <class T>
void collect_ids(const TreeNode<T>& node, IdPath& prefix, std::vector<IdPath>& out) {
    if (node.def) out.push_back(prefix);
    for (const auto& c : node.children) {
        prefix.push_back(c.segment);
        collect_ids(c, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

const ProblemDef& Store::problem(const IdPath& id) const {
    const auto* n = id.empty() ? nullptr : find_node(problems_, id);
    if (!n || !n->def) throw NotFound("problem \"" + join_id(id) + "\"");
    return *n->def;
}

const MethodDef& Store::method(const IdPath& id) const {
    const auto* n = id.empty() ? nullptr : find_node(methods_, id);
    if (!n || !n->def) throw NotFound("method \"" + join_id(id) + "\"");
    return *n->def;
}

const Formalisation& Store::example(std::string_view id) const {
    auto it = examples_.find(std::string(id));
    if (it == examples_.end()) throw NotFound("example \"" + std::string(id) + "\"");
    return it->second;
}

const Theory& Store::theory(std::string_view id) const {
    auto it = theories_.find(std::string(id));
    if (it == theories_.end()) throw NotFound("theory \"" + std::string(id) + "\"");
    return it->second;
}

const RuleSet& Store::rule_set(std::string_view id) const {
    auto it = rule_sets_.find(std::string(id));
    if (it == rule_sets_.end()) throw NotFound("rule set \"" + std::string(id) + "\"");
    return it->second;
}

bool Store::has_problem(const IdPath& id) const {
    const auto* n = id.empty() ? nullptr : find_node(problems_, id);
    return n && n->def;
}

bool Store::has_method(const IdPath& id) const {
    const auto* n = id.empty() ? nullptr : find_node(methods_, id);
    return n && n->def;
}

bool Store::has_theory(std::string_view id) const { return theories_.count(std::string(id)) > 0; }

std::vector<IdPath> Store::problem_children(const IdPath& id) const {
    std::vector<IdPath> out;
    const auto* n = find_node(problems_, id);
    if (!n) return out;
    // descend through def-less nodes so that implicit levels are transparent
    std::vector<std::pair<const TreeNode<ProblemDef>*, IdPath>> stack;
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) {
        IdPath p = id;
        p.push_back(it->segment);
        stack.emplace_back(&*it, std::move(p));
    }
    while (!stack.empty()) {
        auto [node, path] = std::move(stack.back());
        stack.pop_back();
        if (node->def) {
            out.push_back(path);
            continue;
        }
        for (auto it = node->children.rbegin(); it != node->children.rend(); ++it) {
            IdPath p = path;
            p.push_back(it->segment);
            stack.emplace_back(&*it, std::move(p));
        }
    }
    return out;
}

TypeContext Store::context(std::string_view theory_id) const {
    TypeContext ctx;
    ctx.theory = std::string(theory_id);
    std::set<std::string> seen;
    std::vector<std::string> todo{std::string(theory_id)};
    while (!todo.empty()) {
        std::string id = todo.back();
        todo.pop_back();
        if (!seen.insert(id).second) continue;
        const Theory& th = theory(id);
        for (const auto& [k, d] : th.descriptors) ctx.descriptors.try_emplace(k, d);
        for (const auto& [k, t] : th.consts) ctx.bindings.try_emplace(k, t);
        for (const auto& imp : th.imports) todo.push_back(imp);
    }
    return ctx;
}

std::vector<IdPath> Store::problem_ids() const {
    std::vector<IdPath> out;
    IdPath prefix;
    collect_ids(problems_, prefix, out);
    return out;
}

std::vector<std::string> Store::example_ids() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : examples_) out.push_back(k);
    return out;
}

std::vector<const ProblemDef*> Store::cas_owners() const {
    std::vector<const ProblemDef*> out;
    for (const auto& id : problem_ids()) {
        const ProblemDef& p = problem(id);
        if (p.cas) out.push_back(&p);
    }
    return out;
}

const ProblemDef& lookup_problem(const Store& store, const IdPath& id) { return store.problem(id); }
const MethodDef& lookup_method(const Store& store, const IdPath& id) { return store.method(id); }
const Formalisation& lookup_example(const Store& store, std::string_view id) { return store.example(id); }

// ---------------------------------------------------------------------------
// Knowledge files

namespace {

using lexer::Line;
using lexer::Tok;

struct RawEntry {
    std::string key;
    std::vector<Tok> values;
    SrcPos pos;
};

struct RawDecl {
    std::string kind;  // problem | method | example | ruleset
    Tok name;
    TheoryId theory;
    std::string file;
    std::vector<RawEntry> entries;
};

struct RawFile {
    std::string file;
    std::vector<RawDecl> decls;
};

bool is_top_keyword(const Tok& t) {
    static const std::set<std::string> kw{"theory", "descriptor", "const", "ruleset", "problem", "method", "example"};
    return t.kind == Tok::Word && !t.colon && kw.count(t.text) > 0;
}

std::string strip_rls_word(std::string w) {
    for (const std::string_view wrap : {"\\<open>", "<"})
        if (w.starts_with(wrap)) w.erase(0, wrap.size());
    for (const std::string_view wrap : {"\\<close>", ">"})
        if (w.ends_with(wrap)) w.erase(w.size() - wrap.size());
    return w;
}

}  // namespace

class KnowledgeLoader {
public:
    void add_file(const std::string& file, std::string_view text);
    Store finish();

private:
    [[noreturn]] void fail(const std::string& file, SrcPos pos, const std::string& msg) const {
        throw AuthoringError(file, pos, msg);
    }
    Term parse_at(const std::string& file, const Tok& str, const TypeContext& ctx) const;
    ModelPattern build_pattern(const RawDecl& d, const std::vector<const RawEntry*>& entries, TypeContext& ctx) const;
    void build_problem(const RawDecl& d);
    void build_method(const RawDecl& d);
    void build_example(const RawDecl& d);
    void build_rule_set(const RawDecl& d);
    void cross_check() const;

    template <class T>
    void insert(TreeNode<T>& root, const IdPath& id, T def, const std::string& file, SrcPos pos, const char* what);

    Store store_;
    std::vector<RawFile> files_;
};

void KnowledgeLoader::add_file(const std::string& file, std::string_view text) {
    std::vector<Line> lines;
    try {
        lines = lexer::lex_lines(text);
    } catch (const SyntaxError& e) {
        fail(file, e.pos(), e.message());
    }
    RawFile raw{file, {}};
    TheoryId current = "Base";
    store_.theories_.try_emplace("Base", Theory{"Base", {}, {}, {}});
    RawDecl* open = nullptr;
    RawEntry* entry = nullptr;
    for (const Line& line : lines) {
        const auto& toks = line.toks;
        const Tok& head = toks.front();
        auto expect_str = [&](std::size_t k, const char* what) -> const Tok& {
            if (k >= toks.size() || toks[k].kind != Tok::Str)
                fail(file, k < toks.size() ? toks[k].pos : head.pos, std::string("expected ") + what);
            return toks[k];
        };
        if (is_top_keyword(head) && !line.indented) {
            open = nullptr;
            entry = nullptr;
            if (head.text == "theory") {
                const Tok& name = expect_str(1, "a theory name");
                current = name.text;
                Theory& th = store_.theories_.try_emplace(current, Theory{current, {}, {}, {}}).first->second;
                std::size_t k = 2;
                if (k < toks.size()) {
                    if (toks[k].kind != Tok::Word || toks[k].text != "imports") fail(file, toks[k].pos, "expected 'imports'");
                    for (++k; k < toks.size(); ++k) th.imports.push_back(expect_str(k, "an imported theory").text);
                }
                continue;
            }
            if (head.text == "descriptor") {
                const Tok& name = expect_str(1, "a descriptor name");
                std::size_t k = 2;
                if (k < toks.size() && toks[k].kind == Tok::Colon) ++k;
                if (k >= toks.size() || toks[k].kind != Tok::Word) fail(file, name.pos, "expected an argument shape");
                auto shape = parse_arg_shape(toks[k].text);
                if (!shape) fail(file, toks[k].pos, "unknown argument shape '" + toks[k].text + "'");
                Descriptor d{name.text, *shape, Typ::real()};
                if (*shape == ArgShape::ListOfEq) d.arg_typ = Typ::list_of(TypKind::Bool);
                if (*shape == ArgShape::ListOfAtoms) d.arg_typ = Typ::list_of(TypKind::Real);
                if (++k < toks.size()) {
                    const Tok& ty = expect_str(k, "a type");
                    auto typ = parse_typ(ty.text);
                    if (!typ) fail(file, ty.pos, "unknown type '" + ty.text + "'");
                    d.arg_typ = *typ;
                }
                Theory& th = store_.theories_.at(current);
                if (!th.descriptors.emplace(d.name, d).second) fail(file, name.pos, "duplicate descriptor '" + d.name + "'");
                continue;
            }
            if (head.text == "const") {
                const Tok& name = expect_str(1, "a constant name");
                std::size_t k = 2;
                if (k < toks.size() && toks[k].kind == Tok::Colon) ++k;
                const Tok& ty = expect_str(k, "a type");
                auto typ = parse_typ(ty.text);
                if (!typ) fail(file, ty.pos, "unknown type '" + ty.text + "'");
                store_.theories_.at(current).consts[canonical_name(name.text)] = *typ;
                continue;
            }
            // problem [name :] "id" = | method "id" = | example "id" = | ruleset "id" =
            std::size_t k = 1;
            if (k < toks.size() && toks[k].kind == Tok::Word) ++k;
            if (k < toks.size() && toks[k].kind == Tok::Colon) ++k;
            const Tok& name = expect_str(k, "a quoted id");
            if (k + 1 >= toks.size() || toks[k + 1].kind != Tok::Equals) fail(file, name.pos, "expected '=' after the id");
            raw.decls.push_back(RawDecl{head.text, name, current, file, {}});
            open = &raw.decls.back();
            for (std::size_t j = k + 2; j < toks.size(); ++j) {
                if (toks[j].kind == Tok::Word && !toks[j].colon)
                    open->entries.push_back(RawEntry{"rls", {toks[j]}, toks[j].pos});
                else
                    fail(file, toks[j].pos, "unexpected '" + toks[j].text + "'");
            }
            continue;
        }
        if (!open) fail(file, head.pos, "unexpected '" + head.text + "' outside a declaration");
        std::size_t k = 0;
        if (head.kind == Tok::Word) {
            if (head.colon) {
                open->entries.push_back(RawEntry{head.text, {}, head.pos});
                entry = &open->entries.back();
                k = 1;
            } else if (open->kind == "ruleset" && (head.text == "builtin" || head.text == "rule")) {
                open->entries.push_back(RawEntry{head.text, {}, head.pos});
                entry = &open->entries.back();
                k = 1;
            } else if (toks.size() == 1) {
                open->entries.push_back(RawEntry{"rls", {head}, head.pos});
                entry = nullptr;
                continue;
            } else {
                fail(file, head.pos, "expected 'Key:' but found '" + head.text + "'");
            }
        }
        if (!entry) fail(file, head.pos, "value without a key");
        for (; k < toks.size(); ++k) {
            if (toks[k].kind == Tok::Str || (toks[k].kind == Tok::Arrow && entry->key == "rule"))
                entry->values.push_back(toks[k]);
            else
                fail(file, toks[k].pos, "expected a quoted value");
        }
    }
    files_.push_back(std::move(raw));
}

Term KnowledgeLoader::parse_at(const std::string& file, const Tok& str, const TypeContext& ctx) const {
    try {
        return parse_term(str.text, ctx);
    } catch (const SyntaxError& e) {
        fail(file, relocate(e.pos(), str.pos), "unparsable term \"" + str.text + "\": " + e.message());
    }
}

template <class T>
void KnowledgeLoader::insert(TreeNode<T>& root, const IdPath& id, T def, const std::string& file, SrcPos pos,
                             const char* what) {
    if (id.empty()) fail(file, pos, std::string("empty ") + what + " id");
    TreeNode<T>* node = &root;
    for (const auto& seg : id) {
        auto it = std::find_if(node->children.begin(), node->children.end(),
                               [&](const TreeNode<T>& c) { return c.segment == seg; });
        if (it == node->children.end()) {
            node->children.push_back(TreeNode<T>{seg, std::nullopt, {}});
            node = &node->children.back();
        } else {
            node = &*it;
        }
    }
    if (node->def) fail(file, pos, std::string("duplicate ") + what + " \"" + join_id(id) + "\"");
    node->def = std::move(def);
}

ModelPattern KnowledgeLoader::build_pattern(const RawDecl& d, const std::vector<const RawEntry*>& entries,
                                            TypeContext& ctx) const {
    ModelPattern mp;
    std::set<std::string> placeholders;
    for (const RawEntry* e : entries) {
        const MField field = *parse_mfield(e->key);
        for (const Tok& v : e->values) {
            const Term t = parse_at(d.file, v, ctx);
            auto item = split_item(t, ctx);
            if (!item || !item->arg.is_var())
                fail(d.file, v.pos, "pattern item must be '<descriptor> <placeholder>': \"" + v.text + "\"");
            const std::string& ph = item->arg.name();
            if (!placeholders.insert(ph).second) fail(d.file, v.pos, "placeholder '" + ph + "' used twice");
            if (mp.find(field, item->descriptor->name))
                fail(d.file, v.pos, "descriptor '" + item->descriptor->name + "' appears twice in " + e->key);
            ctx.bindings[ph] = item->descriptor->arg_typ;
            mp.items.push_back(PatternItem{field, *item->descriptor, item->arg});
        }
    }
    try {
        return adapt_to_type(ctx, mp);
    } catch (const TypeError& e) {
        fail(d.file, d.name.pos, e.what());
    }
}

void KnowledgeLoader::build_problem(const RawDecl& d) {
    ProblemDef p;
    p.id = split_id(d.name.text);
    p.guh = join_id(p.id);
    p.theory = d.theory;
    p.file = d.file;
    p.pos = d.name.pos;
    TypeContext ctx = store_.context(d.theory);
    std::vector<const RawEntry*> model_entries;
    for (const auto& e : d.entries)
        if (parse_mfield(e.key)) model_entries.push_back(&e);
    p.model = build_pattern(d, model_entries, ctx);
    std::set<std::string> placeholders;
    for (const auto& it : p.model.items) placeholders.insert(it.placeholder.name());
    const TypeContext theory_ctx = store_.context(d.theory);
    auto only_placeholders = [&](const Term& t, const Tok& where, const char* what) {
        for (const auto& v : variables(t))
            if (!placeholders.count(v) && !theory_ctx.bindings.count(v))
                fail(d.file, where.pos, std::string("placeholder '") + v + "' in " + what + " does not occur in the model");
    };
    for (const auto& e : d.entries) {
        if (parse_mfield(e.key)) continue;
        if (e.key == "rls") {
            p.where_rls = strip_rls_word(e.values.at(0).text);
        } else if (e.key == "Where") {
            for (const Tok& v : e.values) {
                Term t = parse_at(d.file, v, ctx);
                only_placeholders(t, v, "Where");
                p.where_.push_back(Precondition{adapt_term_to_type(ctx, t), v.pos});
            }
        } else if (e.key == "Method_Ref") {
            for (const Tok& v : e.values) p.solve_mets.push_back(split_id(v.text));
        } else if (e.key == "CAS") {
            if (e.values.size() != 1) fail(d.file, e.pos, "CAS expects one pattern");
            Term t = parse_at(d.file, e.values[0], ctx);
            if (!t.is_app(Op::Fn)) fail(d.file, e.values[0].pos, "CAS pattern must be a function application");
            only_placeholders(t, e.values[0], "CAS");
            p.cas = t;
        } else if (e.key == "Start_Refine") {
            if (e.values.size() != 1) fail(d.file, e.pos, "Start_Refine expects one id");
            p.start_refine = split_id(e.values[0].text);
        } else if (e.key == "Authors") {
            for (const Tok& v : e.values) p.mathauthors.push_back(v.text);
        } else if (e.key == "Post") {
            if (e.values.size() != 1) fail(d.file, e.pos, "Post expects one term");
            TypeContext loose = ctx;
            Term t = parse_at(d.file, e.values[0], loose);
            bind_defaults(t, loose.bindings);
            p.postcondition = adapt_term_to_type(loose, t);
        } else {
            fail(d.file, e.pos, "unknown problem field '" + e.key + "'");
        }
    }
    const SrcPos pos = p.pos;
    const IdPath id = p.id;
    insert(store_.problems_, id, std::move(p), d.file, pos, "problem");
}

void KnowledgeLoader::build_method(const RawDecl& d) {
    MethodDef m;
    m.id = split_id(d.name.text);
    m.theory = d.theory;
    TypeContext ctx = store_.context(d.theory);
    std::vector<const RawEntry*> model_entries;
    for (const auto& e : d.entries) {
        if (parse_mfield(e.key)) {
            model_entries.push_back(&e);
        } else if (e.key == "Program") {
            if (e.values.size() != 1) fail(d.file, e.pos, "Program expects one reference");
            m.program_ref = e.values[0].text;
        } else {
            fail(d.file, e.pos, "unknown method field '" + e.key + "'");
        }
    }
    m.guard = build_pattern(d, model_entries, ctx);
    if (m.guard.items.empty()) fail(d.file, d.name.pos, "method guard is empty");
    const IdPath id = m.id;
    insert(store_.methods_, id, std::move(m), d.file, d.name.pos, "method");
}

void KnowledgeLoader::build_example(const RawDecl& d) {
    Formalisation f;
    f.id = d.name.text;
    bool has_refs = false;
    for (const auto& e : d.entries) {
        if (e.key == "Text") {
            for (const Tok& v : e.values) f.text += (f.text.empty() ? "" : " ") + v.text;
        } else if (e.key == "Refs") {
            if (e.values.size() != 3) fail(d.file, e.pos, "Refs expects theory, problem and method");
            f.refs = References{e.values[0].text, split_id(e.values[1].text), split_id(e.values[2].text)};
            has_refs = true;
        } else if (e.key.starts_with("Item")) {
            std::vector<int> variants;
            if (e.key != "Item") {
                if (e.key.size() < 6 || e.key[4] != '[' || e.key.back() != ']')
                    fail(d.file, e.pos, "expected 'Item:' or 'Item[1,2]:'");
                std::stringstream ss(e.key.substr(5, e.key.size() - 6));
                std::string part;
                while (std::getline(ss, part, ',')) {
                    try {
                        const int v = std::stoi(part);
                        if (v < 1) throw std::invalid_argument(part);
                        variants.push_back(v);
                    } catch (const std::exception&) {
                        fail(d.file, e.pos, "bad variant index '" + part + "'");
                    }
                }
            }
            for (const Tok& v : e.values) f.model_items.push_back(FormalItem{v.text, variants, v.pos});
        } else {
            fail(d.file, e.pos, "unknown example field '" + e.key + "'");
        }
    }
    if (!has_refs) fail(d.file, d.name.pos, "example \"" + f.id + "\" has no Refs");
    if (!store_.has_theory(f.refs.theory)) fail(d.file, d.name.pos, "unknown theory \"" + f.refs.theory + "\"");
    const TypeContext ctx = store_.context(f.refs.theory);
    for (const auto& item : f.model_items) {
        const Term t = parse_at(d.file, Tok{Tok::Str, item.text, false, item.pos}, ctx);
        if (!split_item(t, ctx)) fail(d.file, item.pos, "item \"" + item.text + "\" does not start with a descriptor");
    }
    if (!store_.examples_.emplace(f.id, f).second) fail(d.file, d.name.pos, "duplicate example \"" + f.id + "\"");
}

void KnowledgeLoader::build_rule_set(const RawDecl& d) {
    RuleSet rs;
    rs.id = d.name.text;
    const PredicateRegistry registry = register_builtin_predicates();
    const TypeContext ctx = store_.context(d.theory);
    for (const auto& e : d.entries) {
        if (e.key == "builtin") {
            for (const Tok& v : e.values) {
                auto it = registry.find(v.text);
                if (it == registry.end()) fail(d.file, v.pos, "unknown builtin evaluator '" + v.text + "'");
                rs.evaluators.insert(*it);
            }
        } else if (e.key == "rule") {
            if (e.values.size() != 3 || e.values[1].kind != Tok::Arrow)
                fail(d.file, e.pos, "expected rule \"lhs\" -> \"rhs\"");
            rs.rules.push_back(RewriteRule{parse_at(d.file, e.values[0], ctx), parse_at(d.file, e.values[2], ctx)});
        } else {
            fail(d.file, e.pos, "unknown rule set entry '" + e.key + "'");
        }
    }
    if (!store_.rule_sets_.emplace(rs.id, rs).second) fail(d.file, d.name.pos, "duplicate rule set \"" + rs.id + "\"");
}

void KnowledgeLoader::cross_check() const {
    for (const auto& id : store_.problem_ids()) {
        const ProblemDef& p = store_.problem(id);
        for (const auto& m : p.solve_mets)
            if (!store_.has_method(m)) fail(p.file, p.pos, "unresolved method reference \"" + join_id(m) + "\"");
        if (!p.start_refine.empty() && !store_.has_problem(p.start_refine))
            fail(p.file, p.pos, "unresolved Start_Refine \"" + join_id(p.start_refine) + "\"");
        if (!store_.rule_sets_.count(p.where_rls)) fail(p.file, p.pos, "unknown rule set \"" + p.where_rls + "\"");
    }
    for (const auto& file : files_) {
        for (const auto& d : file.decls) {
            if (d.kind != "example") continue;
            const Formalisation& f = store_.example(d.name.text);
            if (!store_.has_problem(f.refs.problem))
                fail(d.file, d.name.pos, "unresolved problem reference \"" + join_id(f.refs.problem) + "\"");
            if (!store_.has_method(f.refs.method))
                fail(d.file, d.name.pos, "unresolved method reference \"" + join_id(f.refs.method) + "\"");
            const ProblemDef& p = store_.problem(f.refs.problem);
            const MethodDef& m = store_.method(f.refs.method);
            const TypeContext ctx = store_.context(f.refs.theory);
            for (const auto& item : f.model_items) {
                const auto split = split_item(parse_term(item.text, ctx), ctx);
                const std::string& name = split->descriptor->name;
                if (!p.model.find(name) && !m.guard.find(name))
                    fail(d.file, item.pos, "descriptor '" + name + "' occurs neither in the problem nor in the method");
            }
        }
    }
}

Store KnowledgeLoader::finish() {
    for (auto& [id, th] : store_.theories_)
        for (const auto& imp : th.imports)
            if (!store_.theories_.count(imp)) throw AuthoringError("<theories>", {}, "theory \"" + id + "\" imports unknown \"" + imp + "\"");
    store_.rule_sets_.emplace("eval_rls", default_rule_set("eval_rls"));
    for (const auto& file : files_)
        for (const auto& d : file.decls)
            if (d.kind == "ruleset") build_rule_set(d);
    for (const auto& file : files_)
        for (const auto& d : file.decls) {
            if (d.kind == "problem") build_problem(d);
            else if (d.kind == "method") build_method(d);
        }
    for (const auto& file : files_)
        for (const auto& d : file.decls)
            if (d.kind == "example") build_example(d);
    cross_check();
    if (files_.empty() || (store_.problems_.children.empty() && store_.examples_.empty() &&
                           store_.theories_.size() == 1 && store_.theories_.begin()->second.descriptors.empty()))
        store_.theories_.clear();
    return std::move(store_);
}

Store load_knowledge_text(const std::vector<std::pair<std::string, std::string>>& files) {
    KnowledgeLoader loader;
    for (const auto& [name, text] : files) loader.add_file(name, text);
    return loader.finish();
}

Store load_knowledge(const std::vector<std::filesystem::path>& paths) {
    std::vector<std::filesystem::path> files;
    for (const auto& p : paths) {
        if (std::filesystem::is_directory(p)) {
            std::vector<std::filesystem::path> found;
            for (const auto& entry : std::filesystem::directory_iterator(p))
                if (entry.is_regular_file() && entry.path().extension() == ".know") found.push_back(entry.path());
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    std::vector<std::pair<std::string, std::string>> texts;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) throw AuthoringError(f.string(), {}, "cannot read file");
        std::stringstream ss;
        ss << in.rdbuf();
        texts.emplace_back(f.string(), ss.str());
    }
    return load_knowledge_text(texts);
}

}  // namespace formspec
