#include "asmf/model.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <ctime>
#include <sstream>
#include <vector>

#include "asmf/error.hpp"

namespace asmf {

ModelFile make_model(const Dataset& dataset, const TreeConfig& config, std::string created) {
    ModelFile m;
    m.schema = dataset.schema;
    m.config = config;
    m.provenance = {dataset.size(), std::move(created)};
    m.tree = train(dataset, config);
    return m;
}

std::string utc_timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

std::string join_counts(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

void write_node(std::ostringstream& out, const ModelFile& m, NodeIndex i, std::size_t depth, const std::string& edge) {
    const TreeNode& n = m.tree.node(i);
    out << std::string(2 * depth, ' ') << edge << " #" << i << ' ';
    if (!n.is_leaf())
        out << "split " << m.schema.attributes.at(*n.attribute).name;
    else
        out << (n.is_default ? "default" : "leaf");
    out << " support=" << n.support << " dist=" << join_counts(n.distribution)
        << " class=" << m.schema.class_label(n.predicted) << '\n';
    if (n.is_leaf()) return;
    const AttributeDef& attr = m.schema.attributes.at(*n.attribute);
    for (std::size_t level = 0; level < n.children.size(); ++level)
        write_node(out, m, n.children[level], depth + 1, attr.name + "=" + attr.levels.at(level));
}

}  // namespace

std::string serialize_model(const ModelFile& model) {
    check_tree(model.tree, model.schema);
    std::ostringstream out;
    out << "asmf-tree-model v" << model.version << '\n';
    out << "schema\n" << to_dsl(model.schema) << "end\n";
    out << "config\n";
    out << "criterion " << to_string(model.config.criterion) << '\n';
    out << "min_split " << model.config.min_split << '\n';
    out << "min_support " << model.config.min_support << '\n';
    out << "max_depth " << (model.config.max_depth ? std::to_string(*model.config.max_depth) : "none") << '\n';
    out << "end\n";
    out << "provenance\n";
    out << "rows " << model.provenance.rows << '\n';
    out << "created " << (model.provenance.created.empty() ? "unknown" : model.provenance.created) << '\n';
    out << "end\n";
    out << "tree " << model.tree.size() << '\n';
    write_node(out, model, 0, 0, "root");
    out << "end\n";
    return out.str();
}

namespace {

class ModelReader {
public:
    explicit ModelReader(std::string_view text) {
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t nl = text.find('\n', pos);
            std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines_.push_back(line);
            pos = nl == std::string_view::npos ? text.size() : nl + 1;
        }
    }

    [[noreturn]] void fail(std::size_t line_index, const std::string& what) const {
        throw ModelError("model line " + std::to_string(line_index + 1) + ": " + what);
    }

    bool done() const { return at_ >= lines_.size(); }
    std::size_t at() const { return at_; }

    std::string_view next(const std::string& expecting) {
        if (done()) throw ModelError("truncated model: expected " + expecting);
        return lines_[at_++];
    }

    void expect(std::string_view literal) {
        std::string_view line = next("'" + std::string(literal) + "'");
        if (line != literal) fail(at_ - 1, "expected '" + std::string(literal) + "', found '" + std::string(line) + "'");
    }

    // Collects lines up to (not including) a bare "end".
    std::vector<std::string_view> block(const std::string& name) {
        std::vector<std::string_view> out;
        for (;;) {
            std::string_view line = next("'end' closing the " + name + " block");
            if (line == "end") return out;
            out.push_back(line);
        }
    }

    std::pair<std::string_view, std::string_view> key_value(std::string_view line, std::size_t line_index) const {
        std::size_t sp = line.find(' ');
        if (sp == std::string_view::npos) fail(line_index, "expected 'key value', found '" + std::string(line) + "'");
        return {line.substr(0, sp), line.substr(sp + 1)};
    }

private:
    std::vector<std::string_view> lines_;
    std::size_t at_ = 0;
};

std::size_t parse_count(std::string_view text, const std::function<void(const std::string&)>& fail) {
    if (text.empty()) fail("expected a non-negative integer");
    std::size_t v = 0;
    for (char c : text) {
        if (c < '0' || c > '9') fail("expected a non-negative integer, found '" + std::string(text) + "'");
        v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t p = s.find(sep, start);
        out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos) return out;
        start = p + 1;
    }
}

struct NodeLine {
    std::size_t line_index = 0;
    std::size_t depth = 0;
    std::string edge;
    TreeNode node;
    std::size_t declared_id = 0;
};

}  // namespace

ModelFile deserialize_model(std::string_view text) {
    ModelReader in(text);
    ModelFile m;

    std::string_view header = in.next("the model header");
    constexpr std::string_view magic = "asmf-tree-model v";
    if (header.substr(0, magic.size()) != magic) in.fail(0, "not an asmf-tree model file");
    std::string_view version_text = header.substr(magic.size());
    std::size_t version = parse_count(version_text, [&](const std::string& w) { in.fail(0, "bad version: " + w); });
    if (version != static_cast<std::size_t>(kModelFormatVersion))
        in.fail(0, "unsupported model version " + std::string(version_text) + " (this build reads v" +
                       std::to_string(kModelFormatVersion) + ")");
    m.version = kModelFormatVersion;

    in.expect("schema");
    const std::size_t schema_start = in.at();
    std::string schema_text;
    for (std::string_view l : in.block("schema")) (schema_text += l) += '\n';
    try {
        m.schema = parse_schema(schema_text);
    } catch (const SchemaError& e) {
        in.fail(schema_start, std::string("in schema block: ") + e.what());
    }

    in.expect("config");
    std::size_t line_index = in.at();
    for (std::string_view l : in.block("config")) {
        auto [key, value] = in.key_value(l, line_index);
        auto bad = [&, li = line_index](const std::string& w) { in.fail(li, std::string(key) + ": " + w); };
        try {
            if (key == "criterion") m.config.criterion = parse_criterion(value);
            else if (key == "min_split") m.config.min_split = parse_count(value, bad);
            else if (key == "min_support") m.config.min_support = parse_count(value, bad);
            else if (key == "max_depth")
                m.config.max_depth = value == "none" ? std::nullopt : std::optional(parse_count(value, bad));
            else in.fail(line_index, "unknown config key '" + std::string(key) + "'");
            m.config.check();
        } catch (const ModelError&) {
            throw;
        } catch (const Error& e) {
            in.fail(line_index, e.what());
        }
        ++line_index;
    }

    in.expect("provenance");
    line_index = in.at();
    for (std::string_view l : in.block("provenance")) {
        auto [key, value] = in.key_value(l, line_index);
        if (key == "rows")
            m.provenance.rows = parse_count(value, [&, li = line_index](const std::string& w) { in.fail(li, "rows: " + w); });
        else if (key == "created") m.provenance.created = std::string(value);
        else in.fail(line_index, "unknown provenance key '" + std::string(key) + "'");
        ++line_index;
    }

    std::string_view tree_header = in.next("'tree <count>'");
    const std::size_t tree_line = in.at() - 1;
    if (tree_header.substr(0, 5) != "tree ") in.fail(tree_line, "expected 'tree <count>'");
    const std::size_t declared = parse_count(tree_header.substr(5), [&](const std::string& w) { in.fail(tree_line, w); });

    std::vector<NodeLine> lines;
    line_index = in.at();
    for (std::string_view raw : in.block("tree")) {
        NodeLine nl;
        nl.line_index = line_index;
        std::size_t indent = 0;
        while (indent < raw.size() && raw[indent] == ' ') ++indent;
        if (indent % 2) in.fail(line_index, "odd indentation");
        nl.depth = indent / 2;
        auto tokens = split(raw.substr(indent), ' ');
        auto fail = [&, li = line_index](const std::string& w) { in.fail(li, w); };
        if (tokens.size() < 5) fail("incomplete node line");
        nl.edge = std::string(tokens[0]);
        if (tokens[1].empty() || tokens[1][0] != '#') fail("expected '#<id>' after the edge label");
        nl.declared_id = parse_count(tokens[1].substr(1), fail);
        const std::string where = "node #" + std::string(tokens[1].substr(1));
        std::size_t k = 2;
        if (tokens[k] == "split") {
            if (tokens.size() < 7) fail(where + ": incomplete split line");
            auto a = m.schema.find_attribute(tokens[k + 1]);
            if (!a) fail(where + ": attribute '" + std::string(tokens[k + 1]) + "' is not in the schema");
            nl.node.attribute = *a;
            k += 2;
        } else if (tokens[k] == "leaf" || tokens[k] == "default") {
            nl.node.is_default = tokens[k] == "default";
            ++k;
        } else {
            fail(where + ": unknown node kind '" + std::string(tokens[k]) + "'");
        }
        if (tokens.size() != k + 3) fail(where + ": expected support=, dist= and class= fields");
        auto field = [&](std::string_view tok, std::string_view name) {
            if (tok.substr(0, name.size() + 1) != std::string(name) + "=") fail(where + ": expected " + std::string(name) + "=");
            return tok.substr(name.size() + 1);
        };
        nl.node.support = parse_count(field(tokens[k], "support"), fail);
        for (auto c : split(field(tokens[k + 1], "dist"), ',')) nl.node.distribution.push_back(parse_count(c, fail));
        if (nl.node.distribution.size() != m.schema.class_arity())
            fail(where + ": dist has " + std::to_string(nl.node.distribution.size()) + " entries for " +
                 std::to_string(m.schema.class_arity()) + " classes");
        std::string_view cls = field(tokens[k + 2], "class");
        auto c = m.schema.find_class(cls);
        if (!c) fail(where + ": class '" + std::string(cls) + "' is not declared");
        nl.node.predicted = *c;
        lines.push_back(std::move(nl));
        ++line_index;
    }
    if (!in.done()) in.fail(in.at(), "unexpected content after the tree block");
    if (lines.size() != declared)
        in.fail(tree_line, "tree declares " + std::to_string(declared) + " nodes but lists " + std::to_string(lines.size()));
    if (lines.empty()) in.fail(tree_line, "tree has no nodes");

    // Rebuild the pre-order structure from indentation, checking edges.
    std::vector<TreeNode> nodes;
    std::size_t cursor = 0;
    std::function<NodeIndex(std::size_t, const std::string&)> read = [&](std::size_t depth,
                                                                        const std::string& expected_edge) -> NodeIndex {
        if (cursor >= lines.size()) throw ModelError("truncated model: missing child " + expected_edge);
        NodeLine& nl = lines[cursor++];
        const std::string where = "node #" + std::to_string(nl.declared_id);
        if (nl.depth != depth) in.fail(nl.line_index, where + ": expected indentation depth " + std::to_string(depth));
        if (nl.declared_id != nodes.size())
            in.fail(nl.line_index, where + ": ids must follow pre-order, expected #" + std::to_string(nodes.size()));
        if (nl.edge != expected_edge) {
            auto eq = nl.edge.find('=');
            if (depth > 0 && eq != std::string::npos) {
                auto a = m.schema.find_attribute(nl.edge.substr(0, eq));
                std::string level = nl.edge.substr(eq + 1);
                if (a && !m.schema.attributes[*a].find_level(level))
                    in.fail(nl.line_index, where + ": level '" + level + "' is not declared for attribute " +
                                               m.schema.attributes[*a].name);
            }
            in.fail(nl.line_index, where + ": expected edge '" + expected_edge + "', found '" + nl.edge + "'");
        }
        const NodeIndex self = nodes.size();
        nodes.push_back(nl.node);
        if (nl.node.attribute) {
            const AttributeDef& attr = m.schema.attributes[*nl.node.attribute];
            std::vector<NodeIndex> kids;
            for (const auto& level : attr.levels) kids.push_back(read(depth + 1, attr.name + "=" + level));
            nodes[self].children = std::move(kids);
        }
        return self;
    };
    read(0, "root");
    if (cursor != lines.size()) {
        const NodeLine& extra = lines[cursor];
        in.fail(extra.line_index, "node #" + std::to_string(extra.declared_id) + " is not attached to the tree");
    }
    try {
        m.tree = DecisionTree(std::move(nodes));
        check_tree(m.tree, m.schema);
    } catch (const TreeError& e) {
        in.fail(tree_line, e.what());
    }
    return m;
}

}  // namespace asmf
