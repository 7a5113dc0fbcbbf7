#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "asmf/criteria.hpp"
#include "asmf/dataset.hpp"
#include "asmf/error.hpp"
#include "asmf/model.hpp"
#include "asmf/report.hpp"
#include "asmf/rules.hpp"
#include "asmf/tree.hpp"

namespace asmf::cli {
namespace {

struct Options {
    std::string schema;
    std::string data;
    std::string model;
    std::string out;
    std::string criterion = "asmf";
    std::size_t min_support = TreeConfig{}.min_support;
    std::size_t min_split = TreeConfig{}.min_split;
    std::optional<std::size_t> max_depth;
    std::string format = "text";
    bool skip_invalid = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
    if (!out.flush()) throw Error("cannot write '" + path + "'");
}

TreeConfig tree_config(const Options& o) {
    TreeConfig c;
    c.criterion = parse_criterion(o.criterion);
    c.min_support = o.min_support;
    c.min_split = o.min_split;
    c.max_depth = o.max_depth;
    c.check();
    return c;
}

struct Loaded {
    Dataset dataset;
    std::size_t skipped = 0;
};

Loaded load_training(const Options& o) {
    Schema schema = parse_schema(read_file(o.schema));
    CsvIngest in = ingest_csv(schema, read_file(o.data), {.skip_invalid = o.skip_invalid, .require_labels = true});
    auto violations = validate(in.dataset, ValidationMode::training);
    if (!violations.empty()) {
        const Violation& v = violations.front();
        throw DataError(v.row_id ? "row " + std::to_string(v.row_id) + ": " + v.reason : v.reason);
    }
    return {std::move(in.dataset), in.skipped.size()};
}

void require_csv_or_text(const Options& o) {
    if (o.format != "text" && o.format != "csv") throw Error("--format must be text or csv, got '" + o.format + "'");
}

int run_train(const Options& o, std::ostream& out) {
    const TreeConfig config = tree_config(o);
    Loaded data = load_training(o);
    ModelFile model = make_model(data.dataset, config, utc_timestamp_now());
    write_file(o.out, serialize_model(model));

    const TreeNode& root = model.tree.root();
    const ConfusionMatrix cm = resubstitution_report(model.tree, data.dataset);
    out << "rows=" << data.dataset.size() << '\n';
    if (o.skip_invalid) out << "skipped=" << data.skipped << '\n';
    out << "criterion=" << to_string(config.criterion) << '\n';
    out << "root=" << (root.is_leaf() ? "(leaf)" : model.schema.attributes[*root.attribute].name) << '\n';
    out << "nodes=" << model.tree.size() << '\n';
    out << "leaves=" << model.tree.leaf_count() << '\n';
    out << "accuracy=" << format_fixed(cm.accuracy(), 4) << " (" << cm.correct << '/' << cm.total << ")\n";
    out << "model=" << o.out << '\n';
    return 0;
}

int run_report(const Options& o, std::ostream& out) {
    require_csv_or_text(o);
    if (!o.model.empty()) {
        ModelFile model = deserialize_model(read_file(o.model));
        CsvIngest in = ingest_csv(model.schema, read_file(o.data), {.skip_invalid = o.skip_invalid, .require_labels = true});
        const ConfusionMatrix cm = resubstitution_report(model.tree, in.dataset);
        out << (o.format == "csv" ? render_csv(cm, model.schema) : render_text(cm, model.schema));
        return 0;
    }
    if (o.schema.empty()) throw Error("report needs --schema (or --model)");
    Loaded data = load_training(o);
    const CriterionReport report = criterion_report(data.dataset, parse_criterion(o.criterion));
    out << (o.format == "csv" ? render_csv(report) : render_text(report));
    return 0;
}

std::string csv_quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

int run_rules(const Options& o, std::ostream& out) {
    require_csv_or_text(o);
    Schema schema;
    RuleSet rules;
    if (!o.model.empty()) {
        ModelFile model = deserialize_model(read_file(o.model));
        schema = model.schema;
        rules = extract_rules(model.tree);
    } else {
        if (o.schema.empty() || o.data.empty()) throw Error("rules needs --model, or --schema with --data");
        Loaded data = load_training(o);
        schema = data.dataset.schema;
        rules = extract_rules(train(data.dataset, tree_config(o)), data.dataset);
    }
    rules = merge_rules(std::move(rules), schema);
    if (o.format == "csv") out << "rule,predicted,support,correct,confidence\n";
    for (const Rule& r : rules) {
        if (o.format == "csv")
            out << csv_quote(render_rule(r, schema)) << ',' << schema.class_label(r.predicted) << ',' << r.support
                << ',' << r.correct << ',' << format_fixed(r.confidence()) << '\n';
        else
            out << render_rule(r, schema) << '\n';
    }
    return 0;
}

int run_predict(const Options& o, std::ostream& out) {
    require_csv_or_text(o);
    ModelFile model = deserialize_model(read_file(o.model));
    CsvIngest in = ingest_csv(model.schema, read_file(o.data), {.skip_invalid = o.skip_invalid, .require_labels = false});
    if (in.dataset.empty()) throw DataError("no records");

    std::set<AttributeIndex> tested;
    for (const TreeNode& n : model.tree.nodes())
        if (n.attribute) tested.insert(*n.attribute);
    for (AttributeIndex a : tested) {
        bool present = std::any_of(in.dataset.records.begin(), in.dataset.records.end(),
                                   [a](const Record& r) { return r.values[a].has_value(); });
        if (!present) throw DataError("input has no column " + model.schema.attributes[a].name + ", which the model tests");
    }

    const RuleSet rules = merge_rules(extract_rules(model.tree), model.schema);
    if (o.format == "csv") out << "row,predicted,confidence,recommendation,rule\n";
    for (const Record& r : in.dataset.records) {
        const Prediction p = classify(model.tree, model.schema, r);
        const auto conf = p.confidence();
        const auto match = first_match(rules, r);
        const std::string rule = match ? render_rule(rules[*match], model.schema) : "(unseen combination; parent majority)";
        const std::string& cls = model.schema.class_label(p.predicted);
        if (o.format == "csv") {
            out << r.row_id << ',' << cls << ',' << (conf ? format_fixed(*conf) : "") << ','
                << to_string(p.recommendation) << ',' << csv_quote(rule) << '\n';
        } else {
            out << "row=" << r.row_id << " class=" << cls << " confidence=" << (conf ? format_fixed(*conf) : "-")
                << " recommendation=" << to_string(p.recommendation) << " rule: " << rule << '\n';
        }
    }
    return 0;
}

int run_export_dot(const Options& o, std::ostream& out) {
    ModelFile model = deserialize_model(read_file(o.model));
    const std::string dot = export_dot(model.tree, model.schema);
    if (o.out.empty())
        out << dot;
    else
        write_file(o.out, dot);
    return 0;
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Decision-tree induction with the ASMF split criterion", "asmf-tree"};
    app.require_subcommand(1, 1);

    auto tree_opts = [&](CLI::App* sub) {
        sub->add_option("--criterion", o.criterion, "asmf | asmf-maxcell | gainratio")->capture_default_str();
        sub->add_option("--min-support", o.min_support, "pruning threshold")->capture_default_str();
        sub->add_option("--min-split", o.min_split, "smallest node that may be split")->capture_default_str();
        sub->add_option("--max-depth", o.max_depth, "depth cap (none by default)");
    };

    auto* train = app.add_subcommand("train", "train a model and write it to --out");
    train->add_option("--schema", o.schema, "schema file")->required();
    train->add_option("--data", o.data, "training CSV")->required();
    train->add_option("--out", o.out, "model file to write")->required();
    tree_opts(train);
    train->add_flag("--skip-invalid", o.skip_invalid, "drop bad rows instead of failing");

    auto* report = app.add_subcommand("report", "criterion table, or a confusion matrix with --model");
    report->add_option("--schema", o.schema, "schema file");
    report->add_option("--data", o.data, "labeled CSV")->required();
    report->add_option("--model", o.model, "model file for a resubstitution confusion matrix");
    report->add_option("--criterion", o.criterion, "asmf | asmf-maxcell | gainratio")->capture_default_str();
    report->add_option("--format", o.format, "text | csv")->capture_default_str();
    report->add_flag("--skip-invalid", o.skip_invalid, "drop bad rows instead of failing");

    auto* rules = app.add_subcommand("rules", "print the merged rule set");
    rules->add_option("--model", o.model, "model file");
    rules->add_option("--schema", o.schema, "schema file (train in memory)");
    rules->add_option("--data", o.data, "training CSV (train in memory)");
    tree_opts(rules);
    rules->add_option("--format", o.format, "text | csv")->capture_default_str();
    rules->add_flag("--skip-invalid", o.skip_invalid, "drop bad rows instead of failing");

    auto* predict = app.add_subcommand("predict", "classify rows of a CSV with a model");
    predict->add_option("--model", o.model, "model file")->required();
    predict->add_option("--data", o.data, "CSV of records; the class column is optional")->required();
    predict->add_option("--format", o.format, "text | csv")->capture_default_str();
    predict->add_flag("--skip-invalid", o.skip_invalid, "drop bad rows instead of failing");

    auto* dot = app.add_subcommand("export-dot", "write the model tree as Graphviz DOT");
    dot->add_option("--model", o.model, "model file")->required();
    dot->add_option("--out", o.out, "output path (default: standard output)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "asmf-tree: error: " << one_line(e.what()) << '\n';
        return 2;
    }

    try {
        if (train->parsed()) return run_train(o, out);
        if (report->parsed()) return run_report(o, out);
        if (rules->parsed()) return run_rules(o, out);
        if (predict->parsed()) return run_predict(o, out);
        if (dot->parsed()) return run_export_dot(o, out);
    } catch (const std::exception& e) {
        err << "asmf-tree: error: " << one_line(e.what()) << '\n';
        return 1;
    }
    return 1;
}

}  // namespace asmf::cli
