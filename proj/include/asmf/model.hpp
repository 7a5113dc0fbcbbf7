#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "asmf/dataset.hpp"
#include "asmf/schema.hpp"
#include "asmf/tree.hpp"

namespace asmf {

inline constexpr int kModelFormatVersion = 1;

struct Provenance {
    std::size_t rows = 0;  // training records
    std::string created;   // ISO-8601 UTC, stored verbatim

    bool operator==(const Provenance&) const = default;
};

struct ModelFile {
    int version = kModelFormatVersion;
    Schema schema;
    TreeConfig config;
    Provenance provenance;
    DecisionTree tree;

    bool operator==(const ModelFile&) const = default;
};

/// Trains (build + prune) and wraps the result with its schema and config.
ModelFile make_model(const Dataset& dataset, const TreeConfig& config, std::string created);

/// Text layout:
///
///     asmf-tree-model v1
///     schema
///     class P levels=Good,Average,Poor labels=1,2,3
///     attr ...
///     end
///     config
///     criterion asmf-diagonal
///     min_split 2
///     min_support 2
///     max_depth none
///     end
///     provenance
///     rows 40
///     created 2026-01-01T00:00:00Z
///     end
///     tree 13
///     root #0 split PS support=40 dist=10,16,14 class=Average
///       PS=Good #1 split DKA support=13 dist=10,3,0 class=Good
///         DKA=Good #2 leaf support=6 dist=6,0,0 class=Good
///     ...
///     end
///
/// Nodes are listed in pre-order, indented two spaces per depth.
std::string serialize_model(const ModelFile& model);

/// Throws ModelError with the offending line (or node) on any problem.
ModelFile deserialize_model(std::string_view text);

std::string utc_timestamp_now();

}  // namespace asmf
