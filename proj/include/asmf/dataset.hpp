#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asmf/schema.hpp"

namespace asmf {

/// One data row. `values[a]` is empty when the source had no column for
/// attribute `a` (prediction inputs may omit attributes a tree never tests).
struct Record {
    std::vector<std::optional<LevelIndex>> values;
    std::optional<ClassIndex> label;
    std::size_t row_id = 0;  // 1-based data row in the source file

    bool operator==(const Record&) const = default;
};

struct Dataset {
    Schema schema;
    std::vector<Record> records;

    std::size_t size() const noexcept { return records.size(); }
    bool empty() const noexcept { return records.empty(); }

    /// Per-class record counts over labeled records.
    std::vector<std::size_t> class_counts() const;

    bool operator==(const Dataset&) const = default;
};

struct IngestOptions {
    bool skip_invalid = false;
    bool require_labels = false;  // training inputs must carry the class column
};

struct Violation {
    std::size_t row_id = 0;  // 0 when the violation is not tied to a row
    std::string reason;
};

struct CsvIngest {
    Dataset dataset;
    std::vector<Violation> skipped;  // rows dropped under skip_invalid
};

/// Reads comma-separated data whose header names a subset of the schema
/// attributes and, optionally, the class column. Cells hold level labels
/// (case-insensitive) or, for binned attributes, raw decimal scores.
/// Any bad row throws DataError naming row and column unless skip_invalid.
CsvIngest ingest_csv(const Schema& schema, std::string_view text, const IngestOptions& opts = {});

enum class ValidationMode { training, prediction };

/// Returns every invariant violation; an empty list means the dataset is usable.
std::vector<Violation> validate(const Dataset& dataset, ValidationMode mode = ValidationMode::training);

/// Canonical-case CSV; the class column uses numeric aliases when the schema declares them.
std::string export_csv(const Dataset& dataset);

/// Built-in personnel corpus: 40 rows over GPA, PS, DKA, CS, TE, RS with class P.
std::string_view bundled_schema_text();
std::string_view bundled_training_csv();
Dataset bundled_dataset();

}  // namespace asmf
