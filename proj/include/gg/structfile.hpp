#pragma once

#include <map>

#include "gg/catalog.hpp"

namespace gg {

/// Syntax or reference error in a structure file, with its location.
class FileParseError : public std::runtime_error {
public:
    FileParseError(const std::string& file, int line, const std::string& msg)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg), file_(file), line_(line) {}
    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    std::string file_;
    int line_;
};

/// Definitions attached to one manifold (or product) chart.
struct SymbolTable {
    ChartPtr chart;
    std::map<std::string, ScalarField> scalars;
    std::map<std::string, VectorField> vectors;
    std::map<std::string, KForm> forms;
    std::map<std::string, FieldMatrix> matrices;
};

struct FileStructure {
    std::string name;
    std::string kind;
    int line = 0;
    ChartPtr chart;
    std::optional<GacsRecord> gacs;
    std::optional<GacmsRecord> gacms;
    std::optional<GacxRecord> gacx;
    // kahler-pair, product and warp
    std::optional<GacxRecord> j1;
    std::optional<GacxRecord> j2;
    std::optional<ProductChart> product;
    std::optional<GacmsRecord> left;
    std::optional<GacmsRecord> right;
    bool warped = false;
    // commutation: (g1, g2) against (t1, t2)
    std::vector<GacsRecord> quad;
};

struct FileEntry {
    std::string name;
    std::string structure;
    std::map<std::string, bool> expected;
};

struct StructureFile {
    std::string path;
    std::vector<std::string> manifold_order;
    std::map<std::string, SymbolTable> manifolds;
    std::vector<FileStructure> structures;
    SamplePlan plan;
    std::string bracket = "courant";
    std::optional<FileEntry> entry;

    const FileStructure& structure(const std::string& name) const;
    /// Symbol table of the chart a structure lives on.
    const SymbolTable* table_for(const ChartPtr& chart) const;
};

/// Command-line values win over the file's [check] block, which wins over the defaults.
struct PlanOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> points;
    std::optional<double> tolerance;
    std::optional<std::string> bracket;
};

/// Parses and builds every structure. Classical precondition failures propagate
/// unchanged; syntax and reference errors raise FileParseError.
StructureFile parse_structure_file(std::istream& in, const std::string& path, const PlanOverrides& ov = {});
StructureFile load_structure_file(const std::string& path, const PlanOverrides& ov = {});

/// Resolves "courant" or "derived:<one-form name>" on a chart of the file.
Bracket resolve_bracket(const StructureFile& f, const std::string& spec, const ChartPtr& chart);

/// The [entry] block of a file as a catalog entry.
CatalogEntry entry_from_file(const StructureFile& f);

}  // namespace gg
