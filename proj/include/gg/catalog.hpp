#pragma once

#include <map>

#include "gg/products.hpp"

namespace gg {

class CatalogError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace catalog {

// Factor data. Each builder validates the classical preconditions of its lift.
ChartPtr r3_chart(const std::string& id = "r3");
ChartPtr line_chart(const std::string& coord = "t");

GacsRecord contact_r3(const ChartPtr& c, const SamplePlan& plan = {});
GacmsRecord sasakian_heisenberg(const ChartPtr& c, const SamplePlan& plan = {});
GacmsRecord cokahler_r3(const ChartPtr& c, const SamplePlan& plan = {});
GacmsRecord line_rplus(const ChartPtr& c, const SamplePlan& plan = {});
GacxRecord kahler_r2_complex(const ChartPtr& c, const SamplePlan& plan = {});
GacxRecord kahler_r2_symplectic(const ChartPtr& c, const SamplePlan& plan = {});

}  // namespace catalog

struct CatalogEntry {
    std::string name;
    std::string description;
    ChartPtr chart;
    std::optional<GacsRecord> gacs;
    std::optional<GacmsRecord> gacms;
    std::optional<GacxRecord> j1;
    std::optional<GacxRecord> j2;
    std::optional<ProductChart> product;
    std::optional<GacmsRecord> left;
    std::optional<GacmsRecord> right;
    /// Product carries the diag(e^{-t}, e^{t}) warp instead of J2 = G J1.
    bool warped = false;
    /// Expected boolean outcomes of run_entry, keyed by flag name.
    std::map<std::string, bool> expected;
};

std::vector<std::string> catalog_names();

/// Builds the entry and runs its axiom suite; a failing axiom raises CatalogError.
CatalogEntry load_entry(const std::string& name, const SamplePlan& plan = {});

/// Axiom suite of an entry (gacs / gacms / gacx / generalized metric as applicable).
CheckReport validate_entry(const CatalogEntry& e, const SamplePlan& plan = {});

struct EntryRun {
    CheckReport axioms;
    std::map<std::string, bool> flags;
    std::vector<CheckReport> checks;
    /// Every expected flag present and equal.
    bool matches_expected = true;
};

/// Axioms plus the entry's classification / Kähler / theorem checks.
EntryRun run_entry(const CatalogEntry& e, const SamplePlan& plan = {});

enum class TrialKind { SameBranch, SwappedBranch, MixedBranch, ScaledSections, NonCommutingTilde };
std::string to_string(TrialKind k);

struct Theorem1Trial {
    TrialKind kind;
    std::string factors;
    Theorem1Result result;
};

/// Randomized commutation-criterion instances over the catalog factors, cycling through the trial kinds.
std::vector<Theorem1Trial> theorem1_trials(int count, std::uint64_t seed, const SamplePlan& plan = {});

}  // namespace gg
