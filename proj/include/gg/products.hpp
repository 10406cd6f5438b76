#pragma once

#include "gg/structures.hpp"

namespace gg {

enum class Factor { Left, Right };

/// M₁ × M₂ with coordinates listed left then right. Parameters of a factor that
/// name a coordinate of the other factor become ordinary coordinates.
struct ProductChart {
    ChartPtr left;
    ChartPtr right;
    ChartPtr chart;

    static ProductChart make(const ChartPtr& left, const ChartPtr& right, std::string id = {});

    std::size_t dim() const { return chart->dim(); }
    const ChartPtr& factor(Factor f) const { return f == Factor::Left ? left : right; }
    /// Product coordinate index of a factor's coordinate i.
    std::size_t slot(Factor f, std::size_t i) const { return f == Factor::Left ? i : left->dim() + i; }
};

ScalarField lift_to_product(const ProductChart& pc, const ScalarField& f);
VectorField lift_to_product(const ProductChart& pc, const VectorField& x, Factor side);
KForm lift_to_product(const ProductChart& pc, const KForm& w, Factor side);
GeneralizedSection lift_to_product(const ProductChart& pc, const GeneralizedSection& u, Factor side);
/// Acts on the factor's slots and kills the other factor.
BundleEndomorphism lift_to_product(const ProductChart& pc, const BundleEndomorphism& m, Factor side);
GacsRecord lift_to_product(const ProductChart& pc, const GacsRecord& g, Factor side);
SpanningFrame lift_to_product(const ProductChart& pc, const SpanningFrame& f, Factor side);

/// Product structure from records already living on the product chart.
GacxRecord assemble_product_gacx(const GacsRecord& g1, const GacsRecord& g2);
/// Product structure from factor records.
GacxRecord product_gacx(const ProductChart& pc, const GacsRecord& g1, const GacsRecord& g2);

/// G₁ ⊕ G₂.
BundleEndomorphism product_metric(const ProductChart& pc, const BundleEndomorphism& g1,
                                  const BundleEndomorphism& g2);

BundleEndomorphism commutator(const BundleEndomorphism& a, const BundleEndomorphism& b);

/// 𝒥₁𝒥₂ and 𝒥₂𝒥₁ assembled per factor as ΦΦ̃ − E₊⊗Ẽ₋ − E₋⊗Ẽ₊.
struct ClosedFormProducts {
    BundleEndomorphism j1j2;
    BundleEndomorphism j2j1;
};
ClosedFormProducts commutator_closed_form(const ProductChart& pc, const GacsRecord& g1, const GacsRecord& g2,
                                          const GacsRecord& t1, const GacsRecord& t2);

/// Closed forms against direct composition of the two product structures.
CheckReport check_closed_forms(const ProductChart& pc, const GacsRecord& g1, const GacsRecord& g2,
                               const GacsRecord& t1, const GacsRecord& t2, const SamplePlan& plan = {});

struct Theorem1Result {
    bool commute = false;          // [𝒥₁,𝒥₂] below tolerance
    bool stated_condition = false; // ΦᵢΦ̃ᵢ = Φ̃ᵢΦᵢ and one common branch for both factors
    bool relabel_condition = false; // ΦᵢΦ̃ᵢ = Φ̃ᵢΦᵢ and a branch per factor
    double commutator_norm = 0.0;
    CheckReport report;            // passes iff commute == stated_condition

    bool agrees() const { return commute == stated_condition; }
};

Theorem1Result check_theorem1(const ProductChart& pc, const GacsRecord& g1, const GacsRecord& g2,
                              const GacsRecord& t1, const GacsRecord& t2, const SamplePlan& plan = {});

struct Theorem41Result {
    CheckReport kahler;
    CheckReport co_kahler_left;
    CheckReport co_kahler_right;
    bool kahler_pass = false;
    bool factors_pass = false;
    CheckReport report; // passes iff the two verdicts agree

    bool agrees() const { return kahler_pass == factors_pass; }
};

/// 𝒥₁ from (Φ₁,Φ₂), 𝒥₂ = G𝒥₁ with G = G₁ ⊕ G₂, against co-Kähler checks of each factor.
Theorem41Result theorem41_pipeline(const ProductChart& pc, const GacmsRecord& m1, const GacmsRecord& m2,
                                   const Bracket& bracket = Bracket::courant(), const SamplePlan& plan = {});

struct WarpResult {
    ProductChart pc;
    BundleEndomorphism r;       // diag(e^{-t}, e^{t}) on the product bundle
    GacsRecord phi1;            // warped factor 1 records on M₁ with t as a parameter
    GacsRecord phi1_tilde;
    GacsRecord phi2;
    GacsRecord phi2_tilde;
    BundleEndomorphism g1;
    GacxRecord j1;
    GacxRecord j2;              // R G R⁻¹ 𝒥₁
    GacxRecord j2_eq32;         // product formula applied to the tilde data
    CheckReport report;
};

/// Warped product. The left record is a Sasakian-type lift; the right factor must be
/// the (Φ = 0, E₊ = dt, E₋ = ∂t) line model.
WarpResult warp_transform(const ProductChart& pc, const GacmsRecord& left, const GacmsRecord& right,
                          const SamplePlan& plan = {});

/// Closure of the warped Φ̃₁ eigenbundles, lifted to the product, under a bracket.
Classification warp_tilde_closure(const WarpResult& w, const Bracket& bracket, const SamplePlan& plan = {});

}  // namespace gg
