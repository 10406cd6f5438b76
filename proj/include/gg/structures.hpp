#pragma once

#include <optional>

#include "gg/bigtangent.hpp"

namespace gg {

struct CheckReport {
    std::string name;
    bool pass = true;
    double max_residual = 0.0;
    double tolerance = 1e-9;
    Point witness_point;
    std::string witness_detail;
    std::vector<CheckReport> parts;

    /// Leaf report; pass iff residual < tolerance.
    static CheckReport leaf(std::string name, double residual, double tolerance, Point witness = {},
                            std::string detail = {});
    /// Worst case of the parts; pass iff every part passes.
    static CheckReport aggregate(std::string name, std::vector<CheckReport> parts);
    /// Report whose verdict is the negation of `inner` (e.g. "not integrable").
    static CheckReport expect_fail(std::string name, CheckReport inner, double threshold);

    const CheckReport* find(std::string_view part_name) const;
};

class ClassicalPreconditionError : public std::runtime_error {
public:
    ClassicalPreconditionError(const std::string& msg, Point witness)
        : std::runtime_error(msg), witness_(std::move(witness)) {}
    const Point& witness() const { return witness_; }

private:
    Point witness_;
};

class RankDeficiencyError : public std::runtime_error {
public:
    RankDeficiencyError(const std::string& msg, Point witness)
        : std::runtime_error(msg), witness_(std::move(witness)) {}
    const Point& witness() const { return witness_; }

private:
    Point witness_;
};

/// (Φ, E₊, E₋).
struct GacsRecord {
    BundleEndomorphism phi;
    GeneralizedSection e_plus;
    GeneralizedSection e_minus;

    const ChartPtr& chart() const { return phi.chart(); }
};

struct GacmsRecord {
    GacsRecord gacs;
    BundleEndomorphism metric;

    const ChartPtr& chart() const { return gacs.chart(); }
};

struct GacxRecord {
    BundleEndomorphism j;

    const ChartPtr& chart() const { return j.chart(); }
};

/// The bracket used for closure tests: Courant, or derived with a closed 1-form θ.
struct Bracket {
    std::string tag = "courant";
    std::optional<KForm> theta;

    static Bracket courant() { return {}; }
    static Bracket derived(const KForm& theta, std::string name);
    GeneralizedSection operator()(const GeneralizedSection& u, const GeneralizedSection& v,
                                  const SamplePlan& plan) const;
};

enum class Side { Plus, Minus };

struct SpanningFrame {
    std::string label;
    std::vector<GeneralizedSection> sections;
    std::size_t expected_rank = 0;
};

/// Φ+Φ*, Φ² − (−Id + E₊⊗E₋ + E₋⊗E₊), ⟨E±,E±⟩, 2⟨E₊,E₋⟩ − 1, Φ(E±).
CheckReport check_gacs(const GacsRecord& g, const SamplePlan& plan = {});
/// GACS axioms, the compatibility condition, generalized metric axioms and GE₊ = E₋.
CheckReport check_gacms(const GacmsRecord& m, const SamplePlan& plan = {});
/// 𝒥+𝒥* and 𝒥² + Id.
CheckReport check_gacx(const GacxRecord& j, const SamplePlan& plan = {});
/// G* = G, G² = Id, and ⟨G·,·⟩ positive definite.
CheckReport check_generalized_metric(const BundleEndomorphism& g, const SamplePlan& plan = {});

/// P(u) = u − 2⟨E₋,u⟩E₊ − 2⟨E₊,u⟩E₋.
GeneralizedSection project_off(const GacsRecord& g, const GeneralizedSection& u);

/// E^{(1,0)} ⊕ E± with rank equal to the chart dimension at every sample point.
SpanningFrame build_eigenframe(const GacsRecord& g, Side side, const SamplePlan& plan = {});
/// +i eigenbundle {(Id − i𝒥)e_j}.
SpanningFrame build_eigenframe(const GacxRecord& j, const SamplePlan& plan = {});

/// Numeric rank of a frame at a point (relative singular-value threshold 1e-8).
std::size_t frame_rank(const SpanningFrame& f, std::span<const double> point);

/// Every pairwise bracket lies in the pointwise span of the frame.
CheckReport check_closed(const SpanningFrame& frame, const Bracket& bracket, const SamplePlan& plan = {});

struct Classification {
    bool contact = false;
    bool strong = false;
    bool normal = false;
    CheckReport l_plus;
    CheckReport l_minus;
    CheckReport e_bracket;

    std::string label() const;
};

Classification classify_gacs(const GacsRecord& g, const Bracket& bracket = Bracket::courant(),
                             const SamplePlan& plan = {});

CheckReport check_integrable_gacx(const GacxRecord& j, const Bracket& bracket = Bracket::courant(),
                                  const SamplePlan& plan = {});

/// Commutation, integrability of both, and the generalized metric −𝒥₁𝒥₂.
CheckReport check_generalized_kahler(const GacxRecord& j1, const GacxRecord& j2,
                                     const Bracket& bracket = Bracket::courant(), const SamplePlan& plan = {});

/// (GΦ, E₋, E₊) with the same metric.
GacmsRecord tilde(const GacmsRecord& m);

/// ΦΦ̃ = Φ̃Φ and both records normal under the bracket.
CheckReport check_co_kahler(const GacmsRecord& m, const Bracket& bracket = Bracket::courant(),
                            const SamplePlan& plan = {});

/// (φ 0; 0 −φᵀ), E₊ = ξ, E₋ = η, G = (0 g⁻¹; g 0).
GacmsRecord lift_almost_contact(const FieldMatrix& phi, const VectorField& xi, const KForm& eta,
                                const MetricTensor& g, const SamplePlan& plan = {});
/// (0 π; ω♭ 0) with ρ = ω♭ − η⊗η and π = −ρ⁻ᵀ W ρ⁻¹; E₊ = η, E₋ = ξ. ω defaults to dη.
GacsRecord lift_contact(const KForm& eta, const VectorField& xi, const SamplePlan& plan = {},
                        const std::optional<KForm>& omega = std::nullopt);
/// 𝒥_J = (−J 0; 0 Jᵀ).
GacxRecord lift_complex(const FieldMatrix& j, const SamplePlan& plan = {});
/// 𝒥_ω = (0 −ω♭⁻¹; ω♭ 0).
GacxRecord lift_symplectic(const KForm& omega, const SamplePlan& plan = {});
/// G = (0 g⁻¹; g 0).
BundleEndomorphism metric_lift(const MetricTensor& g, const SamplePlan& plan = {});

/// Asserts that the tensor convention makes Φ² vanish on E₊ for a reference record.
bool tensor_convention_self_test();

}  // namespace gg
