#pragma once

#include "gg/calculus.hpp"

namespace gg {

class NonClosedFormError : public std::runtime_error {
public:
    NonClosedFormError(const std::string& msg, Point witness)
        : std::runtime_error(msg), witness_(std::move(witness)) {}
    const Point& witness() const { return witness_; }

private:
    Point witness_;
};

/// X + α in TM ⊕ T*M.
struct GeneralizedSection {
    VectorField vec;
    KForm form;

    GeneralizedSection() = default;
    GeneralizedSection(VectorField x, KForm alpha);

    static GeneralizedSection zero(const ChartPtr& chart);
    static GeneralizedSection from_vector(const VectorField& x);
    static GeneralizedSection from_form(const KForm& alpha);
    /// Basis section: index < n is ∂_i, otherwise dx_{i-n}.
    static GeneralizedSection basis(const ChartPtr& chart, std::size_t index);
    /// From a column of 2n scalar fields (vector part first).
    static GeneralizedSection from_column(const ChartPtr& chart, const std::vector<ScalarField>& col);

    const ChartPtr& chart() const { return vec.chart(); }
    std::size_t dim() const { return vec.dim(); }
    std::vector<ScalarField> column() const;
    CVector evaluate(std::span<const double> point) const;

    friend GeneralizedSection operator+(const GeneralizedSection& a, const GeneralizedSection& b);
    friend GeneralizedSection operator-(const GeneralizedSection& a, const GeneralizedSection& b);
    friend GeneralizedSection operator*(const ScalarField& s, const GeneralizedSection& a);
};

/// Endomorphism of TM ⊕ T*M stored as a 2n×2n matrix in the basis
/// (∂_1..∂_n, dx_1..dx_n). Blocks: A = T→T, pi = T*→T, sigma = T→T*, B = T*→T*.
class BundleEndomorphism {
public:
    BundleEndomorphism() = default;
    explicit BundleEndomorphism(FieldMatrix m);
    BundleEndomorphism(const FieldMatrix& a, const FieldMatrix& pi, const FieldMatrix& sigma,
                       const FieldMatrix& b);

    static BundleEndomorphism zero(const ChartPtr& chart);
    static BundleEndomorphism identity(const ChartPtr& chart);

    const ChartPtr& chart() const { return m_.chart(); }
    std::size_t dim() const { return m_.rows() / 2; }
    const FieldMatrix& matrix() const { return m_; }

    FieldMatrix a() const { return m_.block(0, 0, dim(), dim()); }
    FieldMatrix pi() const { return m_.block(0, dim(), dim(), dim()); }
    FieldMatrix sigma() const { return m_.block(dim(), 0, dim(), dim()); }
    FieldMatrix b() const { return m_.block(dim(), dim(), dim(), dim()); }

    CMatrix evaluate(std::span<const double> point) const { return m_.evaluate(point); }
    GeneralizedSection apply(const GeneralizedSection& u) const;

    friend BundleEndomorphism operator+(const BundleEndomorphism& x, const BundleEndomorphism& y);
    friend BundleEndomorphism operator-(const BundleEndomorphism& x, const BundleEndomorphism& y);
    friend BundleEndomorphism operator*(const BundleEndomorphism& x, const BundleEndomorphism& y);
    friend BundleEndomorphism operator*(Complex c, const BundleEndomorphism& x);
    friend BundleEndomorphism operator*(const ScalarField& s, const BundleEndomorphism& x);
    friend BundleEndomorphism operator-(const BundleEndomorphism& x);

private:
    FieldMatrix m_;
};

inline BundleEndomorphism compose(const BundleEndomorphism& x, const BundleEndomorphism& y) { return x * y; }
inline GeneralizedSection apply(const BundleEndomorphism& m, const GeneralizedSection& u) { return m.apply(u); }

/// ⟨X+α, Y+β⟩ = ½(β(X) + α(Y)).
ScalarField pairing(const GeneralizedSection& u, const GeneralizedSection& v);

/// Numeric pairing matrix Q with ⟨u,v⟩ = ½ uᵀ Q v.
CMatrix pairing_matrix(std::size_t n);

GeneralizedSection courant_bracket(const GeneralizedSection& u, const GeneralizedSection& v);

/// dω − θ∧ω; on functions df − fθ. Top-degree input yields nothing, so callers
/// that contract afterwards use twisted_iota_d instead.
KForm twisted_d(const KForm& w, const KForm& theta);
/// ι_X d_θ ω, zero when d_θ ω would exceed the chart dimension.
KForm twisted_iota_d(const VectorField& x, const KForm& w, const KForm& theta);
/// ι_X d_θ + d_θ ι_X.
KForm twisted_lie_derivative(const VectorField& x, const KForm& w, const KForm& theta);

/// Throws NonClosedFormError unless dω vanishes symbolically or below
/// plan.tolerance at every sample point.
void require_closed(const KForm& w, const SamplePlan& plan = {});

/// Courant bracket with d replaced by d_θ throughout. θ must be closed.
GeneralizedSection derived_courant_bracket(const GeneralizedSection& u, const GeneralizedSection& v,
                                           const KForm& theta, const SamplePlan& plan = {});

/// Blocks (A, π, σ, B) map to (Bᵀ, πᵀ, σᵀ, Aᵀ).
BundleEndomorphism adjoint(const BundleEndomorphism& m);

/// (a⊗b)(u) = 2⟨b,u⟩ a.
BundleEndomorphism tensor_endo(const GeneralizedSection& a, const GeneralizedSection& b);

/// e^B with e^B(X+ξ) = X + ξ + ι_X B.
BundleEndomorphism bfield(const KForm& b);
/// e^B M e^{-B}; B must be closed.
BundleEndomorphism bfield_transform(const BundleEndomorphism& m, const KForm& b, const SamplePlan& plan = {});

/// Flat map of a 2-form: the T→T* matrix F with F·X = ι_X ω.
FieldMatrix flat(const KForm& w);

/// Block-diagonal lift (M, 0; 0, N).
BundleEndomorphism block_diag(const FieldMatrix& m, const FieldMatrix& n);

}  // namespace gg
