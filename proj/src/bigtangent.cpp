#include "gg/bigtangent.hpp"

namespace gg {

// ---------------------------------------------------------------------------
// GeneralizedSection

GeneralizedSection::GeneralizedSection(VectorField x, KForm alpha) : vec(std::move(x)), form(std::move(alpha)) {
    require_same_chart(vec.chart(), form.chart(), "generalized section");
    if (form.degree() != 1) throw DegreeError("form part of a generalized section must be a one-form");
}

GeneralizedSection GeneralizedSection::zero(const ChartPtr& chart) {
    return {VectorField::zero(chart), KForm::zero(chart, 1)};
}

GeneralizedSection GeneralizedSection::from_vector(const VectorField& x) { return {x, KForm::zero(x.chart(), 1)}; }

GeneralizedSection GeneralizedSection::from_form(const KForm& alpha) {
    return {VectorField::zero(alpha.chart()), alpha};
}

GeneralizedSection GeneralizedSection::basis(const ChartPtr& chart, std::size_t index) {
    std::size_t n = chart->dim();
    if (index < n) return from_vector(VectorField::coordinate(chart, index));
    return from_form(KForm::coordinate(chart, index - n));
}

GeneralizedSection GeneralizedSection::from_column(const ChartPtr& chart, const std::vector<ScalarField>& col) {
    std::size_t n = chart->dim();
    if (col.size() != 2 * n) throw std::invalid_argument("section column must have 2n entries");
    return {VectorField(chart, {col.begin(), col.begin() + n}), KForm(chart, 1, {col.begin() + n, col.end()})};
}

std::vector<ScalarField> GeneralizedSection::column() const {
    std::vector<ScalarField> c = vec.components();
    c.insert(c.end(), form.components().begin(), form.components().end());
    return c;
}

CVector GeneralizedSection::evaluate(std::span<const double> point) const {
    std::vector<Complex> v = Tape(column()).evaluate(point);
    return Eigen::Map<CVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

GeneralizedSection operator+(const GeneralizedSection& a, const GeneralizedSection& b) {
    return {a.vec + b.vec, a.form + b.form};
}

GeneralizedSection operator-(const GeneralizedSection& a, const GeneralizedSection& b) {
    return {a.vec - b.vec, a.form - b.form};
}

GeneralizedSection operator*(const ScalarField& s, const GeneralizedSection& a) { return {s * a.vec, s * a.form}; }

// ---------------------------------------------------------------------------
// BundleEndomorphism

BundleEndomorphism::BundleEndomorphism(FieldMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() != 2 * m_.chart()->dim())
        throw std::invalid_argument("bundle endomorphism must be 2n x 2n on chart '" + m_.chart()->id() + "'");
}

BundleEndomorphism::BundleEndomorphism(const FieldMatrix& a, const FieldMatrix& pi, const FieldMatrix& sigma,
                                       const FieldMatrix& b)
    : BundleEndomorphism(block_matrix(a, pi, sigma, b)) {}

BundleEndomorphism BundleEndomorphism::zero(const ChartPtr& chart) {
    return BundleEndomorphism(FieldMatrix::zero(chart, 2 * chart->dim(), 2 * chart->dim()));
}

BundleEndomorphism BundleEndomorphism::identity(const ChartPtr& chart) {
    return BundleEndomorphism(FieldMatrix::identity(chart, 2 * chart->dim()));
}

GeneralizedSection BundleEndomorphism::apply(const GeneralizedSection& u) const {
    require_same_chart(chart(), u.chart(), "endomorphism application");
    std::vector<ScalarField> col = u.column();
    std::vector<ScalarField> out(col.size(), ScalarField::zero(chart()));
    for (std::size_t i = 0; i < col.size(); ++i) {
        ScalarField s = ScalarField::zero(chart());
        for (std::size_t j = 0; j < col.size(); ++j)
            if (!m_(i, j).is_zero() && !col[j].is_zero()) s += m_(i, j) * col[j];
        out[i] = s;
    }
    return GeneralizedSection::from_column(chart(), out);
}

BundleEndomorphism operator+(const BundleEndomorphism& x, const BundleEndomorphism& y) {
    return BundleEndomorphism(x.m_ + y.m_);
}
BundleEndomorphism operator-(const BundleEndomorphism& x, const BundleEndomorphism& y) {
    return BundleEndomorphism(x.m_ - y.m_);
}
BundleEndomorphism operator*(const BundleEndomorphism& x, const BundleEndomorphism& y) {
    return BundleEndomorphism(x.m_ * y.m_);
}
BundleEndomorphism operator*(Complex c, const BundleEndomorphism& x) { return BundleEndomorphism(c * x.m_); }
BundleEndomorphism operator*(const ScalarField& s, const BundleEndomorphism& x) {
    return BundleEndomorphism(s * x.m_);
}
BundleEndomorphism operator-(const BundleEndomorphism& x) { return BundleEndomorphism(-x.m_); }

// ---------------------------------------------------------------------------
// Pairing and brackets

ScalarField pairing(const GeneralizedSection& u, const GeneralizedSection& v) {
    require_same_chart(u.chart(), v.chart(), "pairing");
    return 0.5 * (contract(v.form, u.vec) + contract(u.form, v.vec));
}

CMatrix pairing_matrix(std::size_t n) {
    CMatrix q = CMatrix::Zero(2 * n, 2 * n);
    q.topRightCorner(n, n).setIdentity();
    q.bottomLeftCorner(n, n).setIdentity();
    return q;
}

GeneralizedSection courant_bracket(const GeneralizedSection& u, const GeneralizedSection& v) {
    require_same_chart(u.chart(), v.chart(), "Courant bracket");
    VectorField xy = lie_bracket(u.vec, v.vec);
    KForm f = lie_derivative(u.vec, v.form) - lie_derivative(v.vec, u.form);
    KForm iota = KForm::scalar(contract(v.form, u.vec) - contract(u.form, v.vec));
    f = f - ScalarField::constant(u.chart(), 0.5) * exterior_derivative(iota);
    return {xy, f};
}

KForm twisted_d(const KForm& w, const KForm& theta) {
    require_same_chart(w.chart(), theta.chart(), "twisted differential");
    if (theta.degree() != 1) throw DegreeError("twisting form must be a one-form");
    KForm dw = exterior_derivative(w);
    if (theta.is_zero()) return dw;
    return dw - wedge(theta, w);
}

KForm twisted_iota_d(const VectorField& x, const KForm& w, const KForm& theta) {
    if (w.degree() >= static_cast<int>(w.dim())) return KForm::zero(w.chart(), w.degree());
    return interior_product(x, twisted_d(w, theta));
}

KForm twisted_lie_derivative(const VectorField& x, const KForm& w, const KForm& theta) {
    KForm out = twisted_iota_d(x, w, theta);
    if (w.degree() > 0) out = out + twisted_d(interior_product(x, w), theta);
    return out;
}

void require_closed(const KForm& w, const SamplePlan& plan) {
    if (w.degree() >= static_cast<int>(w.dim())) return;
    KForm dw = exterior_derivative(w);
    if (dw.is_zero()) return;
    Tape tape(dw.components());
    for (const Point& p : sample_points(*w.chart(), plan)) {
        for (Complex c : tape.evaluate(p))
            if (std::abs(c) > plan.tolerance)
                throw NonClosedFormError("form is not closed: |d| = " + std::to_string(std::abs(c)), p);
    }
}

GeneralizedSection derived_courant_bracket(const GeneralizedSection& u, const GeneralizedSection& v,
                                           const KForm& theta, const SamplePlan& plan) {
    require_same_chart(u.chart(), v.chart(), "derived bracket");
    require_closed(theta, plan);
    if (theta.is_zero()) return courant_bracket(u, v);
    VectorField xy = lie_bracket(u.vec, v.vec);
    KForm f = twisted_lie_derivative(u.vec, v.form, theta) - twisted_lie_derivative(v.vec, u.form, theta);
    KForm iota = KForm::scalar(contract(v.form, u.vec) - contract(u.form, v.vec));
    f = f - ScalarField::constant(u.chart(), 0.5) * twisted_d(iota, theta);
    return {xy, f};
}

// ---------------------------------------------------------------------------
// Endomorphism constructions

BundleEndomorphism adjoint(const BundleEndomorphism& m) {
    return BundleEndomorphism(m.b().transpose(), m.pi().transpose(), m.sigma().transpose(), m.a().transpose());
}

BundleEndomorphism tensor_endo(const GeneralizedSection& a, const GeneralizedSection& b) {
    require_same_chart(a.chart(), b.chart(), "tensor product");
    // 2⟨b,u⟩ = b_form·u_vec + b_vec·u_form, so the row vector is Q b.
    std::size_t n = a.dim();
    std::vector<ScalarField> ac = a.column(), bc = b.column();
    FieldMatrix m(a.chart(), 2 * n, 2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = 0; j < 2 * n; ++j) {
            const ScalarField& qb = bc[j < n ? j + n : j - n];
            if (!ac[i].is_zero() && !qb.is_zero()) m(i, j) = ac[i] * qb;
        }
    return BundleEndomorphism(m);
}

FieldMatrix flat(const KForm& w) { return w.as_matrix().transpose(); }

BundleEndomorphism bfield(const KForm& b) {
    const ChartPtr& c = b.chart();
    std::size_t n = c->dim();
    return BundleEndomorphism(FieldMatrix::identity(c, n), FieldMatrix::zero(c, n, n), flat(b),
                              FieldMatrix::identity(c, n));
}

BundleEndomorphism bfield_transform(const BundleEndomorphism& m, const KForm& b, const SamplePlan& plan) {
    if (b.degree() != 2) throw DegreeError("B-field must be a two-form");
    require_closed(b, plan);
    return bfield(b) * m * bfield(-b);
}

BundleEndomorphism block_diag(const FieldMatrix& m, const FieldMatrix& n) {
    return BundleEndomorphism(m, FieldMatrix::zero(m.chart(), m.rows(), n.cols()),
                              FieldMatrix::zero(m.chart(), n.rows(), m.cols()), n);
}

}  // namespace gg
