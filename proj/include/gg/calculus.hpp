#pragma once

#include <Eigen/Dense>

#include "gg/expr.hpp"

namespace gg {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& msg, Point witness)
        : std::runtime_error(msg), witness_(std::move(witness)) {}
    const Point& witness() const { return witness_; }

private:
    Point witness_;
};

class DegreeError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Row-major matrix of scalar fields on one chart.
class FieldMatrix {
public:
    FieldMatrix() = default;
    FieldMatrix(ChartPtr chart, std::size_t rows, std::size_t cols);

    static FieldMatrix zero(ChartPtr chart, std::size_t rows, std::size_t cols);
    static FieldMatrix identity(ChartPtr chart, std::size_t n);
    static FieldMatrix from_strings(const ChartPtr& chart,
                                    const std::vector<std::vector<std::string>>& rows);

    const ChartPtr& chart() const { return chart_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    ScalarField& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const ScalarField& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    FieldMatrix transpose() const;
    FieldMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const FieldMatrix& b);

    CMatrix evaluate(std::span<const double> point) const;
    const std::vector<ScalarField>& entries() const { return data_; }

    friend FieldMatrix operator+(const FieldMatrix& a, const FieldMatrix& b);
    friend FieldMatrix operator-(const FieldMatrix& a, const FieldMatrix& b);
    friend FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b);
    friend FieldMatrix operator*(const ScalarField& s, const FieldMatrix& a);
    friend FieldMatrix operator*(Complex c, const FieldMatrix& a);
    friend FieldMatrix operator-(const FieldMatrix& a);

private:
    ChartPtr chart_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<ScalarField> data_;
};

/// Block matrix [[a, b], [c, d]].
FieldMatrix block_matrix(const FieldMatrix& a, const FieldMatrix& b, const FieldMatrix& c,
                         const FieldMatrix& d);

ScalarField determinant(const FieldMatrix& m);

/// Adjugate over determinant. The determinant is checked at the plan's sample
/// points; a value below plan.tolerance raises SingularMatrixError.
FieldMatrix invert_matrix_field(const FieldMatrix& m, const SamplePlan& plan = {});

class VectorField {
public:
    VectorField() = default;
    VectorField(ChartPtr chart, std::vector<ScalarField> components);

    static VectorField zero(const ChartPtr& chart);
    static VectorField coordinate(const ChartPtr& chart, std::size_t i);
    static VectorField from_strings(const ChartPtr& chart, const std::vector<std::string>& comps);

    const ChartPtr& chart() const { return chart_; }
    std::size_t dim() const { return comps_.size(); }
    const ScalarField& operator[](std::size_t i) const { return comps_[i]; }
    ScalarField& operator[](std::size_t i) { return comps_[i]; }
    const std::vector<ScalarField>& components() const { return comps_; }

    /// Derivative of f along this field.
    ScalarField apply(const ScalarField& f) const;
    CVector evaluate(std::span<const double> point) const;

    friend VectorField operator+(const VectorField& a, const VectorField& b);
    friend VectorField operator-(const VectorField& a, const VectorField& b);
    friend VectorField operator*(const ScalarField& s, const VectorField& a);
    friend VectorField operator*(const FieldMatrix& m, const VectorField& a);

private:
    ChartPtr chart_;
    std::vector<ScalarField> comps_;
};

/// Strictly increasing index tuples of size k from {0..n-1}, lexicographic.
const std::vector<std::vector<int>>& combinations(int n, int k);
/// Position of an increasing tuple in combinations(n, tuple.size()).
std::size_t combination_rank(int n, const std::vector<int>& tuple);

class KForm {
public:
    KForm() = default;
    /// Components follow combinations(dim, degree).
    KForm(ChartPtr chart, int degree, std::vector<ScalarField> components);

    static KForm zero(const ChartPtr& chart, int degree);
    static KForm scalar(const ScalarField& f);
    static KForm coordinate(const ChartPtr& chart, std::size_t i);
    /// One-form with the given coefficients of dx_i.
    static KForm one_form(const ChartPtr& chart, const std::vector<ScalarField>& coeffs);
    static KForm one_form(const ChartPtr& chart, const std::vector<std::string>& coeffs);
    /// Two-form from an antisymmetric matrix W with W_ij = ω(∂i, ∂j); only i<j is read.
    static KForm two_form(const FieldMatrix& w);

    const ChartPtr& chart() const { return chart_; }
    int degree() const { return degree_; }
    std::size_t dim() const { return chart_->dim(); }
    const std::vector<ScalarField>& components() const { return comps_; }

    /// Component on an arbitrary tuple; repeated indices give zero, order gives sign.
    ScalarField component(const std::vector<int>& idx) const;
    const ScalarField& component_sorted(const std::vector<int>& idx) const;

    bool is_zero() const;

    /// Degree 0 only.
    const ScalarField& as_scalar() const;
    /// Degree 1 only: coefficient vector.
    std::vector<ScalarField> as_covector() const;
    /// Degree 2 only: W_ij = ω(∂i, ∂j).
    FieldMatrix as_matrix() const;

    /// Evaluated component array on increasing tuples.
    CVector evaluate(std::span<const double> point) const;
    /// ω(v_1, ..., v_k) at a point for numeric vectors.
    Complex evaluate_on(std::span<const double> point, const std::vector<CVector>& vectors) const;

    friend KForm operator+(const KForm& a, const KForm& b);
    friend KForm operator-(const KForm& a, const KForm& b);
    friend KForm operator-(const KForm& a);
    friend KForm operator*(const ScalarField& s, const KForm& a);

private:
    ChartPtr chart_;
    int degree_ = 0;
    std::vector<ScalarField> comps_;
};

class MetricTensor {
public:
    MetricTensor() = default;
    /// Symmetrizes by copying the upper triangle so g_ij and g_ji share one node.
    explicit MetricTensor(const FieldMatrix& g);

    const FieldMatrix& matrix() const { return g_; }
    const ChartPtr& chart() const { return g_.chart(); }
    std::size_t dim() const { return g_.rows(); }

    /// Smallest eigenvalue of the Hermitian part over the plan's sample points.
    double min_eigenvalue(const SamplePlan& plan, Point* witness = nullptr) const;

private:
    FieldMatrix g_;
};

KForm exterior_derivative(const KForm& w);
KForm interior_product(const VectorField& x, const KForm& w);
KForm lie_derivative(const VectorField& x, const KForm& w);
VectorField lie_bracket(const VectorField& x, const VectorField& y);
KForm wedge(const KForm& a, const KForm& b);

/// One-form pairing α(X) as a scalar field.
ScalarField contract(const KForm& alpha, const VectorField& x);

void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* what);

}  // namespace gg
