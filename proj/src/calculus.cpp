#include "gg/calculus.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace gg {

void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* what) {
    if (a == b) return;
    if (!a || !b || a->id() != b->id() || a->vars() != b->vars())
        throw ChartMismatchError(std::string(what) + ": operands live on different charts ('" +
                                 (a ? a->id() : "?") + "' vs '" + (b ? b->id() : "?") + "')");
}

// ---------------------------------------------------------------------------
// FieldMatrix

FieldMatrix::FieldMatrix(ChartPtr chart, std::size_t rows, std::size_t cols)
    : chart_(std::move(chart)), rows_(rows), cols_(cols), data_(rows * cols, ScalarField::zero(chart_)) {}

FieldMatrix FieldMatrix::zero(ChartPtr chart, std::size_t rows, std::size_t cols) {
    return FieldMatrix(std::move(chart), rows, cols);
}

FieldMatrix FieldMatrix::identity(ChartPtr chart, std::size_t n) {
    FieldMatrix m(chart, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarField::one(chart);
    return m;
}

FieldMatrix FieldMatrix::from_strings(const ChartPtr& chart,
                                      const std::vector<std::vector<std::string>>& rows) {
    std::size_t nr = rows.size();
    std::size_t nc = nr ? rows[0].size() : 0;
    FieldMatrix m(chart, nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        if (rows[i].size() != nc) throw std::invalid_argument("ragged matrix rows");
        for (std::size_t j = 0; j < nc; ++j) m(i, j) = parse(rows[i][j], chart);
    }
    return m;
}

FieldMatrix FieldMatrix::transpose() const {
    FieldMatrix t(chart_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

FieldMatrix FieldMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    FieldMatrix b(chart_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

void FieldMatrix::set_block(std::size_t r0, std::size_t c0, const FieldMatrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

CMatrix FieldMatrix::evaluate(std::span<const double> point) const {
    std::vector<Complex> vals = Tape(data_).evaluate(point);
    CMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(i, j) = vals[i * cols_ + j];
    return out;
}

static void require_shape(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix shape mismatch");
    require_same_chart(a.chart(), b.chart(), "matrix arithmetic");
}

FieldMatrix operator+(const FieldMatrix& a, const FieldMatrix& b) {
    require_shape(a, b);
    FieldMatrix r = a;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = a.data_[k] + b.data_[k];
    return r;
}

FieldMatrix operator-(const FieldMatrix& a, const FieldMatrix& b) {
    require_shape(a, b);
    FieldMatrix r = a;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = a.data_[k] - b.data_[k];
    return r;
}

FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    require_same_chart(a.chart(), b.chart(), "matrix product");
    FieldMatrix r(a.chart(), a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            ScalarField s = ScalarField::zero(a.chart());
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

FieldMatrix operator*(const ScalarField& s, const FieldMatrix& a) {
    FieldMatrix r = a;
    for (auto& e : r.data_) e = s * e;
    return r;
}

FieldMatrix operator*(Complex c, const FieldMatrix& a) {
    FieldMatrix r = a;
    for (auto& e : r.data_) e = c * e;
    return r;
}

FieldMatrix operator-(const FieldMatrix& a) {
    FieldMatrix r = a;
    for (auto& e : r.data_) e = -e;
    return r;
}

FieldMatrix block_matrix(const FieldMatrix& a, const FieldMatrix& b, const FieldMatrix& c,
                         const FieldMatrix& d) {
    if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols())
        throw std::invalid_argument("block shapes do not tile");
    FieldMatrix m(a.chart(), a.rows() + c.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    m.set_block(a.rows(), 0, c);
    m.set_block(a.rows(), a.cols(), d);
    return m;
}

namespace {

// Laplace expansion over the rows in `rows` and the columns flagged free.
ScalarField minor_det(const FieldMatrix& m, std::size_t row, std::vector<bool>& used,
                      std::map<std::vector<bool>, ScalarField>& memo) {
    std::size_t n = m.rows();
    if (row == n) return ScalarField::one(m.chart());
    auto it = memo.find(used);
    if (it != memo.end()) return it->second;
    ScalarField acc = ScalarField::zero(m.chart());
    int sign = 1;
    for (std::size_t j = 0; j < n; ++j) {
        if (used[j]) continue;
        if (!m(row, j).is_zero()) {
            used[j] = true;
            ScalarField sub = minor_det(m, row + 1, used, memo);
            used[j] = false;
            ScalarField term = m(row, j) * sub;
            acc = sign > 0 ? acc + term : acc - term;
        }
        sign = -sign;
    }
    memo.emplace(used, acc);
    return acc;
}

}  // namespace

ScalarField determinant(const FieldMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    std::vector<bool> used(m.cols(), false);
    std::map<std::vector<bool>, ScalarField> memo;
    return minor_det(m, 0, used, memo);
}

FieldMatrix invert_matrix_field(const FieldMatrix& m, const SamplePlan& plan) {
    std::size_t n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    ScalarField det = determinant(m);
    Tape tape({det});
    for (const Point& p : sample_points(*m.chart(), plan)) {
        Complex d = tape.evaluate(p)[0];
        if (std::abs(d) < plan.tolerance) {
            std::string where;
            for (std::size_t k = 0; k < p.size(); ++k)
                where += (k ? ", " : "") + m.chart()->vars()[k] + "=" + std::to_string(p[k]);
            throw SingularMatrixError("determinant vanishes at (" + where + ")", p);
        }
    }
    FieldMatrix inv(m.chart(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            // inv(i,j) = (-1)^{i+j} minor(j,i) / det
            FieldMatrix sub(m.chart(), n - 1, n - 1);
            for (std::size_t r = 0, rr = 0; r < n; ++r) {
                if (r == j) continue;
                for (std::size_t c = 0, cc = 0; c < n; ++c) {
                    if (c == i) continue;
                    sub(rr, cc++) = m(r, c);
                }
                ++rr;
            }
            ScalarField cof = n == 1 ? ScalarField::one(m.chart()) : determinant(sub);
            if ((i + j) % 2) cof = -cof;
            inv(i, j) = cof.is_zero() ? cof : cof / det;
        }
    return inv;
}

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(ChartPtr chart, std::vector<ScalarField> components)
    : chart_(std::move(chart)), comps_(std::move(components)) {
    if (comps_.size() != chart_->dim())
        throw std::invalid_argument("vector field on '" + chart_->id() + "' needs " +
                                    std::to_string(chart_->dim()) + " components");
}

VectorField VectorField::zero(const ChartPtr& chart) {
    return VectorField(chart, std::vector<ScalarField>(chart->dim(), ScalarField::zero(chart)));
}

VectorField VectorField::coordinate(const ChartPtr& chart, std::size_t i) {
    VectorField v = zero(chart);
    v.comps_.at(i) = ScalarField::one(chart);
    return v;
}

VectorField VectorField::from_strings(const ChartPtr& chart, const std::vector<std::string>& comps) {
    std::vector<ScalarField> c;
    for (const auto& s : comps) c.push_back(parse(s, chart));
    return VectorField(chart, std::move(c));
}

ScalarField VectorField::apply(const ScalarField& f) const {
    require_same_chart(chart_, f.chart(), "vector field action");
    ScalarField acc = ScalarField::zero(chart_);
    for (std::size_t i = 0; i < comps_.size(); ++i)
        if (!comps_[i].is_zero()) acc += comps_[i] * f.differentiate(static_cast<int>(i));
    return acc;
}

CVector VectorField::evaluate(std::span<const double> point) const {
    std::vector<Complex> vals = Tape(comps_).evaluate(point);
    return Eigen::Map<CVector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    require_same_chart(a.chart(), b.chart(), "vector sum");
    VectorField r = a;
    for (std::size_t i = 0; i < r.dim(); ++i) r[i] = a[i] + b[i];
    return r;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    require_same_chart(a.chart(), b.chart(), "vector difference");
    VectorField r = a;
    for (std::size_t i = 0; i < r.dim(); ++i) r[i] = a[i] - b[i];
    return r;
}

VectorField operator*(const ScalarField& s, const VectorField& a) {
    VectorField r = a;
    for (std::size_t i = 0; i < r.dim(); ++i) r[i] = s * a[i];
    return r;
}

VectorField operator*(const FieldMatrix& m, const VectorField& a) {
    if (m.cols() != a.dim() || m.rows() != a.dim()) throw std::invalid_argument("endomorphism shape mismatch");
    VectorField r = VectorField::zero(a.chart());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ScalarField s = ScalarField::zero(a.chart());
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * a[j];
        r[i] = s;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Combinatorics

const std::vector<std::vector<int>>& combinations(int n, int k) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::vector<int>> out;
    if (k >= 0 && k <= n) {
        std::vector<int> c(k);
        for (int i = 0; i < k; ++i) c[i] = i;
        while (true) {
            out.push_back(c);
            int i = k - 1;
            while (i >= 0 && c[i] == n - k + i) --i;
            if (i < 0) break;
            ++c[i];
            for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
        }
    }
    return cache.emplace(key, std::move(out)).first->second;
}

std::size_t combination_rank(int n, const std::vector<int>& tuple) {
    const auto& all = combinations(n, static_cast<int>(tuple.size()));
    auto it = std::lower_bound(all.begin(), all.end(), tuple);
    if (it == all.end() || *it != tuple) throw std::invalid_argument("tuple is not strictly increasing");
    return static_cast<std::size_t>(it - all.begin());
}

namespace {

// Sorts idx in place and returns the permutation sign, or 0 on a repeat.
int sort_sign(std::vector<int>& idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
            if (idx[j - 1] == idx[j]) return 0;
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (idx[i - 1] == idx[i]) return 0;
    return sign;
}

}  // namespace

// ---------------------------------------------------------------------------
// KForm

KForm::KForm(ChartPtr chart, int degree, std::vector<ScalarField> components)
    : chart_(std::move(chart)), degree_(degree), comps_(std::move(components)) {
    int n = static_cast<int>(chart_->dim());
    if (degree_ < 0 || degree_ > n)
        throw DegreeError("form degree " + std::to_string(degree_) + " out of range on a " +
                          std::to_string(n) + "-dimensional chart");
    if (comps_.size() != combinations(n, degree_).size())
        throw std::invalid_argument("wrong number of form components");
}

KForm KForm::zero(const ChartPtr& chart, int degree) {
    int n = static_cast<int>(chart->dim());
    std::size_t count = (degree >= 0 && degree <= n) ? combinations(n, degree).size() : 0;
    return KForm(chart, degree, std::vector<ScalarField>(count, ScalarField::zero(chart)));
}

KForm KForm::scalar(const ScalarField& f) { return KForm(f.chart(), 0, {f}); }

KForm KForm::coordinate(const ChartPtr& chart, std::size_t i) {
    KForm w = zero(chart, 1);
    w.comps_.at(i) = ScalarField::one(chart);
    return w;
}

KForm KForm::one_form(const ChartPtr& chart, const std::vector<ScalarField>& coeffs) {
    return KForm(chart, 1, coeffs);
}

KForm KForm::one_form(const ChartPtr& chart, const std::vector<std::string>& coeffs) {
    std::vector<ScalarField> c;
    for (const auto& s : coeffs) c.push_back(parse(s, chart));
    return KForm(chart, 1, std::move(c));
}

KForm KForm::two_form(const FieldMatrix& w) {
    int n = static_cast<int>(w.rows());
    std::vector<ScalarField> c;
    for (const auto& t : combinations(n, 2)) c.push_back(w(t[0], t[1]));
    return KForm(w.chart(), 2, std::move(c));
}

ScalarField KForm::component(const std::vector<int>& idx) const {
    std::vector<int> s = idx;
    int sign = sort_sign(s);
    if (sign == 0) return ScalarField::zero(chart_);
    const ScalarField& c = component_sorted(s);
    return sign > 0 ? c : -c;
}

const ScalarField& KForm::component_sorted(const std::vector<int>& idx) const {
    return comps_[combination_rank(static_cast<int>(dim()), idx)];
}

bool KForm::is_zero() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const ScalarField& f) { return f.is_zero(); });
}

const ScalarField& KForm::as_scalar() const {
    if (degree_ != 0) throw DegreeError("form is not a scalar");
    return comps_[0];
}

std::vector<ScalarField> KForm::as_covector() const {
    if (degree_ != 1) throw DegreeError("form is not a one-form");
    return comps_;
}

FieldMatrix KForm::as_matrix() const {
    if (degree_ != 2) throw DegreeError("form is not a two-form");
    int n = static_cast<int>(dim());
    FieldMatrix w(chart_, n, n);
    const auto& combos = combinations(n, 2);
    for (std::size_t k = 0; k < combos.size(); ++k) {
        w(combos[k][0], combos[k][1]) = comps_[k];
        w(combos[k][1], combos[k][0]) = -comps_[k];
    }
    return w;
}

CVector KForm::evaluate(std::span<const double> point) const {
    std::vector<Complex> vals = Tape(comps_).evaluate(point);
    return Eigen::Map<CVector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Complex KForm::evaluate_on(std::span<const double> point, const std::vector<CVector>& vectors) const {
    if (static_cast<int>(vectors.size()) != degree_) throw DegreeError("wrong number of vector arguments");
    CVector c = evaluate(point);
    const auto& combos = combinations(static_cast<int>(dim()), degree_);
    Complex total = 0.0;
    // ω(v_1..v_k) = Σ_I ω_I det[v_a(I_b)]
    for (std::size_t r = 0; r < combos.size(); ++r) {
        if (c[r] == Complex(0.0)) continue;
        CMatrix m(degree_, degree_);
        for (int a = 0; a < degree_; ++a)
            for (int b = 0; b < degree_; ++b) m(a, b) = vectors[a][combos[r][b]];
        total += c[r] * (degree_ ? m.determinant() : Complex(1.0));
    }
    return total;
}

static void require_same_degree(const KForm& a, const KForm& b) {
    if (a.degree() != b.degree()) throw DegreeError("adding forms of different degree");
    require_same_chart(a.chart(), b.chart(), "form arithmetic");
}

KForm operator+(const KForm& a, const KForm& b) {
    require_same_degree(a, b);
    std::vector<ScalarField> c(a.components().size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.components()[k] + b.components()[k];
    return KForm(a.chart(), a.degree(), std::move(c));
}

KForm operator-(const KForm& a, const KForm& b) {
    require_same_degree(a, b);
    std::vector<ScalarField> c(a.components().size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.components()[k] - b.components()[k];
    return KForm(a.chart(), a.degree(), std::move(c));
}

KForm operator-(const KForm& a) {
    std::vector<ScalarField> c = a.components();
    for (auto& e : c) e = -e;
    return KForm(a.chart(), a.degree(), std::move(c));
}

KForm operator*(const ScalarField& s, const KForm& a) {
    std::vector<ScalarField> c = a.components();
    for (auto& e : c) e = s * e;
    return KForm(a.chart(), a.degree(), std::move(c));
}

// ---------------------------------------------------------------------------
// MetricTensor

MetricTensor::MetricTensor(const FieldMatrix& g) : g_(g) {
    if (g.rows() != g.cols()) throw std::invalid_argument("metric must be square");
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = i + 1; j < g.cols(); ++j) g_(j, i) = g_(i, j);
}

double MetricTensor::min_eigenvalue(const SamplePlan& plan, Point* witness) const {
    Tape tape(g_.entries());
    std::size_t n = dim();
    double best = std::numeric_limits<double>::infinity();
    for (const Point& p : sample_points(*chart(), plan)) {
        std::vector<Complex> v = tape.evaluate(p);
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i * n + j];
        CMatrix h = 0.5 * (m + m.adjoint());
        double lo = Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
        if (lo < best) {
            best = lo;
            if (witness) *witness = p;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Operations

KForm exterior_derivative(const KForm& w) {
    int n = static_cast<int>(w.dim());
    int k = w.degree();
    if (k >= n) throw DegreeError("exterior derivative of a top-degree form");
    const auto& src = combinations(n, k);
    KForm out = KForm::zero(w.chart(), k + 1);
    std::vector<ScalarField> c = out.components();
    for (std::size_t r = 0; r < src.size(); ++r) {
        const ScalarField& f = w.components()[r];
        if (f.is_constant()) continue;
        for (int j = 0; j < n; ++j) {
            std::vector<int> idx{j};
            idx.insert(idx.end(), src[r].begin(), src[r].end());
            int sign = sort_sign(idx);
            if (sign == 0) continue;
            ScalarField df = f.differentiate(j);
            if (df.is_zero()) continue;
            std::size_t t = combination_rank(n, idx);
            c[t] = sign > 0 ? c[t] + df : c[t] - df;
        }
    }
    return KForm(w.chart(), k + 1, std::move(c));
}

KForm interior_product(const VectorField& x, const KForm& w) {
    require_same_chart(x.chart(), w.chart(), "interior product");
    int n = static_cast<int>(w.dim());
    int k = w.degree();
    if (k == 0) throw DegreeError("interior product of a zero-form");
    const auto& dst = combinations(n, k - 1);
    std::vector<ScalarField> c(dst.size(), ScalarField::zero(w.chart()));
    for (std::size_t r = 0; r < dst.size(); ++r) {
        ScalarField acc = ScalarField::zero(w.chart());
        for (int i = 0; i < n; ++i) {
            if (x[i].is_zero()) continue;
            std::vector<int> idx{i};
            idx.insert(idx.end(), dst[r].begin(), dst[r].end());
            ScalarField comp = w.component(idx);
            if (!comp.is_zero()) acc += x[i] * comp;
        }
        c[r] = acc;
    }
    return KForm(w.chart(), k - 1, std::move(c));
}

KForm lie_derivative(const VectorField& x, const KForm& w) {
    require_same_chart(x.chart(), w.chart(), "Lie derivative");
    int n = static_cast<int>(w.dim());
    if (w.degree() == 0) return KForm::scalar(x.apply(w.as_scalar()));
    KForm out = exterior_derivative(interior_product(x, w));
    if (w.degree() < n) out = out + interior_product(x, exterior_derivative(w));
    return out;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
    require_same_chart(x.chart(), y.chart(), "Lie bracket");
    VectorField r = VectorField::zero(x.chart());
    for (std::size_t i = 0; i < x.dim(); ++i) r[i] = x.apply(y[i]) - y.apply(x[i]);
    return r;
}

KForm wedge(const KForm& a, const KForm& b) {
    require_same_chart(a.chart(), b.chart(), "wedge");
    int n = static_cast<int>(a.dim());
    int k = a.degree() + b.degree();
    if (k > n) throw DegreeError("wedge degree " + std::to_string(k) + " exceeds chart dimension");
    const auto& ca = combinations(n, a.degree());
    const auto& cb = combinations(n, b.degree());
    KForm out = KForm::zero(a.chart(), k);
    std::vector<ScalarField> c = out.components();
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (a.components()[i].is_zero()) continue;
        for (std::size_t j = 0; j < cb.size(); ++j) {
            if (b.components()[j].is_zero()) continue;
            std::vector<int> idx = ca[i];
            idx.insert(idx.end(), cb[j].begin(), cb[j].end());
            int sign = sort_sign(idx);
            if (sign == 0) continue;
            ScalarField term = a.components()[i] * b.components()[j];
            std::size_t t = combination_rank(n, idx);
            c[t] = sign > 0 ? c[t] + term : c[t] - term;
        }
    }
    return KForm(a.chart(), k, std::move(c));
}

ScalarField contract(const KForm& alpha, const VectorField& x) {
    return interior_product(x, alpha).as_scalar();
}

}  // namespace gg
