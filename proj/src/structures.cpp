#include "gg/structures.hpp"

#include <algorithm>
#include <cstdio>

namespace gg {

namespace {

constexpr double kRankThreshold = 1e-8;
constexpr double kPositivityThreshold = 1e-10;

const Complex I{0.0, 1.0};

std::string point_text(const ChartPtr& chart, std::span<const double> p) {
    std::string s = "(";
    for (std::size_t k = 0; k < p.size(); ++k) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s=%.6g", chart->vars()[k].c_str(), p[k]);
        s += (k ? ", " : "") + std::string(buf);
    }
    return s + ")";
}

// Evaluates a fixed batch of matrices and sections with one tape.
class Batch {
public:
    explicit Batch(const ChartPtr& chart) : chart_(chart) {}

    std::size_t add(const FieldMatrix& m) {
        Slot s{entries_.size(), m.rows(), m.cols()};
        entries_.insert(entries_.end(), m.entries().begin(), m.entries().end());
        slots_.push_back(s);
        return slots_.size() - 1;
    }
    std::size_t add(const GeneralizedSection& u) {
        std::vector<ScalarField> col = u.column();
        Slot s{entries_.size(), col.size(), 1};
        entries_.insert(entries_.end(), col.begin(), col.end());
        slots_.push_back(s);
        return slots_.size() - 1;
    }
    std::size_t add(const ScalarField& f) {
        Slot s{entries_.size(), 1, 1};
        entries_.push_back(f);
        slots_.push_back(s);
        return slots_.size() - 1;
    }

    void compile() { tape_ = Tape(entries_); }

    void evaluate(std::span<const double> p) { tape_.evaluate(p, values_); }

    CMatrix get(std::size_t slot) const {
        const Slot& s = slots_[slot];
        CMatrix m(s.rows, s.cols);
        for (std::size_t i = 0; i < s.rows; ++i)
            for (std::size_t j = 0; j < s.cols; ++j) m(i, j) = values_[s.offset + i * s.cols + j];
        return m;
    }
    CVector vec(std::size_t slot) const { return get(slot).col(0); }
    Complex scalar(std::size_t slot) const { return values_[slots_[slot].offset]; }

    const ChartPtr& chart() const { return chart_; }

private:
    struct Slot {
        std::size_t offset, rows, cols;
    };
    ChartPtr chart_;
    std::vector<ScalarField> entries_;
    std::vector<Slot> slots_;
    Tape tape_;
    std::vector<Complex> values_;
};

CMatrix num_adjoint(const CMatrix& m) {
    CMatrix q = pairing_matrix(m.rows() / 2);
    return q * m.transpose() * q;
}

Complex num_pair(const CVector& u, const CVector& v) {
    CMatrix q = pairing_matrix(u.size() / 2);
    return 0.5 * (u.transpose() * q * v)(0, 0);
}

CMatrix num_tensor(const CVector& a, const CVector& b) {
    CMatrix q = pairing_matrix(a.size() / 2);
    return a * (q * b).transpose();
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Tracks the worst residual of one named quantity over the sample points.
struct Worst {
    explicit Worst(std::string n) : name(std::move(n)) {}
    std::string name;
    double value = 0.0;
    Point witness;
    std::string detail;

    void update(double v, std::span<const double> p, const std::string& d = {}) {
        if (!(v <= value)) {
            value = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
            witness.assign(p.begin(), p.end());
            detail = d;
        }
    }
    CheckReport report(const ChartPtr& chart, double tol) const {
        std::string d = detail;
        if (!witness.empty()) d = (d.empty() ? "" : d + " at ") + point_text(chart, witness);
        return CheckReport::leaf(name, value, tol, witness, d);
    }
};

double min_hermitian_eigenvalue(const CMatrix& m) {
    CMatrix h = 0.5 * (m + m.adjoint());
    return Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

void require_at_points(const ChartPtr& chart, const SamplePlan& plan, const std::vector<ScalarField>& residuals,
                       const std::string& what) {
    Tape tape(residuals);
    for (const Point& p : sample_points(*chart, plan)) {
        for (Complex c : tape.evaluate(p))
            if (!(std::abs(c) <= plan.tolerance))
                throw ClassicalPreconditionError(what + " fails at " + point_text(chart, p), p);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// CheckReport

CheckReport CheckReport::leaf(std::string name, double residual, double tolerance, Point witness,
                              std::string detail) {
    CheckReport r;
    r.name = std::move(name);
    r.max_residual = residual;
    r.tolerance = tolerance;
    r.pass = residual < tolerance;
    r.witness_point = std::move(witness);
    r.witness_detail = std::move(detail);
    return r;
}

CheckReport CheckReport::aggregate(std::string name, std::vector<CheckReport> parts) {
    CheckReport r;
    r.name = std::move(name);
    r.pass = true;
    r.max_residual = 0.0;
    const CheckReport* worst = nullptr;
    for (const auto& p : parts) {
        r.pass = r.pass && p.pass;
        // Failing parts outrank passing ones; ties go to the larger residual.
        if (!worst || (worst->pass && !p.pass) ||
            (worst->pass == p.pass && p.max_residual > worst->max_residual))
            worst = &p;
    }
    if (worst) {
        r.max_residual = worst->max_residual;
        r.tolerance = worst->tolerance;
        r.witness_point = worst->witness_point;
        r.witness_detail = worst->name + (worst->witness_detail.empty() ? "" : ": " + worst->witness_detail);
    }
    r.parts = std::move(parts);
    return r;
}

CheckReport CheckReport::expect_fail(std::string name, CheckReport inner, double threshold) {
    CheckReport r;
    r.name = std::move(name);
    r.max_residual = inner.max_residual;
    r.tolerance = threshold;
    r.pass = inner.max_residual > threshold;
    r.witness_point = inner.witness_point;
    r.witness_detail = inner.witness_detail;
    r.parts.push_back(std::move(inner));
    return r;
}

const CheckReport* CheckReport::find(std::string_view part_name) const {
    if (name == part_name) return this;
    for (const auto& p : parts)
        if (const CheckReport* r = p.find(part_name)) return r;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Brackets

Bracket Bracket::derived(const KForm& theta, std::string name) {
    Bracket b;
    b.tag = "derived:" + name;
    b.theta = theta;
    return b;
}

GeneralizedSection Bracket::operator()(const GeneralizedSection& u, const GeneralizedSection& v,
                                       const SamplePlan& plan) const {
    if (!theta) return courant_bracket(u, v);
    return derived_courant_bracket(u, v, *theta, plan);
}

// ---------------------------------------------------------------------------
// Axiom checkers

CheckReport check_gacs(const GacsRecord& g, const SamplePlan& plan) {
    Batch b(g.chart());
    std::size_t sphi = b.add(g.phi.matrix()), sp = b.add(g.e_plus), sm = b.add(g.e_minus);
    b.compile();
    std::size_t n2 = 2 * g.chart()->dim();
    Worst skew{"phi+phi*=0"}, square{"phi^2=-1+E+(x)E-+E-(x)E+"}, iso{"<E+-,E+->=0"}, norm{"2<E+,E->=1"},
        kill{"phi(E+-)=0"};
    for (const Point& p : sample_points(*g.chart(), plan)) {
        b.evaluate(p);
        CMatrix phi = b.get(sphi);
        CVector ep = b.vec(sp), em = b.vec(sm);
        skew.update(max_abs(phi + num_adjoint(phi)), p);
        CMatrix target = -CMatrix::Identity(n2, n2) + num_tensor(ep, em) + num_tensor(em, ep);
        square.update(max_abs(phi * phi - target), p);
        iso.update(std::max(std::abs(num_pair(ep, ep)), std::abs(num_pair(em, em))), p);
        norm.update(std::abs(2.0 * num_pair(ep, em) - 1.0), p);
        kill.update(std::max(max_abs(phi * ep), max_abs(phi * em)), p);
    }
    double tol = plan.tolerance;
    return CheckReport::aggregate("gacs", {skew.report(g.chart(), tol), square.report(g.chart(), tol),
                                           iso.report(g.chart(), tol), norm.report(g.chart(), tol),
                                           kill.report(g.chart(), tol)});
}

CheckReport check_generalized_metric(const BundleEndomorphism& g, const SamplePlan& plan) {
    Batch b(g.chart());
    std::size_t sg = b.add(g.matrix());
    b.compile();
    std::size_t n2 = 2 * g.chart()->dim();
    Worst self{"G*=G"}, invol{"G^2=1"}, pos{"<G.,.> positive definite"};
    for (const Point& p : sample_points(*g.chart(), plan)) {
        b.evaluate(p);
        CMatrix m = b.get(sg);
        self.update(max_abs(m - num_adjoint(m)), p);
        invol.update(max_abs(m * m - CMatrix::Identity(n2, n2)), p);
        // b(e_i, e_j) = ⟨G e_i, e_j⟩
        CMatrix gram = 0.5 * m.transpose() * pairing_matrix(n2 / 2);
        double lo = min_hermitian_eigenvalue(gram);
        char buf[64];
        std::snprintf(buf, sizeof buf, "min eigenvalue %.6g", lo);
        pos.update(std::max(0.0, 2.0 * kPositivityThreshold - lo), p, buf);
    }
    double tol = plan.tolerance;
    return CheckReport::aggregate("generalized-metric",
                                  {self.report(g.chart(), tol), invol.report(g.chart(), tol),
                                   pos.report(g.chart(), kPositivityThreshold)});
}

CheckReport check_gacms(const GacmsRecord& m, const SamplePlan& plan) {
    const GacsRecord& g = m.gacs;
    Batch b(g.chart());
    std::size_t sphi = b.add(g.phi.matrix()), sg = b.add(m.metric.matrix()), sp = b.add(g.e_plus),
                sm = b.add(g.e_minus);
    b.compile();
    Worst compat{"-phi G phi = G - E+(x)E+ - E-(x)E-"}, ge{"G E+ = E-"};
    for (const Point& p : sample_points(*g.chart(), plan)) {
        b.evaluate(p);
        CMatrix phi = b.get(sphi), G = b.get(sg);
        CVector ep = b.vec(sp), em = b.vec(sm);
        compat.update(max_abs(-phi * G * phi - (G - num_tensor(ep, ep) - num_tensor(em, em))), p);
        ge.update(max_abs(G * ep - em), p);
    }
    double tol = plan.tolerance;
    return CheckReport::aggregate("gacms", {check_gacs(g, plan), compat.report(g.chart(), tol),
                                            check_generalized_metric(m.metric, plan), ge.report(g.chart(), tol)});
}

CheckReport check_gacx(const GacxRecord& j, const SamplePlan& plan) {
    Batch b(j.chart());
    std::size_t sj = b.add(j.j.matrix());
    b.compile();
    std::size_t n2 = 2 * j.chart()->dim();
    Worst skew{"J+J*=0"}, square{"J^2=-1"};
    for (const Point& p : sample_points(*j.chart(), plan)) {
        b.evaluate(p);
        CMatrix m = b.get(sj);
        skew.update(max_abs(m + num_adjoint(m)), p);
        square.update(max_abs(m * m + CMatrix::Identity(n2, n2)), p);
    }
    double tol = plan.tolerance;
    return CheckReport::aggregate("gacx", {skew.report(j.chart(), tol), square.report(j.chart(), tol)});
}

// ---------------------------------------------------------------------------
// Eigenframes and closure

GeneralizedSection project_off(const GacsRecord& g, const GeneralizedSection& u) {
    ScalarField two = ScalarField::constant(g.chart(), 2.0);
    return u - (two * pairing(g.e_minus, u)) * g.e_plus - (two * pairing(g.e_plus, u)) * g.e_minus;
}

std::size_t frame_rank(const SpanningFrame& f, std::span<const double> point) {
    if (f.sections.empty()) return 0;
    CMatrix m(f.sections.front().column().size(), f.sections.size());
    for (std::size_t k = 0; k < f.sections.size(); ++k) m.col(k) = f.sections[k].evaluate(point);
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s[k] > kRankThreshold * s[0]) ++r;
    return r;
}

namespace {

void require_rank(const SpanningFrame& f, const ChartPtr& chart, const SamplePlan& plan) {
    for (const Point& p : sample_points(*chart, plan)) {
        std::size_t r = frame_rank(f, p);
        if (r != f.expected_rank)
            throw RankDeficiencyError(f.label + " has rank " + std::to_string(r) + ", expected " +
                                          std::to_string(f.expected_rank) + " at " + point_text(chart, p),
                                      p);
    }
}

}  // namespace

SpanningFrame build_eigenframe(const GacsRecord& g, Side side, const SamplePlan& plan) {
    const ChartPtr& c = g.chart();
    SpanningFrame f;
    f.label = side == Side::Plus ? "L+" : "L-";
    f.expected_rank = c->dim();
    f.sections.push_back(side == Side::Plus ? g.e_plus : g.e_minus);
    ScalarField mi = ScalarField::constant(c, -I);
    for (std::size_t j = 0; j < 2 * c->dim(); ++j) {
        GeneralizedSection pu = project_off(g, GeneralizedSection::basis(c, j));
        f.sections.push_back(pu + mi * g.phi.apply(pu));
    }
    require_rank(f, c, plan);
    return f;
}

SpanningFrame build_eigenframe(const GacxRecord& j, const SamplePlan& plan) {
    const ChartPtr& c = j.chart();
    SpanningFrame f;
    f.label = "L";
    f.expected_rank = c->dim();
    ScalarField mi = ScalarField::constant(c, -I);
    for (std::size_t k = 0; k < 2 * c->dim(); ++k) {
        GeneralizedSection e = GeneralizedSection::basis(c, k);
        f.sections.push_back(e + mi * j.j.apply(e));
    }
    require_rank(f, c, plan);
    return f;
}

CheckReport check_closed(const SpanningFrame& frame, const Bracket& bracket, const SamplePlan& plan) {
    const std::size_t m = frame.sections.size();
    if (m == 0) return CheckReport::leaf("closed[" + frame.label + "," + bracket.tag + "]", 0.0, plan.tolerance);
    const ChartPtr& c = frame.sections.front().chart();
    Batch b(c);
    std::vector<std::size_t> frame_slots;
    for (const auto& s : frame.sections) frame_slots.push_back(b.add(s));
    // Skip sections that vanish identically; their brackets are zero.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> bracket_slots;
    auto is_zero = [](const GeneralizedSection& u) {
        for (const auto& e : u.column())
            if (!e.is_zero()) return false;
        return true;
    };
    for (std::size_t i = 0; i < m; ++i) {
        if (is_zero(frame.sections[i])) continue;
        for (std::size_t j = i + 1; j < m; ++j) {
            if (is_zero(frame.sections[j])) continue;
            pairs.emplace_back(i, j);
            bracket_slots.push_back(b.add(bracket(frame.sections[i], frame.sections[j], plan)));
        }
    }
    b.compile();
    Worst w{"closed[" + frame.label + "," + bracket.tag + "]"};
    for (const Point& p : sample_points(*c, plan)) {
        b.evaluate(p);
        CMatrix fm(2 * c->dim(), m);
        for (std::size_t k = 0; k < m; ++k) fm.col(k) = b.vec(frame_slots[k]);
        Eigen::JacobiSVD<CMatrix> svd(fm, Eigen::ComputeThinU);
        const auto& s = svd.singularValues();
        Eigen::Index r = 0;
        for (Eigen::Index k = 0; k < s.size(); ++k)
            if (s[0] > 0.0 && s[k] > kRankThreshold * s[0]) ++r;
        CMatrix u = svd.matrixU().leftCols(r);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            CVector v = b.vec(bracket_slots[k]);
            CVector perp = v - u * (u.adjoint() * v);
            double res = perp.norm() / std::max(1.0, v.norm());
            w.update(res, p, "pair (" + std::to_string(pairs[k].first) + "," + std::to_string(pairs[k].second) + ")");
        }
    }
    return w.report(c, plan.tolerance);
}

// ---------------------------------------------------------------------------
// Classification

std::string Classification::label() const {
    if (normal) return "normal";
    if (strong) return "strong";
    if (contact) return "contact";
    return "almost";
}

Classification classify_gacs(const GacsRecord& g, const Bracket& bracket, const SamplePlan& plan) {
    Classification c;
    c.l_plus = check_closed(build_eigenframe(g, Side::Plus, plan), bracket, plan);
    c.l_minus = check_closed(build_eigenframe(g, Side::Minus, plan), bracket, plan);
    GeneralizedSection e = bracket(g.e_plus, g.e_minus, plan);
    Batch b(g.chart());
    std::size_t se = b.add(e);
    b.compile();
    Worst w{"[[E+,E-]]=0 (" + bracket.tag + ")"};
    for (const Point& p : sample_points(*g.chart(), plan)) {
        b.evaluate(p);
        w.update(max_abs(b.vec(se)), p);
    }
    c.e_bracket = w.report(g.chart(), plan.tolerance);
    c.contact = c.l_plus.pass || c.l_minus.pass;
    c.strong = c.l_plus.pass && c.l_minus.pass;
    c.normal = c.strong && c.e_bracket.pass;
    return c;
}

CheckReport check_integrable_gacx(const GacxRecord& j, const Bracket& bracket, const SamplePlan& plan) {
    CheckReport r = check_closed(build_eigenframe(j, plan), bracket, plan);
    r.name = "integrable (" + bracket.tag + ")";
    return r;
}

CheckReport check_generalized_kahler(const GacxRecord& j1, const GacxRecord& j2, const Bracket& bracket,
                                     const SamplePlan& plan) {
    Batch b(j1.chart());
    std::size_t s1 = b.add(j1.j.matrix()), s2 = b.add(j2.j.matrix());
    b.compile();
    Worst comm{"[J1,J2]=0"};
    for (const Point& p : sample_points(*j1.chart(), plan)) {
        b.evaluate(p);
        CMatrix a = b.get(s1), c = b.get(s2);
        comm.update(max_abs(a * c - c * a), p);
    }
    CheckReport i1 = check_integrable_gacx(j1, bracket, plan);
    i1.name = "J1 " + i1.name;
    CheckReport i2 = check_integrable_gacx(j2, bracket, plan);
    i2.name = "J2 " + i2.name;
    CheckReport a1 = check_gacx(j1, plan);
    a1.name = "J1 gacx";
    CheckReport a2 = check_gacx(j2, plan);
    a2.name = "J2 gacx";
    CheckReport metric = check_generalized_metric(-(j1.j * j2.j), plan);
    metric.name = "-J1J2 generalized metric";
    return CheckReport::aggregate("generalized-kahler", {a1, a2, comm.report(j1.chart(), plan.tolerance), i1, i2,
                                                         metric});
}

GacmsRecord tilde(const GacmsRecord& m) {
    return {{m.metric * m.gacs.phi, m.gacs.e_minus, m.gacs.e_plus}, m.metric};
}

namespace {

CheckReport normal_report(const std::string& name, const Classification& c) {
    return CheckReport::aggregate(name, {c.l_plus, c.l_minus, c.e_bracket});
}

}  // namespace

CheckReport check_co_kahler(const GacmsRecord& m, const Bracket& bracket, const SamplePlan& plan) {
    GacmsRecord t = tilde(m);
    Batch b(m.chart());
    std::size_t s1 = b.add(m.gacs.phi.matrix()), s2 = b.add(t.gacs.phi.matrix());
    b.compile();
    Worst comm{"phi phi~ = phi~ phi"};
    for (const Point& p : sample_points(*m.chart(), plan)) {
        b.evaluate(p);
        CMatrix a = b.get(s1), c = b.get(s2);
        comm.update(max_abs(a * c - c * a), p);
    }
    Classification c1 = classify_gacs(m.gacs, bracket, plan);
    Classification c2 = classify_gacs(t.gacs, bracket, plan);
    return CheckReport::aggregate("co-kahler", {comm.report(m.chart(), plan.tolerance),
                                                normal_report("phi normal", c1), normal_report("phi~ normal", c2)});
}

// ---------------------------------------------------------------------------
// Lifts

BundleEndomorphism metric_lift(const MetricTensor& g, const SamplePlan& plan) {
    FieldMatrix gi;
    try {
        gi = invert_matrix_field(g.matrix(), plan);
    } catch (const SingularMatrixError& e) {
        throw ClassicalPreconditionError(std::string("metric is degenerate: ") + e.what(), e.witness());
    }
    std::size_t n = g.dim();
    const ChartPtr& c = g.chart();
    return BundleEndomorphism(FieldMatrix::zero(c, n, n), gi, g.matrix(), FieldMatrix::zero(c, n, n));
}

GacmsRecord lift_almost_contact(const FieldMatrix& phi, const VectorField& xi, const KForm& eta,
                                const MetricTensor& g, const SamplePlan& plan) {
    const ChartPtr& c = phi.chart();
    std::size_t n = c->dim();
    FieldMatrix xe(c, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) xe(i, j) = xi[i] * eta.components()[j];
    FieldMatrix resid = phi * phi + FieldMatrix::identity(c, n) - xe;
    std::vector<ScalarField> checks = resid.entries();
    require_at_points(c, plan, checks, "phi^2 = -1 + eta(x)xi");
    require_at_points(c, plan, {contract(eta, xi) - ScalarField::one(c)}, "eta(xi) = 1");
    Point w;
    if (g.min_eigenvalue(plan, &w) <= kPositivityThreshold)
        throw ClassicalPreconditionError("metric is not positive definite at " + point_text(c, w), w);

    GacsRecord r{block_diag(phi, -phi.transpose()), GeneralizedSection::from_vector(xi),
                 GeneralizedSection::from_form(eta)};
    return {r, metric_lift(g, plan)};
}

GacsRecord lift_contact(const KForm& eta, const VectorField& xi, const SamplePlan& plan,
                        const std::optional<KForm>& omega) {
    const ChartPtr& c = eta.chart();
    std::size_t n = c->dim();
    KForm w2 = omega ? *omega : exterior_derivative(eta);
    require_at_points(c, plan, {contract(eta, xi) - ScalarField::one(c)}, "eta(xi) = 1");
    require_at_points(c, plan, interior_product(xi, w2).components(), "iota_xi omega = 0");
    FieldMatrix W = w2.as_matrix();
    FieldMatrix F = W.transpose();
    FieldMatrix rho = F;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rho(i, j) = F(i, j) - eta.components()[i] * eta.components()[j];
    FieldMatrix rinv;
    try {
        rinv = invert_matrix_field(rho, plan);
    } catch (const SingularMatrixError& e) {
        throw ClassicalPreconditionError(std::string("rho is singular: ") + e.what(), e.witness());
    }
    FieldMatrix P = -(rinv.transpose() * W * rinv);
    return {BundleEndomorphism(FieldMatrix::zero(c, n, n), P, F, FieldMatrix::zero(c, n, n)),
            GeneralizedSection::from_form(eta), GeneralizedSection::from_vector(xi)};
}

GacxRecord lift_complex(const FieldMatrix& j, const SamplePlan& plan) {
    const ChartPtr& c = j.chart();
    std::vector<ScalarField> resid = (j * j + FieldMatrix::identity(c, j.rows())).entries();
    require_at_points(c, plan, resid, "J^2 = -1");
    return {block_diag(-j, j.transpose())};
}

GacxRecord lift_symplectic(const KForm& omega, const SamplePlan& plan) {
    FieldMatrix F = flat(omega);
    FieldMatrix Fi;
    try {
        Fi = invert_matrix_field(F, plan);
    } catch (const SingularMatrixError& e) {
        throw ClassicalPreconditionError(std::string("two-form is degenerate: ") + e.what(), e.witness());
    }
    std::size_t n = F.rows();
    const ChartPtr& c = omega.chart();
    return {BundleEndomorphism(FieldMatrix::zero(c, n, n), -Fi, F, FieldMatrix::zero(c, n, n))};
}

bool tensor_convention_self_test() {
    auto c = Chart::make("selftest", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
    FieldMatrix phi = FieldMatrix::from_strings(c, {{"0", "-1", "0"}, {"1", "0", "0"}, {"0", "0", "0"}});
    GacsRecord g{block_diag(phi, -phi.transpose()), GeneralizedSection::from_vector(VectorField::coordinate(c, 2)),
                 GeneralizedSection::from_form(KForm::coordinate(c, 2))};
    BundleEndomorphism square = -BundleEndomorphism::identity(c) + tensor_endo(g.e_plus, g.e_minus) +
                                tensor_endo(g.e_minus, g.e_plus);
    Point p{0.1, 0.2, 0.3};
    return max_abs(square.evaluate(p) * g.e_plus.evaluate(p)) < 1e-14 &&
           max_abs((g.phi * g.phi).evaluate(p) - square.evaluate(p)) < 1e-14;
}

}  // namespace gg
