#include "doctest.h"
#include "gg/calculus.hpp"
#include "random_expr.hpp"

using namespace gg;

namespace {

ChartPtr r2() { return Chart::make("r2", {"x", "y"}, {{-1, 1}, {-1, 1}}); }
ChartPtr r3() { return Chart::make("r3", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}}); }

bool form_vanishes(const KForm& w, const std::vector<Point>& pts, double tol = 1e-12) {
    if (w.is_zero()) return true;
    for (const auto& p : pts)
        if (w.evaluate(p).cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

bool forms_agree(const KForm& a, const KForm& b, const std::vector<Point>& pts, double rel = 1e-9) {
    for (const auto& p : pts) {
        CVector va = a.evaluate(p), vb = b.evaluate(p);
        double scale = std::max(1.0, vb.cwiseAbs().maxCoeff());
        if ((va - vb).cwiseAbs().maxCoeff() > rel * scale) return false;
    }
    return true;
}

bool vectors_agree(const VectorField& a, const VectorField& b, const std::vector<Point>& pts,
                   double rel = 1e-9) {
    for (const auto& p : pts) {
        CVector va = a.evaluate(p), vb = b.evaluate(p);
        double scale = std::max(1.0, vb.cwiseAbs().maxCoeff());
        if ((va - vb).cwiseAbs().maxCoeff() > rel * scale) return false;
    }
    return true;
}

struct Random {
    ChartPtr chart;
    std::vector<Point> pts;
    testing::ExprGenerator gen;
    Random(ChartPtr c, std::uint64_t seed)
        : chart(c), pts(sample_points(*c, {seed, 20, 1e-9})), gen(c->vars(), seed) {}
    ScalarField scalar() { return gen.next_bounded(chart, pts, 3, 1e3); }
    VectorField vector() {
        std::vector<ScalarField> c;
        for (std::size_t i = 0; i < chart->dim(); ++i) c.push_back(scalar());
        return VectorField(chart, c);
    }
    KForm form(int k) {
        std::vector<ScalarField> c;
        for (std::size_t i = 0; i < combinations(chart->dim(), k).size(); ++i) c.push_back(scalar());
        return KForm(chart, k, c);
    }
};

}  // namespace

TEST_CASE("exterior derivative examples") {
    auto c = r2();
    auto pts = sample_points(*c, {});
    KForm xdy = KForm::one_form(c, std::vector<std::string>{"0", "x"});
    KForm dxdy = KForm(c, 2, {ScalarField::one(c)});
    CHECK(forms_agree(exterior_derivative(xdy), dxdy, pts));

    auto c3 = r3();
    KForm eta = KForm::one_form(c3, std::vector<std::string>{"-y", "0", "1"});
    KForm d_eta = exterior_derivative(eta);
    // dx∧dy, dx∧dz, dy∧dz
    CHECK(print(d_eta.components()[0]) == "1");
    CHECK(d_eta.components()[1].is_zero());
    CHECK(d_eta.components()[2].is_zero());

    KForm f = KForm::scalar(parse("x^2*y", c));
    CHECK(exterior_derivative(exterior_derivative(f)).is_zero());
    CHECK_THROWS_AS(exterior_derivative(dxdy), DegreeError);
}

TEST_CASE("interior product examples") {
    auto c = r2();
    auto pts = sample_points(*c, {});
    KForm dxdy = KForm(c, 2, {ScalarField::one(c)});
    KForm iy = interior_product(VectorField::coordinate(c, 0), dxdy);
    CHECK(forms_agree(iy, KForm::coordinate(c, 1), pts));
    CHECK(interior_product(VectorField::coordinate(c, 0), KForm::coordinate(c, 1)).is_zero());
    CHECK_THROWS_AS(interior_product(VectorField::coordinate(c, 0), KForm::scalar(ScalarField::one(c))),
                    DegreeError);

    auto c3 = r3();
    KForm eta = KForm::one_form(c3, std::vector<std::string>{"-y", "0", "1"});
    VectorField xi = VectorField::coordinate(c3, 2);
    CHECK(interior_product(xi, exterior_derivative(eta)).is_zero());
    CHECK(print(contract(eta, xi)) == "1");
}

TEST_CASE("Lie derivative and bracket examples") {
    auto c = r2();
    auto pts = sample_points(*c, {});
    VectorField dx = VectorField::coordinate(c, 0), dy = VectorField::coordinate(c, 1);
    KForm xdy = KForm::one_form(c, std::vector<std::string>{"0", "x"});
    CHECK(forms_agree(lie_derivative(dx, xdy), KForm::coordinate(c, 1), pts));
    CHECK(lie_derivative(dx, KForm::zero(c, 1)).is_zero());
    CHECK(lie_derivative(dx, KForm::coordinate(c, 0)).is_zero());

    CHECK(vectors_agree(lie_bracket(dx, dy), VectorField::zero(c), pts));
    VectorField xdy_v = VectorField::from_strings(c, {"0", "x"});
    CHECK(vectors_agree(lie_bracket(dx, xdy_v), dy, pts));
    VectorField w = VectorField::from_strings(c, {"x*y", "sin(x)"});
    CHECK(vectors_agree(lie_bracket(w, w), VectorField::zero(c), pts));

    auto other = Chart::make("other", {"u", "v"}, {{0, 1}, {0, 1}});
    CHECK_THROWS_AS(lie_bracket(dx, VectorField::coordinate(other, 0)), ChartMismatchError);
}

TEST_CASE("wedge examples and graded antisymmetry") {
    auto c = r3();
    auto pts = sample_points(*c, {});
    KForm dx = KForm::coordinate(c, 0), dy = KForm::coordinate(c, 1), dz = KForm::coordinate(c, 2);
    KForm dxdy = wedge(dx, dy);
    CVector ex = CVector::Unit(3, 0), ey = CVector::Unit(3, 1);
    CHECK(dxdy.evaluate_on(pts[0], {ex, ey}) == Complex(1.0));
    CHECK(dxdy.evaluate_on(pts[0], {ey, ex}) == Complex(-1.0));
    CHECK(wedge(dz, dz).is_zero());
    KForm ydx = parse("y", c) * dx;
    KForm w = wedge(ydx, dz);
    CHECK(w.components()[0].is_zero());
    CHECK(print(w.components()[1]) == "y");
    CHECK(w.components()[2].is_zero());
    CHECK_THROWS_AS(wedge(dxdy, wedge(dz, dx)), DegreeError);

    Random rnd(c, 7);
    for (int trial = 0; trial < 10; ++trial) {
        KForm a = rnd.form(1), b = rnd.form(1), s = rnd.form(2);
        CHECK(forms_agree(wedge(a, b), -wedge(b, a), pts));
        CHECK(forms_agree(wedge(a, s), wedge(s, a), pts));
    }
}

TEST_CASE("matrix inversion via adjugate") {
    auto c = r2();
    auto ct = Chart::make("t", {"x", "t"}, {{-1, 1}, {0.1, 2.0}});
    auto pts = sample_points(*c, {});
    auto id = FieldMatrix::identity(c, 3);
    auto inv = invert_matrix_field(id);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(print(inv(i, j)) == (i == j ? "1" : "0"));

    auto d = FieldMatrix::from_strings(ct, {{"exp(t)", "0"}, {"0", "1"}});
    auto dinv = invert_matrix_field(d);
    for (const auto& p : sample_points(*ct, {})) {
        CHECK(std::abs(dinv(0, 0).evaluate(p) - std::exp(-p[1])) < 1e-12);
        CHECK(std::abs(dinv(1, 1).evaluate(p) - 1.0) < 1e-12);
        CHECK(std::abs(dinv(0, 1).evaluate(p)) < 1e-12);
    }

    auto u = FieldMatrix::from_strings(c, {{"1", "y"}, {"0", "1"}});
    auto uinv = invert_matrix_field(u);
    for (const auto& p : pts) {
        CHECK(std::abs(uinv(0, 1).evaluate(p) + p[1]) < 1e-12);
        CHECK((u * uinv).evaluate(p).isApprox(CMatrix::Identity(2, 2), 1e-9));
    }

    auto sing = FieldMatrix::from_strings(c, {{"1", "x"}, {"1", "x"}});
    try {
        invert_matrix_field(sing);
        FAIL("expected singular matrix");
    } catch (const SingularMatrixError& e) {
        CHECK(e.witness().size() == 2);
    }

    Random rnd(r3(), 11);
    auto c3 = rnd.chart;
    for (int trial = 0; trial < 5; ++trial) {
        FieldMatrix m = FieldMatrix::identity(c3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                if (i != j) m(i, j) = 0.1 * rnd.scalar() / (ScalarField::constant(c3, 1.0) + pow(rnd.scalar(), 2));
        // Diagonal dominance is not guaranteed; skip draws that are near singular.
        FieldMatrix inv3;
        try {
            inv3 = invert_matrix_field(m, {42, 20, 1e-3});
        } catch (const SingularMatrixError&) {
            continue;
        }
        for (const auto& p : rnd.pts) CHECK((m * inv3).evaluate(p).isApprox(CMatrix::Identity(3, 3), 1e-9));
    }
}

TEST_CASE("identities: d squared, Cartan, Jacobi, commutator of L and iota") {
    auto c = r3();
    Random rnd(c, 2024);
    const auto& pts = rnd.pts;
    for (int trial = 0; trial < 8; ++trial) {
        KForm f = KForm::scalar(rnd.scalar());
        KForm a = rnd.form(1);
        CHECK(form_vanishes(exterior_derivative(exterior_derivative(f)), pts, 1e-9));
        CHECK(form_vanishes(exterior_derivative(exterior_derivative(a)), pts, 1e-9));

        VectorField x = rnd.vector(), y = rnd.vector(), z = rnd.vector();
        KForm s = rnd.form(2);
        for (const KForm& w : {a, s}) {
            KForm cartan = interior_product(x, exterior_derivative(w)) + exterior_derivative(interior_product(x, w));
            CHECK(forms_agree(lie_derivative(x, w), cartan, pts));
        }

        VectorField jac = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) +
                          lie_bracket(z, lie_bracket(x, y));
        CHECK(vectors_agree(jac, VectorField::zero(c), pts, 1e-8));
        CHECK(vectors_agree(lie_bracket(x, y), VectorField::zero(c) - lie_bracket(y, x), pts));

        KForm lhs = lie_derivative(x, interior_product(y, a)) - interior_product(y, lie_derivative(x, a));
        KForm rhs = interior_product(lie_bracket(x, y), a);
        CHECK(forms_agree(lhs, rhs, pts, 1e-8));

        CHECK(form_vanishes(interior_product(x, interior_product(x, s)), pts, 1e-9));
    }
}

TEST_CASE("metric symmetry and positivity") {
    auto c = r2();
    MetricTensor g(FieldMatrix::from_strings(c, {{"2", "y"}, {"0", "3"}}));
    CHECK(g.matrix()(1, 0).node() == g.matrix()(0, 1).node());
    CHECK(g.min_eigenvalue({}) > 0.5);
    MetricTensor bad(FieldMatrix::from_strings(c, {{"1", "0"}, {"0", "x"}}));
    Point w;
    CHECK(bad.min_eigenvalue({}, &w) < 0.0);
    CHECK(w[0] < 0.0);
}
