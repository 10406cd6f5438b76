#include "doctest.h"
#include "gg/bigtangent.hpp"
#include "random_expr.hpp"

using namespace gg;

namespace {

ChartPtr r2() { return Chart::make("r2", {"x", "y"}, {{-1, 1}, {-1, 1}}); }
ChartPtr r3() { return Chart::make("r3", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}}); }

double max_abs(const GeneralizedSection& u, const std::vector<Point>& pts) {
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, u.evaluate(p).cwiseAbs().maxCoeff());
    return m;
}

struct Random {
    ChartPtr chart;
    std::vector<Point> pts;
    testing::ExprGenerator gen;
    Random(ChartPtr c, std::uint64_t seed)
        : chart(c), pts(sample_points(*c, {seed, 20, 1e-9})), gen(c->vars(), seed) {}
    ScalarField scalar() { return gen.next_bounded(chart, pts, 3, 1e3); }
    GeneralizedSection section() {
        std::vector<ScalarField> col;
        for (std::size_t i = 0; i < 2 * chart->dim(); ++i) col.push_back(scalar());
        return GeneralizedSection::from_column(chart, col);
    }
    BundleEndomorphism endo() {
        std::size_t n = 2 * chart->dim();
        FieldMatrix m(chart, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = scalar();
        return BundleEndomorphism(m);
    }
    KForm two_form() {
        std::vector<ScalarField> c;
        for (std::size_t i = 0; i < combinations(chart->dim(), 2).size(); ++i) c.push_back(scalar());
        return KForm(chart, 2, c);
    }
};

GeneralizedSection contact_xi(const ChartPtr& c) { return GeneralizedSection::from_vector(VectorField::coordinate(c, 2)); }
GeneralizedSection contact_eta(const ChartPtr& c) {
    return GeneralizedSection::from_form(KForm::one_form(c, std::vector<std::string>{"-y", "0", "1"}));
}

}  // namespace

TEST_CASE("pairing examples and properties") {
    auto c3 = r3();
    auto pts = sample_points(*c3, {});
    CHECK(pairing(contact_xi(c3), contact_eta(c3)).evaluate(pts[0]) == Complex(0.5));

    auto c = r2();
    auto dx = GeneralizedSection::basis(c, 0), dy = GeneralizedSection::basis(c, 1);
    CHECK(pairing(dx, dy).is_zero());
    GeneralizedSection u(VectorField::coordinate(c, 0), KForm::coordinate(c, 1));
    GeneralizedSection v(VectorField::coordinate(c, 1), KForm::coordinate(c, 0));
    CHECK(pairing(u, v).evaluate(Point{0.3, 0.4}) == Complex(1.0));

    Random rnd(c3, 3);
    for (int k = 0; k < 5; ++k) {
        auto a = rnd.section(), b = rnd.section(), w = rnd.section();
        ScalarField s = rnd.scalar();
        for (const auto& p : rnd.pts) {
            CHECK(std::abs(pairing(a, b).evaluate(p) - pairing(b, a).evaluate(p)) < 1e-12);
            Complex lin = pairing(a + s * w, b).evaluate(p) - pairing(a, b).evaluate(p) -
                          s.evaluate(p) * pairing(w, b).evaluate(p);
            CHECK(std::abs(lin) < 1e-9 * std::max(1.0, std::abs(pairing(a, b).evaluate(p))));
            CMatrix q = pairing_matrix(3);
            Complex num = 0.5 * (a.evaluate(p).transpose() * q * b.evaluate(p))(0, 0);
            CHECK(std::abs(num - pairing(a, b).evaluate(p)) < 1e-9 * std::max(1.0, std::abs(num)));
        }
        for (const auto& p : rnd.pts) {
            Complex self = pairing(a, a).evaluate(p), alpha_x = contract(a.form, a.vec).evaluate(p);
            CHECK(std::abs(self - alpha_x) < 1e-12 * std::max(1.0, std::abs(self)));
        }
    }
}

TEST_CASE("Courant bracket examples and antisymmetry") {
    auto c = r2();
    auto pts = sample_points(*c, {});
    auto u = GeneralizedSection::basis(c, 0);
    auto v = GeneralizedSection::from_form(KForm::one_form(c, std::vector<std::string>{"0", "x"}));
    auto b = courant_bracket(u, v);
    CHECK(max_abs(b - GeneralizedSection::basis(c, 3), pts) < 1e-14);

    auto c3 = r3();
    auto pts3 = sample_points(*c3, {});
    CHECK(max_abs(courant_bracket(contact_eta(c3), contact_xi(c3)), pts3) < 1e-14);

    Random rnd(c3, 5);
    for (int k = 0; k < 5; ++k) {
        auto a = rnd.section(), w = rnd.section();
        CHECK(max_abs(courant_bracket(a, a), rnd.pts) < 1e-10);
        auto sum = courant_bracket(a, w) + courant_bracket(w, a);
        double scale = std::max(1.0, max_abs(courant_bracket(a, w), rnd.pts));
        CHECK(max_abs(sum, rnd.pts) < 1e-10 * scale);
    }
}

TEST_CASE("derived bracket") {
    auto c = Chart::make("xt", {"x", "t"}, {{-1, 1}, {0.1, 2.0}});
    auto pts = sample_points(*c, {});
    KForm dt = KForm::coordinate(c, 1);
    KForm et = KForm::scalar(parse("exp(t)", c));
    KForm d = twisted_d(et, dt);
    for (const auto& p : pts) CHECK(d.evaluate(p).cwiseAbs().maxCoeff() < 1e-12);

    Random rnd(c, 9);
    KForm zero = KForm::zero(c, 1);
    for (int k = 0; k < 5; ++k) {
        auto a = rnd.section(), w = rnd.section();
        auto diff = derived_courant_bracket(a, w, zero) - courant_bracket(a, w);
        CHECK(max_abs(diff, rnd.pts) < 1e-12);
        // Antisymmetry survives the twist.
        auto sum = derived_courant_bracket(a, w, dt) + derived_courant_bracket(w, a, dt);
        CHECK(max_abs(sum, rnd.pts) < 1e-9 * std::max(1.0, max_abs(derived_courant_bracket(a, w, dt), rnd.pts)));
    }

    // D = e^t d e^{-t} agrees with d − dt∧ on one-forms.
    KForm alpha = KForm::one_form(c, std::vector<std::string>{"x*t", "sin(x)"});
    KForm conj = parse("exp(t)", c) * exterior_derivative(parse("exp(-t)", c) * alpha);
    KForm tw = twisted_d(alpha, dt);
    for (const auto& p : pts) CHECK((conj.evaluate(p) - tw.evaluate(p)).cwiseAbs().maxCoeff() < 1e-12);

    KForm open = KForm::one_form(c, std::vector<std::string>{"t", "0"});
    CHECK_THROWS_AS(derived_courant_bracket(rnd.section(), rnd.section(), open), NonClosedFormError);
}

TEST_CASE("adjoint") {
    auto c3 = r3();
    Random rnd(c3, 13);
    for (int k = 0; k < 3; ++k) {
        auto m = rnd.endo();
        auto ms = adjoint(m);
        CHECK(adjoint(ms).matrix().entries().size() == m.matrix().entries().size());
        for (std::size_t i = 0; i < m.matrix().entries().size(); ++i)
            CHECK(adjoint(ms).matrix().entries()[i].node() == m.matrix().entries()[i].node());
        for (int s = 0; s < 10; ++s) {
            auto u = rnd.section(), v = rnd.section();
            for (const auto& p : rnd.pts) {
                Complex lhs = pairing(m.apply(u), v).evaluate(p);
                Complex rhs = pairing(u, ms.apply(v)).evaluate(p);
                CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
            }
        }
    }

    FieldMatrix phi = FieldMatrix::from_strings(c3, {{"0", "1", "0"}, {"-1", "0", "0"}, {"0", "y", "0"}});
    auto lift = block_diag(phi, -phi.transpose());
    auto sum = lift + adjoint(lift);
    for (const auto& e : sum.matrix().entries()) CHECK(e.is_zero());

    KForm b = rnd.two_form();
    auto eb = bfield(b), emb = bfield(-b);
    for (const auto& p : rnd.pts) CHECK((adjoint(eb).evaluate(p) - emb.evaluate(p)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tensor endomorphism convention") {
    auto c3 = r3();
    auto pts = sample_points(*c3, {});
    auto ep = contact_xi(c3), em = contact_eta(c3);
    CHECK(max_abs(tensor_endo(ep, em).apply(ep) - ep, pts) < 1e-14);
    CHECK(max_abs(tensor_endo(ep, em).apply(em), pts) < 1e-14);
    auto m = -BundleEndomorphism::identity(c3) + tensor_endo(ep, em) + tensor_endo(em, ep);
    CHECK(max_abs(m.apply(ep), pts) < 1e-14);
    CHECK(max_abs(m.apply(em), pts) < 1e-14);

    Random rnd(c3, 17);
    auto a = rnd.section(), b = rnd.section(), u = rnd.section();
    auto lhs = tensor_endo(a, b).apply(u);
    auto rhs = (ScalarField::constant(c3, 2.0) * pairing(b, u)) * a;
    CHECK(max_abs(lhs - rhs, rnd.pts) < 1e-9 * std::max(1.0, max_abs(rhs, rnd.pts)));
}

TEST_CASE("B-field transforms") {
    auto c = r2();
    Random rnd(c, 21);
    auto m = rnd.endo();
    auto same = bfield_transform(m, KForm::zero(c, 2));
    for (const auto& p : rnd.pts) CHECK((same.evaluate(p) - m.evaluate(p)).cwiseAbs().maxCoeff() < 1e-12);

    KForm b = KForm(c, 2, {parse("x*y", c)});
    auto u = rnd.section(), v = rnd.section();
    auto eb = bfield(b);
    auto expect = u + GeneralizedSection::from_form(interior_product(u.vec, b));
    CHECK(max_abs(eb.apply(u) - expect, rnd.pts) < 1e-12 * std::max(1.0, max_abs(expect, rnd.pts)));
    for (const auto& p : rnd.pts) {
        Complex a0 = pairing(u, v).evaluate(p), a1 = pairing(eb.apply(u), eb.apply(v)).evaluate(p);
        CHECK(std::abs(a0 - a1) < 1e-10 * std::max(1.0, std::abs(a0)));
    }

    auto c3 = r3();
    KForm open = KForm(c3, 2, {parse("z", c3), ScalarField::zero(c3), ScalarField::zero(c3)});
    CHECK_THROWS_AS(bfield_transform(BundleEndomorphism::identity(c3), open), NonClosedFormError);
}

TEST_CASE("endomorphism algebra") {
    auto c = r2();
    Random rnd(c, 23);
    auto m = rnd.endo();
    auto id = BundleEndomorphism::identity(c);
    for (const auto& p : rnd.pts) CHECK(((id * m).evaluate(p) - m.evaluate(p)).cwiseAbs().maxCoeff() == 0.0);

    FieldMatrix g = FieldMatrix::from_strings(c, {{"2", "x"}, {"x", "3"}});
    FieldMatrix gi = invert_matrix_field(g);
    BundleEndomorphism G(FieldMatrix::zero(c, 2, 2), gi, g, FieldMatrix::zero(c, 2, 2));
    VectorField x = VectorField::from_strings(c, {"y", "1"});
    auto gx = G.apply(GeneralizedSection::from_vector(x));
    CHECK(max_abs(GeneralizedSection::from_vector(gx.vec), rnd.pts) == 0.0);
    CHECK(max_abs(gx - GeneralizedSection::from_form(KForm::one_form(c, (g * x).components())), rnd.pts) < 1e-14);

    auto d1 = block_diag(FieldMatrix::from_strings(c, {{"x", "0"}, {"0", "y"}}),
                         FieldMatrix::from_strings(c, {{"1", "0"}, {"0", "2"}}));
    auto d2 = block_diag(FieldMatrix::from_strings(c, {{"y", "0"}, {"0", "3"}}),
                         FieldMatrix::from_strings(c, {{"x", "0"}, {"0", "x*y"}}));
    auto comm = d1 * d2 - d2 * d1;
    for (const auto& p : rnd.pts) CHECK(comm.evaluate(p).cwiseAbs().maxCoeff() == 0.0);
}
