#include "doctest.h"
#include "gg/structures.hpp"

using namespace gg;

namespace {

ChartPtr r3() { return Chart::make("r3", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}}); }

GacmsRecord sasakian(const ChartPtr& c) {
    FieldMatrix phi = FieldMatrix::from_strings(c, {{"0", "1", "0"}, {"-1", "0", "0"}, {"0", "y", "0"}});
    KForm eta = KForm::one_form(c, std::vector<std::string>{"-y", "0", "1"});
    VectorField xi = VectorField::coordinate(c, 2);
    MetricTensor g(FieldMatrix::from_strings(c, {{"0.5 + y^2", "0", "-y"}, {"0", "0.5", "0"}, {"-y", "0", "1"}}));
    return lift_almost_contact(phi, xi, eta, g);
}

GacmsRecord cokahler(const ChartPtr& c) {
    FieldMatrix phi = FieldMatrix::from_strings(c, {{"0", "-1", "0"}, {"1", "0", "0"}, {"0", "0", "0"}});
    return lift_almost_contact(phi, VectorField::coordinate(c, 2), KForm::coordinate(c, 2),
                               MetricTensor(FieldMatrix::identity(c, 3)));
}

GacsRecord contact(const ChartPtr& c) {
    return lift_contact(KForm::one_form(c, std::vector<std::string>{"-y", "0", "1"}), VectorField::coordinate(c, 2));
}

}  // namespace

TEST_CASE("tensor convention self-test") { CHECK(tensor_convention_self_test()); }

TEST_CASE("almost-contact lift of the Heisenberg Sasakian structure") {
    auto c = r3();
    auto m = sasakian(c);
    auto r = check_gacms(m);
    CHECK(r.pass);
    CHECK(r.max_residual < 1e-9);
    CHECK(r.find("G E+ = E-")->max_residual < 1e-12);
    auto cls = classify_gacs(m.gacs);
    CHECK(cls.normal);
    CHECK(cls.strong);
    CHECK(cls.contact);
    CHECK(cls.label() == "normal");

    GacsRecord bad = m.gacs;
    bad.e_plus = ScalarField::constant(c, 2.0) * bad.e_plus;
    auto rb = check_gacs(bad);
    CHECK_FALSE(rb.pass);
    CHECK(rb.find("2<E+,E->=1")->max_residual == doctest::Approx(1.0));

    GacmsRecord neg = m;
    neg.metric = -m.metric;
    auto rn = check_gacms(neg);
    CHECK_FALSE(rn.pass);
    CHECK_FALSE(rn.find("<G.,.> positive definite")->pass);
}

TEST_CASE("contact lift is contact but not strong") {
    auto c = r3();
    auto g = contact(c);
    CHECK(check_gacs(g).pass);
    auto cls = classify_gacs(g);
    CHECK(cls.contact);
    CHECK_FALSE(cls.strong);
    CHECK_FALSE(cls.normal);
    CHECK_FALSE(cls.l_plus.pass);
    CHECK(cls.l_minus.pass);
    CHECK(cls.l_plus.max_residual > 1e-3);
    CHECK(cls.label() == "contact");
}

TEST_CASE("eigenframe properties") {
    auto c = r3();
    auto pts = sample_points(*c, {});
    for (const GacsRecord& g : {sasakian(c).gacs, contact(c), cokahler(c).gacs}) {
        for (Side side : {Side::Plus, Side::Minus}) {
            auto f = build_eigenframe(g, side);
            CHECK(f.sections.size() == 7);
            for (const auto& p : pts) {
                CHECK(frame_rank(f, p) == 3);
                CMatrix phi = g.phi.evaluate(p);
                for (std::size_t k = 1; k < f.sections.size(); ++k) {
                    CVector v = f.sections[k].evaluate(p);
                    CHECK((phi * v - Complex(0, 1) * v).cwiseAbs().maxCoeff() < 1e-9);
                }
                for (const auto& a : f.sections)
                    for (const auto& b : f.sections) CHECK(std::abs(pairing(a, b).evaluate(p)) < 1e-9);
            }
        }
        for (std::size_t j = 0; j < 6; ++j) {
            auto pu = project_off(g, GeneralizedSection::basis(c, j));
            for (const auto& p : pts) {
                CHECK(std::abs(pairing(g.e_plus, pu).evaluate(p)) < 1e-12);
                CHECK(std::abs(pairing(g.e_minus, pu).evaluate(p)) < 1e-12);
            }
        }
        for (const auto& p : pts) {
            CMatrix phi = g.phi.evaluate(p);
            CHECK((phi * phi * phi + phi).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("complex and symplectic lifts") {
    auto c = Chart::make("r2", {"x", "y"}, {{-1, 1}, {-1, 1}});
    auto jj = lift_complex(FieldMatrix::from_strings(c, {{"0", "1"}, {"-1", "0"}}));
    auto jw = lift_symplectic(KForm(c, 2, {ScalarField::one(c)}));
    CHECK(check_gacx(jj).pass);
    CHECK(check_gacx(jw).pass);
    CHECK(check_integrable_gacx(jj).pass);
    CHECK(check_integrable_gacx(jw).pass);
    CHECK(print(jw.j.pi()(0, 1)) == "-1");
    CHECK(print(jw.j.sigma()(0, 1)) == "-1");
    auto k = check_generalized_kahler(jj, jw);
    CHECK(k.pass);

    CHECK_THROWS_AS(lift_complex(FieldMatrix::from_strings(c, {{"0", "2"}, {"-1", "0"}})), ClassicalPreconditionError);
    CHECK_THROWS_AS(lift_symplectic(KForm::zero(c, 2)), ClassicalPreconditionError);

    auto c4 = Chart::make("r4", {"x", "y", "z", "w"}, {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}});
    // x dy∧dz + dx∧dz, completed by dx∧dw + dy∧dw to stay nondegenerate off x = 0.
    KForm open = wedge(parse("x", c4) * KForm::coordinate(c4, 1), KForm::coordinate(c4, 2)) +
                 wedge(KForm::coordinate(c4, 0), KForm::coordinate(c4, 2)) +
                 wedge(KForm::coordinate(c4, 0), KForm::coordinate(c4, 3)) +
                 wedge(KForm::coordinate(c4, 1), KForm::coordinate(c4, 3));
    auto jo = lift_symplectic(open);
    CHECK(check_gacx(jo).pass);
    auto ri = check_integrable_gacx(jo);
    CHECK_FALSE(ri.pass);
    CHECK(ri.max_residual > 1e-3);
    CHECK(ri.witness_point.size() == 4);
}

TEST_CASE("generalized metric checks") {
    auto c = r3();
    auto g = metric_lift(MetricTensor(FieldMatrix::identity(c, 3)));
    CHECK(check_generalized_metric(g).pass);
    auto id = check_generalized_metric(BundleEndomorphism::identity(c));
    CHECK_FALSE(id.pass);
    CHECK_FALSE(id.find("<G.,.> positive definite")->pass);
    CHECK(id.find("G^2=1")->pass);
}

TEST_CASE("co-Kahler checks and the tilde record") {
    auto c = r3();
    auto ck = cokahler(c);
    auto r = check_co_kahler(ck);
    CHECK(r.pass);

    auto s = sasakian(c);
    auto rs = check_co_kahler(s);
    CHECK_FALSE(rs.pass);
    CHECK(rs.find("phi phi~ = phi~ phi")->pass);
    CHECK_FALSE(rs.find("phi~ normal")->pass);

    for (const GacmsRecord& m : {ck, s}) {
        auto t = tilde(m);
        CHECK(check_gacs(t.gacs).pass);
        CHECK(check_gacms(t).pass);
    }

    // GΦ for the Sasakian lift is the contact-type lift of −½dη.
    KForm eta = KForm::one_form(c, std::vector<std::string>{"-y", "0", "1"});
    auto ct = lift_contact(eta, VectorField::coordinate(c, 2), {},
                           ScalarField::constant(c, -0.5) * exterior_derivative(eta));
    auto t = tilde(s);
    for (const auto& p : sample_points(*c, {}))
        CHECK((ct.phi.evaluate(p) - t.gacs.phi.evaluate(p)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("classical preconditions report witnesses") {
    auto c = r3();
    FieldMatrix phi = FieldMatrix::from_strings(c, {{"0", "1", "0"}, {"-1", "0", "0"}, {"0", "0", "0"}});
    try {
        lift_almost_contact(phi, VectorField::coordinate(c, 2), parse("2", c) * KForm::coordinate(c, 2),
                            MetricTensor(FieldMatrix::identity(c, 3)));
        FAIL("expected precondition failure");
    } catch (const ClassicalPreconditionError& e) {
        CHECK(e.witness().size() == 3);
    }
    CHECK_THROWS_AS(lift_contact(KForm::coordinate(c, 2), VectorField::coordinate(c, 2)), ClassicalPreconditionError);
}
