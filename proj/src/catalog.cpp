#include "gg/catalog.hpp"

#include <random>

namespace gg {

namespace catalog {

namespace {

ScalarField coord(const ChartPtr& c, std::size_t i) { return ScalarField::variable(c, c->coords().at(i)); }
ScalarField num(const ChartPtr& c, Complex v) { return ScalarField::constant(c, v); }

void require_dim(const ChartPtr& c, std::size_t n, const char* what) {
    if (c->dim() != n)
        throw CatalogError(std::string(what) + " needs a " + std::to_string(n) + "-dimensional chart, got '" +
                           c->id() + "'");
}

}  // namespace

ChartPtr r3_chart(const std::string& id) { return Chart::make(id, {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}}); }

ChartPtr line_chart(const std::string& c) { return Chart::make("rplus", {c}, {{0.1, 2.0}}); }

GacsRecord contact_r3(const ChartPtr& c, const SamplePlan& plan) {
    require_dim(c, 3, "contact-r3");
    // η = dz − y dx, ξ = ∂z
    KForm eta = KForm::one_form(c, std::vector<ScalarField>{-coord(c, 1), num(c, 0.0), num(c, 1.0)});
    return lift_contact(eta, VectorField::coordinate(c, 2), plan);
}

GacmsRecord sasakian_heisenberg(const ChartPtr& c, const SamplePlan& plan) {
    require_dim(c, 3, "sasakian-heisenberg");
    ScalarField y = coord(c, 1);
    FieldMatrix phi = FieldMatrix::zero(c, 3, 3);
    phi(0, 1) = num(c, 1.0);
    phi(1, 0) = num(c, -1.0);
    phi(2, 1) = y;
    KForm eta = KForm::one_form(c, std::vector<ScalarField>{-y, num(c, 0.0), num(c, 1.0)});
    // g = ½(dx² + dy²) + η⊗η
    FieldMatrix g = FieldMatrix::zero(c, 3, 3);
    g(0, 0) = num(c, 0.5) + y * y;
    g(1, 1) = num(c, 0.5);
    g(2, 2) = num(c, 1.0);
    g(0, 2) = -y;
    g(2, 0) = -y;
    return lift_almost_contact(phi, VectorField::coordinate(c, 2), eta, MetricTensor(g), plan);
}

GacmsRecord cokahler_r3(const ChartPtr& c, const SamplePlan& plan) {
    require_dim(c, 3, "cokahler-r3");
    FieldMatrix phi = FieldMatrix::zero(c, 3, 3);
    phi(0, 1) = num(c, -1.0);
    phi(1, 0) = num(c, 1.0);
    return lift_almost_contact(phi, VectorField::coordinate(c, 2), KForm::coordinate(c, 2),
                               MetricTensor(FieldMatrix::identity(c, 3)), plan);
}

GacmsRecord line_rplus(const ChartPtr& c, const SamplePlan& plan) {
    require_dim(c, 1, "line-rplus");
    GacsRecord g{BundleEndomorphism::zero(c), GeneralizedSection::from_form(KForm::coordinate(c, 0)),
                 GeneralizedSection::from_vector(VectorField::coordinate(c, 0))};
    return {g, metric_lift(MetricTensor(FieldMatrix::identity(c, 1)), plan)};
}

GacxRecord kahler_r2_complex(const ChartPtr& c, const SamplePlan& plan) {
    require_dim(c, 2, "kahler-r2");
    // J∂x = −∂y, J∂y = ∂x
    FieldMatrix j = FieldMatrix::zero(c, 2, 2);
    j(0, 1) = num(c, 1.0);
    j(1, 0) = num(c, -1.0);
    return lift_complex(j, plan);
}

GacxRecord kahler_r2_symplectic(const ChartPtr& c, const SamplePlan& plan) {
    require_dim(c, 2, "kahler-r2");
    return lift_symplectic(KForm(c, 2, {ScalarField::one(c)}), plan);
}

}  // namespace catalog

// ---------------------------------------------------------------------------
// Entries

std::vector<std::string> catalog_names() {
    return {"contact-r3",          "sasakian-heisenberg", "kahler-r2",     "cokahler-r3",
            "line-rplus",          "sasakian-times-rplus", "cokahler-times-rplus", "sasakian-cone"};
}

namespace {

CatalogEntry product_entry(const std::string& name, const std::string& description, const GacmsRecord& left,
                           const GacmsRecord& right, const ProductChart& pc) {
    CatalogEntry e;
    e.name = name;
    e.description = description;
    e.product = pc;
    e.chart = pc.chart;
    e.left = left;
    e.right = right;
    e.j1 = product_gacx(pc, left.gacs, right.gacs);
    e.j2 = GacxRecord{product_metric(pc, left.metric, right.metric) * e.j1->j};
    return e;
}

CatalogEntry build_entry(const std::string& name, const SamplePlan& plan) {
    using namespace catalog;
    CatalogEntry e;
    e.name = name;
    if (name == "contact-r3") {
        e.description = "contact lift of eta = dz - y dx, xi = d/dz on R^3";
        e.chart = r3_chart("contact-r3");
        e.gacs = contact_r3(e.chart, plan);
        e.expected = {{"contact", true}, {"strong", false}, {"normal", false}};
    } else if (name == "sasakian-heisenberg") {
        e.description = "almost contact metric lift of the Heisenberg Sasakian structure";
        e.chart = r3_chart("heisenberg");
        e.gacms = sasakian_heisenberg(e.chart, plan);
        e.gacs = e.gacms->gacs;
        e.expected = {{"contact", true}, {"strong", true}, {"normal", true}, {"co-kahler", false}};
    } else if (name == "kahler-r2") {
        e.description = "(J_J, J_omega) for omega = dx^dy and the standard complex structure";
        e.chart = Chart::make("kahler-r2", {"x", "y"}, {{-1, 1}, {-1, 1}});
        e.j1 = kahler_r2_complex(e.chart, plan);
        e.j2 = kahler_r2_symplectic(e.chart, plan);
        e.expected = {{"generalized-kahler", true}};
    } else if (name == "cokahler-r3") {
        e.description = "Kahler R^2 times a line as an almost contact metric lift";
        e.chart = r3_chart("cokahler-r3");
        e.gacms = cokahler_r3(e.chart, plan);
        e.gacs = e.gacms->gacs;
        e.expected = {{"contact", true}, {"strong", true}, {"normal", true}, {"co-kahler", true}};
    } else if (name == "line-rplus") {
        e.description = "R+ with Phi = 0, E+ = dt, E- = d/dt";
        e.chart = line_chart("t");
        e.gacms = line_rplus(e.chart, plan);
        e.gacs = e.gacms->gacs;
        e.expected = {{"contact", true}, {"strong", true}, {"normal", true}, {"co-kahler", true}};
    } else if (name == "sasakian-times-rplus") {
        auto l = r3_chart("heisenberg"), r = line_chart("t");
        auto pc = ProductChart::make(l, r, "sasakian-times-rplus");
        e = product_entry(name, "Heisenberg Sasakian times R+ with J2 = G J1", sasakian_heisenberg(l, plan),
                          line_rplus(r, plan), pc);
        e.expected = {{"commute", true},           {"j1-integrable", true},       {"j2-integrable", false},
                      {"closed-forms", true},      {"theorem41-kahler", false},   {"theorem41-factors", false},
                      {"theorem41-agree", true}};
    } else if (name == "cokahler-times-rplus") {
        auto l = r3_chart("cokahler-r3"), r = line_chart("t");
        auto pc = ProductChart::make(l, r, "cokahler-times-rplus");
        e = product_entry(name, "co-Kahler R^3 times R+ with J2 = G J1", cokahler_r3(l, plan), line_rplus(r, plan),
                          pc);
        e.expected = {{"commute", true},          {"j1-integrable", true},     {"j2-integrable", true},
                      {"closed-forms", true},     {"theorem41-kahler", true},  {"theorem41-factors", true},
                      {"theorem41-agree", true}};
    } else if (name == "sasakian-cone") {
        auto l = r3_chart("heisenberg"), r = line_chart("t");
        auto pc = ProductChart::make(l, r, "sasakian-cone");
        e.name = name;
        e.description = "Heisenberg Sasakian times R+ warped by R = diag(e^-t, e^t)";
        e.product = pc;
        e.chart = pc.chart;
        e.left = sasakian_heisenberg(l, plan);
        e.right = line_rplus(r, plan);
        e.warped = true;
        WarpResult w = warp_transform(pc, *e.left, *e.right, plan);
        e.j1 = w.j1;
        e.j2 = w.j2;
        e.expected = {{"warp", true},
                      {"commute", true},
                      {"j1-integrable", true},
                      {"j2-integrable", true},
                      {"tilde-courant-strong", false},
                      {"tilde-derived-2dt-l-minus", true}};
    } else {
        throw CatalogError("unknown catalog entry '" + name + "'");
    }
    return e;
}

}  // namespace

CheckReport validate_entry(const CatalogEntry& e, const SamplePlan& plan) {
    std::vector<CheckReport> parts;
    auto named = [](CheckReport r, const std::string& n) {
        r.name = n;
        return r;
    };
    if (e.gacms)
        parts.push_back(named(check_gacms(*e.gacms, plan), "gacms"));
    else if (e.gacs)
        parts.push_back(named(check_gacs(*e.gacs, plan), "gacs"));
    if (e.left) parts.push_back(named(check_gacms(*e.left, plan), "factor 1 gacms"));
    if (e.right) parts.push_back(named(check_gacms(*e.right, plan), "factor 2 gacms"));
    if (e.j1) parts.push_back(named(check_gacx(*e.j1, plan), "J1 gacx"));
    if (e.j2) parts.push_back(named(check_gacx(*e.j2, plan), "J2 gacx"));
    if (e.product && e.left && e.right && !e.warped)
        parts.push_back(named(check_generalized_metric(product_metric(*e.product, e.left->metric, e.right->metric), plan),
                              "product generalized metric"));
    return CheckReport::aggregate("axioms", parts);
}

CatalogEntry load_entry(const std::string& name, const SamplePlan& plan) {
    CatalogEntry e;
    try {
        e = build_entry(name, plan);
    } catch (const ClassicalPreconditionError& ex) {
        throw CatalogError("catalog entry '" + name + "' failed its classical preconditions: " + ex.what());
    }
    CheckReport r = validate_entry(e, plan);
    if (!r.pass)
        throw CatalogError("catalog entry '" + name + "' fails its axioms: " + r.witness_detail);
    return e;
}

EntryRun run_entry(const CatalogEntry& e, const SamplePlan& plan) {
    EntryRun run;
    run.axioms = validate_entry(e, plan);
    run.checks.push_back(run.axioms);
    auto add = [&](const std::string& flag, bool value) { run.flags[flag] = value; };

    if (e.gacs && !e.product) {
        Classification c = classify_gacs(*e.gacs, Bracket::courant(), plan);
        add("contact", c.contact);
        add("strong", c.strong);
        add("normal", c.normal);
        add("l-plus-closed", c.l_plus.pass);
        add("l-minus-closed", c.l_minus.pass);
        run.checks.push_back(CheckReport::aggregate("classify: " + c.label(), {c.l_plus, c.l_minus, c.e_bracket}));
    }
    if (e.gacms && !e.product) {
        CheckReport ck = check_co_kahler(*e.gacms, Bracket::courant(), plan);
        add("co-kahler", ck.pass);
        run.checks.push_back(ck);
    }
    if (e.j1 && e.j2 && !e.product) {
        CheckReport k = check_generalized_kahler(*e.j1, *e.j2, Bracket::courant(), plan);
        add("generalized-kahler", k.pass);
        run.checks.push_back(k);
    }
    if (e.product && !e.warped) {
        CheckReport k = check_generalized_kahler(*e.j1, *e.j2, Bracket::courant(), plan);
        add("commute", k.find("[J1,J2]=0")->pass);
        add("j1-integrable", k.find("J1 integrable (courant)")->pass);
        add("j2-integrable", k.find("J2 integrable (courant)")->pass);
        run.checks.push_back(k);
        GacsRecord t1 = tilde(*e.left).gacs, t2 = tilde(*e.right).gacs;
        CheckReport cf = check_closed_forms(*e.product, e.left->gacs, e.right->gacs, t1, t2, plan);
        add("closed-forms", cf.pass);
        run.checks.push_back(cf);
        Theorem41Result t41 = theorem41_pipeline(*e.product, *e.left, *e.right, Bracket::courant(), plan);
        add("theorem41-kahler", t41.kahler_pass);
        add("theorem41-factors", t41.factors_pass);
        add("theorem41-agree", t41.agrees());
        run.checks.push_back(t41.report);
    }
    if (e.product && e.warped) {
        WarpResult w = warp_transform(*e.product, *e.left, *e.right, plan);
        add("warp", w.report.pass);
        add("commute", w.report.find("[J1,J2]=0")->pass);
        add("j1-integrable", w.report.find("J1 integrable (courant)")->pass);
        add("j2-integrable", w.report.find("J2 integrable (courant)")->pass);
        run.checks.push_back(w.report);
        const ChartPtr& pc = e.product->chart;
        KForm dt = KForm::coordinate(pc, pc->dim() - 1);
        Classification cc = warp_tilde_closure(w, Bracket::courant(), plan);
        Classification c1 = warp_tilde_closure(w, Bracket::derived(dt, "dt"), plan);
        Classification c2 = warp_tilde_closure(w, Bracket::derived(ScalarField::constant(pc, 2.0) * dt, "2dt"), plan);
        add("tilde-courant-strong", cc.strong);
        add("tilde-derived-dt-l-minus", c1.l_minus.pass);
        add("tilde-derived-dt-l-plus", c1.l_plus.pass);
        add("tilde-derived-2dt-l-minus", c2.l_minus.pass);
        run.checks.push_back(CheckReport::aggregate("phi~1 closure (courant)", {cc.l_plus, cc.l_minus}));
        run.checks.push_back(CheckReport::aggregate("phi~1 closure (derived:dt)", {c1.l_plus, c1.l_minus}));
        run.checks.push_back(CheckReport::aggregate("phi~1 closure (derived:2dt)", {c2.l_plus, c2.l_minus}));
    }
    for (const auto& [k, v] : e.expected) {
        auto it = run.flags.find(k);
        if (it == run.flags.end() || it->second != v) run.matches_expected = false;
    }
    return run;
}

// ---------------------------------------------------------------------------
// Commutation trials

std::string to_string(TrialKind k) {
    switch (k) {
        case TrialKind::SameBranch: return "same-branch";
        case TrialKind::SwappedBranch: return "swapped-branch";
        case TrialKind::MixedBranch: return "mixed-branch";
        case TrialKind::ScaledSections: return "scaled-sections";
        case TrialKind::NonCommutingTilde: return "non-commuting-tilde";
    }
    return "?";
}

namespace {

struct FactorSpec {
    std::string name;
    std::size_t dim;
};

GacmsRecord make_factor(const std::string& name, const ChartPtr& c, const SamplePlan& plan) {
    if (name == "sasakian") return catalog::sasakian_heisenberg(c, plan);
    if (name == "cokahler") return catalog::cokahler_r3(c, plan);
    return catalog::line_rplus(c, plan);
}

KForm random_constant_two_form(const ChartPtr& c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<ScalarField> comps;
    for (std::size_t k = 0; k < combinations(static_cast<int>(c->dim()), 2).size(); ++k)
        comps.push_back(ScalarField::constant(c, u(rng)));
    return KForm(c, 2, comps);
}

GacsRecord conjugate(const GacsRecord& g, const BundleEndomorphism& e, const BundleEndomorphism& ei) {
    return {e * g.phi * ei, e.apply(g.e_plus), e.apply(g.e_minus)};
}

GacmsRecord conjugate(const GacmsRecord& m, const BundleEndomorphism& e, const BundleEndomorphism& ei) {
    return {conjugate(m.gacs, e, ei), e * m.metric * ei};
}

}  // namespace

std::vector<Theorem1Trial> theorem1_trials(int count, std::uint64_t seed, const SamplePlan& plan) {
    std::mt19937_64 rng(seed);
    const std::vector<FactorSpec> specs{{"sasakian", 3}, {"cokahler", 3}, {"line", 1}};
    ChartPtr left3 = Chart::make("m1", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
    ChartPtr left1 = Chart::make("m1", {"s"}, {{0.1, 2.0}});
    ChartPtr right3 = Chart::make("m2", {"u", "v", "w"}, {{-1, 1}, {-1, 1}, {-1, 1}});
    ChartPtr right1 = Chart::make("m2", {"t"}, {{0.1, 2.0}});
    std::uniform_int_distribution<std::size_t> pick(0, specs.size() - 1);
    std::uniform_real_distribution<double> scale(1.5, 3.0);
    std::bernoulli_distribution coin(0.5);

    const TrialKind kinds[] = {TrialKind::SameBranch, TrialKind::SwappedBranch, TrialKind::MixedBranch,
                               TrialKind::ScaledSections, TrialKind::NonCommutingTilde};
    std::vector<Theorem1Trial> out;
    for (int k = 0; k < count; ++k) {
        TrialKind kind = kinds[k % 5];
        FactorSpec a = specs[pick(rng)], b = specs[pick(rng)];
        if (kind == TrialKind::NonCommutingTilde && a.dim == 1) a = specs[coin(rng) ? 0 : 1];
        ChartPtr lc = a.dim == 3 ? left3 : left1;
        ChartPtr rc = b.dim == 3 ? right3 : right1;
        ProductChart pc = ProductChart::make(lc, rc, "trial");
        GacmsRecord m1 = make_factor(a.name, lc, plan), m2 = make_factor(b.name, rc, plan);
        // Random closed B-field transforms keep every axiom and vary the data.
        if (lc->dim() >= 2) {
            KForm B = random_constant_two_form(lc, rng);
            m1 = conjugate(m1, bfield(B), bfield(-B));
        }
        if (rc->dim() >= 2) {
            KForm B = random_constant_two_form(rc, rng);
            m2 = conjugate(m2, bfield(B), bfield(-B));
        }
        GacsRecord t1 = tilde(m1).gacs, t2 = tilde(m2).gacs;
        switch (kind) {
            case TrialKind::SameBranch:
                t1 = m1.gacs;
                t2 = m2.gacs;
                break;
            case TrialKind::SwappedBranch:
                break;
            case TrialKind::MixedBranch:
                if (coin(rng))
                    t2 = m2.gacs;
                else
                    t1 = m1.gacs;
                break;
            case TrialKind::ScaledSections: {
                double l = scale(rng);
                GacsRecord& t = coin(rng) ? t1 : t2;
                t.e_plus = ScalarField::constant(t.chart(), l) * t.e_plus;
                t.e_minus = ScalarField::constant(t.chart(), 1.0 / l) * t.e_minus;
                break;
            }
            case TrialKind::NonCommutingTilde: {
                KForm B = random_constant_two_form(lc, rng);
                t1 = conjugate(t1, bfield(B), bfield(-B));
                break;
            }
        }
        out.push_back({kind, a.name + "x" + b.name, check_theorem1(pc, m1.gacs, m2.gacs, t1, t2, plan)});
    }
    return out;
}

}  // namespace gg
