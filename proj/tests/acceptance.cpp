// Acceptance run: one PASS/FAIL line per criterion.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "gg/cli.hpp"
#include "random_expr.hpp"

using namespace gg;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

constexpr double kTol = 1e-9;

struct Factor {
    std::string name;
    GacmsRecord m;
};

Factor make_factor(const std::string& name, const ChartPtr& c) {
    if (name == "sasakian") return {name, catalog::sasakian_heisenberg(c)};
    if (name == "cokahler") return {name, catalog::cokahler_r3(c)};
    return {name, catalog::line_rplus(c)};
}

ChartPtr factor_chart(const std::string& name, bool right) {
    if (name == "line") return catalog::line_chart(right ? "s" : "t");
    return right ? Chart::make("m2", {"u", "v", "w"}, {{-1, 1}, {-1, 1}, {-1, 1}}) : catalog::r3_chart("m1");
}

Outcome axiom_suite() {
    double worst = 0.0;
    std::string failing;
    for (const auto& name : catalog_names()) {
        CatalogEntry e = load_entry(name);
        CheckReport r = validate_entry(e);
        worst = std::max(worst, r.max_residual);
        if (!r.pass || r.max_residual >= kTol) failing += name + " ";
    }
    return {failing.empty(), std::to_string(catalog_names().size()) + " entries, worst axiom residual " + fmt(worst) +
                                 (failing.empty() ? "" : ", failing: " + failing)};
}

Outcome classifications() {
    auto s = classify_gacs(*load_entry("sasakian-heisenberg").gacs);
    auto c = classify_gacs(*load_entry("contact-r3").gacs);
    bool ok = s.strong && s.normal && c.contact && !c.strong;
    return {ok, "sasakian strong=" + std::to_string(s.strong) + " normal=" + std::to_string(s.normal) +
                    "; contact-r3 contact=" + std::to_string(c.contact) + " strong=" + std::to_string(c.strong) +
                    " (L+ residual " + fmt(c.l_plus.max_residual) + ")"};
}

Outcome biconditional() {
    auto trials = theorem1_trials(200, 42);
    std::map<std::string, int> disagree, total, small_norm;
    int n_dis = 0, n_small = 0;
    for (const auto& t : trials) {
        std::string k = to_string(t.kind);
        total[k]++;
        if (!t.result.agrees()) {
            disagree[k]++;
            n_dis++;
        }
        bool perturbed = t.kind == TrialKind::MixedBranch || t.kind == TrialKind::ScaledSections ||
                         t.kind == TrialKind::NonCommutingTilde;
        if (perturbed && t.result.commutator_norm <= 1e-3) {
            small_norm[k]++;
            n_small++;
        }
    }
    std::string d = std::to_string(trials.size()) + " trials, disagreements " + std::to_string(n_dis);
    for (const auto& [k, v] : disagree) d += " [" + k + " " + std::to_string(v) + "/" + std::to_string(total[k]) + "]";
    d += ", perturbed trials with commutator <= 1e-3: " + std::to_string(n_small);
    for (const auto& [k, v] : small_norm) d += " [" + k + " " + std::to_string(v) + "]";
    return {n_dis == 0 && n_small == 0, d};
}

Outcome closed_forms() {
    const char* names[] = {"sasakian", "cokahler", "line"};
    double worst = 0.0;
    int pairs = 0;
    bool ok = true;
    for (const char* a : names)
        for (const char* b : names) {
            ChartPtr lc = factor_chart(a, false), rc = factor_chart(b, true);
            Factor f1 = make_factor(a, lc), f2 = make_factor(b, rc);
            ProductChart pc = ProductChart::make(lc, rc);
            GacsRecord t1 = tilde(f1.m).gacs, t2 = tilde(f2.m).gacs;
            for (const auto& r : {check_closed_forms(pc, f1.m.gacs, f2.m.gacs, t1, t2),
                                  check_closed_forms(pc, f1.m.gacs, f2.m.gacs, f1.m.gacs, f2.m.gacs)}) {
                worst = std::max(worst, r.max_residual);
                ok = ok && r.pass && r.max_residual < kTol;
            }
            ++pairs;
        }
    return {ok, std::to_string(pairs) + " factor pairs x {tilde, same}, worst residual " + fmt(worst)};
}

Outcome example_gj1() {
    CatalogEntry e = load_entry("sasakian-times-rplus");
    CheckReport k = check_generalized_kahler(*e.j1, *e.j2);
    const CheckReport* i1 = k.find("J1 integrable (courant)");
    const CheckReport* i2 = k.find("J2 integrable (courant)");
    const CheckReport* cm = k.find("[J1,J2]=0");
    bool ok = i1->pass && i1->max_residual < kTol && !i2->pass && i2->max_residual > 1e-3 &&
              !i2->witness_point.empty() && cm->max_residual < kTol;
    return {ok, "J1 closure " + fmt(i1->max_residual) + ", J2 closure " + fmt(i2->max_residual) + " (" +
                    i2->witness_detail + "), [J1,J2] " + fmt(cm->max_residual)};
}

Outcome example_warp() {
    CatalogEntry e = load_entry("sasakian-cone");
    WarpResult w = warp_transform(*e.product, *e.left, *e.right);
    const CheckReport* k = w.report.find("generalized-kahler");
    const CheckReport* same = w.report.find("RGR^-1 J1 = RG J1 R^-1");
    bool kahler_ok = k && k->pass && same->max_residual < kTol;

    const ChartPtr& pc = e.product->chart;
    KForm dt = KForm::coordinate(pc, pc->dim() - 1);
    Classification cc = warp_tilde_closure(w, Bracket::courant());
    Classification c1 = warp_tilde_closure(w, Bracket::derived(dt, "dt"));
    Classification c2 = warp_tilde_closure(w, Bracket::derived(ScalarField::constant(pc, 2.0) * dt, "2dt"));
    bool derived_ok = c1.contact && !cc.contact;
    std::string d = "commute/integrable/metric " + std::string(kahler_ok ? "ok" : "FAILED") + " (worst " +
                    fmt(k ? k->max_residual : -1.0) + "), RGR^-1 J1 vs RGJ1R^-1 " + fmt(same->max_residual) +
                    "; phi~1 frames L+/L-: courant " + fmt(cc.l_plus.max_residual) + "/" +
                    fmt(cc.l_minus.max_residual) + ", derived dt " + fmt(c1.l_plus.max_residual) + "/" +
                    fmt(c1.l_minus.max_residual) + ", derived 2dt " + fmt(c2.l_plus.max_residual) + "/" +
                    fmt(c2.l_minus.max_residual);
    return {kahler_ok && derived_ok, d};
}

Outcome co_kahler_pipeline() {
    CatalogEntry ck = load_entry("cokahler-times-rplus");
    CatalogEntry sk = load_entry("sasakian-times-rplus");
    Theorem41Result a = theorem41_pipeline(*ck.product, *ck.left, *ck.right);
    Theorem41Result b = theorem41_pipeline(*sk.product, *sk.left, *sk.right);
    bool ok = a.kahler_pass && a.co_kahler_left.pass && a.co_kahler_right.pass && a.agrees() && !b.kahler_pass &&
              !b.factors_pass && b.agrees();
    return {ok, "co-kahler pair: kahler=" + std::to_string(a.kahler_pass) + " factors=" +
                    std::to_string(a.factors_pass) + "; sasakian pair: kahler=" + std::to_string(b.kahler_pass) +
                    " factors=" + std::to_string(b.factors_pass) + " (factor 2 co-kahler " +
                    std::to_string(b.co_kahler_right.pass) + ")"};
}

GacsRecord conj(const GacsRecord& g, const BundleEndomorphism& e, const BundleEndomorphism& ei) {
    return {e * g.phi * ei, e.apply(g.e_plus), e.apply(g.e_minus)};
}

Outcome bfields() {
    std::string d;
    bool ok = true;
    // Closed forms: exact on R^3, anything top-degree on R^2.
    {
        for (const char* name : {"contact-r3", "sasakian-heisenberg", "cokahler-r3"}) {
            CatalogEntry en = load_entry(name);
            const ChartPtr& c = en.chart;
            KForm b = exterior_derivative(KForm::one_form(c, std::vector<std::string>{"sin(y)", "x*z", "cos(x) + y^2"}));
            BundleEndomorphism e = bfield(b), ei = bfield(-b);
            Classification before = classify_gacs(*en.gacs);
            GacsRecord g = conj(*en.gacs, e, ei);
            bool ax = check_gacs(g).pass;
            if (en.gacms) ax = ax && check_gacms({g, e * en.gacms->metric * ei}).pass;
            Classification after = classify_gacs(g);
            bool same = before.contact == after.contact && before.strong == after.strong &&
                        before.normal == after.normal && before.l_plus.pass == after.l_plus.pass &&
                        before.l_minus.pass == after.l_minus.pass;
            ok = ok && ax && same;
            d += std::string(name) + (ax && same ? " ok; " : " CHANGED; ");
        }
        auto c = catalog::r3_chart();
        KForm b = exterior_derivative(KForm::one_form(c, std::vector<std::string>{"sin(y)", "x*z", "cos(x) + y^2"}));
        BundleEndomorphism e = bfield(b);
        // Bracket-level check of the same transform.
        auto u = GeneralizedSection(VectorField::from_strings(c, {"y", "x*z", "1"}), KForm::one_form(c, std::vector<std::string>{"z", "0", "x"}));
        auto v = GeneralizedSection(VectorField::from_strings(c, {"cos(z)", "0", "x"}), KForm::one_form(c, std::vector<std::string>{"0", "y^2", "1"}));
        GeneralizedSection lhs = e.apply(courant_bracket(u, v));
        GeneralizedSection rhs = courant_bracket(e.apply(u), e.apply(v));
        double r = 0.0;
        for (const auto& p : sample_points(*c, {})) r = std::max(r, (lhs.evaluate(p) - rhs.evaluate(p)).cwiseAbs().maxCoeff());
        ok = ok && r < kTol;
        d += "bracket symmetry " + fmt(r) + "; ";
    }
    {
        CatalogEntry k = load_entry("kahler-r2");
        KForm b = KForm(k.chart, 2, {parse("x^2 + y", k.chart)});
        GacxRecord j1{bfield_transform(k.j1->j, b)}, j2{bfield_transform(k.j2->j, b)};
        bool good = check_gacx(j1).pass && check_gacx(j2).pass && check_generalized_kahler(j1, j2).pass;
        ok = ok && good;
        d += std::string("kahler-r2 ") + (good ? "ok; " : "CHANGED; ");
    }
    {
        auto c = catalog::r3_chart();
        KForm open = wedge(parse("z", c) * KForm::coordinate(c, 0), KForm::coordinate(c, 1));
        bool rejected = false;
        try {
            bfield_transform(load_entry("sasakian-heisenberg").gacs->phi, open);
        } catch (const NonClosedFormError&) {
            rejected = true;
        }
        ok = ok && rejected;
        d += std::string("non-closed z dx^dy ") + (rejected ? "rejected" : "ACCEPTED");
    }
    return {ok, d};
}

Outcome calculus_oracles() {
    auto c = Chart::make("r3", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
    auto pts = sample_points(*c, {});
    testing::ExprGenerator gen(c->vars(), 42);
    double worst_fd = 0.0, worst_id = 0.0;
    std::vector<ScalarField> exprs;
    for (int k = 0; k < 100; ++k) {
        ScalarField f = gen.next_bounded(c, pts, 4, 1e3);
        exprs.push_back(f);
        for (int v = 0; v < 3; ++v) {
            ScalarField df = f.differentiate(v);
            for (const auto& p : pts) {
                Complex fd = testing::adaptive_difference(f, v, p);
                worst_fd = std::max(worst_fd, std::abs(df.evaluate(p) - fd) / std::max(1.0, std::abs(fd)));
            }
        }
    }
    auto rel = [&](const CVector& a, const CVector& b) {
        return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
    };
    for (int t = 0; t + 9 <= 100; t += 9) {
        const ScalarField* e = &exprs[t];
        KForm f = KForm::scalar(e[0]);
        KForm a = KForm::one_form(c, std::vector<ScalarField>{e[1], e[2], e[3]});
        VectorField x(c, {e[4], e[5], e[6]}), y(c, {e[7], e[8], e[0]}), z(c, {e[2], e[4], e[6]});
        KForm ddf = exterior_derivative(exterior_derivative(f));
        KForm dda = exterior_derivative(exterior_derivative(a));
        KForm cartan = interior_product(x, exterior_derivative(a)) + exterior_derivative(interior_product(x, a));
        KForm lie = lie_derivative(x, a);
        VectorField jac = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) +
                          lie_bracket(z, lie_bracket(x, y));
        for (const auto& p : pts) {
            if (!ddf.is_zero()) worst_id = std::max(worst_id, ddf.evaluate(p).cwiseAbs().maxCoeff());
            if (!dda.is_zero()) worst_id = std::max(worst_id, dda.evaluate(p).cwiseAbs().maxCoeff());
            worst_id = std::max(worst_id, rel(lie.evaluate(p), cartan.evaluate(p)));
            CVector jv = jac.evaluate(p);
            double scale = std::max({1.0, lie_bracket(x, lie_bracket(y, z)).evaluate(p).cwiseAbs().maxCoeff()});
            worst_id = std::max(worst_id, jv.cwiseAbs().maxCoeff() / scale);
        }
    }
    bool ok = worst_fd < 1e-6 && worst_id < 1e-8;
    return {ok, "100 expressions: worst relative derivative error " + fmt(worst_fd) +
                    "; d^2, Cartan, Jacobi worst residual " + fmt(worst_id)};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome cli_determinism() {
    bool ok = true;
    std::string d;
    int files = 0, mismatched = 0, nondeterministic = 0;
    for (const auto& name : catalog_names()) {
        std::string path = std::string(GG_DATA_DIR) + "/" + name + ".gg";
        auto mem = run_command("catalog", name);
        auto f1 = run_command("catalog", path);
        auto f2 = run_command("catalog", path);
        if (report_json(f1.report) != report_json(f2.report) ||
            report_json(mem.report) != report_json(run_command("catalog", name).report))
            ++nondeterministic;
        for (const char* cmd : {"validate", "classify"}) {
            try {
                if (report_json(run_command(cmd, path).report) != report_json(run_command(cmd, path).report))
                    ++nondeterministic;
            } catch (const UsageError&) {
            }
        }
        bool same = f1.exit_code == mem.exit_code && f1.report.flags == mem.report.flags &&
                    f1.report.checks.size() == mem.report.checks.size();
        for (std::size_t k = 0; same && k < mem.report.checks.size(); ++k)
            same = f1.report.checks[k].pass == mem.report.checks[k].pass;
        if (!same) ++mismatched;
        ++files;
    }
#ifdef GG_CHECK_BIN
    {
        std::string a = "/tmp/gg_accept_a.json", b = "/tmp/gg_accept_b.json";
        std::string base = std::string(GG_CHECK_BIN) + " theorem41 " + GG_DATA_DIR + "/sasakian-times-rplus.gg --seed 42 --report ";
        int ra = std::system((base + a + " > /dev/null").c_str());
        int rb = std::system((base + b + " > /dev/null").c_str());
        bool bytes = slurp(a) == slurp(b) && !slurp(a).empty() && ra == rb;
        if (!bytes) ++nondeterministic;
        d += "binary reports " + std::string(bytes ? "identical" : "DIFFER") + "; ";
        std::remove(a.c_str());
        std::remove(b.c_str());
    }
#endif
    ok = mismatched == 0 && nondeterministic == 0;
    d += std::to_string(files) + " file twins, verdict mismatches " + std::to_string(mismatched) +
         ", non-identical repeated reports " + std::to_string(nondeterministic);
    return {ok, d};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"axiom suite on every catalog entry", axiom_suite},
        {"contact and almost-contact lift classifications", classifications},
        {"commutation biconditional over 200 randomized trials", biconditional},
        {"closed-form products against composition", closed_forms},
        {"J2 = G J1 on Sasakian x R+: commuting, J2 not integrable", example_gj1},
        {"warped Sasakian product and derived-bracket closure", example_warp},
        {"product co-Kahler pipeline agreement", co_kahler_pipeline},
        {"B-field transforms", bfields},
        {"calculus oracles", calculus_oracles},
        {"CLI determinism and file twins", cli_determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << "criterion " << (k + 1) << " " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[k].first
                  << "  | " << o.detail << "\n";
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
    return failed == 0 ? 0 : 1;
}
