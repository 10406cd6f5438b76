#include "gg/products.hpp"

#include <algorithm>
#include <set>

namespace gg {

namespace {

std::size_t bundle_slot(const ProductChart& pc, Factor side, std::size_t a) {
    std::size_t n = pc.factor(side)->dim();
    std::size_t N = pc.dim();
    return a < n ? pc.slot(side, a) : N + pc.slot(side, a - n);
}

FieldMatrix remap_matrix(const FieldMatrix& m, const ChartPtr& target) {
    FieldMatrix r(target, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = remap(m(i, j), target);
    return r;
}

GeneralizedSection remap_section(const GeneralizedSection& u, const ChartPtr& target) {
    std::vector<ScalarField> col;
    for (const auto& e : u.column()) col.push_back(remap(e, target));
    return GeneralizedSection::from_column(target, col);
}

GacsRecord remap_record(const GacsRecord& g, const ChartPtr& target) {
    return {BundleEndomorphism(remap_matrix(g.phi.matrix(), target)), remap_section(g.e_plus, target),
            remap_section(g.e_minus, target)};
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Worst value of f(point) over the plan.
template <class F>
CheckReport worst_over(const std::string& name, const ChartPtr& chart, const SamplePlan& plan, F f) {
    double worst = 0.0;
    Point wp;
    for (const Point& p : sample_points(*chart, plan)) {
        double v = f(p);
        if (!(v <= worst)) {
            worst = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
            wp = p;
        }
    }
    return CheckReport::leaf(name, worst, plan.tolerance, wp);
}

}  // namespace

// ---------------------------------------------------------------------------
// Product chart and lifting

ProductChart ProductChart::make(const ChartPtr& left, const ChartPtr& right, std::string id) {
    std::vector<std::string> coords = left->coords();
    coords.insert(coords.end(), right->coords().begin(), right->coords().end());
    std::set<std::string> seen;
    for (const auto& c : coords)
        if (!seen.insert(c).second) throw std::invalid_argument("coordinate '" + c + "' appears in both factors");
    std::vector<Interval> box(left->box().begin(), left->box().begin() + left->dim());
    box.insert(box.end(), right->box().begin(), right->box().begin() + right->dim());
    std::vector<std::string> params;
    std::vector<Interval> pbox;
    for (const ChartPtr& c : {left, right})
        for (std::size_t k = 0; k < c->params().size(); ++k) {
            const std::string& p = c->params()[k];
            if (seen.count(p)) continue;
            seen.insert(p);
            params.push_back(p);
            pbox.push_back(c->box()[c->dim() + k]);
        }
    std::vector<std::string> excl = left->exclusion_texts();
    excl.insert(excl.end(), right->exclusion_texts().begin(), right->exclusion_texts().end());
    if (id.empty()) id = left->id() + "x" + right->id();
    return {left, right, Chart::make(id, coords, box, params, pbox, excl)};
}

ScalarField lift_to_product(const ProductChart& pc, const ScalarField& f) { return remap(f, pc.chart); }

VectorField lift_to_product(const ProductChart& pc, const VectorField& x, Factor side) {
    VectorField r = VectorField::zero(pc.chart);
    for (std::size_t i = 0; i < x.dim(); ++i) r[pc.slot(side, i)] = remap(x[i], pc.chart);
    return r;
}

KForm lift_to_product(const ProductChart& pc, const KForm& w, Factor side) {
    int n = static_cast<int>(w.dim());
    int N = static_cast<int>(pc.dim());
    const auto& src = combinations(n, w.degree());
    KForm out = KForm::zero(pc.chart, w.degree());
    std::vector<ScalarField> c = out.components();
    for (std::size_t r = 0; r < src.size(); ++r) {
        std::vector<int> idx;
        for (int i : src[r]) idx.push_back(static_cast<int>(pc.slot(side, i)));
        c[combination_rank(N, idx)] = remap(w.components()[r], pc.chart);
    }
    return KForm(pc.chart, w.degree(), std::move(c));
}

GeneralizedSection lift_to_product(const ProductChart& pc, const GeneralizedSection& u, Factor side) {
    return {lift_to_product(pc, u.vec, side), lift_to_product(pc, u.form, side)};
}

BundleEndomorphism lift_to_product(const ProductChart& pc, const BundleEndomorphism& m, Factor side) {
    std::size_t N = pc.dim();
    FieldMatrix out(pc.chart, 2 * N, 2 * N);
    std::size_t n2 = m.matrix().rows();
    for (std::size_t a = 0; a < n2; ++a)
        for (std::size_t b = 0; b < n2; ++b)
            out(bundle_slot(pc, side, a), bundle_slot(pc, side, b)) = remap(m.matrix()(a, b), pc.chart);
    return BundleEndomorphism(out);
}

GacsRecord lift_to_product(const ProductChart& pc, const GacsRecord& g, Factor side) {
    return {lift_to_product(pc, g.phi, side), lift_to_product(pc, g.e_plus, side),
            lift_to_product(pc, g.e_minus, side)};
}

SpanningFrame lift_to_product(const ProductChart& pc, const SpanningFrame& f, Factor side) {
    SpanningFrame r;
    r.label = f.label;
    r.expected_rank = f.expected_rank;
    for (const auto& s : f.sections) r.sections.push_back(lift_to_product(pc, s, side));
    return r;
}

// ---------------------------------------------------------------------------
// Product structures

GacxRecord assemble_product_gacx(const GacsRecord& g1, const GacsRecord& g2) {
    // 𝒥 = Φ₁ ⊕ Φ₂ − E₊₁⊗E₊₂ − E₋₁⊗E₋₂ + E₊₂⊗E₊₁ + E₋₂⊗E₋₁
    BundleEndomorphism j = g1.phi + g2.phi - tensor_endo(g1.e_plus, g2.e_plus) -
                           tensor_endo(g1.e_minus, g2.e_minus) + tensor_endo(g2.e_plus, g1.e_plus) +
                           tensor_endo(g2.e_minus, g1.e_minus);
    return {j};
}

GacxRecord product_gacx(const ProductChart& pc, const GacsRecord& g1, const GacsRecord& g2) {
    return assemble_product_gacx(lift_to_product(pc, g1, Factor::Left), lift_to_product(pc, g2, Factor::Right));
}

BundleEndomorphism product_metric(const ProductChart& pc, const BundleEndomorphism& g1,
                                  const BundleEndomorphism& g2) {
    return lift_to_product(pc, g1, Factor::Left) + lift_to_product(pc, g2, Factor::Right);
}

BundleEndomorphism commutator(const BundleEndomorphism& a, const BundleEndomorphism& b) { return a * b - b * a; }

ClosedFormProducts commutator_closed_form(const ProductChart& pc, const GacsRecord& g1, const GacsRecord& g2,
                                          const GacsRecord& t1, const GacsRecord& t2) {
    auto block = [&](const GacsRecord& a, const GacsRecord& b, Factor side) {
        GacsRecord la = lift_to_product(pc, a, side);
        GacsRecord lb = lift_to_product(pc, b, side);
        // Φ Φ̃ − E₊⊗E₋ − E₋⊗E₊ with the sections of the left operand.
        return la.phi * lb.phi - tensor_endo(la.e_plus, la.e_minus) - tensor_endo(la.e_minus, la.e_plus);
    };
    return {block(g1, t1, Factor::Left) + block(g2, t2, Factor::Right),
            block(t1, g1, Factor::Left) + block(t2, g2, Factor::Right)};
}

CheckReport check_closed_forms(const ProductChart& pc, const GacsRecord& g1, const GacsRecord& g2,
                               const GacsRecord& t1, const GacsRecord& t2, const SamplePlan& plan) {
    GacxRecord j1 = product_gacx(pc, g1, g2);
    GacxRecord j2 = product_gacx(pc, t1, t2);
    ClosedFormProducts cf = commutator_closed_form(pc, g1, g2, t1, t2);
    FieldMatrix all = block_matrix(j1.j.matrix(), j2.j.matrix(), cf.j1j2.matrix(), cf.j2j1.matrix());
    std::size_t n2 = 2 * pc.dim();
    Tape tape(all.entries());
    double w12 = 0.0, w21 = 0.0;
    Point p12, p21;
    for (const Point& p : sample_points(*pc.chart, plan)) {
        std::vector<Complex> v = tape.evaluate(p);
        CMatrix m(2 * n2, 2 * n2);
        for (std::size_t i = 0; i < 2 * n2; ++i)
            for (std::size_t j = 0; j < 2 * n2; ++j) m(i, j) = v[i * 2 * n2 + j];
        CMatrix a = m.topLeftCorner(n2, n2), b = m.topRightCorner(n2, n2);
        double r12 = max_abs(a * b - m.bottomLeftCorner(n2, n2));
        double r21 = max_abs(b * a - m.bottomRightCorner(n2, n2));
        if (!(r12 <= w12)) w12 = r12, p12 = p;
        if (!(r21 <= w21)) w21 = r21, p21 = p;
    }
    return CheckReport::aggregate("closed-form products",
                                  {CheckReport::leaf("J1J2 closed form", w12, plan.tolerance, p12),
                                   CheckReport::leaf("J2J1 closed form", w21, plan.tolerance, p21)});
}

// ---------------------------------------------------------------------------
// Commutation criterion

Theorem1Result check_theorem1(const ProductChart& pc, const GacsRecord& g1, const GacsRecord& g2,
                              const GacsRecord& t1, const GacsRecord& t2, const SamplePlan& plan) {
    GacxRecord j1 = product_gacx(pc, g1, g2);
    GacxRecord j2 = product_gacx(pc, t1, t2);
    Theorem1Result res;
    CheckReport comm = worst_over("[J1,J2]=0", pc.chart, plan, [&](const Point& p) {
        CMatrix a = j1.j.evaluate(p), b = j2.j.evaluate(p);
        return max_abs(a * b - b * a);
    });
    res.commutator_norm = comm.max_residual;
    res.commute = comm.pass;

    auto factor_parts = [&](const GacsRecord& g, const GacsRecord& t, const std::string& tag) {
        const ChartPtr& c = g.chart();
        CheckReport pc_ = worst_over("phi" + tag + " phi~" + tag + " = phi~" + tag + " phi" + tag, c, plan,
                                     [&](const Point& p) {
                                         CMatrix a = g.phi.evaluate(p), b = t.phi.evaluate(p);
                                         return max_abs(a * b - b * a);
                                     });
        CheckReport same = worst_over("E+-" + tag + " = E~+-" + tag, c, plan, [&](const Point& p) {
            return std::max(max_abs(g.e_plus.evaluate(p) - t.e_plus.evaluate(p)),
                            max_abs(g.e_minus.evaluate(p) - t.e_minus.evaluate(p)));
        });
        CheckReport swap = worst_over("E+-" + tag + " = E~-+" + tag, c, plan, [&](const Point& p) {
            return std::max(max_abs(g.e_plus.evaluate(p) - t.e_minus.evaluate(p)),
                            max_abs(g.e_minus.evaluate(p) - t.e_plus.evaluate(p)));
        });
        return std::vector<CheckReport>{pc_, same, swap};
    };
    auto f1 = factor_parts(g1, t1, "1");
    auto f2 = factor_parts(g2, t2, "2");
    bool commute_phi = f1[0].pass && f2[0].pass;
    bool same = f1[1].pass && f2[1].pass;
    bool swap = f1[2].pass && f2[2].pass;
    res.stated_condition = commute_phi && (same || swap);
    res.relabel_condition = commute_phi && (f1[1].pass || f1[2].pass) && (f2[1].pass || f2[2].pass);

    std::vector<CheckReport> parts{comm};
    parts.insert(parts.end(), f1.begin(), f1.end());
    parts.insert(parts.end(), f2.begin(), f2.end());
    CheckReport info = CheckReport::aggregate("theorem1 inputs", parts);
    res.report = CheckReport::leaf("theorem1 biconditional", res.agrees() ? 0.0 : 1.0, 0.5, comm.witness_point,
                                   std::string("commute=") + (res.commute ? "true" : "false") +
                                       " stated=" + (res.stated_condition ? "true" : "false") +
                                       " relabel=" + (res.relabel_condition ? "true" : "false"));
    res.report.parts.push_back(std::move(info));
    return res;
}

// ---------------------------------------------------------------------------
// Product co-Kahler pipeline

Theorem41Result theorem41_pipeline(const ProductChart& pc, const GacmsRecord& m1, const GacmsRecord& m2,
                                   const Bracket& bracket, const SamplePlan& plan) {
    Theorem41Result r;
    GacxRecord j1 = product_gacx(pc, m1.gacs, m2.gacs);
    BundleEndomorphism g = product_metric(pc, m1.metric, m2.metric);
    GacxRecord j2{g * j1.j};
    r.kahler = check_generalized_kahler(j1, j2, bracket, plan);
    r.kahler.name = "product generalized kahler";
    r.co_kahler_left = check_co_kahler(m1, bracket, plan);
    r.co_kahler_left.name = "factor 1 co-kahler";
    r.co_kahler_right = check_co_kahler(m2, bracket, plan);
    r.co_kahler_right.name = "factor 2 co-kahler";
    r.kahler_pass = r.kahler.pass;
    r.factors_pass = r.co_kahler_left.pass && r.co_kahler_right.pass;
    r.report = CheckReport::leaf("theorem41 agreement", r.agrees() ? 0.0 : 1.0, 0.5, {},
                                 std::string("kahler=") + (r.kahler_pass ? "pass" : "fail") +
                                     " factors=" + (r.factors_pass ? "pass" : "fail"));
    r.report.parts = {r.kahler, r.co_kahler_left, r.co_kahler_right};
    return r;
}

// ---------------------------------------------------------------------------
// Warped products

WarpResult warp_transform(const ProductChart& pc, const GacmsRecord& left, const GacmsRecord& right,
                          const SamplePlan& plan) {
    const ChartPtr& rc = pc.right;
    if (rc->dim() != 1) throw std::invalid_argument("warp requires a one-dimensional right factor");
    for (const auto& e : right.gacs.phi.matrix().entries())
        if (!e.is_zero()) throw std::invalid_argument("warp requires Phi = 0 on the right factor");
    {
        Point p(rc->num_vars(), 0.0);
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = 0.5 * (rc->box()[k].lo + rc->box()[k].hi);
        CVector ep = right.gacs.e_plus.evaluate(p), em = right.gacs.e_minus.evaluate(p);
        if (std::abs(ep[0]) > 1e-12 || std::abs(ep[1] - 1.0) > 1e-12 || std::abs(em[0] - 1.0) > 1e-12 ||
            std::abs(em[1]) > 1e-12)
            throw std::invalid_argument("warp requires E+ = dt and E- = d/dt on the right factor");
    }
    const std::string& t = rc->coords()[0];

    // Left chart with t in scope.
    const ChartPtr& lc = pc.left;
    std::vector<Interval> lbox(lc->box().begin(), lc->box().begin() + lc->dim());
    std::vector<std::string> lparams = lc->params();
    std::vector<Interval> lpbox(lc->box().begin() + lc->dim(), lc->box().end());
    if (lc->var_index(t) < 0) {
        lparams.push_back(t);
        lpbox.push_back(rc->box()[0]);
    }
    ChartPtr lt = Chart::make(lc->id() + "[" + t + "]", lc->coords(), lbox, lparams, lpbox, lc->exclusion_texts());

    auto make_r = [&](const ChartPtr& c, std::size_t n, bool inverse) {
        ScalarField tv = ScalarField::variable(c, t);
        ScalarField down = exp(-tv), up = exp(tv);
        if (inverse) std::swap(down, up);
        return BundleEndomorphism(down * FieldMatrix::identity(c, n), FieldMatrix::zero(c, n, n),
                                  FieldMatrix::zero(c, n, n), up * FieldMatrix::identity(c, n));
    };

    WarpResult w;
    w.pc = pc;
    std::size_t n1 = lc->dim();
    GacsRecord base = remap_record(left.gacs, lt);
    BundleEndomorphism g1 = BundleEndomorphism(remap_matrix(left.metric.matrix(), lt));
    BundleEndomorphism r1 = make_r(lt, n1, false), r1i = make_r(lt, n1, true);
    w.phi1 = {r1 * base.phi * r1i, r1.apply(base.e_plus), r1.apply(base.e_minus)};
    w.phi1_tilde = {r1 * (g1 * base.phi) * r1i, w.phi1.e_minus, w.phi1.e_plus};
    w.g1 = r1 * g1 * r1i;

    BundleEndomorphism r2 = make_r(rc, 1, false);
    w.phi2 = {right.gacs.phi, r2.apply(right.gacs.e_plus), r2.apply(right.gacs.e_minus)};
    w.phi2_tilde = w.phi2;

    GacsRecord p1 = lift_to_product(pc, w.phi1, Factor::Left);
    GacsRecord p2 = lift_to_product(pc, w.phi2, Factor::Right);
    w.j1 = assemble_product_gacx(p1, p2);
    w.j2_eq32 = assemble_product_gacx(lift_to_product(pc, w.phi1_tilde, Factor::Left),
                                      lift_to_product(pc, w.phi2_tilde, Factor::Right));

    BundleEndomorphism g = product_metric(pc, left.metric, right.metric);
    w.r = make_r(pc.chart, pc.dim(), false);
    BundleEndomorphism ri = make_r(pc.chart, pc.dim(), true);
    w.j2 = {w.r * g * ri * w.j1.j};

    CheckReport same = worst_over("RGR^-1 J1 = RG J1 R^-1", pc.chart, plan, [&](const Point& p) {
        CMatrix R = w.r.evaluate(p), Ri = ri.evaluate(p), G = g.evaluate(p), J = w.j1.j.evaluate(p);
        return max_abs(R * G * Ri * J - R * G * J * Ri);
    });
    GacmsRecord f1{w.phi1, w.g1}, f1t{w.phi1_tilde, w.g1};
    BundleEndomorphism g2w = r2 * right.metric * make_r(rc, 1, true);
    GacmsRecord f2{w.phi2, g2w};
    CheckReport c1 = check_gacms(f1, plan);
    c1.name = "factor 1 gacms";
    CheckReport c1t = check_gacs(f1t.gacs, plan);
    c1t.name = "factor 1 tilde gacs";
    CheckReport c2 = check_gacms(f2, plan);
    c2.name = "factor 2 gacms";
    CheckReport k = check_generalized_kahler(w.j1, w.j2, Bracket::courant(), plan);
    w.report = CheckReport::aggregate("warp", {c1, c1t, c2, same, k});
    return w;
}

Classification warp_tilde_closure(const WarpResult& w, const Bracket& bracket, const SamplePlan& plan) {
    Classification c;
    const GacsRecord& t = w.phi1_tilde;
    SpanningFrame fp = lift_to_product(w.pc, build_eigenframe(t, Side::Plus, plan), Factor::Left);
    SpanningFrame fm = lift_to_product(w.pc, build_eigenframe(t, Side::Minus, plan), Factor::Left);
    c.l_plus = check_closed(fp, bracket, plan);
    c.l_minus = check_closed(fm, bracket, plan);
    GeneralizedSection ep = lift_to_product(w.pc, t.e_plus, Factor::Left);
    GeneralizedSection em = lift_to_product(w.pc, t.e_minus, Factor::Left);
    GeneralizedSection e = bracket(ep, em, plan);
    c.e_bracket = worst_over("[[E+,E-]]=0 (" + bracket.tag + ")", w.pc.chart, plan,
                             [&](const Point& p) { return max_abs(e.evaluate(p)); });
    c.contact = c.l_plus.pass || c.l_minus.pass;
    c.strong = c.l_plus.pass && c.l_minus.pass;
    c.normal = c.strong && c.e_bracket.pass;
    return c;
}

}  // namespace gg
