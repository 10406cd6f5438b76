#include "gg/cli.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace gg {

namespace {

using json = nlohmann::ordered_json;

CheckReport renamed(CheckReport r, const std::string& name) {
    r.name = name;
    return r;
}

void flatten(const CheckReport& r, const std::string& prefix, std::vector<CheckReport>& out) {
    if (r.parts.empty()) {
        out.push_back(renamed(r, prefix + r.name));
        return;
    }
    for (const auto& p : r.parts) flatten(p, prefix, out);
}

CheckReport axioms_of(const FileStructure& s, const SamplePlan& plan) {
    std::vector<CheckReport> parts;
    if (s.gacms)
        parts.push_back(check_gacms(*s.gacms, plan));
    else if (s.gacs)
        parts.push_back(check_gacs(*s.gacs, plan));
    if (s.gacx) parts.push_back(check_gacx(*s.gacx, plan));
    if (s.left) parts.push_back(renamed(check_gacms(*s.left, plan), "factor 1 gacms"));
    if (s.right) parts.push_back(renamed(check_gacms(*s.right, plan), "factor 2 gacms"));
    if (s.j1) parts.push_back(renamed(check_gacx(*s.j1, plan), "J1 gacx"));
    if (s.j2) parts.push_back(renamed(check_gacx(*s.j2, plan), "J2 gacx"));
    if (s.product && s.left && s.right && !s.warped)
        parts.push_back(renamed(
            check_generalized_metric(product_metric(*s.product, s.left->metric, s.right->metric), plan),
            "product generalized metric"));
    for (std::size_t k = 0; k < s.quad.size(); ++k)
        parts.push_back(renamed(check_gacs(s.quad[k], plan), std::string(k < 2 ? "g" : "t") + std::to_string(k % 2 + 1) + " gacs"));
    return CheckReport::aggregate(s.name, parts);
}

std::string flag_key(const std::string& structure, const std::string& flag, bool qualified) {
    return qualified ? structure + ":" + flag : flag;
}

Bracket bracket_for(const StructureFile& f, const ChartPtr& chart) {
    try {
        return resolve_bracket(f, f.bracket, chart);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

RunResult run_on_file(const std::string& command, const StructureFile& f) {
    RunResult out;
    Report& rep = out.report;
    const SamplePlan& plan = f.plan;
    bool ok = true;
    // A derived bracket names a one-form on one chart; structures elsewhere are skipped.
    auto bracket_fits = [&](const FileStructure& s) {
        if (f.bracket == "courant") return true;
        try {
            resolve_bracket(f, f.bracket, s.chart);
            return true;
        } catch (const std::invalid_argument&) {
            return false;
        }
    };
    auto pick = [&](auto pred) {
        std::vector<const FileStructure*> v;
        bool any = false;
        for (const auto& s : f.structures)
            if (pred(s)) {
                any = true;
                if (bracket_fits(s)) v.push_back(&s);
            }
        if (!any) throw UsageError("'" + f.path + "' has no structures for '" + command + "'");
        if (v.empty()) bracket_for(f, f.structures.front().chart);
        return v;
    };

    if (command == "validate") {
        for (const auto& s : f.structures) {
            CheckReport a = axioms_of(s, plan);
            ok = ok && a.pass;
            flatten(a, s.name + ": ", rep.checks);
        }
    } else if (command == "classify") {
        auto targets = pick([](const FileStructure& s) { return (s.gacs && !s.product) || s.warped; });
        bool q = targets.size() > 1;
        for (const FileStructure* s : targets) {
            CheckReport a = axioms_of(*s, plan);
            ok = ok && a.pass;
            rep.checks.push_back(renamed(a, s->name + ": axioms"));
            Bracket b = bracket_for(f, s->chart);
            Classification c;
            if (s->warped) {
                WarpResult w = warp_transform(*s->product, *s->left, *s->right, plan);
                c = warp_tilde_closure(w, b, plan);
            } else {
                c = classify_gacs(*s->gacs, b, plan);
            }
            std::string frame = s->warped ? s->name + ": phi~1 " : s->name + ": ";
            rep.checks.push_back(renamed(c.l_plus, frame + "L+ closed (" + b.tag + ")"));
            rep.checks.push_back(renamed(c.l_minus, frame + "L- closed (" + b.tag + ")"));
            rep.checks.push_back(renamed(c.e_bracket, s->name + ": " + c.e_bracket.name));
            rep.flags[flag_key(s->name, "contact", q)] = c.contact;
            rep.flags[flag_key(s->name, "strong", q)] = c.strong;
            rep.flags[flag_key(s->name, "normal", q)] = c.normal;
        }
    } else if (command == "kahler") {
        auto targets = pick([](const FileStructure& s) { return s.j1 && s.j2; });
        bool q = targets.size() > 1;
        for (const FileStructure* s : targets) {
            CheckReport k = check_generalized_kahler(*s->j1, *s->j2, bracket_for(f, s->chart), plan);
            ok = ok && k.pass;
            rep.flags[flag_key(s->name, "generalized-kahler", q)] = k.pass;
            rep.checks.push_back(renamed(k, s->name + ": generalized kahler"));
        }
    } else if (command == "theorem1") {
        auto targets = pick([](const FileStructure& s) { return s.quad.size() == 4; });
        bool q = targets.size() > 1;
        for (const FileStructure* s : targets) {
            Theorem1Result r = check_theorem1(*s->product, s->quad[0], s->quad[1], s->quad[2], s->quad[3], plan);
            ok = ok && r.agrees();
            rep.flags[flag_key(s->name, "commute", q)] = r.commute;
            rep.flags[flag_key(s->name, "stated-condition", q)] = r.stated_condition;
            rep.flags[flag_key(s->name, "per-factor-condition", q)] = r.relabel_condition;
            rep.flags[flag_key(s->name, "agreement", q)] = r.agrees();
            rep.checks.push_back(renamed(r.report, s->name + ": " + r.report.name));
        }
    } else if (command == "theorem41") {
        auto targets = pick([](const FileStructure& s) { return s.product && s.left && s.right && !s.warped && s.j1; });
        bool q = targets.size() > 1;
        for (const FileStructure* s : targets) {
            Theorem41Result r =
                theorem41_pipeline(*s->product, *s->left, *s->right, bracket_for(f, s->chart), plan);
            ok = ok && r.kahler_pass && r.factors_pass && r.agrees();
            rep.flags[flag_key(s->name, "kahler", q)] = r.kahler_pass;
            rep.flags[flag_key(s->name, "factors-co-kahler", q)] = r.factors_pass;
            rep.flags[flag_key(s->name, "agreement", q)] = r.agrees();
            rep.checks.push_back(renamed(r.kahler, s->name + ": " + r.kahler.name));
            rep.checks.push_back(renamed(r.co_kahler_left, s->name + ": " + r.co_kahler_left.name));
            rep.checks.push_back(renamed(r.co_kahler_right, s->name + ": " + r.co_kahler_right.name));
            CheckReport agree = r.report;
            agree.parts.clear();
            rep.checks.push_back(renamed(agree, s->name + ": verdict agreement"));
        }
    } else {
        throw UsageError("unknown command '" + command + "'");
    }
    out.exit_code = ok ? 0 : 1;
    return out;
}

RunResult run_catalog(const CatalogEntry& e, const SamplePlan& plan) {
    RunResult out;
    EntryRun run = run_entry(e, plan);
    out.report.checks = run.checks;
    out.report.flags = run.flags;
    std::string detail;
    for (const auto& [k, v] : e.expected) {
        auto it = run.flags.find(k);
        if (it == run.flags.end())
            detail += k + " missing; ";
        else if (it->second != v)
            detail += k + "=" + (it->second ? "true" : "false") + " expected " + (v ? "true" : "false") + "; ";
    }
    out.report.checks.push_back(CheckReport::leaf("expected flags", run.matches_expected ? 0.0 : 1.0, 0.5, {}, detail));
    out.exit_code = run.matches_expected && run.axioms.pass ? 0 : 1;
    return out;
}

bool is_file(const std::string& s) { return s.size() > 3 && s.compare(s.size() - 3, 3, ".gg") == 0; }

json to_json(const CheckReport& r) {
    json j;
    j["name"] = r.name;
    j["verdict"] = r.pass ? "pass" : "fail";
    if (std::isfinite(r.max_residual))
        j["max_residual"] = r.max_residual;
    else
        j["max_residual"] = nullptr;
    j["witness_point"] = r.witness_point;
    j["witness_detail"] = r.witness_detail;
    if (!r.parts.empty()) {
        json parts = json::array();
        for (const auto& p : r.parts) parts.push_back(to_json(p));
        j["parts"] = parts;
    }
    return j;
}

CheckReport failure_report(const std::string& name, const std::string& what, const Point& witness) {
    return CheckReport::leaf(name, 1.0, 0.5, witness, what);
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"validate", "classify", "kahler", "theorem1", "theorem41", "catalog"};
    return names;
}

RunResult run_command(const std::string& command, const std::string& target, const PlanOverrides& ov) {
    if (std::find(command_names().begin(), command_names().end(), command) == command_names().end())
        throw UsageError("unknown command '" + command + "'");
    RunResult out;
    SamplePlan plan;
    std::string bracket = ov.bracket.value_or("courant");
    try {
        if (command == "catalog" && !is_file(target)) {
            if (ov.seed) plan.seed = *ov.seed;
            if (ov.points) plan.count = *ov.points;
            if (ov.tolerance) plan.tolerance = *ov.tolerance;
            if (bracket != "courant") throw UsageError("built-in catalog entries fix their own brackets");
            auto names = catalog_names();
            if (std::find(names.begin(), names.end(), target) == names.end())
                throw UsageError("unknown catalog entry '" + target + "'");
            out = run_catalog(load_entry(target, plan), plan);
        } else {
            StructureFile f = load_structure_file(target, ov);
            plan = f.plan;
            bracket = f.bracket;
            if (command == "catalog") {
                if (f.bracket != "courant") throw UsageError("catalog entries fix their own brackets");
                out = run_catalog(entry_from_file(f), plan);
            } else {
                out = run_on_file(command, f);
            }
        }
    } catch (const ClassicalPreconditionError& e) {
        out.exit_code = 1;
        out.report.checks = {failure_report("classical preconditions", e.what(), e.witness())};
    } catch (const NonClosedFormError& e) {
        out.exit_code = 1;
        out.report.checks = {failure_report("closed form required", e.what(), e.witness())};
    } catch (const RankDeficiencyError& e) {
        out.exit_code = 1;
        out.report.checks = {failure_report("eigenframe rank", e.what(), e.witness())};
    } catch (const SingularMatrixError& e) {
        out.exit_code = 1;
        out.report.checks = {failure_report("invertibility", e.what(), e.witness())};
    } catch (const CatalogError& e) {
        throw UsageError(e.what());
    }
    out.report.command = command;
    out.report.target = target;
    out.report.seed = plan.seed;
    out.report.tolerance = plan.tolerance;
    out.report.bracket = bracket;
    return out;
}

std::string report_json(const Report& r, int indent) {
    json j;
    j["command"] = r.command;
    j["target"] = r.target;
    j["seed"] = r.seed;
    j["tolerance"] = r.tolerance;
    j["bracket"] = r.bracket;
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    j["checks"] = checks;
    if (!r.flags.empty()) j["flags"] = r.flags;
    return j.dump(indent) + "\n";
}

std::string report_text(const Report& r) {
    std::ostringstream out;
    out << r.command << " " << r.target << " (seed " << r.seed << ", tol " << r.tolerance << ", bracket " << r.bracket
        << ")\n";
    for (const auto& c : r.checks) {
        out << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  max residual " << c.max_residual;
        if (!c.pass && !c.witness_point.empty()) {
            out << "  at (";
            for (std::size_t k = 0; k < c.witness_point.size(); ++k)
                out << (k ? ", " : "") << c.witness_point[k];
            out << ")";
        }
        if (!c.pass && !c.witness_detail.empty()) out << "  " << c.witness_detail;
        out << "\n";
    }
    for (const auto& [k, v] : r.flags) out << "  " << k << " = " << (v ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace gg
