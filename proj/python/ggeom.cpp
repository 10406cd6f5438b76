#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gg/cli.hpp"

namespace py = pybind11;
using namespace gg;

// pybind11 holders cannot hold const types; charts are immutable after make().
using MutChartPtr = std::shared_ptr<Chart>;

namespace pybind11::detail {
template <>
struct type_caster<ChartPtr> {
    PYBIND11_TYPE_CASTER(ChartPtr, const_name("Chart"));
    bool load(handle src, bool convert) {
        copyable_holder_caster<Chart, MutChartPtr> inner;
        if (!inner.load(src, convert)) return false;
        value = static_cast<MutChartPtr>(inner);
        return true;
    }
    static handle cast(const ChartPtr& src, return_value_policy, handle) {
        return type_caster<MutChartPtr>::cast(std::const_pointer_cast<Chart>(src), return_value_policy::take_ownership,
                                              handle());
    }
};
}  // namespace pybind11::detail

namespace {

SamplePlan make_plan(std::uint64_t seed, int points, double tol) { return SamplePlan{seed, points, tol}; }

Bracket make_bracket(const ChartPtr& chart, const std::string& spec) {
    if (spec == "courant") return Bracket::courant();
    // "derived:<expr>,<expr>,..." gives the one-form components directly.
    const std::string prefix = "derived:";
    if (spec.rfind(prefix, 0) != 0) throw py::value_error("bracket must be 'courant' or 'derived:<c1>,<c2>,...'");
    std::vector<std::string> comps;
    std::string cur;
    for (char ch : spec.substr(prefix.size())) {
        if (ch == ',') {
            comps.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    comps.push_back(cur);
    if (comps.size() != chart->dim()) throw py::value_error("derived bracket needs one component per coordinate");
    return Bracket::derived(KForm::one_form(chart, comps), spec.substr(prefix.size()));
}

py::dict classification_dict(const Classification& c) {
    py::dict d;
    d["contact"] = c.contact;
    d["strong"] = c.strong;
    d["normal"] = c.normal;
    d["label"] = c.label();
    d["l_plus"] = c.l_plus;
    d["l_minus"] = c.l_minus;
    d["e_bracket"] = c.e_bracket;
    return d;
}

}  // namespace

PYBIND11_MODULE(ggeom, m) {
    m.doc() = "Generalized contact and complex structures: symbolic calculus and sampled checks";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<FileParseError>(m, "FileParseError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<CatalogError>(m, "CatalogError", PyExc_KeyError);
    py::register_exception<NonClosedFormError>(m, "NonClosedFormError", PyExc_ValueError);
    py::register_exception<ClassicalPreconditionError>(m, "ClassicalPreconditionError", PyExc_ValueError);

    py::class_<Chart, MutChartPtr>(m, "Chart")
        .def(py::init([](std::string id, std::vector<std::string> coords, std::vector<std::pair<double, double>> box,
                         std::vector<std::string> params, std::vector<std::pair<double, double>> pbox,
                         std::vector<std::string> exclusions) {
                 std::vector<Interval> b, pb;
                 for (auto [lo, hi] : box) b.push_back({lo, hi});
                 for (auto [lo, hi] : pbox) pb.push_back({lo, hi});
                 return std::const_pointer_cast<Chart>(
                     Chart::make(std::move(id), std::move(coords), b, std::move(params), pb, exclusions));
             }),
             py::arg("id"), py::arg("coords"), py::arg("box"), py::arg("params") = std::vector<std::string>{},
             py::arg("param_box") = std::vector<std::pair<double, double>>{},
             py::arg("exclusions") = std::vector<std::string>{})
        .def_property_readonly("id", &Chart::id)
        .def_property_readonly("dim", &Chart::dim)
        .def_property_readonly("coords", &Chart::coords)
        .def_property_readonly("vars", &Chart::vars)
        .def("sample_points", [](const Chart& c, std::uint64_t seed, int points) {
            return sample_points(c, make_plan(seed, points, 1e-9));
        }, py::arg("seed") = 42, py::arg("points") = 20);

    py::class_<ScalarField>(m, "ScalarField")
        .def("evaluate", [](const ScalarField& f, const std::vector<double>& p) { return f.evaluate(p); })
        .def("differentiate", py::overload_cast<std::string_view>(&ScalarField::differentiate, py::const_))
        .def("__str__", [](const ScalarField& f) { return print(f); })
        .def("__repr__", [](const ScalarField& f) { return "ScalarField(" + print(f) + ")"; });

    m.def("parse", &parse, py::arg("text"), py::arg("chart"));

    py::class_<VectorField>(m, "VectorField")
        .def(py::init([](const ChartPtr& c, const std::vector<std::string>& comps) {
                 return VectorField::from_strings(c, comps);
             }),
             py::arg("chart"), py::arg("components"))
        .def("evaluate", [](const VectorField& v, const std::vector<double>& p) { return v.evaluate(p); });

    py::class_<KForm>(m, "Form")
        .def_static("one_form", [](const ChartPtr& c, const std::vector<std::string>& comps) {
            return KForm::one_form(c, comps);
        })
        .def_static("coordinate", &KForm::coordinate)
        .def_property_readonly("degree", &KForm::degree)
        .def("is_zero", &KForm::is_zero)
        .def("evaluate", [](const KForm& w, const std::vector<double>& p) { return w.evaluate(p); });

    m.def("d", &exterior_derivative, "exterior derivative");
    m.def("wedge", &wedge);
    m.def("interior_product", &interior_product);
    m.def("lie_bracket", &lie_bracket);
    m.def("lie_derivative", py::overload_cast<const VectorField&, const KForm&>(&lie_derivative));

    py::class_<GeneralizedSection>(m, "Section")
        .def(py::init<VectorField, KForm>(), py::arg("vector"), py::arg("form"))
        .def("evaluate", [](const GeneralizedSection& s, const std::vector<double>& p) { return s.evaluate(p); });
    m.def("pairing", [](const GeneralizedSection& a, const GeneralizedSection& b, const std::vector<double>& p) {
        return pairing(a, b).evaluate(p);
    });
    m.def("courant_bracket", &courant_bracket);

    py::class_<BundleEndomorphism>(m, "Endomorphism")
        .def("evaluate", [](const BundleEndomorphism& e, const std::vector<double>& p) { return e.evaluate(p); });

    py::class_<CheckReport>(m, "CheckReport")
        .def_readonly("name", &CheckReport::name)
        .def_readonly("passed", &CheckReport::pass)
        .def_readonly("max_residual", &CheckReport::max_residual)
        .def_readonly("tolerance", &CheckReport::tolerance)
        .def_readonly("witness_point", &CheckReport::witness_point)
        .def_readonly("witness_detail", &CheckReport::witness_detail)
        .def_readonly("parts", &CheckReport::parts)
        .def("find", [](const CheckReport& r, const std::string& n) -> std::optional<CheckReport> {
            const CheckReport* p = r.find(n);
            if (!p) return std::nullopt;
            return *p;
        })
        .def("__bool__", [](const CheckReport& r) { return r.pass; })
        .def("__repr__", [](const CheckReport& r) {
            return "<CheckReport " + r.name + ": " + (r.pass ? "pass" : "fail") + ", max residual " +
                   std::to_string(r.max_residual) + ">";
        });

    py::class_<CatalogEntry>(m, "CatalogEntry")
        .def_readonly("name", &CatalogEntry::name)
        .def_readonly("description", &CatalogEntry::description)
        .def_readonly("chart", &CatalogEntry::chart)
        .def_readonly("expected", &CatalogEntry::expected)
        .def_property_readonly("phi", [](const CatalogEntry& e) -> std::optional<BundleEndomorphism> {
            if (!e.gacs) return std::nullopt;
            return e.gacs->phi;
        })
        .def_property_readonly("metric", [](const CatalogEntry& e) -> std::optional<BundleEndomorphism> {
            if (!e.gacms) return std::nullopt;
            return e.gacms->metric;
        })
        .def_property_readonly("j1", [](const CatalogEntry& e) -> std::optional<BundleEndomorphism> {
            if (!e.j1) return std::nullopt;
            return e.j1->j;
        })
        .def_property_readonly("j2", [](const CatalogEntry& e) -> std::optional<BundleEndomorphism> {
            if (!e.j2) return std::nullopt;
            return e.j2->j;
        });

    py::class_<EntryRun>(m, "EntryRun")
        .def_readonly("axioms", &EntryRun::axioms)
        .def_readonly("flags", &EntryRun::flags)
        .def_readonly("checks", &EntryRun::checks)
        .def_readonly("matches_expected", &EntryRun::matches_expected);

    m.def("catalog_names", &catalog_names);
    m.def("load_entry", [](const std::string& name, std::uint64_t seed, int points, double tol) {
        return load_entry(name, make_plan(seed, points, tol));
    }, py::arg("name"), py::arg("seed") = 42, py::arg("points") = 20, py::arg("tol") = 1e-9);
    m.def("load_file_entry", [](const std::string& path) { return entry_from_file(load_structure_file(path)); },
          py::arg("path"));
    m.def("run_entry", [](const CatalogEntry& e, std::uint64_t seed, int points, double tol) {
        return run_entry(e, make_plan(seed, points, tol));
    }, py::arg("entry"), py::arg("seed") = 42, py::arg("points") = 20, py::arg("tol") = 1e-9);

    m.def("classify", [](const CatalogEntry& e, const std::string& bracket, std::uint64_t seed, int points, double tol) {
        if (!e.gacs) throw py::value_error("entry '" + e.name + "' has no generalized almost contact structure");
        return classification_dict(classify_gacs(*e.gacs, make_bracket(e.chart, bracket), make_plan(seed, points, tol)));
    }, py::arg("entry"), py::arg("bracket") = "courant", py::arg("seed") = 42, py::arg("points") = 20,
          py::arg("tol") = 1e-9);

    m.def("check_kahler", [](const CatalogEntry& e, std::uint64_t seed, int points, double tol) {
        if (!e.j1 || !e.j2) throw py::value_error("entry '" + e.name + "' has no structure pair");
        return check_generalized_kahler(*e.j1, *e.j2, Bracket::courant(), make_plan(seed, points, tol));
    }, py::arg("entry"), py::arg("seed") = 42, py::arg("points") = 20, py::arg("tol") = 1e-9);

    m.def("commutation_trials", [](int count, std::uint64_t seed) {
        py::list out;
        for (const auto& t : theorem1_trials(count, seed)) {
            py::dict d;
            d["kind"] = to_string(t.kind);
            d["factors"] = t.factors;
            d["commute"] = t.result.commute;
            d["stated_condition"] = t.result.stated_condition;
            d["per_factor_condition"] = t.result.relabel_condition;
            d["commutator_norm"] = t.result.commutator_norm;
            out.append(d);
        }
        return out;
    }, py::arg("count") = 20, py::arg("seed") = 42);

    m.def("run_command", [](const std::string& command, const std::string& target, std::optional<std::uint64_t> seed,
                            std::optional<int> points, std::optional<double> tol, std::optional<std::string> bracket) {
        PlanOverrides ov{seed, points, tol, bracket};
        RunResult r = run_command(command, target, ov);
        return py::make_tuple(r.exit_code, report_json(r.report));
    }, py::arg("command"), py::arg("target"), py::arg("seed") = py::none(), py::arg("points") = py::none(),
          py::arg("tol") = py::none(), py::arg("bracket") = py::none(),
          "Returns (exit_code, json_report).");
}
