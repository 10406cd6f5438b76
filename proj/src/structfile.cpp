#include "gg/structfile.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace gg {

namespace {

struct Line {
    int number;
    std::string text;
};

struct Section {
    std::string header;  // first word inside the brackets
    std::string name;    // optional second word
    int line;
    std::vector<Line> body;
};

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

class Builder {
public:
    Builder(StructureFile& f, const PlanOverrides& ov) : f_(f), ov_(ov) {}

    [[noreturn]] void fail(int line, const std::string& msg) const { throw FileParseError(f_.path, line, msg); }

    std::vector<Section> read(std::istream& in) {
        std::vector<Section> out;
        std::string raw;
        int n = 0;
        while (std::getline(in, raw)) {
            ++n;
            std::string t = trim(raw.substr(0, raw.find('#')));
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']') fail(n, "unterminated section header");
                auto w = words(t.substr(1, t.size() - 2));
                if (w.empty() || w.size() > 2) fail(n, "section header must be [kind] or [kind name]");
                out.push_back({w[0], w.size() == 2 ? w[1] : std::string{}, n, {}});
                continue;
            }
            if (out.empty()) fail(n, "content before the first section header");
            out.back().body.push_back({n, t});
        }
        return out;
    }

    std::pair<std::string, std::string> key_value(const Line& l) const {
        auto eq = l.text.find('=');
        if (eq == std::string::npos) fail(l.number, "expected key = value");
        std::string k = trim(std::string_view(l.text).substr(0, eq));
        std::string v = trim(std::string_view(l.text).substr(eq + 1));
        if (k.empty()) fail(l.number, "empty key");
        return {k, v};
    }

    void apply_check(const Section& s) {
        for (const Line& l : s.body) {
            auto [k, v] = key_value(l);
            try {
                if (k == "seed")
                    f_.plan.seed = std::stoull(v);
                else if (k == "points")
                    f_.plan.count = std::stoi(v);
                else if (k == "tol" || k == "tolerance")
                    f_.plan.tolerance = std::stod(v);
                else if (k == "bracket")
                    f_.bracket = v;
                else
                    fail(l.number, "unknown check key '" + k + "'");
            } catch (const std::logic_error&) {
                fail(l.number, "bad value '" + v + "' for '" + k + "'");
            }
        }
    }

    void apply_overrides() {
        if (ov_.seed) f_.plan.seed = *ov_.seed;
        if (ov_.points) f_.plan.count = *ov_.points;
        if (ov_.tolerance) f_.plan.tolerance = *ov_.tolerance;
        if (ov_.bracket) f_.bracket = *ov_.bracket;
    }

    std::vector<Interval> intervals(const Line& l, const std::string& v, std::size_t n) const {
        std::vector<Interval> out;
        for (const std::string& part : split_top(v, ',', l.number)) {
            auto w = words(part);
            if (w.size() != 2) fail(l.number, "interval must be 'lo hi'");
            try {
                out.push_back({std::stod(w[0]), std::stod(w[1])});
            } catch (const std::logic_error&) {
                fail(l.number, "bad interval '" + part + "'");
            }
        }
        if (out.size() != n) fail(l.number, "expected " + std::to_string(n) + " intervals");
        return out;
    }

    void manifold(const Section& s) {
        if (s.name.empty()) fail(s.line, "[manifold] needs a name");
        if (f_.manifolds.count(s.name)) fail(s.line, "duplicate manifold '" + s.name + "'");
        std::vector<std::string> coords, params, excl;
        std::optional<Line> box, pbox;
        for (const Line& l : s.body) {
            auto [k, v] = key_value(l);
            if (k == "coords")
                coords = words(v);
            else if (k == "params")
                params = words(v);
            else if (k == "box")
                box = Line{l.number, v};
            else if (k == "param_box")
                pbox = Line{l.number, v};
            else if (k == "exclude")
                excl.push_back(v);
            else
                fail(l.number, "unknown manifold key '" + k + "'");
        }
        if (coords.empty()) fail(s.line, "manifold '" + s.name + "' has no coords");
        if (!box) fail(s.line, "manifold '" + s.name + "' has no box");
        auto b = intervals(*box, box->text, coords.size());
        std::vector<Interval> pb;
        if (!params.empty()) {
            if (!pbox) fail(s.line, "params need a param_box");
            pb = intervals(*pbox, pbox->text, params.size());
        }
        ChartPtr c;
        try {
            c = Chart::make(s.name, coords, b, params, pb, excl);
        } catch (const std::exception& e) {
            fail(s.line, e.what());
        }
        add_table(s.name, c, s.line);
    }

    void add_table(const std::string& name, const ChartPtr& c, int line) {
        if (f_.manifolds.count(name)) fail(line, "name '" + name + "' already names a manifold");
        f_.manifolds[name].chart = c;
        f_.manifold_order.push_back(name);
    }

    SymbolTable& table(const std::string& name, int line) {
        auto it = f_.manifolds.find(name);
        if (it == f_.manifolds.end()) fail(line, "unknown manifold '" + name + "'");
        return it->second;
    }

    std::vector<std::string> split_top(const std::string& s, char sep, int line) const {
        std::vector<std::string> out;
        int depth = 0;
        std::string cur;
        for (char ch : s) {
            if (ch == '(' || ch == '[') ++depth;
            if (ch == ')' || ch == ']') --depth;
            if (depth < 0) fail(line, "unbalanced brackets");
            if (ch == sep && depth == 0) {
                out.push_back(trim(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (depth != 0) fail(line, "unbalanced brackets");
        out.push_back(trim(cur));
        return out;
    }

    std::string strip(const std::string& s, char open, char close, int line) const {
        if (s.size() < 2 || s.front() != open || s.back() != close)
            fail(line, std::string("expected ") + open + "..." + close);
        return s.substr(1, s.size() - 2);
    }

    ScalarField scalar(const ChartPtr& c, const std::string& text, int line) const {
        try {
            return parse(text, c);
        } catch (const std::exception& e) {
            fail(line, "in '" + text + "': " + e.what());
        }
    }

    std::vector<ScalarField> list(const ChartPtr& c, const std::string& v, std::size_t n, int line) const {
        auto parts = split_top(strip(v, '(', ')', line), ',', line);
        if (parts.size() != n) fail(line, "expected " + std::to_string(n) + " components");
        std::vector<ScalarField> out;
        for (const auto& p : parts) out.push_back(scalar(c, p, line));
        return out;
    }

    FieldMatrix matrix(const ChartPtr& c, const std::string& v, int line) const {
        auto rows = split_top(strip(v, '[', ']', line), ',', line);
        std::vector<std::vector<ScalarField>> m;
        for (const auto& r : rows) {
            auto cells = split_top(strip(r, '[', ']', line), ',', line);
            std::vector<ScalarField> row;
            for (const auto& x : cells) row.push_back(scalar(c, x, line));
            if (!m.empty() && row.size() != m.front().size()) fail(line, "ragged matrix");
            m.push_back(std::move(row));
        }
        FieldMatrix out(c, m.size(), m.front().size());
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m[i].size(); ++j) out(i, j) = m[i][j];
        return out;
    }

    void define(const Section& s) {
        SymbolTable& t = table(s.name, s.line);
        const ChartPtr& c = t.chart;
        std::size_t n = c->dim();
        for (const Line& l : s.body) {
            auto [lhs, v] = key_value(l);
            auto w = words(lhs);
            if (w.size() != 2) fail(l.number, "definition must read '<kind> <name> = <value>'");
            const std::string &kind = w[0], &name = w[1];
            if (defined(t, name)) fail(l.number, "'" + name + "' is already defined");
            if (kind == "scalar") {
                t.scalars[name] = scalar(c, v, l.number);
            } else if (kind == "vector") {
                t.vectors[name] = VectorField(c, list(c, v, n, l.number));
            } else if (kind == "form1") {
                t.forms[name] = KForm::one_form(c, list(c, v, n, l.number));
            } else if (kind == "form2") {
                FieldMatrix m = matrix(c, v, l.number);
                if (m.rows() != n || m.cols() != n) fail(l.number, "form2 needs an n x n matrix");
                t.forms[name] = KForm::two_form(m);
            } else if (kind == "matrix") {
                t.matrices[name] = matrix(c, v, l.number);
            } else {
                fail(l.number, "unknown definition kind '" + kind + "'");
            }
        }
    }

    static bool defined(const SymbolTable& t, const std::string& n) {
        return t.scalars.count(n) || t.vectors.count(n) || t.forms.count(n) || t.matrices.count(n);
    }

    // Lookups; "0" stands for the zero object of the requested shape.
    const SymbolTable& table_of(const ChartPtr& c) const {
        const SymbolTable* t = f_.table_for(c);
        if (!t) throw std::logic_error("chart without a symbol table");
        return *t;
    }
    FieldMatrix get_matrix(const ChartPtr& c, const std::string& name, std::size_t rows, int line) const {
        if (name == "0") return FieldMatrix::zero(c, rows, rows);
        const auto& t = table_of(c);
        auto it = t.matrices.find(name);
        if (it == t.matrices.end()) fail(line, "unknown matrix '" + name + "'");
        if (it->second.rows() != rows || it->second.cols() != rows)
            fail(line, "matrix '" + name + "' must be " + std::to_string(rows) + " x " + std::to_string(rows));
        return it->second;
    }
    VectorField get_vector(const ChartPtr& c, const std::string& name, int line) const {
        if (name == "0") return VectorField::zero(c);
        const auto& t = table_of(c);
        auto it = t.vectors.find(name);
        if (it == t.vectors.end()) fail(line, "unknown vector field '" + name + "'");
        return it->second;
    }
    KForm get_form(const ChartPtr& c, const std::string& name, int degree, int line) const {
        if (name == "0") return KForm::zero(c, degree);
        const auto& t = table_of(c);
        auto it = t.forms.find(name);
        if (it == t.forms.end()) fail(line, "unknown form '" + name + "'");
        if (it->second.degree() != degree)
            fail(line, "form '" + name + "' has degree " + std::to_string(it->second.degree()));
        return it->second;
    }
    const FileStructure& get_structure(const std::string& name, int line) const {
        for (const auto& s : f_.structures)
            if (s.name == name) return s;
        fail(line, "unknown structure '" + name + "'");
    }
    GacmsRecord get_gacms(const std::string& name, int line) const {
        const auto& s = get_structure(name, line);
        if (!s.gacms) fail(line, "structure '" + name + "' is not a generalized almost contact metric structure");
        return *s.gacms;
    }
    GacsRecord get_gacs(const std::string& name, int line) const {
        const auto& s = get_structure(name, line);
        if (!s.gacs) fail(line, "structure '" + name + "' is not a generalized almost contact structure");
        return *s.gacs;
    }
    GacxRecord get_gacx(const std::string& name, int line) const {
        const auto& s = get_structure(name, line);
        if (!s.gacx) fail(line, "structure '" + name + "' is not a generalized almost complex structure");
        return *s.gacx;
    }

    void structure(const Section& s) {
        if (s.name.empty()) fail(s.line, "[structure] needs a name");
        for (const auto& x : f_.structures)
            if (x.name == s.name) fail(s.line, "duplicate structure '" + s.name + "'");
        std::map<std::string, std::pair<std::string, int>> kv;
        for (const Line& l : s.body) {
            auto [k, v] = key_value(l);
            if (kv.count(k)) fail(l.number, "duplicate key '" + k + "'");
            kv[k] = {v, l.number};
        }
        std::set<std::string> used{"kind"};
        auto req = [&](const std::string& k) -> std::pair<std::string, int> {
            auto it = kv.find(k);
            if (it == kv.end()) fail(s.line, "structure '" + s.name + "' needs '" + k + "'");
            used.insert(k);
            return it->second;
        };
        auto opt = [&](const std::string& k, const std::string& def) -> std::pair<std::string, int> {
            auto it = kv.find(k);
            if (it == kv.end()) return {def, s.line};
            used.insert(k);
            return it->second;
        };

        FileStructure fs;
        fs.name = s.name;
        fs.line = s.line;
        fs.kind = req("kind").first;
        const SamplePlan& plan = f_.plan;
        auto on = [&]() -> ChartPtr {
            auto [m, line] = req("on");
            return table(m, line).chart;
        };
        const std::string& kind = fs.kind;

        if (kind == "almost-contact") {
            fs.chart = on();
            std::size_t n = fs.chart->dim();
            auto [phi, lp] = req("phi");
            auto [xi, lx] = req("xi");
            auto [eta, le] = req("eta");
            auto [g, lg] = req("metric");
            fs.gacms = lift_almost_contact(get_matrix(fs.chart, phi, n, lp), get_vector(fs.chart, xi, lx),
                                           get_form(fs.chart, eta, 1, le),
                                           MetricTensor(get_matrix(fs.chart, g, n, lg)), plan);
            fs.gacs = fs.gacms->gacs;
        } else if (kind == "contact") {
            fs.chart = on();
            auto [eta, le] = req("eta");
            auto [xi, lx] = req("xi");
            auto [om, lo] = opt("omega", "");
            std::optional<KForm> omega;
            if (!om.empty()) omega = get_form(fs.chart, om, 2, lo);
            fs.gacs = lift_contact(get_form(fs.chart, eta, 1, le), get_vector(fs.chart, xi, lx), plan, omega);
        } else if (kind == "gacs") {
            fs.chart = on();
            std::size_t n = fs.chart->dim();
            auto section = [&](const std::string& tag) {
                auto [v, lv] = opt(tag + "_vector", "0");
                auto [a, la] = opt(tag + "_form", "0");
                return GeneralizedSection(get_vector(fs.chart, v, lv), get_form(fs.chart, a, 1, la));
            };
            auto [phi, lp] = req("phi");
            GacsRecord g{BundleEndomorphism(get_matrix(fs.chart, phi, 2 * n, lp)), section("e_plus"),
                         section("e_minus")};
            fs.gacs = g;
            auto [cm, lc] = opt("metric", "");
            auto [gm, lg] = opt("generalized_metric", "");
            if (!cm.empty() && !gm.empty()) fail(lg, "give either metric or generalized_metric");
            if (!cm.empty()) fs.gacms = GacmsRecord{g, metric_lift(MetricTensor(get_matrix(fs.chart, cm, n, lc)), plan)};
            if (!gm.empty()) fs.gacms = GacmsRecord{g, BundleEndomorphism(get_matrix(fs.chart, gm, 2 * n, lg))};
        } else if (kind == "tilde") {
            auto [of, lo] = req("of");
            GacmsRecord m = get_gacms(of, lo);
            fs.chart = m.gacs.chart();
            fs.gacms = tilde(m);
            fs.gacs = fs.gacms->gacs;
        } else if (kind == "complex") {
            fs.chart = on();
            auto [j, lj] = req("j");
            fs.gacx = lift_complex(get_matrix(fs.chart, j, fs.chart->dim(), lj), plan);
        } else if (kind == "symplectic") {
            fs.chart = on();
            auto [w, lw] = req("omega");
            fs.gacx = lift_symplectic(get_form(fs.chart, w, 2, lw), plan);
        } else if (kind == "gacx") {
            fs.chart = on();
            auto [j, lj] = req("j");
            fs.gacx = GacxRecord{BundleEndomorphism(get_matrix(fs.chart, j, 2 * fs.chart->dim(), lj))};
        } else if (kind == "kahler-pair") {
            auto [a, la] = req("j1");
            auto [b, lb] = req("j2");
            fs.j1 = get_gacx(a, la);
            fs.j2 = get_gacx(b, lb);
            if (fs.j1->chart() != fs.j2->chart()) fail(lb, "j1 and j2 live on different manifolds");
            fs.chart = fs.j1->chart();
        } else if (kind == "product" || kind == "warp") {
            auto [a, la] = req("left");
            auto [b, lb] = req("right");
            fs.left = get_gacms(a, la);
            fs.right = get_gacms(b, lb);
            ProductChart pc = ProductChart::make(fs.left->gacs.chart(), fs.right->gacs.chart(), s.name);
            fs.product = pc;
            fs.chart = pc.chart;
            if (kind == "product") {
                fs.j1 = product_gacx(pc, fs.left->gacs, fs.right->gacs);
                fs.j2 = GacxRecord{product_metric(pc, fs.left->metric, fs.right->metric) * fs.j1->j};
            } else {
                fs.warped = true;
                try {
                    WarpResult w = warp_transform(pc, *fs.left, *fs.right, plan);
                    fs.j1 = w.j1;
                    fs.j2 = w.j2;
                } catch (const std::invalid_argument& e) {
                    fail(s.line, e.what());
                }
            }
            add_table(s.name, pc.chart, s.line);
        } else if (kind == "commutation") {
            auto [a, la] = req("left");
            auto [b, lb] = req("right");
            auto [ta, lta] = req("tilde_left");
            auto [tb, ltb] = req("tilde_right");
            fs.quad = {get_gacs(a, la), get_gacs(b, lb), get_gacs(ta, lta), get_gacs(tb, ltb)};
            if (fs.quad[0].chart() != fs.quad[2].chart() || fs.quad[1].chart() != fs.quad[3].chart())
                fail(s.line, "each tilde record must live on its factor's manifold");
            ProductChart pc = ProductChart::make(fs.quad[0].chart(), fs.quad[1].chart(), s.name);
            fs.product = pc;
            fs.chart = pc.chart;
            add_table(s.name, pc.chart, s.line);
        } else if (kind == "bfield") {
            auto [of, lo] = req("of");
            const FileStructure& src = get_structure(of, lo);
            if (src.product) fail(lo, "bfield applies to single-manifold structures");
            fs.chart = src.chart;
            auto [bn, lb] = req("b");
            KForm b = get_form(fs.chart, bn, 2, lb);
            require_closed(b, plan);
            BundleEndomorphism e = bfield(b);
            BundleEndomorphism ei = bfield(-b);
            auto conj = [&](const GacsRecord& g) {
                return GacsRecord{e * g.phi * ei, e.apply(g.e_plus), e.apply(g.e_minus)};
            };
            if (src.gacs) fs.gacs = conj(*src.gacs);
            if (src.gacms) fs.gacms = GacmsRecord{conj(src.gacms->gacs), e * src.gacms->metric * ei};
            if (src.gacx) fs.gacx = GacxRecord{e * src.gacx->j * ei};
            if (src.j1) fs.j1 = GacxRecord{e * src.j1->j * ei};
            if (src.j2) fs.j2 = GacxRecord{e * src.j2->j * ei};
        } else {
            fail(s.line, "unknown structure kind '" + kind + "'");
        }
        for (const auto& [k, v] : kv)
            if (!used.count(k)) fail(v.second, "unused key '" + k + "' for kind '" + kind + "'");
        f_.structures.push_back(std::move(fs));
    }

    void entry(const Section& s) {
        if (f_.entry) fail(s.line, "only one [entry] block is allowed");
        FileEntry e;
        e.name = s.name;
        for (const Line& l : s.body) {
            auto [k, v] = key_value(l);
            if (k == "structure") {
                e.structure = v;
            } else if (k == "name") {
                e.name = v;
            } else if (k == "expect") {
                for (const auto& w : words(v)) {
                    bool val = w.front() != '!';
                    e.expected[val ? w : w.substr(1)] = val;
                }
            } else {
                fail(l.number, "unknown entry key '" + k + "'");
            }
        }
        if (e.structure.empty()) fail(s.line, "[entry] needs 'structure'");
        get_structure(e.structure, s.line);
        if (e.name.empty()) e.name = e.structure;
        f_.entry = e;
    }

    void run(std::istream& in) {
        auto sections = read(in);
        for (const auto& s : sections)
            if (s.header == "check") apply_check(s);
        apply_overrides();
        for (const auto& s : sections) {
            if (s.header == "check") continue;
            if (s.header == "manifold")
                manifold(s);
            else if (s.header == "define")
                define(s);
            else if (s.header == "structure")
                structure(s);
            else if (s.header == "entry")
                entry(s);
            else
                fail(s.line, "unknown section [" + s.header + "]");
        }
        if (f_.structures.empty()) fail(sections.empty() ? 1 : sections.back().line, "file defines no structures");
    }

private:
    StructureFile& f_;
    const PlanOverrides& ov_;
};

}  // namespace

const FileStructure& StructureFile::structure(const std::string& name) const {
    for (const auto& s : structures)
        if (s.name == name) return s;
    throw std::out_of_range("no structure named '" + name + "'");
}

const SymbolTable* StructureFile::table_for(const ChartPtr& chart) const {
    for (const auto& [n, t] : manifolds)
        if (t.chart == chart) return &t;
    return nullptr;
}

StructureFile parse_structure_file(std::istream& in, const std::string& path, const PlanOverrides& ov) {
    StructureFile f;
    f.path = path;
    Builder(f, ov).run(in);
    return f;
}

StructureFile load_structure_file(const std::string& path, const PlanOverrides& ov) {
    std::ifstream in(path);
    if (!in) throw FileParseError(path, 0, "cannot open file");
    return parse_structure_file(in, path, ov);
}

Bracket resolve_bracket(const StructureFile& f, const std::string& spec, const ChartPtr& chart) {
    if (spec == "courant") return Bracket::courant();
    const std::string prefix = "derived:";
    if (spec.rfind(prefix, 0) != 0) throw std::invalid_argument("bracket must be 'courant' or 'derived:<one-form>'");
    std::string name = spec.substr(prefix.size());
    const SymbolTable* t = f.table_for(chart);
    if (!t) throw std::invalid_argument("no definitions for chart '" + chart->id() + "'");
    auto it = t->forms.find(name);
    if (it == t->forms.end() || it->second.degree() != 1)
        throw std::invalid_argument("no one-form '" + name + "' on '" + chart->id() + "'");
    return Bracket::derived(it->second, name);
}

CatalogEntry entry_from_file(const StructureFile& f) {
    if (!f.entry) throw CatalogError(f.path + ": no [entry] block");
    const FileStructure& s = f.structure(f.entry->structure);
    CatalogEntry e;
    e.name = f.entry->name;
    e.description = "loaded from " + f.path;
    e.chart = s.chart;
    e.gacs = s.gacs;
    e.gacms = s.gacms;
    if (s.gacx) e.j1 = s.gacx;
    if (s.j1) e.j1 = s.j1;
    if (s.j2) e.j2 = s.j2;
    e.product = s.product;
    e.left = s.left;
    e.right = s.right;
    e.warped = s.warped;
    e.expected = f.entry->expected;
    return e;
}

}  // namespace gg
