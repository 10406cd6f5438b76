#include "gg/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace gg {

// ---------------------------------------------------------------------------
// Node construction with light simplification (constant folding, 0/1 rules).

namespace {

NodePtr make_const(Complex c) {
    // Canonical signed zero so that printing and equality ignore its sign.
    if (c.real() == 0.0) c.real(0.0);
    if (c.imag() == 0.0) c.imag(0.0);
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = c;
    return n;
}

NodePtr make_var(int index) {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->var = index;
    return n;
}

bool is_const(const NodePtr& n) { return n->op == Op::Const; }
bool is_const(const NodePtr& n, Complex c) { return n->op == Op::Const && n->value == c; }

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr make_unary(Op op, NodePtr a, int exponent = 0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->exponent = exponent;
    return n;
}

Complex ipow(Complex base, int e) {
    if (e < 0) {
        if (base == Complex(0.0)) throw EvalError("division by zero");
        return Complex(1.0) / ipow(base, -e);
    }
    Complex result(1.0);
    while (e > 0) {
        if (e & 1) result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

Complex apply_fn(Op op, Complex a) {
    switch (op) {
        case Op::Exp: return std::exp(a);
        case Op::Sin: return std::sin(a);
        case Op::Cos: return std::cos(a);
        case Op::Sinh: return std::sinh(a);
        case Op::Cosh: return std::cosh(a);
        default: throw std::logic_error("not a function op");
    }
}

// Structural equality with a visit budget; false when the budget runs out.
bool same_tree(const Node* a, const Node* b, int& budget) {
    if (a == b) return true;
    if (!a || !b || --budget < 0) return false;
    if (a->op != b->op || a->var != b->var || a->exponent != b->exponent || a->value != b->value)
        return false;
    return same_tree(a->lhs.get(), b->lhs.get(), budget) && same_tree(a->rhs.get(), b->rhs.get(), budget);
}

bool same_tree(const NodePtr& a, const NodePtr& b) {
    int budget = 256;
    return same_tree(a.get(), b.get(), budget);
}

NodePtr n_sub(const NodePtr& a, const NodePtr& b);

NodePtr n_neg(const NodePtr& a) {
    if (is_const(a)) return make_const(-a->value);
    if (a->op == Op::Neg) return a->lhs;
    return make_unary(Op::Neg, a);
}

NodePtr n_add(const NodePtr& a, const NodePtr& b) {
    if (is_const(a) && is_const(b)) return make_const(a->value + b->value);
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (b->op == Op::Neg) return n_sub(a, b->lhs);
    if (a->op == Op::Neg) return n_sub(b, a->lhs);
    return make_binary(Op::Add, a, b);
}

NodePtr n_sub(const NodePtr& a, const NodePtr& b) {
    if (same_tree(a, b)) return make_const(0.0);
    if (is_const(a) && is_const(b)) return make_const(a->value - b->value);
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return n_neg(b);
    if (b->op == Op::Neg) return make_binary(Op::Add, a, b->lhs);
    return make_binary(Op::Sub, a, b);
}

NodePtr n_mul(const NodePtr& a, const NodePtr& b) {
    if (is_const(a) && is_const(b)) return make_const(a->value * b->value);
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (is_const(a, -1.0)) return n_neg(b);
    if (is_const(b, -1.0)) return n_neg(a);
    if (a->op == Op::Neg && b->op == Op::Neg) return make_binary(Op::Mul, a->lhs, b->lhs);
    if (a->op == Op::Neg) return n_neg(make_binary(Op::Mul, a->lhs, b));
    if (b->op == Op::Neg) return n_neg(make_binary(Op::Mul, a, b->lhs));
    return make_binary(Op::Mul, a, b);
}

NodePtr n_div(const NodePtr& a, const NodePtr& b) {
    if (is_const(a) && is_const(b) && b->value != Complex(0.0))
        return make_const(a->value / b->value);
    if (is_const(b, 1.0)) return a;
    if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_const(0.0);
    return make_binary(Op::Div, a, b);
}

NodePtr n_pow(const NodePtr& a, int e) {
    if (e == 0) return make_const(1.0);
    if (e == 1) return a;
    if (is_const(a) && !(e < 0 && a->value == Complex(0.0))) return make_const(ipow(a->value, e));
    return make_unary(Op::Pow, a, e);
}

NodePtr n_fn(Op op, const NodePtr& a) {
    if (is_const(a)) return make_const(apply_fn(op, a->value));
    return make_unary(op, a);
}

void require_same_chart(const ScalarField& a, const ScalarField& b) {
    if (a.chart() == b.chart()) return;
    if (!a.chart() || !b.chart() || a.chart()->id() != b.chart()->id() ||
        a.chart()->vars() != b.chart()->vars())
        throw ChartMismatchError("scalar fields live on different charts: '" +
                                 (a.chart() ? a.chart()->id() : std::string("?")) + "' vs '" +
                                 (b.chart() ? b.chart()->id() : std::string("?")) + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// Chart and sampling

ChartPtr Chart::make(std::string id, std::vector<std::string> coords, std::vector<Interval> domain,
                     std::vector<std::string> params, std::vector<Interval> param_domain,
                     const std::vector<std::string>& exclusions) {
    if (coords.empty()) throw std::invalid_argument("chart '" + id + "' needs at least one coordinate");
    if (domain.size() != coords.size())
        throw std::invalid_argument("chart '" + id + "': one domain interval per coordinate required");
    if (param_domain.size() != params.size())
        throw std::invalid_argument("chart '" + id + "': one domain interval per parameter required");
    std::shared_ptr<Chart> chart(new Chart());
    chart->id_ = std::move(id);
    chart->coords_ = std::move(coords);
    chart->params_ = std::move(params);
    chart->vars_ = chart->coords_;
    chart->vars_.insert(chart->vars_.end(), chart->params_.begin(), chart->params_.end());
    chart->box_ = std::move(domain);
    chart->box_.insert(chart->box_.end(), param_domain.begin(), param_domain.end());

    std::set<std::string> seen;
    for (const auto& v : chart->vars_) {
        if (v == "i" || v == "exp" || v == "sin" || v == "cos" || v == "sinh" || v == "cosh")
            throw std::invalid_argument("reserved name used as coordinate: '" + v + "'");
        if (!seen.insert(v).second)
            throw std::invalid_argument("duplicate coordinate name '" + v + "' in chart '" + chart->id_ + "'");
    }
    for (const auto& iv : chart->box_) {
        if (!(iv.hi > iv.lo)) throw std::invalid_argument("chart '" + chart->id_ + "': sample domain has zero volume");
    }
    ChartPtr frozen = chart;
    for (const auto& text : exclusions) {
        chart->exclusion_texts_.push_back(text);
        chart->exclusions_.push_back(parse(text, frozen).node());
    }
    return frozen;
}

int Chart::var_index(std::string_view name) const {
    for (std::size_t k = 0; k < vars_.size(); ++k)
        if (vars_[k] == name) return static_cast<int>(k);
    return -1;
}

std::vector<Point> sample_points(const Chart& chart, const SamplePlan& plan) {
    if (plan.count <= 0) throw std::invalid_argument("sample plan needs a positive point count");
    std::vector<ScalarField> excl;
    // Exclusion nodes were parsed against this chart; rebuild fields without
    // owning a second reference cycle.
    ChartPtr alias(std::shared_ptr<const Chart>(), &chart);
    for (const auto& n : chart.exclusions_) excl.emplace_back(alias, n);
    Tape tape(excl);

    std::uint64_t state = plan.seed;
    // splitmix64: fixed, platform-independent stream.
    auto next = [&state]() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    auto uniform = [&next]() { return static_cast<double>(next() >> 11) * 0x1.0p-53; };

    std::vector<Point> points;
    points.reserve(static_cast<std::size_t>(plan.count));
    std::vector<Complex> vals;
    const int max_attempts = 1000 * plan.count;
    for (int attempt = 0; attempt < max_attempts && static_cast<int>(points.size()) < plan.count; ++attempt) {
        Point p(chart.num_vars());
        for (std::size_t k = 0; k < p.size(); ++k) {
            const auto& iv = chart.box_[k];
            p[k] = iv.lo + uniform() * (iv.hi - iv.lo);
        }
        bool ok = true;
        if (tape.size() > 0) {
            try {
                tape.evaluate(p, vals);
                for (const auto& v : vals)
                    if (std::abs(v) < 1e-6) ok = false;
            } catch (const EvalError&) {
                ok = false;
            }
        }
        if (ok) points.push_back(std::move(p));
    }
    if (static_cast<int>(points.size()) < plan.count)
        throw std::runtime_error("chart '" + chart.id() + "': exclusions reject the whole sample domain");
    return points;
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(ChartPtr chart, NodePtr node) : chart_(std::move(chart)), node_(std::move(node)) {}

ScalarField ScalarField::constant(ChartPtr chart, Complex c) { return {std::move(chart), make_const(c)}; }

ScalarField ScalarField::variable(ChartPtr chart, std::string_view name) {
    int idx = chart->var_index(name);
    if (idx < 0) throw UnknownVariableError(std::string(name));
    return {std::move(chart), make_var(idx)};
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    require_same_chart(a, b);
    return {a.chart(), n_add(a.node(), b.node())};
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    require_same_chart(a, b);
    return {a.chart(), n_sub(a.node(), b.node())};
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    require_same_chart(a, b);
    return {a.chart(), n_mul(a.node(), b.node())};
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
    require_same_chart(a, b);
    return {a.chart(), n_div(a.node(), b.node())};
}
ScalarField operator-(const ScalarField& a) { return {a.chart(), n_neg(a.node())}; }
ScalarField operator*(Complex c, const ScalarField& a) { return {a.chart(), n_mul(make_const(c), a.node())}; }

ScalarField pow(const ScalarField& f, int exponent) { return {f.chart(), n_pow(f.node(), exponent)}; }
ScalarField exp(const ScalarField& f) { return {f.chart(), n_fn(Op::Exp, f.node())}; }
ScalarField sin(const ScalarField& f) { return {f.chart(), n_fn(Op::Sin, f.node())}; }
ScalarField cos(const ScalarField& f) { return {f.chart(), n_fn(Op::Cos, f.node())}; }
ScalarField sinh(const ScalarField& f) { return {f.chart(), n_fn(Op::Sinh, f.node())}; }
ScalarField cosh(const ScalarField& f) { return {f.chart(), n_fn(Op::Cosh, f.node())}; }

// ---------------------------------------------------------------------------
// Differentiation (memoized on the DAG so shared subtrees stay shared)

namespace {

NodePtr derive(const NodePtr& n, int var, std::unordered_map<const Node*, NodePtr>& memo) {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    NodePtr r;
    switch (n->op) {
        case Op::Const: r = make_const(0.0); break;
        case Op::Var: r = make_const(n->var == var ? 1.0 : 0.0); break;
        case Op::Add: r = n_add(derive(n->lhs, var, memo), derive(n->rhs, var, memo)); break;
        case Op::Sub: r = n_sub(derive(n->lhs, var, memo), derive(n->rhs, var, memo)); break;
        case Op::Mul:
            r = n_add(n_mul(derive(n->lhs, var, memo), n->rhs), n_mul(n->lhs, derive(n->rhs, var, memo)));
            break;
        case Op::Div: {
            NodePtr da = derive(n->lhs, var, memo);
            NodePtr db = derive(n->rhs, var, memo);
            if (is_const(db, 0.0)) {
                r = n_div(da, n->rhs);
            } else {
                r = n_div(n_sub(n_mul(da, n->rhs), n_mul(n->lhs, db)), n_pow(n->rhs, 2));
            }
            break;
        }
        case Op::Neg: r = n_neg(derive(n->lhs, var, memo)); break;
        case Op::Pow:
            r = n_mul(n_mul(make_const(static_cast<double>(n->exponent)), n_pow(n->lhs, n->exponent - 1)),
                      derive(n->lhs, var, memo));
            break;
        case Op::Exp: r = n_mul(n, derive(n->lhs, var, memo)); break;
        case Op::Sin: r = n_mul(n_fn(Op::Cos, n->lhs), derive(n->lhs, var, memo)); break;
        case Op::Cos: r = n_neg(n_mul(n_fn(Op::Sin, n->lhs), derive(n->lhs, var, memo))); break;
        case Op::Sinh: r = n_mul(n_fn(Op::Cosh, n->lhs), derive(n->lhs, var, memo)); break;
        case Op::Cosh: r = n_mul(n_fn(Op::Sinh, n->lhs), derive(n->lhs, var, memo)); break;
    }
    memo.emplace(n.get(), r);
    return r;
}

}  // namespace

ScalarField ScalarField::differentiate(int var_index) const {
    if (var_index < 0 || static_cast<std::size_t>(var_index) >= chart_->num_vars())
        throw UnknownVariableError("#" + std::to_string(var_index));
    std::unordered_map<const Node*, NodePtr> memo;
    return {chart_, derive(node_, var_index, memo)};
}

ScalarField ScalarField::differentiate(std::string_view var) const {
    int idx = chart_->var_index(var);
    if (idx < 0) throw UnknownVariableError(std::string(var));
    return differentiate(idx);
}

ScalarField differentiate(const ScalarField& f, std::string_view coord) { return f.differentiate(coord); }

// ---------------------------------------------------------------------------
// Evaluation

Tape::Tape(const std::vector<ScalarField>& outputs) {
    std::unordered_map<const Node*, int> slot;
    std::function<int(const NodePtr&)> emit = [&](const NodePtr& n) -> int {
        if (auto it = slot.find(n.get()); it != slot.end()) return it->second;
        Instr ins{n->op};
        if (n->lhs) ins.a = emit(n->lhs);
        if (n->rhs) ins.b = emit(n->rhs);
        ins.exponent = n->exponent;
        ins.var = n->var;
        ins.value = n->value;
        code_.push_back(ins);
        int id = static_cast<int>(code_.size()) - 1;
        slot.emplace(n.get(), id);
        return id;
    };
    outputs_.reserve(outputs.size());
    for (const auto& f : outputs) outputs_.push_back(emit(f.node()));
}

void Tape::evaluate(std::span<const double> point, std::vector<Complex>& out) const {
    std::vector<Complex> regs(code_.size());
    for (std::size_t k = 0; k < code_.size(); ++k) {
        const Instr& ins = code_[k];
        switch (ins.op) {
            case Op::Const: regs[k] = ins.value; break;
            case Op::Var:
                if (static_cast<std::size_t>(ins.var) >= point.size())
                    throw EvalError("point has too few coordinates");
                regs[k] = point[static_cast<std::size_t>(ins.var)];
                break;
            case Op::Add: regs[k] = regs[ins.a] + regs[ins.b]; break;
            case Op::Sub: regs[k] = regs[ins.a] - regs[ins.b]; break;
            case Op::Mul: regs[k] = regs[ins.a] * regs[ins.b]; break;
            case Op::Div:
                if (regs[ins.b] == Complex(0.0)) throw EvalError("division by zero");
                regs[k] = regs[ins.a] / regs[ins.b];
                break;
            case Op::Neg: regs[k] = -regs[ins.a]; break;
            case Op::Pow: regs[k] = ipow(regs[ins.a], ins.exponent); break;
            default: regs[k] = apply_fn(ins.op, regs[ins.a]); break;
        }
    }
    out.resize(outputs_.size());
    for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = regs[outputs_[k]];
}

std::vector<Complex> Tape::evaluate(std::span<const double> point) const {
    std::vector<Complex> out;
    evaluate(point, out);
    return out;
}

Complex ScalarField::evaluate(std::span<const double> point) const {
    if (point.size() != chart_->num_vars())
        throw EvalError("point has " + std::to_string(point.size()) + " values, chart '" + chart_->id() +
                        "' has " + std::to_string(chart_->num_vars()) + " variables");
    return Tape({*this}).evaluate(point)[0];
}

Complex evaluate(const ScalarField& f, std::span<const double> point) { return f.evaluate(point); }

// ---------------------------------------------------------------------------
// Remapping and size

ScalarField remap(const ScalarField& f, const ChartPtr& target) {
    std::vector<int> map(f.chart()->num_vars());
    for (std::size_t k = 0; k < map.size(); ++k) {
        map[k] = target->var_index(f.chart()->vars()[k]);
    }
    std::unordered_map<const Node*, NodePtr> memo;
    std::function<NodePtr(const NodePtr&)> go = [&](const NodePtr& n) -> NodePtr {
        if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
        NodePtr r;
        switch (n->op) {
            case Op::Const: r = n; break;
            case Op::Var: {
                int idx = map[static_cast<std::size_t>(n->var)];
                if (idx < 0) throw UnknownVariableError(f.chart()->vars()[static_cast<std::size_t>(n->var)]);
                r = make_var(idx);
                break;
            }
            case Op::Add: r = n_add(go(n->lhs), go(n->rhs)); break;
            case Op::Sub: r = n_sub(go(n->lhs), go(n->rhs)); break;
            case Op::Mul: r = n_mul(go(n->lhs), go(n->rhs)); break;
            case Op::Div: r = n_div(go(n->lhs), go(n->rhs)); break;
            case Op::Neg: r = n_neg(go(n->lhs)); break;
            case Op::Pow: r = n_pow(go(n->lhs), n->exponent); break;
            default: r = n_fn(n->op, go(n->lhs)); break;
        }
        memo.emplace(n.get(), r);
        return r;
    };
    return {target, go(f.node())};
}

std::size_t dag_size(const ScalarField& f) {
    std::unordered_set<const Node*> seen;
    std::vector<const Node*> stack{f.node().get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n->lhs) stack.push_back(n->lhs.get());
        if (n->rhs) stack.push_back(n->rhs.get());
    }
    return seen.size();
}

// ---------------------------------------------------------------------------
// Printing. Precedence: 1 additive, 2 multiplicative, 3 unary minus, 4 power,
// 5 atom. Right operands of binary ops are parenthesized at equal precedence
// so the printed text reparses to the same tree.

namespace {

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // Keep exact round trip while preferring the short form when it is exact.
    for (int prec = 1; prec < 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) {
            s = buf;
            break;
        }
    }
    return s;
}

struct Printed {
    std::string text;
    int prec;
};

Printed print_const(Complex c) {
    const double re = c.real();
    const double im = c.imag();
    if (im == 0.0) {
        if (re < 0 || (re == 0.0 && std::signbit(re))) return {"-" + fmt_real(-re), 3};
        return {fmt_real(re), 5};
    }
    if (re == 0.0) {
        if (im == 1.0) return {"i", 5};
        if (im == -1.0) return {"-i", 3};
        if (im < 0) return {"-" + fmt_real(-im) + "*i", 2};
        return {fmt_real(im) + "*i", 2};
    }
    std::string s = "(" + (re < 0 ? "-" + fmt_real(-re) : fmt_real(re));
    s += im < 0 ? " - " + fmt_real(-im) : " + " + fmt_real(im);
    s += "*i)";
    return {s, 5};
}

Printed print_node(const NodePtr& n, const Chart& chart) {
    auto wrap = [](const Printed& p, bool need) { return need ? "(" + p.text + ")" : p.text; };
    switch (n->op) {
        case Op::Const: return print_const(n->value);
        case Op::Var: return {chart.vars()[static_cast<std::size_t>(n->var)], 5};
        case Op::Add:
        case Op::Sub: {
            Printed a = print_node(n->lhs, chart);
            Printed b = print_node(n->rhs, chart);
            return {wrap(a, a.prec < 1) + (n->op == Op::Add ? " + " : " - ") + wrap(b, b.prec <= 1), 1};
        }
        case Op::Mul:
        case Op::Div: {
            Printed a = print_node(n->lhs, chart);
            Printed b = print_node(n->rhs, chart);
            return {wrap(a, a.prec < 2) + (n->op == Op::Mul ? "*" : "/") + wrap(b, b.prec <= 2), 2};
        }
        case Op::Neg: {
            Printed a = print_node(n->lhs, chart);
            return {"-" + wrap(a, a.prec < 3), 3};
        }
        case Op::Pow: {
            Printed a = print_node(n->lhs, chart);
            return {wrap(a, a.prec < 5) + "^" + std::to_string(n->exponent), 4};
        }
        default: {
            static const char* names[] = {"exp", "sin", "cos", "sinh", "cosh"};
            const char* name = names[static_cast<int>(n->op) - static_cast<int>(Op::Exp)];
            return {std::string(name) + "(" + print_node(n->lhs, chart).text + ")", 5};
        }
    }
}

}  // namespace

std::string print(const ScalarField& f) { return print_node(f.node(), *f.chart()).text; }
std::string ScalarField::to_string() const { return print(*this); }

// ---------------------------------------------------------------------------
// Parser (recursive descent over the documented grammar, plus unary minus
// and exponent-form number literals).

namespace {

class Parser {
public:
    Parser(std::string_view text, const ChartPtr& chart) : text_(text), chart_(chart) {}

    NodePtr run() {
        skip_ws();
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = n_add(lhs, term());
            else if (accept('-')) lhs = n_sub(lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (accept('*')) lhs = n_mul(lhs, factor());
            else if (accept('/')) lhs = n_div(lhs, factor());
            else return lhs;
        }
    }

    NodePtr factor() {
        if (accept('-')) return n_neg(factor());
        NodePtr b = base();
        if (accept('^')) {
            skip_ws();
            bool negative = false;
            if (pos_ < text_.size() && text_[pos_] == '-') {
                negative = true;
                ++pos_;
            }
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) fail("expected integer exponent");
            int e = std::stoi(std::string(text_.substr(start, pos_ - start)));
            return n_pow(b, negative ? -e : e);
        }
        return b;
    }

    NodePtr base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '(') {
                Op op;
                if (name == "exp") op = Op::Exp;
                else if (name == "sin") op = Op::Sin;
                else if (name == "cos") op = Op::Cos;
                else if (name == "sinh") op = Op::Sinh;
                else if (name == "cosh") op = Op::Cosh;
                else {
                    pos_ = start;
                    fail("unknown function '" + name + "'");
                }
                ++pos_;
                NodePtr arg = expr();
                if (!accept(')')) fail("expected ')'");
                return n_fn(op, arg);
            }
            if (name == "i") return make_const(Complex(0.0, 1.0));
            int idx = chart_->var_index(name);
            if (idx < 0) throw UnknownVariableError(name);
            return make_var(idx);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        std::string lit(text_.substr(start, pos_ - start));
        if (lit == ".") {
            pos_ = start;
            fail("malformed number");
        }
        return make_const(std::strtod(lit.c_str(), nullptr));
    }

    std::string_view text_;
    const ChartPtr& chart_;
    std::size_t pos_ = 0;
};

}  // namespace

ScalarField parse(std::string_view text, const ChartPtr& chart) {
    Parser p(text, chart);
    return {chart, p.run()};
}

}  // namespace gg
